"""Disc approximation of entire curves by dictionary elements.

Pipeline: rescale a reduced representation so the coordinate vector has norm
>= 1 on the target disc, truncate each component's Taylor series under its
stated coefficient majorant, round the coefficients to Gaussian rationals on a
power-of-two grid, then bump deg p0 above every other degree by the factor
(z+M)^Q / M^Q with M large enough to keep the sup perturbation inside budget.

The angle budget: a perturbation b of a vector a with ||a|| >= 1 and
||b - a|| <= mu = sin(eps)/2 has sin(angle) <= mu/(1-mu) < sin(eps), so the
Fubini-Study distance stays strictly below eps.  The total coordinate budget
mu/sqrt(n+1) is split 1/4 truncation + 1/4 rounding + 1/2 degree bump.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import GPoly, GaussianRational, MINUS_INFINITY
from .projective import fs_distance
from .rcurve import RationalCurve


class RungeError(RuntimeError):
    pass


class MajorantError(RungeError):
    """The stated coefficient majorant cannot push the tail under budget."""


class GridCheckError(RungeError):
    def __init__(self, msg, worst_z=None, worst_value=None):
        super().__init__(msg)
        self.worst_z = worst_z
        self.worst_value = worst_value


def mu_for_epsilon(eps: float) -> float:
    """Perturbation radius guaranteeing fs_distance < eps for unit-or-larger
    base vectors; eps in (0, pi/2]."""
    if not 0.0 < eps <= math.pi / 2:
        raise ValueError(f"eps must lie in (0, pi/2], got {eps}")
    return math.sin(eps) / 2.0


class TaylorComponent:
    """One entire coordinate function, given by Taylor data at 0.

    Subclasses provide coeff(d), a majorant M(d) >= |coeff(d)|, and a sound
    tail bound sum_{k>d} M(k) R^k.  value(z) defaults to majorant-controlled
    series summation.
    """

    def coeff(self, d: int) -> complex:
        raise NotImplementedError

    def majorant(self, d: int) -> float:
        raise NotImplementedError

    def tail_bound(self, d: int, radius: float) -> float:
        raise NotImplementedError

    def value(self, z: complex) -> complex:
        total = 0j
        zp = 1.0 + 0j
        d = 0
        while True:
            total += self.coeff(d) * zp
            if self.tail_bound(d, abs(z) + 1e-12) < 1e-16 * (1.0 + abs(total)):
                return total
            zp *= z
            d += 1
            if d > 100000:
                raise MajorantError("series for value() would not settle")


class ConstantComponent(TaylorComponent):
    def __init__(self, c: complex):
        self.c = complex(c)

    def coeff(self, d):
        return self.c if d == 0 else 0j

    def majorant(self, d):
        return abs(self.c) if d == 0 else 0.0

    def tail_bound(self, d, radius):
        return 0.0

    def value(self, z):
        return self.c


class PolynomialComponent(TaylorComponent):
    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = [complex(c) for c in coeffs]

    def coeff(self, d):
        return self.coeffs[d] if d < len(self.coeffs) else 0j

    def majorant(self, d):
        return abs(self.coeff(d))

    def tail_bound(self, d, radius):
        return sum(abs(c) * radius**k for k, c in enumerate(self.coeffs) if k > d)

    def value(self, z):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


class _FactorialComponent(TaylorComponent):
    """Shared machinery for exp/sin/cos(scale*z): majorant |scale|^d / d!."""

    def __init__(self, scale: complex):
        self.scale = complex(scale)

    def majorant(self, d):
        return abs(self.scale) ** d / math.factorial(d)

    def tail_bound(self, d, radius):
        # geometric domination once |scale| R / (d+2) < 1; otherwise step out
        x = abs(self.scale) * radius
        k = d + 1
        term = self.majorant(k) * radius**k
        total = 0.0
        while True:
            q = x / (k + 1)
            if q < 0.5:
                return total + term / (1.0 - q)
            total += term
            k += 1
            term *= x / k
            if k > 100000:
                raise MajorantError("factorial tail failed to dominate")


class ExpComponent(_FactorialComponent):
    def coeff(self, d):
        return self.scale**d / math.factorial(d)

    def value(self, z):
        return cmath.exp(self.scale * z)


class SinComponent(_FactorialComponent):
    def coeff(self, d):
        if d % 2 == 0:
            return 0j
        return (-1) ** (d // 2) * self.scale**d / math.factorial(d)

    def value(self, z):
        return cmath.sin(self.scale * z)


class CosComponent(_FactorialComponent):
    def coeff(self, d):
        if d % 2 == 1:
            return 0j
        return (-1) ** (d // 2) * self.scale**d / math.factorial(d)

    def value(self, z):
        return cmath.cos(self.scale * z)


@dataclass
class EntireCurveSpec:
    """A target curve [f_0 : ... : f_n] with certified coordinate lower bound:
    the provider guarantees sum |f_j|^2 >= sigma^2 on the approximation disc
    (spot-checked on the verification grid)."""

    n: int
    components: Sequence[TaylorComponent]
    sigma: float = 1.0

    def __post_init__(self):
        if len(self.components) != self.n + 1:
            raise ValueError("need n+1 components")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def value_vector(self, z: complex):
        return np.array([c.value(z) for c in self.components], dtype=np.complex128)


def disc_grid(N: float, step: float = 0.125):
    """Square lattice of spacing <= step covering [-N, N]^2, restricted to the
    closed disc; (2*ceil(N/step)+1)^2 lattice points before restriction."""
    m = math.ceil(N / step)
    axis = np.linspace(-m * step, m * step, 2 * m + 1)
    zz = axis[None, :] + 1j * axis[:, None]
    pts = zz.ravel()
    return pts[np.abs(pts) <= N + 1e-12]


def round_to_gaussian(c: complex, err: float) -> GaussianRational:
    """Nearest point of (1/q)Z[i] with q a power of two making |error| <= err."""
    q = 1
    target = err / math.sqrt(2.0)
    while 0.5 / q > target:
        q *= 2
    return GaussianRational(
        Fraction(round(c.real * q), q), Fraction(round(c.imag * q), q)
    )


def degree_bump(p0: GPoly, others_maxdeg, N: float, budget: float) -> GPoly:
    """Multiply p0 by (z+M)^Q / M^Q so its degree exceeds others_maxdeg, with
    sup_{|z|<=N} |result - p0| < budget.  Q is minimal; M doubles from 2 until
    |p0|_sup * ((1+N/M)^Q - 1) < budget."""
    if p0.is_zero():
        raise RungeError("cannot degree-bump the zero polynomial")
    if budget <= 0:
        raise RungeError("degree bump needs a positive budget")
    deg0 = p0.degree
    q_exp = 0 if others_maxdeg < deg0 else int(others_maxdeg) + 1 - int(deg0)
    if q_exp == 0:
        return p0
    sup = p0.coeff_abs_sum() * max(1.0, N) ** int(deg0)
    M = 2
    while sup * ((1.0 + N / M) ** q_exp - 1.0) >= budget:
        M *= 2
        if M > 2**200:
            raise RungeError("degree bump search ran away")
    factor = GPoly.from_ints([(Fraction(M), 0), (1, 0)])  # z + M
    bumped = p0
    for _ in range(q_exp):
        bumped = bumped * factor
    scale = GaussianRational.of(Fraction(1, M**q_exp))
    return bumped.scale(scale)


def rationalize(f: EntireCurveSpec, N: float, eps: float, grid_step: float = 0.125) -> RationalCurve:
    """Lemma-2 style approximation of f by a dictionary curve on the closed
    disc of radius N, verified pointwise on the grid before returning."""
    if N < 1:
        raise ValueError("N must be >= 1")
    mu = mu_for_epsilon(eps)
    rootn = math.sqrt(f.n + 1)
    budget_trunc = mu / (4.0 * rootn)
    budget_round = mu / (4.0 * rootn)
    budget_bump = mu / (2.0 * rootn)
    scale = 1.0 / f.sigma

    grid = disc_grid(N, grid_step)
    fvals = np.stack([f.value_vector(z) for z in grid])  # (npts, n+1)
    norms2 = np.sum(np.abs(fvals) ** 2, axis=1)
    if np.min(norms2) < f.sigma**2 * (1.0 - 1e-9):
        worst = int(np.argmin(norms2))
        raise RungeError(
            f"certified lower bound sigma={f.sigma} fails on the grid at "
            f"z = {grid[worst]:.6g} (norm^2 = {norms2[worst]:.6g})"
        )

    polys = []
    for comp in f.components:
        d = 0
        while scale * comp.tail_bound(d, N) >= budget_trunc:
            d += 1
            if d > 10000:
                raise MajorantError(
                    "majorant tail never reaches the truncation budget"
                )
        # spot-check the majorant on the coefficients actually used
        for kk in range(d + 1):
            if abs(comp.coeff(kk)) > comp.majorant(kk) * (1.0 + 1e-9):
                raise MajorantError(f"majorant violated at degree {kk}")
        per_coeff = [
            budget_round / ((d + 1) * max(1.0, N) ** kk) for kk in range(d + 1)
        ]
        polys.append(
            GPoly.make(
                round_to_gaussian(scale * comp.coeff(kk), per_coeff[kk])
                for kk in range(d + 1)
            )
        )

    p0 = polys[0]
    if p0.is_zero():
        # curve hugs the hyperplane Z0=0 on this disc; spend half the bump
        # budget on a constant lift so the bump has something to act on
        p0 = GPoly.make([round_to_gaussian(budget_bump / 4.0, budget_bump / 8.0)])
        budget_bump /= 2.0
    others = [p.degree for p in polys[1:]]
    others_maxdeg = max(others) if others else MINUS_INFINITY
    p0 = degree_bump(p0, others_maxdeg, N, budget_bump)
    curve = RationalCurve([p0] + polys[1:])

    worst_d = -1.0
    worst_z = None
    for z, fv in zip(grid, fvals):
        dist = fs_distance(curve.eval_homog(z), fv)
        if dist > worst_d:
            worst_d = dist
            worst_z = z
    if worst_d >= eps:
        raise GridCheckError(
            f"grid verification failed: fs_distance = {worst_d:.6g} >= eps = "
            f"{eps} at z = {worst_z:.6g}",
            worst_z=worst_z,
            worst_value=worst_d,
        )
    return curve


# small factory used by the CLI config
_COMPONENT_KINDS = {
    "const": lambda spec: ConstantComponent(complex(spec.get("re", 0.0), spec.get("im", 0.0))),
    "poly": lambda spec: PolynomialComponent(
        [complex(c[0], c[1]) for c in spec["coefficients"]]
    ),
    "exp": lambda spec: ExpComponent(complex(spec.get("scale", 1.0))),
    "sin": lambda spec: SinComponent(complex(spec.get("scale", 1.0))),
    "cos": lambda spec: CosComponent(complex(spec.get("scale", 1.0))),
}


def component_from_spec(spec: dict) -> TaylorComponent:
    kind = spec.get("kind")
    if kind not in _COMPONENT_KINDS:
        raise ValueError(f"unknown component kind: {kind!r}")
    return _COMPONENT_KINDS[kind](spec)
