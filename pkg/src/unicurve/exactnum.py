"""Exact arithmetic over the Gaussian rationals and univariate polynomials.

Scalars are x + iy with x, y arbitrary-precision rationals (``fractions.Fraction``
keeps denominators positive and fractions reduced), so field operations never
round.  Polynomials are dense coefficient tuples, ascending by degree, with the
zero polynomial carrying degree -inf (a genuine sentinel: deg(a*b) = deg a + deg b
stays true for every pair).

Numeric root location lives here too: a Yun square-free decomposition (exact)
splits off multiplicities, then an Aberth-Ehrlich simultaneous iteration in
double precision finds the roots of each square-free factor.  Multiplicities are
therefore exact integers while locations are floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

MINUS_INFINITY = float("-inf")  # degree of the zero polynomial

_DEFAULT_ROOT_TOL = 1e-10
_ABERTH_MAX_ITER = 400


class ExactArithmeticError(ValueError):
    pass


class RootFindingError(RuntimeError):
    """Aberth iteration failed to converge within the iteration cap."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ExactArithmeticError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class GaussianRational:
    """x + iy with exact rational x, y."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(_as_fraction(re), _as_fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        d = other.abs_sq()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return format_gaussian(self)


GR_ZERO = GaussianRational(Fraction(0), Fraction(0))
GR_ONE = GaussianRational(Fraction(1), Fraction(0))


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_gaussian(z: GaussianRational) -> str:
    """Canonical text form: "a/b", "c/d*i", or "a/b+c/d*i" (sign folded in)."""
    if z.im == 0:
        return _frac_str(z.re)
    im_part = f"{_frac_str(abs(z.im))}*i"
    if z.re == 0:
        return im_part if z.im > 0 else f"-{im_part}"
    sign = "+" if z.im > 0 else "-"
    return f"{_frac_str(z.re)}{sign}{im_part}"


def parse_gaussian(text: str) -> GaussianRational:
    """Parse "a/b+c/d*i" with optional parts; inverse of format_gaussian."""
    s = text.replace(" ", "")
    if not s:
        raise ExactArithmeticError("empty Gaussian rational literal")
    # split into a leading real part and a trailing imaginary part at the last
    # top-level +/- (never the one inside an exponent: fractions have none)
    cut = 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] not in "+-/*":
            cut = i
    head, tail = (s[:cut], s[cut:]) if cut else ("", s)
    try:
        if tail.endswith("i"):
            body = tail[:-1]
            if body.endswith("*"):
                body = body[:-1]
            if body in ("", "+"):
                body = "1"
            elif body == "-":
                body = "-1"
            re_f = Fraction(head) if head else Fraction(0)
            return GaussianRational(re_f, Fraction(body))
        if head:
            raise ExactArithmeticError(f"cannot parse {text!r}")
        return GaussianRational(Fraction(tail), Fraction(0))
    except (ValueError, ZeroDivisionError) as exc:
        raise ExactArithmeticError(f"cannot parse {text!r}") from exc


def _normalize(coeffs: Iterable[GaussianRational]) -> tuple:
    cs = list(coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class GPoly:
    """Univariate polynomial over the Gaussian rationals (dense, ascending)."""

    coeffs: tuple

    @staticmethod
    def make(coeffs: Iterable[GaussianRational]) -> "GPoly":
        return GPoly(_normalize(coeffs))

    @staticmethod
    def from_ints(ints: Sequence) -> "GPoly":
        """Convenience: coefficients as ints, Fractions, or (re, im) pairs."""
        out = []
        for c in ints:
            if isinstance(c, tuple):
                out.append(GaussianRational.of(c[0], c[1]))
            else:
                out.append(GaussianRational.of(c))
        return GPoly.make(out)

    @staticmethod
    def from_strings(parts: Sequence[str]) -> "GPoly":
        return GPoly.make([parse_gaussian(p) for p in parts])

    @staticmethod
    def zero() -> "GPoly":
        return GPoly(())

    @staticmethod
    def one() -> "GPoly":
        return GPoly((GR_ONE,))

    @staticmethod
    def x() -> "GPoly":
        return GPoly((GR_ZERO, GR_ONE))

    @property
    def degree(self):
        """Degree as int; MINUS_INFINITY for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> GaussianRational:
        if not self.coeffs:
            raise ExactArithmeticError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "GPoly") -> "GPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [GR_ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [GR_ZERO] * (n - len(other.coeffs))
        return GPoly.make(x + y for x, y in zip(a, b))

    def __sub__(self, other: "GPoly") -> "GPoly":
        return self + (-other)

    def __neg__(self) -> "GPoly":
        return GPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "GPoly") -> "GPoly":
        if self.is_zero() or other.is_zero():
            return GPoly.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return GPoly.make(out)

    def scale(self, c: GaussianRational) -> "GPoly":
        return GPoly.make(a * c for a in self.coeffs)

    def __divmod__(self, other: "GPoly") -> tuple:
        """Exact field division with remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero() or len(self.coeffs) < len(other.coeffs):
            return GPoly.zero(), self
        rem = list(self.coeffs)
        dlen = len(other.coeffs)
        lead = other.coeffs[-1]
        q = [GR_ZERO] * (len(rem) - dlen + 1)
        for i in range(len(rem) - dlen, -1, -1):
            c = rem[i + dlen - 1] / lead
            q[i] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * b
        return GPoly.make(q), GPoly.make(rem[: dlen - 1])

    def __floordiv__(self, other: "GPoly") -> "GPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "GPoly") -> "GPoly":
        return divmod(self, other)[1]

    def derivative(self) -> "GPoly":
        return GPoly.make(
            GaussianRational(c.re * k, c.im * k)
            for k, c in enumerate(self.coeffs)
            if k >= 1
        )

    def monic(self) -> "GPoly":
        if self.is_zero():
            raise ExactArithmeticError("cannot normalize the zero polynomial")
        lead = self.lead
        return GPoly.make(c / lead for c in self.coeffs)

    def eval_exact(self, z: GaussianRational) -> GaussianRational:
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def complex_coeffs(self):
        import numpy as np

        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    def coeff_abs_sum(self) -> float:
        """Sum of coefficient moduli (rounded up a hair; used in sup bounds)."""
        s = sum(math.sqrt(float(c.abs_sq())) for c in self.coeffs)
        return s * (1.0 + 1e-12)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                parts.append(f"({format_gaussian(c)})")
            elif k == 1:
                parts.append(f"({format_gaussian(c)})*z")
            else:
                parts.append(f"({format_gaussian(c)})*z^{k}")
        return " + ".join(parts)


def gpoly_gcd(a: GPoly, b: GPoly) -> GPoly:
    """Monic gcd by the Euclidean algorithm (exact over the field)."""
    if a.is_zero() and b.is_zero():
        raise ExactArithmeticError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def lowest_terms(num: GPoly, den: GPoly) -> tuple:
    """Cancel gcd(num, den), then make the denominator monic (scalar absorbed
    into the numerator).  Output pair is coprime."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return GPoly.zero(), GPoly.one()
    g = gpoly_gcd(num, den)
    num2 = num // g
    den2 = den // g
    lead = den2.lead
    return num2.scale(GR_ONE / lead), den2.monic()


def gpoly_lcm(a: GPoly, b: GPoly) -> GPoly:
    if a.is_zero() or b.is_zero():
        raise ExactArithmeticError("lcm with zero polynomial")
    return ((a * b) // gpoly_gcd(a, b)).monic()


def cauchy_root_bound(p: GPoly) -> float:
    """1 + max_{j<deg} |c_j|/|lc|, rounded up: every root has modulus <= bound."""
    d = p.degree
    if p.is_zero() or d < 1:
        raise ExactArithmeticError("root bound needs degree >= 1")
    lead_abs = math.sqrt(float(p.lead.abs_sq()))
    worst = 0.0
    for c in p.coeffs[:-1]:
        worst = max(worst, math.sqrt(float(c.abs_sq())))
    b = 1.0 + (worst / lead_abs) * (1.0 + 1e-12)
    return math.nextafter(b, math.inf)


def _squarefree_decomposition(p: GPoly):
    """Yun's algorithm: yield (factor, multiplicity) with factors square-free,
    pairwise coprime, product of factor^mult = p up to the leading scalar."""
    out = []
    g = gpoly_gcd(p, p.derivative()) if p.degree >= 1 else GPoly.one()
    if g.degree < 1:
        if p.degree >= 1:
            out.append((p.monic(), 1))
        return out
    c = p // g
    d = p.derivative() // g - c.derivative()
    mult = 1
    while c.degree >= 1:
        a = gpoly_gcd(c, d) if not d.is_zero() else c.monic()
        if a.degree >= 1:
            out.append((a.monic(), mult))
        c = c // a
        d = d // a - c.derivative() if not d.is_zero() else -c.derivative()
        mult += 1
    return out


def _aberth(coeffs, tol: float, seed: int = 0):
    """Simultaneous Newton-type iteration; coeffs complex128 ascending, deg>=1."""
    import numpy as np

    coeffs = np.asarray(coeffs, dtype=np.complex128)
    d = len(coeffs) - 1
    if d == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    scale = float(np.max(np.abs(coeffs)))
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1]))) / abs(coeffs[-1])
    dcoeffs = coeffs[1:] * np.arange(1, d + 1)

    def polyval(cs, z):
        acc = np.zeros_like(z)
        for c in cs[::-1]:
            acc = acc * z + c
        return acc

    def residual_ok(z):
        res = np.abs(polyval(coeffs, z))
        bound = tol * scale * np.maximum(1.0, np.abs(z)) ** d
        return bool(np.all(res <= bound)), res

    for attempt in range(4):
        if attempt == 0:
            # staggered circle, deterministic
            ang = 2 * np.pi * (np.arange(d) + 0.35) / d + 0.4
            z = radius * 0.7 * np.exp(1j * ang)
        else:
            rng = np.random.default_rng(seed + attempt)
            z = radius * rng.uniform(0.3, 1.0, d) * np.exp(
                2j * np.pi * rng.uniform(0, 1, d)
            )
        for _ in range(_ABERTH_MAX_ITER):
            pv = polyval(coeffs, z)
            dv = polyval(dcoeffs, z)
            ok, _ = residual_ok(z)
            if ok:
                break
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = np.where(dv != 0, pv / dv, 0.0)
                diff = z[:, None] - z[None, :]
                np.fill_diagonal(diff, np.inf)
                s = np.sum(1.0 / diff, axis=1)
                corr = newton / (1.0 - newton * s)
            corr = np.where(np.isfinite(corr), corr, newton)
            z = z - corr
        ok, res = residual_ok(z)
        if ok:
            return z
    raise RootFindingError(
        f"Aberth iteration did not converge (degree {d}, worst residual {res.max():.3e})"
    )


def roots_numeric(p: GPoly, tol: float = _DEFAULT_ROOT_TOL, seed: int = 0):
    """All roots of p with exact multiplicities and numeric locations.

    Multiplicities come from the exact square-free decomposition; locations
    from Aberth iteration on each square-free factor.  The multiset of
    multiplicities always sums to deg p.
    """
    if p.is_zero():
        raise ExactArithmeticError("zero polynomial has no root list")
    out = []
    for factor, mult in _squarefree_decomposition(p):
        locs = _aberth(factor.complex_coeffs(), tol, seed)
        out.extend((complex(z), mult) for z in locs)
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    if sum(m for _, m in out) != (p.degree if p.degree >= 1 else 0):
        raise RootFindingError("square-free decomposition lost roots")
    return out
