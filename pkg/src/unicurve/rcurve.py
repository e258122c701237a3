"""Rational curves [p0 : ... : pn] with Gaussian-rational coefficients and
deg p0 > deg pj for j >= 1, the dictionary elements of the construction.

Each curve carries affine components g_j = pj/p0 in lowest terms, an exact pole
inventory (multiplicity at w = max over components of the pole order there,
realized exactly as the order of the monic lcm of the component denominators),
and decay certificates: constants (delta, C) with |g_j(z)| < C/|z| for
|z| > delta, from which R = delta + 2^k C gives the envelope
|g_j(z)| < 2^{-k} R/|z| < 2^{-k} on |z| > R.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exactnum import (
    GPoly,
    MINUS_INFINITY,
    cauchy_root_bound,
    gpoly_gcd,
    gpoly_lcm,
    lowest_terms,
    roots_numeric,
)
from .projective import ProjPoint


class CurveError(ValueError):
    pass


class CertificateError(RuntimeError):
    """A constructed decay bound failed its own numeric validation."""


@dataclass(frozen=True)
class DecayCertificate:
    """(delta, C, R) for block index k: |g_j(z)| < C/|z| on |z| > delta and
    R = delta + 2^k C."""

    delta: float
    C: float
    k: int
    R: float

    def envelope(self, z_abs: float) -> float:
        """The strict bound 2^{-k} R / |z| valid on |z| > R."""
        return (2.0 ** -self.k) * self.R / z_abs


class RationalCurve:
    """An element of the dictionary: p0 != 0 and deg p0 > deg pj for all j >= 1."""

    def __init__(self, polys):
        polys = tuple(polys)
        if len(polys) < 2:
            raise CurveError("need p0 plus at least one further component")
        p0 = polys[0]
        if p0.is_zero():
            raise CurveError("p0 must be nonzero")
        for j, p in enumerate(polys[1:], start=1):
            if not p.degree < p0.degree:
                raise CurveError(
                    f"degree condition violated: deg p{j} = {p.degree} "
                    f">= deg p0 = {p0.degree}"
                )
        self.polys = polys
        self.n = len(polys) - 1

    @staticmethod
    def from_strings(coeff_lists) -> "RationalCurve":
        """Coefficient lists in the textual scalar format, ascending powers."""
        return RationalCurve([GPoly.from_strings(c) for c in coeff_lists])

    def to_strings(self):
        return [[str(c) for c in p.coeffs] for p in self.polys]

    @cached_property
    def affine_components(self):
        """(numerator, denominator) of g_j = pj/p0 in lowest terms, j = 1..n.

        Denominator degree strictly exceeds numerator degree (inherited from
        the defining degree condition; cancellation lowers both equally).
        """
        return tuple(lowest_terms(pj, self.polys[0]) for pj in self.polys[1:])

    @cached_property
    def common_denominator(self) -> GPoly:
        """Monic lcm of the lowest-terms denominators; its root orders are the
        max-over-components pole orders."""
        d = GPoly.one()
        for _, den in self.affine_components:
            if den.degree >= 1:
                d = gpoly_lcm(d, den) if d.degree >= 1 else den
        return d

    @cached_property
    def numerators_over_common(self):
        """n_j with g_j = n_j / common_denominator exactly."""
        d = self.common_denominator
        return tuple(num * (d // den) for num, den in self.affine_components)

    @cached_property
    def reduced_polys(self):
        """The input projective tuple with any common polynomial factor
        cancelled (makes eval_homog well-defined at shared roots)."""
        g = None
        for p in self.polys:
            if p.is_zero():
                continue
            g = p if g is None else gpoly_gcd(g, p)
            if g.degree < 1:
                return self.polys
        return tuple(p // g for p in self.polys)

    def pole_count(self):
        """(n_k, per-component list): n_{k,j} = deg of the lowest-terms
        denominator of g_j; n_k is their sum."""
        per = [den.degree if den.degree >= 1 else 0 for _, den in self.affine_components]
        return sum(per), per

    def pole_locations(self, tol: float = 1e-10, seed: int = 0):
        """Poles of [1 : g_1 : ... : g_n] with max-over-components multiplicity."""
        d = self.common_denominator
        if d.degree < 1:
            return []
        return roots_numeric(d, tol, seed)

    def eval_homog(self, z: complex) -> ProjPoint:
        return ProjPoint([p.eval_complex(z) for p in self.reduced_polys])

    def eval_affine(self, z: complex):
        """[g_1(z), ..., g_n(z)]; caller keeps z away from poles."""
        return np.array(
            [num.eval_complex(z) / den.eval_complex(z) for num, den in self.affine_components],
            dtype=np.complex128,
        )

    def decay_certificate(self, k: int, validate: bool = True) -> DecayCertificate:
        """Construct a valid (conservative) certificate for block index k.

        delta starts at twice the largest denominator root bound and is doubled
        until the denominator tail is at most half the leading term on
        |z| >= delta; C then bounds each |numer|/|denom| by comparing the
        coefficient-sum numerator bound against half the leading denominator
        term, with the exponent gap absorbed at |z| = delta.
        """
        if k < 1:
            raise CurveError("block index k must be >= 1")
        delta = 1.0
        for _, den in self.affine_components:
            if den.degree >= 1:
                delta = max(delta, cauchy_root_bound(den))
        delta *= 2.0
        # enlarge delta until sum_{i<d} |c_i| delta^{i-d} <= 1/2 per denominator
        while True:
            ok = True
            for _, den in self.affine_components:
                dd = den.degree
                if dd < 1:
                    continue
                lead = math.sqrt(float(den.lead.abs_sq()))
                tail = sum(
                    math.sqrt(float(c.abs_sq())) * delta ** (i - dd)
                    for i, c in enumerate(den.coeffs[:-1])
                )
                if tail > 0.5 * lead:
                    ok = False
                    break
            if ok:
                break
            delta *= 2.0
        C = 0.0
        for num, den in self.affine_components:
            if num.is_zero():
                continue
            dn = num.degree
            dd = den.degree
            lead = math.sqrt(float(den.lead.abs_sq()))
            cj = 2.0 * num.coeff_abs_sum() / lead * delta ** (dn + 1 - dd)
            C = max(C, cj)
        if C == 0.0:
            C = 1.0  # all components vanish identically; any C certifies
        cert = DecayCertificate(delta=delta, C=C, k=k, R=delta + (2.0**k) * C)
        if validate:
            self.validate_certificate(cert)
        return cert

    def validate_certificate(self, cert: DecayCertificate, radii: int = 256, angles: int = 16):
        """Sample |g_j(z)| < C/|z| strictly on log-spaced |z| in (delta, 100*delta]."""
        rs = np.geomspace(cert.delta * 1.0001, cert.delta * 100.0, radii)
        th = 2 * np.pi * np.arange(angles) / angles
        zs = (rs[:, None] * np.exp(1j * th)[None, :]).ravel()
        for num, den in self.affine_components:
            if num.is_zero():
                continue
            gv = np.abs(
                _polyval_np(num, zs) / _polyval_np(den, zs)
            )
            bound = cert.C / np.abs(zs)
            if not np.all(gv < bound):
                worst = int(np.argmax(gv - bound))
                raise CertificateError(
                    f"decay bound violated at z = {zs[worst]:.6g}: "
                    f"|g| = {gv[worst]:.6g} vs C/|z| = {bound[worst]:.6g}"
                )

    def __repr__(self) -> str:
        inside = " : ".join(str(p) for p in self.polys)
        return f"RationalCurve([{inside}])"


def _polyval_np(p: GPoly, zs):
    acc = np.zeros_like(zs)
    for c in p.coeffs[::-1]:
        acc = acc * zs + complex(c)
    return acc
