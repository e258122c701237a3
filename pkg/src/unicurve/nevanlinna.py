"""Counting, proximity, and characteristic functions of the constructed curve,
plus the analytic growth bounds and the growth verification report.

Two independent routes to T(r):

* characteristic_fmt: T = m(r) + N(r) - m(1).  N(r) is the exact closed form
  sum mult * log(r / max(|pole|, 1)) over poles inside |z| <= r; m(r) is a
  doubling trapezoid over the circle.  On circles near or through a disc the
  raw integrand has a log spike at each nearby pole, so the integrand is
  rewritten against the straddled block's exact common denominator d:

      log sqrt(1 + sum |h_j|^2)
          = 1/2 log(|d|^2 + sum |n_j + eps_j d|^2) - log|d|,

  the first part is real-analytic on the circle (trapezoid converges
  geometrically) and the circle average of log|d| is Jensen's formula
  evaluated from the block's pole locations.

* characteristic_area: the double integral of the pulled-back Fubini-Study
  form, collapsed by Fubini to a single radial integral
  T(r) = integral_0^r I(rho) log(r / max(rho, 1)) drho of ring integrals
  I(rho) = 2 rho * mean_theta(density).  The density is evaluated on the
  affine representation away from discs and on the exact block lift inside
  disc bands, where it stays smooth across poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from . import kernels
from .curve import UniversalCurve
from .scheduler import Schedule

POLE_CIRCLE_TOLERANCE = 1e-9


class QuadratureError(RuntimeError):
    pass


class PoleOnCircleError(RuntimeError):
    pass


class CoverageError(ValueError):
    pass


@dataclass
class QuadConfig:
    tol: float = 1e-8
    min_panels: int = 64
    max_panels: int = 1 << 20
    area_epsabs: float = 1e-6
    area_epsrel: float = 1e-6
    ring_tol: float = 1e-9


def _doubling_trapezoid(f, tol, min_panels, max_panels, context=""):
    """Mean of a 2pi-periodic function by panel doubling; f(thetas) vectorized.
    Returns the mean (i.e. the integral divided by 2pi)."""
    P = min_panels
    theta = 2 * np.pi * np.arange(P) / P
    vals = f(theta)
    est = float(np.mean(vals))
    while True:
        theta_new = 2 * np.pi * (np.arange(P) + 0.5) / P
        new_vals = f(theta_new)
        new_est = 0.5 * (est + float(np.mean(new_vals)))
        P *= 2
        if abs(new_est - est) < tol:
            return new_est
        if P > max_panels:
            raise QuadratureError(
                f"circle quadrature did not converge at {P} panels {context}"
            )
        est = new_est


def _straddled_block(u: UniversalCurve, r: float, margin: float = 1.0):
    """Block whose disc band the circle |z| = r meets (enlarged by margin), or
    None.  Bands of distinct blocks are disjoint for audited schedules; for
    manual ones the first hit wins."""
    for idx, b in enumerate(u.schedule.blocks):
        if abs(abs(u.centers[idx]) - r) <= b.cert.R + margin:
            return idx + 1
    return None


def _circle_min_pole_gap(u: UniversalCurve, r: float) -> float:
    if not u.poles:
        return math.inf
    return float(np.min(np.abs(np.abs(u._pole_locs) - r)))


def nudge_radius(u: UniversalCurve, r: float) -> tuple:
    """Push r off any pole modulus by +1e-6*r steps; returns (r, nudged)."""
    nudged = False
    while _circle_min_pole_gap(u, r) < POLE_CIRCLE_TOLERANCE:
        r *= 1.0 + 1e-6
        nudged = True
    return r, nudged


def _jensen_circle_mean_log(u: UniversalCurve, k: int, r: float) -> float:
    """Circle mean of log|d(z - a_k)| on |z| = r for the block's monic common
    denominator d: sum over its (translated) roots of log max(r, |root|)."""
    return sum(
        mult * math.log(max(r, abs(loc)))
        for loc, mult, owner in u.poles
        if owner == k
    )


def proximity(u: UniversalCurve, r: float, quad: Optional[QuadConfig] = None) -> float:
    """m(r) = circle mean of log sqrt(1 + sum |h_j|^2)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    quad = quad or QuadConfig()
    gap = _circle_min_pole_gap(u, r)
    if gap < POLE_CIRCLE_TOLERANCE:
        raise PoleOnCircleError(
            f"circle r = {r} passes within {gap:.3g} of a pole; nudge the radius"
        )
    k = _straddled_block(u, r)
    if k is None:
        def integrand(theta):
            zs = r * np.exp(1j * theta)
            h = u.eval_affine(zs, check_poles=False)
            return 0.5 * np.log1p(np.sum(np.abs(h) ** 2, axis=-1))

        return _doubling_trapezoid(
            integrand, quad.tol, quad.min_panels, quad.max_panels, f"(m at r={r:g})"
        )

    a_k = u.schedule.center_of(k)
    dpoly = u._block_d[k - 1].complex_coeffs()
    numpolys = [p.complex_coeffs() for p in u._block_nums[k - 1]]

    def integrand(theta):
        zs = r * np.exp(1j * theta)
        zc = zs - a_k
        d = kernels.polyval(dpoly, zc)
        eps = u.error_term(k, zs)
        total = np.abs(d) ** 2
        for j, ncs in enumerate(numpolys):
            nv = kernels.polyval(ncs, zc) if len(ncs) else np.zeros_like(zc)
            total = total + np.abs(nv + eps[..., j] * d) ** 2
        return 0.5 * np.log(total)

    mean = _doubling_trapezoid(
        integrand, quad.tol, quad.min_panels, quad.max_panels, f"(m split at r={r:g})"
    )
    return mean - _jensen_circle_mean_log(u, k, r)


def counting(u: UniversalCurve, r: float) -> float:
    """N(r) = sum over poles with |p| <= r of mult * log(r / max(|p|, 1));
    the exact value of the t-integral of the discrete pole count from t=1."""
    if r < 1:
        raise ValueError("counting function starts at r = 1")
    total = 0.0
    for loc, mult, _k in u.poles:
        mag = abs(loc)
        if mag <= r:
            total += mult * math.log(r / max(mag, 1.0))
    return total


def characteristic_fmt(
    u: UniversalCurve, r: float, quad: Optional[QuadConfig] = None, m1: Optional[float] = None
) -> float:
    """T(r) = m(r) + N(r) - m(1); zero at r = 1 by construction."""
    if m1 is None:
        m1 = proximity(u, 1.0, quad)
    return proximity(u, r, quad) + counting(u, r) - m1


# --- the area route ----------------------------------------------------------

def _ring_density_mean(u: UniversalCurve, rho: float, quad: QuadConfig) -> float:
    """Circle mean of the pullback density at |z| = rho (stable across poles)."""
    k = _straddled_block(u, rho)
    if k is None:
        def f(theta):
            zs = rho * np.exp(1j * theta)
            h = u.eval_affine(zs, check_poles=False)
            hp = u.eval_derivative(zs, check_poles=False)
            s = 1.0 + np.sum(np.abs(h) ** 2, axis=-1)
            sp = np.sum(np.abs(hp) ** 2, axis=-1)
            cross = np.sum(np.conj(h) * hp, axis=-1)
            return np.maximum(0.0, sp / s - np.abs(cross) ** 2 / s**2)

    else:
        a_k = u.schedule.center_of(k)
        dpoly = u._block_d[k - 1].complex_coeffs()
        ddpoly = u.schedule.blocks[k - 1].curve.common_denominator.derivative()
        ddc = ddpoly.complex_coeffs() if not ddpoly.is_zero() else None
        numpolys = []
        for p in u._block_nums[k - 1]:
            pc = p.complex_coeffs() if not p.is_zero() else None
            pd = p.derivative()
            pdc = pd.complex_coeffs() if not pd.is_zero() else None
            numpolys.append((pc, pdc))

        def f(theta):
            zs = rho * np.exp(1j * theta)
            zc = zs - a_k
            d = kernels.polyval(dpoly, zc)
            dp = kernels.polyval(ddc, zc) if ddc is not None else np.zeros_like(zc)
            eps = u.error_term(k, zs)
            epsd = u.error_term_derivative(k, zs)
            n2 = np.abs(d) ** 2
            np2 = np.abs(dp) ** 2
            cross = np.conj(d) * dp
            for j, (pc, pdc) in enumerate(numpolys):
                nv = kernels.polyval(pc, zc) if pc is not None else np.zeros_like(zc)
                nd = kernels.polyval(pdc, zc) if pdc is not None else np.zeros_like(zc)
                sj = nv + eps[..., j] * d
                sjp = nd + epsd[..., j] * d + eps[..., j] * dp
                n2 = n2 + np.abs(sj) ** 2
                np2 = np2 + np.abs(sjp) ** 2
                cross = cross + np.conj(sj) * sjp
            return np.maximum(0.0, (n2 * np2 - np.abs(cross) ** 2) / (n2 * n2))

    scale = max(1.0, abs(f(np.array([0.0]))[0]))
    return _doubling_trapezoid(
        f, quad.ring_tol * scale, quad.min_panels, quad.max_panels, f"(ring rho={rho:g})"
    )


def characteristic_area(
    u: UniversalCurve, r: float, quad: Optional[QuadConfig] = None
) -> tuple:
    """T(r) by the area route; returns (value, error_estimate).

    T(r) = int_1^r dt/t int_{|z|<t} density dA/pi collapses (Fubini) to
    int_0^r I(rho) log(r / max(rho, 1)) drho with I(rho) = 2 rho mean(density).
    """
    if r < 1:
        raise ValueError("characteristic starts at r = 1")
    quad = quad or QuadConfig()

    def radial(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        w = math.log(r / max(rho, 1.0))
        if w == 0.0:
            return 0.0
        return 2.0 * rho * _ring_density_mean(u, rho, quad) * w

    breaks = {1.0}
    for idx, b in enumerate(u.schedule.blocks):
        c = abs(u.centers[idx])
        for edge in (c - b.cert.R, c + b.cert.R):
            if 0.0 < edge < r:
                breaks.add(edge)
    for loc, _m, _k in u.poles:
        mag = abs(loc)
        if 0.0 < mag < r:
            breaks.add(mag)
    pts = sorted(p for p in breaks if 0.0 < p < r)
    val, err = integrate.quad(
        radial, 0.0, r, points=pts or None, limit=max(200, 20 * (len(pts) + 1))
    )
    return float(val), float(err)


# --- analytic bounds and the growth report -----------------------------------

def classify_radius(s: Schedule, r: float):
    """('below-first-disc', None) | ('straddling-disc', k) | ('between-discs', k)
    with k the last disc fully inside |z| < r for the between case."""
    if not s.blocks:
        return "below-first-disc", None
    moduli = [s.center_abs(k) for k in range(1, len(s.blocks) + 1)]
    for k, b in enumerate(s.blocks, start=1):
        if abs(r - moduli[k - 1]) <= b.cert.R:
            return "straddling-disc", k
    last = 0
    for k, b in enumerate(s.blocks, start=1):
        if moduli[k - 1] + b.cert.R < r:
            last = k
    if last == 0:
        return "below-first-disc", None
    return "between-discs", last


def bound_lemma5(s: Schedule, r: float) -> float:
    """The analytic chain bound on T(r): sqrt(n+1) below the first disc,
    (n_1+...+n_k) log r + sqrt(n+1) between discs, and the value frozen at
    |a_k| + R_k while straddling disc k."""
    if r < 1:
        raise CoverageError("bound defined for r >= 1")
    root = math.sqrt(s.n + 1)
    case, k = classify_radius(s, r)
    if case == "below-first-disc":
        return root
    if case == "between-discs":
        return s.pole_sum_through(k) * math.log(r) + root
    edge = s.center_abs(k) + s.blocks[k - 1].cert.R
    return s.pole_sum_through(k) * math.log(edge) + root


@dataclass
class GrowthRow:
    r: float
    r_requested: float
    nudged: bool
    case: str
    T_fmt: float
    N: float
    m: float
    bound: float
    lemma_bound: float
    margin: float
    T_area: Optional[float] = None
    T_area_err: Optional[float] = None


@dataclass
class GrowthReport:
    rows: list = field(default_factory=list)
    passed: bool = False
    strict_ok: bool = False
    lemma_ok: bool = False
    monotone_ok: bool = False
    notes: list = field(default_factory=list)

    CSV_HEADER = "r,T_fmt,T_area,N,m,phi_log_bound,lemma_bound,case,margin"

    def csv_lines(self):
        yield self.CSV_HEADER
        for row in self.rows:
            area = "" if row.T_area is None else repr(row.T_area)
            yield (
                f"{row.r!r},{row.T_fmt!r},{area},{row.N!r},{row.m!r},"
                f"{row.bound!r},{row.lemma_bound!r},{row.case},{row.margin!r}"
            )


def log_grid(rmin: float, rmax: float, count: int):
    if not (rmin >= 1 and rmax > rmin and count >= 1):
        raise ValueError("need 1 <= rmin < rmax and count >= 1")
    if count == 1:
        return np.array([rmin])
    return np.geomspace(rmin, rmax, count)


def growth_report(
    u: UniversalCurve,
    r_grid,
    quad: Optional[QuadConfig] = None,
    enable_area: bool = False,
    lemma_slack: float = 1e-6,
    mono_slack: float = 1e-6,
) -> GrowthReport:
    """Theorem-1 verification sweep.

    PASS requires, at every grid radius: T_fmt < phi(r) log r strictly wherever
    the bound is positive (at r == 1 both sides are identically zero and the
    report instead requires T_fmt == 0 exactly), T_fmt <= lemma bound + slack,
    and T_fmt nondecreasing along the grid up to quadrature noise.
    """
    quad = quad or QuadConfig()
    s = u.schedule
    rep = GrowthReport()
    m1 = proximity(u, 1.0, quad)
    prev_T = -math.inf
    strict_ok = True
    lemma_ok = True
    monotone_ok = True
    for r_req in np.asarray(r_grid, dtype=float):
        r, nudged = nudge_radius(u, float(r_req))
        mval = proximity(u, r, quad)
        nval = counting(u, r)
        T = mval + nval - m1
        bound = s.gauge(r) * math.log(r)
        case, k = classify_radius(s, r)
        case_tag = f"straddling-disc-{k}" if case == "straddling-disc" else case
        lb = bound_lemma5(s, r)
        row = GrowthRow(
            r=r,
            r_requested=float(r_req),
            nudged=nudged,
            case=case_tag,
            T_fmt=T,
            N=nval,
            m=mval,
            bound=bound,
            lemma_bound=lb,
            margin=bound - T,
        )
        if enable_area:
            row.T_area, row.T_area_err = characteristic_area(u, r, quad)
        rep.rows.append(row)
        if bound > 0.0:
            if not T < bound:
                strict_ok = False
                rep.notes.append(f"growth bound violated at r={r!r}: T={T!r} >= {bound!r}")
        else:
            if T != 0.0:
                strict_ok = False
                rep.notes.append(f"T(1) = {T!r} != 0")
        if not T <= lb + lemma_slack:
            lemma_ok = False
            rep.notes.append(f"lemma bound violated at r={r!r}: T={T!r} > {lb!r}")
        if not T >= prev_T - mono_slack:
            monotone_ok = False
            rep.notes.append(f"monotonicity violated at r={r!r}")
        prev_T = max(prev_T, T)
    rep.strict_ok = strict_ok
    rep.lemma_ok = lemma_ok
    rep.monotone_ok = monotone_ok
    rep.passed = strict_ok and lemma_ok and monotone_ok
    return rep
