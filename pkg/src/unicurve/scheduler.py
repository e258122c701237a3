"""Block scheduling: enumerate (curve, repetition, angle) triples, attach decay
certificates, compute the base constants (r0, eps0), and resolve each
translation center a_k = m * e^{i rho_k} as the smallest positive integer
modulus satisfying, simultaneously,

    (i)    m > R_k/eps0 + r0 + 1
    (ii)   m - |a_{k-1}| - R_k - R_{k-1} > (R_1+...+R_{k-1}) (k-1) 2^k   (k >= 2)
    (iii)  phi(m - R_k) > (n_1+...+n_k + sqrt(n+1)) * log(m+R_k)/log(m-R_k)
    (iv)   m > R_k + 1

(i), (ii), (iv) are threshold conditions; (iii) is upward-closed because its
left side is nondecreasing and its right side strictly decreasing in m, so a
doubling bracket plus binary search finds the minimal modulus, polished by a
final +/-1 scan against the literal predicates (brute-force agreement matters
more than saving two comparisons).

Base constants: r0 is the smallest grid value e + 0.01*j with
phi(r0)*log(r0) > sqrt(n+1) (persists rightward by monotonicity), and
eps0 = min(1, sqrt(phi(1) / (n r0^2 (r0+1)^2))).
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import GPoly, GaussianRational
from .rcurve import DecayCertificate, RationalCurve

MAGNITUDE_CAP = 2**53


class ScheduleError(RuntimeError):
    pass


class GaugeTooSlowError(ScheduleError):
    pass


class CenterOverflowError(ScheduleError):
    def __init__(self, msg, inequality: str):
        super().__init__(msg)
        self.inequality = inequality


class EnumerationCapError(ScheduleError):
    pass


class GrowthGauge:
    """phi: positive, nondecreasing, tending to infinity.

    Builtin families are monotone by construction; sampled gauges are
    preprocessed with a running max (the caller asserts divergence).
    """

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = dict(params)
        self._check()

    @staticmethod
    def scaled_log(c: float = 1.0, b: float = 1.0) -> "GrowthGauge":
        """phi(r) = c*log(1+r) + b"""
        return GrowthGauge("scaled-log", {"c": c, "b": b})

    @staticmethod
    def power(c: float = 1.0, alpha: float = 0.5) -> "GrowthGauge":
        """phi(r) = c*r^alpha, 0 < alpha <= 1"""
        return GrowthGauge("power", {"c": c, "alpha": alpha})

    @staticmethod
    def iterated_log(c: float = 1.0, b: float = 1.0) -> "GrowthGauge":
        """phi(r) = c*log(1+log(1+r)) + b"""
        return GrowthGauge("iterated-log", {"c": c, "b": b})

    @staticmethod
    def from_samples(pairs) -> "GrowthGauge":
        """Piecewise-linear through (r, phi) samples, made nondecreasing by a
        running max; constant extension on the right is the caller's lookout
        (divergence is declared, not checkable from finitely many samples)."""
        pts = sorted((float(r), float(v)) for r, v in pairs)
        best = -math.inf
        fixed = []
        for r, v in pts:
            best = max(best, v)
            fixed.append((r, best))
        return GrowthGauge("samples", {"points": fixed})

    def _check(self):
        if self.kind in ("scaled-log", "iterated-log"):
            if self.params["c"] <= 0 or self.params["b"] <= 0:
                raise ScheduleError("gauge needs c > 0 and b > 0")
        elif self.kind == "power":
            if self.params["c"] <= 0 or not 0 < self.params["alpha"] <= 1:
                raise ScheduleError("power gauge needs c > 0 and 0 < alpha <= 1")
        elif self.kind == "samples":
            pts = self.params["points"]
            if not pts or any(v <= 0 for _, v in pts):
                raise ScheduleError("sampled gauge must be positive")
        else:
            raise ScheduleError(f"unknown gauge kind {self.kind!r}")

    def __call__(self, r: float) -> float:
        if r < 0:
            raise ValueError("gauge evaluated at negative radius")
        if self.kind == "scaled-log":
            return self.params["c"] * math.log1p(r) + self.params["b"]
        if self.kind == "power":
            return self.params["c"] * r ** self.params["alpha"]
        if self.kind == "iterated-log":
            return self.params["c"] * math.log1p(math.log1p(r)) + self.params["b"]
        pts = self.params["points"]
        if r <= pts[0][0]:
            return pts[0][1]
        if r >= pts[-1][0]:
            return pts[-1][1]
        for (r0, v0), (r1, v1) in zip(pts, pts[1:]):
            if r0 <= r <= r1:
                t = (r - r0) / (r1 - r0)
                return v0 + t * (v1 - v0)
        raise AssertionError("unreachable")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params}

    @staticmethod
    def from_dict(d: dict) -> "GrowthGauge":
        return GrowthGauge(d["kind"], d["params"])


def base_constants(gauge: GrowthGauge, n: int):
    """(r0, eps0) from the gauge: see the module docstring."""
    target = math.sqrt(n + 1)
    e = math.e

    def ok(j: int) -> bool:
        r = e + 0.01 * j
        return gauge(r) * math.log(r) > target

    hi = 1
    while not ok(hi):
        hi *= 2
        if e + 0.01 * hi > 2.0**60:
            raise GaugeTooSlowError(
                f"gauge grows too slowly for dimension {n}: "
                f"phi(r)*log(r) never clears sqrt(n+1) within the scan cap"
            )
    lo = hi // 2 if hi > 1 else 0
    while hi - lo > 1:  # smallest grid index passing; monotone in j
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    r0 = e + 0.01 * hi
    eps0 = min(1.0, math.sqrt(gauge(1.0) / (n * r0**2 * (r0 + 1) ** 2)))
    return r0, eps0


@dataclass
class Block:
    """One summand of the construction."""

    curve: RationalCurve
    rep: int
    angle: float
    k: int
    cert: DecayCertificate
    n_poles: int
    modulus: Optional[int] = None  # |a_k|, a positive integer once resolved

    @property
    def center(self) -> complex:
        if self.modulus is None:
            raise ScheduleError(f"block {self.k} has no resolved center")
        return self.modulus * cmath.exp(1j * self.angle)

    @property
    def resolved(self) -> bool:
        return self.modulus is not None


@dataclass
class Schedule:
    n: int
    gauge: GrowthGauge
    blocks: list
    r0: float
    eps0: float
    manual: bool = False  # centers preset for analysis; system-(13) audits refuse it

    @property
    def resolved(self) -> bool:
        return all(b.resolved for b in self.blocks)

    def pole_sum_through(self, k: int) -> int:
        """n_1 + ... + n_k."""
        return sum(b.n_poles for b in self.blocks[:k])

    def discs(self):
        """[(center, R_k)] for resolved blocks."""
        return [(b.center, b.cert.R) for b in self.blocks]

    @staticmethod
    def manual_schedule(n: int, gauge: GrowthGauge, entries, offset_hint=None) -> "Schedule":
        """Analysis constructor: entries are (curve, center complex); each
        block still gets a genuine certificate (index = position) so the
        evaluators can locate discs, but no inequality is imposed."""
        r0, eps0 = base_constants(gauge, n)
        blocks = []
        for i, (curve, center) in enumerate(entries, start=1):
            cert = curve.decay_certificate(i)
            npk, _ = curve.pole_count()
            b = Block(curve=curve, rep=1, angle=cmath.phase(center) % (2 * math.pi)
                      if center != 0 else 0.0, k=i, cert=cert, n_poles=npk)
            b.modulus = None
            blocks.append(b)
        sched = Schedule(n=n, gauge=gauge, blocks=blocks, r0=r0, eps0=eps0, manual=True)
        sched._manual_centers = [complex(c) for _, c in entries]
        return sched

    def center_of(self, k: int) -> complex:
        """1-based block center; manual schedules may hold arbitrary centers."""
        if self.manual:
            return self._manual_centers[k - 1]
        return self.blocks[k - 1].center

    def center_abs(self, k: int) -> float:
        if self.manual:
            return abs(self._manual_centers[k - 1])
        b = self.blocks[k - 1]
        if b.modulus is None:
            raise ScheduleError(f"block {k} unresolved")
        return float(b.modulus)


def build_schedule(dictionary: Sequence[RationalCurve], angles: Sequence[float],
                   K: int, gauge: GrowthGauge, n: int) -> Schedule:
    """Enumerate dictionary x Z+ x angles in lexicographic order of
    (repetition, curve index, angle index), truncated to K blocks, so every
    (curve, angle) pair recurs with unboundedly growing repetition index."""
    if not dictionary:
        raise ScheduleError("empty dictionary")
    if K < 1:
        raise ScheduleError("need at least one block")
    for c in dictionary:
        if c.n != n:
            raise ScheduleError(f"curve dimension {c.n} != schedule dimension {n}")
    angles = [float(a) % (2 * math.pi) for a in angles]
    if not angles:
        raise ScheduleError("empty angle set")
    r0, eps0 = base_constants(gauge, n)
    blocks = []
    rep = 1
    while len(blocks) < K:
        for curve in dictionary:
            for ang in angles:
                if len(blocks) >= K:
                    break
                k = len(blocks) + 1
                cert = curve.decay_certificate(k)
                npk, _ = curve.pole_count()
                blocks.append(
                    Block(curve=curve, rep=rep, angle=ang, k=k, cert=cert, n_poles=npk)
                )
        rep += 1
    return Schedule(n=n, gauge=gauge, blocks=blocks, r0=r0, eps0=eps0)


# --- the inequality system -------------------------------------------------

def system13_predicates(s: Schedule, k: int, m: float):
    """Evaluate the four constraints for block k at modulus m, in their
    literal forms; returns dict name -> bool."""
    b = s.blocks[k - 1]
    Rk = b.cert.R
    out = {
        "i": m > Rk / s.eps0 + s.r0 + 1.0,
        "iv": m > Rk + 1.0,
    }
    if k >= 2:
        prev = s.blocks[k - 2]
        Rprev = prev.cert.R
        sum_R = sum(bb.cert.R for bb in s.blocks[: k - 1])
        out["ii"] = (
            m - float(prev.modulus) - Rk - Rprev > sum_R * (k - 1) * 2.0**k
        )
    else:
        out["ii"] = True
    if m - Rk > 1.0:
        lhs = s.gauge(m - Rk)
        rhs = (s.pole_sum_through(k) + math.sqrt(s.n + 1)) * (
            math.log(m + Rk) / math.log(m - Rk)
        )
        out["iii"] = lhs > rhs
    else:
        out["iii"] = False
    return out


def system13_margins(s: Schedule, k: int, m: float):
    """Signed slack of each inequality (positive = satisfied)."""
    b = s.blocks[k - 1]
    Rk = b.cert.R
    out = {"i": m - (Rk / s.eps0 + s.r0 + 1.0), "iv": m - (Rk + 1.0)}
    if k >= 2:
        prev = s.blocks[k - 2]
        sum_R = sum(bb.cert.R for bb in s.blocks[: k - 1])
        out["ii"] = (m - float(prev.modulus) - Rk - prev.cert.R) - sum_R * (k - 1) * 2.0**k
    else:
        out["ii"] = math.inf
    if m - Rk > 1.0:
        rhs = (s.pole_sum_through(k) + math.sqrt(s.n + 1)) * (
            math.log(m + Rk) / math.log(m - Rk)
        )
        out["iii"] = s.gauge(m - Rk) - rhs
    else:
        out["iii"] = -math.inf
    return out


def resolve_center(s: Schedule, k: int, cap: int = MAGNITUDE_CAP) -> complex:
    """Resolve block k (1-based); blocks 1..k-1 must be resolved already.
    Stores and returns the center m * e^{i rho_k} with minimal integer m."""
    if s.manual:
        raise ScheduleError("manual schedules are not resolved through the system")
    b = s.blocks[k - 1]
    for prev in s.blocks[: k - 1]:
        if not prev.resolved:
            raise ScheduleError(f"block {prev.k} unresolved before block {k}")
    Rk = b.cert.R

    lower = max(Rk / s.eps0 + s.r0 + 1.0, Rk + 1.0)
    if k >= 2:
        prev = s.blocks[k - 2]
        sum_R = sum(bb.cert.R for bb in s.blocks[: k - 1])
        lower = max(
            lower,
            float(prev.modulus) + Rk + prev.cert.R + sum_R * (k - 1) * 2.0**k,
        )
    m = int(math.floor(lower)) + 1
    if m > cap:
        raise CenterOverflowError(
            f"block {k}: threshold constraints need modulus {m} > cap {cap}",
            inequality="ii" if k >= 2 else "i",
        )

    def cond_iii(mm: int) -> bool:
        return system13_predicates(s, k, float(mm))["iii"]

    if not cond_iii(m):
        hi = m
        while not cond_iii(hi):
            hi *= 2
            if hi > cap:
                raise CenterOverflowError(
                    f"gauge too slow: center modulus overflows the {cap} cap "
                    f"at block {k} (inequality iii)",
                    inequality="iii",
                )
        lo = hi // 2  # cond_iii upward-closed: binary-search the first integer
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mid >= m and cond_iii(mid):
                hi = mid
            else:
                lo = mid
        m = max(m, hi)

    # polish against the literal predicates so the result is the exact
    # brute-force minimum even under 1-ulp reassociation differences
    def all_ok(mm: int) -> bool:
        return all(system13_predicates(s, k, float(mm)).values())

    while not all_ok(m):
        m += 1
        if m > cap:
            raise CenterOverflowError(
                f"block {k}: no admissible modulus below cap {cap}",
                inequality="iii",
            )
    while m > 1 and all_ok(m - 1):
        m -= 1

    b.modulus = m
    return b.center


def resolve_all(s: Schedule, cap: int = MAGNITUDE_CAP) -> Schedule:
    for k in range(1, len(s.blocks) + 1):
        resolve_center(s, k, cap)
    return s


def audit_system13(s: Schedule):
    """Re-evaluate every inequality for every block; also the minimality claim
    (m-1 violates something) and the disc separation consequences.

    Returns a report dict; report["passed"] is the conjunction.
    """
    if s.manual:
        raise ScheduleError("manual schedules carry no system-(13) guarantees")
    if not s.resolved:
        raise ScheduleError("audit needs a fully resolved schedule")
    rows = []
    passed = True
    for b in s.blocks:
        preds = system13_predicates(s, b.k, float(b.modulus))
        margins = system13_margins(s, b.k, float(b.modulus))
        minimal = b.modulus == 1 or not all(
            system13_predicates(s, b.k, float(b.modulus - 1)).values()
        )
        ok = all(preds.values()) and minimal
        passed = passed and ok
        rows.append(
            {
                "k": b.k,
                "modulus": b.modulus,
                "R": b.cert.R,
                "n_poles": b.n_poles,
                "predicates": preds,
                "margins": margins,
                "minimal": minimal,
                "ok": ok,
            }
        )
    # geometric separation: dist(D(a_l, R_l), closure D(a_k, R_k)) >= R_l (k-1) 2^k
    sep_rows = []
    for k in range(2, len(s.blocks) + 1):
        bk = s.blocks[k - 1]
        for l in range(1, k):
            bl = s.blocks[l - 1]
            dist = abs(bk.center - bl.center) - bk.cert.R - bl.cert.R
            need = bl.cert.R * (k - 1) * 2.0**k
            ok = dist >= need and dist > 0
            passed = passed and ok
            sep_rows.append({"l": l, "k": k, "distance": dist, "required": need, "ok": ok})
    return {"blocks": rows, "separation": sep_rows, "passed": passed}


# --- enumeration of the dictionary slice ------------------------------------

def _rationals_up_to(height: int):
    """All x with |numerator| <= height and denominator <= height, lowest
    terms, deterministic order."""
    vals = {Fraction(0)}
    for den in range(1, height + 1):
        for num in range(-height, height + 1):
            f = Fraction(num, den)
            if abs(f.numerator) <= height and f.denominator <= height:
                vals.add(f)
    return sorted(vals)


def _scalar_key(c: GaussianRational):
    return (c.re, c.im)


def enumerate_R(max_deg: int, max_height: int, n: int, cap: int = 200_000):
    """The finite slice of the dictionary: deg p0 <= max_deg, deg pj < deg p0,
    all coefficients x+iy with |num|, den <= max_height; deduplicated up to a
    common scalar multiple; deterministic order."""
    if max_deg < 1:
        raise ScheduleError("max_deg must be >= 1 (degree condition is vacuous at 0)")
    if max_height < 1:
        raise ScheduleError("max_height must be >= 1")
    fracs = _rationals_up_to(max_height)
    scalars = sorted(
        (GaussianRational(x, y) for x in fracs for y in fracs), key=_scalar_key
    )
    nonzero = [c for c in scalars if not c.is_zero()]

    out = []
    seen = set()
    for d0 in range(1, max_deg + 1):
        lows = list(itertools.product(scalars, repeat=d0))
        # distinct components of degree < d0 (trailing zeros collapse)
        comp_polys = []
        seen_p = set()
        for coeffs in itertools.product(scalars, repeat=d0):
            p = GPoly.make(coeffs)
            if p.coeffs not in seen_p:
                seen_p.add(p.coeffs)
                comp_polys.append(p)
        for lead in nonzero:
            inv = GaussianRational.of(1) / lead
            for low in lows:
                p0 = GPoly.make(low + (lead,))
                key0 = tuple(_scalar_key(c * inv) for c in p0.coeffs)
                for others in itertools.product(comp_polys, repeat=n):
                    key = (key0,) + tuple(
                        tuple(_scalar_key(c * inv) for c in p.coeffs) for p in others
                    )
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(RationalCurve((p0,) + others))
                    if len(out) > cap:
                        raise EnumerationCapError(
                            f"dictionary slice exceeds the {cap} curve cap"
                        )
    return out


# --- serialization -----------------------------------------------------------

def schedule_to_dict(s: Schedule) -> dict:
    return {
        "dimension": s.n,
        "gauge": s.gauge.to_dict(),
        "r0": s.r0,
        "eps0": s.eps0,
        "manual": s.manual,
        "blocks": [
            {
                "k": b.k,
                "curve": b.curve.to_strings(),
                "rep": b.rep,
                "angle": b.angle,
                "certificate": {
                    "delta": b.cert.delta,
                    "C": b.cert.C,
                    "k": b.cert.k,
                    "R": b.cert.R,
                },
                "n_poles": b.n_poles,
                "modulus": b.modulus,
            }
            for b in s.blocks
        ],
    }


def schedule_from_dict(d: dict) -> Schedule:
    gauge = GrowthGauge.from_dict(d["gauge"])
    blocks = []
    for bd in d["blocks"]:
        curve = RationalCurve.from_strings(bd["curve"])
        cert = DecayCertificate(
            delta=bd["certificate"]["delta"],
            C=bd["certificate"]["C"],
            k=bd["certificate"]["k"],
            R=bd["certificate"]["R"],
        )
        blocks.append(
            Block(
                curve=curve,
                rep=bd["rep"],
                angle=bd["angle"],
                k=bd["k"],
                cert=cert,
                n_poles=bd["n_poles"],
                modulus=bd["modulus"],
            )
        )
    return Schedule(
        n=d["dimension"],
        gauge=gauge,
        blocks=blocks,
        r0=d["r0"],
        eps0=d["eps0"],
        manual=d.get("manual", False),
    )


def dump_schedule(s: Schedule) -> str:
    return json.dumps(schedule_to_dict(s), indent=2, sort_keys=True) + "\n"


def load_schedule(text: str) -> Schedule:
    return schedule_from_dict(json.loads(text))
