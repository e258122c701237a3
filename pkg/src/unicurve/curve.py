"""The constructed curve h(z) = [1 : h_1 : ... : h_n] with
h_j(z) = offset_j + sum_k g_j^{(k)}(z - a_k).

Evaluation strategy: away from poles the affine sum is computed by the packed
rational-block kernel; within the pole tolerance the nearest block k is split
off and the curve is evaluated on its exact homogeneous lift
[d(z-a_k) : n_j(z-a_k) + eps_j(z) d(z-a_k)], which stays finite because the
block numerators and denominator share no root and the foreign error terms are
holomorphic and small on the block's disc.

Derivatives are exact at the polynomial level: each component's derivative is
the rational (n'd - nd')/d^2 computed before any floating evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .projective import ProjPoint, fs_distance
from .rcurve import RationalCurve
from .runge import mu_for_epsilon
from .scheduler import Schedule

POLE_TOLERANCE = 1e-9


class PoleProximityError(RuntimeError):
    """Affine evaluation requested within pole tolerance; use eval_proj."""


@dataclass
class _Packed:
    num_flat: np.ndarray
    num_off: np.ndarray
    den_flat: np.ndarray
    den_off: np.ndarray


def _pack(pairs_per_block):
    """pairs_per_block[k][j] = (num GPoly, den GPoly) -> packed arrays."""
    nums, dens = [], []
    num_off, den_off = [0], [0]
    for pairs in pairs_per_block:
        for num, den in pairs:
            nc = num.complex_coeffs() if not num.is_zero() else np.zeros(0, np.complex128)
            dc = den.complex_coeffs()
            nums.append(nc)
            dens.append(dc)
            num_off.append(num_off[-1] + len(nc))
            den_off.append(den_off[-1] + len(dc))
    cat = lambda parts: (
        np.concatenate(parts) if parts else np.zeros(0, np.complex128)
    )
    return _Packed(
        num_flat=np.ascontiguousarray(cat(nums)),
        num_off=np.asarray(num_off, dtype=np.int64),
        den_flat=np.ascontiguousarray(cat(dens)),
        den_off=np.asarray(den_off, dtype=np.int64),
    )


class UniversalCurve:
    """Evaluator over a resolved (or manual) schedule.

    The optional affine offset adds a constant to each component; the pure
    construction never sets it (it exists so constant baseline curves can be
    pushed through the same characteristic machinery).
    """

    def __init__(self, schedule: Schedule, offset=None, root_seed: int = 0):
        if not (schedule.manual or schedule.resolved):
            raise ValueError("schedule must be resolved before evaluation")
        self.schedule = schedule
        self.n = schedule.n
        self.offset = (
            np.zeros(self.n, dtype=np.complex128)
            if offset is None
            else np.asarray(offset, dtype=np.complex128).reshape(self.n)
        )
        K = len(schedule.blocks)
        self.centers = np.array(
            [schedule.center_of(k) for k in range(1, K + 1)], dtype=np.complex128
        )

        value_pairs = []
        deriv_pairs = []
        self._block_d = []       # common denominator (monic GPoly) per block
        self._block_nums = []    # numerators over the common denominator
        for b in schedule.blocks:
            comps = b.curve.affine_components
            value_pairs.append(list(comps))
            dp = []
            for num, den in comps:
                dnum = num.derivative() * den - num * den.derivative()
                dp.append((dnum, den * den))
            deriv_pairs.append(dp)
            self._block_d.append(b.curve.common_denominator)
            self._block_nums.append(b.curve.numerators_over_common)
        self._value = _pack(value_pairs)
        self._deriv = _pack(deriv_pairs)

        poles = []
        for idx, b in enumerate(schedule.blocks):
            c = self.centers[idx]
            for w, mult in b.curve.pole_locations(seed=root_seed):
                poles.append((c + w, mult, idx + 1))
        self.poles = poles  # (location, multiplicity, owning block k)
        self._pole_locs = np.array([p[0] for p in poles], dtype=np.complex128)

    # --- pole bookkeeping ----------------------------------------------------

    def pole_distance(self, zs):
        """Distance from each point to the nearest pole (inf if none)."""
        zs = np.asarray(zs, dtype=np.complex128)
        if self._pole_locs.size == 0:
            return np.full(zs.shape, np.inf)
        d = np.abs(zs[..., None] - self._pole_locs)
        return d.min(axis=-1)

    def nearest_block(self, z: complex) -> int:
        """1-based index of the block whose center is nearest (0 if empty)."""
        if self.centers.size == 0:
            return 0
        return int(np.argmin(np.abs(self.centers - z))) + 1

    def in_any_disc(self, zs):
        zs = np.asarray(zs, dtype=np.complex128)
        flags = np.zeros(zs.shape, dtype=bool)
        for idx, b in enumerate(self.schedule.blocks):
            flags |= np.abs(zs - self.centers[idx]) <= b.cert.R
        return flags

    # --- evaluation ----------------------------------------------------------

    def _sum(self, packed: _Packed, zs, exclude=-1):
        if self.centers.size == 0:
            zs = np.asarray(zs, dtype=np.complex128)
            return np.zeros(zs.shape + (self.n,), dtype=np.complex128)
        return kernels.rational_block_sum(
            packed.num_flat,
            packed.num_off,
            packed.den_flat,
            packed.den_off,
            self.centers,
            zs,
            exclude,
        )

    def eval_affine(self, zs, check_poles: bool = True):
        """h_1..h_n at zs; raises PoleProximityError within pole tolerance."""
        zs_arr = np.asarray(zs, dtype=np.complex128)
        if check_poles and self.poles:
            dmin = self.pole_distance(zs_arr)
            if np.any(dmin < POLE_TOLERANCE):
                bad = np.asarray(zs_arr)[dmin < POLE_TOLERANCE]
                raise PoleProximityError(
                    f"point within pole tolerance of a pole: {bad.ravel()[0]:.9g}"
                )
        return self._sum(self._value, zs_arr) + self.offset

    def eval_derivative(self, zs, check_poles: bool = True):
        zs_arr = np.asarray(zs, dtype=np.complex128)
        if check_poles and self.poles:
            dmin = self.pole_distance(zs_arr)
            if np.any(dmin < POLE_TOLERANCE):
                raise PoleProximityError("derivative requested within pole tolerance")
        return self._sum(self._deriv, zs_arr)

    def error_term(self, k: int, zs):
        """sum over blocks l != k (plus the offset), the foreign contribution
        on block k's disc; holomorphic there, so no pole check."""
        zs_arr = np.asarray(zs, dtype=np.complex128)
        return self._sum(self._value, zs_arr, exclude=k - 1) + self.offset

    def error_term_derivative(self, k: int, zs):
        zs_arr = np.asarray(zs, dtype=np.complex128)
        return self._sum(self._deriv, zs_arr, exclude=k - 1)

    def block_lift(self, k: int, z: complex):
        """Exact local lift at block k: (sigma_0, ..., sigma_n) with
        sigma_0 = d(z - a_k), sigma_j = n_j(z - a_k) + eps_j(z) d(z - a_k)."""
        zc = complex(z) - self.schedule.center_of(k)
        d = self._block_d[k - 1].eval_complex(zc)
        eps = self.error_term(k, complex(z))
        out = np.empty(self.n + 1, dtype=np.complex128)
        out[0] = d
        for j, nj in enumerate(self._block_nums[k - 1]):
            out[j + 1] = nj.eval_complex(zc) + eps[j] * d
        return out

    def eval_proj(self, z: complex) -> ProjPoint:
        """Projective value, valid straight through poles."""
        z = complex(z)
        if self.poles:
            d = self.pole_distance(np.array([z]))[0]
            if d < POLE_TOLERANCE:
                idx = int(np.argmin(np.abs(self._pole_locs - z)))
                return ProjPoint(self.block_lift(self.poles[idx][2], z))
        h = self.eval_affine(np.array([z]), check_poles=False)[0]
        return ProjPoint(np.concatenate(([1.0 + 0j], h)))

    def tail_bound_after(self, K: int) -> float:
        """What a streaming schedule would still add beyond block K, for
        points outside the dropped discs: sum_{k>K} 2^{-k} = 2^{-K}."""
        return 2.0 ** (-K)

    # --- bound checks ----------------------------------------------------------

    def outside_disc_bound_check(self, samples) -> "OutsideBoundReport":
        """max_j |h_j| < 1 on every sample outside all discs (Lemma-style
        envelope); samples inside a disc are filtered, not evaluated."""
        zs = np.asarray(samples, dtype=np.complex128).ravel()
        keep = ~self.in_any_disc(zs)
        zs = zs[keep]
        if zs.size == 0:
            return OutsideBoundReport(0, 0.0, None, True, [])
        h = self.eval_affine(zs)
        mags = np.abs(h)
        worst_flat = int(np.argmax(mags))
        worst_point = zs[worst_flat // self.n]
        max_abs = float(mags.ravel()[worst_flat])
        violations = [
            complex(zs[i]) for i in np.nonzero(np.any(mags >= 1.0, axis=-1))[0]
        ]
        return OutsideBoundReport(
            checked=int(zs.size),
            max_abs=max_abs,
            worst_point=complex(worst_point),
            passed=len(violations) == 0,
            violations=violations[:16],
        )

    def error_term_bound_check(self, grid_per_disc: int = 17) -> list:
        """|eps_j^{(k)}| < 2^{-k+1} on a grid of each closed disc."""
        out = []
        for idx, b in enumerate(self.schedule.blocks):
            k = idx + 1
            c = self.centers[idx]
            R = b.cert.R
            ax = np.linspace(-R, R, grid_per_disc)
            zz = (c + ax[None, :] + 1j * ax[:, None]).ravel()
            zz = zz[np.abs(zz - c) <= R]
            eps = self._sum(self._value, zz, exclude=idx) + self.offset
            mags = np.abs(eps)
            bound = 2.0 ** (-k + 1)
            out.append(
                {
                    "k": k,
                    "bound": bound,
                    "max_error_term": float(mags.max()) if mags.size else 0.0,
                    "points": int(zz.size),
                    "ok": bool(np.all(mags < bound)),
                }
            )
        return out

    def universality_check(
        self, N: float, eps: float, grid_points: int = 41
    ) -> "UniversalityReport":
        """Find a block k with R_k > N whose translated window approximates its
        own dictionary curve within eps on a grid of the closed N-disc.

        Preconditions checked per candidate before measuring: the dictionary
        curve has coordinate norm >= 1 on the disc, and the measured foreign
        error satisfies max_j |eps_j| <= delta/(sqrt(n+1) M) with
        delta = mu_for_epsilon(eps/2) and M >= max |p0| on the disc.
        """
        ax = np.linspace(-N, N, grid_points)
        zz = (ax[None, :] + 1j * ax[:, None]).ravel()
        zz = zz[np.abs(zz) <= N + 1e-12]
        delta = mu_for_epsilon(eps / 2.0)
        candidates = [b for b in self.schedule.blocks if b.cert.R > N]
        tried = []
        for b in candidates:
            k = b.k
            curve = b.curve
            p0 = curve.polys[0]
            pvals = np.stack([
                np.array([p.eval_complex(z) for p in curve.polys]) for z in zz
            ])
            norms = np.linalg.norm(pvals, axis=1)
            if norms.min() < 1.0 - 1e-12:
                tried.append({"k": k, "reason": "dictionary curve norm < 1 on disc"})
                continue
            M = p0.coeff_abs_sum() * max(1.0, N) ** int(p0.degree)
            threshold = delta / (math.sqrt(self.n + 1) * M)
            a_k = self.schedule.center_of(k)
            errs = np.abs(self.error_term(k, zz + a_k))
            err_max = float(errs.max())
            if err_max > threshold:
                tried.append(
                    {
                        "k": k,
                        "reason": "error term above threshold",
                        "error_max": err_max,
                        "threshold": threshold,
                    }
                )
                continue
            worst = -1.0
            worst_z = None
            for z in zz:
                dist = fs_distance(self.eval_proj(z + a_k), curve.eval_homog(z))
                if dist > worst:
                    worst = dist
                    worst_z = complex(z)
            return UniversalityReport(
                block=k,
                sup_distance=worst,
                worst_point=worst_z,
                error_max=err_max,
                error_threshold=threshold,
                eps=eps,
                passed=worst < eps,
                needs_extension=False,
                tried=tried,
            )
        return UniversalityReport(
            block=None,
            sup_distance=math.nan,
            worst_point=None,
            error_max=math.nan,
            error_threshold=math.nan,
            eps=eps,
            passed=False,
            needs_extension=True,
            tried=tried,
        )


@dataclass
class OutsideBoundReport:
    checked: int
    max_abs: float
    worst_point: Optional[complex]
    passed: bool
    violations: list


@dataclass
class UniversalityReport:
    block: Optional[int]
    sup_distance: float
    worst_point: Optional[complex]
    error_max: float
    error_threshold: float
    eps: float
    passed: bool
    needs_extension: bool
    tried: list
