"""Points of complex projective space and the Fubini-Study geometry used by
every approximation statement: the distance is the pure angle between the
representing complex lines (normalizing constant fixed to 1), and the pullback
density is the coefficient of (i/2pi) dz^dzbar for a holomorphically
parametrized curve.
"""

from __future__ import annotations

import math

import numpy as np


class ProjectiveError(ValueError):
    pass


class ProjPoint:
    """A point of CP^n held as a homogeneous complex vector (never zero)."""

    __slots__ = ("homog",)

    def __init__(self, homog):
        v = np.asarray(homog, dtype=np.complex128).reshape(-1)
        if v.size < 2:
            raise ProjectiveError("need at least 2 homogeneous coordinates")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ProjectiveError("non-finite homogeneous coordinates")
        if not np.any(v != 0):
            raise ProjectiveError("zero vector is not a projective point")
        self.homog = v

    @property
    def dim(self) -> int:
        return self.homog.size - 1

    def same_point(self, other: "ProjPoint", tol: float = 1e-9) -> bool:
        return fs_distance(self, other) <= tol

    def __repr__(self) -> str:
        inside = " : ".join(f"{c:.6g}" for c in self.homog)
        return f"[{inside}]"


def fs_distance(a, b) -> float:
    """Angle in [0, pi/2] between the lines spanned by a and b:
    arccos(|<a,b>| / (||a|| ||b||)).

    Evaluated through the orthogonal split b = lam*a + w (w perp a) as
    atan2(||w||, |lam| ||a||): the same angle, but accurate near 0 where the
    arccos form loses half the significant digits (and never needs clamping).
    """
    va = a.homog if isinstance(a, ProjPoint) else np.asarray(a, dtype=np.complex128)
    vb = b.homog if isinstance(b, ProjPoint) else np.asarray(b, dtype=np.complex128)
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise ProjectiveError("zero vector has no direction")
    lam = np.vdot(va, vb) / (na * na)
    w = vb - lam * va
    return math.atan2(np.linalg.norm(w), abs(lam) * na)


def fs_pullback_density(h, hprime) -> float:
    """Pullback density of the Fubini-Study form through z -> [1 : h(z)].

    Returns  S'/(1+S) - |<h', h>|^2/(1+S)^2  with S = sum |h_j|^2 and
    S' = sum |h_j'|^2; nonnegative by Cauchy-Schwarz, tiny negative
    round-off clamped to 0.
    """
    h = np.asarray(h, dtype=np.complex128).reshape(-1)
    hp = np.asarray(hprime, dtype=np.complex128).reshape(-1)
    s = 1.0 + float(np.sum(np.abs(h) ** 2))
    sp = float(np.sum(np.abs(hp) ** 2))
    cross = np.sum(np.conj(h) * hp)
    val = sp / s - (abs(cross) ** 2) / (s * s)
    return max(0.0, val)


def fs_pullback_density_homog(sigma, sigma_prime) -> float:
    """Same density from a local holomorphic lift sigma (no normalization of
    the first coordinate): (|s|^2 |s'|^2 - |<s', s>|^2) / |s|^4.

    Invariant under sigma -> g(z) sigma for holomorphic g, so it stays finite
    and accurate where the affine representation blows up (poles).
    """
    s = np.asarray(sigma, dtype=np.complex128).reshape(-1)
    sp = np.asarray(sigma_prime, dtype=np.complex128).reshape(-1)
    n2 = float(np.sum(np.abs(s) ** 2))
    if n2 == 0.0:
        raise ProjectiveError("lift vanishes; representation not reduced here")
    np2 = float(np.sum(np.abs(sp) ** 2))
    cross = np.sum(np.conj(s) * sp)
    val = (n2 * np2 - abs(cross) ** 2) / (n2 * n2)
    return max(0.0, val)
