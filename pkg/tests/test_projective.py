import math

import numpy as np
import pytest

from unicurve.projective import (
    ProjPoint,
    ProjectiveError,
    fs_distance,
    fs_pullback_density,
    fs_pullback_density_homog,
)
from unicurve.runge import mu_for_epsilon

RNG = np.random.default_rng(0)


def rand_vec(n):
    return RNG.normal(size=n) + 1j * RNG.normal(size=n)


def test_orthogonal_lines():
    assert fs_distance([1, 0], [0, 1]) == pytest.approx(math.pi / 2)


def test_scale_invariance_exact_pair():
    v = [1 + 2j, -3j]
    assert fs_distance(v, [(2 - 1j) * c for c in v]) == pytest.approx(0.0, abs=1e-12)


def test_angle_pi_over_4():
    # direct inner product: |<(1,0),(1,1)>| / (1 * sqrt(2)) = 1/sqrt(2)
    assert fs_distance([1, 0], [1, 1]) == pytest.approx(math.pi / 4)


def test_zero_vector_rejected():
    with pytest.raises(ProjectiveError):
        ProjPoint([0, 0])
    with pytest.raises(ProjectiveError):
        fs_distance([0, 0], [1, 0])


def test_distance_symmetric_and_zero_iff_equal():
    for _ in range(50):
        a, b = rand_vec(3), rand_vec(3)
        assert fs_distance(a, b) == pytest.approx(fs_distance(b, a), abs=1e-12)
    v = rand_vec(4)
    assert fs_distance(v, 2.7j * v) <= 1e-7
    assert ProjPoint(v).same_point(ProjPoint(-1j * v))


def test_triangle_inequality_random():
    for _ in range(300):
        a, b, c = rand_vec(3), rand_vec(3), rand_vec(3)
        assert fs_distance(a, c) <= fs_distance(a, b) + fs_distance(b, c) + 1e-9


def test_rescaling_invariance_random():
    for _ in range(200):
        a, b = rand_vec(4), rand_vec(4)
        la = complex(RNG.normal(), RNG.normal())
        lb = complex(RNG.normal(), RNG.normal())
        if abs(la) < 1e-3 or abs(lb) < 1e-3:
            continue
        d0 = fs_distance(a, b)
        d1 = fs_distance(la * a, lb * b)
        assert abs(d0 - d1) <= 1e-9


# --- pullback density ---------------------------------------------------------

def test_density_constant_curve():
    assert fs_pullback_density([0.3 + 1j], [0.0]) == 0.0


def test_density_origin():
    # n=1, h=0, h'=1: 1/(1+0) - 0 = 1
    assert fs_pullback_density([0.0], [1.0]) == pytest.approx(1.0)


def test_density_unit_circle_point():
    # n=1, h=z0 with |z0|=1, h'=1: 1/2 - 1/4 = 1/4
    z0 = complex(math.cos(0.7), math.sin(0.7))
    assert fs_pullback_density([z0], [1.0]) == pytest.approx(0.25)


def test_density_nonnegative_random():
    for _ in range(500):
        n = int(RNG.integers(1, 4))
        val = fs_pullback_density(rand_vec(n), rand_vec(n))
        assert val >= 0.0


def test_density_degenerate_equals_upper_bound():
    # h = 0 makes the cross term vanish: density == S'/(1+S) exactly
    hp = rand_vec(3)
    sp = float(np.sum(np.abs(hp) ** 2))
    assert fs_pullback_density(np.zeros(3), hp) == pytest.approx(sp / 1.0)


def test_density_homog_matches_affine():
    for _ in range(200):
        n = int(RNG.integers(1, 4))
        h, hp = rand_vec(n), rand_vec(n)
        sigma = np.concatenate(([1.0 + 0j], h))
        sigma_p = np.concatenate(([0.0 + 0j], hp))
        assert fs_pullback_density_homog(sigma, sigma_p) == pytest.approx(
            fs_pullback_density(h, hp), rel=1e-10, abs=1e-12
        )


def test_density_homog_gauge_invariance():
    # sigma -> g(z) sigma leaves the density alone; check the algebraic identity
    # at a point with g value and derivative (gv, gd):
    # sigma2 = gv*sigma, sigma2' = gd*sigma + gv*sigma'
    for _ in range(100):
        sigma, sigma_p = rand_vec(3), rand_vec(3)
        gv = complex(RNG.normal(), RNG.normal())
        gd = complex(RNG.normal(), RNG.normal())
        if abs(gv) < 1e-3:
            continue
        d0 = fs_pullback_density_homog(sigma, sigma_p)
        d1 = fs_pullback_density_homog(gv * sigma, gd * sigma + gv * sigma_p)
        assert d1 == pytest.approx(d0, rel=1e-8, abs=1e-10)


# --- the perturbation lemma behind the Runge engine ---------------------------

def test_perturbation_radius_guarantee():
    # ||a|| >= 1 and ||b-a|| <= mu_for_epsilon(eps) force fs_distance < eps
    for trial in range(10_000):
        n = 2 + trial % 3
        a = rand_vec(n)
        a = a / np.linalg.norm(a) * (1.0 + abs(RNG.normal()))
        eps = float(RNG.uniform(1e-3, math.pi / 2))
        mu = mu_for_epsilon(eps)
        step = rand_vec(n)
        b = a + mu * step / np.linalg.norm(step)
        assert fs_distance(a, b) < eps


def test_mu_monotone_to_zero():
    eps = np.linspace(1e-6, math.pi / 2, 50)
    mus = [mu_for_epsilon(e) for e in eps]
    assert all(m1 > m0 for m0, m1 in zip(mus, mus[1:]))
    assert mus[0] < 1e-6
    assert mus[-1] == pytest.approx(0.5)
