import math

import numpy as np
import pytest

from unicurve.exactnum import GPoly, parse_gaussian
from unicurve.projective import fs_distance
from unicurve.rcurve import RationalCurve
from unicurve.runge import (
    ConstantComponent,
    CosComponent,
    EntireCurveSpec,
    ExpComponent,
    PolynomialComponent,
    RungeError,
    SinComponent,
    degree_bump,
    disc_grid,
    mu_for_epsilon,
    rationalize,
    round_to_gaussian,
)


def test_mu_values():
    assert mu_for_epsilon(math.pi / 2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        mu_for_epsilon(0.0)
    with pytest.raises(ValueError):
        mu_for_epsilon(2.0)


def test_disc_grid_step():
    g = disc_grid(2.0)
    assert len(g) == np.sum(np.abs(g) <= 2.0 + 1e-12)
    xs = np.unique(np.round(np.real(g), 12))
    assert np.max(np.diff(xs)) <= 0.125 + 1e-12


def test_round_to_gaussian_error_bound():
    rng = np.random.default_rng(7)
    for _ in range(200):
        c = complex(rng.normal(scale=3), rng.normal(scale=3))
        err = 10.0 ** rng.uniform(-8, -1)
        g = round_to_gaussian(c, err)
        assert abs(complex(g) - c) <= err
    # round-trip through the textual format is exact
    g = round_to_gaussian(0.1 + 0.2j, 1e-6)
    assert parse_gaussian(str(g)) == g


# --- degree bump -----------------------------------------------------------------

def test_degree_bump_example():
    # p0 = 1, others_maxdeg = 0, N = 1, budget = 0.1:
    # Q = 1 and the bound (1 + 1/M) - 1 < 0.1 first holds at the doubled M = 16
    out = degree_bump(GPoly.one(), 0, 1.0, 0.1)
    assert out.degree == 1
    assert [str(c) for c in out.coeffs] == ["1", "1/16"]


def test_degree_bump_huge_budget():
    out = degree_bump(GPoly.one(), 0, 1.0, 10.0)
    assert [str(c) for c in out.coeffs] == ["1", "1/2"]  # M = 2 accepted at once


def test_degree_bump_noop():
    p = GPoly.from_ints([1, 0, 1])
    assert degree_bump(p, 1, 2.0, 0.01) is p


def test_degree_bump_sup_perturbation():
    p = GPoly.from_ints([2, -1, 3])
    budget = 1e-3
    out = degree_bump(p, 4, 2.0, budget)
    assert out.degree == 5
    for z in disc_grid(2.0, 0.25):
        assert abs(out.eval_complex(z) - p.eval_complex(z)) < budget


# --- rationalize -------------------------------------------------------------------

def check_target(spec, N, eps):
    curve = rationalize(spec, N, eps)
    p0 = curve.polys[0]
    for p in curve.polys[1:]:
        assert p.degree < p0.degree  # exact integer comparison
    worst = max(
        fs_distance(curve.eval_homog(z), spec.value_vector(z)) for z in disc_grid(N)
    )
    assert worst < eps
    return curve, worst


def test_constant_curve_target():
    spec = EntireCurveSpec(
        n=1, components=[ConstantComponent(1.0), ConstantComponent(0.6 - 0.3j)]
    )
    curve, worst = check_target(spec, 1.0, 0.1)
    assert worst < 0.1


def test_exp_target():
    spec = EntireCurveSpec(n=1, components=[ConstantComponent(1.0), ExpComponent(1.0)])
    curve, _ = check_target(spec, 2.0, 0.05)
    # independent tail oracle: the smallest d with sum_{k>d} 2^k/k! < mu/(4 sqrt(2))
    mu = mu_for_epsilon(0.05)
    budget = mu / (4.0 * math.sqrt(2.0))

    def true_tail(d):
        s, k = 0.0, d + 1
        term = 2.0**k / math.factorial(k)
        while term > 1e-30:
            s += term
            k += 1
            term *= 2.0 / k
        return s

    d_oracle = 0
    while true_tail(d_oracle) >= budget:
        d_oracle += 1
    assert d_oracle == 8  # frozen: tail(7) ~ 8.1e-3 >= 4.42e-3 > tail(8) ~ 1.8e-3
    assert curve.polys[1].degree == d_oracle


def test_poly_self_approximation():
    spec = EntireCurveSpec(
        n=1,
        components=[PolynomialComponent([1, 0, 1]), PolynomialComponent([0, 1])],
        sigma=0.86,  # min of |z^2+1|^2 + |z|^2 on the disc is 3/4
    )
    curve, worst = check_target(spec, 2.0, 0.01)
    assert worst < 1e-3  # self-approximation is essentially exact


def test_sin_cos_targets():
    spec = EntireCurveSpec(
        n=2,
        components=[ConstantComponent(1.0), SinComponent(1.0), CosComponent(1.0)],
    )
    check_target(spec, 1.0, 0.1)


def test_sigma_certification_rejected():
    spec = EntireCurveSpec(
        n=1,
        components=[PolynomialComponent([1, 0, 1]), PolynomialComponent([0, 1])],
        sigma=1.0,  # false: the true minimum of the norm is sqrt(3)/2
    )
    with pytest.raises(RungeError):
        rationalize(spec, 2.0, 0.05)


def test_output_in_dictionary_class():
    spec = EntireCurveSpec(n=1, components=[ConstantComponent(1.0), ExpComponent(1.0)])
    curve = rationalize(spec, 1.0, 0.1)
    assert isinstance(curve, RationalCurve)
    # coefficients round-trip exactly through the textual format
    again = RationalCurve.from_strings(curve.to_strings())
    assert again.polys == curve.polys
