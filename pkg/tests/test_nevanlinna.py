import math

import numpy as np
import pytest

from unicurve.curve import UniversalCurve
from unicurve.nevanlinna import (
    PoleOnCircleError,
    QuadConfig,
    bound_lemma5,
    characteristic_area,
    characteristic_fmt,
    classify_radius,
    counting,
    growth_report,
    log_grid,
    nudge_radius,
    proximity,
)
from unicurve.scheduler import Schedule, build_schedule, resolve_all

QUAD = QuadConfig()


@pytest.fixture(scope="module")
def const_curve(gauge):
    """[1 : c] with c = 3 + 4i via the affine offset over an empty schedule."""
    s = Schedule.manual_schedule(1, gauge, [])
    return UniversalCurve(s, offset=[3.0 + 4.0j])


# --- proximity -----------------------------------------------------------------

def test_proximity_constant_curve(const_curve):
    # integrand is theta-independent: log sqrt(1 + |c|^2) = log sqrt(26)
    want = math.log(math.sqrt(1 + 25.0))
    for r in (1.0, 7.0, 123.0):
        assert proximity(const_curve, r, QUAD) == pytest.approx(want, abs=1e-12)


def test_proximity_inv_z_closed_form(inv_z_curve):
    for r in (1.0, 2.0, 9.0, 400.0):
        want = 0.5 * math.log(1.0 + 1.0 / r**2)
        assert proximity(inv_z_curve, r, QUAD) == pytest.approx(want, abs=1e-9)


def test_proximity_between_discs_bounded(ucurve_n1_k6):
    u = ucurve_n1_k6
    n = u.n
    # between-discs circle: |h_j| < 1 so m <= log sqrt(n+1) <= sqrt(n+1)
    r = 0.5 * (51 + 6 + 92 - 10)  # between disc 1 and disc 2
    m = proximity(u, r, QUAD)
    assert m <= math.log(math.sqrt(n + 1))
    assert m <= math.sqrt(n + 1)


def test_proximity_pole_on_circle_rejected(inv_z_curve):
    with pytest.raises(PoleOnCircleError):
        proximity(inv_z_curve, 1e-12, QUAD)


def test_quadrature_cap_reported(ucurve_n1_k6):
    from unicurve.nevanlinna import QuadratureError

    starved = QuadConfig(tol=1e-15, min_panels=4, max_panels=8)
    with pytest.raises(QuadratureError):
        proximity(ucurve_n1_k6, 51.5, starved)  # near disc 1, needs real panels


def test_nudge_radius(ucurve_n1_k6):
    u = ucurve_n1_k6
    pole_mag = abs(u.poles[0][0])
    r, nudged = nudge_radius(u, pole_mag)
    assert nudged and r > pole_mag
    r2, nudged2 = nudge_radius(u, pole_mag * 1.5)
    assert not nudged2 and r2 == pole_mag * 1.5


# --- counting -------------------------------------------------------------------

def test_counting_no_poles_inside(ucurve_n1_k6):
    assert counting(ucurve_n1_k6, 40.0) == 0.0


def test_counting_single_pole_log():
    # one simple pole at |p| = 2: N(2e) = log(2e/2) = 1
    from unicurve.rcurve import RationalCurve
    from unicurve.scheduler import GrowthGauge

    g = GrowthGauge.scaled_log(1.0, 1.0)
    c = RationalCurve.from_strings([["0", "1"], ["1"]])
    u = UniversalCurve(Schedule.manual_schedule(1, g, [(c, 2.0 + 0.0j)]))
    assert counting(u, 2 * math.e) == pytest.approx(1.0, abs=1e-12)


def test_counting_pole_inside_unit_disc(inv_z_curve):
    # pole at 0: the max(|p|, 1) floor gives N(e) = log(e) = 1
    assert counting(inv_z_curve, math.e) == pytest.approx(1.0, abs=1e-12)


def test_counting_multiplicity(gauge):
    from unicurve.rcurve import RationalCurve

    # [z^2 : z : 1] has one pole of max-order 2 at the center
    c = RationalCurve.from_strings([["0", "0", "1"], ["0", "1"], ["1"]])
    u = UniversalCurve(Schedule.manual_schedule(2, gauge, [(c, 5.0 + 0.0j)]))
    assert counting(u, 5 * math.e) == pytest.approx(2.0, abs=1e-12)


# --- characteristic, both routes ---------------------------------------------------

def test_characteristic_constant_is_zero(const_curve):
    for r in (1.0, 10.0, 1e3):
        assert abs(characteristic_fmt(const_curve, r, QUAD)) < 1e-10
    val, err = characteristic_area(const_curve, 50.0, QUAD)
    assert abs(val) < 1e-10


def test_characteristic_t1_zero(ucurve_n1_k6, inv_z_curve, const_curve):
    for u in (ucurve_n1_k6, inv_z_curve, const_curve):
        assert characteristic_fmt(u, 1.0, QUAD) == 0.0


def test_inv_z_closed_form_fmt(inv_z_curve):
    for r in np.geomspace(1.0, 1e3, 50):
        want = 0.5 * math.log(r * r + 1.0) - 0.5 * math.log(2.0)
        got = characteristic_fmt(inv_z_curve, float(r), QUAD)
        assert got == pytest.approx(want, abs=1e-6)


def test_inv_z_area_matches_fmt(inv_z_curve):
    for r in (2.0, 10.0, 100.0):
        want = 0.5 * math.log(r * r + 1.0) - 0.5 * math.log(2.0)
        got, err = characteristic_area(inv_z_curve, r, QUAD)
        assert got == pytest.approx(want, abs=max(1e-8, 10 * err))


def test_area_annulus_against_midpoint_rule(inv_z_curve):
    # pole-free annulus mass: integral over 2 <= |z| <= 3 of the density,
    # checked against a brute 2-d midpoint rule
    u = inv_z_curve
    from unicurve.nevanlinna import _ring_density_mean

    val = 0.0
    rhos = np.linspace(2.0, 3.0, 201)
    for r0, r1 in zip(rhos, rhos[1:]):
        mid = 0.5 * (r0 + r1)
        val += 2.0 * mid * _ring_density_mean(u, mid, QUAD) * (r1 - r0)
    # oracle: midpoint rule on a fine polar grid with the raw density formula
    nr, nt = 400, 512
    rr = np.linspace(2.0, 3.0, nr + 1)
    acc = 0.0
    for r0, r1 in zip(rr, rr[1:]):
        mid = 0.5 * (r0 + r1)
        th = 2 * np.pi * (np.arange(nt) + 0.5) / nt
        zs = mid * np.exp(1j * th)
        h = 1.0 / zs
        hp = -1.0 / zs**2
        dens = (np.abs(hp) ** 2) / (1 + np.abs(h) ** 2) - np.abs(
            np.conj(h) * hp
        ) ** 2 / (1 + np.abs(h) ** 2) ** 2
        acc += float(np.mean(dens)) * 2 * mid * (r1 - r0)
    assert val == pytest.approx(acc, abs=1e-6)


def test_fmt_vs_area_two_block(ucurve_2block):
    u = ucurve_2block
    m1 = proximity(u, 1.0, QUAD)
    for r in (30.0, 70.0, 140.0):
        r, _ = nudge_radius(u, r)
        t_fmt = characteristic_fmt(u, r, QUAD, m1=m1)
        t_area, _err = characteristic_area(u, r, QUAD)
        assert abs(t_area - t_fmt) <= max(1e-2, 1e-2 * abs(t_fmt))


# --- analytic bounds ----------------------------------------------------------------

def test_classify_radius(schedule_n1_k6):
    s = schedule_n1_k6
    m1, m2 = s.blocks[0].modulus, s.blocks[1].modulus
    R1, R2 = s.blocks[0].cert.R, s.blocks[1].cert.R
    assert classify_radius(s, (m1 - R1) / 2)[0] == "below-first-disc"
    assert classify_radius(s, float(m1)) == ("straddling-disc", 1)
    mid = 0.5 * (m1 + R1 + m2 - R2)
    assert classify_radius(s, mid) == ("between-discs", 1)
    top = 2.0 * (s.blocks[-1].modulus + s.blocks[-1].cert.R)
    assert classify_radius(s, top) == ("between-discs", len(s.blocks))


def test_bound_lemma5_cases(schedule_n1_k6):
    s = schedule_n1_k6
    root2 = math.sqrt(2.0)
    assert bound_lemma5(s, 20.0) == root2
    m1, R1 = s.blocks[0].modulus, s.blocks[0].cert.R
    r_mid = m1 + R1 + 5.0
    assert bound_lemma5(s, r_mid) == pytest.approx(
        s.pole_sum_through(1) * math.log(r_mid) + root2
    )
    # straddling: frozen at the outer edge of the disc
    assert bound_lemma5(s, float(m1)) == pytest.approx(
        s.pole_sum_through(1) * math.log(m1 + R1) + root2
    )


def test_fmt_below_lemma_bound(ucurve_n1_k6):
    u = ucurve_n1_k6
    for r in (10.0, 70.0, 51.0, 600.0, 30000.0):
        r2, _ = nudge_radius(u, r)
        assert characteristic_fmt(u, r2, QUAD) <= bound_lemma5(u.schedule, r2) + 1e-6


def test_small_r_regime_bound(ucurve_n1_k6):
    # for r <= r0 the paper's chain gives T <= n r0^2 (r0+1)^2 eps0^2 log r
    u = ucurve_n1_k6
    s = u.schedule
    cap = s.n * s.r0**2 * (s.r0 + 1) ** 2 * s.eps0**2
    for r in (1.5, 2.0, s.r0):
        T = characteristic_fmt(u, r, QUAD)
        assert T <= cap * math.log(r) + 1e-9
        assert cap * math.log(r) <= s.gauge(1.0) * math.log(r) + 1e-12


# --- growth report -------------------------------------------------------------------

def test_growth_report_passes_n1(ucurve_n1_k6):
    u = ucurve_n1_k6
    rmax = 2.0 * max(b.modulus for b in u.schedule.blocks)
    rep = growth_report(u, log_grid(1.0, rmax, 120))
    assert rep.passed and rep.strict_ok and rep.lemma_ok and rep.monotone_ok
    assert all(row.margin > 0 for row in rep.rows[1:])
    first = rep.rows[0]
    assert first.r == 1.0 and first.T_fmt == 0.0 and first.bound == 0.0


def test_growth_report_empty_schedule(gauge):
    u = UniversalCurve(Schedule.manual_schedule(1, gauge, []))
    rep = growth_report(u, log_grid(1.0, 100.0, 20))
    assert rep.passed
    assert all(row.T_fmt == 0.0 for row in rep.rows)


def test_growth_report_monotone_column(ucurve_n1_k6):
    u = ucurve_n1_k6
    rep = growth_report(u, log_grid(1.0, 1e5, 60))
    ts = [row.T_fmt for row in rep.rows]
    assert all(b >= a - 1e-6 for a, b in zip(ts, ts[1:]))


def test_growth_csv_shape(ucurve_n1_k6):
    rep = growth_report(ucurve_n1_k6, log_grid(1.0, 100.0, 5))
    lines = list(rep.csv_lines())
    assert lines[0].startswith("r,T_fmt,T_area,N,m,")
    assert len(lines) == 6
