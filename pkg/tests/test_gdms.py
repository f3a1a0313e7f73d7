import math

import numpy as np
import pytest

from cuspwind import gdms
from cuspwind.errors import NonConvergence, NoSignChange
from cuspwind.gdms import (
    FreeEnergyCurve,
    GdmsSystem,
    block_partition_sum,
    block_word_geometry,
    collapsed_log_radius,
    finiteness_threshold,
    free_energy,
    free_energy_curve,
    left_asymptote_check,
    letter_series_log,
    log_zeta_tail,
    partition_sum,
    pressure,
)
from cuspwind.induced import eq4_constant, fuchsian_system, letter_series_sweep


def full_shift(k, zeta_value=0.0, psi_value=0.0):
    return GdmsSystem(
        name="full-shift-%d" % k,
        n_keys=1,
        in_keys=np.zeros(k, dtype=np.int64),
        out_keys=np.zeros(k, dtype=np.int64),
        zeta=np.full(k, zeta_value),
        psi=np.full(k, psi_value),
    )


def three_vertex_system(ratios):
    """Cyclic 3-vertex GDMS with constant-derivative contractions."""
    in_keys = np.array([0, 1, 2], dtype=np.int64)
    out_keys = np.array([1, 2, 0], dtype=np.int64)
    return GdmsSystem(
        name="three-vertex",
        n_keys=3,
        in_keys=in_keys,
        out_keys=out_keys,
        zeta=np.log(np.asarray(ratios)),
        psi=np.zeros(3),
    )


# --- zeta tail --------------------------------------------------------------

def test_log_zeta_tail_against_direct_sum():
    for s in (1.5, 2.0, 3.7):
        direct = sum(n ** (-s) for n in range(201, 40000)) \
            + (39999.0 ** (1 - s)) / (s - 1)
        assert log_zeta_tail(s - 1.0, 200) == pytest.approx(
            math.log(direct), abs=1e-6)


def test_log_zeta_tail_near_one():
    # s - 1 = 1e-200: tail ~ m^(1-s)/(s-1): log = -(s-1) log m + 200 log 10
    val = log_zeta_tail(1e-200, 400)
    assert val == pytest.approx(-math.log(1e-200), rel=1e-6)
    assert math.isinf(log_zeta_tail(0.0, 400))


# --- pressure on toy systems -------------------------------------------------

def test_full_shift_pressure_log_k():
    for k in (2, 5, 11):
        sysm = full_shift(k)
        res = pressure(sysm, 0.7, -0.3, tail=False)
        assert res.value == pytest.approx(math.log(k), abs=1e-10)


def test_pressure_power_matches_collapsed(onecusp):
    sysm = fuchsian_system(onecusp, 60)
    for t, beta in ((0.7, 0.0), (1.0, 0.5), (0.52, 0.1)):
        p1 = pressure(sysm, t, beta, method="power").value
        p2 = pressure(sysm, t, beta, method="collapsed").value
        assert p1 == pytest.approx(p2, abs=5e-9)


def test_pressure_strictly_decreasing_in_t(gamma2):
    sysm = fuchsian_system(gamma2, 80)
    ts = np.linspace(0.55, 1.6, 8)
    vals = [pressure(sysm, float(t), 0.0, method="collapsed").value for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_pressure_monotone_in_cap_plain(gamma2):
    vals = []
    for cap in (10, 20, 40, 80):
        sysm = fuchsian_system(gamma2, cap)
        vals.append(pressure(sysm, 0.8, 0.1, tail=False,
                             method="collapsed").value)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_pressure_convex_in_t_and_beta(onecusp):
    sysm = fuchsian_system(onecusp, 60)
    ts = np.linspace(0.6, 1.4, 7)
    vals = [pressure(sysm, float(t), 0.25, method="collapsed").value for t in ts]
    second = np.diff(vals, 2)
    assert np.all(second >= -1e-6)
    bs = np.linspace(-0.5, 1.5, 7)
    vals_b = [pressure(sysm, 0.9, float(b), method="collapsed").value for b in bs]
    assert np.all(np.diff(vals_b, 2) >= -1e-6)


def test_pressure_divergence_flag(gamma2):
    sysm = fuchsian_system(gamma2, 50)
    res = pressure(sysm, 0.5, 0.0)  # t + beta = 1/2 exactly
    assert math.isinf(res.value)
    assert not res.finite


# --- partition sums ----------------------------------------------------------

def test_partition_sum_single_edge():
    sysm = full_shift(1, zeta_value=-1.0)
    assert partition_sum(sysm, 1.0, 0.0, 1) == pytest.approx(-1.0)


def test_partition_sum_constant_weights():
    k, w = 4, -0.35
    sysm = full_shift(k, zeta_value=w)
    for n in (1, 2, 5):
        expect = n * w + n * math.log(k)
        assert partition_sum(sysm, 1.0, 0.0, n) == pytest.approx(expect, abs=1e-10)


def test_block_partition_sum_subadditive(gamma2):
    c0 = gamma2.constant_c0(64).value
    t, beta = 0.9, 0.2
    geos = {n: block_word_geometry(gamma2, n, 3) for n in (2, 3, 4, 5)}
    z = {n: block_partition_sum(gamma2, t, beta, n, 3, geos[n]) for n in geos}
    assert z[4] <= z[2] + z[2] + 2 * abs(t) * c0 + 1e-9
    assert z[5] <= z[2] + z[3] + 2 * abs(t) * c0 + 1e-9


def test_pressure_close_to_block_sums(onecusp):
    """Two independent routes: operator spectral radius vs direct Z_n."""
    c0 = onecusp.constant_c0(64).value
    dhat = eq4_constant(onecusp, samples=40, letters_each=6)
    sysm = fuchsian_system(onecusp, 3, restricted=True)
    rng = np.random.default_rng(8)
    geos = {n: block_word_geometry(onecusp, n, 3) for n in (2, 3, 4, 5)}
    for _ in range(8):
        t = float(rng.uniform(0.45, 1.5))
        beta = float(rng.uniform(-0.8, 1.2))
        if 2.0 * (t + beta) < 1.2:
            continue
        p = pressure(sysm, t, beta, tail=False).value
        for n in (2, 3, 4, 5):
            zn = block_partition_sum(onecusp, t, beta, n, 3, geos[n]) / n
            assert abs(p - zn) <= (2 * abs(t) * c0 + dhat) / n + 1e-9


# --- free energy -------------------------------------------------------------

def test_full_shift_free_energy_analytic():
    # constant contraction ratio: t(beta) = log k / chi for every beta
    k, chi = 6, 1.7
    sysm = full_shift(k, zeta_value=-chi)
    for beta in (-2.0, 0.0, 3.0):
        pt = free_energy(sysm, beta, tail=False)
        assert pt.t == pytest.approx(math.log(k) / chi, abs=1e-8)


def test_three_vertex_instance_independence():
    # cycle of three constant contractions: pressure(t) = mean log r * t,
    # so the root of pressure - log 1 is where the cycle product is 1
    ratios = (0.5, 0.25, 0.125)
    sysm = three_vertex_system(ratios)
    t_expected = 0.0  # cycle product 1 at t = 0... shifted below
    # P(t) = (1/3) log prod(r^t) = t * mean(log r); root at t = 0 is trivial,
    # so check against the analytically solvable pressure instead
    for t in (0.3, 0.9, 1.7):
        expect = t * np.mean(np.log(ratios))
        got = pressure(sysm, t, 0.0, tail=False).value
        assert got == pytest.approx(expect, abs=1e-8)
    # and a genuinely nontrivial root: add a constant to zeta
    sys2 = GdmsSystem(
        name="three-vertex-shifted", n_keys=3,
        in_keys=sysm.in_keys, out_keys=sysm.out_keys,
        zeta=sysm.zeta, psi=np.ones(3))
    # P(t) = t mean(log r) + beta; root t(beta) = beta / -mean(log r)
    for beta in (0.5, 1.0):
        pt = free_energy(sys2, beta, tail=False)
        assert pt.t == pytest.approx(beta / -np.mean(np.log(ratios)), abs=1e-7)


def test_free_energy_residual_small(any_group):
    sysm = fuchsian_system(any_group, 100)
    pt = free_energy(sysm, 0.0)
    assert pt.residual <= 1e-8
    assert pt.r > 0.0


def test_delta_c_restricted_finite_system(any_group):
    restricted = fuchsian_system(any_group, 2, restricted=True)
    pt = free_energy(restricted, 0.0, tail=False)
    assert pt.residual <= 1e-8
    full = free_energy(fuchsian_system(any_group, 100), 0.0)
    assert 0.0 < pt.t < full.t - 0.01  # delta_c strictly below delta


def test_t_beta_approaches_delta_c(any_group):
    sysm = fuchsian_system(any_group, 100)
    restricted = fuchsian_system(any_group, 2, restricted=True)
    dc = free_energy(restricted, 0.0, tail=False).t
    t20 = free_energy(sysm, 20.0).t
    assert abs(t20 - dc) <= 0.05


def test_left_asymptote_band(any_group):
    sysm = fuchsian_system(any_group, 100)
    assert left_asymptote_check(sysm, -20.0, 0.1)
    with pytest.raises(ValueError):
        left_asymptote_check(sysm, -1.0, 0.1)


def test_finiteness_threshold_values(gamma2):
    sysm = fuchsian_system(gamma2, 10)
    assert finiteness_threshold(sysm, 0.0) == pytest.approx(0.5)
    assert finiteness_threshold(sysm, 2.0) == pytest.approx(-1.5)


def test_letter_series_divergence_split(gamma2):
    caps = [100 * 2 ** k for k in range(7)]
    div = letter_series_sweep(gamma2, 0.49, 0.0, caps)
    conv = letter_series_sweep(gamma2, 1.0, 0.0, caps)
    assert all(b > a for a, b in zip(div, div[1:]))  # keeps growing
    assert div[-1] / div[0] > 1.5
    assert abs(conv[-1] - conv[-2]) < 1e-3


def test_curve_invariants(onecusp):
    sysm = fuchsian_system(onecusp, 100)
    betas = sorted(set(list(np.linspace(-8, 8, 17)) + [-30.0, 30.0]))
    curve = free_energy_curve(sysm, betas)
    assert curve.validate()
    assert np.all(curve.r > 0.0)


def test_no_sign_change_error():
    # zeta = 0: pressure log k > 0 for every t; no root
    sysm = full_shift(3, zeta_value=0.0)
    with pytest.raises(NoSignChange):
        free_energy(sysm, 0.0, tail=False)
