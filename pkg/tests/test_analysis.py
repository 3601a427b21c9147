"""Cancellation diagnostics, coupling optimization, and sub-SQL scans."""
from __future__ import annotations

import math

import numpy as np
import pytest

from cqncsim.analysis import (
    cqnc_check,
    default_frequency_grid,
    g_sql_analytic,
    g_sql_opa,
    optimize_coupling,
    sub_sql_bandwidth,
)
from cqncsim.core import chi_mech, coupling_to_power
from cqncsim.spectra import added_noise_psd_exact, cqnc_psd_approx, sql_psd, standard_psd


def test_default_grid_shape(params):
    grid = default_frequency_grid(params)
    assert grid.size == 2402
    assert np.all(np.diff(grid) >= 0.0)
    assert np.any(grid == params.omega_m)
    assert grid[0] == pytest.approx(1e-2 * params.omega_m, rel=1e-15)
    assert grid[-1] == pytest.approx(1e2 * params.omega_m, rel=1e-15)


def test_cqnc_check_at_ideal_point(params):
    r = cqnc_check(params)
    assert r.coupling_mismatch == 0.0
    assert r.damping_mismatch == 0.0
    assert r.susceptibility_residual == pytest.approx(9.999999949999995e-05, rel=1e-9)
    assert r.susceptibility_residual < 3.0 / params.quality_factor
    assert r.ideal
    # residual barely moves on a wider grid including omega = 0
    wide = cqnc_check(params, grid=np.linspace(0.0, 2.0 * params.omega_m, 4001))
    assert wide.susceptibility_residual == pytest.approx(r.susceptibility_residual, rel=1e-6)


def test_cqnc_check_flags_mismatches(params):
    r = cqnc_check(params.replace(g_prime=0.0))
    assert r.coupling_mismatch == 1.0
    assert r.susceptibility_residual == pytest.approx(1.0, rel=1e-12)
    assert not r.ideal
    assert cqnc_check(params.replace(g_prime=0.9 * params.g)).coupling_mismatch == pytest.approx(
        0.1, rel=1e-12)
    r3 = cqnc_check(params.replace(Gamma=3.0 * params.gamma_m))
    assert r3.damping_mismatch == pytest.approx(0.5, rel=1e-12)
    assert not r3.ideal


def test_cqnc_check_surrogate_and_scale_invariance(params):
    assert cqnc_check(params, exact_surrogate=True).susceptibility_residual == 0.0
    s = 7.3
    scaled = params.replace(
        omega_m=s * params.omega_m, gamma_m=s * params.gamma_m, kappa=s * params.kappa,
        Gamma=s * params.Gamma, g=s * params.g, g_prime=s * params.g)
    r = cqnc_check(scaled)
    assert r.coupling_mismatch == 0.0
    assert r.susceptibility_residual == pytest.approx(
        cqnc_check(params).susceptibility_residual, rel=1e-6)


def test_cqnc_check_rejects_bad_input(params):
    with pytest.raises(ValueError, match="g > 0"):
        cqnc_check(params.replace(g=0.0))
    with pytest.raises(ValueError, match="empty"):
        cqnc_check(params, grid=np.array([]))


def test_optimizer_recovers_sql_at_resonance(params, drive):
    wm = params.omega_m
    opt = optimize_coupling(wm, params, drive, model="standard")
    assert not opt.monotone
    assert opt.omega == wm
    assert opt.g_opt == pytest.approx(math.sqrt(params.kappa * params.gamma_m) / 2.0, rel=1e-6)
    assert opt.g_opt == pytest.approx(17207.211868031234, rel=1e-9)
    assert opt.s_min == pytest.approx(1.0, rel=1e-9)
    assert opt.s_min == standard_psd(wm, params.replace(g=opt.g_opt, g_prime=opt.g_opt),
                                     temperature=0.0)
    assert opt.p_opt == pytest.approx(coupling_to_power(opt.g_opt, drive, params.kappa), rel=1e-12)


def test_optimizer_first_order_optimality(params, drive):
    # derivative of the PSD with respect to g^2 vanishes at the reported optimum
    wm = params.omega_m
    opt = optimize_coupling(wm, params, drive, model="standard")
    u = opt.g_opt**2
    h = 1e-4 * u

    def f(uu):
        g = math.sqrt(uu)
        return standard_psd(wm, params.replace(g=g, g_prime=g), temperature=0.0)

    deriv = (f(u + h) - f(u - h)) / (2.0 * h)
    assert abs(deriv) <= 1e-6 * opt.s_min / u


def test_optimizer_off_resonance(params, drive):
    w = 0.37 * params.omega_m
    opt = optimize_coupling(w, params, drive, model="standard")
    assert not opt.monotone
    assert opt.g_opt == pytest.approx(g_sql_analytic(w, params), rel=1e-6)
    assert opt.s_min == pytest.approx(sql_psd(w, params), rel=1e-9)


def test_optimizer_monotone_model_reports_boundary(params, drive):
    wm = params.omega_m
    opt = optimize_coupling(wm, params, drive, model="cqnc")
    assert opt.monotone
    assert opt.g_opt == pytest.approx(1e3 * g_sql_analytic(wm, params), rel=1e-12)
    assert opt.s_min == pytest.approx(1.000000255, rel=1e-9)


def test_optimizer_rejects_bad_input(params, drive):
    with pytest.raises(ValueError, match="model"):
        optimize_coupling(params.omega_m, params, drive, model="exotic")
    with pytest.raises(ValueError, match="bounds"):
        optimize_coupling(params.omega_m, params, drive, bounds=(0.0, 1.0))
    with pytest.raises(ValueError, match="bounds"):
        optimize_coupling(params.omega_m, params, drive, bounds=(2.0, 1.0))


def test_sql_coupling_formulas(params, rng):
    wm = params.omega_m
    assert g_sql_analytic(wm, params) == pytest.approx(17207.211628636425, rel=1e-12)
    assert g_sql_analytic(wm, params) == pytest.approx(
        math.sqrt(params.kappa * params.gamma_m) / 2.0, rel=1e-12)
    for _ in range(20):
        w = wm * 10.0 ** rng.uniform(-2, 2)
        assert g_sql_analytic(w, params)**2 == pytest.approx(
            params.kappa / (4.0 * abs(chi_mech(w, params))), rel=1e-12)
        G = rng.uniform(0.0, 0.25) * params.kappa
        pg = params.replace(G_opa=G)
        assert g_sql_opa(w, pg) <= g_sql_analytic(w, pg) * (1.0 + 1e-12)
        assert g_sql_opa(w, pg) == pytest.approx(
            (1.0 - 4.0 * G / params.kappa) * g_sql_analytic(w, pg), rel=1e-12)
    assert g_sql_opa(wm, params) == pytest.approx(g_sql_analytic(wm, params), rel=1e-14)
    assert g_sql_opa(wm, params.replace(G_opa=params.kappa / 4.0)) == 0.0
    assert g_sql_opa(wm, params.replace(G_opa=0.1 * params.kappa)) / g_sql_analytic(
        wm, params) == pytest.approx(0.6, rel=1e-12)


def test_opa_coupling_formula_matches_numeric_optimum(params):
    # with the atoms off, the low-frequency optimum of the full PSD follows the
    # gain-reduced coupling formula and reaches half the SQL
    w = 0.01 * params.omega_m
    pb = params.replace(g_prime=0.0, G_opa=0.1 * params.kappa)
    g_pred = g_sql_opa(w, pb)
    gs = g_pred * np.logspace(-0.5, 0.5, 4001)
    vals = np.array([added_noise_psd_exact(w, pb.replace(g=g)) for g in gs])
    k = int(np.argmin(vals))
    assert 0 < k < gs.size - 1
    assert gs[k] == pytest.approx(g_pred, rel=1e-3)
    assert vals[k] == pytest.approx(0.5 * sql_psd(w, pb), rel=1e-6)


def test_sub_sql_default_grid_finds_nothing_at_zero_gain(params):
    assert sub_sql_bandwidth(params, params.g, 0.0) == []


def test_sub_sql_fine_grid_resolves_osculation_window(params):
    # at the SQL-optimal coupling the two curves osculate; the crossing window
    # is a ~2e-6 * omega_m sliver just below resonance, narrower than the
    # default grid spacing
    wm = params.omega_m
    fine = wm * np.linspace(1.0 - 9.5e-5, 1.0 - 8.0e-5, 3001)
    iv = sub_sql_bandwidth(params, params.g, 0.0, grid=fine)
    assert len(iv) == 1
    lo, hi = iv[0]
    assert lo / wm == pytest.approx(0.9999123125, rel=1e-9)
    assert hi / wm == pytest.approx(0.9999144625, rel=1e-9)
    assert 0.0 < hi - lo < 3e-6 * wm


def test_sub_sql_with_gain(params):
    wm = params.omega_m
    iv = sub_sql_bandwidth(params, params.g, 0.2 * params.kappa)
    assert len(iv) == 2
    (a1, b1), (a2, b2) = iv
    assert a1 / wm == pytest.approx(0.9950381965299624, rel=1e-9)
    assert b1 / wm == pytest.approx(0.9999928387451172, rel=1e-9)
    assert a2 / wm == pytest.approx(1.0000071612548829, rel=1e-9)
    assert b2 / wm == pytest.approx(1.004936794678464, rel=1e-9)
    # residual shot keeps the exact resonance itself above the SQL
    assert b1 < wm < a2
    # refined interval endpoints sit on the crossing to 1e-6 relative
    pp = params.replace(G_opa=0.2 * params.kappa)
    for w in (a1, b1, a2, b2):
        gap = cqnc_psd_approx(w, pp, temperature=0.0) - sql_psd(w, pp)
        assert abs(gap) <= 1.001e-6 * sql_psd(w, pp)


def test_sub_sql_rejects_empty_grid(params):
    with pytest.raises(ValueError, match="empty"):
        sub_sql_bandwidth(params, params.g, 0.0, grid=np.array([]))
