import math

import numpy as np
import pytest

from entnet import analytics
from entnet.analytics import (FidelityResult, SchemeParams, compare_4node,
                              em_false_herald, em_fidelity, em_success,
                              evaluate_formula, itinerant_fidelity_2,
                              itinerant_ghz_fidelity_formula,
                              itinerant_ghz_fidelity_sim, itinerant_success,
                              st_fidelity_2, st_n_node, st_rate_2, swap_rate,
                              wpe_fidelity, wpe_fidelity_sweep, wpe_rate)
from entnet.states import dicke_state, fidelity


def test_scheme_params_validation():
    with pytest.raises(ValueError):
        SchemeParams(eta_det=1.2)
    with pytest.raises(ValueError):
        SchemeParams(r_t=-1.0)
    assert SchemeParams().eta_det == 1.0


def test_fidelity_result_bounds():
    with pytest.raises(ValueError):
        FidelityResult(1.4)
    assert FidelityResult(1.4, is_proportional=True).value == 1.4
    assert float(FidelityResult(0.5)) == 0.5


# -------------------------------------------------------------- photon exchange

def test_st_fidelity_2_values():
    assert st_fidelity_2(1.0).value == pytest.approx(1.0)
    assert st_fidelity_2(0.0).value == pytest.approx(0.25)
    assert st_fidelity_2(0.81).value == pytest.approx(0.9025)
    with pytest.raises(ValueError):
        st_fidelity_2(1.5)


def test_st_fidelity_2_monotone():
    grid = np.linspace(0, 1, 101)
    vals = [st_fidelity_2(e).value for e in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_st_rate_2():
    assert st_rate_2(SchemeParams()).value == pytest.approx(1.0)
    assert st_rate_2(SchemeParams(eta_ent=0.0)).value == 0.0
    params = SchemeParams(eta_p=0.5, eta_out=0.9, eta_net=0.8, eta_ent=0.02,
                          eta_det=0.5)
    result = st_rate_2(params)
    assert result.value == pytest.approx(0.0036)
    assert result.is_proportional


def test_st_n_node():
    state, fid, rate = st_n_node(SchemeParams(eta_a0an=0.5), 3)
    assert fidelity(state, dicke_state(1, 3)) == pytest.approx(1.0)
    assert fid.value == pytest.approx(0.5) and fid.is_proportional
    assert rate.is_proportional
    state, fid, _ = st_n_node(SchemeParams(), 5)
    assert fid.value == pytest.approx(1.0)
    with pytest.raises(ValueError):
        st_n_node(SchemeParams(), 1)


# -------------------------------------------------------------- itinerant photon

def test_itinerant_fidelity_2():
    assert itinerant_fidelity_2(1.0) == pytest.approx(1.0)
    assert itinerant_fidelity_2(0.75) == pytest.approx(0.5)
    assert itinerant_fidelity_2(5 / 6) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        itinerant_fidelity_2(0.4)


def test_itinerant_success():
    assert itinerant_success(2, 1, 1, 1).value == pytest.approx(1.0)
    assert itinerant_success(2, 0.5, 1, 1).value == pytest.approx(0.5)
    expect = 0.9 ** 3 * 0.95 ** 4 * 0.5
    assert itinerant_success(4, 0.9, 0.95, 0.5).value == pytest.approx(expect)
    assert abs(expect - 0.2969) < 5e-4


def test_itinerant_sim_anchor_and_perfect_gate():
    for n in (2, 3, 5):
        assert itinerant_ghz_fidelity_sim(n, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert itinerant_ghz_fidelity_sim(2, 0.9) == pytest.approx(0.8, abs=1e-9)
    assert itinerant_ghz_fidelity_sim(2, 0.7) == pytest.approx(0.4, abs=1e-9)


def test_itinerant_sim_monotone_decreasing():
    vals = [itinerant_ghz_fidelity_sim(n, 0.95) for n in range(2, 9)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("f_pa", [0.8, 0.9, 0.99])
@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_itinerant_sim_matches_channel_expansion(n, f_pa):
    assert itinerant_ghz_fidelity_sim(n, f_pa) == pytest.approx(
        itinerant_ghz_fidelity_formula(n, f_pa), abs=1e-12)


def test_itinerant_sim_regression_point():
    value = itinerant_ghz_fidelity_sim(5, 0.99)
    assert 0.9 < value < 0.96
    assert value == pytest.approx(0.9507748048583695, abs=1e-12)


def test_itinerant_sim_domain():
    with pytest.raises(ValueError):
        itinerant_ghz_fidelity_sim(2, 0.6)
    with pytest.raises(ValueError):
        itinerant_ghz_fidelity_sim(11, 0.9)


# -------------------------------------------------------------- mapping scheme

def test_em_success():
    assert em_success(2, SchemeParams()).value == pytest.approx(0.25)
    assert em_success(4, SchemeParams()).value == pytest.approx(1 / 16)
    params = SchemeParams(eta_abs=1e-4, eta_det=0.05, p_epr=2.5e-3)
    value = em_success(2, params).value
    assert value == pytest.approx(2.5e-3 * (0.5 * 1e-4 * 0.05) ** 2)
    assert 1e-15 < value < 1e-12


def test_em_false_herald():
    assert em_false_herald(3, 0.5, 0.0) == 0.0
    assert em_false_herald(1, 0.9, 0.25) == pytest.approx(0.25)
    assert em_false_herald(2, 0.1, 0.01) == pytest.approx(0.0021)


def test_em_fidelity():
    assert em_fidelity(3, 0.97, 1e-10, 0.0) == pytest.approx(0.97)
    assert em_fidelity(3, 0.97, 0.0, 1e-10) == pytest.approx(2.0 ** -3)
    assert em_fidelity(2, 0.95, 1e-13, 1e-13) == pytest.approx(0.6)
    with pytest.raises(ZeroDivisionError):
        em_fidelity(2, 0.95, 0.0, 0.0)


# -------------------------------------------------------------- which-path erasing

def test_wpe_fidelity_quoted_values():
    assert wpe_fidelity(1, 2, 0.06) == pytest.approx(0.969, abs=5e-4)
    assert wpe_fidelity(1, 3, 0.06) == pytest.approx(0.9388, abs=5e-4)
    assert wpe_fidelity(2, 3, 0.06) == pytest.approx(0.9791, abs=5e-4)


def test_wpe_fidelity_limits_and_monotonicity():
    grid = np.linspace(0.01, 0.99, 60)
    for m, n in ((1, 2), (1, 4), (2, 4), (3, 4)):
        vals = [wpe_fidelity(m, n, p) for p in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    assert wpe_fidelity(1, 3, 1e-9) == pytest.approx(1.0, abs=1e-6)
    assert wpe_fidelity(3, 3, 0.37) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        wpe_fidelity(0, 3, 0.1)
    with pytest.raises(ValueError):
        wpe_fidelity(1, 3, 0.0)


def test_wpe_rate_closed_forms():
    p, eta = 0.21, 0.4
    expect = eta * (2 * p * (1 - p) + p ** 2)
    assert wpe_rate(1, 2, p, eta).value == pytest.approx(expect)
    assert wpe_rate(3, 3, p, eta).value == pytest.approx(eta ** 3 * p ** 3)
    assert wpe_rate(1, 4, 1e-12, eta).value == pytest.approx(0.0, abs=1e-9)
    assert wpe_rate(1, 2, p, eta).is_proportional


def test_wpe_sweep_reference_points():
    pts = wpe_fidelity_sweep(4, [1, 2, 3], [0.06, 0.5], 0.05)
    assert len(pts) == 6
    by_key = {(pt.m, pt.p): pt for pt in pts}
    assert by_key[(3, 0.5)].fidelity == pytest.approx(4 / 5)
    assert by_key[(1, 0.06)].rate == pytest.approx(0.05 * (1 - 0.94 ** 4))
    # fidelity falls and rate grows with p at fixed m
    for m in (1, 2, 3):
        assert by_key[(m, 0.5)].fidelity < by_key[(m, 0.06)].fidelity
        assert by_key[(m, 0.5)].rate > by_key[(m, 0.06)].rate


# -------------------------------------------------------------- comparison / swap

def test_swap_rate():
    assert swap_rate(2, 0.5, 1.0).value == pytest.approx(0.5)
    assert swap_rate(4, 7 / 32, 1.0).value == pytest.approx(7 / 32)
    assert swap_rate(3, 0.25, 0.0).value == 0.0


def test_compare_4node():
    cmp4 = compare_4node(1.0, 1.0)
    assert cmp4.r_bell == pytest.approx(0.5)
    assert cmp4.r_bell_chain4 == pytest.approx(0.125)
    assert cmp4.r_quad == pytest.approx(7 / 32)
    assert cmp4.crossover_eta == pytest.approx(2 / math.sqrt(7), abs=1e-12)
    assert cmp4.crossover_eta == pytest.approx(0.75593, abs=1e-4)
    zero = compare_4node(0.0, 1.0)
    assert zero.r_bell == 0.0 and zero.r_quad == 0.0


def test_compare_crossover_balances_rates():
    eta = compare_4node(0.5).crossover_eta
    at = compare_4node(eta, 3.7)
    assert at.r_bell_chain4 == pytest.approx(at.r_quad, abs=1e-12)


# -------------------------------------------------------------- registry

def test_formula_registry_dispatch():
    assert evaluate_formula("st-fidelity-2", eta=1.0).value == pytest.approx(1.0)
    res = evaluate_formula("wpe-rate", m=1, n=2, p=0.06, eta=1.0)
    assert res.is_proportional
    res = evaluate_formula("st-n-rate", n=3, eta_p=0.5, eta_out=0.9, eta_net=0.8,
                           eta_a0an=0.7, eta_ent=0.6, eta_det=0.5)
    assert res.value == pytest.approx(0.5 * 0.9 * 0.8 * 0.7 * 0.6 * 0.5)
    assert res.is_proportional
    with pytest.raises(KeyError):
        evaluate_formula("nope")
    listed = set(analytics.FORMULAS)
    assert {"st-fidelity-2", "wpe-fidelity", "em-fidelity", "swap-rate",
            "st-n-rate", "itinerant-ghz-sim"} <= listed
