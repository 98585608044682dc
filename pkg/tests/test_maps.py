import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from descm.errors import DomainError, ParameterError
from descm.maps import (
    DecayProfile,
    GeneralizedMap,
    RateMode,
    SimpleMap,
    curvature_term,
    decay_profile,
    map_eval,
    transformed_potential,
)
from descm.potential import Potential, builtin

from oracles import general_phi, operator_vtilde, richardson_derivative, simple_phi

SIMPLE = SimpleMap()
GEN = GeneralizedMap(1.05, 1.30, 1.20, 0.94)
V1 = builtin("V1")[0]
V5 = builtin("V5")[0]
MAPS = [(SIMPLE, simple_phi), (GEN, general_phi(1.05, 1.30, 1.20, 0.94))]

# mpmath, 40 digits
GEN_PHI_0 = 0.6209570477895320775
# nested central differences (step 1e-5, 40 digits) of the operator form, simple map, V5
SIMPLE_V5_VTILDE_0 = 0.84829774408445897


def test_simple_at_zero():
    phi, phi1, _, _ = map_eval(SIMPLE, 0.0)
    assert phi == pytest.approx(math.log(2.0), abs=1e-16)
    assert phi1 == 0.5


def test_general_at_zero():
    phi = map_eval(GEN, 0.0)[0]
    assert phi == pytest.approx(GEN_PHI_0, rel=1e-15)
    assert phi == pytest.approx(math.log(math.exp(-0.15) + 1.0), rel=1e-15)


def test_simple_right_asymptote_t20():
    assert map_eval(SIMPLE, 20.0)[0] / (math.exp(20.0) / 2) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("t", [math.nan, math.inf, -math.inf])
def test_nonfinite_argument(t):
    with pytest.raises(DomainError):
        map_eval(GEN, t)


def test_bad_general_params():
    with pytest.raises(ParameterError):
        GeneralizedMap(1.0, 0.0, 1.0, 1.0)


def test_no_overflow_to_30():
    t = np.linspace(-30, 30, 601)
    for m, _ in MAPS:
        for arr in map_eval(m, t):
            assert np.all(np.isfinite(arr))


@pytest.mark.parametrize("m, oracle", MAPS, ids=["simple", "general"])
@pytest.mark.parametrize("t", np.linspace(-10, 10, 21))
def test_derivatives_match_richardson_fd(m, oracle, t):
    got = map_eval(m, t)
    for order in (1, 2, 3):
        ref = richardson_derivative(oracle, t, order)
        if abs(ref) > mp.mpf("1e-280"):
            assert abs(got[order] - float(ref)) <= 1e-6 * abs(float(ref))
        else:
            assert abs(got[order]) < 1e-280
    ref1 = richardson_derivative(oracle, t, 1)
    assert m.log_phi1(t) == pytest.approx(float(mp.log(ref1)), rel=1e-6)


@pytest.mark.parametrize("m", [SIMPLE, GEN], ids=["simple", "general"])
def test_monotone_on_wide_grid(m):
    t = np.linspace(-30, 30, 10_000)
    phi1 = map_eval(m, t)[1]
    logd = m.log_phi1(t)
    # phi' > 0 everywhere; where it is below double range log(phi') is still finite
    assert np.all(np.isfinite(logd))
    assert np.all(phi1 >= 0)
    assert np.all(phi1[logd > -700] > 0)
    assert np.all(np.diff(m.log_phi(t)) > 0)


@pytest.mark.parametrize("t", [20.0, 25.0, 30.0])
def test_simple_right_pinning(t):
    phi = map_eval(SIMPLE, t)[0]
    assert abs(phi - math.exp(t) / 2) / phi < 1e-6


@pytest.mark.parametrize("t", [-10.0, -12.0, -15.0, -20.0])
def test_simple_left_pinning(t):
    # phi ~ exp(-e^{-t}/2); compared in log space since phi underflows
    rel = abs(math.expm1(SIMPLE.log_phi(t) - (-math.exp(-t) / 2)))
    assert rel < 1e-4


def test_simple_left_pinning_not_yet_at_minus_five():
    # exp(sinh t) differs from exp(-e^{-t}/2) by the factor exp(e^{t}/2)
    rel = abs(math.expm1(SIMPLE.log_phi(-5.0) + math.exp(5.0) / 2))
    assert rel == pytest.approx(math.expm1(math.exp(-5.0) / 2), rel=1e-6)


@pytest.mark.parametrize("t", [20.0, 25.0, 30.0])
def test_general_right_pinning(t):
    phi = map_eval(GEN, t)[0]
    assert abs(phi / (1.05 * math.exp(1.30 * t)) - 1) < 1e-6


@pytest.mark.parametrize("t, tol", [(-10.0, 1e-5), (-15.0, 1e-8)])
def test_general_left_pinning(t, tol):
    rel = abs(math.expm1(GEN.log_phi(t) - (-1.20 * math.exp(-0.94 * t))))
    assert rel < tol


def test_vtilde_example_simple_v5():
    got = transformed_potential(SIMPLE, V5, 0.0)
    phi, phi1, phi2, phi3 = map_eval(SIMPLE, 0.0)
    expanded = 0.75 * (phi2 / phi1) ** 2 - phi3 / (2 * phi1) + 0.25 * (2 / phi**2 + phi**2)
    assert got == pytest.approx(expanded, rel=1e-14)
    assert got == pytest.approx(SIMPLE_V5_VTILDE_0, rel=1e-8)


def test_curvature_term_simple_zero():
    curv = curvature_term(SIMPLE, 0.0)
    ref = operator_vtilde(simple_phi, lambda x: 0, 0.0)
    assert curv == pytest.approx(float(ref), rel=1e-8)


def test_zero_potential_limit_is_pure_curvature():
    tiny = Potential({2: 1e-300})
    t = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(transformed_potential(GEN, tiny, t), curvature_term(GEN, t), rtol=1e-14)


@pytest.mark.parametrize(
    "m, oracle, pname",
    [(SIMPLE, simple_phi, "V5"), (GEN, general_phi(1.05, 1.30, 1.20, 0.94), "V1"), (GEN, general_phi(1.05, 1.30, 1.20, 0.94), "V6")],
)
def test_vtilde_closed_form_vs_operator_fd(m, oracle, pname):
    p = builtin(pname)[0]
    V = lambda x: sum(mp.mpf(c) * x**j for j, c in p.terms)
    for t in np.linspace(-2.5, 2.5, 11):
        ref = float(operator_vtilde(oracle, V, t))
        got = transformed_potential(m, p, t)
        assert abs(got - ref) <= 1e-6 * abs(ref)


def test_vtilde_finite_in_far_tails():
    t = np.array([-8.0, -6.0, 6.0, 8.0])
    for m in (SIMPLE, GEN):
        assert np.all(np.isfinite(transformed_potential(m, V1, t)))


def test_decay_profile_paper_rates_v1():
    prof = decay_profile(GEN, V1, RateMode.PAPER)
    assert prof.gamma_R == pytest.approx(0.65)
    assert prof.gamma_L == pytest.approx(0.94)
    assert prof.gamma == pytest.approx(0.94)
    assert prof.d_strip == pytest.approx(math.pi / 1.88)
    assert prof.B_L == pytest.approx(2.4)
    assert prof.B == prof.B_L


def test_decay_profile_carried_v1():
    prof = decay_profile(GEN, V1, RateMode.CARRIED)
    assert prof.gamma_R == pytest.approx(2.6)
    assert prof.gamma == pytest.approx(2.6)
    assert prof.B == prof.B_R == pytest.approx(0.125 * 1.05**2)


def test_decay_profile_carried_half_v1():
    prof = decay_profile(GEN, V1)
    assert prof.gamma == pytest.approx(2.6)
    assert prof.B == pytest.approx(0.06890625, rel=1e-14)


def test_simple_map_profile_uses_half_unit_tails():
    prof = decay_profile(SIMPLE, V1, RateMode.PAPER)
    assert prof.gamma_R == 0.5 and prof.gamma_L == 1.0
    assert prof.B == pytest.approx(0.5 * 2.0)


@given(
    st.floats(min_value=1e-3, max_value=50), st.floats(min_value=1e-3, max_value=50),
    st.floats(min_value=1e-3, max_value=50), st.floats(min_value=1e-3, max_value=50),
)
def test_profile_invariants(gl, bl, gr, br):
    prof = DecayProfile.from_sides(gl, bl, gr, br)
    assert prof.gamma == max(gl, gr)
    assert prof.d_strip * 2 * prof.gamma == pytest.approx(math.pi, rel=1e-15)
    assert prof.B == (br if gr >= gl else bl)


def test_profile_rejects_nonpositive():
    with pytest.raises(ParameterError):
        DecayProfile.explicit(0.0, 1.0)


def test_override():
    prof = decay_profile(GEN, V1).override(gamma=1.0)
    assert prof.gamma == 1.0 and prof.d_strip == pytest.approx(math.pi / 2)
    assert prof.B == pytest.approx(0.06890625)
