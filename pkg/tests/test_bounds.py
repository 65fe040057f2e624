from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specbound.bounds import (
    NOT_SATISFIED,
    SATISFIED,
    UNDETERMINED,
    VariationSpec,
    bound_reports,
    certified_sup,
    check_integrability,
    gamma_eta,
    general_bound,
    general_exponent,
    strong_bound,
    unit_tail_integral,
    weak_bound,
)
from specbound.correlations import BathSpec, xi_ohmic_closed
from specbound.densities import DeltaMode, LorentzianSum, Ohmic, Subohmic, Superohmic, ZERO
from specbound.errors import DomainError, NoTailCertificate
from specbound.heom_cert import MatsubaraTail, gamma_analytic, gamma_numeric, meier_tannor_bath


def ohmic_variation(beta=1.0, eps=1e-3, **kw):
    return VariationSpec(Ohmic(1.0 + eps, 1.0) - Ohmic(1.0, 1.0), beta=beta, **kw)


def test_gamma_eta_against_trapezoid_oracle():
    v = ohmic_variation()
    ge = gamma_eta(v)
    T = ge.horizon
    ts = np.linspace(0.0, T, 2_000_001)
    vals = 1e-3 * xi_ohmic_closed(1.0, 1.0, ts)
    assert ge.gamma_T == pytest.approx(np.trapezoid(np.abs(vals.real), ts), rel=1e-6)
    assert ge.eta_T == pytest.approx(np.trapezoid(np.abs(vals.imag), ts), rel=1e-6)
    assert ge.c_T == pytest.approx(np.trapezoid(np.abs(vals), ts), rel=1e-6)
    assert ge.gamma >= ge.gamma_T and ge.eta >= ge.eta_T and ge.c >= ge.c_T
    assert ge.c <= ge.gamma + ge.eta
    assert ge.certified


@pytest.mark.parametrize("key,beta,T", [(("power", 1.0, 1.0), 1.0, 50.0), (("power", 3.0, 2.0), 0.5, 40.0),
                                        (("lorentz", 1.0, 0.5), 2.0, 20.0), (("power", 0.5, 1.0), math.inf, 100.0),
                                        (("lorentz", 1.0, 0.5), math.inf, 30.0)])
def test_tail_certificates_dominate_trapezoid(key, beta, T):
    from specbound.densities import _unit_density
    from specbound.correlations import correlation_function

    f = correlation_function(BathSpec(_unit_density(key), beta))
    ts = np.linspace(T, 10 * T, 4001 if key[0] == "lorentz" and math.isinf(beta) else 40_001)
    tail_est = np.trapezoid(np.abs(f(ts)), ts)
    assert unit_tail_integral(key, beta, T) >= tail_est


def test_subohmic_finite_temperature_has_no_tail_certificate():
    v = VariationSpec(Subohmic(0.01, 1.0), beta=1.0)
    assert check_integrability(v).status == UNDETERMINED
    with pytest.raises(NoTailCertificate):
        gamma_eta(v)


def test_exact_route_for_truncation_variation():
    bath, beta, N = meier_tannor_bath(), 1.4, 7
    xi_N = MatsubaraTail(bath, beta, N)
    exact = gamma_eta(VariationSpec(delta_xi=xi_N, beta=beta, coupling_absorbed=True))
    quad = gamma_eta(VariationSpec(delta_xi=xi_N, beta=beta, coupling_absorbed=True), prefer_exact=False)
    assert exact.gamma == pytest.approx(gamma_numeric(bath, beta, N), rel=1e-12)
    assert quad.gamma_T == pytest.approx(exact.gamma, rel=1e-7)
    assert exact.eta == 0.0 and quad.eta_T == 0.0
    assert exact.gamma <= gamma_analytic(bath, beta, N)


def test_general_exponent_against_double_integral():
    v = ohmic_variation(beta=2.0, eps=0.01)
    times = np.array([0.0, 0.5, 3.0, 8.0])
    D, err = general_exponent(v, times)
    s = np.linspace(0.0, 8.0, 400_001)
    a = np.abs(0.01 * xi_ohmic_closed(1.0, 2.0, s))
    for t, d in zip(times, D):
        m = s <= t
        ref = np.trapezoid((t - s[m]) * a[m], s[m]) if t > 0 else 0.0
        assert d == pytest.approx(ref, rel=1e-6, abs=1e-14)
    assert np.all(err >= 0)


def test_zero_variation():
    v = VariationSpec(ZERO, beta=1.0)
    reps = bound_reports(v, np.linspace(0, 5, 6))
    for name in ("general", "weak", "strong", "best"):
        np.testing.assert_array_equal(reps[name].values, 0.0)
    assert reps["strong"].condition.status == SATISFIED


def test_delta_variation_refuses_strong_bound():
    v = VariationSpec(DeltaMode(0.01, 1.0), beta=1.0)
    reps = bound_reports(v, np.linspace(0, 5, 6))
    assert reps["strong"].refused and reps["strong"].condition.status == NOT_SATISFIED
    assert np.all(np.isnan(reps["strong"].values))
    assert reps["weak"].certified
    assert check_integrability(v).status == NOT_SATISFIED
    assert certified_sup(v) == pytest.approx(0.01 / math.tanh(0.5) / math.pi)
    np.testing.assert_allclose(reps["best"].values, np.minimum(reps["general"].values, reps["weak"].values))


def test_weak_sup_certificate_dominates_grid_max():
    v = VariationSpec(Ohmic(0.5, 1.0) - LorentzianSum(((1.0, 1.0, 0.3),)), beta=0.8)
    ts = np.linspace(0.0, 40.0, 4001)
    vals, _ = v.xi.evaluate(ts)
    assert certified_sup(v) >= np.abs(vals).max()


def test_closed_form_bounds():
    v = ohmic_variation(lambda_sq=0.3, observable_norm=2.0)
    t = np.array([0.0, 1.0, 2.0])
    np.testing.assert_allclose(strong_bound(v, 0.1, 0.2, t), 2.0 * np.expm1(0.3 * 0.3 * t))
    np.testing.assert_allclose(weak_bound(v, 0.5, t), 2.0 * np.expm1(0.3 * 0.5 * t * t / 2))


@settings(max_examples=8)
@given(a=st.sampled_from([0.5, 2.0, 3.0]), norm=st.floats(0.1, 10.0))
def test_observable_norm_factorises(a, norm):
    base = ohmic_variation(eps=1e-3 * a)
    scaled = ohmic_variation(eps=1e-3 * a, observable_norm=norm)
    t = np.linspace(0.0, 5.0, 11)
    np.testing.assert_allclose(general_bound(scaled, t), norm * general_bound(base, t), rtol=1e-15)


def test_coupling_absorbed_ignores_lambda():
    v1 = ohmic_variation(lambda_sq=0.3, coupling_absorbed=True)
    v2 = ohmic_variation(lambda_sq=1.0)
    t = np.array([1.0, 3.0])
    np.testing.assert_allclose(general_bound(v1, t), general_bound(v2, t))


def test_reports_order_and_monotone():
    v = VariationSpec(Superohmic(2, 0.01, 1.0) - Ohmic(0.02, 0.5), beta=1.5)
    t = np.linspace(0.0, 10.0, 50)
    reps = bound_reports(v, t)
    g, w, s = reps["general"].values, reps["weak"].values, reps["strong"].values
    assert g[0] == 0.0 and np.all(np.diff(g) >= 0)
    assert np.all(g <= w * (1 + 1e-9)) and np.all(g <= s * (1 + 1e-9))
    np.testing.assert_array_equal(reps["best"].values, np.minimum(np.minimum(g, w), s))


def test_bad_arguments():
    with pytest.raises(DomainError):
        VariationSpec()
    with pytest.raises(DomainError):
        VariationSpec(Ohmic(1.0, 1.0), observable_norm=0.0)
    with pytest.raises(DomainError):
        bound_reports(ohmic_variation(), [1.0], kind="bogus")
