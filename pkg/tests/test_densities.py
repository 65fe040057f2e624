from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specbound.densities import (
    Combination,
    DeltaMode,
    LorentzianSum,
    LorentzianTerm,
    Ohmic,
    Subohmic,
    Superohmic,
    canonical_terms,
    difference,
    eval_density,
    meier_tannor_ohmic,
)
from specbound.errors import DeltaNotEvaluable, DomainError

W = np.array([0.0, 0.1, 1.0, 3.7, 25.0])


def test_shapes_match_direct_formulas():
    np.testing.assert_allclose(eval_density(Ohmic(0.3, 2.0), W), 0.3 * math.pi * W * np.exp(-W / 2.0), rtol=1e-15)
    np.testing.assert_allclose(eval_density(Superohmic(3, 0.7, 1.5), W),
                               0.7 * math.pi * W**3 * np.exp(-W / 1.5), rtol=1e-15)
    np.testing.assert_allclose(eval_density(Subohmic(2.0, 1.0), W),
                               2.0 * math.pi * np.sqrt(W) * np.exp(-W), rtol=1e-15)
    p, om, g = 1.7, 2.0, 0.4
    ref = 0.5 * math.pi * p * W / (((W + om) ** 2 + g * g) * ((W - om) ** 2 + g * g))
    np.testing.assert_allclose(eval_density(LorentzianSum(((p, om, g),)), W), ref, rtol=1e-15)


def test_lorentzian_partial_fractions():
    # 1/D splits into the two shifted Lorentzians centred at +om and -om
    om, g = 1.3, 0.2
    w = np.linspace(0.01, 5.0, 50)
    d_minus = (w - om) ** 2 + g * g
    d_plus = (w + om) ** 2 + g * g
    partial = (1.0 / d_minus - 1.0 / d_plus) / (4.0 * om * w)
    np.testing.assert_allclose(1.0 / (d_minus * d_plus), partial, rtol=1e-12)


def test_scalar_in_scalar_out():
    assert isinstance(eval_density(Ohmic(1.0, 1.0), 0.5), float)


@pytest.mark.parametrize("bad", [-1e-9, float("nan")])
def test_negative_frequency_rejected(bad):
    with pytest.raises(DomainError):
        eval_density(Ohmic(1.0, 1.0), bad)


def test_delta_has_no_pointwise_value():
    with pytest.raises(DeltaNotEvaluable):
        eval_density(DeltaMode(0.5, 1.0), 1.0)
    # a cancelled delta is fine
    J = DeltaMode(0.5, 1.0) - DeltaMode(0.5, 1.0) + Ohmic(1.0, 1.0)
    assert eval_density(J, 1.0) == pytest.approx(math.pi * math.exp(-1.0))


@pytest.mark.parametrize(
    "make",
    [
        lambda: Ohmic(0.0, 1.0),
        lambda: Ohmic(1.0, -1.0),
        lambda: Superohmic(1, 1.0, 1.0),
        lambda: Superohmic(2.5, 1.0, 1.0),
        lambda: LorentzianTerm(1.0, 0.0, 1.0),
        lambda: LorentzianTerm(1.0, 1.0, -0.1),
        lambda: DeltaMode(1.0, 0.0),
        lambda: Combination(((1.0, "not a density"),)),
    ],
)
def test_invalid_parameters(make):
    with pytest.raises(DomainError):
        make()


@given(
    a=st.floats(0.01, 5.0), b=st.floats(0.01, 5.0), c=st.floats(-3.0, 3.0),
    w=st.floats(0.0, 30.0),
)
def test_linearity(a, b, c, w):
    J1, J2 = Ohmic(a, 1.0), LorentzianSum(((b, 1.0, 0.5),))
    combo = J1 + c * J2
    assert eval_density(combo, w) == pytest.approx(eval_density(J1, w) + c * eval_density(J2, w),
                                                    rel=1e-12, abs=1e-300)


def test_difference_of_equal_densities_is_zero():
    J = Ohmic(1.0, 2.0)
    dJ = difference(J, J)
    assert canonical_terms(dJ) == {}
    assert dJ.is_zero
    np.testing.assert_array_equal(eval_density(dJ, W), 0.0)


def test_canonical_terms_merge_identical_shapes():
    J = LorentzianSum(((1.0, 2.0, 0.5), (2.0, 2.0, 0.5))) + Ohmic(1.0, 1.0) - 0.5 * Ohmic(2.0, 1.0)
    assert canonical_terms(J) == {("lorentz", 2.0, 0.5): 3.0}


def test_meier_tannor_ohmic_shape():
    J = meier_tannor_ohmic()
    w = 1.0
    assert eval_density(J, w) == pytest.approx(0.5 * math.pi * w * math.exp(-w / 3.75))
