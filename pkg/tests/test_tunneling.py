import math
import warnings

import numpy as np
import pytest

from sfarates.bound_states import BoundStateModel
from sfarates.errors import DomainError, FitError, UnderflowWarning
from sfarates.params import LaserInput, derive_params
from sfarates.tunneling import (
    exponent_sweep,
    toll_wheeler_factor,
    tunneling_comparator,
    tunneling_exponent,
    tunneling_exponent_fit,
    tunneling_rate_factor,
)


def test_hydrogen_exponent_is_exact():
    for e in (0.01, 0.05, 0.3):
        assert tunneling_exponent(e, 0.5) == pytest.approx(-2.0 / (3.0 * e), rel=1e-15)


def test_reference_factor():
    assert tunneling_rate_factor(0.05, 0.5) == pytest.approx(math.exp(-40 / 3), rel=1e-14)
    # direct evaluation of the forced exponent
    assert tunneling_rate_factor(0.05, 0.5) == pytest.approx(1.6195967923126e-6, rel=1e-12)


def test_strong_field_limit():
    assert tunneling_rate_factor(1e300, 0.5) == 1.0


def test_factor_underflow_flag():
    with pytest.warns(UnderflowWarning):
        assert tunneling_rate_factor(1e-4, 0.5) == 0.0


@pytest.mark.parametrize("e, eb", [(0.0, 0.5), (-1.0, 0.5), (0.1, 0.0)])
def test_factor_domain(e, eb):
    with pytest.raises(DomainError):
        tunneling_rate_factor(e, eb)


def test_toll_wheeler():
    assert toll_wheeler_factor(4.0 / 3.0, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert toll_wheeler_factor(1e200, 1e200) == 1.0
    with pytest.warns(UnderflowWarning):
        assert toll_wheeler_factor(0.1, 0.01) == 0.0
    with pytest.warns(UnderflowWarning):
        assert toll_wheeler_factor(0.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        toll_wheeler_factor(-1.0, 1.0)


def test_fit_recovers_exact_model():
    e = np.linspace(0.02, 0.2, 12)
    fit = tunneling_exponent_fit(list(zip(e, 7 * np.exp(-3 / e))))
    assert fit.C == pytest.approx(3.0, abs=1e-12)
    assert math.exp(fit.a) == pytest.approx(7.0, rel=1e-10)
    assert fit.residual_norm < 1e-10
    np.testing.assert_allclose(fit.predict(e), 7 * np.exp(-3 / e), rtol=1e-10)


def test_fit_flags_power_law():
    e = np.geomspace(0.01, 1.0, 15)
    fit = tunneling_exponent_fit(list(zip(e, e**4)))
    assert fit.residual_norm > 1.0


def test_fit_weights():
    e = np.linspace(0.05, 0.2, 6)
    w = 2 * np.exp(-1 / e)
    w[0] *= 50
    weights = np.ones(6)
    weights[0] = 0.0
    fit = tunneling_exponent_fit(list(zip(e, w)), weights)
    assert fit.C == pytest.approx(1.0, abs=1e-10)


def test_fit_errors():
    with pytest.raises(DomainError):
        tunneling_exponent_fit([(0.1, 1.0), (0.2, 1.0)])
    with pytest.raises(DomainError):
        tunneling_exponent_fit([(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)])
    with pytest.raises(DomainError):
        tunneling_exponent_fit([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)], weights=[1.0, 1.0])
    with pytest.raises(FitError):
        tunneling_exponent_fit([(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)])


def test_comparator_shape():
    fp = derive_params(LaserInput(0.057, up=0.3), 0.5)
    p = np.array([0.0, 0.5, 0.9 * fp.e0 / fp.omega, 2 * fp.e0 / fp.omega])
    c = tunneling_comparator(fp, p)
    assert c[0] == pytest.approx(tunneling_rate_factor(fp.e0, 0.5), rel=1e-14)
    assert c[0] > c[1] > c[2] > 0
    assert c[3] == 0.0
    assert tunneling_comparator(fp, -0.5) == c[1]


def test_sweep_window():
    pts = exponent_sweep(0.057, BoundStateModel.hydrogen(), "linear")
    assert len(pts) >= 5
    for p in pts:
        assert 0.2 <= p.gamma_k <= 0.5 and p.beta0 < 0.1
        fp = derive_params(LaserInput(0.057, e0=p.e_field), 0.5)
        ke = fp.n0 * 0.057 - fp.up - 0.5
        assert ke == pytest.approx(0.5 * 0.057, rel=1e-9)


def test_sweep_threads_do_not_change_results():
    h = BoundStateModel.hydrogen()
    a = exponent_sweep(0.057, h, "linear", gamma_k_range=(0.45, 0.5))
    b = exponent_sweep(0.057, h, "linear", gamma_k_range=(0.45, 0.5), workers=3)
    assert a == b


def test_sweep_arguments():
    h = BoundStateModel.hydrogen()
    with pytest.raises(DomainError):
        exponent_sweep(0.057, h, excess_fraction=1.0)
    with pytest.raises(DomainError):
        exponent_sweep(0.057, h, quantity="peak")
    with pytest.raises(DomainError):
        exponent_sweep(0.057, h, gamma_k_range=(0.0, 0.5))


def test_no_warning_for_ordinary_values():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        tunneling_rate_factor(0.1, 0.5)
