import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfarates.bessel import (
    MAX_ORDER,
    bessel_asymptotic,
    bessel_j,
    bessel_j_orders,
    bessel_sq_asymptotic,
    debye_correction,
    evaluate,
    gen_bessel_j,
    gen_bessel_j_orders,
    gen_truncation,
    log_bessel_asymptotic,
    log_bessel_j,
    log_bessel_sq_printed,
)
from sfarates.errors import AccuracyError, DomainError, RangeError, UnderflowWarning
from sfarates.quadrature import bessel_j_quad, gen_bessel_j_quad, panel_count

# frozen from mpmath at 30 digits
J1_1 = 0.440050585744933515959682203719
J5_2 = 0.00703962975587168548424351218488
J2_1 = 0.114903484931900480469646881335
J100_50 = 1.11592736908380927800560964541e-21
GEN_3_2_M15 = -0.377883038283713875872547725216


def test_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert gen_bessel_j(0, 0.0, 0.0) == 1.0


@pytest.mark.parametrize("n, x, ref", [(1, 1.0, J1_1), (5, 2.0, J5_2), (2, 1.0, J2_1), (100, 50.0, J100_50)])
def test_frozen_values(n, x, ref):
    assert bessel_j(n, x) == pytest.approx(ref, rel=1e-13)


def test_quadrature_oracle_frozen():
    assert bessel_j_quad(1, 1.0) == pytest.approx(J1_1, rel=1e-13)
    assert bessel_j_quad(100, 50.0) == pytest.approx(J100_50, rel=1e-12)


def test_generalized_frozen():
    assert gen_bessel_j(2, 1.0, 0.0) == pytest.approx(J2_1, rel=1e-13)
    assert gen_bessel_j(3, 2.0, -1.5) == pytest.approx(GEN_3_2_M15, abs=1e-13)
    assert gen_bessel_j_quad(3, 2.0, -1.5) == pytest.approx(GEN_3_2_M15, abs=1e-13)


@pytest.mark.parametrize("n, x", [(0, 30.0), (7, 120.0), (40, 39.5), (300, 150.0), (450, 499.0), (2, 1e-3)])
def test_against_mpmath(n, x):
    ref = float(mpmath.besselj(n, x))
    assert bessel_j(n, x) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_deep_underflow_region_in_log_space():
    logabs, sign = log_bessel_j(2000, 10.0)
    ref = float(mpmath.log(mpmath.besselj(2000, 10)))
    assert logabs == pytest.approx(ref, rel=1e-12)
    assert sign == 1.0
    assert bessel_j(2000, 10.0) == 0.0


def test_negative_order_and_argument():
    for n in range(0, 6):
        assert bessel_j(-n, 3.3) == pytest.approx((-1) ** n * bessel_j(n, 3.3), rel=1e-15)
        assert bessel_j(n, -3.3) == pytest.approx((-1) ** n * bessel_j(n, 3.3), rel=1e-15)


def test_array_arguments():
    x = np.array([0.0, 0.5, 3.0, 40.0])
    vals = bessel_j(3, x)
    assert vals.shape == x.shape
    for xi, vi in zip(x, vals):
        assert vi == pytest.approx(bessel_j(3, float(xi)), rel=1e-15, abs=0)


def test_orders_table_matches_single():
    x = np.array([0.3, 7.0, 55.0])
    table = bessel_j_orders(60, x)
    for n in (0, 1, 17, 60):
        np.testing.assert_allclose(table[n], bessel_j(n, x), rtol=1e-12, atol=1e-300)


def test_orders_table_tiny_argument():
    # rescale bookkeeping must not underflow the low orders
    t = bessel_j_orders(400, -1e-6)
    assert t[0, ] == pytest.approx(1.0, rel=1e-12)
    assert t[1] == pytest.approx(-5e-7, rel=1e-10)


def test_range_errors():
    with pytest.raises(RangeError):
        bessel_j(MAX_ORDER + 1, 1.0)
    with pytest.raises(RangeError):
        bessel_j(1, float("inf"))
    with pytest.raises(RangeError):
        bessel_j(1, 1e6)
    with pytest.raises(DomainError):
        bessel_j_orders(-1, 1.0)


def test_generalized_reduction():
    for n in range(-6, 7):
        ref = bessel_j(abs(n), 4.2) * ((-1) ** n if n < 0 else 1)
        assert gen_bessel_j(n, 4.2, 0.0) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_generalized_second_argument_only():
    # J_n(0, v) = J_{n/2}(v) for even n, 0 for odd n
    assert gen_bessel_j(6, 0.0, 2.5) == pytest.approx(bessel_j(3, 2.5), rel=1e-12)
    assert gen_bessel_j(5, 0.0, 2.5) == pytest.approx(0.0, abs=1e-15)


def test_generalized_orders_vectorized():
    u = np.array([0.0, 1.5, -20.0, 60.0])
    got = gen_bessel_j_orders([-3, 0, 11], u, -7.0)
    assert got.shape == (3, 4)
    for i, n in enumerate([-3, 0, 11]):
        for j, uj in enumerate(u):
            assert got[i, j] == pytest.approx(gen_bessel_j(n, float(uj), -7.0), abs=1e-14)


def test_generalized_truncation_bound():
    assert gen_truncation(0.0) == 0
    k = gen_truncation(40.0)
    tail = sum(float(abs(mpmath.besselj(j, 40))) for j in range(k + 1, k + 40))
    assert 2 * tail < 1e-14


def test_generalized_truncation_failure_carries_partial(monkeypatch):
    import sfarates.bessel as b

    monkeypatch.setattr(b, "GEN_MAX_TERMS", 5)
    with pytest.raises(AccuracyError) as info:
        b.gen_bessel_j(1, 1.0, 50.0)
    assert info.value.partial is not None and math.isfinite(info.value.partial)


def test_generalized_nonfinite():
    with pytest.raises(RangeError):
        gen_bessel_j(1, float("nan"), 1.0)


def test_panel_count():
    assert panel_count(0, 0.0) == 64
    assert panel_count(100, 20.0, 5.0) == 8 * (100 + 20 + 10)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 200), st.floats(0.0, 200.0))
def test_recurrence_vs_quadrature(n, x):
    got = bessel_j(n, x)
    ref = bessel_j_quad(n, x)
    assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300


@settings(max_examples=40, deadline=None)
@given(st.integers(-120, 120), st.floats(-60.0, 60.0), st.floats(-60.0, 60.0))
def test_decomposition_vs_quadrature(n, u, v):
    assert abs(gen_bessel_j(n, u, v) - gen_bessel_j_quad(n, u, v)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 100.0))
def test_sum_rule(x):
    m = int(x + 40 * x ** (1 / 3) + 50)
    j = bessel_j_orders(m, x)
    total = j[0] ** 2 + 2 * math.fsum(j[1:] ** 2)
    assert total == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(-50.0, 50.0), st.floats(-30.0, 30.0))
def test_generalized_sum_rules(u, v):
    m = int(abs(u) + 2 * abs(v) + 40 * (abs(u) + 2 * abs(v)) ** (1 / 3) + 50)
    vals = gen_bessel_j_orders(np.arange(-m, m + 1), u, v)
    assert math.fsum(vals) == pytest.approx(1.0, abs=1e-8)
    assert math.fsum(vals**2) == pytest.approx(1.0, abs=1e-8)


# -- asymptotics ----------------------------------------------------------------


def test_asymptotic_at_100_50():
    rel = abs(bessel_asymptotic(100, 50.0) / bessel_j(100, 50.0) - 1)
    assert rel <= 1e-2


def test_asymptotic_at_20_10():
    assert abs(bessel_asymptotic(20, 10.0) / bessel_j(20, 10.0) - 1) <= 5e-2


def test_asymptotic_error_decreases_with_order():
    errs = [abs(bessel_asymptotic(n, n / 2) / bessel_j(n, n / 2) - 1) for n in (20, 40, 80, 160)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_debye_correction_predicts_error():
    for n in (40, 160):
        rel = bessel_asymptotic(n, n / 2) / bessel_j(n, n / 2) - 1
        assert rel == pytest.approx(-debye_correction(n, n / 2), rel=0.1)


def test_square_form_consistent():
    for n, x in [(10, 3.0), (100, 50.0), (57, 56.0)]:
        assert bessel_sq_asymptotic(n, x) == pytest.approx(bessel_asymptotic(n, x) ** 2, rel=1e-12)
    assert bessel_sq_asymptotic(100, 50.0) == pytest.approx(bessel_j(100, 50.0) ** 2, rel=2e-2)


def test_printed_square_form_is_far_off():
    gap = (log_bessel_sq_printed(100, 50.0) - 2 * math.log(bessel_j(100, 50.0))) / math.log(10)
    assert gap > 1e3


@pytest.mark.parametrize("n, x", [(10, 10.0), (10, 12.0), (10, 0.0), (10, -1.0)])
def test_asymptotic_domain(n, x):
    with pytest.raises(DomainError):
        bessel_asymptotic(n, x)


def test_asymptotic_underflow_flag():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = bessel_asymptotic(5000, 10.0)
    assert val == 0.0
    assert any(issubclass(w.category, UnderflowWarning) for w in caught)
    assert math.isfinite(log_bessel_asymptotic(5000, 10.0))


def test_evaluate_methods():
    r = evaluate(100, 50.0, "recurrence")
    q = evaluate(100, 50.0, "quadrature")
    a = evaluate(100, 50.0, "asymptotic")
    assert r.method == "recurrence" and evaluate(3, 1.0).method == "series"
    assert q.value == pytest.approx(r.value, rel=1e-12)
    assert abs(a.value - r.value) < 3 * a.est_error
    with pytest.raises(DomainError):
        evaluate(1, 1.0, "magic")
