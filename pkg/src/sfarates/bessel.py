r"""Bessel functions of integer order, two-argument generalized Bessel
functions, and the large-order (Debye-type) asymptotic form.

Ordinary Bessel values come from Miller's backward recurrence

.. math::
    J_{k-1}(x) = \frac{2k}{x} J_k(x) - J_{k+1}(x)

started well above ``max(n, x)`` and normalized with
:math:`J_0 + 2\sum_{k\ge1} J_{2k} = 1`, run in 80-bit extended precision so
that values carry close to full double precision even in the oscillatory
region.  Small arguments use the ascending series instead.

The generalized Bessel function is built from the decomposition

.. math::
    J_n(u, v) = \sum_k J_{n-2k}(u) J_k(v),

truncated with the rigorous bound :math:`|J_k(v)| \le (|v|/2)^{|k|}/|k|!`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import AccuracyError, DomainError, RangeError, UnderflowWarning

MAX_ORDER = 100_000
MAX_ARG = 100_000.0
SERIES_MAX_ARG = 2.0
GEN_TAIL_TOL = 1e-14
GEN_MAX_TERMS = 20_000

_LD = np.longdouble
_RESCALE = _LD("1e1000")
_LOG_RESCALE = float(np.log(_RESCALE))


def _check_inputs(n, x):
    if abs(n) > MAX_ORDER:
        raise RangeError(f"order {n} exceeds supported maximum {MAX_ORDER}")
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise RangeError("Bessel argument must be finite")
    if np.any(np.abs(xa) > MAX_ARG):
        raise RangeError(f"Bessel argument exceeds supported maximum {MAX_ARG:g}")
    return xa


def _start_order(m):
    m = float(m)
    start = int(m + 30 + 10 * m ** (1.0 / 3.0))
    return start + (start % 2)


def _miller_log(n, x):
    """log|J_n(x)| and sign for a single order n >= 0 and 1-d array x > 0."""
    x = x.astype(_LD)
    m = len(x)
    start = _start_order(max(n, float(x.max())))
    jp1 = np.zeros(m, dtype=_LD)
    j = np.ones(m, dtype=_LD)
    norm = np.zeros(m, dtype=_LD)
    res = np.zeros(m, dtype=_LD)
    res_scale = np.zeros(m)  # rescalings applied to norm after res was captured
    captured = False
    for k in range(start, 0, -1):
        jm1 = (2 * k / x) * j - jp1
        jp1, j = j, jm1
        if k - 1 == n:
            res = j.copy()
            captured = True
        if (k - 1) % 2 == 0 and k > 1:
            norm += 2 * j
        big = np.abs(j) > _RESCALE
        if big.any():
            j[big] /= _RESCALE
            jp1[big] /= _RESCALE
            norm[big] /= _RESCALE
            if captured:
                res_scale[big] += 1
    norm += j
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(res)) - np.log(np.abs(norm)) - res_scale * _LOG_RESCALE
    sign = np.sign(res) * np.sign(norm)
    return logabs.astype(float), sign.astype(float)


def _series_log(n, x):
    """Ascending series; accurate for small x."""
    x = x.astype(_LD)
    q = -(x * x) / 4
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 200):
        term = term * q / (k * (n + k))
        total += term
        if np.all(np.abs(term) <= np.abs(total) * _LD("1e-21")):
            break
    logpre = n * np.log(x / 2) - _LD(gammaln(n + 1.0))
    logabs = logpre + np.log(np.abs(total))
    return logabs.astype(float), np.sign(total).astype(float)


def log_bessel_j(n: int, x):
    """Return ``(log|J_n(x)|, sign)`` without ever underflowing.

    ``J_n(x) == sign * exp(logabs)``; exact zeros give ``logabs = -inf``
    and ``sign = 0``.
    """
    n = int(n)
    xa = _check_inputs(n, x)
    scalar = xa.ndim == 0
    xf = np.atleast_1d(xa).ravel()
    parity = 1.0
    if n < 0:
        n = -n
        parity = -1.0 if n % 2 else 1.0
    sgn_x = np.where((xf < 0) & (n % 2 == 1), -1.0, 1.0)
    ax = np.abs(xf)

    logabs = np.empty(len(ax))
    sign = np.empty(len(ax))
    zero = ax == 0
    logabs[zero] = 0.0 if n == 0 else -np.inf
    sign[zero] = 1.0 if n == 0 else 0.0
    small = (~zero) & (ax <= SERIES_MAX_ARG)
    large = ax > SERIES_MAX_ARG
    if small.any():
        logabs[small], sign[small] = _series_log(n, ax[small])
    if large.any():
        logabs[large], sign[large] = _miller_log(n, ax[large])
    sign = sign * sgn_x * parity
    if scalar:
        return float(logabs[0]), float(sign[0])
    return logabs.reshape(xa.shape), sign.reshape(xa.shape)


def bessel_j(n: int, x):
    """Bessel function of the first kind of integer order.

    Accepts scalar or array ``x``; negative orders and arguments are
    handled through ``J_{-n}(x) = J_n(-x) = (-1)^n J_n(x)``.

    Raises
    ------
    RangeError
        If ``|n| > MAX_ORDER`` or ``|x| > MAX_ARG`` or ``x`` is not finite.
    """
    logabs, sign = log_bessel_j(n, x)
    with np.errstate(under="ignore"):
        val = sign * np.exp(logabs)
    if np.ndim(val) == 0:
        return float(val)
    return val


def bessel_j_orders(n_max: int, x):
    """All of ``J_0(x) ... J_{n_max}(x)`` from one backward recurrence.

    Returns an array of shape ``(n_max + 1,) + np.shape(x)``.  Values too
    small for double precision come back as 0.0.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError("n_max must be non-negative", field="n_max")
    xa = _check_inputs(n_max, x)
    shape = xa.shape
    xf = np.atleast_1d(xa).ravel()
    out = np.zeros((n_max + 1, len(xf)))
    ax = np.abs(xf)
    zero = ax == 0
    out[0, zero] = 1.0
    nz = ~zero
    if nz.any():
        xs = ax[nz].astype(_LD)
        m = len(xs)
        start = max(_start_order(max(n_max, float(xs.max()))), n_max + 2)
        jp1 = np.zeros(m, dtype=_LD)
        j = np.ones(m, dtype=_LD)
        norm = np.zeros(m, dtype=_LD)
        store = np.zeros((n_max + 1, m), dtype=_LD)
        count = np.zeros(m)
        stamp = np.zeros((n_max + 1, m))
        for k in range(start, 0, -1):
            jm1 = (2 * k / xs) * j - jp1
            jp1, j = j, jm1
            if k - 1 <= n_max:
                store[k - 1] = j
                stamp[k - 1] = count
            if (k - 1) % 2 == 0 and k > 1:
                norm += 2 * j
            big = np.abs(j) > _RESCALE
            if big.any():
                j[big] /= _RESCALE
                jp1[big] /= _RESCALE
                norm[big] /= _RESCALE
                count[big] += 1
        norm += j
        with np.errstate(under="ignore"):
            factor = np.exp((-(count - stamp) * _LOG_RESCALE).astype(_LD))
            vals = (store / norm) * factor
        out[:, nz] = vals.astype(float)
    # parity for negative arguments
    neg = xf < 0
    if neg.any():
        odd = np.arange(n_max + 1) % 2 == 1
        out[np.ix_(odd, neg)] *= -1.0
    return out.reshape((n_max + 1,) + shape)


def _signed_orders(m_max, x):
    """J_m(x) for m in [-m_max, m_max]; row index m + m_max."""
    pos = bessel_j_orders(m_max, x)
    sign = np.where(np.arange(1, m_max + 1) % 2 == 1, -1.0, 1.0)
    sign = sign.reshape((-1,) + (1,) * (pos.ndim - 1))
    neg = (pos[1:] * sign)[::-1]
    return np.concatenate([neg, pos], axis=0)


def gen_truncation(v: float, tol: float = GEN_TAIL_TOL) -> int:
    """Smallest K with ``sum_{|k|>K} |J_k(v)| < tol`` by the power-series bound."""
    a = abs(v) / 2.0
    if a == 0.0:
        return 0
    k = max(int(math.ceil(a)), 1)
    logt = k * math.log(a) - math.lgamma(k + 1)
    while k <= GEN_MAX_TERMS:
        log_next = logt + math.log(a) - math.log(k + 1)
        ratio = a / (k + 2)
        if ratio < 1.0:
            tail = 2.0 * math.exp(log_next) / (1.0 - ratio)
            if tail < tol:
                return k
        k += 1
        logt = log_next
    raise AccuracyError(f"generalized Bessel sum over k does not converge within {GEN_MAX_TERMS} terms")


def _gen_sum(orders, u, v, kmax):
    ks = np.arange(-kmax, kmax + 1)
    jv = _signed_orders(kmax, float(v))  # shape (2K+1,)
    m_max = int(np.max(np.abs(orders))) + 2 * kmax
    ju = _signed_orders(m_max, u)  # shape (2M+1,) + u.shape
    idx = orders[:, None] - 2 * ks[None, :] + m_max
    terms = ju[idx]  # (n_orders, 2K+1) + u.shape
    jv_b = jv.reshape((1, -1) + (1,) * (terms.ndim - 2))
    return np.sum(terms * jv_b, axis=1)


def gen_bessel_j_orders(orders, u, v):
    """Generalized Bessel ``J_n(u, v)`` for each order in ``orders``.

    ``u`` may be an array (result shape ``(len(orders),) + u.shape``);
    ``v`` is a scalar.
    """
    orders = np.atleast_1d(np.asarray(orders, dtype=int))
    if not math.isfinite(v):
        raise RangeError("generalized Bessel argument v must be finite")
    return _gen_sum(orders, u, v, gen_truncation(v))


def gen_bessel_j(n: int, u: float, v: float) -> float:
    """Two-argument generalized Bessel function ``J_n(u, v)``.

    Defined through the generating function
    ``exp(i(u sin t + v sin 2t)) = sum_n J_n(u, v) exp(i n t)``.

    Raises
    ------
    AccuracyError
        If the sum over ``k`` cannot be truncated below the tail tolerance;
        ``partial`` holds the sum over the terms that were evaluated.
    """
    if not (math.isfinite(u) and math.isfinite(v)):
        raise RangeError("generalized Bessel arguments must be finite")
    orders = np.array([int(n)])
    try:
        kmax = gen_truncation(v)
    except AccuracyError as exc:
        exc.partial = float(_gen_sum(orders, float(u), float(v), GEN_MAX_TERMS)[0])
        raise
    return float(_gen_sum(orders, float(u), float(v), kmax)[0])


# -- large-order asymptotics -------------------------------------------------


def _check_asymptotic(n, x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(xa >= n):
        raise DomainError(
            f"asymptotic form requires n > x > 0 (got n={n}, x={x})", field="x"
        )
    return xa


def log_bessel_asymptotic(n: int, x):
    """Logarithm of the leading large-order form for ``n > x > 0``.

    With ``cosh(a) = n / x`` the form is
    ``exp(n tanh a - n a) / sqrt(2 pi n tanh a)``; here
    ``n tanh a = sqrt(n^2 - x^2)`` and
    ``exp(-n a) = x^n / (n + sqrt(n^2 - x^2))^n``.
    """
    xa = _check_asymptotic(n, x)
    s = np.sqrt((n - xa) * (n + xa))
    out = s + n * np.log(xa / (n + s)) - 0.5 * np.log(2 * np.pi * s)
    return float(out) if out.ndim == 0 else out


def _exp_flagged(logval):
    with np.errstate(under="ignore"):
        val = np.exp(logval)
    if np.any((val == 0.0) & np.isfinite(logval)):
        warnings.warn("result underflowed to 0.0", UnderflowWarning, stacklevel=3)
    return float(val) if np.ndim(val) == 0 else val


def bessel_asymptotic(n: int, x):
    """Leading large-order approximation to ``J_n(x)`` for ``n > x > 0``.

    Issues :class:`UnderflowWarning` when the value is below double range.
    """
    return _exp_flagged(log_bessel_asymptotic(n, x))


def bessel_sq_asymptotic(n: int, x):
    """Square of :func:`bessel_asymptotic`, computed in log space.

    ``x^(2n) exp(2 sqrt(n^2-x^2)) / (2 pi sqrt(n^2-x^2) (n + sqrt(n^2-x^2))^(2n))``
    """
    return _exp_flagged(2.0 * np.asarray(log_bessel_asymptotic(n, x)))


def log_bessel_sq_printed(n: int, x):
    """Log of the squared form with ``exp(n^2 - x^2)`` in place of
    ``exp(2 sqrt(n^2 - x^2))``.

    Kept only to quantify how far that variant is from the true square.
    """
    xa = _check_asymptotic(n, x)
    s = np.sqrt((n - xa) * (n + xa))
    out = (n * n - xa * xa) + 2 * n * np.log(xa / (n + s)) - np.log(2 * np.pi * s)
    return float(out) if out.ndim == 0 else out


def debye_correction(n: int, x):
    """First Debye correction ``u1(t)/n`` with ``t = n / sqrt(n^2 - x^2)``.

    The relative error of :func:`bessel_asymptotic` is ``~|u1(t)|/n``.
    """
    xa = _check_asymptotic(n, x)
    t = n / np.sqrt((n - xa) * (n + xa))
    out = (3 * t - 5 * t**3) / 24.0 / n
    return float(out) if out.ndim == 0 else out


# -- single evaluations with provenance ---------------------------------------


@dataclass(frozen=True)
class BesselEval:
    n: int
    x: float
    value: float
    method: str
    est_error: float


def evaluate(n: int, x: float, method: str = "recurrence") -> BesselEval:
    """Evaluate ``J_n(x)`` by a named method and attach an error estimate.

    ``method`` is one of ``recurrence`` (Miller or series, whichever
    :func:`bessel_j` picks), ``quadrature`` or ``asymptotic``.
    """
    eps = np.finfo(float).eps
    if method == "recurrence":
        value = bessel_j(n, x)
        used = "series" if 0 < abs(x) <= SERIES_MAX_ARG else "recurrence"
        return BesselEval(n, x, value, used, 4 * eps * abs(value))
    if method == "quadrature":
        from .quadrature import bessel_j_quad

        value, err = bessel_j_quad(n, x, return_error=True)
        return BesselEval(n, x, value, "quadrature", err)
    if method == "asymptotic":
        value = bessel_asymptotic(n, x)
        return BesselEval(n, x, value, "asymptotic", abs(debye_correction(n, x) * value))
    raise DomainError(f"unknown method {method!r}", field="method")
