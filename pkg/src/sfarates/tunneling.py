"""Tunneling-type exponential factors and the exponent fit used to look for them."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError, UnderflowWarning


def _exp_checked(exponent):
    if exponent < -745.2:
        warnings.warn("result underflowed to 0.0", UnderflowWarning, stacklevel=3)
        return 0.0
    return math.exp(exponent)


def tunneling_exponent(e_field: float, eb: float) -> float:
    """``-(2/3) (2 E_B)^(3/2) / E``, the log of :func:`tunneling_rate_factor`."""
    if not e_field > 0:
        raise DomainError(f"field must be positive, got {e_field}", field="E")
    if not eb > 0:
        raise DomainError(f"eb must be positive, got {eb}", field="eb")
    return -(2.0 / 3.0) * (2.0 * eb) ** 1.5 / e_field


def tunneling_rate_factor(e_field: float, eb: float) -> float:
    """``exp[-(2/3) (2 E_B)^(3/2) / E]`` for field amplitude ``E`` (a.u.)."""
    return _exp_checked(tunneling_exponent(e_field, eb))


def toll_wheeler_factor(omega_ratio: float, field_ratio: float) -> float:
    """``exp(-4 / (3 chi))`` with ``chi = omega_ratio * field_ratio``.

    ``omega_ratio`` is the probe photon energy over the electron mass and
    ``field_ratio`` the background field over the critical field.  At
    ``chi = 0`` the factor is 0 and an :class:`UnderflowWarning` is issued.
    """
    if omega_ratio < 0 or field_ratio < 0:
        raise DomainError("both ratios must be non-negative", field="chi")
    chi = omega_ratio * field_ratio
    if chi == 0.0:
        warnings.warn("chi = 0: factor underflows to 0.0", UnderflowWarning, stacklevel=2)
        return 0.0
    return _exp_checked(-4.0 / (3.0 * chi))


def tunneling_comparator(fp, p_par):
    """Tunneling-factor model of the longitudinal momentum distribution.

    An electron drifting with longitudinal momentum ``p_par`` was released
    at the phase where ``E sin(phase) = omega p_par``, when the
    instantaneous field was ``sqrt(E^2 - omega^2 p_par^2)``.  Returns
    ``exp[-(2/3) (2 E_B)^(3/2) / E_inst]`` (unnormalized), zero where no
    such phase exists.
    """
    p = np.asarray(p_par, dtype=float)
    e_inst2 = fp.e0**2 - (fp.omega * p) ** 2
    out = np.zeros(p.shape)
    ok = e_inst2 > 0
    with np.errstate(under="ignore"):
        out[ok] = np.exp(-(2.0 / 3.0) * (2.0 * fp.eb) ** 1.5 / np.sqrt(e_inst2[ok]))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ExponentFit:
    """Result of fitting ``ln W = a - C / E``."""

    C: float
    a: float
    residual_norm: float
    n_samples: int

    def predict(self, e_field):
        return np.exp(self.a - self.C / np.asarray(e_field, dtype=float))


def tunneling_exponent_fit(samples, weights=None) -> ExponentFit:
    """Weighted least squares of ``ln W`` against ``1/E``.

    ``samples`` is a sequence of ``(E, W)`` pairs with ``E > 0`` and
    ``W > 0``.  The residual norm is ``sqrt(sum w_i r_i^2)`` with ``r_i``
    the residual in ``ln W``; a pure tunneling exponential gives ~0.

    Raises
    ------
    DomainError
        Fewer than three samples, or a non-positive ``E`` or ``W``.
    FitError
        The design matrix is rank deficient (e.g. all ``E`` equal).
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 3:
        raise DomainError("need at least three (E, W) samples", field="samples")
    e, w_rate = data[:, 0], data[:, 1]
    if np.any(e <= 0) or np.any(w_rate <= 0) or not np.all(np.isfinite(data)):
        raise DomainError("all E and W must be positive and finite", field="samples")
    wt = np.ones_like(e) if weights is None else np.asarray(weights, dtype=float)
    if wt.shape != e.shape or np.any(wt < 0):
        raise DomainError("weights must be non-negative, one per sample", field="weights")

    sw = np.sqrt(wt)
    design = np.column_stack([np.ones_like(e), -1.0 / e]) * sw[:, None]
    rhs = np.log(w_rate) * sw
    coef, _, rank, sv = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 2 or sv[-1] <= 1e-12 * sv[0]:
        raise FitError("degenerate design matrix: the E values do not determine C")
    resid = rhs - design @ coef
    return ExponentFit(C=float(coef[1]), a=float(coef[0]), residual_norm=float(np.linalg.norm(resid)), n_samples=len(e))


@dataclass(frozen=True)
class SweepPoint:
    e_field: float
    rate: float
    n0: int
    gamma_k: float
    beta0: float


def exponent_sweep(
    omega,
    state,
    polarization="linear",
    gamma_k_range=(0.2, 0.5),
    beta0_max=0.1,
    quantity="lowest_channel",
    excess_fraction=0.5,
    workers=1,
):
    """Rates over a field sweep at fixed frequency, ready for :func:`tunneling_exponent_fit`.

    The ponderomotive energy is stepped so that the lowest open channel always
    carries the kinetic energy ``excess_fraction * omega``:
    ``U_p = n0 omega - E_B - excess_fraction * omega`` for successive integers
    ``n0``.  Sampling at a fixed position inside the channel keeps the
    threshold behaviour of a channel that has just opened out of the fit.
    Points with ``gamma_K`` outside ``gamma_k_range`` or ``beta0 >= beta0_max``
    are dropped.  ``quantity`` is ``"lowest_channel"`` or ``"total"``.
    """
    from .params import LaserInput, derive_params
    from .rates import partial_rate, total_rate

    if not 0.0 < excess_fraction < 1.0:
        raise DomainError("excess_fraction must lie in (0, 1)", field="excess_fraction")
    if quantity not in ("lowest_channel", "total"):
        raise DomainError(f"unknown quantity {quantity!r}", field="quantity")
    g_lo, g_hi = sorted(gamma_k_range)
    if not g_lo > 0:
        raise DomainError("gamma_k_range must be positive", field="gamma_k_range")
    eb = state.eb
    # gamma_K = sqrt(E_B / (2 U_p)) bounds U_p on both sides
    up_lo = eb / (2.0 * g_hi * g_hi)
    up_hi = eb / (2.0 * g_lo * g_lo)
    n_first = math.ceil((up_lo + eb) / omega + excess_fraction)
    n_last = math.floor((up_hi + eb) / omega + excess_fraction)
    params = []
    for n in range(n_first, n_last + 1):
        up = n * omega - eb - excess_fraction * omega
        fp = derive_params(LaserInput(omega, up=up, polarization=polarization), eb)
        if g_lo <= fp.gamma_k <= g_hi and fp.beta0 < beta0_max:
            params.append(fp)

    def one(fp):
        if quantity == "lowest_channel":
            w = partial_rate(fp, fp.n0, state, polarization)
        else:
            w = total_rate(fp, state, polarization)
        return SweepPoint(fp.e0, w, fp.n0, fp.gamma_k, fp.beta0)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, params))
    return [one(fp) for fp in params]
