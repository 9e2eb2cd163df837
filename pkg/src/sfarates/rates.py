r"""Velocity-gauge SFA ionization rates for monochromatic fields.

The differential rate is a sum over absorbed-photon channels ``n >= n0``,

.. math::
    \frac{dW}{d\Omega} = 2\pi \sum_{n \ge n_0} p_n
        \left(\tfrac{p_n^2}{2} + E_B\right)^2 |\phi_i(\mathbf{p}_n)|^2 B_n^2,

with ``p_n^2/2 = n omega - U_p - E_B``.  For circular polarization
``B_n = J_n(alpha0_c p sin(theta))`` with ``theta`` measured from the
propagation axis.  For linear polarization ``B_n = J_n(alpha0_l p cos(theta_E),
-z/2)``, a generalized Bessel function, with ``theta_E`` the angle between
``p`` and the polarization axis.

Terms are formed in log space and accumulated with a compensated sum so
that channels far below double range neither underflow nor perturb the
result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import gen_bessel_j_orders, log_bessel_asymptotic, log_bessel_j
from .bound_states import BoundStateModel, density_polar, momentum_density
from .errors import AccuracyError, DomainError, InvariantViolation
from .params import FieldParams

AXES = ("polarization", "propagation")
_LOG_2PI = math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Channel:
    n: int
    p: float
    open: bool = True


@dataclass(frozen=True)
class QuadSpec:
    """Gauss-Legendre settings for angular integration.

    The order is doubled from ``order`` until two successive totals agree
    to ``rtol``, up to ``max_order``.  ``n_phi`` trapezoid points are used
    in azimuth when the integrand is not azimuthally symmetric.
    """

    order: int = 48
    max_order: int = 2048
    rtol: float = 1e-9
    n_phi: int = 64


def channel_momentum(fp: FieldParams, n: int) -> float:
    """Photoelectron momentum for channel ``n`` (0 if the channel is closed)."""
    ke = n * fp.omega - fp.up - fp.eb
    return math.sqrt(2.0 * ke) if ke > 0 else 0.0


def channel(fp: FieldParams, n: int) -> Channel:
    ke = n * fp.omega - fp.up - fp.eb
    return Channel(n, math.sqrt(2.0 * ke) if ke > 0 else 0.0, ke >= 0)


def default_state(fp: FieldParams) -> BoundStateModel:
    return BoundStateModel.from_binding_energy("hydrogenic_1s", fp.eb)


# -- invariant chain for circular polarization ---------------------------------


@dataclass(frozen=True)
class ChainCheck:
    """Values of the inequality chain ``zeta <= alpha p < 2 sqrt(z (n - z)) <= n``."""

    n: int
    zeta_max: float
    alpha_p: float
    bound: float

    @property
    def ok(self):
        tol = 4 * _EPS
        return (
            self.zeta_max <= self.alpha_p * (1 + tol)
            and (self.alpha_p < self.bound or self.alpha_p == self.bound == 0.0)
            and self.bound <= self.n * (1 + tol)
            and self.zeta_max < self.n
        )


def channel_chain(fp: FieldParams, n: int, zeta) -> ChainCheck:
    p = channel_momentum(fp, n)
    zmax = float(np.max(zeta)) if np.size(zeta) else 0.0
    return ChainCheck(n, zmax, fp.alpha0_c * p, 2.0 * math.sqrt(fp.z * (n - fp.z)))


def _assert_chain(fp, n, zeta):
    check = channel_chain(fp, n, zeta)
    if not check.ok:
        raise InvariantViolation(f"channel inequality chain broken: {check}")
    return check


# -- per-channel angular densities ---------------------------------------------


@dataclass
class _Angles:
    """Direction samples.  ``cos_ref`` is the cosine to the frame's z axis,
    ``cos_e`` the direction cosine to the polarization vector (linear only)
    and ``cos_q`` the cosine to the state's quantization axis."""

    cos_t: np.ndarray
    sin_t: np.ndarray
    phi: np.ndarray | None = None

    def vectors(self):
        phi = 0.0 if self.phi is None else self.phi
        return np.stack(
            [self.sin_t * np.cos(phi), self.sin_t * np.sin(phi), self.cos_t * np.ones_like(phi)], axis=-1
        )


def _log_prefactor(fp, state, n, p, angles, polarization, axis):
    """log of 2 pi p (p^2/2 + E_B)^2 |phi|^2 on the sample directions."""
    ebar = n * fp.omega - fp.up  # = p^2/2 + E_B
    if polarization == "circular" or axis == "polarization":
        if angles.phi is None:
            dens = density_polar(state, p, angles.cos_t, angles.sin_t)
        else:
            dens = momentum_density(state, p * angles.vectors())
    else:
        # quantization axis along the polarization vector (frame x axis)
        ce = angles.sin_t * np.cos(angles.phi)
        dens = density_polar(state, p, ce)
    with np.errstate(divide="ignore"):
        return _LOG_2PI + math.log(p) + 2.0 * math.log(ebar) + np.log(dens)


def _log_bessel_sq(fp, n, p, angles, polarization, axis, bessel, asym_min_order):
    if polarization == "circular":
        zeta = fp.alpha0_c * p * angles.sin_t
        _assert_chain(fp, n, zeta)
        if bessel == "asymptotic" and n >= asym_min_order:
            out = np.full(np.shape(zeta), -np.inf)
            pos = zeta > 0
            if np.any(pos):
                out[pos] = 2.0 * log_bessel_asymptotic(n, zeta[pos])
            return out
        logabs, _ = log_bessel_j(n, zeta)
        return 2.0 * logabs
    if axis == "polarization":
        ce = angles.cos_t
    else:
        ce = angles.sin_t * np.cos(angles.phi)
    u = fp.alpha0_l * p * ce
    jn = gen_bessel_j_orders([n], u, -0.5 * fp.z)[0]
    with np.errstate(divide="ignore"):
        return 2.0 * np.log(np.abs(jn))


def _log_terms(fp, state, n, angles, polarization, axis, bessel, asym_min_order):
    p = channel_momentum(fp, n)
    if p == 0.0:
        return np.full(np.shape(angles.cos_t * (1.0 if angles.phi is None else angles.phi)), -np.inf)
    return _log_prefactor(fp, state, n, p, angles, polarization, axis) + _log_bessel_sq(
        fp, n, p, angles, polarization, axis, bessel, asym_min_order
    )


def monotone_order(fp: FieldParams, polarization: str) -> int:
    """Order beyond which channel contributions decay monotonically.

    Circular: the largest Bessel argument over order, ``2 sqrt(z (n-z-E_B/w))/n``,
    peaks at ``n = 2 (z + E_B/w)`` and decreases afterwards.  Linear: past
    ten ponderomotive energies of kinetic energy, well beyond the direct
    electron cutoff at 2 U_p.
    """
    if polarization == "circular":
        return math.ceil(2.0 * (fp.z + fp.eb / fp.omega))
    return math.ceil((fp.eb + 11.0 * fp.up) / fp.omega) + 1


# -- compensated log-space accumulation -----------------------------------------


class _LogAccumulator:
    """Neumaier-compensated sum of ``exp(logt)`` held relative to a moving reference."""

    def __init__(self, shape):
        self.ref = np.full(shape, -np.inf)
        self.s = np.zeros(shape)
        self.c = np.zeros(shape)

    def add(self, logt):
        logt = np.broadcast_to(logt, self.ref.shape)
        new_ref = np.maximum(self.ref, logt)
        finite = np.isfinite(new_ref)
        with np.errstate(invalid="ignore", under="ignore"):
            shift = np.where(finite & np.isfinite(self.ref), np.exp(self.ref - new_ref), 0.0)
            self.s = np.where(finite, self.s * shift, 0.0)
            self.c = np.where(finite, self.c * shift, 0.0)
            self.ref = np.where(finite, new_ref, self.ref)
            x = np.where(finite, np.exp(logt - self.ref), 0.0)
        t = self.s + x
        big = np.abs(self.s) >= np.abs(x)
        self.c = self.c + np.where(big, (self.s - t) + x, (x - t) + self.s)
        self.s = t

    def log_value(self):
        with np.errstate(divide="ignore"):
            return self.ref + np.log(self.s + self.c)

    def value(self):
        with np.errstate(under="ignore", invalid="ignore"):
            return np.where(np.isfinite(self.ref), np.exp(self.ref) * (self.s + self.c), 0.0)


def _check_tail_eps(tail_eps):
    if not tail_eps > 0:
        raise DomainError(f"tail_eps must be positive, got {tail_eps}", field="tail_eps")


def _sum_channels(fp, state, angles, polarization, axis, tail_eps, bessel, asym_min_order, max_channels):
    """Sum channels at fixed directions; returns (values, list of n used)."""
    shape = np.shape(angles.cos_t * (1.0 if angles.phi is None else angles.phi))
    acc = _LogAccumulator(shape)
    n0 = fp.n0
    n_mono = monotone_order(fp, polarization)
    quiet = 0
    log_eps = math.log(tail_eps)
    n = n0
    while True:
        logt = _log_terms(fp, state, n, angles, polarization, axis, bessel, asym_min_order)
        acc.add(logt)
        logsum = acc.log_value()
        small = np.all((logt == -np.inf) | (logt <= logsum + log_eps))
        quiet = quiet + 1 if small else 0
        if n >= n_mono and quiet >= 2:
            return acc.value(), list(range(n0, n + 1))
        if n - n0 >= max_channels:
            raise AccuracyError(
                f"channel sum not converged after {max_channels} channels", partial=acc.value()
            )
        n += 1


def _angles_from(theta, phi):
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(theta > math.pi):
        raise DomainError("theta must lie in [0, pi]", field="theta")
    phi_arr = None if phi is None else np.asarray(phi, dtype=float)
    # pi - theta is exact for theta >= pi/2, so sin(pi) comes out as exactly 0
    sin_t = np.where(theta > math.pi / 2, np.sin(math.pi - theta), np.sin(theta))
    return _Angles(np.cos(theta), sin_t, phi_arr)


def _out(values, theta, phi):
    if np.ndim(theta) == 0 and (phi is None or np.ndim(phi) == 0):
        return float(np.asarray(values).reshape(()))
    return values


def dW_dOmega_circular(
    fp: FieldParams,
    state: BoundStateModel,
    theta,
    tail_eps: float = 1e-8,
    phi=None,
    bessel: str = "exact",
    asym_min_order: int = 50,
    max_channels: int = 100_000,
):
    """Differential rate for circular polarization.

    ``theta`` is the polar angle from the propagation axis.  When ``phi`` is
    given the wavefunction is evaluated on full 3-vectors, otherwise on its
    polar form.  ``bessel="asymptotic"`` replaces ``J_n`` by its large-order
    form for ``n >= asym_min_order``.
    """
    _check_tail_eps(tail_eps)
    angles = _angles_from(theta, phi)
    vals, _ = _sum_channels(fp, state, angles, "circular", "propagation", tail_eps, bessel, asym_min_order, max_channels)
    return _out(vals, theta, phi)


def dW_dOmega_linear(
    fp: FieldParams,
    state: BoundStateModel,
    theta,
    tail_eps: float = 1e-8,
    phi=None,
    axis: str = "polarization",
    max_channels: int = 100_000,
):
    """Differential rate for linear polarization.

    With ``axis="polarization"`` (default) ``theta`` is measured from the
    polarization axis and the rate does not depend on ``phi``.  With
    ``axis="propagation"`` ``theta`` is measured from the propagation axis,
    the polarization vector is the frame x axis and ``phi`` is required.
    """
    _check_tail_eps(tail_eps)
    if axis not in AXES:
        raise DomainError(f"axis must be one of {AXES}", field="axis")
    if axis == "propagation" and phi is None:
        raise DomainError("phi is required when theta is measured from the propagation axis", field="phi")
    angles = _angles_from(theta, phi)
    vals, _ = _sum_channels(fp, state, angles, "linear", axis, tail_eps, "exact", 0, max_channels)
    return _out(vals, theta, phi)


# -- angle-integrated rates ------------------------------------------------------


def _symmetric_about_azimuth(state, polarization, axis):
    return polarization == "circular" or axis == "polarization"


def _spectrum_at_order(fp, state, polarization, axis, order, n_phi, tail_eps, bessel, asym_min_order, max_channels):
    x, w = np.polynomial.legendre.leggauss(order)
    sin_t = np.sqrt((1.0 - x) * (1.0 + x))
    if _symmetric_about_azimuth(state, polarization, axis):
        angles = _Angles(x, sin_t)
        wts = 2.0 * math.pi * w
    else:
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        angles = _Angles(x[:, None], sin_t[:, None], phi[None, :])
        wts = w[:, None] * np.full(n_phi, 2.0 * math.pi / n_phi)[None, :]

    n0 = fp.n0
    n_mono = monotone_order(fp, polarization)
    out = []
    total = 0.0
    quiet = 0
    n = n0
    while True:
        logt = _log_terms(fp, state, n, angles, polarization, axis, bessel, asym_min_order)
        with np.errstate(under="ignore"):
            wn = math.fsum((wts * np.exp(logt)).ravel())
        out.append((n, wn))
        total += wn
        quiet = quiet + 1 if wn <= tail_eps * total else 0
        if n >= n_mono and quiet >= 2:
            return out
        if n - n0 >= max_channels:
            raise AccuracyError(f"channel sum not converged after {max_channels} channels", partial=out)
        n += 1


@dataclass
class Spectrum:
    """Angle-integrated partial rates ``W_n`` and the quadrature that produced them."""

    orders: np.ndarray
    rates: np.ndarray
    quad_order: int
    polarization: str
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(zip(self.orders.tolist(), self.rates.tolist()))

    def __len__(self):
        return len(self.orders)

    @property
    def total(self):
        return math.fsum(self.rates)

    @property
    def peak_order(self):
        return int(self.orders[int(np.argmax(self.rates))])


def spectrum(
    fp: FieldParams,
    state: BoundStateModel | None = None,
    polarization: str | None = None,
    quad: QuadSpec = QuadSpec(),
    tail_eps: float = 1e-8,
    axis: str = "polarization",
    bessel: str = "exact",
    asym_min_order: int = 50,
    max_channels: int = 100_000,
) -> Spectrum:
    """Per-channel angle-integrated rates, starting at ``n0``.

    Raises
    ------
    AccuracyError
        If doubling the angular quadrature order up to ``quad.max_order``
        never changes the total by less than ``quad.rtol``; ``estimates``
        holds the last two totals.
    """
    _check_tail_eps(tail_eps)
    state = state or default_state(fp)
    polarization = polarization or fp.polarization
    if polarization not in ("linear", "circular"):
        raise DomainError(f"unknown polarization {polarization!r}", field="polarization")
    if axis not in AXES:
        raise DomainError(f"axis must be one of {AXES}", field="axis")
    args = (tail_eps, bessel, asym_min_order, max_channels)
    order, n_phi = quad.order, quad.n_phi
    prev = _spectrum_at_order(fp, state, polarization, axis, order, n_phi, *args)
    while True:
        order2, n_phi = min(2 * order, quad.max_order), 2 * n_phi
        cur = _spectrum_at_order(fp, state, polarization, axis, order2, n_phi, *args)
        w_prev = math.fsum(r for _, r in prev)
        w_cur = math.fsum(r for _, r in cur)
        if abs(w_cur - w_prev) <= quad.rtol * abs(w_cur):
            break
        if order2 >= quad.max_order or order2 == order:
            raise AccuracyError(
                f"angular quadrature not converged at order {order2}", partial=w_cur, estimates=(w_prev, w_cur)
            )
        order, prev = order2, cur
    return Spectrum(
        np.array([n for n, _ in cur], dtype=int),
        np.array([r for _, r in cur]),
        order2,
        polarization,
        {"tail_eps": tail_eps, "axis": axis, "bessel": bessel},
    )


def total_rate(
    fp: FieldParams,
    state: BoundStateModel | None = None,
    polarization: str | None = None,
    quad: QuadSpec = QuadSpec(),
    tail_eps: float = 1e-8,
    **kwargs,
) -> float:
    """Total ionization rate, the solid-angle integral of the differential rate."""
    return spectrum(fp, state, polarization, quad, tail_eps, **kwargs).total


def channels(
    fp: FieldParams,
    tail_eps: float = 1e-8,
    state: BoundStateModel | None = None,
    polarization: str | None = None,
    quad: QuadSpec = QuadSpec(),
) -> list[Channel]:
    """Open channels from ``n0`` until the partial-rate tail drops below
    ``tail_eps`` relative to the running total.

    Without a ``state`` a hydrogenic 1s model matched to ``fp.eb`` sets the
    channel weights.
    """
    spec = spectrum(fp, state, polarization, quad, tail_eps)
    return [channel(fp, int(n)) for n in spec.orders]


def partial_rate(
    fp: FieldParams,
    n: int,
    state: BoundStateModel | None = None,
    polarization: str | None = None,
    order: int = 256,
    axis: str = "polarization",
) -> float:
    """Angle-integrated rate of the single channel ``n`` (Gauss-Legendre of the given order)."""
    state = state or default_state(fp)
    polarization = polarization or fp.polarization
    x, w = np.polynomial.legendre.leggauss(order)
    angles = _Angles(x, np.sqrt((1.0 - x) * (1.0 + x)))
    if not _symmetric_about_azimuth(state, polarization, axis):
        raise DomainError("partial_rate supports azimuthally symmetric configurations only", field="axis")
    logt = _log_terms(fp, state, n, angles, polarization, axis, "exact", 0)
    with np.errstate(under="ignore"):
        return math.fsum(2.0 * math.pi * w * np.exp(logt))
