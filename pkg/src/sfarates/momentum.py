"""Photoelectron momentum maps built from the channel rings.

Each open channel ``n`` emits on the sphere ``|p| = p_n``.  In the plane
spanned by the reference axis (``p_par``) and one transverse direction
(``p_perp``) the rings are spread over the grid with a Gaussian kernel in
kinetic energy and weighted by the channel's angular rate density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bound_states import BoundStateModel
from .errors import DomainError
from .params import FieldParams
from .rates import _Angles, _log_terms, channel_momentum, default_state

KERNEL_SPAN = 8.0


@dataclass(frozen=True)
class MomentumGrid:
    """Symmetric grid ``[-p_par_max, p_par_max] x [-p_perp_max, p_perp_max]``.

    Point counts are forced odd so that both axes contain 0.
    """

    p_par_max: float
    p_perp_max: float
    n_par: int = 201
    n_perp: int = 201

    def __post_init__(self):
        for name in ("p_par_max", "p_perp_max"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive, got {v}", field=name)
        for name in ("n_par", "n_perp"):
            if getattr(self, name) < 3:
                raise DomainError(f"{name} must be at least 3", field=name)

    def axes(self):
        return _mirrored(self.p_par_max, self.n_par), _mirrored(self.p_perp_max, self.n_perp)


def _mirrored(pmax, n):
    # exact negation about 0, which a plain linspace does not guarantee
    half = np.linspace(0.0, pmax, (n | 1) // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


@dataclass
class RateGrid:
    """Map values ``values[i_perp, j_par]`` on the axes ``p_perp`` x ``p_par``."""

    p_par: np.ndarray
    p_perp: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def row(self, p_perp=0.0):
        """Values along ``p_par`` on the grid row nearest ``p_perp``."""
        i = int(np.argmin(np.abs(self.p_perp - p_perp)))
        return self.values[i]

    def longitudinal(self):
        """Distribution in ``p_par`` after trapezoid integration over ``p_perp``."""
        return np.trapezoid(self.values, self.p_perp, axis=0)


def energy_kernel(energy, center, width):
    """Unit-area Gaussian in energy with standard deviation ``width``."""
    d = (np.asarray(energy) - center) / width
    return np.exp(-0.5 * d * d) / (width * math.sqrt(2.0 * math.pi))


def momentum_map(
    fp: FieldParams,
    state: BoundStateModel | None = None,
    polarization: str | None = None,
    grid: MomentumGrid | None = None,
    kernel_width: float | None = None,
) -> RateGrid:
    """Ring-smoothed photoelectron momentum distribution.

    ``p_par`` runs along the polarization axis for linear polarization and
    along the propagation axis for circular polarization.  ``kernel_width``
    is the energy standard deviation (default ``omega / 2``).  A width of 0
    bins each ring exactly: a cell takes the angular density of every ring
    passing within half a grid step of it.
    """
    state = state or default_state(fp)
    polarization = polarization or fp.polarization
    if polarization not in ("linear", "circular"):
        raise DomainError(f"unknown polarization {polarization!r}", field="polarization")
    if grid is None:
        pmax = 1.2 * math.sqrt(2.0 * max(2.0 * fp.up, fp.omega))
        grid = MomentumGrid(pmax, pmax)
    width = 0.5 * fp.omega if kernel_width is None else float(kernel_width)
    if not (width >= 0 and math.isfinite(width)):
        raise DomainError(f"kernel_width must be non-negative, got {kernel_width}", field="kernel_width")

    p_par, p_perp = grid.axes()
    pz, px = np.meshgrid(p_par, p_perp)
    p_abs = np.hypot(pz, px)
    energy = 0.5 * p_abs * p_abs
    with np.errstate(invalid="ignore"):
        cos_t = np.where(p_abs > 0, pz / p_abs, 1.0)
        sin_t = np.where(p_abs > 0, np.abs(px) / p_abs, 0.0)
    values = np.zeros_like(p_abs)
    step = max(p_par[1] - p_par[0], p_perp[1] - p_perp[0])

    if width > 0:
        e_top = float(energy.max()) + KERNEL_SPAN * width
    else:
        e_top = 0.5 * (float(p_abs.max()) + step) ** 2
    n_last = math.floor((e_top + fp.up + fp.eb) / fp.omega)
    used = []
    for n in range(fp.n0, n_last + 1):
        pn = channel_momentum(fp, n)
        if pn == 0.0:
            continue
        en = 0.5 * pn * pn
        if width > 0:
            mask = np.abs(energy - en) <= KERNEL_SPAN * width
        else:
            mask = np.abs(p_abs - pn) <= 0.5 * step
        if not mask.any():
            continue
        angles = _Angles(cos_t[mask], sin_t[mask])
        with np.errstate(under="ignore"):
            dens = np.exp(_log_terms(fp, state, n, angles, polarization, "polarization", "exact", 0))
        if width > 0:
            dens = dens * energy_kernel(energy[mask], en, width)
        values[mask] += dens
        used.append(n)

    meta = {
        "polarization": polarization,
        "state": state.kind,
        "kernel_width": width,
        "channels": [used[0], used[-1]] if used else [],
    }
    return RateGrid(p_par, p_perp, values, meta)
