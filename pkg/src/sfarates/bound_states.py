"""Momentum-space hydrogenic initial states.

Uses the symmetric Fourier convention

    phi(p) = (2 pi)^(-3/2) * integral d^3r exp(-i p.r) phi(r),

so that ``integral |phi(p)|^2 d^3p = 1``.  The quantization axis of the 2p
states is the z axis of whatever frame the momentum vector is given in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

KINDS = (
    "hydrogenic_1s",
    "hydrogenic_2p_m0",
    "hydrogenic_2p_m+1",
    "hydrogenic_2p_m-1",
    "hydrogenic_2p",
)
PRINCIPAL_N = {
    "hydrogenic_1s": 1,
    "hydrogenic_2p_m0": 2,
    "hydrogenic_2p_m+1": 2,
    "hydrogenic_2p_m-1": 2,
    "hydrogenic_2p": 2,
}

#: Neon 2p ionization potential in hartree (21.5645 eV).
NEON_2P_EB = 0.7925


def effective_charge_for(eb: float, principal_n: int) -> float:
    """Effective charge whose hydrogenic level ``n`` has binding energy ``eb``."""
    if not eb > 0:
        raise DomainError(f"eb must be positive, got {eb}", field="eb")
    if principal_n not in (1, 2):
        raise DomainError(f"principal_n must be 1 or 2, got {principal_n}", field="principal_n")
    return principal_n * math.sqrt(2.0 * eb)


@dataclass(frozen=True)
class BoundStateModel:
    """Hydrogenic bound state with effective charge.

    ``hydrogenic_2p`` is the incoherent average over the three magnetic
    sublevels; it has a density but no single wavefunction.
    """

    kind: str
    z_eff: float
    eb: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown state kind {self.kind!r}; expected one of {KINDS}", field="kind")
        if not self.z_eff > 0:
            raise DomainError(f"z_eff must be positive, got {self.z_eff}", field="z_eff")
        if not self.eb > 0:
            raise DomainError(f"eb must be positive, got {self.eb}", field="eb")

    @classmethod
    def from_binding_energy(cls, kind, eb):
        return cls(kind, effective_charge_for(eb, PRINCIPAL_N[kind]), eb)

    @classmethod
    def hydrogen(cls):
        return cls("hydrogenic_1s", 1.0, 0.5)

    @classmethod
    def neon(cls, eb=NEON_2P_EB):
        return cls.from_binding_energy("hydrogenic_2p", eb)

    @property
    def principal_n(self):
        return PRINCIPAL_N[self.kind]


def _radial_1s(p, z):
    return (2.0 * math.sqrt(2.0) / math.pi) * z**2.5 / (p * p + z * z) ** 2


def _radial_2p(p, z):
    # F(p) = C p / (p^2 + k^2)^3 with k = Z/2 and C^2 = 512 k^7 / (3 pi)
    k = 0.5 * z
    c = math.sqrt(512.0 * k**7 / (3.0 * math.pi))
    return c * p / (p * p + k * k) ** 3


def _split(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise DomainError("momentum must have a trailing dimension of length 3", field="p")
    px, py, pz = p[..., 0], p[..., 1], p[..., 2]
    return px, py, pz, np.sqrt(px * px + py * py + pz * pz)


def momentum_wavefunction(state: BoundStateModel, p):
    """Complex amplitude ``phi(p)`` for momentum vector(s) ``p`` (a.u.).

    ``p`` has a trailing axis of length 3.  The global phase ``(-i)^l`` is
    included for the 2p states.
    """
    px, py, pz, pm = _split(p)
    z = state.z_eff
    if state.kind == "hydrogenic_1s":
        return _radial_1s(pm, z).astype(complex)
    if state.kind == "hydrogenic_2p":
        raise DomainError("hydrogenic_2p is an m-average; use momentum_density", field="kind")
    radial = _radial_2p(pm, z)
    with np.errstate(invalid="ignore", divide="ignore"):
        if state.kind == "hydrogenic_2p_m0":
            ang = math.sqrt(3.0 / (4.0 * math.pi)) * np.where(pm > 0, pz / pm, 0.0)
        else:
            m = 1 if state.kind.endswith("+1") else -1
            # Condon-Shortley phase on m=+1
            ang = -m * math.sqrt(3.0 / (8.0 * math.pi)) * np.where(pm > 0, (px + 1j * m * py) / pm, 0.0)
    return -1j * radial * ang


def momentum_density(state: BoundStateModel, p):
    """``|phi(p)|^2``; for ``hydrogenic_2p`` the average over m."""
    if state.kind == "hydrogenic_2p":
        _, _, _, pm = _split(p)
        return _radial_2p(pm, state.z_eff) ** 2 / (4.0 * math.pi)
    return np.abs(momentum_wavefunction(state, p)) ** 2


def density_polar(state: BoundStateModel, p, cos_theta, sin_theta=None):
    """``|phi|^2`` at magnitude ``p`` and polar angle from the quantization axis.

    Every shipped state is azimuthally symmetric in density, so only the
    polar angle matters.
    """
    p = np.asarray(p, dtype=float)
    c = np.asarray(cos_theta, dtype=float)
    if sin_theta is None:
        sin_theta = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    z = state.z_eff
    if state.kind == "hydrogenic_1s":
        return _radial_1s(p, z) ** 2 * np.ones_like(c)
    r2 = _radial_2p(p, z) ** 2
    if state.kind == "hydrogenic_2p":
        return r2 / (4.0 * math.pi) * np.ones_like(c)
    if state.kind == "hydrogenic_2p_m0":
        return r2 * 3.0 / (4.0 * math.pi) * c * c
    return r2 * 3.0 / (8.0 * math.pi) * np.asarray(sin_theta) ** 2
