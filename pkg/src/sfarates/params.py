"""Laser/atom parameter derivation and (frequency, intensity) regime maps.

Everything is in atomic units.  The drive strength of a monochromatic
field is given either as the ponderomotive energy ``up`` or as the peak
electric field ``e0``; the other one follows from

    linear:    U_p = E0**2 / (4 omega**2)
    circular:  U_p = E0**2 / (2 omega**2)

where E0 is the peak field magnitude.  Intensity maps to U_p without
reference to polarization, ``I = 4 omega**2 U_p`` (so ``I = E0**2`` for
linear polarization).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .constants import C_AU, au_to_wcm2, wcm2_to_au
from .errors import DomainError

POLARIZATIONS = ("linear", "circular")
LABELS = ("oasis", "magnetic", "relativistic", "high-frequency")


def _up_from_field(e0, omega, polarization):
    if polarization == "linear":
        return e0 * e0 / (4.0 * omega * omega)
    return e0 * e0 / (2.0 * omega * omega)


def _field_from_up(up, omega, polarization):
    if polarization == "linear":
        return 2.0 * omega * math.sqrt(up)
    return omega * math.sqrt(2.0 * up)


def up_from_intensity(intensity, omega):
    """Ponderomotive energy for an intensity given in atomic units."""
    return intensity / (4.0 * omega * omega)


def intensity_from_up(up, omega):
    return 4.0 * omega * omega * up


@dataclass(frozen=True)
class LaserInput:
    """Physical laser settings.

    Exactly one of ``up`` (ponderomotive energy) and ``e0`` (peak field)
    must be given.
    """

    omega: float
    up: float | None = None
    e0: float | None = None
    polarization: str = "linear"

    def __post_init__(self):
        if (self.up is None) == (self.e0 is None):
            raise DomainError("exactly one of 'up' and 'e0' must be supplied", field="up")
        if self.polarization not in POLARIZATIONS:
            raise DomainError(
                f"polarization must be one of {POLARIZATIONS}, got {self.polarization!r}",
                field="polarization",
            )

    @classmethod
    def from_intensity(cls, omega, intensity, polarization="linear", unit="au"):
        """Build from an intensity in atomic units (``unit="au"``) or W/cm^2 (``unit="W/cm2"``)."""
        if not omega > 0:
            raise DomainError(f"omega must be positive, got {omega}", field="omega")
        if unit == "W/cm2":
            intensity = wcm2_to_au(intensity)
        elif unit != "au":
            raise DomainError(f"intensity unit must be 'au' or 'W/cm2', got {unit!r}", field="intensity")
        return cls(omega=omega, up=up_from_intensity(intensity, omega), polarization=polarization)


@dataclass(frozen=True)
class FieldParams:
    """Complete derived parameter set for one laser/atom combination."""

    omega: float
    up: float
    e0: float
    z: float
    z1: float
    gamma_k: float
    alpha0_c: float
    alpha0_l: float
    beta0: float
    z_f: float
    eb: float
    polarization: str = "linear"

    @property
    def intensity_au(self):
        return intensity_from_up(self.up, self.omega)

    @property
    def intensity_wcm2(self):
        return au_to_wcm2(self.intensity_au)

    @property
    def eb_over_omega(self):
        return self.eb / self.omega

    @property
    def n0(self):
        """Lowest open photon order, ceil((E_B + U_p) / omega)."""
        x = (self.eb + self.up) / self.omega
        # guard against x landing a rounding error above an integer
        return math.ceil(x - 4 * np.finfo(float).eps * x)

    def as_dict(self):
        d = asdict(self)
        d["intensity_au"] = self.intensity_au
        d["intensity_wcm2"] = self.intensity_wcm2
        d["n0"] = self.n0
        return d


def check_inputs(omega, eb, up=None, e0=None) -> list[DomainError]:
    """Every domain problem with a set of physical inputs, without stopping at the first."""
    problems = []

    def bad(value, strict):
        try:
            v = float(value)
        except (TypeError, ValueError):
            return True
        return not math.isfinite(v) or (v <= 0 if strict else v < 0)

    if bad(omega, True):
        problems.append(DomainError(f"omega must be positive, got {omega}", field="omega"))
    if bad(eb, True):
        problems.append(DomainError(f"eb must be positive, got {eb}", field="eb"))
    if up is not None and bad(up, False):
        problems.append(DomainError(f"up must be non-negative, got {up}", field="up"))
    if e0 is not None and bad(e0, False):
        problems.append(DomainError(f"e0 must be non-negative, got {e0}", field="e0"))
    return problems


def derive_params(laser: LaserInput, eb: float) -> FieldParams:
    """Derive all intensity parameters from a laser input and a binding energy.

    Raises
    ------
    DomainError
        If ``omega`` or ``eb`` is not positive, or the drive is negative.
    """
    problems = check_inputs(laser.omega, eb, laser.up, laser.e0)
    if problems:
        raise problems[0]
    omega = float(laser.omega)
    eb = float(eb)
    if laser.up is not None:
        up = float(laser.up)
        e0 = _field_from_up(up, omega, laser.polarization)
    else:
        e0 = float(laser.e0)
        up = _up_from_field(e0, omega, laser.polarization)

    z = up / omega
    z1 = 2.0 * up / eb
    gamma_k = 1.0 / math.sqrt(z1) if z1 > 0 else math.inf
    return FieldParams(
        omega=omega,
        up=up,
        e0=e0,
        z=z,
        z1=z1,
        gamma_k=gamma_k,
        alpha0_c=math.sqrt(2.0 * z / omega),
        alpha0_l=2.0 * math.sqrt(z / omega),
        beta0=z / (2.0 * C_AU),
        z_f=2.0 * up / C_AU**2,
        eb=eb,
        polarization=laser.polarization,
    )


@dataclass(frozen=True)
class ConditionReport:
    z1: float
    eb_over_omega: float
    two_z_over_z1: float
    gamma_k: float
    strong_field: bool
    many_photon: bool
    identity_residual: float
    threshold: float

    @property
    def tunneling_regime(self):
        return self.strong_field and self.many_photon


def tunneling_conditions(fp: FieldParams, threshold: float = 10.0) -> ConditionReport:
    """Evaluate the two conditions usually quoted for the tunneling regime.

    ``strong_field`` is ``z1 >= threshold`` and ``many_photon`` is
    ``E_B / omega >= threshold``.  The second condition is equivalently
    ``2 z / z1 >= threshold``; the residual of that identity is reported.
    """
    eb_over_omega = fp.eb / fp.omega
    if fp.z1 > 0:
        two_z_over_z1 = 2.0 * fp.z / fp.z1
    else:
        # U_p = 0: the ratio is 0/0, take its value in the limit U_p -> 0
        two_z_over_z1 = eb_over_omega
    return ConditionReport(
        z1=fp.z1,
        eb_over_omega=eb_over_omega,
        two_z_over_z1=two_z_over_z1,
        gamma_k=fp.gamma_k,
        strong_field=fp.z1 >= threshold,
        many_photon=eb_over_omega >= threshold,
        identity_residual=abs(two_z_over_z1 - eb_over_omega),
        threshold=threshold,
    )


@dataclass(frozen=True)
class RegimeCell:
    omega: float
    intensity_au: float
    intensity_wcm2: float
    beta0: float
    z_f: float
    gamma_k: float
    label: str


def _boundary_values(omega, intensity, eb):
    up = up_from_intensity(intensity, omega)
    beta0 = up / (2.0 * C_AU * omega)
    z_f = 2.0 * up / C_AU**2
    with np.errstate(divide="ignore"):
        gamma_k = np.sqrt(eb / (2.0 * np.asarray(up, dtype=float)))
    return beta0, z_f, gamma_k


def _label(omega, beta0, z_f, eb):
    if z_f >= 1.0:
        return "relativistic"
    if beta0 >= 1.0:
        return "magnetic"
    if omega >= eb:
        return "high-frequency"
    return "oasis"


def classify_regime(omega: float, intensity: float, eb: float) -> RegimeCell:
    """Classify one point of the (omega, intensity) plane.

    ``intensity`` is in atomic units.  The relativistic label wins over
    magnetic, which wins over high-frequency.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}", field="omega")
    if not intensity >= 0:
        raise DomainError(f"intensity must be non-negative, got {intensity}", field="intensity")
    beta0, z_f, gamma_k = _boundary_values(omega, intensity, eb)
    return RegimeCell(
        omega=float(omega),
        intensity_au=float(intensity),
        intensity_wcm2=au_to_wcm2(float(intensity)),
        beta0=float(beta0),
        z_f=float(z_f),
        gamma_k=float(gamma_k),
        label=_label(omega, beta0, z_f, eb),
    )


@dataclass
class Polyline:
    name: str
    omega: np.ndarray
    intensity_au: np.ndarray
    kind: str = "curve"

    @property
    def up(self):
        return up_from_intensity(self.intensity_au, self.omega)

    @property
    def intensity_wcm2(self):
        return au_to_wcm2(self.intensity_au)

    def as_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "omega_au": self.omega.tolist(),
            "intensity_au": self.intensity_au.tolist(),
            "intensity_wcm2": self.intensity_wcm2.tolist(),
            "up_au": self.up.tolist(),
        }


@dataclass
class RegimeMap:
    """Classified (omega, intensity) grid plus analytic boundary curves.

    Arrays indexed ``[i_omega, i_intensity]``.
    """

    omega: np.ndarray
    intensity_au: np.ndarray
    eb: float
    beta0: np.ndarray
    z_f: np.ndarray
    gamma_k: np.ndarray
    labels: np.ndarray
    polylines: dict = field(default_factory=dict)

    @property
    def intensity_wcm2(self):
        return au_to_wcm2(self.intensity_au)

    def cells(self):
        for i, om in enumerate(self.omega):
            for j, inten in enumerate(self.intensity_au):
                yield RegimeCell(
                    omega=float(om),
                    intensity_au=float(inten),
                    intensity_wcm2=au_to_wcm2(float(inten)),
                    beta0=float(self.beta0[i, j]),
                    z_f=float(self.z_f[i, j]),
                    gamma_k=float(self.gamma_k[i, j]),
                    label=str(self.labels[i, j]),
                )

    def vertex_labels(self, name):
        """Regime label at each vertex of a named polyline."""
        line = self.polylines[name]
        return [classify_regime(om, i, self.eb).label for om, i in zip(line.omega, line.intensity_au)]


def _log_axis(lo, hi, n, name):
    if not (lo > 0 and hi > 0 and math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"{name} range must be positive and finite, got ({lo}, {hi})", field=name)
    if not hi > lo:
        raise DomainError(f"{name} range is empty: ({lo}, {hi})", field=name)
    if n < 2:
        raise DomainError(f"{name} grid needs at least 2 points, got {n}", field=name)
    return np.geomspace(lo, hi, n)


def regime_map(
    omega_range,
    intensity_range,
    shape=(64, 64),
    eb: float = 0.5,
    gamma_k_values=(1.0, 0.3, 0.1, 0.01),
) -> RegimeMap:
    """Classify a log-spaced (omega, intensity) grid.

    ``intensity_range`` is in atomic units.  Boundary curves are analytic
    and sampled on the grid's omega axis:

    * ``beta0=1``:  U_p = 2 c omega
    * ``z_f=1``:    U_p = c**2 / 2
    * ``gamma_K=g``: U_p = E_B / (2 g**2)
    * ``omega=E_B``: vertical segment spanning the intensity range, only if
      E_B lies inside the omega range.
    """
    if not eb > 0:
        raise DomainError(f"eb must be positive, got {eb}", field="eb")
    omega = _log_axis(*omega_range, shape[0], "omega")
    intensity = _log_axis(*intensity_range, shape[1], "intensity")
    om2, in2 = np.meshgrid(omega, intensity, indexing="ij")
    beta0, z_f, gamma_k = _boundary_values(om2, in2, eb)
    labels = np.empty(om2.shape, dtype=object)
    for idx in np.ndindex(om2.shape):
        labels[idx] = _label(om2[idx], beta0[idx], z_f[idx], eb)

    lines = {}
    lines["beta0=1"] = Polyline("beta0=1", omega.copy(), intensity_from_up(2.0 * C_AU * omega, omega))
    lines["z_f=1"] = Polyline("z_f=1", omega.copy(), intensity_from_up(0.5 * C_AU**2, omega))
    for g in gamma_k_values:
        if not g > 0:
            raise DomainError(f"gamma_K values must be positive, got {g}", field="gamma_k")
        name = f"gamma_K={g:g}"
        lines[name] = Polyline(name, omega.copy(), intensity_from_up(eb / (2.0 * g * g), omega))
    if omega[0] <= eb <= omega[-1]:
        lines["omega=E_B"] = Polyline(
            "omega=E_B", np.array([eb, eb]), np.array([intensity[0], intensity[-1]]), kind="vertical"
        )
    return RegimeMap(omega, intensity, eb, beta0, z_f, gamma_k, labels, lines)
