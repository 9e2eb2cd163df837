"""Run configuration: JSON schema, defaults and aggregated validation.

A configuration is a JSON object; every section other than ``task`` is
optional and falls back to the defaults below.  Validation never stops at
the first problem: :func:`parse_config` raises :class:`ConfigError` holding
every issue found.
"""

from __future__ import annotations

import copy
import difflib
import json
import math
import re
from dataclasses import dataclass, field

import jsonschema

from .bessel import MAX_ARG, MAX_ORDER
from .bound_states import KINDS, PRINCIPAL_N, BoundStateModel, effective_charge_for
from .errors import DomainError
from .params import POLARIZATIONS, FieldParams, LaserInput, check_inputs, derive_params
from .rates import AXES, QuadSpec

TASKS = ("params", "regime-map", "rate", "spectrum", "momentum-map", "bessel", "fit")
FORMATS = ("csv", "json")
NEEDS_DRIVE = ("params", "rate", "spectrum", "momentum-map")
TASK_SECTIONS = {
    "params": ("laser", "atom", "tolerances"),
    "regime-map": ("atom", "regime"),
    "rate": ("laser", "atom", "tolerances", "angles"),
    "spectrum": ("laser", "atom", "tolerances"),
    "momentum-map": ("laser", "atom", "momentum"),
    "bessel": ("bessel",),
    "fit": ("laser", "atom", "tolerances", "fit"),
}

_num = {"type": "number"}
_int = {"type": "integer"}
_pair = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}


def _obj(props, **extra):
    return {"type": "object", "additionalProperties": False, "properties": props, **extra}


SCHEMA = _obj(
    {
        "task": {"enum": list(TASKS), "description": "what to compute"},
        "laser": _obj(
            {
                "omega": {**_num, "description": "photon energy (a.u.)"},
                "up": {**_num, "description": "ponderomotive energy (a.u.)"},
                "e0": {**_num, "description": "peak field amplitude (a.u.)"},
                "intensity": {
                    "type": "string",
                    "description": "cycle-averaged intensity with unit suffix, e.g. '8e14 W/cm2' or '0.02 au'",
                },
                "polarization": {"enum": list(POLARIZATIONS)},
                "axis": {"enum": list(AXES), "description": "reference axis of the linear-polarization angle"},
            }
        ),
        "atom": _obj(
            {
                "kind": {"enum": list(KINDS)},
                "eb": {**_num, "description": "binding energy (a.u.)"},
                "z_eff": {**_num, "description": "effective charge; default matches eb"},
                "principal_n": {**_int, "description": "must agree with kind when given"},
            }
        ),
        "tolerances": _obj(
            {
                "tail_eps": {**_num, "description": "relative size below which channel tails are dropped"},
                "threshold": {**_num, "description": "'much greater than' threshold of the regime conditions"},
                "rtol": {**_num, "description": "angular quadrature convergence tolerance"},
                "quad_order": {**_int, "description": "starting Gauss-Legendre order"},
                "max_quad_order": _int,
                "n_phi": {**_int, "description": "starting azimuthal point count"},
            }
        ),
        "regime": _obj(
            {
                "omega": {**_pair, "description": "[min, max] photon energy (a.u.)"},
                "intensity_wcm2": {**_pair, "description": "[min, max] intensity (W/cm2)"},
                "shape": {"type": "array", "items": _int, "minItems": 2, "maxItems": 2},
                "gamma_k": {"type": "array", "items": _num},
            }
        ),
        "angles": _obj(
            {
                "theta": {"type": "array", "items": _num, "description": "polar angles (rad)"},
                "n_theta": {**_int, "description": "uniform theta grid on [0, pi] when theta is absent"},
                "phi": {"type": ["array", "null"], "items": _num, "description": "azimuths (rad)"},
                "bessel": {"enum": ["exact", "asymptotic"]},
            }
        ),
        "momentum": _obj(
            {
                "p_par_max": _num,
                "p_perp_max": _num,
                "n_par": _int,
                "n_perp": _int,
                "kernel_width": {"type": ["number", "null"], "description": "energy width (a.u.); default omega/2"},
            }
        ),
        "bessel": _obj(
            {
                "n": _int,
                "x": _num,
                "v": {"type": ["number", "null"], "description": "second argument of the generalized function"},
                "method": {"enum": ["recurrence", "quadrature", "asymptotic", "both"]},
            }
        ),
        "fit": _obj(
            {
                "samples": {"type": "array", "items": _pair, "description": "[E, W] pairs"},
                "weights": {"type": "array", "items": _num},
                "gamma_k": _pair,
                "beta0_max": _num,
                "quantity": {"enum": ["lowest_channel", "total"]},
                "excess_fraction": _num,
            }
        ),
        "output": _obj(
            {
                "path": {"type": ["string", "null"], "description": "output file; stdout when null"},
                "format": {"enum": list(FORMATS)},
            }
        ),
    },
    required=["task"],
)

DEFAULTS = {
    "laser": {"polarization": "linear", "axis": "polarization"},
    "atom": {"kind": "hydrogenic_1s", "eb": 0.5},
    "tolerances": {"tail_eps": 1e-8, "threshold": 10.0, "rtol": 1e-9, "quad_order": 48, "max_quad_order": 2048, "n_phi": 64},
    "regime": {"omega": [1e-3, 2.0], "intensity_wcm2": [1e10, 1e20], "shape": [64, 64], "gamma_k": [1.0, 0.3, 0.1, 0.01]},
    "angles": {"n_theta": 181, "phi": None, "bessel": "exact"},
    "momentum": {"n_par": 201, "n_perp": 201, "kernel_width": None},
    "bessel": {"v": None, "method": "recurrence"},
    "fit": {"gamma_k": [0.2, 0.5], "beta0_max": 0.1, "quantity": "lowest_channel", "excess_fraction": 0.5},
    "output": {"path": None},
}

CSV_COLUMNS = {
    "params": {"key": "parameter name", "value": "parameter value (a.u. unless the name says otherwise)"},
    "regime-map": {
        "omega_au": "photon energy (a.u.)",
        "intensity_wcm2": "cycle-averaged intensity (W/cm2)",
        "beta0": "magnetic drift parameter z/(2c)",
        "z_f": "relativistic parameter 2 U_p / c^2",
        "gamma_K": "Keldysh parameter",
        "label": "one of oasis, magnetic, relativistic, high-frequency",
    },
    "rate": {
        "theta": "polar angle (rad) from the reference axis",
        "phi": "azimuth (rad); 0 when the rate does not depend on it",
        "dW_dOmega": "differential rate (a.u. per steradian)",
    },
    "spectrum": {
        "n": "number of absorbed photons",
        "p": "photoelectron momentum (a.u.)",
        "energy": "photoelectron kinetic energy (a.u.)",
        "rate": "angle-integrated partial rate W_n (a.u.)",
    },
    "momentum-map": {
        "p_par": "momentum along the reference axis (a.u.)",
        "p_perp": "transverse momentum (a.u.)",
        "value": "ring-smoothed rate density",
    },
    "bessel": {
        "n": "order",
        "x": "first argument",
        "v": "second argument (empty for the ordinary function)",
        "method": "evaluation route",
        "value": "function value",
        "est_error": "estimated absolute error",
        "rel_dev": "relative deviation from the direct (recurrence) value",
    },
    "fit": {
        "E": "field amplitude (a.u.)",
        "W": "rate (a.u.)",
        "n0": "lowest open channel (sweeps only)",
        "gamma_K": "Keldysh parameter (sweeps only)",
        "beta0": "magnetic drift parameter (sweeps only)",
    },
}

_INTENSITY = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(W/cm2|W/cm\^2|W cm-2|au|a\.u\.)\s*$"
)
_UNITS = {"W/cm2": "W/cm2", "W/cm^2": "W/cm2", "W cm-2": "W/cm2", "au": "au", "a.u.": "au"}


@dataclass(frozen=True)
class Issue:
    path: str
    message: str

    def __str__(self):
        return f"{self.path or '<root>'}: {self.message}"


class ConfigError(DomainError):
    """All validation failures of one configuration."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "\n".join(f"  {i}" for i in self.issues)
        super().__init__(f"{len(self.issues)} configuration error(s):\n{lines}", field=self.issues[0].path)


def parse_intensity(text):
    """``'8e14 W/cm2'`` -> ``(8e14, 'W/cm2')``.  A unit suffix is mandatory."""
    m = _INTENSITY.match(text)
    if not m:
        raise DomainError(
            f"cannot read intensity {text!r}; give a number followed by 'W/cm2' or 'au'", field="intensity"
        )
    return float(m.group(1)), _UNITS[m.group(2)]


@dataclass
class RunConfig:
    task: str
    document: dict
    laser: LaserInput | None = None
    atom: BoundStateModel | None = None
    quad: QuadSpec = field(default_factory=QuadSpec)

    def section(self, name):
        return self.document.get(name, {})

    @property
    def field_params(self) -> FieldParams | None:
        if self.laser is None or self.laser.up is None and self.laser.e0 is None:
            return None
        return derive_params(self.laser, self.atom.eb)

    @property
    def tail_eps(self):
        return self.section("tolerances").get("tail_eps", DEFAULTS["tolerances"]["tail_eps"])

    @property
    def threshold(self):
        return self.section("tolerances").get("threshold", DEFAULTS["tolerances"]["threshold"])

    @property
    def output_path(self):
        return self.document["output"]["path"]

    @property
    def output_format(self):
        return self.document["output"]["format"]

    def hashed(self):
        """The resolved document minus the output path, the input of the config hash."""
        doc = copy.deepcopy(self.document)
        doc["output"].pop("path", None)
        return doc


def _all_keys(schema, prefix=""):
    out = []
    for k, sub in schema.get("properties", {}).items():
        out.append((k, prefix + k))
        if sub.get("type") == "object":
            out.extend(_all_keys(sub, prefix + k + "."))
    return out


def _closure(doc, schema, prefix, issues):
    """Reject unknown keys, suggesting the closest known name."""
    if not isinstance(doc, dict):
        return
    props = schema.get("properties", {})
    everywhere = _all_keys(SCHEMA)
    for key in doc:
        if key in props:
            sub = props[key]
            if sub.get("type") == "object":
                _closure(doc[key], sub, prefix + key + ".", issues)
            continue
        near = difflib.get_close_matches(key, list(props), n=1, cutoff=0.5)
        if near:
            guess = prefix + near[0]
        else:
            short = difflib.get_close_matches(key, [s for s, _ in everywhere], n=1, cutoff=0.5)
            guess = next((full for s, full in everywhere if short and s == short[0]), None)
        if guess is None:
            hint = f"known keys here: {sorted(props)}"
        else:
            hint = f"did you mean {guess!r}?"
            if guess.endswith("omega"):
                hint += " (photon energy in atomic units)"
        issues.append(Issue(prefix + key, f"unknown key; {hint}"))


def _schema_issues(doc):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    issues = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        if err.validator == "additionalProperties":
            continue
        path = ".".join(str(p) for p in err.absolute_path)
        issues.append(Issue(path, err.message))
    return issues


def _with_defaults(doc):
    """Fill defaults; sections the task does not read are dropped from the result."""
    out = {"task": doc.get("task")}
    for name, defaults in DEFAULTS.items():
        if name != "output" and name not in TASK_SECTIONS[doc["task"]]:
            continue
        merged = dict(defaults)
        merged.update(doc.get(name) or {})
        out[name] = merged
    out["output"].setdefault("format", "json" if doc.get("task") == "params" else "csv")
    if doc.get("task") == "regime-map" and out["output"]["format"] == "csv" and out["output"]["path"] is None:
        out["output"]["path"] = "regime_map.csv"
    return out


def _check_positive(section, keys, prefix, issues, allow_zero=False):
    for k in keys:
        v = section.get(k)
        if v is None:
            continue
        ok = v >= 0 if allow_zero else v > 0
        if not (ok and math.isfinite(v)):
            word = "non-negative" if allow_zero else "positive"
            issues.append(Issue(f"{prefix}.{k}", f"must be {word}, got {v}"))


def _validate_laser(doc, issues):
    task = doc["task"]
    laser = doc.get("laser")
    if laser is None or task not in NEEDS_DRIVE and not (task == "fit" and "samples" not in doc["fit"]):
        return None
    if "omega" not in laser:
        issues.append(Issue("laser.omega", "required for this task"))
        return None
    drives = [k for k in ("up", "e0", "intensity") if k in laser]
    if task == "fit":
        if drives:
            issues.append(Issue("laser", "a fit sweep sets the intensity itself; remove " + ", ".join(drives)))
        for p in check_inputs(laser["omega"], 1.0):
            issues.append(Issue("laser.omega", str(p)))
        return None
    if len(drives) != 1:
        issues.append(Issue("laser", f"give exactly one of up, e0, intensity (got {drives or 'none'})"))
        return None
    up = laser.get("up")
    e0 = laser.get("e0")
    if "intensity" in laser:
        try:
            value, unit = parse_intensity(laser["intensity"])
        except DomainError as exc:
            issues.append(Issue("laser.intensity", str(exc)))
            return None
        if not (value >= 0 and math.isfinite(value)):
            issues.append(Issue("laser.intensity", f"must be non-negative, got {value}"))
            return None
        if laser["omega"] > 0:
            up = LaserInput.from_intensity(laser["omega"], value, laser["polarization"], unit=unit).up
    # eb is checked with the atom section
    problems = [p for p in check_inputs(laser["omega"], doc["atom"]["eb"], up, e0) if p.field != "eb"]
    for p in problems:
        issues.append(Issue(f"laser.{p.field}", str(p)))
    if problems or not doc["atom"]["eb"] > 0:
        return None
    return LaserInput(laser["omega"], up=up, e0=e0, polarization=laser["polarization"])


def _validate_atom(doc, issues):
    atom = doc.get("atom")
    if atom is None:
        return None
    eb = atom["eb"]
    if not (eb > 0 and math.isfinite(eb)):
        issues.append(Issue("atom.eb", f"eb must be positive, got {eb}"))
        return None
    kind = atom["kind"]
    n = PRINCIPAL_N[kind]
    if atom.get("principal_n") is not None and atom["principal_n"] != n:
        issues.append(Issue("atom.principal_n", f"{kind} has principal_n {n}, got {atom['principal_n']}"))
    z_eff = atom.get("z_eff")
    if z_eff is None:
        z_eff = effective_charge_for(eb, n)
    elif not z_eff > 0:
        issues.append(Issue("atom.z_eff", f"must be positive, got {z_eff}"))
        return None
    return BoundStateModel(kind, float(z_eff), float(eb))


def _validate_task(doc, issues):
    task = doc["task"]
    tol = doc.get("tolerances", {})
    _check_positive(tol, ("tail_eps", "threshold", "rtol", "quad_order", "max_quad_order", "n_phi"), "tolerances", issues)
    if task == "regime-map":
        reg = doc["regime"]
        for k in ("omega", "intensity_wcm2"):
            lo, hi = reg[k]
            if not (0 < lo < hi and math.isfinite(hi)):
                issues.append(Issue(f"regime.{k}", f"need 0 < min < max, got [{lo}, {hi}]"))
        if min(reg["shape"]) < 2:
            issues.append(Issue("regime.shape", "each axis needs at least 2 points"))
        if any(not g > 0 for g in reg["gamma_k"]):
            issues.append(Issue("regime.gamma_k", "values must be positive"))
    elif task == "rate":
        ang = doc["angles"]
        thetas = ang.get("theta")
        if thetas is None:
            if ang["n_theta"] < 2:
                issues.append(Issue("angles.n_theta", "need at least 2 points"))
        elif any(not 0 <= t <= math.pi for t in thetas):
            issues.append(Issue("angles.theta", "angles must lie in [0, pi]"))
        if doc["laser"].get("axis") == "propagation" and doc["laser"].get("polarization") == "linear" and not ang["phi"]:
            issues.append(Issue("angles.phi", "required when theta is measured from the propagation axis"))
    elif task == "momentum-map":
        mom = doc["momentum"]
        _check_positive(mom, ("p_par_max", "p_perp_max"), "momentum", issues)
        _check_positive(mom, ("kernel_width",), "momentum", issues, allow_zero=True)
        for k in ("n_par", "n_perp"):
            if mom[k] < 3:
                issues.append(Issue(f"momentum.{k}", "need at least 3 points"))
        for k in ("p_par_max", "p_perp_max"):
            if k not in mom:
                issues.append(Issue(f"momentum.{k}", "required"))
    elif task == "bessel":
        b = doc["bessel"]
        for k in ("n", "x"):
            if k not in b:
                issues.append(Issue(f"bessel.{k}", "required"))
        if "n" in b and abs(b["n"]) > MAX_ORDER:
            issues.append(Issue("bessel.n", f"|n| must not exceed {MAX_ORDER}"))
        if "x" in b and not (math.isfinite(b["x"]) and abs(b["x"]) <= MAX_ARG):
            issues.append(Issue("bessel.x", f"|x| must not exceed {MAX_ARG:g}"))
        if b["v"] is not None and b["method"] in ("asymptotic", "both"):
            issues.append(Issue("bessel.method", "the asymptotic form exists only for the ordinary function (v = null)"))
    elif task == "fit":
        f = doc["fit"]
        if "samples" in f:
            if len(f["samples"]) < 3:
                issues.append(Issue("fit.samples", "need at least three samples"))
            elif any(not (e > 0 and w > 0) for e, w in f["samples"]):
                issues.append(Issue("fit.samples", "every E and W must be positive"))
            if "weights" in f and len(f["weights"]) != len(f["samples"]):
                issues.append(Issue("fit.weights", "need one weight per sample"))
        else:
            lo, hi = f["gamma_k"]
            if not 0 < lo < hi:
                issues.append(Issue("fit.gamma_k", f"need 0 < min < max, got [{lo}, {hi}]"))
            if not 0 < f["excess_fraction"] < 1:
                issues.append(Issue("fit.excess_fraction", "must lie in (0, 1)"))
            _check_positive(f, ("beta0_max",), "fit", issues)


def validate(doc) -> RunConfig:
    """Validate a decoded configuration object, collecting every issue."""
    if not isinstance(doc, dict):
        raise ConfigError([Issue("", "configuration must be a JSON object")])
    issues = []
    _closure(doc, SCHEMA, "", issues)
    issues.extend(_schema_issues(doc))
    if issues:
        raise ConfigError(issues)
    resolved = _with_defaults(doc)
    atom = _validate_atom(resolved, issues)
    laser = _validate_laser(resolved, issues)
    _validate_task(resolved, issues)
    if issues:
        raise ConfigError(issues)
    tol = {**DEFAULTS["tolerances"], **resolved.get("tolerances", {})}
    quad = QuadSpec(tol["quad_order"], tol["max_quad_order"], tol["rtol"], tol["n_phi"])
    if resolved["task"] == "momentum-map" and resolved["momentum"]["kernel_width"] is None:
        resolved["momentum"]["kernel_width"] = 0.5 * laser.omega
    return RunConfig(resolved["task"], resolved, laser, atom, quad)


def parse_config(text: str) -> RunConfig:
    """Parse and validate JSON configuration text.

    Raises
    ------
    ConfigError
        Malformed JSON (with line and column) or any number of validation
        failures, all reported together.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([Issue("", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")]) from None
    return validate(doc)


def schema_document():
    return {"config_schema": SCHEMA, "defaults": DEFAULTS, "csv_columns": CSV_COLUMNS}
