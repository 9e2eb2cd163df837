"""Batch command line: ``sfarates <task> [--config FILE] [flags]``.

Settings are resolved in three layers, later ones winning: built-in
defaults, the JSON configuration file, command-line flags.  Results go to
``--output`` (or standard output) as CSV with ``#`` metadata lines or as a
JSON document with ``meta`` and ``data`` members.

Exit status: 0 on success, 1 for invalid input, 2 when a numerical
accuracy target could not be met (diagnostics on standard error).

``SFARATES_THREADS`` sets the worker count for tasks that evaluate
independent points (default 1).  Results do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .bessel import evaluate, gen_bessel_j
from .bound_states import KINDS
from .config import (
    FORMATS,
    TASKS,
    ConfigError,
    Issue,
    RunConfig,
    parse_intensity,
    schema_document,
    validate,
)
from .constants import au_to_wcm2, wcm2_to_au
from .errors import AccuracyError, DomainError, FitError, InvariantViolation, RangeError
from .io import csv_text, json_text, metadata
from .momentum import MomentumGrid, momentum_map
from .params import POLARIZATIONS, regime_map, tunneling_conditions
from .quadrature import gen_bessel_j_quad
from .rates import AXES, channel_momentum, dW_dOmega_circular, dW_dOmega_linear, spectrum
from .tunneling import exponent_sweep, tunneling_exponent_fit

THREADS_ENV = "SFARATES_THREADS"


def thread_count():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}", field=THREADS_ENV) from None
    if n < 1:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}", field=THREADS_ENV)
    return n


# -- flags ---------------------------------------------------------------------


def parse_range(text):
    """``'1e10..1e20'`` or ``'1e10..1e20 W/cm2'`` -> ``(lo, hi, unit or None)``."""
    body, _, unit = text.strip().partition(" ")
    lo, sep, hi = body.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    try:
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers in {text!r}") from None
    unit = unit.strip() or None
    if unit is not None:
        try:
            parse_intensity(f"1 {unit}")
        except DomainError:
            raise argparse.ArgumentTypeError(f"unknown unit {unit!r}; use W/cm2 or au") from None
    return lo, hi, unit


def _add_common(p, laser=True):
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("-o", "--output", help="output file (default: standard output)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--eb", type=float, help="binding energy (a.u.)")
    p.add_argument("--kind", choices=KINDS, help="bound-state model")
    p.add_argument("--z-eff", type=float, help="effective charge of the bound state")
    p.add_argument("--tail-eps", type=float)
    p.add_argument("--threshold", type=float)
    p.add_argument("--rtol", type=float)
    if laser:
        p.add_argument("--omega", type=float, help="photon energy (a.u.)")
        p.add_argument("--up", type=float, help="ponderomotive energy (a.u.)")
        p.add_argument("--e0", type=float, help="peak field (a.u.)")
        p.add_argument("--intensity", help="intensity with unit suffix: '8e14 W/cm2' or '0.02 au'")
        p.add_argument("--polarization", choices=POLARIZATIONS)
        p.add_argument("--axis", choices=AXES)


# flag name -> (section, key)
_OVERRIDES = {
    "output": ("output", "path"),
    "format": ("output", "format"),
    "eb": ("atom", "eb"),
    "kind": ("atom", "kind"),
    "z_eff": ("atom", "z_eff"),
    "tail_eps": ("tolerances", "tail_eps"),
    "threshold": ("tolerances", "threshold"),
    "rtol": ("tolerances", "rtol"),
    "omega": ("laser", "omega"),
    "up": ("laser", "up"),
    "e0": ("laser", "e0"),
    "intensity": ("laser", "intensity"),
    "polarization": ("laser", "polarization"),
    "axis": ("laser", "axis"),
    "theta": ("angles", "theta"),
    "n_theta": ("angles", "n_theta"),
    "phi": ("angles", "phi"),
    "bessel_form": ("angles", "bessel"),
    "p_par_max": ("momentum", "p_par_max"),
    "p_perp_max": ("momentum", "p_perp_max"),
    "n_par": ("momentum", "n_par"),
    "n_perp": ("momentum", "n_perp"),
    "kernel_width": ("momentum", "kernel_width"),
    "n": ("bessel", "n"),
    "x": ("bessel", "x"),
    "v": ("bessel", "v"),
    "method": ("bessel", "method"),
    "gamma_k": ("regime", "gamma_k"),
    "shape": ("regime", "shape"),
    "sweep_gamma_k": ("fit", "gamma_k"),
    "beta0_max": ("fit", "beta0_max"),
    "quantity": ("fit", "quantity"),
    "excess_fraction": ("fit", "excess_fraction"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="sfarates", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--schema", action="store_true", help="print the configuration schema and CSV columns")
    sub = parser.add_subparsers(dest="task", metavar="TASK")

    p = sub.add_parser("params", help="derived intensity parameters and regime conditions")
    _add_common(p)

    p = sub.add_parser("regime-map", help="classified (omega, intensity) grid and boundary curves")
    _add_common(p, laser=False)
    p.add_argument("--omega", type=parse_range, dest="omega_range", help="LO..HI photon energy (a.u.)")
    p.add_argument(
        "--intensity", type=parse_range, dest="intensity_range",
        help="LO..HI intensity; W/cm2 unless followed by ' au'",
    )
    p.add_argument("--shape", type=int, nargs=2, metavar=("N_OMEGA", "N_INTENSITY"))
    p.add_argument("--gamma-k", type=float, nargs="+", help="Keldysh parameters of the constant-gamma curves")

    p = sub.add_parser("rate", help="differential rate over angles")
    _add_common(p)
    p.add_argument("--theta", type=float, nargs="+", help="polar angles (rad)")
    p.add_argument("--n-theta", type=int)
    p.add_argument("--phi", type=float, nargs="+", help="azimuths (rad)")
    p.add_argument("--bessel-form", choices=("exact", "asymptotic"))

    p = sub.add_parser("spectrum", help="angle-integrated partial rate per channel")
    _add_common(p)

    p = sub.add_parser("momentum-map", help="ring-smoothed momentum distribution")
    _add_common(p)
    p.add_argument("--p-par-max", type=float)
    p.add_argument("--p-perp-max", type=float)
    p.add_argument("--n-par", type=int)
    p.add_argument("--n-perp", type=int)
    p.add_argument("--kernel-width", type=float, help="energy width (a.u.); default omega/2, 0 for exact rings")

    p = sub.add_parser("bessel", help="spot evaluation of J_n(x) or J_n(x, v)")
    _add_common(p, laser=False)
    p.add_argument("--n", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--v", type=float, help="second argument of the generalized function")
    p.add_argument("--method", choices=("recurrence", "quadrature", "asymptotic", "both"))

    p = sub.add_parser("fit", help="tunneling-exponent fit of a rate sweep or of given samples")
    _add_common(p)
    p.add_argument("--gamma-k", type=float, nargs=2, dest="sweep_gamma_k", metavar=("LO", "HI"))
    p.add_argument("--beta0-max", type=float)
    p.add_argument("--quantity", choices=("lowest_channel", "total"))
    p.add_argument("--excess-fraction", type=float)
    return parser


def _merge(args):
    doc = {}
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError([Issue("", f"cannot read {args.config}: {exc.strerror}")]) from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                [Issue("", f"{args.config}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")]
            ) from None
        if not isinstance(doc, dict):
            raise ConfigError([Issue("", "configuration must be a JSON object")])
    doc["task"] = args.task
    values = vars(args)
    for flag, (section, key) in _OVERRIDES.items():
        if values.get(flag) is not None:
            doc.setdefault(section, {})[key] = values[flag]
    if values.get("omega_range") is not None:
        lo, hi, _ = values["omega_range"]
        doc.setdefault("regime", {})["omega"] = [lo, hi]
    if values.get("intensity_range") is not None:
        lo, hi, unit = values["intensity_range"]
        if unit == "au":
            lo, hi = au_to_wcm2(lo), au_to_wcm2(hi)
        doc.setdefault("regime", {})["intensity_wcm2"] = [lo, hi]
    return doc


# -- tasks -----------------------------------------------------------------------


def _task_params(cfg):
    fp = cfg.field_params
    report = tunneling_conditions(fp, cfg.threshold)
    cond = asdict(report)
    cond["tunneling_regime"] = report.tunneling_regime
    data = {**fp.as_dict(), "eb_over_omega": fp.eb_over_omega, "conditions": cond}
    rows = [(k, v) for k, v in fp.as_dict().items()]
    rows += [("eb_over_omega", fp.eb_over_omega)]
    rows += [(f"conditions.{k}", v) for k, v in cond.items()]
    return fp, ["key", "value"], rows, data, {}


def _task_regime(cfg):
    reg = cfg.section("regime")
    lo, hi = reg["intensity_wcm2"]
    rmap = regime_map(
        reg["omega"], (wcm2_to_au(lo), wcm2_to_au(hi)), tuple(reg["shape"]), cfg.atom.eb, tuple(reg["gamma_k"])
    )
    rows = [(c.omega, c.intensity_wcm2, c.beta0, c.z_f, c.gamma_k, c.label) for c in rmap.cells()]
    cols = ["omega_au", "intensity_wcm2", "beta0", "z_f", "gamma_K", "label"]
    lines = [line.as_dict() for line in rmap.polylines.values()]
    data = {"grid": {"columns": cols, "rows": rows}, "polylines": lines}
    return None, cols, rows, data, {"polylines": lines}


def _task_rate(cfg):
    fp = cfg.field_params
    ang = cfg.section("angles")
    theta = ang.get("theta")
    theta = np.linspace(0.0, math.pi, ang["n_theta"]) if theta is None else np.asarray(theta, dtype=float)
    phi = None if not ang["phi"] else np.asarray(ang["phi"], dtype=float)
    th, ph = (theta, None) if phi is None else np.meshgrid(theta, phi, indexing="ij")
    if fp.polarization == "circular":
        vals = dW_dOmega_circular(fp, cfg.atom, th, cfg.tail_eps, phi=ph, bessel=ang["bessel"])
    else:
        vals = dW_dOmega_linear(fp, cfg.atom, th, cfg.tail_eps, phi=ph, axis=cfg.section("laser")["axis"])
    vals = np.asarray(vals)
    ph = np.zeros_like(th) if ph is None else ph
    rows = list(zip(np.ravel(th).tolist(), np.ravel(ph).tolist(), np.ravel(vals).tolist()))
    data = {"theta": np.ravel(th), "phi": np.ravel(ph), "dW_dOmega": np.ravel(vals)}
    return fp, ["theta", "phi", "dW_dOmega"], rows, data, {}


def _task_spectrum(cfg):
    fp = cfg.field_params
    spec = spectrum(fp, cfg.atom, fp.polarization, cfg.quad, cfg.tail_eps, axis=cfg.section("laser")["axis"])
    p = [channel_momentum(fp, int(n)) for n in spec.orders]
    rows = [(int(n), pn, 0.5 * pn * pn, float(w)) for n, pn, w in zip(spec.orders, p, spec.rates)]
    extra = {"total_rate": spec.total, "peak_order": spec.peak_order, "quad_order": spec.quad_order}
    data = {"n": spec.orders, "p": p, "energy": [r[2] for r in rows], "rate": spec.rates, **extra}
    return fp, ["n", "p", "energy", "rate"], rows, data, extra


def _task_momentum(cfg):
    fp = cfg.field_params
    mom = cfg.section("momentum")
    grid = MomentumGrid(mom["p_par_max"], mom["p_perp_max"], mom["n_par"], mom["n_perp"])
    rg = momentum_map(fp, cfg.atom, fp.polarization, grid, mom["kernel_width"])
    rows = [
        (float(pq), float(pp), float(rg.values[i, j]))
        for i, pp in enumerate(rg.p_perp)
        for j, pq in enumerate(rg.p_par)
    ]
    data = {"p_par": rg.p_par, "p_perp": rg.p_perp, "values": rg.values, "layout": "values[i_perp][j_par]"}
    return fp, ["p_par", "p_perp", "value"], rows, data, {"map": rg.meta}


def _task_bessel(cfg):
    b = cfg.section("bessel")
    n, x, v, method = b["n"], b["x"], b["v"], b["method"]
    rows = []
    if v is None:
        methods = ("recurrence", "asymptotic") if method == "both" else (method,)
        evals = [evaluate(n, x, m) for m in methods]
        direct = evals[0].value if method == "both" else None
        for e in evals:
            rel = "" if direct is None else abs(e.value - direct) / abs(direct) if direct != 0 else math.inf
            rows.append((n, x, "", e.method, e.value, e.est_error, rel))
    else:
        if method == "quadrature":
            val, err = gen_bessel_j_quad(n, x, v, return_error=True)
        else:
            val, err = gen_bessel_j(n, x, v), 1e-14
        rows.append((n, x, v, method, val, err, ""))
    cols = ["n", "x", "v", "method", "value", "est_error", "rel_dev"]
    data = [{k: (None if v == "" else v) for k, v in zip(cols, r)} for r in rows]
    return None, cols, rows, data, {}


def _task_fit(cfg):
    f = cfg.section("fit")
    fp = None
    if "samples" in f:
        samples = [tuple(s) for s in f["samples"]]
        fit = tunneling_exponent_fit(samples, f.get("weights"))
        rows = [(e, w, "", "", "") for e, w in samples]
    else:
        laser = cfg.section("laser")
        pts = exponent_sweep(
            laser["omega"],
            cfg.atom,
            laser["polarization"],
            tuple(f["gamma_k"]),
            f["beta0_max"],
            f["quantity"],
            f["excess_fraction"],
            workers=thread_count(),
        )
        if len(pts) < 3:
            raise DomainError(f"the sweep window holds only {len(pts)} points; widen fit.gamma_k", field="fit.gamma_k")
        fit = tunneling_exponent_fit([(p.e_field, p.rate) for p in pts])
        rows = [(p.e_field, p.rate, p.n0, p.gamma_k, p.beta0) for p in pts]
    target = (2.0 / 3.0) * (2.0 * cfg.atom.eb) ** 1.5
    extra = {"C": fit.C, "a": fit.a, "residual_norm": fit.residual_norm, "n_samples": fit.n_samples, "C_tunneling": target}
    cols = ["E", "W", "n0", "gamma_K", "beta0"]
    data = {"samples": [{k: (None if v == "" else v) for k, v in zip(cols, r)} for r in rows], **extra}
    return fp, cols, rows, data, extra


_TASKS = {
    "params": _task_params,
    "regime-map": _task_regime,
    "rate": _task_rate,
    "spectrum": _task_spectrum,
    "momentum-map": _task_momentum,
    "bessel": _task_bessel,
    "fit": _task_fit,
}
assert set(_TASKS) == set(TASKS)


def _write(path, text, stdout):
    if path is None:
        stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute a validated configuration and write its artifacts."""
    stdout = stdout or sys.stdout
    fp, cols, rows, data, extra = _TASKS[cfg.task](cfg)
    polylines = extra.pop("polylines", None)
    meta = metadata(cfg.task, cfg.hashed(), fp, **extra)
    if cfg.output_format == "json":
        _write(cfg.output_path, json_text(meta, data), stdout)
        return 0
    _write(cfg.output_path, csv_text(cols, rows, meta), stdout)
    if polylines is not None:
        side = Path(cfg.output_path).with_suffix(".polylines.json")
        _write(str(side), json_text(meta, polylines), stdout)
    return 0


def _report(exc, stderr):
    stderr.write(f"error: {exc}\n")
    partial = getattr(exc, "partial", None)
    if partial is not None:
        stderr.write(f"partial result: {partial!r}\n")
    estimates = getattr(exc, "estimates", None)
    if estimates is not None:
        stderr.write(f"successive estimates: {estimates!r}\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        stdout.write(json.dumps(schema_document(), indent=1) + "\n")
        return 0
    if args.task is None:
        parser.print_usage(stderr)
        return 1
    try:
        cfg = validate(_merge(args))
        thread_count()
        return run(cfg, stdout)
    except (ConfigError, DomainError, RangeError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except (AccuracyError, FitError, InvariantViolation) as exc:
        _report(exc, stderr)
        return 2


def console():
    sys.exit(main())


if __name__ == "__main__":
    console()
