"""Command line front end.

Commands: classify, spectrum, verify, scan, half-parity.  Systems are
described by a JSON config; see load_system for the schema.  Output is
JSON or CSV, deterministic for identical input, with floats printed to 12
significant digits in CSV.  Exit codes: 0 on success, 1 on a domain or
verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import classify_system, half_parity_system
from .errors import ParseError, SingularSusyError
from .matkit import su2_from_euler
from . import spectra
from .system import Geometry, SystemSpec, robin_matrix, theta_for_scale
from .verify import run_verification

COMMANDS = ("classify", "spectrum", "verify", "scan", "half-parity")
JSON_ONLY = ("classify", "verify", "half-parity")
SCAN_PARAMS = ("theta", "theta_l", "mu", "L")
_SECTOR_SHORT = {"positive": "pos", "zero": "zero", "negative": "neg"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    system: SystemSpec
    raw: dict | None = None
    n_levels: int = 10
    fmt: str | None = None
    output: str | None = None
    scan: dict | None = None
    tol: float = 1e-8

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError("unknown command %r" % (self.command,))
        if self.n_levels < 1:
            raise ValueError("n_levels must be at least 1")
        if (self.scan is not None) != (self.command == "scan"):
            raise ValueError("scan parameters go with the scan command only")


def _num(node: dict, key: str, where: str) -> float:
    v = node.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ParseError("%s: number required" % where)
    return float(v)


def _entries(node, where: str) -> np.ndarray:
    if (
        not isinstance(node, list)
        or len(node) != 4
        or any(
            not isinstance(p, list)
            or len(p) != 2
            or any(not isinstance(x, (int, float)) or isinstance(x, bool) for x in p)
            for p in node
        )
    ):
        raise ParseError("%s: four [re, im] pairs required (row-major)" % where)
    flat = np.array([complex(p[0], p[1]) for p in node])
    return flat.reshape(2, 2)


def _parse_u(node) -> np.ndarray:
    if not isinstance(node, dict):
        raise ParseError("U: object required")
    form = node.get("form")
    if form == "angles":
        theta = _num(node, "theta", "U.theta")
        mu = _num(node, "mu", "U.mu") if "mu" in node else 0.0
        nu = _num(node, "nu", "U.nu") if "nu" in node else 0.0
        v = su2_from_euler(mu, nu)
        return v.conj().T @ robin_matrix(theta) @ v
    if form == "matrix":
        return _entries(node.get("entries"), "U.entries")
    raise ParseError("U.form: 'angles' or 'matrix' required")


def _parse_dl(node) -> np.ndarray:
    if not isinstance(node, dict):
        raise ParseError("Dl: object required")
    if "theta_l" in node:
        return robin_matrix(_num(node, "theta_l", "Dl.theta_l"))
    if "entries" in node:
        return _entries(node["entries"], "Dl.entries")
    raise ParseError("Dl: theta_l or entries required")


def load_system(text: str) -> SystemSpec:
    """Build a SystemSpec from its JSON description.

    Schema:
      geometry: {"type": "line"} or {"type": "interval", "l": length}
      U:  {"form": "angles", "theta": t, "mu": m, "nu": n}
          meaning V(mu, nu)^dag diag(e^{i t}, -1) V(mu, nu), or
          {"form": "matrix", "entries": [[re, im] x 4]} row-major
      Dl: {"theta_l": t} meaning diag(e^{i t}, -1), or {"entries": ...};
          required for intervals, forbidden on the line
      lambda, L0: positive floats, both default 1.0
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc) from exc
    if not isinstance(raw, dict):
        raise ParseError("top level: object required")
    geo = raw.get("geometry")
    if not isinstance(geo, dict):
        raise ParseError("geometry: object required")
    kind = geo.get("type")
    if kind == "line":
        geometry = Geometry.line()
    elif kind == "interval":
        l = geo.get("l")
        if not isinstance(l, (int, float)) or isinstance(l, bool) or not l > 0:
            raise ParseError("geometry.l: positive number required")
        geometry = Geometry.interval(float(l))
    else:
        raise ParseError("geometry.type: 'line' or 'interval' required")
    if "U" not in raw:
        raise ParseError("U: required")
    u = _parse_u(raw["U"])
    lam = _num(raw, "lambda", "lambda") if "lambda" in raw else 1.0
    L0 = _num(raw, "L0", "L0") if "L0" in raw else 1.0
    dl = _parse_dl(raw["Dl"]) if raw.get("Dl") is not None else None
    return SystemSpec(geometry, u, dl, lam=lam, L0=L0)


def _matrix_entries(m: np.ndarray) -> list:
    # + 0.0 turns -0.0 into 0.0 so round trips are byte-stable
    return [[float(z.real) + 0.0, float(z.imag) + 0.0] for z in np.asarray(m).reshape(-1)]


def system_to_config(spec: SystemSpec) -> dict:
    """Canonical (matrix-form) JSON description of a system."""
    if spec.geometry.is_interval:
        geo = {"type": "interval", "l": float(spec.geometry.l)}
    else:
        geo = {"type": "line"}
    cfg = {
        "geometry": geo,
        "U": {"form": "matrix", "entries": _matrix_entries(spec.U)},
        "lambda": float(spec.lam),
        "L0": float(spec.L0),
    }
    if spec.Dl is not None:
        cfg["Dl"] = {"entries": _matrix_entries(spec.Dl)}
    return cfg


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _g12(x: float) -> str:
    return "%.12g" % x


def _charge_dict(q) -> dict:
    return {
        "alpha": q.alpha,
        "c": q.c,
        "theta": q.theta,
        "lambda": q.lam,
        "L0": q.L0,
        "reflected": q.reflected,
        "conjugator": _matrix_entries(q.conjugator),
        "a": [float(x) for x in q.a_vec],
        "b": [float(x) for x in q.b_vec],
        "shift": q.shift,
    }


def _solve(spec: SystemSpec, n_levels: int) -> spectra.Spectrum:
    if spec.geometry.is_interval:
        return spectra.solve_interval_spectrum(spec, n_levels=n_levels)
    return spectra.solve_line_bound_states(spec)


def _level_rows(spectrum: spectra.Spectrum, n_levels: int) -> list:
    rows = []
    for i, lv in enumerate(spectrum.levels[:n_levels]):
        rows.append(
            {
                "index": i,
                "sector": _SECTOR_SHORT[lv.sector],
                "k_or_kappa": lv.wavenumber,
                "energy": lv.energy,
                "multiplicity": lv.multiplicity,
            }
        )
    return rows


def _render_classify(config: RunConfig) -> tuple[str, int]:
    cls = classify_system(config.system)
    payload = {
        "degree": cls.degree,
        "goodness": cls.goodness,
        "shift": cls.shift,
        "charges": [_charge_dict(q) for q in cls.charges],
        "notes": list(cls.notes),
    }
    return _dump_json(payload), 0


def _render_spectrum(config: RunConfig) -> tuple[str, int]:
    spectrum = _solve(config.system, config.n_levels)
    rows = _level_rows(spectrum, config.n_levels)
    if config.fmt == "json":
        payload = {
            "levels": rows,
            "scan_window": list(spectrum.scan_window),
            "solver_report": spectrum.solver_report,
        }
        return _dump_json(payload), 0
    lines = ["index,sector,k_or_kappa,energy,multiplicity"]
    for r in rows:
        lines.append(
            "%d,%s,%s,%s,%d"
            % (
                r["index"],
                r["sector"],
                _g12(r["k_or_kappa"]),
                _g12(r["energy"]),
                r["multiplicity"],
            )
        )
    return "\n".join(lines) + "\n", 0


def _render_verify(config: RunConfig) -> tuple[str, int]:
    report = run_verification(config.system, n_levels=config.n_levels, tol=config.tol)
    return _dump_json(report.as_dict()), 0 if report.all_passed else 1


def _scan_configs(config: RunConfig):
    raw = config.raw
    scan = config.scan
    param = scan["param"]
    u_node = raw.get("U")
    if not isinstance(u_node, dict) or u_node.get("form") != "angles":
        raise ParseError("scan: angle-form U required")
    interval = config.system.geometry.is_interval
    if param == "theta_l" and not interval:
        raise ParseError("scan: theta_l needs an interval system")
    if interval and param in ("theta", "theta_l", "L"):
        dl_node = raw.get("Dl")
        if not isinstance(dl_node, dict) or "theta_l" not in dl_node:
            raise ParseError("scan: theta_l-form Dl required")
    values = np.linspace(scan["lo"], scan["hi"], scan["steps"])
    for value in values:
        node = copy.deepcopy(raw)
        if param == "theta":
            node["U"]["theta"] = float(value)
            if interval:
                node["Dl"]["theta_l"] = float(value)
        elif param == "theta_l":
            node["Dl"]["theta_l"] = float(value)
        elif param == "mu":
            node["U"]["mu"] = float(value)
        else:  # L
            L0 = node.get("L0", 1.0)
            t = theta_for_scale(float(value), L0)
            node["U"]["theta"] = t
            if interval:
                node["Dl"]["theta_l"] = t
        yield float(value), node


def _render_scan(config: RunConfig) -> tuple[str, int]:
    param = config.scan["param"]
    rows = []
    for value, node in _scan_configs(config):
        try:
            spec = load_system(json.dumps(node))
            cls = classify_system(spec)
            spectrum = _solve(spec, 1)
            ground = spectrum.ground.energy if spectrum.ground else None
            rows.append((value, cls.degree, cls.shift, ground, cls.goodness))
        except SingularSusyError:
            rows.append((value, "error", None, None, "error"))
    if config.fmt == "json":
        payload = [
            {
                "param": param,
                "value": v,
                "degree": d,
                "shift": s,
                "ground_energy": g,
                "goodness": good,
            }
            for v, d, s, g, good in rows
        ]
        return _dump_json(payload), 0
    lines = ["param,value,degree,shift,ground_energy,goodness"]
    for v, d, s, g, good in rows:
        lines.append(
            "%s,%s,%s,%s,%s,%s"
            % (
                param,
                _g12(v),
                d,
                "" if s is None else _g12(s),
                "" if g is None else _g12(g),
                good,
            )
        )
    return "\n".join(lines) + "\n", 0


def _render_half_parity(config: RunConfig) -> tuple[str, int]:
    mirrored = half_parity_system(config.system)
    return _dump_json(system_to_config(mirrored)), 0


def run(config: RunConfig) -> int:
    render = {
        "classify": _render_classify,
        "spectrum": _render_spectrum,
        "verify": _render_verify,
        "scan": _render_scan,
        "half-parity": _render_half_parity,
    }[config.command]
    text, code = render(config)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def _parse_scan_flag(value: str) -> dict:
    parts = value.split(":")
    if len(parts) != 4:
        raise ValueError("expected PARAM:FROM:TO:STEPS")
    param, lo, hi, steps = parts
    if param not in SCAN_PARAMS:
        raise ValueError("param must be one of %s" % ", ".join(SCAN_PARAMS))
    try:
        lo = float(lo)
        hi = float(hi)
        steps = int(steps)
    except ValueError:
        raise ValueError("FROM and TO must be numbers, STEPS an integer")
    if steps < 2:
        raise ValueError("STEPS must be at least 2")
    return {"param": param, "lo": lo, "hi": hi, "steps": steps}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="singular-susy",
        description="Classify, solve, and verify point-singularity SUSY systems.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, metavar="PATH", help="system JSON")
    parser.add_argument("--n-levels", type=int, default=10, dest="n_levels")
    parser.add_argument("--output", metavar="PATH")
    parser.add_argument("--format", choices=("json", "csv"), dest="fmt")
    parser.add_argument("--scan", metavar="PARAM:FROM:TO:STEPS")
    args = parser.parse_args(argv)
    if args.command == "scan" and not args.scan:
        parser.error("scan requires --scan PARAM:FROM:TO:STEPS")
    if args.command != "scan" and args.scan:
        parser.error("--scan only applies to the scan command")
    if args.command in JSON_ONLY and args.fmt == "csv":
        parser.error("%s output is JSON only" % args.command)
    if args.n_levels < 1:
        parser.error("--n-levels must be at least 1")
    scan = None
    if args.scan:
        try:
            scan = _parse_scan_flag(args.scan)
        except ValueError as exc:
            parser.error("--scan: %s" % exc)
    try:
        tol = float(os.environ.get("SINGULAR_SUSY_TOL", "1e-8"))
    except ValueError:
        parser.error("SINGULAR_SUSY_TOL must be a number")
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print("error: cannot read config: %s" % exc, file=sys.stderr)
        return 1
    try:
        spec = load_system(text)
        config = RunConfig(
            command=args.command,
            system=spec,
            raw=json.loads(text),
            n_levels=args.n_levels,
            fmt=args.fmt,
            output=args.output,
            scan=scan,
            tol=tol,
        )
        return run(config)
    except SingularSusyError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
