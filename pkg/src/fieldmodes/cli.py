"""Command-line entry point: ``fieldmodes run|eval|list``.

Exit codes: 0 success, 2 bad arguments or config, 3 numerical failure,
4 unknown experiment.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import experiments
from .correlators import FieldParams
from .errors import ConfigError, DomainError, FieldModesError, UnknownExperimentError
from .gaussian import (Bipartition, build_covariance, entanglement_verdict, log_negativity,
                       min_pt_eigenvalue, mutual_information, partial_transpose, rindler_two_mode,
                       symplectic_spectrum, von_neumann_entropy)
from .modes import ModeSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_UNKNOWN = 0, 2, 3, 4

_RUN_KEYS = {"experiment", "overrides", "output_dir", "scale", "jobs"}
_EVAL_KEYS = {"D", "mu", "method", "modes", "rindler"}


@dataclass
class RunConfig:
    experiment: str
    overrides: dict = field(default_factory=dict)
    output_dir: str = "results"
    scale: str = "ci"
    jobs: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - _RUN_KEYS
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        if "experiment" not in d:
            raise ConfigError("config needs an 'experiment' key")
        if not isinstance(d.get("overrides", {}), dict):
            raise ConfigError("'overrides' must be a mapping")
        return cls(**d)


def parse_value(text: str):
    """Parse an override value: JSON when possible, else a bare string."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_set(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = parse_value(val.strip())
    return out


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return data


def cmd_run(args) -> int:
    if args.config:
        cfg = RunConfig.from_dict(_read_json(args.config))
        if args.experiment and args.experiment != cfg.experiment:
            raise ConfigError("experiment name on the command line disagrees with the config file")
    elif args.experiment:
        cfg = RunConfig(args.experiment)
    else:
        raise ConfigError("run needs an experiment name or --config")
    cfg.overrides.update(parse_set(args.set))
    if args.out is not None:
        cfg.output_dir = args.out
    if args.scale is not None:
        cfg.scale = args.scale
    if args.jobs is not None:
        cfg.jobs = args.jobs
    result = experiments.run(cfg.experiment, cfg.overrides, cfg.scale, cfg.jobs)
    csv_path, json_path = experiments.write_result(result, cfg.output_dir)
    print(f"{result.name}: {len(result.rows)} rows, {result.n_errors} errors")
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    summary = result.provenance.get("summary")
    if summary:
        for k, v in summary.items():
            print(f"{k}: {v}")
    return EXIT_OK


def _fmt_vals(vals) -> str:
    return "[" + ", ".join(f"{v:.10g}" for v in vals) + "]"


def _report(state, part, out=None):
    out = out or sys.stdout
    sigma = state.sigma
    print(f"modes: {part.N} (A: {part.n_A}, B: {part.n_B})", file=out)
    print(f"sigma: {sigma.shape[0]}x{sigma.shape[1]}, trace {np.trace(sigma):.10g}, "
          f"max|entry| {np.abs(sigma).max():.10g}", file=out)
    joint = symplectic_spectrum(state)
    sA = state.reduced(part.modes_A)
    sB = state.reduced(part.modes_B)
    print(f"symplectic spectrum AB: {_fmt_vals(joint.values)}", file=out)
    print(f"symplectic spectrum A: {_fmt_vals(symplectic_spectrum(sA).values)}", file=out)
    print(f"symplectic spectrum B: {_fmt_vals(symplectic_spectrum(sB).values)}", file=out)
    pt = symplectic_spectrum(partial_transpose(state, part))
    print(f"partial-transpose spectrum: {_fmt_vals(pt.values)}", file=out)
    print(f"S_A = {von_neumann_entropy(sA):.10g}", file=out)
    print(f"S_B = {von_neumann_entropy(sB):.10g}", file=out)
    print(f"S_AB = {von_neumann_entropy(joint):.10g}", file=out)
    print(f"I(A:B) = {mutual_information(state, part):.10g}", file=out)
    print(f"nu_tilde_min = {min_pt_eigenvalue(state, part):.10g}", file=out)
    print(f"E_N = {log_negativity(state, part):.10g}", file=out)
    print(f"verdict: {entanglement_verdict(state, part)}", file=out)


def load_eval_file(path: str, overrides: dict | None = None):
    """Read a mode-list file and return (state, bipartition)."""
    data = _read_json(path)
    data.update(overrides or {})
    unknown = set(data) - _EVAL_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s) in {path}: {sorted(unknown)}")
    if "rindler" in data:
        spec = data["rindler"]
        if not isinstance(spec, dict) or set(spec) != {"omega_over_a"}:
            raise ConfigError("'rindler' must be an object with exactly 'omega_over_a'")
        return rindler_two_mode(float(spec["omega_over_a"])), Bipartition(("A", "B"))
    if "modes" not in data:
        raise ConfigError(f"{path} needs 'modes' or 'rindler'")
    labels, modes = [], []
    for entry in data["modes"]:
        if not isinstance(entry, dict) or "label" not in entry:
            raise ConfigError("each mode needs a 'label' of 'A' or 'B'")
        labels.append(entry["label"])
        modes.append(ModeSpec.from_dict(entry))
    try:
        part = Bipartition(tuple(labels))
    except FieldModesError as exc:
        raise ConfigError(str(exc)) from None
    D = int(data.get("D", modes[0].dim if modes else 3))
    params = FieldParams(D, float(data.get("mu", 0.0)))
    state = build_covariance(modes, params, method=data.get("method", "auto"))
    return state, part


def cmd_eval(args) -> int:
    state, part = load_eval_file(args.modes_file, parse_set(args.set))
    _report(state, part)
    return EXIT_OK


def cmd_list(args) -> int:
    for name in experiments.list_experiments():
        exp = experiments.REGISTRY[name]
        print(f"{name:22s} axis={exp.axis:14s} {exp.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fieldmodes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a named sweep and write CSV plus JSON sidecar")
    r.add_argument("experiment", nargs="?")
    r.add_argument("--config", help="JSON run configuration")
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a parameter")
    r.add_argument("--out", help="output directory (default: results)")
    r.add_argument("--scale", choices=experiments.SCALES)
    r.add_argument("--jobs", type=int)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("eval", help="evaluate a mode-list file")
    e.add_argument("modes_file")
    e.add_argument("--set", action="append", metavar="KEY=VALUE", help="override D, mu or method")
    e.set_defaults(func=cmd_eval)

    ls = sub.add_parser("list", help="list available experiments")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnknownExperimentError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        print("available: " + ", ".join(experiments.list_experiments()), file=sys.stderr)
        return EXIT_UNKNOWN
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FieldModesError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
