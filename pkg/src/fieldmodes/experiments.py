"""Named parameter sweeps producing tabular results.

Each experiment sweeps one axis with the other parameters held fixed and
emits one row per axis value. Numerical failures in a row are recorded in
its ``error`` column instead of aborting the sweep.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .correlators import CorrelatorKind, FieldParams, correlator, single_mode_nu, single_mode_nu_limit
from .errors import ConfigError, FieldModesError, UnknownExperimentError
from .gaussian import (Bipartition, build_covariance, entanglement_threshold, log_negativity,
                       min_pt_eigenvalue, mutual_information, partial_transpose, rindler_two_mode,
                       symplectic_spectrum, von_neumann_entropy)
from .geometry import (Configuration, alternating_line, ball_and_shell, hcp_packing, hex_layers,
                       hex_ring_at_distance, mixed_sinc_pair, onion, sinc_stack, two_balls,
                       two_hex_cells)
from .smearing import SmearingSpec

__all__ = ["Experiment", "ExperimentResult", "REGISTRY", "run", "write_result", "list_experiments"]

SCALES = ("ci", "full")


@dataclass(frozen=True)
class Experiment:
    """A named sweep.

    ``grid`` maps (params, scale) to the axis values; ``row`` maps the
    parameters of one point, axis included, to a dict of outputs.
    """

    name: str
    description: str
    axis: str
    defaults: dict
    grid: Callable
    row: Callable
    columns: tuple
    summary: Callable | None = None


@dataclass
class ExperimentResult:
    name: str
    axes: tuple
    columns: tuple
    rows: list
    provenance: dict = field(default_factory=dict)

    @property
    def n_errors(self) -> int:
        return sum(1 for r in self.rows if r.get("error"))

    def column(self, key: str) -> np.ndarray:
        return np.array([r.get(key, math.nan) for r in self.rows], dtype=float)


# shared evaluation helpers -----------------------------------------------------------


def _ln_outputs(config: Configuration, params: FieldParams, with_mi: bool = True) -> dict:
    state = build_covariance(config.modes, params)
    part = config.bipartition
    out = {"E_N": log_negativity(state, part), "nu_tilde_min": min_pt_eigenvalue(state, part)}
    if with_mi:
        out["MI"] = mutual_information(state, part)
    return out


def _d1_mu(p: dict) -> float:
    mu = p.get("mu")
    if mu is None:
        return 0.01 if int(p["D"]) == 1 else 0.0
    return float(mu)


def _logspace(lo, hi, n):
    return [float(v) for v in np.geomspace(lo, hi, n)]


def _linspace(lo, hi, n):
    return [float(v) for v in np.linspace(lo, hi, n)]


# row functions ------------------------------------------------------------------------


def _row_correlations(p):
    D, delta, rho = int(p["D"]), float(p["delta"]), float(p["rho"])
    fp = FieldParams(D, _d1_mu(p))
    a = SmearingSpec.poly_bump(delta, dim=D)
    cfg = two_balls(rho, a)
    b = cfg.modes[1].pure_smearing
    return {
        "phiphi_self": correlator(a, a, fp, CorrelatorKind.PHI_PHI),
        "pipi_self": correlator(a, a, fp, CorrelatorKind.PI_PI),
        "phiphi_cross": correlator(a, b, fp, CorrelatorKind.PHI_PHI),
        "pipi_cross": correlator(a, b, fp, CorrelatorKind.PI_PI),
    }


def _row_entropy_vs_d(p):
    D, delta = int(p["D"]), float(p["delta"])
    nu = single_mode_nu(delta, D)
    state = build_covariance([two_balls(4.0, SmearingSpec.poly_bump(delta, dim=D)).modes[0]],
                             FieldParams(D))
    return {"nu": nu, "nu_numeric": symplectic_spectrum(state).min,
            "S_A": von_neumann_entropy(state), "nu_limit": single_mode_nu_limit(delta)}


def _row_mi_vs_rho(p):
    D, delta, rho = int(p["D"]), float(p["delta"]), float(p["rho"])
    fp = FieldParams(D, _d1_mu(p))
    cfg = two_balls(rho, SmearingSpec.poly_bump(delta, dim=D))
    state = build_covariance(cfg.modes, fp)
    part = cfg.bipartition
    nus = symplectic_spectrum(state).values
    nut = symplectic_spectrum(partial_transpose(state, part)).values
    return {"nu_minus": nus[0], "nu_plus": nus[1], "nu_tilde_minus": nut[0], "nu_tilde_plus": nut[1],
            "S_A": von_neumann_entropy(state.reduced([0])), "S_AB": von_neumann_entropy(state),
            "MI": mutual_information(state, part), "E_N": log_negativity(state, part)}


def _row_d1_pair(p):
    delta, rho, mu = float(p["delta"]), float(p["rho"]), float(p["mu"])
    cfg = two_balls(rho, SmearingSpec.poly_bump(delta, dim=1), allow_contact=True)
    return _ln_outputs(cfg, FieldParams(1, mu))


def _row_hex(p):
    return _ln_outputs(hex_layers(int(p["n_B"]), float(p["delta"])), FieldParams(2))


def _row_hexring(p):
    return _ln_outputs(hex_ring_at_distance(float(p["rho"]), float(p["delta"])), FieldParams(2))


def _row_line(p):
    return _ln_outputs(alternating_line(int(p["n"]), float(p["delta"])), FieldParams(2))


def _row_hexcells(p):
    cfg = two_hex_cells(float(p["gap"]), int(p["n_per_cell"]), float(p["delta"]))
    return _ln_outputs(cfg, FieldParams(2))


def _row_hcp(p):
    return _ln_outputs(hcp_packing(int(p["n_B"]), float(p["delta"])), FieldParams(3), with_mi=False)


def _row_sinc(p):
    D = int(p["D"])
    return _ln_outputs(sinc_stack(int(p["n_A"]), int(p["n_B"]), D), FieldParams(D))


def _row_shell_d(p):
    D = int(p["D"])
    return _ln_outputs(ball_and_shell(float(p["R_B"]), float(p["d_B"]), D), FieldParams(D))


def _row_shell_gap(p):
    D = int(p["D"])
    return _ln_outputs(ball_and_shell(1.0 + float(p["gap"]), float(p["d_B"]), D), FieldParams(D))


def _row_shell_db(p):
    D = int(p["D"])
    return _ln_outputs(ball_and_shell(float(p["R_B"]), float(p["d_B"]), D), FieldParams(D))


def _row_onion(p):
    D = int(p["D"])
    return _ln_outputs(onion(int(p["n_shells"]), D, float(p["thickness"])), FieldParams(D))


def _row_mixed_sinc(p):
    D = int(p["D"])
    return _ln_outputs(mixed_sinc_pair(int(p["n_pairs"]), float(p["rho"]), D), FieldParams(D))


def _row_rindler(p):
    w = float(p["omega_over_a"])
    state = rindler_two_mode(w)
    part = Bipartition(("A", "B"))
    return {"nu_tilde_min": min_pt_eigenvalue(state, part), "E_N": log_negativity(state, part),
            "tanh_prediction": math.tanh(0.5 * math.pi * w),
            "nu_joint_max": max(symplectic_spectrum(state).values)}


def _row_mixing(p):
    D, delta, rho = int(p["D"]), float(p["delta"]), float(p["rho"])
    cfg = two_balls(rho, SmearingSpec.poly_bump(delta, dim=D))
    state = build_covariance(cfg.modes, FieldParams(D))
    return {"z_star": entanglement_threshold(state, 0, 1),
            "E_N_unmixed": log_negativity(state, cfg.bipartition)}


# summaries ---------------------------------------------------------------------------


def _first_positive(axis):
    def summarize(result: ExperimentResult) -> dict:
        xs, en = result.column(axis), result.column("E_N")
        pos = [x for x, e in zip(xs, en) if e > 0]
        return {f"first_{axis}_with_E_N_positive": float(pos[0]) if pos else None}
    return summarize


def _zero_threshold(axis):
    def summarize(result: ExperimentResult) -> dict:
        xs, en = result.column(axis), result.column("E_N")
        thr = None
        for x, e in zip(xs, en):
            if e == 0 and thr is None:
                thr = float(x)
            elif e > 0:
                thr = None
        return {f"{axis}_from_which_E_N_vanishes": thr}
    return summarize


def _positive_interval(axis):
    def summarize(result: ExperimentResult) -> dict:
        xs, en = result.column(axis), result.column("E_N")
        pos = [x for x, e in zip(xs, en) if e > 0]
        return {f"{axis}_interval_with_E_N_positive": [float(min(pos)), float(max(pos))] if pos else None}
    return summarize


LN_COLUMNS = ("E_N", "nu_tilde_min", "MI")


def _fixed(values_ci, values_full=None):
    return lambda p, scale: list(values_full if (scale == "full" and values_full) else values_ci)


REGISTRY: dict[str, Experiment] = {}


def _register(exp: Experiment):
    REGISTRY[exp.name] = exp


_register(Experiment(
    "correlations_vs_rho", "Self and cross correlators of two PolyBump balls versus center distance",
    "rho", {"D": 3, "delta": 1.0, "mu": None},
    lambda p, s: _logspace(2.01, 100.0, 40 if s == "ci" else 80), _row_correlations,
    ("phiphi_self", "pipi_self", "phiphi_cross", "pipi_cross")))
_register(Experiment(
    "entropy_vs_D", "Single-mode symplectic eigenvalue and entropy versus dimension",
    "D", {"delta": 1.0}, _fixed(range(2, 11), range(2, 31)), _row_entropy_vs_d,
    ("nu", "nu_numeric", "S_A", "nu_limit")))
_register(Experiment(
    "mi_vs_rho", "Two-ball symplectic spectra, entropies, mutual information and LN versus distance",
    "rho", {"D": 3, "delta": 1.0, "mu": None},
    lambda p, s: _logspace(2.01, 100.0, 40 if s == "ci" else 80), _row_mi_vs_rho,
    ("nu_minus", "nu_plus", "nu_tilde_minus", "nu_tilde_plus", "S_A", "S_AB", "MI", "E_N")))
_register(Experiment(
    "ln_vs_mass_d1", "LN of two touching intervals in D=1 versus mass",
    "mu", {"delta": 1.0, "rho": 2.0},
    lambda p, s: _logspace(1e-3, 10.0, 25 if s == "ci" else 49), _row_d1_pair, LN_COLUMNS,
    _first_positive("mu")))
_register(Experiment(
    "ln_vs_delta_d1", "LN of two touching intervals in D=1 versus smearing exponent",
    "delta", {"rho": 2.0, "mu": 0.01},
    lambda p, s: [round(1.0 + 0.05 * i, 10) for i in range(21)], _row_d1_pair, LN_COLUMNS,
    _zero_threshold("delta")))
_register(Experiment(
    "ln_vs_rho_d1", "LN of two intervals in D=1 versus center distance",
    "rho", {"delta": 1.0, "mu": 0.01},
    lambda p, s: _linspace(2.0, 3.0, 41 if s == "ci" else 101), _row_d1_pair, LN_COLUMNS,
    _zero_threshold("rho")))
_register(Experiment(
    "ln_vs_nb_hex", "LN of a disk and hexagonal layers of neighbours versus their number",
    "n_B", {"delta": 1.0}, _fixed(range(1, 31), range(1, 61)), _row_hex, LN_COLUMNS,
    _first_positive("n_B")))
_register(Experiment(
    "ln_vs_rho_hexring", "LN of a disk and a ring of six disks versus center distance",
    "rho", {"delta": 1.0}, lambda p, s: _linspace(2.01, 2.5, 25 if s == "ci" else 50), _row_hexring,
    LN_COLUMNS, _zero_threshold("rho")))
_register(Experiment(
    "ln_vs_n_line", "LN of an alternating line of disks versus modes per side",
    "n", {"delta": 1.0}, _fixed(range(1, 11), range(1, 21)), _row_line, LN_COLUMNS))
_register(Experiment(
    "ln_vs_gap_hexcells", "LN of two hexagonal cells of disks versus their surface gap",
    "gap", {"delta": 1.0, "n_per_cell": 19},
    lambda p, s: _linspace(0.0, 0.5, 26 if s == "ci" else 51), _row_hexcells, LN_COLUMNS,
    _zero_threshold("gap")))
_register(Experiment(
    "ln_hcp_d3", "LN of a ball and its hexagonal close-packed neighbours in D=3",
    "n_B", {"delta": 1.0},
    _fixed((12, 18, 30, 57, 100), (12, 18, 30, 57, 100, 200, 400, 700, 1088)), _row_hcp,
    ("E_N", "nu_tilde_min")))
_register(Experiment(
    "ln_sinc_stack", "LN of two Sinc modes on the same ball versus the order of mode B",
    "n_B", {"n_A": 1, "D": 3}, _fixed(range(2, 9), range(2, 16)), _row_sinc, LN_COLUMNS))
_register(Experiment(
    "ln_shell_vs_D", "LN of a ball and a touching shell versus dimension",
    "D", {"R_B": 1.0, "d_B": 0.5}, _fixed(range(2, 9), range(2, 11)), _row_shell_d, LN_COLUMNS,
    _zero_threshold("D")))
_register(Experiment(
    "ln_shell_vs_gap", "LN of a ball and a shell versus the gap between them",
    "gap", {"D": 3, "d_B": 0.5}, lambda p, s: _linspace(0.0, 0.3, 16 if s == "ci" else 31),
    _row_shell_gap, LN_COLUMNS, _zero_threshold("gap")))
_register(Experiment(
    "ln_shell_vs_db", "LN of a ball and a touching shell versus shell thickness",
    "d_B", {"D": 3, "R_B": 1.0}, lambda p, s: _logspace(0.02, 3.0, 20 if s == "ci" else 40),
    _row_shell_db, LN_COLUMNS, _positive_interval("d_B")))
_register(Experiment(
    "ln_onion", "LN of nested shells with alternating labels versus shell count",
    "n_shells", {"D": 3, "thickness": 0.5}, _fixed(range(1, 6), range(1, 11)), _row_onion,
    LN_COLUMNS))
_register(Experiment(
    "ln_mixed_sinc", "LN of two balls carrying field-momentum mixed Sinc modes",
    "n_pairs", {"D": 3, "rho": 2.0}, _fixed(range(1, 4), range(1, 7)), _row_mixed_sinc, LN_COLUMNS))
_register(Experiment(
    "rindler_ln", "Partial-transpose eigenvalue and LN of a Rindler mode pair versus ω/a",
    "omega_over_a", {}, lambda p, s: _logspace(0.01, 10.0, 40 if s == "ci" else 100), _row_rindler,
    ("nu_tilde_min", "E_N", "tanh_prediction", "nu_joint_max")))
_register(Experiment(
    "mixing_threshold", "Smallest two-mode squeezing that entangles two balls, versus distance",
    "rho", {"D": 3, "delta": 1.0}, _fixed((2.2, 2.5, 3.0, 4.0, 5.0, 10.0)), _row_mixing,
    ("z_star", "E_N_unmixed")))


def list_experiments() -> list:
    return sorted(REGISTRY)


def get_experiment(name: str) -> Experiment:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownExperimentError(f"unknown experiment {name!r}") from None


def resolve_params(exp: Experiment, overrides: dict | None, scale: str = "ci"):
    """Merge overrides into defaults; return (fixed params, axis values)."""
    overrides = dict(overrides or {})
    if scale not in SCALES:
        raise ConfigError(f"scale must be one of {SCALES}, got {scale!r}")
    allowed = set(exp.defaults) | {exp.axis}
    unknown = set(overrides) - allowed
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {exp.name}: {sorted(unknown)}; "
                          f"allowed: {sorted(allowed)}")
    params = dict(exp.defaults)
    axis_values = None
    for key, val in overrides.items():
        if key == exp.axis:
            axis_values = list(val) if isinstance(val, (list, tuple)) else [val]
        else:
            params[key] = val
    if axis_values is None:
        axis_values = exp.grid(params, scale)
    return params, [_plain(v) for v in axis_values]


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def _evaluate(name: str, point: dict) -> dict:
    exp = REGISTRY[name]
    try:
        out = exp.row(point)
        return {k: float(out[k]) for k in exp.columns} | {"error": ""}
    except FieldModesError as exc:
        return {k: math.nan for k in exp.columns} | {"error": f"{type(exc).__name__}: {exc}"}


def run(name: str, params: dict | None = None, scale: str = "ci", jobs: int = 1) -> ExperimentResult:
    """Run the named sweep; rows come back ordered by axis value as given."""
    exp = get_experiment(name)
    fixed, axis_values = resolve_params(exp, params, scale)
    points = [dict(fixed, **{exp.axis: x}) for x in axis_values]
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_evaluate, [name] * len(points), points))
    else:
        outputs = [_evaluate(name, p) for p in points]
    rows = [{exp.axis: x, **o} for x, o in zip(axis_values, outputs)]
    result = ExperimentResult(exp.name, (exp.axis,), exp.columns, rows)
    result.provenance = {
        "experiment": exp.name,
        "description": exp.description,
        "axis": exp.axis,
        "axis_values": axis_values,
        "params": fixed,
        "scale": scale,
        "columns": list(exp.columns),
        "package_version": __version__,
        "n_rows": len(rows),
        "n_errors": result.n_errors,
    }
    if exp.summary is not None:
        result.provenance["summary"] = exp.summary(result)
    return result


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_result(result: ExperimentResult, out_dir) -> tuple[str, str]:
    """Write ``<name>.csv`` and the ``<name>.json`` sidecar into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{result.name}.csv")
    json_path = os.path.join(out_dir, f"{result.name}.json")
    header = list(result.axes) + list(result.columns) + ["error"]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in result.rows:
            writer.writerow([_fmt(row.get(h, "")) for h in header])
    with open(json_path, "w") as fh:
        json.dump(result.provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path
