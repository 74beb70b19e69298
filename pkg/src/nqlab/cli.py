"""Command-line runner: JSON scenario configs in, CSV series and JSON summaries out.

Exit status is 0 on success, 1 on bad input, and 2 when ``--assert`` is
given and a scenario assertion fails.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import bipartite, linearity, lognlse, qcore, weinberg
from .presets import EXPERIMENTAL_BOUNDS, PRESETS

logger = logging.getLogger("nqlab")

SCENARIOS = ("spin", "nlse", "epr", "linearity", "bipartite")
CSV_COLUMNS = {
    "spin": ("t", "s1", "s2", "s3", "s1_exact", "s2_exact", "s3_exact", "error"),
    "nlse": lognlse.Diagnostics.COLUMNS,
    "epr": ("t", "sigma2_z", "sigma2_setting", "statistic"),
    "bipartite": (
        "sample",
        "partial_trace_residual",
        "joint_probability_residual",
        "derivative_residual_unitary",
        "derivative_residual_kraus",
        "no_signaling_residual",
    ),
}

EXIT_OK, EXIT_INPUT, EXIT_ASSERT = 0, 1, 2


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# --- config schema ---------------------------------------------------------

_MISSING = object()


@dataclass(frozen=True)
class Key:
    name: str
    kind: str  # float | int | str | vec3 | object | bool
    default: Any = _MISSING
    check: Callable[[Any], str | None] | None = None


def _positive(v):
    return None if v > 0 else "must be positive"


def _nonneg(v):
    return None if v >= 0 else "must be non-negative"


def _unit_interval(v):
    return None if 0 <= v <= 1 else "must lie in [0, 1]"


def _at_least(n):
    return lambda v: None if v >= n else f"must be at least {n}"


def _one_of(*opts):
    return lambda v: None if v in opts else f"must be one of {', '.join(map(str, opts))}"


def _bloch(v):
    return None if math.fsum(c * c for c in v) <= 1.0 + 1e-8 else "Bloch vector norm exceeds 1"


SCHEMAS: dict[str, tuple[Key, ...]] = {
    "spin": (
        Key("eps", "float"),
        Key("s0", "vec3", check=_bloch),
        Key("t_final", "float", check=_nonneg),
        Key("dt", "float", None, _positive),
        Key("stride", "int", 10, _at_least(1)),
        Key("tol", "float", 1e-8, _positive),
    ),
    "nlse": (
        Key("b", "float", check=_nonneg),
        Key("m", "float", 1.0, _positive),
        Key("initial", "str", "gausson", _one_of("gausson", "gaussian")),
        Key("sigma0", "float", None, _positive),
        Key("x0", "float", 0.0),
        Key("n_points", "int", 1024, lambda v: None if v >= 16 and not v & (v - 1) else "must be a power of two >= 16"),
        Key("half_width", "float", None, _positive),
        Key("potential", "str", "none", _one_of("none", "harmonic")),
        Key("omega", "float", None, _positive),
        Key("t_final", "float", check=_nonneg),
        Key("dt", "float", 1e-3, _positive),
        Key("stride", "int", 100, _at_least(1)),
        Key("log_floor", "float", 1e-30, _positive),
        Key("width_tol", "float", 0.01, _positive),
    ),
    "epr": (
        Key("eps", "float"),
        Key("t_final", "float", check=_positive),
        Key("n_t", "int", 101, _at_least(2)),
        Key("angle_deg", "float", 45.0),
        Key("dynamics", "str", "weinberg", _one_of("weinberg", "linear")),
        Key("tol", "float", 1e-10, _positive),
        Key("expect_peak", "float", None),
    ),
    "linearity": (
        Key("map", "object"),
        Key("samples", "int", 100, _at_least(1)),
        Key("t", "float", 1.0),
        Key("seed", "int", 0),
        Key("expect", "object", None),
    ),
    "bipartite": (
        Key("eps", "float", 1.0),
        Key("samples", "int", 100, _at_least(1)),
        Key("seed", "int", 0),
        Key("p", "float", 0.5, _unit_interval),
    ),
    "bounds": (),
}


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict
    name: str | None = None
    out_dir: Path | None = None
    assert_mode: bool = False

    @property
    def stem(self) -> str:
        return self.name or self.scenario


def _coerce(key: Key, value, problems: list[str]):
    where = f"'{key.name}'"
    try:
        if key.kind == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError
            value = float(value)
            if not math.isfinite(value):
                problems.append(f"{where} must be finite")
                return None
        elif key.kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError
        elif key.kind == "str":
            if not isinstance(value, str):
                raise TypeError
        elif key.kind == "bool":
            if not isinstance(value, bool):
                raise TypeError
        elif key.kind == "vec3":
            if not isinstance(value, list) or len(value) != 3:
                raise TypeError
            value = [float(c) for c in value]
        elif key.kind == "object":
            if not isinstance(value, dict):
                raise TypeError
    except (TypeError, ValueError):
        problems.append(f"{where} has the wrong type (expected {key.kind})")
        return None
    if key.check is not None:
        msg = key.check(value)
        if msg:
            problems.append(f"{where} {msg}")
    return value


def _validate_map(doc: dict, problems: list[str]) -> None:
    kind = doc.get("type")
    if kind == "unitary":
        if ("pauli" in doc) == ("hamiltonian" in doc):
            problems.append("'map' of type unitary needs exactly one of 'pauli' or 'hamiltonian'")
    elif kind == "weinberg":
        if not isinstance(doc.get("eps"), (int, float)) or isinstance(doc.get("eps"), bool):
            problems.append("'map' of type weinberg needs numeric 'eps'")
    elif kind == "depolarizing":
        q = doc.get("q")
        if not isinstance(q, (int, float)) or not 0 <= q <= 1:
            problems.append("'map' of type depolarizing needs 'q' in [0, 1]")
    elif kind == "amplitude_damping":
        g = doc.get("gamma")
        if not isinstance(g, (int, float)) or not 0 <= g <= 1:
            problems.append("'map' of type amplitude_damping needs 'gamma' in [0, 1]")
    elif kind == "kraus":
        if not isinstance(doc.get("operators"), list):
            problems.append("'map' of type kraus needs a list 'operators'")
    else:
        problems.append(f"'map' has unknown type {kind!r}")


def validate(doc: dict) -> ScenarioConfig:
    """Check a decoded config document, collecting every problem before raising."""
    if not isinstance(doc, dict):
        raise ConfigError(["config must be a JSON object"])
    scenario = doc.get("scenario")
    if scenario not in SCHEMAS:
        raise ConfigError([f"unknown scenario {scenario!r} (expected one of {', '.join(SCENARIOS)})"])
    problems: list[str] = []
    params = {}
    schema = SCHEMAS[scenario]
    known = {k.name for k in schema} | {"scenario"}
    for extra in sorted(set(doc) - known):
        problems.append(f"unknown key '{extra}' for scenario {scenario}")
    for key in schema:
        if key.name in doc and doc[key.name] is not None:
            params[key.name] = _coerce(key, doc[key.name], problems)
        elif key.default is _MISSING:
            problems.append(f"missing required key '{key.name}'")
        else:
            params[key.name] = key.default

    if scenario == "nlse" and not problems:
        if params["initial"] == "gausson":
            if params["b"] <= 0:
                problems.append("'b' must be positive for a gausson")
            if params["potential"] != "none":
                problems.append("a gausson needs 'potential' = none")
        elif params["sigma0"] is None and params["b"] <= 0:
            problems.append("missing required key 'sigma0' (needed when b = 0)")
        if params["potential"] == "harmonic" and params["omega"] is None:
            problems.append("missing required key 'omega' for a harmonic potential")
    if scenario == "linearity" and isinstance(params.get("map"), dict):
        _validate_map(params["map"], problems)
    if problems:
        raise ConfigError(problems)
    return ScenarioConfig(scenario, params)


def parse_config(text: str) -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"]) from None
    return validate(doc)


# --- summaries -------------------------------------------------------------


@dataclass
class RunSummary:
    scenario: str
    name: str
    inputs: dict
    metrics: dict
    assertions: dict | None = None
    duration_s: float = 0.0
    series: list[tuple] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.assertions is None or all(a["pass"] for a in self.assertions.values())

    def to_json(self) -> str:
        """Deterministic document; wall-clock time is left out so reruns match byte for byte."""
        doc = {"scenario": self.scenario, "name": self.name, "inputs": self.inputs, "metrics": self.metrics}
        if self.assertions is not None:
            doc["assertions"] = self.assertions
            doc["passed"] = self.passed
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _check(value: float, op: str, bound: float) -> dict:
    ok = {"<=": value <= bound, ">=": value >= bound}[op]
    return {"value": value, "bound": bound, "op": op, "pass": bool(ok)}


def _flag(value: bool, expected: bool) -> dict:
    return {"value": bool(value), "expected": bool(expected), "pass": bool(value) == bool(expected)}


# --- scenario runners ------------------------------------------------------


def _run_spin(p: dict) -> tuple[dict, dict, list]:
    params = weinberg.WeinbergParams(p["eps"])
    s0 = qcore.BlochVector.from_array(p["s0"])
    traj = weinberg.evolve_numeric(params, s0, p["t_final"], p["dt"], stride=p["stride"])
    exact = np.array([weinberg.closed_form(params, s0, t).as_array() for t in traj.times])
    err = np.linalg.norm(traj.states - exact, axis=1)
    norms = np.linalg.norm(traj.states, axis=1)
    metrics = {
        "steps": int(round(p["t_final"] / (p["dt"] or params.default_dt()))),
        "max_error": float(err.max()),
        "norm_drift": float(np.abs(norms - s0.norm()).max()),
        "s3_drift": float(np.abs(traj.states[:, 2] - s0.s3).max()),
        "final_state": traj.states[-1].tolist(),
    }
    checks = {
        "max_error": _check(metrics["max_error"], "<=", p["tol"]),
        "norm_drift": _check(metrics["norm_drift"], "<=", 1e-10),
        "s3_drift": _check(metrics["s3_drift"], "<=", 1e-10),
    }
    rows = [(t, *s, *e, er) for t, s, e, er in zip(traj.times, traj.states, exact, err)]
    return metrics, checks, rows


def _run_nlse(p: dict) -> tuple[dict, dict, list]:
    m, b = p["m"], p["b"]
    sigma0 = p["sigma0"]
    if sigma0 is None:
        sigma0 = 0.5 / math.sqrt(m * b)  # rms width of the matched gausson
    half_width = p["half_width"] or 10.0 * sigma0
    grid = lognlse.Grid1D.centered(p["n_points"], half_width)
    potential = None
    if p["potential"] == "harmonic":
        potential = lognlse.harmonic_potential(grid, m, p["omega"], p["x0"])
    params = lognlse.LogNlseParams(mass=m, b=b, dt=p["dt"], potential=potential, log_floor=p["log_floor"])
    if p["initial"] == "gausson":
        psi0 = lognlse.make_gausson(params, grid, p["x0"])
    else:
        psi0 = lognlse.gaussian(grid, sigma0, p["x0"])

    rho0 = psi0.density
    max_density_change = [0.0]

    def watch(_i, _t, fld):
        max_density_change[0] = max(max_density_change[0], float(np.max(np.abs(fld.density - rho0))))

    _, diag = lognlse.evolve(params, psi0, p["t_final"], stride=p["stride"], observer=watch)
    arr = diag.as_arrays()
    w0 = arr["width"][0]
    metrics = {
        "grid_dx": grid.dx,
        "half_width": half_width,
        "sigma0": sigma0,
        "initial_width": float(w0),
        "final_width": float(arr["width"][-1]),
        "width_ratio": float(arr["width"][-1] / w0),
        "norm_drift": float(np.abs(arr["norm"] - arr["norm"][0]).max()),
        "energy_drift": float(np.abs(arr["energy"] - arr["energy"][0]).max()),
        "max_density_change": max_density_change[0],
    }
    checks = {"norm_drift": _check(metrics["norm_drift"], "<=", 1e-8)}

    reference = None
    if p["potential"] == "none" and p["initial"] == "gausson":
        reference = np.full_like(arr["t"], w0)
        checks["stationarity"] = _check(metrics["max_density_change"], "<=", 1e-3)
    elif p["potential"] == "none" and b == 0:
        reference = lognlse.free_gaussian_width(sigma0, m, arr["t"])
    elif p["potential"] == "harmonic" and b == 0 and abs(sigma0 - math.sqrt(1.0 / (2.0 * m * p["omega"]))) < 1e-12:
        reference = np.full_like(arr["t"], sigma0)
    if reference is not None:
        metrics["max_width_deviation"] = float(np.max(np.abs(arr["width"] / reference - 1.0)))
        checks["width_vs_reference"] = _check(metrics["max_width_deviation"], "<=", p["width_tol"])
    return metrics, checks, list(diag.rows())


def _run_epr(p: dict) -> tuple[dict, dict, list]:
    eps = p["eps"]
    dynamics = None
    if p["dynamics"] == "linear":
        dynamics = linearity.UnitaryGenerator(eps * qcore.SIGMA_3)
    setting = bipartite.EprSetting.from_angle(math.radians(p["angle_deg"]))
    zset = bipartite.EprSetting.z()
    times = np.linspace(0.0, p["t_final"], p["n_t"])
    rows = []
    for t in times:
        sz = bipartite.epr_scenario(zset, eps, t, dynamics).mean_sigma2
        ss = bipartite.epr_scenario(setting, eps, t, dynamics).mean_sigma2
        rows.append((float(t), sz, ss, abs(ss - sz)))
    arr = np.array(rows)
    peak = int(np.argmax(arr[:, 3]))
    metrics = {
        "max_abs_sigma2_z": float(np.abs(arr[:, 1]).max()),
        "max_statistic": float(arr[peak, 3]),
        "t_at_max": float(arr[peak, 0]),
    }
    checks = {"z_setting_zero": _check(metrics["max_abs_sigma2_z"], "<=", 1e-12)}
    if p["dynamics"] == "linear":
        checks["no_signal"] = _check(metrics["max_statistic"], "<=", 1e-12)
    elif abs(p["angle_deg"] - 45.0) < 1e-12:
        expected = bipartite.tilted_sigma2_curve(eps, times)
        metrics["max_curve_deviation"] = float(np.abs(arr[:, 2] - expected).max())
        checks["tilted_curve"] = _check(metrics["max_curve_deviation"], "<=", p["tol"])
    if p["expect_peak"] is not None:
        metrics["peak_deviation"] = abs(metrics["max_statistic"] - p["expect_peak"])
        checks["peak"] = _check(metrics["peak_deviation"], "<=", p["tol"])
    return metrics, checks, rows


def _complex_matrix(rows) -> np.ndarray:
    """Matrix from nested lists whose entries are numbers or [re, im] pairs."""
    def entry(v):
        if isinstance(v, list):
            return complex(v[0], v[1])
        return complex(v)
    return np.array([[entry(v) for v in row] for row in rows], dtype=complex)


def build_map(doc: dict) -> linearity.DynamicalMap:
    kind = doc["type"]
    if kind == "unitary":
        if "pauli" in doc:
            h = sum(c * s for c, s in zip(doc["pauli"], qcore.PAULI))
        else:
            h = _complex_matrix(doc["hamiltonian"])
        return linearity.UnitaryGenerator(h)
    if kind == "weinberg":
        return linearity.WeinbergFlow.with_epsilon(float(doc["eps"]))
    if kind == "depolarizing":
        return linearity.depolarizing(float(doc["q"]))
    if kind == "amplitude_damping":
        return linearity.amplitude_damping(float(doc["gamma"]))
    return linearity.KrausChannel(tuple(_complex_matrix(k) for k in doc["operators"]))


def _run_linearity(p: dict) -> tuple[dict, dict, list]:
    try:
        dmap = build_map(p["map"])
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError([f"'map' is invalid: {exc}"]) from None
    report = linearity.classify(dmap, p["samples"], p["seed"], p["t"])
    flat = report.to_dict()
    verdicts = flat.pop("verdicts")
    for k, v in verdicts.items():
        flat[f"verdict_{k}"] = v
    checks = {}
    for k, expected in (p["expect"] or {}).items():
        if k not in verdicts:
            raise ConfigError([f"'expect' names unknown verdict '{k}'"])
        checks[k] = _flag(verdicts[k], expected)
    return flat, checks, []


def _run_bipartite(p: dict) -> tuple[dict, dict, list]:
    rng = np.random.default_rng(p["seed"])
    eps = p["eps"]
    rows = []
    for i in range(p["samples"]):
        rho1 = qcore.random_density_matrix(rng, 2)
        rho2 = qcore.random_density_matrix(rng, 2)
        pw = float(rng.uniform())
        proj = qcore.projector_onto(qcore.random_state_vector(rng, 2))
        unitary = linearity.UnitaryGenerator(qcore.random_hermitian(rng, 2))
        kraus = linearity.depolarizing(float(rng.uniform()))
        t = float(rng.uniform(0.0, 2.0))

        big = bipartite.make_correlated(rho1, rho2, pw)
        mix = qcore.mixture(rho1, rho2, pw)
        pt_res = float(np.max(np.abs(big.reduced_s() - mix)))
        joint = bipartite.joint_probability(big, proj, 0) + bipartite.joint_probability(big, proj, 1)
        jp_res = abs(joint - (pw * qcore.expectation(proj, rho1) + (1 - pw) * qcore.expectation(proj, rho2)))
        du = bipartite.derivative_consistency_residual(unitary, rho1, rho2, pw, proj, t)
        dk = bipartite.derivative_consistency_residual(kraus, rho1, rho2, pw, proj, t)
        # same reduced state, correlated vs product preparation
        prod = bipartite.make_uncorrelated(mix, pw)
        ns = 0.0
        for dmap in (unitary, kraus):
            a = linearity.apply(dmap, big.reduced_s(), t)
            b = sum(br.probability * linearity.apply(dmap, br.state, t)
                    for br in bipartite.conditional_states(big) if not br.empty)
            c = linearity.apply(dmap, prod.reduced_s(), t)
            ns = max(ns, qcore.trace_distance(a, b), qcore.trace_distance(a, c))
        rows.append((i, pt_res, jp_res, du, dk, ns))

    witness = witness_states()
    flow = linearity.WeinbergFlow.with_epsilon(eps)
    w_res = bipartite.derivative_consistency_residual(
        flow, witness["rho1"], witness["rho2"], 0.5, witness["proj"], 0.0
    )
    arr = np.array(rows)
    metrics = {
        "partial_trace_residual_max": float(arr[:, 1].max()),
        "joint_probability_residual_max": float(arr[:, 2].max()),
        "derivative_residual_linear_max": float(arr[:, 3:5].max()),
        "no_signaling_residual_max": float(arr[:, 5].max()),
        "derivative_residual_weinberg_witness": w_res,
    }
    checks = {
        "partial_trace": _check(metrics["partial_trace_residual_max"], "<=", 1e-12),
        "joint_probability": _check(metrics["joint_probability_residual_max"], "<=", 1e-12),
        "derivative_linear": _check(metrics["derivative_residual_linear_max"], "<=", 1e-8),
        "no_signaling_linear": _check(metrics["no_signaling_residual_max"], "<=", 1e-12),
    }
    if eps:
        checks["derivative_weinberg"] = _check(w_res, ">=", 0.05 * abs(eps))
    return metrics, checks, rows


def witness_states() -> dict:
    """Bloch (1,0,0) and (0,0,1) mixed equally, probed with (I + Sigma_2)/2."""
    return {
        "rho1": qcore.bloch_to_density(qcore.BlochVector(1.0, 0.0, 0.0)),
        "rho2": qcore.bloch_to_density(qcore.BlochVector(0.0, 0.0, 1.0)),
        "proj": 0.5 * (qcore.SIGMA_0 + qcore.SIGMA_2),
    }


RUNNERS = {
    "spin": _run_spin,
    "nlse": _run_nlse,
    "epr": _run_epr,
    "linearity": _run_linearity,
    "bipartite": _run_bipartite,
}


def _bounds_text() -> str:
    lines = ["Experimental limits on nonlinear quantum dynamics (labeled constants; nothing computed)"]
    for entry in EXPERIMENTAL_BOUNDS:
        lines.append(f"  {entry['quantity']} {entry['relation']} {entry['bound_eV']:.1e} eV  [{entry['method']}]")
        if "note" in entry:
            lines.append(f"    {entry['note']}")
        lines.append(f"    {entry['citation']}")
    return "\n".join(lines)


def write_csv(path: Path, columns, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(v)) if not isinstance(v, (int, np.integer)) else str(int(v)) for v in row])
    path.write_text(buf.getvalue())


def run(config: ScenarioConfig) -> RunSummary:
    """Execute one scenario and write ``<stem>.csv`` / ``<stem>.json`` when ``out_dir`` is set."""
    start = time.perf_counter()
    if config.scenario == "bounds":
        metrics = {"bounds": EXPERIMENTAL_BOUNDS}
        checks: dict = {}
        rows: list = []
        print(_bounds_text())
    else:
        try:
            metrics, checks, rows = RUNNERS[config.scenario](config.params)
        except lognlse.InstabilityError as exc:
            raise RuntimeError(f"{config.scenario}: {exc}") from exc
    summary = RunSummary(
        scenario=config.scenario,
        name=config.stem,
        inputs=config.params,
        metrics=metrics,
        assertions=checks if config.assert_mode else None,
        duration_s=time.perf_counter() - start,
        series=rows,
    )
    if config.out_dir is not None:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        if config.scenario in CSV_COLUMNS:
            write_csv(config.out_dir / f"{config.stem}.csv", CSV_COLUMNS[config.scenario], rows)
        (config.out_dir / f"{config.stem}.json").write_text(summary.to_json())
    return summary


# --- argument handling -----------------------------------------------------


def load_preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError([f"unknown preset '{name}' (see --list-presets)"])
    doc = copy.deepcopy(PRESETS[name]["config"])
    cfg = validate(doc)
    cfg.name = name
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--config", type=Path, metavar="PATH", help="JSON scenario config")
    src.add_argument("--preset", metavar="NAME", help="built-in scenario (see --list-presets)")
    common.add_argument("--out", type=Path, metavar="DIR", help="directory for CSV/JSON outputs")
    common.add_argument("--assert", dest="assert_mode", action="store_true", help="check acceptance assertions; exit 2 on failure")
    common.add_argument("--seed", type=int, metavar="N", help="override the config's RNG seed")

    parser = argparse.ArgumentParser(
        prog="nqlab",
        description="Nonlinear quantum dynamics laboratory.",
        parents=[common],
    )
    parser.add_argument("--list-presets", action="store_true", help="list built-in presets and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, text in [
        ("spin", "state-dependent spin precession"),
        ("nlse", "logarithmic Schroedinger equation in 1-D"),
        ("epr", "singlet signaling scenario"),
        ("linearity", "linearity checks on a dynamical map"),
        ("bipartite", "system-plus-environment consistency checks"),
    ]:
        sub.add_parser(name, help=text, parents=[common])
    batch = sub.add_parser("batch", help="run several config files concurrently")
    batch.add_argument("configs", nargs="+", type=Path)
    batch.add_argument("--out", type=Path, required=True, metavar="DIR")
    batch.add_argument("--assert", dest="assert_mode", action="store_true")
    batch.add_argument("--jobs", type=int, default=None)
    return parser


def _config_from_args(args, command: str | None) -> ScenarioConfig:
    if args.preset:
        cfg = load_preset(args.preset)
    elif args.config:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError([f"cannot read config: {exc}"]) from None
        cfg = parse_config(text)
        cfg.name = args.config.stem
    else:
        raise ConfigError(["one of --config or --preset is required"])
    if command and cfg.scenario != command:
        raise ConfigError([f"config is for scenario '{cfg.scenario}', not '{command}'"])
    if args.seed is not None:
        if "seed" not in cfg.params:
            raise ConfigError([f"scenario '{cfg.scenario}' takes no seed"])
        cfg.params["seed"] = args.seed
    cfg.out_dir = args.out
    cfg.assert_mode = args.assert_mode
    return cfg


def _report(summary: RunSummary) -> None:
    print(f"[{summary.scenario}] {summary.name}  ({summary.duration_s:.3f} s)")
    for k, v in summary.metrics.items():
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            print(f"  {k} = {v:.6g}")
    if summary.assertions is not None:
        for k, a in summary.assertions.items():
            status = "PASS" if a["pass"] else "FAIL"
            print(f"  {status} {k}: {a['value']}")


def _run_file(path: Path, out: Path, assert_mode: bool) -> tuple[str, int, str]:
    try:
        cfg = parse_config(path.read_text())
    except (OSError, ConfigError) as exc:
        return str(path), EXIT_INPUT, str(exc)
    cfg.name, cfg.out_dir, cfg.assert_mode = path.stem, out, assert_mode
    summary = run(cfg)
    return str(path), EXIT_OK if summary.passed else EXIT_ASSERT, ""


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    if args.list_presets:
        for name, entry in PRESETS.items():
            print(f"{name:22s} {entry['config']['scenario']:10s} {entry['description']}")
        return EXIT_OK

    if args.command == "batch":
        codes = []
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_file, p, args.out, args.assert_mode) for p in args.configs]
            for fut in futures:
                path, code, msg = fut.result()
                print(f"{path}: exit {code}" + (f" ({msg})" if msg else ""))
                codes.append(code)
        return max(codes)

    try:
        cfg = _config_from_args(args, args.command)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INPUT
    try:
        summary = run(cfg)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INPUT
    except (RuntimeError, ValueError) as exc:
        print(f"error: {cfg.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _report(summary)
    return EXIT_OK if summary.passed else EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
