"""Command-line front end.

Exit codes: 0 success / all properties hold, 2 malformed input, 3 a
solver failed to converge, 4 a property violation (the violating
instance is serialized next to the report so `replay` can re-execute
it).  Reports are JSON (schema 1) or CSV with the fixed column set
experiment,instance_id,quantity,value,bound,pass.  Rows always carry a
violation measure: value is how badly the property is broken (0 when it
holds) and pass means value <= bound.

ENTROPY_DUEL_MAX_ITERS overrides every optimizer iteration budget.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import click
import numpy as np

from . import channels as ch_mod
from . import classical_game as game
from . import convex_conjugate as cvx
from . import jsonio
from . import quantum_entropy as qe
from .errors import ConvergenceError, DomainError, ValidationError
from .herm_core import (hermitize, make_rng, random_density, random_hermitian,
                        tensor)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_VIOLATION = 4


@dataclass
class ExperimentConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "json"


def _env_max_iters(default: int) -> int:
    raw = os.environ.get("ENTROPY_DUEL_MAX_ITERS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"ENTROPY_DUEL_MAX_ITERS must be an integer, "
                              f"got {raw!r}") from exc
    if value < 1:
        raise ValidationError("ENTROPY_DUEL_MAX_ITERS must be >= 1")
    return value


def _optim_options(max_iters: int = 500) -> qe.OptimOptions:
    return qe.OptimOptions(max_iters=_env_max_iters(max_iters))


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top-level JSON value must be an object")
    return doc


def _write_text(text: str, output: Optional[str]):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_doc(doc: dict, cfg: ExperimentConfig):
    doc = {"schema": jsonio.SCHEMA_VERSION, **doc}
    if cfg.format == "json":
        _write_text(json.dumps(doc, indent=2) + "\n", cfg.output)
        return
    if cfg.format == "csv":
        rows = doc.get("rows")
        if rows is None:
            rows = [{"experiment": doc.get("experiment", cfg.command),
                     "instance_id": doc.get("instance_id", "0000"),
                     "quantity": k, "value": v, "bound": "", "pass": True}
                    for k, v in doc.items()
                    if isinstance(v, (int, float)) and k != "schema"]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["experiment", "instance_id", "quantity", "value",
                         "bound", "pass"])
        for r in rows:
            writer.writerow([r["experiment"], r["instance_id"], r["quantity"],
                             r["value"], r["bound"], r["pass"]])
        _write_text(buf.getvalue(), cfg.output)
        return
    raise ValidationError(f"unknown format {cfg.format!r}")


def _row(experiment: str, instance_id: str, quantity: str, value: float,
         bound: float) -> dict:
    value = float(value)
    return {"experiment": experiment, "instance_id": instance_id,
            "quantity": quantity, "value": value, "bound": float(bound),
            "pass": bool(value <= bound)}


# ---------------------------------------------------------------------------
# Instance generators + single-instance executors (shared by proptest and
# replay, so a serialized violation re-runs bit-identically).

def _instance_rng(inst: dict) -> np.random.Generator:
    return make_rng(int(inst["seed"]) * 1_000_003 + int(inst["index"]))


def _grid_probe(rng: np.random.Generator):
    lo, hi, step = -3.0, 3.0, 0.01
    pts = cvx.uniform_grid(lo, hi, step)
    a = float(rng.uniform(0.2, 2.0))
    b = float(rng.uniform(-1.0, 1.0))
    c = float(rng.uniform(-1.0, 1.0))
    vals = a * pts[:, 0] ** 2 + b * pts[:, 0] + c
    return pts, vals, (a, b, c)


def _fenchel_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    eid, iid = inst["experiment"], inst["instance_id"]
    pts, vals, _ = _grid_probe(rng)
    f = cvx.SampledFunction(pts, vals)
    bump = np.abs(rng.normal(0.0, 0.5, size=pts.shape[0]))
    g = cvx.SampledFunction(pts, vals + bump)
    rows = []
    fy_worst = 0.0
    for _ in range(5):
        x = pts[int(rng.integers(0, pts.shape[0]))]
        p = np.array([float(rng.uniform(-4.0, 4.0))])
        gap = cvx.fenchel_gap(f, x, p)
        fy_worst = max(fy_worst, -float(gap))
    rows.append(_row(eid, iid, "fenchel_young_violation", fy_worst, tol))
    duals = np.linspace(-4.0, 4.0, 9)[:, None]
    rev_worst = 0.0
    for p in duals:
        # f <= g pointwise forces f* >= g*
        rev_worst = max(rev_worst,
                        float(cvx.conjugate_at(g, p)) - float(cvx.conjugate_at(f, p)))
    rows.append(_row(eid, iid, "order_reversal_violation", rev_worst, tol))
    fstar = cvx.conjugate_function(f, duals)
    bi_worst = 0.0
    for _ in range(5):
        i = int(rng.integers(0, pts.shape[0]))
        bi = float(cvx.conjugate_at(fstar, pts[i]))
        bi_worst = max(bi_worst, bi - vals[i])
    rows.append(_row(eid, iid, "biconjugate_domination_violation", bi_worst, tol))
    return rows


def _gibbs_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    dim = int(inst["dim"])
    eid, iid = inst["experiment"], inst["instance_id"]
    m = rng.uniform(0.05, 1.0, size=dim)
    m /= m.sum()
    q = rng.uniform(-3.0, 3.0, size=dim)
    lp = game.log_partition(m, q)
    pstar = game.best_response(m, q)
    attained = float(pstar @ q) - float(game.relative_entropy(pstar, m))
    rows = [_row(eid, iid, "gibbs_duality_gap", abs(lp - attained), tol)]
    worst = 0.0
    for _ in range(5):
        p = rng.uniform(0.01, 1.0, size=dim)
        p /= p.sum()
        worst = max(worst,
                    float(p @ q) - float(game.relative_entropy(p, m)) - lp)
    rows.append(_row(eid, iid, "gibbs_dominance_violation", worst, tol))
    return rows


def _divergence_spec(kind: str, strict: bool = False) -> qe.DivergenceSpec:
    return qe.DivergenceSpec(kind, strict=strict, optimizer=_optim_options())


def _convexity_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    dim = int(inst["dim"])
    kind = inst["kind"]
    eid, iid = inst["experiment"], inst["instance_id"]
    spec = _divergence_spec(kind)
    pairs = [(random_density(dim, rng), random_density(dim, rng))
             for _ in range(2)]
    ends = [float(qe.relent(spec, r, s)) for r, s in pairs]
    rows = []
    for lam in (0.25, 0.5):
        mix_r = lam * pairs[0][0] + (1 - lam) * pairs[1][0]
        mix_s = lam * pairs[0][1] + (1 - lam) * pairs[1][1]
        mixed = float(qe.relent(spec, mix_r, mix_s))
        bound_val = lam * ends[0] + (1 - lam) * ends[1]
        rows.append(_row(eid, iid, f"joint_convexity_violation_lam{lam}",
                         max(mixed - bound_val, 0.0), tol))
    return rows


def _random_projector_split(dim: int, rng: np.random.Generator):
    h = random_hermitian(dim, 1.0, rng)
    _, v = np.linalg.eigh(h)
    p = np.outer(v[:, 0], v[:, 0].conj())
    return hermitize(p), hermitize(np.eye(dim) - p)


def _monotonicity_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    dim = int(inst["dim"])
    kind = inst["kind"]
    eid, iid = inst["experiment"], inst["instance_id"]
    spec = _divergence_spec(kind)
    rho = random_density(dim, rng)
    sig = random_density(dim, rng)
    base = float(qe.relent(spec, rho, sig))
    rows = []
    p, p_perp = _random_projector_split(dim, rng)
    pinch = ch_mod.pinching_channel([p, p_perp])
    pinched = float(qe.relent(spec, pinch.apply(rho), pinch.apply(sig)))
    rows.append(_row(eid, iid, "pinching_monotonicity_violation",
                     max(pinched - base, 0.0), tol))
    blocks = sum(float(qe.relent(spec, q @ rho @ q, q @ sig @ q))
                 for q in (p, p_perp))
    rows.append(_row(eid, iid, "pinching_block_additivity_gap",
                     abs(pinched - blocks), tol))
    rows.append(_row(eid, iid, "projection_sum_violation",
                     max(blocks - base, 0.0), tol))
    channel = ch_mod.random_channel(dim, dim, 2, rng)
    mapped = float(qe.relent(spec, channel.apply(rho), channel.apply(sig)))
    rows.append(_row(eid, iid, "cptp_monotonicity_violation",
                     max(mapped - base, 0.0), tol))
    return rows


def _scaling_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    dim = int(inst["dim"])
    eid, iid = inst["experiment"], inst["instance_id"]
    mass = float((0.5, 1.0, 2.0)[int(inst["index"]) % 3])
    rho = random_density(dim, rng, mass=mass)
    ref = random_density(dim, rng)
    lhs, rhs = qe.scaling_check(rho, ref, mass, optimizer=_optim_options())
    return [_row(eid, iid, "scaling_gap", abs(lhs - rhs), tol)]


def _additivity_instance(inst: dict) -> list[dict]:
    rng = _instance_rng(inst)
    tol = float(inst["tol"])
    dim = int(inst["dim"])
    eid, iid = inst["experiment"], inst["instance_id"]
    spec = _divergence_spec("umegaki")
    chs = [ch_mod.random_channel(dim, dim, 2, rng) for _ in range(2)]
    states = [random_density(dim, rng) for _ in range(2)]
    lhs, rhs = ch_mod.product_input_additivity_check(chs, states, spec)
    return [_row(eid, iid, "product_input_additivity_gap", abs(lhs - rhs), tol)]


_SUITES = {
    "fenchel": (_fenchel_instance, 1e-9),
    "gibbs": (_gibbs_instance, 1e-9),
    "convexity": (_convexity_instance, 1e-6),
    "monotonicity": (_monotonicity_instance, 1e-6),
    "scaling": (_scaling_instance, 1e-5),
    "additivity": (_additivity_instance, 1e-6),
}


def _run_suite(cfg: ExperimentConfig) -> int:
    suite = cfg.inputs["suite"]
    if suite not in _SUITES:
        raise ValidationError(f"unknown property suite {suite!r}; choose from "
                              f"{sorted(_SUITES)}")
    executor, default_tol = _SUITES[suite]
    tol = float(cfg.tolerances.get("tol") or default_tol)
    n = int(cfg.inputs.get("n", 25))
    dim = int(cfg.inputs.get("dim", 2))
    kind = cfg.inputs.get("kind", "umegaki")
    rows = []
    violation = None
    for index in range(n):
        inst = {"experiment": suite, "instance_id": f"{suite}-{index:04d}",
                "seed": cfg.seed, "index": index, "dim": dim, "kind": kind,
                "tol": tol}
        inst_rows = executor(inst)
        rows.extend(inst_rows)
        if violation is None and any(not r["pass"] for r in inst_rows):
            violation = inst
    doc = {"experiment": suite, "seed": cfg.seed, "n": n, "rows": rows}
    if violation is not None:
        directory = os.path.dirname(cfg.output) if cfg.output else "."
        vpath = os.path.join(directory or ".", f"{suite}_violation.json")
        with open(vpath, "w", encoding="utf-8") as fh:
            json.dump({"schema": jsonio.SCHEMA_VERSION, "experiment": suite,
                       "instance": violation}, fh, indent=2)
        doc["violation_file"] = vpath
    _emit_doc(doc, cfg)
    if violation is not None:
        click.echo(f"property violation; instance serialized to "
                   f"{doc['violation_file']}", err=True)
        return EXIT_VIOLATION
    return EXIT_OK


def _run_replay(cfg: ExperimentConfig) -> int:
    doc = _load_json(cfg.inputs["path"])
    suite = doc.get("experiment")
    inst = doc.get("instance")
    if suite not in _SUITES or not isinstance(inst, dict):
        raise ValidationError("replay file must carry 'experiment' and "
                              "'instance' produced by a proptest run")
    executor, _ = _SUITES[suite]
    rows = executor(inst)
    out = {"experiment": suite, "instance_id": inst.get("instance_id"),
           "rows": rows}
    _emit_doc(out, cfg)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# One-shot commands.

def _run_conjugate(cfg: ExperimentConfig) -> int:
    doc = _load_json(cfg.inputs["path"])
    grid = doc.get("grid")
    if not isinstance(grid, dict):
        raise ValidationError("conjugate input needs a 'grid' object with "
                              "lo/hi/step")
    try:
        pts = cvx.uniform_grid(float(grid["lo"]), float(grid["hi"]),
                               float(grid["step"]))
    except KeyError as exc:
        raise ValidationError(f"grid is missing {exc}") from exc
    name = doc.get("function")
    params = doc.get("params") or {}
    if name == "exp":
        fn = np.exp
    elif name == "quadratic":
        fn = lambda x: 0.5 * x * x  # noqa: E731
    elif name == "affine":
        slope = float(params.get("slope", 1.0))
        intercept = float(params.get("intercept", 0.0))
        fn = lambda x, a=slope, b=intercept: a * x - b  # noqa: E731
    elif name == "abs":
        fn = np.abs
    else:
        raise ValidationError(f"unknown function {name!r}; choose exp, "
                              "quadratic, affine, abs")
    vals = fn(pts[:, 0])
    f = cvx.SampledFunction(pts, vals)
    xstar = doc.get("xstar")
    if isinstance(xstar, (int, float)):
        xstar = [float(xstar)]
    dual = jsonio.vector_from_json(xstar, "xstar")
    value = cvx.conjugate_at(f, dual)
    _emit_doc({"experiment": "conjugate", "function": name,
               "xstar": jsonio.vector_to_json(dual),
               "value": float(value)}, cfg)
    return EXIT_OK


def _run_game_solve(cfg: ExperimentConfig) -> int:
    doc = _load_json(cfg.inputs["path"])
    payoffs = doc.get("payoffs")
    if not isinstance(payoffs, list):
        raise ValidationError("game input needs a 'payoffs' matrix")
    g = np.asarray(payoffs, dtype=float)
    tol = float(cfg.tolerances.get("tol") or 1e-6)
    sol = game.zero_sum_value(g, tol=tol)
    _emit_doc({"experiment": "game_solve",
               "value": sol.value,
               "row": jsonio.vector_to_json(sol.row),
               "col": jsonio.vector_to_json(sol.col),
               "gap": sol.gap}, cfg)
    return EXIT_OK


def _run_game_estimate(cfg: ExperimentConfig) -> int:
    doc = _load_json(cfg.inputs["path"])
    awards = jsonio.vector_from_json(doc.get("awards"), "awards")
    value, argmin = game.minimax_estimate(awards)
    report = game.minimax_orders_report(
        awards, resolution=int(doc.get("resolution", 12)))
    _emit_doc({"experiment": "game_estimate",
               "value": value,
               "estimate": jsonio.vector_to_json(argmin),
               "minimax": report["minimax"],
               "maxmin_grid": report["maxmin_grid"],
               "order_gap": report["order_gap"],
               "grid_resolution": report["grid_resolution"]}, cfg)
    return EXIT_OK


def _run_game_biconj(cfg: ExperimentConfig) -> int:
    doc = _load_json(cfg.inputs["path"])
    target = jsonio.vector_from_json(doc.get("target"), "target")
    prior = jsonio.vector_from_json(doc.get("prior"), "prior")
    bound = float(cfg.inputs.get("qbound") or 20.0)
    res = game.biconjugate_relent(target, prior, bound=bound)
    direct = game.relative_entropy(target, prior)
    direct_out = float(direct) if direct.is_finite else "inf"
    agreement = (abs(res.value - float(direct)) if direct.is_finite
                 else "inf")
    _emit_doc({"experiment": "game_biconj",
               "value": res.value,
               "truncated": res.truncated,
               "grad_norm": res.grad_norm,
               "iterations": res.iterations,
               "direct": direct_out,
               "agreement_gap": agreement}, cfg)
    return EXIT_OK


def _entropy_operands(cfg: ExperimentConfig):
    path = cfg.inputs.get("path")
    if path:
        doc = _load_json(path)
        if "rho" not in doc or "sigma" not in doc:
            raise ValidationError("entropy input needs 'rho' and 'sigma' "
                                  "matrix objects")
        return jsonio.matrix_from_json(doc["rho"]), \
            jsonio.matrix_from_json(doc["sigma"])
    dim = int(cfg.inputs.get("dim", 2))
    rng = make_rng(cfg.seed)
    mass = float(cfg.inputs.get("mu") or 1.0)
    return random_density(dim, rng, mass=mass), random_density(dim, rng)


def _run_entropy(cfg: ExperimentConfig) -> int:
    kind = cfg.inputs.get("kind", "umegaki")
    rho, sigma = _entropy_operands(cfg)
    mass = cfg.inputs.get("mu")
    gamma_source = cfg.inputs.get("gamma")
    gamma_ref = None
    if gamma_source == "sigma":
        gamma_ref = sigma
    elif gamma_source not in (None, "identity"):
        gamma_ref = jsonio.matrix_from_json(_load_json(gamma_source))
    doc = {"experiment": "entropy", "kind": kind}
    if kind == "variational":
        spec = qe.DivergenceSpec("variational",
                                 mass=None if mass is None else float(mass),
                                 optimizer=_optim_options())
        result = qe.variational_relent(rho, sigma, spec)
        doc["value"] = (float(result.value) if result.value.is_finite
                        else "inf")
        doc["converged"] = result.converged
        doc["grad_norm"] = result.grad_norm
        doc["maximizer"] = (None if result.maximizer is None
                            else jsonio.matrix_to_json(result.maximizer))
        _emit_doc(doc, cfg)
        return EXIT_OK if result.converged else EXIT_CONVERGENCE
    spec = qe.DivergenceSpec(kind, gamma_ref=gamma_ref)
    value = qe.relent(spec, rho, sigma)
    doc["value"] = float(value) if value.is_finite else "inf"
    _emit_doc(doc, cfg)
    return EXIT_OK


def _parse_builtin_channel(text: str, seed: int) -> ch_mod.QuantumChannel:
    name, _, arg = text.partition(":")
    if name == "identity":
        return ch_mod.identity_channel(int(arg or 2))
    if name == "depolarizing":
        return ch_mod.depolarizing_channel(float(arg or 0.5))
    if name == "dephasing":
        return ch_mod.dephasing_channel(float(arg or 1.0))
    if name == "amplitude-damping":
        return ch_mod.amplitude_damping_channel(float(arg or 0.5))
    if name == "random":
        parts = [int(x) for x in arg.split(",")] if arg else [2, 2, 2]
        if len(parts) != 3:
            raise ValidationError("random channel spec is "
                                  "random:dim_in,dim_out,kraus_count")
        return ch_mod.random_channel(*parts, make_rng(seed))
    raise ValidationError(f"unknown builtin channel {name!r}")


def _channel_from_cfg(cfg: ExperimentConfig, key: str = "channel"
                      ) -> ch_mod.QuantumChannel:
    source = cfg.inputs.get(key)
    if not source:
        raise ValidationError(f"missing --{key}")
    if os.path.exists(source):
        return ch_mod.QuantumChannel(
            tuple(jsonio.channel_from_json(_load_json(source))))
    return _parse_builtin_channel(source, cfg.seed)


def _run_channel_info(cfg: ExperimentConfig) -> int:
    channel = _channel_from_cfg(cfg)
    total = sum(a.conj().T @ a for a in channel.kraus)
    defect = float(np.max(np.abs(total - np.eye(channel.dim_in))))
    _emit_doc({"experiment": "channel_info",
               "dim_in": channel.dim_in, "dim_out": channel.dim_out,
               "kraus_count": len(channel.kraus),
               "completeness_defect": defect}, cfg)
    return EXIT_OK


def _state_from_cfg(cfg: ExperimentConfig, dim: int) -> np.ndarray:
    source = cfg.inputs.get("state")
    if not source:
        return np.eye(dim) / dim
    return jsonio.matrix_from_json(_load_json(source))


def _run_channel_mi(cfg: ExperimentConfig) -> int:
    channel = _channel_from_cfg(cfg)
    state = _state_from_cfg(cfg, channel.dim_in)
    spec = _divergence_spec(cfg.inputs.get("kind", "umegaki"))
    value = ch_mod.mutual_information(state, channel, spec)
    _emit_doc({"experiment": "channel_mi",
               "kind": spec.kind,
               "value": float(value) if value.is_finite else "inf"}, cfg)
    return EXIT_OK


def _run_channel_capacity(cfg: ExperimentConfig) -> int:
    channel = _channel_from_cfg(cfg)
    spec = _divergence_spec(cfg.inputs.get("kind", "umegaki"))
    report = ch_mod.capacity(channel, spec, _optim_options(300),
                             restarts=int(cfg.inputs.get("restarts", 5)),
                             seed=cfg.seed)
    _emit_doc({"experiment": "channel_capacity",
               "kind": spec.kind,
               "value": report.value,
               "iterations": report.iterations,
               "converged": report.converged,
               "stationarity": report.stationarity,
               "argmax_input": jsonio.matrix_to_json(report.argmax_input)},
              cfg)
    return EXIT_OK if report.converged else EXIT_CONVERGENCE


def _run_channel_additivity(cfg: ExperimentConfig) -> int:
    first = _channel_from_cfg(cfg, "channel_a")
    second = _channel_from_cfg(cfg, "channel_b")
    spec = _divergence_spec(cfg.inputs.get("kind", "umegaki"))
    report = ch_mod.additivity_report(first, second, spec, _optim_options(300),
                                      restarts=int(cfg.inputs.get("restarts", 5)),
                                      seed=cfg.seed)
    _emit_doc({"experiment": "channel_additivity",
               "kind": spec.kind,
               "first": report.first, "second": report.second,
               "joint": report.joint, "gap": report.gap}, cfg)
    return EXIT_OK


_COMMANDS = {
    "conjugate": _run_conjugate,
    "game_solve": _run_game_solve,
    "game_estimate": _run_game_estimate,
    "game_biconj": _run_game_biconj,
    "entropy": _run_entropy,
    "channel_info": _run_channel_info,
    "channel_mi": _run_channel_mi,
    "channel_capacity": _run_channel_capacity,
    "channel_additivity": _run_channel_additivity,
    "proptest": _run_suite,
    "replay": _run_replay,
}


def run_config(cfg: ExperimentConfig) -> int:
    """Execute one configured experiment; returns the process exit code."""
    handler = _COMMANDS.get(cfg.command)
    if handler is None:
        raise ValidationError(f"unknown command {cfg.command!r}")
    try:
        return handler(cfg)
    except (ValidationError, DomainError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        click.echo(f"convergence failure: {exc}", err=True)
        return EXIT_CONVERGENCE


def _finish(code: int):
    sys.exit(code)


_seed_opt = click.option("--seed", type=int, default=0, show_default=True)
_out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None)
_fmt_opt = click.option("--format", "fmt",
                        type=click.Choice(["json", "csv"]), default="json",
                        show_default=True)


@click.group()
def main():
    """Estimation games, convex conjugates, quantum divergences, channels."""


@main.command()
@click.argument("input_path", type=click.Path())
@_seed_opt
@_out_opt
@_fmt_opt
def conjugate(input_path, seed, out, fmt):
    """Convex conjugate of a grid-sampled function at a dual point."""
    _finish(run_config(ExperimentConfig("conjugate",
                                        inputs={"path": input_path},
                                        seed=seed, output=out, format=fmt)))


@main.group("game")
def game_group():
    """Classical estimation and matrix games."""


@game_group.command("solve")
@click.argument("input_path", type=click.Path())
@click.option("--tol", type=float, default=1e-6, show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def game_solve(input_path, tol, seed, out, fmt):
    """Certified value and near-equilibrium of a zero-sum matrix game."""
    _finish(run_config(ExperimentConfig("game_solve",
                                        inputs={"path": input_path},
                                        tolerances={"tol": tol},
                                        seed=seed, output=out, format=fmt)))


@game_group.command("estimate")
@click.argument("input_path", type=click.Path())
@_seed_opt
@_out_opt
@_fmt_opt
def game_estimate(input_path, seed, out, fmt):
    """Minimax award estimate plus a grid report on the reversed order."""
    _finish(run_config(ExperimentConfig("game_estimate",
                                        inputs={"path": input_path},
                                        seed=seed, output=out, format=fmt)))


@game_group.command("biconj")
@click.argument("input_path", type=click.Path())
@click.option("--qbound", type=float, default=20.0, show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def game_biconj(input_path, qbound, seed, out, fmt):
    """Relative entropy recovered by conjugating the log-partition."""
    _finish(run_config(ExperimentConfig("game_biconj",
                                        inputs={"path": input_path,
                                                "qbound": qbound},
                                        seed=seed, output=out, format=fmt)))


@main.command()
@click.argument("input_path", type=click.Path(), required=False)
@click.option("--kind", type=click.Choice(["umegaki", "bs", "gamma",
                                           "variational"]),
              default="umegaki", show_default=True)
@click.option("--mu", type=float, default=None,
              help="Mass for the variational kind (default: trace of rho).")
@click.option("--gamma", "gamma_source", default=None,
              help="'identity', 'sigma', or a matrix JSON path (gamma kind).")
@click.option("--dim", type=int, default=2, show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def entropy(input_path, kind, mu, gamma_source, dim, seed, out, fmt):
    """Relative entropy of a pair of states (from file or seeded random)."""
    _finish(run_config(ExperimentConfig("entropy",
                                        inputs={"path": input_path,
                                                "kind": kind, "mu": mu,
                                                "gamma": gamma_source,
                                                "dim": dim},
                                        seed=seed, output=out, format=fmt)))


@main.group()
def channel():
    """Channel quantities: info, mutual information, capacity, additivity."""


@channel.command("info")
@click.option("--channel", "channel_source", required=True,
              help="Builtin spec (identity:2, depolarizing:0.5, ...) or a "
                   "channel JSON path.")
@_seed_opt
@_out_opt
@_fmt_opt
def channel_info(channel_source, seed, out, fmt):
    _finish(run_config(ExperimentConfig("channel_info",
                                        inputs={"channel": channel_source},
                                        seed=seed, output=out, format=fmt)))


@channel.command("mi")
@click.option("--channel", "channel_source", required=True)
@click.option("--state", default=None,
              help="Matrix JSON path (default: maximally mixed input).")
@click.option("--kind", default="umegaki", show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def channel_mi(channel_source, state, kind, seed, out, fmt):
    _finish(run_config(ExperimentConfig("channel_mi",
                                        inputs={"channel": channel_source,
                                                "state": state, "kind": kind},
                                        seed=seed, output=out, format=fmt)))


@channel.command("capacity")
@click.option("--channel", "channel_source", required=True)
@click.option("--kind", default="umegaki", show_default=True)
@click.option("--restarts", type=int, default=5, show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def channel_capacity(channel_source, kind, restarts, seed, out, fmt):
    _finish(run_config(ExperimentConfig("channel_capacity",
                                        inputs={"channel": channel_source,
                                                "kind": kind,
                                                "restarts": restarts},
                                        seed=seed, output=out, format=fmt)))


@channel.command("additivity")
@click.option("--channel-a", "channel_a", required=True)
@click.option("--channel-b", "channel_b", required=True)
@click.option("--kind", default="umegaki", show_default=True)
@click.option("--restarts", type=int, default=5, show_default=True)
@_seed_opt
@_out_opt
@_fmt_opt
def channel_additivity(channel_a, channel_b, kind, restarts, seed, out, fmt):
    _finish(run_config(ExperimentConfig("channel_additivity",
                                        inputs={"channel_a": channel_a,
                                                "channel_b": channel_b,
                                                "kind": kind,
                                                "restarts": restarts},
                                        seed=seed, output=out, format=fmt)))


@main.command()
@click.argument("suite", type=click.Choice(sorted(_SUITES)))
@click.option("--n", type=int, default=25, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--kind", default="umegaki", show_default=True)
@click.option("--tol", type=float, default=None,
              help="Override the suite's default tolerance.")
@_seed_opt
@_out_opt
@_fmt_opt
def proptest(suite, n, dim, kind, tol, seed, out, fmt):
    """Run a seeded property suite; exit 4 on violation."""
    _finish(run_config(ExperimentConfig("proptest",
                                        inputs={"suite": suite, "n": n,
                                                "dim": dim, "kind": kind},
                                        tolerances={"tol": tol},
                                        seed=seed, output=out, format=fmt)))


@main.command()
@click.argument("violation_path", type=click.Path())
@_out_opt
@_fmt_opt
def replay(violation_path, out, fmt):
    """Re-execute a serialized violation instance and report it."""
    _finish(run_config(ExperimentConfig("replay",
                                        inputs={"path": violation_path},
                                        output=out, format=fmt)))


if __name__ == "__main__":
    main()
