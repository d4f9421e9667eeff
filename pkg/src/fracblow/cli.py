"""Command line front door: ``fracblow <mode> --config <path> [--out <dir>] [--seed <u64>]``."""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import datetime
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import criterion, mild_solver, ode_blowup, stable_kernel
from .dilation import CoefficientFn
from .errors import DomainError, FracblowError, ResolutionError, ValidationError

MODES = ("kernel", "criterion", "ode", "simulate", "sweep")


# ---------------------------------------------------------------------------
# config parsing


def _require(mapping, key, where):
    if not isinstance(mapping, dict):
        raise ValidationError(f"{where} must be an object", where)
    if key not in mapping:
        raise ValidationError(f"missing required field {where}.{key}", key)
    return mapping[key]


def _pair(value, name):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValidationError(f"{name} must be a list of two numbers", name)
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must contain numbers", name) from None


def parse_system(cfg):
    """SystemParams from ``{"dim", "alpha", "beta"}`` plus either rho/sigma or explicit g/h."""
    sysc = _require(cfg, "system", "config")
    dim = _require(sysc, "dim", "system")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ValidationError("dim must be an integer", "dim")
    alpha = _pair(_require(sysc, "alpha", "system"), "alpha")
    beta = _pair(_require(sysc, "beta", "system"), "beta")
    if "g" in sysc or "h" in sysc:
        g = tuple(CoefficientFn.from_dict(c) for c in _require(sysc, "g", "system"))
        h = tuple(CoefficientFn.from_dict(c) for c in _require(sysc, "h", "system"))
        return criterion.SystemParams(dim, alpha, beta, g, h)
    rho = _pair(sysc.get("rho", [1.0, 1.0]), "rho")
    sigma = _pair(sysc.get("sigma", [0.0, 0.0]), "sigma")
    if not all(r > 0 for r in rho):
        raise ValidationError(f"rho entries must be > 0, got {rho}", "rho")
    if not all(s > -1 for s in sigma):
        raise ValidationError(f"sigma entries must be > -1, got {sigma}", "sigma")
    return criterion.SystemParams.power_law(dim, alpha, beta, rho, sigma)


def parse_problem(cfg, params):
    solver = _require(cfg, "solver", "config")
    phi = _require(solver, "phi", "solver")
    if not isinstance(phi, list) or len(phi) != 2:
        raise ValidationError("solver.phi must be a list of two initial data", "phi")
    data = tuple(mild_solver.initial_data_from_dict(p) for p in phi)
    return mild_solver.ProblemSpec(
        params, data, float(_require(solver, "box_halfwidth", "solver")), int(_require(solver, "resolution", "solver"))
    )


def parse_control(cfg):
    try:
        return mild_solver.SolverControl.from_dict(cfg.get("solver", {}).get("control", {}))
    except TypeError as exc:
        raise ValidationError(str(exc), "control") from None


def _values(spec, name):
    """A list, or ``{"start", "stop", "num"}`` for a uniform grid."""
    if isinstance(spec, dict):
        num = int(_require(spec, "num", name))
        vals = np.linspace(float(_require(spec, "start", name)), float(_require(spec, "stop", name)), num).tolist()
    elif isinstance(spec, list):
        vals = spec
    else:
        raise ValidationError(f"{name} must be a list or a start/stop/num range", name)
    if not vals:
        raise ValidationError(f"range {name} is empty", name)
    return vals


# ---------------------------------------------------------------------------
# output helpers


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no inf/nan; spell them out
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path, payload):
    payload = dict(payload)
    payload["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    with open(path, "w") as fh:
        json.dump(_clean(json.loads(json.dumps(payload, default=_json_default))), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def worker_count(n_tasks):
    env = os.environ.get("FRACBLOW_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ValidationError("FRACBLOW_THREADS must be a positive integer", "FRACBLOW_THREADS") from None
    return max(1, min(cap, n_tasks))


# ---------------------------------------------------------------------------
# modes


def cmd_kernel(cfg, out, seed):
    kc = _require(cfg, "kernel", "config")
    alpha = float(_require(kc, "alpha", "kernel"))
    dim = int(kc.get("dim", 1))
    spec = stable_kernel.KernelSpec(alpha, dim, quad_tol=float(kc.get("quad_tol", 1e-10)))
    rows = []
    for t in _values(kc.get("t", [1.0]), "t"):
        for x in _values(kc.get("x", [0.0, 1.0]), "x"):
            point = np.zeros(dim)
            point[0] = float(x)
            rows.append({"t": float(t), "x": float(x), "density": float(stable_kernel.eval_density(spec, float(t), point))})
    report = {"densities": rows, "config": cfg, "seed": seed}
    if kc.get("properties", True):
        other = kc.get("alpha_other")
        report["properties"] = stable_kernel.kernel_property_suite(
            alpha, dim, None if other is None else float(other), rng=np.random.default_rng(seed)
        )
    write_json(os.path.join(out, "kernel_report.json"), report)
    print(f"kernel alpha={alpha:g} d={dim}: {len(rows)} densities")
    return 0


def cmd_criterion(cfg, out, seed):
    params = parse_system(cfg)
    cc = cfg.get("criterion", {})
    report = criterion.criterion_report(
        params,
        t_start=float(cc.get("t_start", 1.0)),
        horizon=float(cc.get("horizon", 1e6)),
        n_windows=int(cc.get("n_windows", 6)),
        include_bounds=bool(cc.get("bounds", False)),
    )
    payload = report.to_json()
    payload["config"] = cfg
    write_json(os.path.join(out, "criterion_report.json"), payload)
    print(f"{report.verdict} ({report.method})")
    return 0


def cmd_ode(cfg, out, seed):
    oc = cfg.get("ode", {})
    beta = None
    if "f" in oc:
        f = tuple(CoefficientFn.from_dict(c) for c in oc["f"])
        beta = _pair(_require(oc, "beta", "ode"), "beta")
    else:
        params = parse_system(cfg)
        beta = params.beta
        f = (lambda t: criterion.eval_f(params, 0, t), lambda t: criterion.eval_f(params, 1, t))
    t0 = oc.get("t0")
    if t0 is None:
        if "f" in oc:
            raise ValidationError("ode.t0 is required when f is given explicitly", "t0")
        t0 = stable_kernel.min_time_t0(params)
    spec = ode_blowup.OdeSpec(f, beta, float(oc.get("k", 1.0)), float(t0), float(_require(oc, "horizon", "ode")))
    c = oc.get("c")
    traj = ode_blowup.integrate_system(spec, c=None if c is None else float(c))
    traj.to_csv(os.path.join(out, "ode_trajectory.csv"))
    A, gamma = (float(c), float(c)) if c is not None else ode_blowup.envelope_constants(beta, spec.k)
    payload = {
        "blowup_detected": traj.blowup_detected,
        "trigger": traj.trigger,
        "t_blowup_numeric": traj.t_blowup_numeric,
        "t_blowup_envelope": traj.t_blowup_envelope,
        "envelope_constants": {"A": A, "gamma": gamma, "young_constant": ode_blowup.young_constant(*beta)},
        "t0": spec.t0,
        "config": cfg,
    }
    write_json(os.path.join(out, "ode_report.json"), payload)
    tb = traj.t_blowup_numeric
    print("blew_up t_e≈%.6g" % tb if traj.blowup_detected else "bounded_on_horizon")
    return 0


def _simulate(cfg, params=None):
    params = params or parse_system(cfg)
    problem = parse_problem(cfg, params)
    return mild_solver.run_simulation(problem, parse_control(cfg))


def cmd_simulate(cfg, out, seed):
    record = _simulate(cfg)
    record.config = {"resolved": record.config, "input": cfg}
    record.write_csv(os.path.join(out, "run_series.csv"))
    write_json(os.path.join(out, "run_record.json"), record.to_json())
    print(f"blew_up t_e≈{record.t_e:.6g}" if record.verdict == "blew_up" else "bounded_on_horizon")
    return 0


def _sweep_tuple(task):
    b1, b2, d, alpha, rho, sigma, sim_cfg = task
    params = criterion.SystemParams.power_law(d, alpha, (b1, b2), rho, sigma)
    rep = criterion.power_law_report(params, include_bounds=False)
    c_u, c_a, c_v = criterion.literature_bounds((b1, b2))
    fb1, fb2 = Fraction(b1), Fraction(b2)
    below_cv = d * (fb1 * fb2 - 1) <= fb1 + fb2 + 2
    row = {
        "beta1": b1,
        "beta2": b2,
        "dim": d,
        "exponent": rep.exponent,
        "condition8_lhs": rep.condition8_lhs,
        "condition8_rhs": rep.condition8_rhs,
        "verdict": rep.verdict,
        "C_U": c_u,
        "C_A": c_a,
        "C_V": c_v,
        "d_le_C_V": below_cv,
        "simulation": "",
        "t_e": "",
        "agreement": "n/a",
    }
    record = None
    if sim_cfg is not None and d in (1, 2):
        cfg = dict(sim_cfg)
        record = _simulate(cfg, params)
        row["simulation"] = record.verdict
        row["t_e"] = "" if record.t_e is None else record.t_e
        if rep.verdict == "blow_up":
            row["agreement"] = "yes" if record.verdict == "blew_up" else "no"
    return row, record


def cmd_sweep(cfg, out, seed):
    sc = _require(cfg, "sweep", "config")
    b1s = [float(v) for v in _values(_require(sc, "beta1", "sweep"), "beta1")]
    b2s = [float(v) for v in _values(_require(sc, "beta2", "sweep"), "beta2")]
    dims = [int(v) for v in _values(sc.get("dim", [1, 2, 3, 4]), "dim")]
    alpha = _pair(sc.get("alpha", [2.0, 2.0]), "alpha")
    rho = _pair(sc.get("rho", [1.0, 1.0]), "rho")
    sigma = _pair(sc.get("sigma", [0.0, 0.0]), "sigma")
    sim_cfg = None
    if sc.get("simulate", False):
        sim_cfg = {"solver": _require(cfg, "solver", "config")}
        parse_control(sim_cfg)
    tasks = [(b1, b2, d, alpha, rho, sigma, sim_cfg) for b1 in b1s for b2 in b2s for d in dims if b1 * b2 > 1]
    if not tasks:
        raise ValidationError("sweep grid has no tuple with beta1*beta2 > 1", "beta1")
    n_workers = worker_count(len(tasks)) if sim_cfg is not None else 1
    if n_workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_sweep_tuple, tasks))
    else:
        results = [_sweep_tuple(t) for t in tasks]
    header = list(results[0][0].keys())
    write_csv(os.path.join(out, "sweep.csv"), header, [[r[0][k] for k in header] for r in results])
    for n, (row, record) in enumerate(results):
        if record is not None:
            record.config = {"resolved": record.config, "input": {"sweep_tuple": row}}
            write_json(os.path.join(out, f"run_{n:04d}.json"), record.to_json())
    summary = {
        "tuples": len(results),
        "blow_up": sum(r[0]["verdict"] == "blow_up" for r in results),
        "simulated": sum(r[1] is not None for r in results),
        "disagreements": sum(r[0]["agreement"] == "no" for r in results),
        "config": cfg,
    }
    write_json(os.path.join(out, "sweep_summary.json"), summary)
    print(f"sweep: {summary['tuples']} tuples, {summary['blow_up']} blow_up")
    return 0


COMMANDS = {
    "kernel": cmd_kernel,
    "criterion": cmd_criterion,
    "ode": cmd_ode,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="fracblow", description="Blow-up analysis for coupled fractional diffusion systems.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON experiment configuration")
    parser.add_argument("--out", default=".", help="output directory (created if missing)")
    parser.add_argument("--seed", type=_seed, default=0, help="seed for randomized property checks")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except FileNotFoundError:
            raise ValidationError(f"config file {args.config} does not exist", "config") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}", "config") from None
        if not isinstance(cfg, dict):
            raise ValidationError("config must be a JSON object", "config")
        if cfg.get("mode", args.mode) != args.mode:
            raise ValidationError(f"config mode {cfg['mode']!r} does not match command {args.mode!r}", "mode")
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.mode](cfg, args.out, args.seed)
    except (ValidationError, DomainError, ResolutionError) as exc:
        field = getattr(exc, "field", None)
        where = f" [field: {field}]" if field else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return 2
    except FracblowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
