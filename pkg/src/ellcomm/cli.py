"""Experiment runner: ``run``, ``diff`` and ``eval`` subcommands.

Run with ``python3 -m ellcomm``.  A config is a JSON object::

    {"experiment": "elltoda-run",
     "torus": {"omega": [1, 0], "omega_prime": [0, 1.3]},
     "params": {...}, "seed": 0, "output_dir": "out", "tolerances": {...}}

``run`` writes ``report.json`` (plus CSV series for some experiments) and
exits 0 when every criterion passes, 2 when one fails and 1 on error.
"""
from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import math
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import elltoda, rank1, seprank2, tyurin
from .elliptic import Torus, identity_suite
from .errors import ConfigInvalid, EllcommError, SchemaMismatch
from .operators import NO_PARTNER_THRESHOLD, BandedOperator, find_commuting_partner, has_partner

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

TOP_KEYS = {"experiment", "torus", "params", "seed", "output_dir", "tolerances"}

# experiment -> (default params, default tolerances)
EXPERIMENTS = {
    "elliptic-check": (
        {"n_points": 100},
        {"wp_even": 1e-11, "wp_periodic": 1e-11, "ode": 1e-9, "zeta_derivative": 1e-6,
         "sigma_log_derivative": 1e-6, "zeta_quasi_periodic": 1e-10, "sigma_quasi_periodic": 1e-10,
         "legendre": 1e-10, "F_two_forms": 1e-9, "logF_u": 1e-6, "logF_v": 1e-6},
    ),
    "rank1-demo": (
        {"p_plus": [0.31, 0.22], "p_minus": [-0.4, 0.57], "gamma": [0.83, -0.35],
         "window": [-8, 8], "n_samples": 16},
        {"periodicity": 1e-9, "eigen_residual_f": 1e-8, "eigen_residual_g": 1e-8, "commutator_norm": 1e-8},
    ),
    "seprank2-demo": (
        {"z0": [0.23, 0.11], "gamma1": [0.61, 0.0], "gamma2": [1.17, 0.4], "a1": [1.3, 0.0],
         "a2": [-0.7, 0.0], "window": [-8, 8], "tu_range": [0, 4]},
        {"normalization": 1e-9, "periodicity": 1e-9, "tu": 1e-6, "eigen_residual": 1e-8,
         "commutator_norm": 1e-8, "component_agreement": 1e-7},
    ),
    "tyurin-run": (
        {"mode": "symmetric", "window": [0, 40], "gamma_seq": None, "s_seq": None, "v_seq": None,
         "c_const": [0.0, 0.0], "a0": None, "perturbation": 1e-3},
        {"chi_zero": 1e-9, "a_two_route": 1e-9, "c_two_route": 1e-9, "s_roundtrip": 1e-9,
         "xi11": 1e-12, "xi12_two_route": 1e-9, "xi21_two_route": 1e-9, "L4_agreement": 1e-9,
         "partner_residual": 1e-8, "control_min": 1e-4},
    ),
    "elltoda-run": (
        {"N": 4, "T": 10.0, "dt": 1e-3, "output_stride": 10, "x0": None, "xdot0": None,
         "variant": "nearest", "calibration_states": 50},
        {"energy_drift": 1e-8, "calibration_spread": 1e-6, "R_c": 1e-5, "R_v": 1e-5},
    ),
    "partner-solve": (
        {"operator": None, "spans": [3, 3], "window": None},
        {"partner_residual": 1e-8},
    ),
}


@dataclass
class RunConfig:
    experiment: str
    torus: Torus
    params: dict
    seed: int = 0
    output_dir: str = "out"
    tolerances: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc: dict, source="config") -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigInvalid(source, "top level must be an object")
        for k in doc:
            if k not in TOP_KEYS:
                raise ConfigInvalid(f"{source}.{k}", "unknown key")
        exp = doc.get("experiment")
        if exp not in EXPERIMENTS:
            raise ConfigInvalid(f"{source}.experiment", f"must be one of {sorted(EXPERIMENTS)}")
        defaults, tol_defaults = EXPERIMENTS[exp]
        torus = _parse_torus(doc.get("torus", {"omega": [1, 0], "omega_prime": [0, 1]}), f"{source}.torus")
        params = copy.deepcopy(defaults)
        given = doc.get("params", {})
        if not isinstance(given, dict):
            raise ConfigInvalid(f"{source}.params", "must be an object")
        for k, v in given.items():
            if k not in defaults:
                raise ConfigInvalid(f"{source}.params.{k}", "unknown key")
            params[k] = v
        tols = dict(tol_defaults)
        for k, v in doc.get("tolerances", {}).items():
            if k not in tol_defaults:
                raise ConfigInvalid(f"{source}.tolerances.{k}", "unknown tolerance")
            if not isinstance(v, (int, float)) or not v > 0:
                raise ConfigInvalid(f"{source}.tolerances.{k}", "must be a positive number")
            tols[k] = float(v)
        seed = doc.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigInvalid(f"{source}.seed", "must be an integer")
        out = doc.get("output_dir", "out")
        if not isinstance(out, str):
            raise ConfigInvalid(f"{source}.output_dir", "must be a string")
        return cls(exp, torus, params, seed, out, tols, copy.deepcopy(doc))

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(str(path), f"invalid JSON: {exc}") from None
        return cls.from_dict(doc, "config")

    def echo(self) -> dict:
        doc = copy.deepcopy(self.raw)
        doc["seed"] = self.seed
        doc["output_dir"] = self.output_dir
        return doc


def _complex(value, path) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(x, (int, float)) for x in value):
        return complex(value[0], value[1])
    raise ConfigInvalid(path, "expected a number or a [re, im] pair")


def _parse_torus(doc, path) -> Torus:
    if not isinstance(doc, dict):
        raise ConfigInvalid(path, "must be an object")
    for k in doc:
        if k not in ("omega", "omega_prime"):
            raise ConfigInvalid(f"{path}.{k}", "unknown key")
    w = _complex(doc.get("omega", [1, 0]), f"{path}.omega")
    wp_ = _complex(doc.get("omega_prime", [0, 1]), f"{path}.omega_prime")
    if w == 0 or not (wp_ / w).imag > 0:
        raise ConfigInvalid(path, "need Im(omega_prime/omega) > 0")
    return Torus(w, wp_)


def _window(value, path):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(x, int) for x in value) or value[0] > value[1]):
        raise ConfigInvalid(path, "expected [n_min, n_max] integers")
    return int(value[0]), int(value[1])


def _seq(value, path, n_min, n_max):
    """Dict ``n -> complex`` from ``{"start": n, "values": [...]}``."""
    if not isinstance(value, dict) or set(value) != {"start", "values"}:
        raise ConfigInvalid(path, 'expected {"start": n, "values": [...]}')
    start = value["start"]
    vals = [_complex(v, f"{path}.values[{i}]") for i, v in enumerate(value["values"])]
    seq = {start + i: v for i, v in enumerate(vals)}
    if n_min not in seq or n_max not in seq:
        raise ConfigInvalid(path, f"must cover indices {n_min}..{n_max}")
    return seq


# -- experiments ----------------------------------------------------------------------

class Outcome:
    def __init__(self):
        self.metrics = {}
        self.criteria = {}
        self.series = {}

    def check(self, name, value, tol, below=True):
        value = None if value is None else float(value)
        ok = value is not None and math.isfinite(value) and (value < tol if below else value > tol)
        self.criteria[name] = {"value": value, "tolerance": tol, "relation": "<" if below else ">", "passed": bool(ok)}


def _elliptic_check(cfg: RunConfig) -> Outcome:
    rng = np.random.default_rng(cfg.seed)
    res = identity_suite(cfg.torus, rng, int(cfg.params["n_points"]))
    o = Outcome()
    t = cfg.torus
    o.metrics = {"residuals": res, "g2": t.g2, "g3": t.g3, "eta": t.eta, "eta_prime": t.eta_prime, "nome": t.nome}
    for k, v in res.items():
        o.check(k, v, cfg.tolerances[k])
    return o


def _rank1_demo(cfg: RunConfig) -> Outcome:
    p = cfg.params
    d = rank1.Rank1Data(cfg.torus, _complex(p["p_plus"], "params.p_plus"),
                        _complex(p["p_minus"], "params.p_minus"), _complex(p["gamma"], "params.gamma"))
    window = _window(p["window"], "params.window")
    rep = rank1.rank1_pair_check(d, window, n_samples=int(p["n_samples"]), seed=cfg.seed)
    zs = rank1.torus_points(cfg.torus, 8, seed=cfg.seed + 1, avoid=(d.gamma, d.p_plus, d.p_minus), min_dist=0.1)
    per = rank1.periodicity_residual(d, range(-3, 4), zs)
    o = Outcome()
    o.metrics = {k: v for k, v in rep.items() if k != "operators"}
    o.metrics["periodicity_residual"] = per
    o.check("periodicity", per, cfg.tolerances["periodicity"])
    for k in ("eigen_residual_f", "eigen_residual_g", "commutator_norm"):
        o.check(k, rep[k], cfg.tolerances[k])
    return o


def _seprank2_demo(cfg: RunConfig) -> Outcome:
    p = cfg.params
    vals = {k: _complex(p[k], f"params.{k}") for k in ("z0", "gamma1", "gamma2", "a1", "a2")}
    d = seprank2.SepRank2Data(cfg.torus, **vals)
    lo, hi = _window(p["tu_range"], "params.tu_range")
    rep = seprank2.seprank2_report(d, _window(p["window"], "params.window"), seed=cfg.seed, ns=range(lo, hi + 1))
    o = Outcome()
    o.metrics = rep
    tol = cfg.tolerances
    o.check("normalization", max(rep["normalization_residuals"].values()), tol["normalization"])
    o.check("periodicity", rep["periodicity_residual"], tol["periodicity"])
    o.check("tu", max(max(v) for v in rep["tu_residuals"].values()), tol["tu"])
    o.check("eigen_residual", max(rep["eigen_residuals"].values()), tol["eigen_residual"])
    o.check("commutator_norm", rep["commutator_norm"], tol["commutator_norm"])
    o.check("component_agreement", rep["component_agreement"], tol["component_agreement"])
    return o


def _tyurin_run(cfg: RunConfig) -> Outcome:
    p = cfg.params
    t = cfg.torus
    n_min, n_max = _window(p["window"], "params.window")
    lo, hi = n_min - 4, n_max + 4
    rng = np.random.default_rng(cfg.seed)
    gamma, s = tyurin.random_symmetric_params(t, rng, lo, hi)
    if p["gamma_seq"] is not None:
        gamma = _seq(p["gamma_seq"], "params.gamma_seq", lo, hi)
    o = Outcome()
    tol = cfg.tolerances
    mode = p["mode"]
    if mode == "symmetric":
        if p["s_seq"] is not None:
            s = _seq(p["s_seq"], "params.s_seq", lo, hi)
        chk = tyurin.dynamics_checks(t, gamma, s, lo + 2, hi - 2)
        run = chk.pop("run")
        L = tyurin.build_L4_symmetric(t, gamma, s, n_min, n_max)
        for k in ("chi_zero", "a_two_route", "c_two_route", "s_roundtrip", "xi11",
                  "xi12_two_route", "xi21_two_route", "L4_agreement"):
            o.check(k, chk[k], tol[k])
        o.metrics.update(chk)
    elif mode == "general":
        if p["a0"] is None:
            raise ConfigInvalid("params.a0", "general mode needs initial slopes [a1, a2]")
        if not isinstance(p["a0"], list) or len(p["a0"]) != 2:
            raise ConfigInvalid("params.a0", "expected [a1, a2]")
        a0 = tuple(_complex(a, f"params.a0[{i}]") for i, a in enumerate(p["a0"]))
        if p["v_seq"] is not None:
            v = _seq(p["v_seq"], "params.v_seq", lo, hi)
        else:
            v = {n: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for n in range(lo, hi + 1)}
        c = _complex(p["c_const"], "params.c_const")
        run = tyurin.run_general(t, gamma, v, c, a0, lo + 1, hi)
        L = tyurin.build_L4_general(run, n_min, n_max)
    else:
        raise ConfigInvalid("params.mode", "must be 'symmetric' or 'general'")
    A, res = find_commuting_partner(L, (3, 3))
    o.metrics["partner_residual"] = res
    o.check("partner_residual", res, tol["partner_residual"])
    if mode == "symmetric":
        at = (n_min + n_max) // 2
        Lp = tyurin.perturb_c(t, gamma, s, n_min, n_max, at, float(p["perturbation"]))
        _, res_p = find_commuting_partner(Lp, (3, 3))
        o.metrics["control_residual"] = res_p
        o.metrics["control_ratio"] = res_p / res if res > 0 else math.inf
        o.check("control_min", res_p, tol["control_min"], below=False)
    rows = list(tyurin.run_rows(run, res))
    o.series["tyurin.csv"] = (tyurin.CSV_HEADER, rows)
    o.metrics["window"] = [n_min, n_max]
    o.metrics["mode"] = mode
    return o


def _elltoda_run(cfg: RunConfig) -> Outcome:
    p = cfg.params
    t = cfg.torus
    rng = np.random.default_rng(cfg.seed)
    N = int(p["N"])
    if p["x0"] is None:
        chain = elltoda.sample_chain(t, rng, N)
    else:
        x = [_complex(v, f"params.x0[{i}]") for i, v in enumerate(p["x0"])]
        xd = [_complex(v, f"params.xdot0[{i}]") for i, v in enumerate(p["xdot0"] or [])]
        if len(x) != N or len(xd) != N:
            raise ConfigInvalid("params.x0", f"x0 and xdot0 need {N} entries")
        chain = elltoda.EllTodaChain.from_velocities(t, x, xd)
    if p["variant"] not in elltoda.VARIANTS:
        raise ConfigInvalid("params.variant", f"must be one of {elltoda.VARIANTS}")
    dt, T = float(p["dt"]), float(p["T"])
    if not dt > 0 or not T > 0:
        raise ConfigInvalid("params.dt", "dt and T must be positive")
    states = [(s.x, s.p) for s in (elltoda.sample_chain(t, rng, N) for _ in range(int(p["calibration_states"])))]
    k, spread = elltoda.calibrate(t, states)
    traj = elltoda.integrate(chain, T, dt, int(p["output_stride"]), p["variant"])
    H0 = complex(traj.H[0])
    comp = elltoda.compatibility_check(traj) if len(traj.t) >= 5 else {"R_c_max": None, "R_v_max": None}
    o = Outcome()
    o.metrics = {
        "energy_drift": traj.energy_drift,
        "H0": H0,
        "calibration_constant": k,
        "calibration_spread": spread,
        "R_c_max": comp["R_c_max"],
        "R_v_max": comp["R_v_max"],
        "dt": dt,
        "T": T,
        "N": N,
        "aborted": traj.aborted,
        "abort_reason": traj.abort_reason,
        "branch_crossings": traj.branch_crossings,
        "real_momenta": chain.is_real_momentum,
    }
    tol = cfg.tolerances
    o.check("energy_drift", traj.energy_drift / (1 + abs(H0)), tol["energy_drift"])
    o.check("calibration_spread", spread, tol["calibration_spread"])
    o.check("R_c", comp["R_c_max"], tol["R_c"])
    o.check("R_v", comp["R_v_max"], tol["R_v"])
    o.series["trajectory.csv"] = (elltoda.CSV_HEADER, list(elltoda.trajectory_rows(traj)))
    return o


def _partner_solve(cfg: RunConfig) -> Outcome:
    p = cfg.params
    op = p["operator"]
    if op is None:
        raise ConfigInvalid("params.operator", "an operator document or file path is required")
    if isinstance(op, str):
        try:
            op = json.loads(Path(op).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid("params.operator", str(exc)) from None
    try:
        L = BandedOperator.from_json(op)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid("params.operator", f"bad operator document: {exc}") from None
    spans = p["spans"]
    if not isinstance(spans, list) or len(spans) != 2 or not all(isinstance(x, int) and x >= 0 for x in spans):
        raise ConfigInvalid("params.spans", "expected [lower, upper] non-negative integers")
    window = None if p["window"] is None else _window(p["window"], "params.window")
    A, res = find_commuting_partner(L, tuple(spans), window)
    o = Outcome()
    o.metrics = {"partner_residual": res, "has_partner": has_partner(res),
                 "no_partner_threshold": NO_PARTNER_THRESHOLD, "partner": A.to_json()}
    o.check("partner_residual", res, cfg.tolerances["partner_residual"])
    return o


RUNNERS = {
    "elliptic-check": _elliptic_check,
    "rank1-demo": _rank1_demo,
    "seprank2-demo": _seprank2_demo,
    "tyurin-run": _tyurin_run,
    "elltoda-run": _elltoda_run,
    "partner-solve": _partner_solve,
}


# -- serialization ----------------------------------------------------------------

def to_jsonable(obj):
    if isinstance(obj, BandedOperator):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def versions() -> dict:
    import scipy

    return {"ellcomm": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one experiment and write its artifacts; returns ``(exit_code, report)``."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    outcome = RUNNERS[cfg.experiment](cfg)
    passed = all(c["passed"] for c in outcome.criteria.values())
    report = {
        "experiment": cfg.experiment,
        "passed": passed,
        "criteria": outcome.criteria,
        "metrics": outcome.metrics,
        "series": sorted(outcome.series),
        "versions": versions(),
        "config": cfg.echo(),
    }
    report = to_jsonable(report)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for name, (header, rows) in sorted(outcome.series.items()):
        write_csv(out / name, header, rows)
    return (EXIT_OK if passed else EXIT_FAIL), report


# -- report diff ------------------------------------------------------------------

def _walk(a, b, path, rtol, out):
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out["structure"].append(f"{path}.{k}")
            else:
                _walk(a[k], b[k], f"{path}.{k}", rtol, out)
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out["structure"].append(path)
        else:
            for i, (x, y) in enumerate(zip(a, b)):
                _walk(x, y, f"{path}[{i}]", rtol, out)
    elif isinstance(a, bool) or isinstance(b, bool):
        if a != b:
            out["flags"].append({"path": path, "a": a, "b": b})
    elif isinstance(a, (int, float)) and isinstance(b, (int, float)):
        rel = abs(a - b) / max(abs(a), abs(b), 1e-300)
        if a != b and rel > rtol:
            out["numeric"].append({"path": path, "a": a, "b": b, "rel": rel})
    elif a != b:
        out["other"].append({"path": path, "a": a, "b": b})


def report_diff(a, b, rtol=1e-9) -> dict:
    """Field-wise comparison of two ``report.json`` files of one experiment type."""
    ra = json.loads(Path(a).read_text())
    rb = json.loads(Path(b).read_text())
    ea, eb = ra.get("experiment"), rb.get("experiment")
    if ea is None or eb is None or ea != eb:
        raise SchemaMismatch(f"experiment types differ: {ea!r} vs {eb!r}")
    out = {"numeric": [], "flags": [], "structure": [], "other": []}
    for key in ("passed", "criteria", "metrics", "series"):
        _walk(ra.get(key), rb.get(key), key, rtol, out)
    cfg = {"numeric": [], "flags": [], "structure": [], "other": []}
    # where a run was written says nothing about what it computed
    ca = {k: v for k, v in (ra.get("config") or {}).items() if k != "output_dir"}
    cb = {k: v for k, v in (rb.get("config") or {}).items() if k != "output_dir"}
    _walk(ca, cb, "config", 0.0, cfg)
    out["config"] = cfg["numeric"] + cfg["flags"] + cfg["other"] + [{"path": p} for p in cfg["structure"]]
    out["experiment"] = ea
    out["identical"] = not any(out[k] for k in ("numeric", "flags", "structure", "other", "config"))
    return out


# -- entry point ------------------------------------------------------------------

def _eval(args) -> int:
    t = Torus(complex(*args.omega), complex(*args.omega_prime))
    z = complex(*args.z)
    v = complex({"wp": t.wp, "zeta": t.zeta, "sigma": t.sigma}[args.function](z))
    print(f"{v.real:.17g} {v.imag:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellcomm", description="Elliptic commuting-operator experiments.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run an experiment from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", help="output directory (overrides the config)")
    r.add_argument("--seed", type=int, help="seed (overrides the config)")
    d = sub.add_parser("diff", help="compare two report.json files")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--rtol", type=float, default=1e-9)
    e = sub.add_parser("eval", help="evaluate wp, zeta or sigma at one point")
    e.add_argument("function", choices=["wp", "zeta", "sigma"])
    e.add_argument("--omega", nargs=2, type=float, metavar=("RE", "IM"), default=[1.0, 0.0])
    e.add_argument("--omega-prime", nargs=2, type=float, metavar=("RE", "IM"), default=[0.0, 1.0])
    e.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"), required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    context = args.command
    try:
        if args.command == "run":
            cfg = RunConfig.load(args.config)
            context = f"run {cfg.experiment}"
            if args.out is not None:
                cfg.output_dir = args.out
            if args.seed is not None:
                cfg.seed = args.seed
            code, report = run(cfg)
            for name, c in sorted(report["criteria"].items()):
                status = "PASS" if c["passed"] else "FAIL"
                print(f"{status} {name}: {c['value']} {c['relation']} {c['tolerance']}")
            return code
        if args.command == "diff":
            summary = report_diff(args.a, args.b, args.rtol)
            print(json.dumps(summary, indent=2, sort_keys=True))
            return EXIT_OK
        return _eval(args)
    except EllcommError as exc:
        print(f"error ({context}): {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
