"""Dispatch an :class:`ExperimentConfig` and assemble the run report.

A report is a plain dict::

    tool, mode, rng_seed, config   echo of what was run
    results                        mode-specific payload
    checks                         [{name, passed, value, threshold}]
    status                         ok | check_failure | numerical_failure | config_error
    error                          present when status is a failure other than checks
    timing                         wall-clock seconds, kept apart from the numbers

``rows`` (per-trial records for the CSV sidecar) travel next to the report.
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .functionals import gram_matrix, representer
from .kernels import TOL_EVAL, TOL_PSD, is_psd, min_eigenvalue, norm
from .optim import NumericalError
from .oracle import brute_force_minimize
from .reduction import (HingeLoss, KPCAConstraint, ScalarLoss, SolverResult, SquaredLoss, reduce,
                        solve_ivanov, solve_kpca, solve_rls, solve_scalar_family, solve_svm)
from .regularizers import (IndicatorBall, Square, characterization_check,
                           check_equal_norm, check_orthogonal_monotonicity, check_ray_monotonicity)
from .rng import substream
from .theorem_lab import (build_rotation_path, lambda_squared, min_n_for_contraction,
                          monotone_chain_check, necessity_probe, representer_span_experiment,
                          sublevel_geometry_probe)

EXIT = {"ok": 0, "check_failure": 1, "config_error": 2, "numerical_failure": 3}


@dataclass
class RunReport:
    report: dict
    rows: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT[self.report["status"]]

    def numbers(self) -> dict:
        """The report without timing: the part that must be reproducible."""
        return {k: v for k, v in self.report.items() if k != "timing"}


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name, passed, value=None, threshold=None):
        self.items.append({"name": name, "passed": bool(passed), "value": value,
                           "threshold": threshold})

    def at_most(self, name, value, threshold):
        self.add(name, value <= threshold, value, threshold)


# --------------------------------------------------------------------------
# JSON / CSV

def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        v = to_jsonable(v)
        if isinstance(v, list):
            for i, x in enumerate(np.ravel(np.asarray(v, dtype=object))):
                out[f"{k}_{i}"] = x
        else:
            out[k] = v
    return out


def write_csv(rows: list, path) -> None:
    flat = [_flatten(r) for r in rows]
    columns: list[str] = []
    for r in flat:
        columns += [k for k in r if k not in columns]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=columns)
        w.writeheader()
        w.writerows(flat)


# --------------------------------------------------------------------------
# modes

def _run_gram(cfg: ExperimentConfig, checks: _Checks):
    kernel = cfg.build_kernel()
    G = gram_matrix(cfg.build_functionals(), kernel)
    asym = float(np.max(np.abs(G - G.T))) if G.size else 0.0
    lo = min_eigenvalue(G)
    checks.at_most("symmetric", asym, TOL_EVAL)
    checks.add("psd", is_psd(G), lo, -TOL_PSD)
    rows = [{"i": i, "row": G[i].tolist()} for i in range(G.shape[0])]
    return {"gram": G.tolist(), "min_eigenvalue": lo}, rows


def _oracle_solve(rp):
    if rp.size > 3:
        raise NumericalError("no dedicated solver for this loss/profile pair and l > 3")
    res = brute_force_minimize(rp.objective, rp.size, batch_fn=rp.objective_batch)
    return SolverResult(res.x, rp.objective(res.x), "oracle", iterations=res.evaluations)


def _run_solve(cfg: ExperimentConfig, checks: _Checks):
    kernel = cfg.build_kernel()
    Ls = cfg.build_functionals()
    R = cfg.build_regularizer()
    loss = cfg.build_loss()
    profile = R.profile
    rp = reduce(Ls, kernel, loss, profile, cfg.gamma)

    if isinstance(loss, KPCAConstraint):
        res = solve_kpca(rp)
        checks.at_most("unit_variance", res.residual, 1e-8)
    elif isinstance(profile, IndicatorBall) and isinstance(loss, (SquaredLoss, HingeLoss)):
        res = solve_ivanov(rp)
        checks.at_most("feasibility", res.feasibility, 1e-10)
    elif isinstance(loss, SquaredLoss) and isinstance(profile, Square):
        res = solve_rls(rp)
        checks.at_most("linear_residual", res.residual, 1e-10)
    elif isinstance(loss, HingeLoss) and isinstance(profile, Square):
        res = solve_svm(rp, cfg.solver)
        if "duality_gap" in res.extra:
            gap = abs(res.extra["duality_gap"]) / max(1.0, abs(res.objective))
            checks.at_most("duality_gap", gap, 1e-8)
    elif isinstance(loss, ScalarLoss):
        p = representer(Ls[0], kernel)
        sf = solve_scalar_family(p, loss, profile, cfg.gamma)
        pn = norm(p)
        c = np.array([sf.lam / (pn * pn) if pn > 0 else 0.0])
        res = SolverResult(c, rp.objective(c), "scalar_family", extra={"lambda": sf.lam})
    else:
        res = _oracle_solve(rp)

    c = np.asarray(res.coefficients, dtype=float)
    reduced = rp.objective(c)
    full = rp.full_objective(rp.reconstruct(c))
    if math.isfinite(reduced) or math.isfinite(full):
        err = abs(reduced - full) / max(1.0, abs(full)) if math.isfinite(reduced - full) else math.inf
        checks.at_most("reduction_identity", err, 1e-9)
    z = rp.gram @ c
    rows = [{"i": i, "c": float(c[i]), "Gc": float(z[i])} for i in range(c.size)]
    return {"solver": res.to_dict(), "gram": rp.gram.tolist(), "J_reduced": reduced,
            "J_full": full}, rows


def _verify_vectors(seed: int, dim: int):
    rng = substream(seed, "verify:vectors")
    x = rng.standard_normal(dim)
    x /= np.linalg.norm(x)
    d = rng.standard_normal(dim)
    d -= (d @ x) * x
    d /= np.linalg.norm(d)
    return x, d


def _run_verify(cfg: ExperimentConfig, checks: _Checks):
    R = cfg.build_regularizer()
    dim = getattr(R, "n", None) or cfg.dimension
    seed, tol = cfg.rng_seed, cfg.tolerances["check"]
    results: dict[str, Any] = {"regularizer": R.label, "dimension": dim}
    rows = []

    eq = characterization_check(R, dim, cfg.trials, seed)
    results["characterization"] = eq.to_dict()
    checks.add("characterization_agree", eq.agree)
    checks.add("verdict_matches_construction", eq.radial_verdict == R.is_radial)
    # the consequences below are predicted only when orthogonal monotonicity was observed
    predicted = eq.orthogonal_verdict
    results["predictions_checked"] = predicted

    def expect(name, ok, value=None, threshold=None):
        if predicted:
            checks.add(name, ok, value, threshold)
        results.setdefault("observations", {})[name] = bool(ok)

    if dim >= 2:
        x, d = _verify_vectors(seed, dim)
        y = 0.3 * x + 0.4 * d
        n = min_n_for_contraction(x, y)
        path = build_rotation_path(x, y, n)
        inv = path.invariant_errors()
        checks.at_most("rotation_recursion", inv["recursion"], 1e-12)
        checks.at_most("rotation_terminal_lambda", inv["terminal_lambda"], 1e-10)
        checks.add("rotation_contraction",
                   lambda_squared(0.5, path.theta, n) <= 1.0 < lambda_squared(0.5, path.theta, n - 1))
        chain = monotone_chain_check(R, path, tol)
        results["rotation_path"] = path.to_dict()
        results["chain"] = chain.to_dict()
        expect("chain_monotone", chain.holds)
        rows += [{"probe": "chain", **r} for r in chain.rows()]

        level = float(R(x))
        if not math.isfinite(level):
            level = 1.0
        sub = sublevel_geometry_probe(R, dim, level, seed=seed, tol_radius=cfg.tolerances["radius"])
        results["sublevel"] = sub.to_dict()
        expect("sublevel_ball_like", sub.ball_like)
        expect("sublevel_star_shaped", sub.star_shaped)

        gamma = cfg.gamma if 0 < cfg.gamma < math.inf else 1.0
        span = representer_span_experiment(R, x[None, :], ScalarLoss("squared_at_one"), gamma, seed)
        results["span"] = span.to_dict()
        expect("span_projection_not_worse", span.projection_not_worse)

        nec = necessity_probe(R, x, 0.8 * d, cfg.gamma_schedule, tol=tol)
        results["necessity"] = nec.to_dict()
        expect("necessity_bound", nec.bound_holds)
        expect("necessity_ray_values", nec.eq6_holds)
        expect("necessity_liminf", nec.liminf_holds)
        rows += [{"probe": "necessity", **r} for r in nec.rows()]
    rows = [{"probe": "check", **c} for c in checks.items] + rows
    return results, rows


def _vec(v):
    return np.asarray(v, dtype=float).reshape(-1)


def _run_probe(cfg: ExperimentConfig, checks: _Checks):
    p = cfg.probe
    name = p["name"]
    seed, tol = cfg.rng_seed, cfg.tolerances["check"]
    R = cfg.build_regularizer() if cfg.regularizer else None
    dim = (getattr(R, "n", None) or cfg.dimension) if R is not None else None

    if name in ("rotation_path", "chain", "min_n"):
        x, y = _vec(p["x"]), _vec(p["y"])
        n_min = min_n_for_contraction(x, y)
        if name == "min_n":
            theta = build_rotation_path(x, y, max(n_min, 2)).theta
            ratio = float(np.linalg.norm(y) / np.linalg.norm(x))
            lam_n = math.sqrt(lambda_squared(ratio, theta, n_min))
            lam_prev = math.sqrt(lambda_squared(ratio, theta, n_min - 1))
            checks.add("contraction", lam_n <= 1.0 < lam_prev)
            return {"n": n_min, "lambda_n": lam_n, "lambda_n_minus_1": lam_prev}, []
        path = build_rotation_path(x, y, int(p.get("n", n_min)))
        if name == "rotation_path":
            inv = path.invariant_errors()
            checks.at_most("recursion", inv["recursion"], 1e-12)
            checks.at_most("terminal_lambda", inv["terminal_lambda"], 1e-10)
            return {"path": path.to_dict(), "min_n": n_min}, list(path.rows())
        chain = monotone_chain_check(R, path, tol)
        return {"path": path.to_dict(), "chain": chain.to_dict()}, list(chain.rows())

    if name == "sublevel":
        level = float(p.get("level", 1.0))
        sub = sublevel_geometry_probe(R, dim, level, int(p.get("samples", 20_000)), seed,
                                      cfg.tolerances["radius"])
        return {"sublevel": sub.to_dict()}, list(sub.star_violations)

    if name == "span":
        loss = cfg.build_loss()
        kw = {"bounds": tuple(p["bounds"])} if "bounds" in p else {}
        span = representer_span_experiment(R, np.asarray(p["vectors"], dtype=float), loss,
                                           cfg.gamma, seed, **kw)
        return {"span": span.to_dict()}, [{"minimizer": span.minimizer,
                                           "span_distance": span.span_distance}]

    if name == "necessity":
        loss = cfg.build_loss() if cfg.loss else None
        nec = necessity_probe(R, _vec(p["x"]), _vec(p["y"]), cfg.gamma_schedule, loss, tol)
        return {"necessity": nec.to_dict()}, list(nec.rows())

    if name == "characterization":
        eq = characterization_check(R, dim, cfg.trials, seed)
        return {"characterization": eq.to_dict()}, [c for c in eq.to_dict()["checks"]]

    check = {"orthogonal": check_orthogonal_monotonicity, "ray": check_ray_monotonicity,
             "equal_norm": check_equal_norm}[name]
    records: list = []
    rep = check(R, dim, cfg.trials, seed, tol, records)
    return {"check": rep.to_dict()}, records


MODES = {"gram": _run_gram, "solve": _run_solve, "verify": _run_verify, "probe": _run_probe}


def run(cfg: ExperimentConfig) -> RunReport:
    """Execute one experiment; never raises for solver or check failures."""
    start = time.perf_counter()
    checks = _Checks()
    report: dict[str, Any] = {
        "tool": {"name": "rkhsreg", "version": __version__},
        "mode": cfg.mode,
        "rng_seed": cfg.rng_seed,
        "config": cfg.to_dict(),
    }
    rows: list = []
    try:
        results, rows = MODES[cfg.mode](cfg, checks)
        report["results"] = results
        report["status"] = "ok" if all(c["passed"] for c in checks.items) else "check_failure"
    except NumericalError as exc:
        report["status"] = "numerical_failure"
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "report": exc.report}
    except (ValueError, TypeError, KeyError) as exc:
        report["status"] = "config_error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["checks"] = checks.items
    report["timing"] = {"seconds": time.perf_counter() - start}
    return RunReport(to_jsonable(report), rows)


def write_outputs(result: RunReport, json_path: Optional[str], csv_path: Optional[str]) -> None:
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(dumps_report(result.report))
    if csv_path:
        write_csv(result.rows, csv_path)
