"""Scenario-driven batch runner and fuzz mode.

Scenario files are JSON (schema version 1). Reports are JSON with a stable
key order and are byte-identical for a fixed seed regardless of job count.
Exit codes: 0 all checks hold, 1 at least one check fails, 2 configuration or
schema error.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import immersion_lab
from .ambient import standard_structure, validate_structure
from .errors import ContactCurvError
from .inequalities import (
    _report,
    identity_tau_check,
    kricci_rhs,
    kricci_suite,
    ricci_suite,
    scalar_suite,
)
from .invariants import SearchConfig, induced_curvature, theta_k
from .subpoint import (
    Classification,
    build_point,
    classify,
    mean_curvature,
    phi_split,
    sigma_norms,
)
from .util import trial_rng, unit_directions

SCHEMA_VERSION = 1
VALID_CHECKS = ("structure", "identity_tau", "scalar", "ricci", "k_ricci", "gauss_oracle", "classify")


class SchemaError(ContactCurvError):
    pass


def _require(cond, message):
    if not cond:
        raise SchemaError(message)


def load_scenario(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    _require(isinstance(data, dict), "scenario must be a JSON object")
    _require(data.get("schema") == SCHEMA_VERSION, f"field 'schema' must be {SCHEMA_VERSION}")

    amb = data.get("ambient")
    _require(isinstance(amb, dict), "field 'ambient' must be an object")
    for key in ("m", "c", "f", "f_prime"):
        _require(key in amb, f"ambient.{key} is required")
    _require(int(amb["m"]) >= 2, "ambient.m must be >= 2")

    sub = data.get("submanifold")
    _require(isinstance(sub, dict), "field 'submanifold' must be an object")
    kind = sub.get("kind")
    _require(kind in ("algebraic_point", "immersion"), "submanifold.kind must be 'algebraic_point' or 'immersion'")
    if kind == "algebraic_point":
        _require("frame" in sub and "sigma" in sub, "algebraic_point needs 'frame' and 'sigma'")
    else:
        _require("name" in sub and "chart_point" in sub, "immersion needs 'name' and 'chart_point'")
        _require(sub["name"] in immersion_lab.CATALOG, f"unknown immersion {sub.get('name')!r}")

    checks = data.get("checks", list(VALID_CHECKS))
    _require(isinstance(checks, list) and checks, "field 'checks' must be a non-empty list")
    for chk in checks:
        _require(chk in VALID_CHECKS, f"unknown check {chk!r}")

    ks = data.get("k", [2])
    _require(isinstance(ks, list) and all(isinstance(k, int) for k in ks), "field 'k' must be a list of integers")
    return data


def _build_from_scenario(data):
    amb = data["ambient"]
    S = standard_structure(int(amb["m"]), float(amb["c"]), float(amb["f"]), float(amb["f_prime"]))
    sub = data["submanifold"]
    if sub["kind"] == "algebraic_point":
        frame = np.asarray(sub["frame"], dtype=float)
        sigma = np.asarray(sub["sigma"], dtype=float)
        p = build_point(S, frame, sigma)
        spec = None
    else:
        entry = immersion_lab.CATALOG[sub["name"]]
        spec = entry["build"](**sub.get("params", {}))
        p = immersion_lab.point_from_immersion(S, spec, np.asarray(sub["chart_point"], dtype=float))
    return S, p, spec


def run_scenario(path, out=None, seed=None, jobs=1):
    """Execute a scenario file; returns (report dict, exit code)."""
    try:
        data = load_scenario(path)
        S, p, spec = _build_from_scenario(data)
        for k in data.get("k", [2]):
            if not 2 <= k <= p.n:
                raise SchemaError(f"k out of range [2,{p.n}]: {k}")
    except (ContactCurvError, OSError) as exc:
        report = {"schema": SCHEMA_VERSION, "error": f"{type(exc).__name__}: {exc}"}
        _emit(report, out)
        return report, 2

    checks = data.get("checks", list(VALID_CHECKS))
    report = {
        "schema": SCHEMA_VERSION,
        "scenario": data,
        "checks": [],
        "verdict": True,
    }
    try:
        cls = classify(S, p)
        report["classification"] = {
            "kind": cls.kind,
            "slant_angle": cls.slant_angle,
            "h": cls.h,
            "dim_d_perp": cls.dim_d_perp,
        }
        IC = induced_curvature(S, p)
        for chk in checks:
            report["checks"].extend(_run_check(chk, data, S, p, spec, cls, IC))
    except ContactCurvError as exc:
        report = {"schema": SCHEMA_VERSION, "error": f"{type(exc).__name__}: {exc}"}
        _emit(report, out)
        return report, 2

    report["verdict"] = all(entry.get("holds", True) for entry in report["checks"])
    _emit(report, out)
    return report, 0 if report["verdict"] else 1


def _run_check(chk, data, S, p, spec, cls, IC):
    tol = data.get("tolerances", {})
    if chk == "structure":
        violations = validate_structure(S)
        return [
            {
                "check": "structure",
                "holds": not violations,
                "violations": [{"identity": name, "residual": res} for name, res in violations],
            }
        ]
    if chk == "classify":
        return [
            {
                "check": "classify",
                "holds": True,
                "kind": cls.kind,
                "slant_angle": cls.slant_angle,
                "h": cls.h,
                "dim_d_perp": cls.dim_d_perp,
            }
        ]
    if chk == "identity_tau":
        residual = identity_tau_check(S, p, IC)
        lhs, rhs = sigma_norms(p)
        scale = 1.0 + abs(lhs)
        ok = abs(residual) < tol.get("identity", 1e-9) * (1.0 + abs(IC.tau) + lhs)
        ok2 = abs(lhs - rhs) < tol.get("identity", 1e-9) * scale
        return [
            {"check": "identity_tau", "holds": bool(ok), "residual": residual},
            {"check": "identity_sigma_decomposition", "holds": bool(ok2), "residual": lhs - rhs},
        ]
    if chk == "scalar":
        return [{"check": "scalar", **rep.to_dict()} for rep in scalar_suite(S, p, IC, cls)]
    if chk == "ricci":
        dirs = data.get("directions")
        if dirs is None:
            xs = list(np.eye(p.n))
        else:
            xs = [np.asarray(v, dtype=float) for v in dirs]
        out = []
        for x in xs:
            for rep in ricci_suite(S, p, IC, x, cls):
                entry = rep.to_dict()
                entry["direction"] = [float(v) for v in x]
                out.append({"check": "ricci", **entry})
        return out
    if chk == "k_ricci":
        out = []
        search = SearchConfig(**data.get("search", {}))
        for k in data.get("k", [2]):
            result = theta_k(IC, k, search)
            for rep in kricci_suite(S, p, IC, k, result, cls):
                entry = rep.to_dict()
                entry["k"] = k
                entry["theta_k"] = result.value
                entry["theta_k_heuristic"] = result.heuristic_outer
                entry["theta_k_restarts"] = result.restarts_used
                out.append({"check": "k_ricci", **entry})
        return out
    if chk == "gauss_oracle":
        if spec is None:
            raise SchemaError("gauss_oracle requires an immersion submanifold")
        u = np.asarray(data["submanifold"]["chart_point"], dtype=float)
        residual, _, _ = immersion_lab.gauss_residual(S, spec, u)
        bound = tol.get("gauss_oracle", 5e-4)
        return [{"check": "gauss_oracle", "holds": bool(residual < bound), "residual": residual}]
    raise SchemaError(f"unknown check {chk!r}")


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# fuzz mode


def _fuzz_trial(args):
    """One fuzz draw; returns per-bound slacks and identity residuals."""
    n, m, seed, trial, sigma_scale = args
    rng = trial_rng(seed, trial)
    S = standard_structure(
        m,
        c=rng.uniform(-10, 10),
        f=rng.uniform(-10, 10),
        f_prime=rng.uniform(-10, 10),
    )
    d = S.dim
    raw = rng.standard_normal((n, d))
    raw[0] = S.xi
    sigma = rng.uniform(-10, 10, size=(d - n, n, n)) * sigma_scale
    sigma = 0.5 * (sigma + sigma.transpose(0, 2, 1))
    p = build_point(S, raw, sigma)
    IC = induced_curvature(S, p)

    lhs, rhs = sigma_norms(p)
    result = {
        "identity_tau": identity_tau_check(S, p, IC) / (1.0 + abs(IC.tau) + lhs),
        "identity_sigma": (lhs - rhs) / (1.0 + lhs),
        "slacks": {},
    }

    result["equality"] = {}

    def record(rep):
        scale = 1.0 + abs(rep.lhs) + abs(rep.rhs)
        prev = result["slacks"].get(rep.name)
        val = rep.slack / scale
        result["slacks"][rep.name] = val if prev is None else min(prev, val)
        result["equality"][rep.name] = result["equality"].get(rep.name, True) and rep.equality

    general = Classification(kind="generic")
    for rep in scalar_suite(S, p, IC, general):
        record(rep)
    for x in unit_directions(n, 8):
        for rep in ricci_suite(S, p, IC, x, general):
            record(rep)
    # tau-based k-Ricci bound only: the theta_k search is too heavy for bulk fuzz
    _, h2 = mean_curvature(p)
    base = 2.0 * IC.tau / (n * (n - 1))
    record(_report("kricci", h2, kricci_rhs(S, n, base, phi_split(S, p).norm_P_sq), ">="))
    return result


def fuzz(n, m, trials, seed, jobs=1, sigma_scale=1.0):
    """Random algebraic points; returns summary dict and exit code."""
    if not 2 <= n <= 2 * m + 1:
        raise SchemaError(f"need 2 <= n <= 2m+1, got n={n}, m={m}")
    if trials < 1:
        raise SchemaError("trials must be >= 1")
    args = [(n, m, seed, t, sigma_scale) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fuzz_trial, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [_fuzz_trial(a) for a in args]

    max_identity_tau = max(abs(r["identity_tau"]) for r in results)
    max_identity_sigma = max(abs(r["identity_sigma"]) for r in results)
    min_slacks = {}
    equality_all = {}
    for r in results:
        for name, val in r["slacks"].items():
            prev = min_slacks.get(name)
            min_slacks[name] = val if prev is None else min(prev, val)
        for name, eq in r["equality"].items():
            equality_all[name] = equality_all.get(name, True) and eq

    violations = sum(1 for v in min_slacks.values() if v < -1e-9)
    if max_identity_tau > 1e-9 or max_identity_sigma > 1e-9:
        violations += 1
    summary = {
        "schema": SCHEMA_VERSION,
        "mode": "fuzz",
        "n": n,
        "m": m,
        "trials": trials,
        "seed": seed,
        "max_identity_residual_tau": max_identity_tau,
        "max_identity_residual_sigma": max_identity_sigma,
        "sigma_scale": sigma_scale,
        "min_normalized_slack": {k: min_slacks[k] for k in sorted(min_slacks)},
        "equality_all_trials": {k: equality_all[k] for k in sorted(equality_all)},
        "violations": violations,
    }
    return summary, 0 if violations == 0 else 1


def catalog_listing():
    return {
        name: {"params": entry["params"]} for name, entry in sorted(immersion_lab.CATALOG.items())
    }


def main(argv=None):
    parser = argparse.ArgumentParser(prog="contactcurv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a scenario file")
    p_verify.add_argument("--scenario", required=True)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--jobs", type=int, default=1)

    p_fuzz = sub.add_parser("fuzz", help="random algebraic points against the bounds")
    p_fuzz.add_argument("--n", type=int, required=True)
    p_fuzz.add_argument("--m", type=int, required=True)
    p_fuzz.add_argument("--trials", type=int, required=True)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--jobs", type=int, default=1)
    p_fuzz.add_argument("--sigma-scale", type=float, default=1.0)
    p_fuzz.add_argument("--out", default=None)

    sub.add_parser("catalog", help="list catalog immersions")

    args = parser.parse_args(argv)
    if args.command == "verify":
        _, code = run_scenario(args.scenario, out=args.out, seed=args.seed, jobs=args.jobs)
        return code
    if args.command == "fuzz":
        try:
            summary, code = fuzz(
                args.n, args.m, args.trials, args.seed, jobs=args.jobs, sigma_scale=args.sigma_scale
            )
        except SchemaError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
        _emit(summary, args.out)
        return code
    if args.command == "catalog":
        _emit({"schema": SCHEMA_VERSION, "catalog": catalog_listing()}, None)
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
