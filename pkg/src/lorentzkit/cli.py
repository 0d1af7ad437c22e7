"""Scenario runner: ``lorentzkit run scenario.json`` and ``lorentzkit list-builtins``.

Scenarios are JSON files naming an algebra, a space, an action or a warped
product plus an ordered list of checks. Reports are JSON with sorted keys so
identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.linalg import expm

from . import __version__
from .errors import LorentzKitError, ParseError, ShapeError, UnknownCheck
from .geometry import (
    constant_curvature_estimate,
    curvature_path_agreement,
    de_sitter,
    geodesic_invariants,
    sample_rng,
    space_from_descriptor,
)
from .group_action import (
    action_from_descriptor,
    candidate_points,
    equivariance_residual,
    isotropy_irreducibility,
    nonproper_witness_search,
    orbit_causal_type,
    orbit_causal_type_ambient,
    rank_identity_residual,
    shipped_actions,
    witness_residuals,
)
from .lie_algebra import (
    LieAlgebra,
    MatrixRep,
    builtin,
    builtin_names,
    format_covector,
    has_sl2r_factor,
    ideal_residuals,
    invariant_antisym_bilinear_maps,
    invariant_linear_maps,
    is_semisimple,
    killing_form,
    root_decomposition_residuals,
    root_space_decomposition,
    simple_ideals,
)
from .pseudo_linalg import Subspace
from .warped_product import (
    leaf_curvature_ratio,
    polar_metric_samples,
    verify_block_structure,
    verify_polar_pullback,
    warped_from_descriptor,
    warped_metric_samples,
)
from .weight_analysis import negative_weight_fact, sym2_weight_decomposition, weight_residuals

DEFAULT_TOLERANCES = {
    "block": 1e-6,
    "curvature": 1e-5,
    "equivariance": 1e-7,
    "flat_curvature": 1e-9,
    "geodesic": 1e-8,
    "nilpotent": 1e-8,
    "path_agreement": 1e-5,
    "pullback": 1e-6,
    "ratio": 1e-6,
    "residual": 1e-8,
    "witness": 1e-9,
}

SCENARIO_KEYS = {"name", "description", "seed", "algebra", "cartan", "space", "action",
                 "warped", "checks", "tolerances"}

SPACE_TYPES = {
    "minkowski": "R^{1,n}; params n",
    "de_sitter": "q = r^2 in R^{1,n}; params n, radius",
    "anti_de_sitter": "q = -r^2 in R^{2,n-1}; params n, radius",
    "hyperbolic": "upper sheet q = -1 in R^{1,n}; params n",
    "quadric": "q = level for a given form; params form | n, level | radius, sheet",
}


# ---------------------------------------------------------------- loading

@dataclass
class Scenario:
    name: str
    data: dict
    checks: list
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    sha256: str = ""


def _position(text: str, needle: str) -> tuple[int, int]:
    at = text.find(needle)
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    return line, at - (text.rfind("\n", 0, at) + 1) + 1


def parse_scenario(raw: bytes | str) -> Scenario:
    if isinstance(raw, bytes):
        digest = hashlib.sha256(raw).hexdigest()
        text = raw.decode("utf-8")
    else:
        text = raw
        digest = hashlib.sha256(raw.encode("utf-8")).hexdigest()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object", 1, 1)
    for key in data:
        if key not in SCENARIO_KEYS:
            raise ParseError(f"unknown scenario field {key!r}", *_position(text, f'"{key}"'))
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        raise ParseError("seed must be an unsigned 64-bit integer", *_position(text, '"seed"'))
    checks = data.get("checks", [])
    if not isinstance(checks, list):
        raise ParseError("checks must be a list", *_position(text, '"checks"'))
    parsed = []
    for entry in checks:
        if isinstance(entry, str):
            entry = {"name": entry}
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise ParseError("each check is a name or an object with a name", *_position(text, '"checks"'))
        if entry["name"] not in CHECKS:
            raise UnknownCheck(entry["name"])
        parsed.append(dict(entry))
    tol = data.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ParseError("tolerances must be an object", *_position(text, '"tolerances"'))
    for key, val in tol.items():
        if key not in DEFAULT_TOLERANCES:
            raise ParseError(f"unknown tolerance {key!r}", *_position(text, f'"{key}"'))
        if not isinstance(val, (int, float)) or isinstance(val, bool) or val < 0:
            raise ParseError(f"tolerance {key!r} must be a non-negative number", *_position(text, f'"{key}"'))
    return Scenario(str(data.get("name", "unnamed")), data, parsed, seed, dict(tol), digest)


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_bytes())


def suite_paths() -> list[Path]:
    """Scenario files shipped with the package, sorted by name."""
    root = resources.files("lorentzkit") / "scenarios"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))


# ---------------------------------------------------------------- context

class Context:
    """Lazily built objects named by a scenario."""

    def __init__(self, data: dict):
        self.data = data
        self._cache: dict = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _builtin_name(self):
        alg = self.data.get("algebra")
        if alg is None and isinstance(self.data.get("action"), dict):
            alg = self.data["action"].get("algebra")
        return alg

    @property
    def algebra(self) -> LieAlgebra:
        def build():
            alg = self._builtin_name()
            if alg is None:
                raise ShapeError("scenario names no algebra")
            if isinstance(alg, str):
                return builtin(alg).algebra
            return LieAlgebra(alg["structure_constants"], labels=alg.get("labels"))
        return self._get("algebra", build)

    @property
    def standard(self) -> MatrixRep:
        def build():
            alg = self._builtin_name()
            if isinstance(alg, str):
                return builtin(alg).standard
            return self.action.rep
        return self._get("standard", build)

    @property
    def cartan(self) -> Subspace:
        def build():
            if "cartan" in self.data:
                return Subspace(self.data["cartan"], ambient_dim=self.algebra.dim)
            alg = self._builtin_name()
            if not isinstance(alg, str):
                raise ShapeError("custom algebras need an explicit cartan basis")
            return builtin(alg).cartan
        return self._get("cartan", build)

    @property
    def rootdec(self):
        return self._get("rootdec", lambda: root_space_decomposition(self.algebra, self.cartan))

    @property
    def space(self):
        def build():
            if "space" in self.data:
                return space_from_descriptor(self.data["space"])
            if "action" in self.data:
                return self.action.space
            raise ShapeError("scenario names no space")
        return self._get("space", build)

    @property
    def action(self):
        def build():
            if "action" not in self.data:
                raise ShapeError("scenario names no action")
            return action_from_descriptor(self.data["action"])
        return self._get("action", build)

    @property
    def warped(self):
        def build():
            if "warped" not in self.data:
                raise ShapeError("scenario names no warped product")
            return warped_from_descriptor(self.data["warped"])
        return self._get("warped", build)


# ----------------------------------------------------------------- checks

def _result(passed, measured=None, max_error=None, witnesses=None) -> dict:
    return {"passed": bool(passed), "measured": measured or {},
            "max_error": max_error, "witnesses": witnesses or []}


def _expect(p: dict, key: str, value) -> bool:
    return key not in p or p[key] == value


def check_killing_form(ctx, p, tol, seed):
    sig = list(killing_form(ctx.algebra).signature)
    return _result(_expect(p, "signature", sig), {"signature": sig})


def check_semisimple(ctx, p, tol, seed):
    val = is_semisimple(ctx.algebra)
    return _result(_expect(p, "expected", val), {"semisimple": val})


def check_simple_ideals(ctx, p, tol, seed):
    ideals = simple_ideals(ctx.algebra, seed=seed % (2 ** 32))
    res = ideal_residuals(ctx.algebra, ideals)
    worst = max((float(v) for v in res.values() if isinstance(v, float)), default=0.0)
    dims = sorted(s.dim for s in ideals)
    ok = worst <= tol["residual"] and _expect(p, "dims", dims)
    return _result(ok, {"dims": dims, **res}, worst)


def check_sl2r_factor(ctx, p, tol, seed):
    val = has_sl2r_factor(ctx.algebra)
    return _result(_expect(p, "expected", val), {"has_sl2r_factor": val})


def check_root_decomposition(ctx, p, tol, seed):
    rd = ctx.rootdec
    res = root_decomposition_residuals(rd)
    worst = max(res["eigen_residual"], res["grading_residual"], res["killing_orthogonality_residual"])
    roots = [format_covector(r) for r in rd.roots]
    dims = [s.dim for s in rd.spaces]
    ok = (worst <= tol["residual"] and res["root_vectors_nilpotent"] and res["roots_paired"]
          and res["dim_total"] == ctx.algebra.dim and _expect(p, "dims", dims))
    measured = {"roots": roots, "root_dims": dims, "zero_dim": rd.zero_space.dim, "rank": rd.rank, **res}
    return _result(ok, measured, worst)


def check_sym2_weights(ctx, p, tol, seed):
    wd = sym2_weight_decomposition(ctx.rootdec)
    res = weight_residuals(wd, seed=seed % (2 ** 32))
    worst = max(res["orthogonality_residual"], res["covariance_residual"])
    ok = worst <= tol["residual"] and res["dim_total"] == res["dim_expected"] and _expect(p, "dims", wd.dims())
    measured = {"weights": [format_covector(w) for w in wd.weights], "dims": wd.dims(), **res}
    return _result(ok, measured, worst)


def check_negative_weight_fact(ctx, p, tol, seed):
    sl2 = has_sl2r_factor(ctx.algebra)
    fact = negative_weight_fact(ctx.rootdec, sl2)
    measured = {"has_sl2r_factor": sl2, **fact}
    return _result(fact["consistent"], measured, witnesses=fact["counterexamples"])


def check_invariant_maps(ctx, p, tol, seed):
    kind = p.get("kind", "linear_to_trivial")
    rep = ctx.standard
    if kind == "linear_to_trivial":
        dim = len(invariant_linear_maps(rep, MatrixRep.trivial(rep.algebra)))
    elif kind == "identity":
        dim = len(invariant_linear_maps(rep, rep))
    elif kind == "antisym":
        dim = len(invariant_antisym_bilinear_maps(rep, int(p.get("target_dim", 1))))
    else:
        raise ShapeError(f"unknown invariant map kind {kind!r}")
    return _result(_expect(p, "expected_dim", dim), {"kind": kind, "dim": dim})


def check_constant_curvature(ctx, p, tol, seed):
    space = ctx.space
    samples = int(p.get("samples", 200))
    mean, dev = constant_curvature_estimate(space, samples, seed, p.get("method", "gauss"))
    expected = float(p.get("expected", space.curvature))
    t = tol["flat_curvature"] if expected == 0 else tol["curvature"]
    err = max(abs(mean - expected), dev)
    return _result(err <= t, {"kappa": mean, "max_dev": dev, "expected": expected, "samples": samples}, err)


def check_curvature_paths(ctx, p, tol, seed):
    worst = curvature_path_agreement(ctx.space, int(p.get("samples", 20)), seed)
    return _result(worst <= tol["path_agreement"], {"gauss_vs_fd": worst}, worst)


def check_geodesics(ctx, p, tol, seed):
    res = geodesic_invariants(ctx.space, int(p.get("samples", 20)), seed, float(p.get("t_max", 3.0)))
    worst = max(res.values())
    return _result(worst <= tol["geodesic"], res, worst)


def check_polar_pullback(ctx, p, tol, seed):
    n = int(p.get("n", 2))
    warp = p.get("warp", "r^2")
    err = verify_polar_pullback(n, int(p.get("samples", 100)), seed, warp=warp, radii=p.get("radii"))
    return _result(err <= tol["pullback"], {"n": n, "warp": warp, "max_error": err}, err)


def check_leaf_curvature(ctx, p, tol, seed):
    l1, l2 = p.get("l1", 1.0), p.get("l2", 2.0)
    k1, k2, err = leaf_curvature_ratio(ctx.warped, l1, l2, int(p.get("samples", 50)), seed)
    ok = err <= tol["ratio"]
    if "expected" in p:
        e1, e2 = p["expected"]
        ok = ok and abs(k1 - e1) <= tol["curvature"] and abs(k2 - e2) <= tol["curvature"]
    return _result(ok, {"K1": k1, "K2": k2, "ratio_error": err}, err)


def check_block_structure(ctx, p, tol, seed):
    source = p.get("source", "polar")
    rng = sample_rng(seed, 0)
    if source == "polar":
        n = int(p.get("n", 2))
        ds = de_sitter(n, 1.0)
        us = [ds.sample_point(sample_rng(seed, 1 + i)) for i in range(int(p.get("fiber_samples", 3)))]
        rs = p.get("radii", [0.5, 1.0, 2.0, 3.0])
        samples = polar_metric_samples(n, rs, us)
        split = (1, n)
    else:
        wp = ctx.warped
        ls = [np.abs(rng.standard_normal(wp.k)) + 0.5 for _ in range(3)]
        ns = [wp.fiber.sample_point(sample_rng(seed, 1 + i)) for i in range(3)]
        samples = warped_metric_samples(wp, ls, ns)
        split = (wp.k, wp.fiber.dim)
    rep = verify_block_structure(samples, split, tol["block"])
    worst = max(rep[k]["worst"] for k in ("off_block_zero", "h_independent_of_n",
                                          "fiber_blocks_proportional", "warp_factor_independent_of_n"))
    offenders = [dict(rep[k]["offender"], condition=k) for k in
                 ("off_block_zero", "h_independent_of_n", "fiber_blocks_proportional",
                  "warp_factor_independent_of_n") if not rep[k]["pass"] and rep[k]["offender"]]
    return _result(rep["pass"], rep, worst, offenders)


def check_gauss_rank(ctx, p, tol, seed):
    a = ctx.action
    bad = []
    n = int(p.get("samples", 100))
    for i in range(n):
        x = a.space.sample_point(sample_rng(seed, i))
        r = rank_identity_residual(a, x)
        if r:
            bad.append({"x": x.tolist(), "defect": r})
    return _result(not bad, {"samples": n, "violations": len(bad)}, float(len(bad)), bad[:3])


def check_equivariance(ctx, p, tol, seed):
    a = ctx.action
    worst, offender = 0.0, None
    n = int(p.get("samples", 50))
    for i in range(n):
        rng = sample_rng(seed, i)
        x = a.space.sample_point(rng)
        k = int(rng.integers(a.algebra.dim))
        s = float(rng.uniform(-2.0, 2.0))
        r = equivariance_residual(a, expm(s * a.rep.matrices[k]), x)
        if r > worst:
            worst, offender = r, {"x": x.tolist(), "generator": a.algebra.labels[k], "s": s}
    return _result(worst <= tol["equivariance"], {"samples": n, "max_residual": worst}, worst,
                   [offender] if worst > tol["equivariance"] else [])


def check_orbit_types(ctx, p, tol, seed):
    a = ctx.action
    pts = p.get("points") or [x.tolist() for x in candidate_points(a.space, 0, seed)]
    types = [orbit_causal_type(a, x) for x in pts]
    ambient = [orbit_causal_type_ambient(a, x) for x in pts]
    ok = types == ambient and _expect(p, "expected", types)
    bad = [{"x": list(map(float, x)), "gauss": t, "ambient": s} for x, t, s in zip(pts, types, ambient) if t != s]
    return _result(ok, {"points": [list(map(float, x)) for x in pts], "types": types}, witnesses=bad)


def check_nonproper_search(ctx, p, tol, seed):
    a = ctx.action
    cands = p.get("candidates")
    if cands is None:
        cands = candidate_points(a.space, int(p.get("n_random", 64)), seed)
    w = nonproper_witness_search(a, ctx.rootdec, cands)
    measured = {"candidates": len(cands), "found": w is not None}
    ok = True
    wits = []
    err = None
    if w is not None:
        res = witness_residuals(a, w.x, w.X)
        err = res["fixes_point"]
        ok = res["fixes_point"] <= tol["witness"] and res["ad_power_max"] <= tol["nilpotent"]
        measured.update(certificate=w.certificate, residuals=res)
        wits = [{"x": w.x.tolist(), "X": w.X.tolist()}]
    expect = p.get("expect")
    if expect is not None:
        ok = ok and (expect == "witness") == (w is not None)
    return _result(ok, measured, err, wits)


def check_isotropy_irreducible(ctx, p, tol, seed):
    a = ctx.action
    x = p["point"]
    val = isotropy_irreducibility(a, x, seed=seed % (2 ** 32))
    return _result(_expect(p, "expected", val), {"point": list(map(float, x)), "irreducible": val})


CHECKS = {
    "killing_form": (check_killing_form, "Killing form signature; params: signature"),
    "semisimple": (check_semisimple, "nondegenerate Killing form; params: expected"),
    "simple_ideals": (check_simple_ideals, "simple ideal dimensions and residuals; params: dims"),
    "sl2r_factor": (check_sl2r_factor, "detect an sl(2,R) ideal; params: expected"),
    "root_decomposition": (check_root_decomposition, "roots, root space dims, grading residuals; params: dims"),
    "sym2_weights": (check_sym2_weights, "weight blocks of symmetric forms; params: dims"),
    "negative_weight_fact": (check_negative_weight_fact,
                             "dim of negative root sum over all faces vs sl(2,R) factor"),
    "invariant_maps": (check_invariant_maps,
                       "intertwiner dimension; params: kind (linear_to_trivial|identity|antisym), "
                       "target_dim, expected_dim"),
    "constant_curvature": (check_constant_curvature, "sectional curvature spread; params: samples, method, expected"),
    "curvature_paths": (check_curvature_paths, "Gauss equation vs finite-difference chart; params: samples"),
    "geodesics": (check_geodesics, "closed-form geodesic drift; params: samples, t_max"),
    "polar_pullback": (check_polar_pullback, "Minkowski polar metric vs warp; params: n, samples, warp, radii"),
    "leaf_curvature": (check_leaf_curvature, "fiber leaf curvatures; params: l1, l2, samples, expected"),
    "block_structure": (check_block_structure,
                        "warped block shape of sampled metrics; params: source (polar|warped), n, radii"),
    "gauss_rank": (check_gauss_rank, "rank of Gauss form plus stabilizer dim; params: samples"),
    "equivariance": (check_equivariance, "Gauss map equivariance under exp(s e_i); params: samples"),
    "orbit_types": (check_orbit_types, "orbit causal types; params: points, expected"),
    "nonproper_search": (check_nonproper_search,
                         "nilpotent stabilizer witness; params: candidates, n_random, expect (witness|none)"),
    "isotropy_irreducible": (check_isotropy_irreducible, "isotropy irreducibility; params: point, expected"),
}


# ------------------------------------------------------------------ running

def check_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1, dtype=np.uint64)[0])


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if v != v or v in (float("inf"), float("-inf")):
            return str(v)
        return v
    return obj


def run_check(data: dict, spec: dict, index: int, seed: int, tolerances: dict,
              timings: bool = False, ctx: Context | None = None) -> dict:
    ctx = ctx or Context(data)
    fn = CHECKS[spec["name"]][0]
    params = {k: v for k, v in spec.items() if k != "name"}
    s = check_seed(seed, index)
    start = time.perf_counter()
    try:
        out = fn(ctx, params, tolerances, s)
        entry = {"name": spec["name"], "status": "pass" if out["passed"] else "fail",
                 "measured": out["measured"], "max_error": out["max_error"],
                 "witnesses": out["witnesses"]}
    except Exception as exc:  # a failing check never aborts the run
        entry = {"name": spec["name"], "status": "error", "measured": {},
                 "max_error": None, "witnesses": [], "error": f"{type(exc).__name__}: {exc}"}
    entry["params"] = params
    entry["seed"] = s
    entry["runtime_ms"] = round((time.perf_counter() - start) * 1000, 3) if timings else None
    return _clean(entry)


def _run_check_star(args):
    return run_check(*args)


def run_scenario(scenario, seed: int | None = None, tolerances: dict | None = None,
                 parallel: bool = False, timings: bool = False) -> dict:
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    seed = scenario.seed if seed is None else int(seed)
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(scenario.tolerances)
    tol.update(tolerances or {})
    jobs = [(scenario.data, spec, i, seed, tol, timings) for i, spec in enumerate(scenario.checks)]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_run_check_star, jobs))
    else:
        ctx = Context(scenario.data)
        results = [run_check(*job, ctx=ctx) for job in jobs]
    counts = {k: sum(r["status"] == k for r in results) for k in ("pass", "fail", "error")}
    status = "error" if counts["error"] else "fail" if counts["fail"] else "pass"
    return _clean({
        "scenario": scenario.name,
        "scenario_sha256": scenario.sha256,
        "seed": seed,
        "tolerances": tol,
        "checks": results,
        "summary": counts,
        "status": status,
        "version": __version__,
    })


def exit_code(report: dict) -> int:
    return {"pass": 0, "fail": 1}.get(report["status"], 2)


def _short(v, width: int = 60) -> str:
    s = json.dumps(v, sort_keys=True)
    return s if len(s) <= width else s[: width - 3] + "..."


def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")
    lines = [f"scenario {report['scenario']}  seed {report['seed']}  status {report['status']}",
             f"sha256 {report['scenario_sha256']}",
             f"{'check':<24} {'status':<6} {'max_error':>12}"]
    for c in report["checks"]:
        me = c["max_error"]
        me = f"{me:.3e}" if isinstance(me, float) else ("-" if me is None else str(me))
        lines.append(f"{c['name']:<24} {c['status']:<6} {me:>12}")
        if c["status"] == "error":
            lines.append(f"    {c['error']}")
        elif c["status"] == "fail":
            for k in sorted(c["measured"]):
                lines.append(f"    {k} = {_short(c['measured'][k])}")
            for w in c["witnesses"]:
                lines.append(f"    worst offender {_short(w)}")
    s = report["summary"]
    lines.append(f"{s['pass']} pass, {s['fail']} fail, {s['error']} error")
    return ("\n".join(lines) + "\n").encode("utf-8")


def list_builtins() -> dict:
    return {
        "algebras": builtin_names(),
        "spaces": SPACE_TYPES,
        "actions": sorted(shipped_actions()),
        "checks": {name: doc for name, (_, doc) in sorted(CHECKS.items())},
        "tolerances": DEFAULT_TOLERANCES,
    }


def _format_builtins(cat: dict) -> str:
    out = ["algebras:"]
    out += [f"  {n}" for n in cat["algebras"]]
    out.append("spaces:")
    out += [f"  {k:<16} {v}" for k, v in cat["spaces"].items()]
    out.append("actions:")
    out += [f"  {n}" for n in cat["actions"]]
    out.append("checks:")
    out += [f"  {k:<22} {v}" for k, v in cat["checks"].items()]
    out.append("tolerances:")
    out += [f"  {k:<16} {v:g}" for k, v in cat["tolerances"].items()]
    return "\n".join(out) + "\n"


def _tolerance_arg(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected key=value with key in {sorted(DEFAULT_TOLERANCES)}")
    try:
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {val!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lorentzkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    run.add_argument("--format", choices=("json", "text"), default="json")
    run.add_argument("--seed", type=int)
    run.add_argument("--parallel", action="store_true")
    run.add_argument("--tolerance", type=_tolerance_arg, action="append", default=[])
    run.add_argument("--timings", action="store_true", help="record runtime_ms (reports stop being byte-stable)")
    run.add_argument("-o", "--output")
    lb = sub.add_parser("list-builtins", help="show algebras, spaces, actions and checks")
    lb.add_argument("--format", choices=("json", "text"), default="text")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-builtins":
        cat = list_builtins()
        text = json.dumps(cat, sort_keys=True, indent=2) + "\n" if args.format == "json" else _format_builtins(cat)
        sys.stdout.write(text)
        return 0
    try:
        scenario = load_scenario(args.scenario)
        report = run_scenario(scenario, seed=args.seed, tolerances=dict(args.tolerance),
                              parallel=args.parallel, timings=args.timings)
    except ParseError as exc:
        print(f"{args.scenario}:{exc.line}:{exc.column}: {exc}", file=sys.stderr)
        return 2
    except (LorentzKitError, OSError) as exc:
        print(f"{args.scenario}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    out = emit_report(report, args.format)
    if args.output:
        Path(args.output).write_bytes(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
