"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on configuration or I/O errors.  Identical configuration and seed give
byte-identical outputs for any ``--jobs`` value.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import functionals as fn
from . import scalar as sc
from . import sharpness as sh
from . import simplex as sx
from .errors import AdmissibilityError, LorentzIsoError
from .hypersurface import (
    DEFAULT_RADIAL_NODES,
    GraphHypersurface,
    RadialProfile,
    as_atoms,
    check_achronal,
)

SCHEMA = 1
IDENTITY_TOL = 1e-10
COMMANDS = ("verify", "sharpness", "simplex", "scalar", "report")


class ConfigError(Exception):
    """Invalid configuration or unreadable input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# configuration

COMMON_KEYS = {"command", "name", "dimensions", "seed", "instances", "tol_atomic", "tol_quad",
               "quadrature_nodes", "out", "jobs"}
COMMAND_KEYS = {
    "verify": {"domain", "profile", "partitions", "exhaustion_steps"},
    "sharpness": {"t_star", "epsilons", "bump", "slope_tolerance"},
    "simplex": {"samples", "patch", "vertices", "induction_draws"},
    "scalar": {"jensen", "minkowski", "improved_constant", "counterexample"},
    "report": set(),
}
NESTED_KEYS = {
    "domain": {"kind", "radius", "weights"},
    "profile": {"family", "value", "values", "slopes", "max_slope"},
    "bump": {"support", "t", "phi"},
    "jensen": {"n_a", "n_p", "a", "p"},
    "minkowski": {"n_grid", "n_values", "upper"},
    "improved_constant": {"n_max"},
    "counterexample": {"j_max"},
}

# sweep sections fill missing entries from the defaults; the others replace them
MERGED_SECTIONS = {"jensen", "minkowski", "improved_constant", "counterexample"}

NAMED_CONFIGS = {
    "default": {"command": "verify"},
    "atomic-two-level": {
        "command": "verify", "dimensions": [2], "domain": {"kind": "atomic", "weights": [1.0, 1.0]},
        "profile": {"family": "values", "values": [1.0, 2.0]},
    },
    "hyperboloid": {
        "command": "verify", "dimensions": [1, 2, 3], "domain": {"kind": "ball", "radius": 1.0},
        "profile": {"family": "constant", "value": 1.0},
    },
}


@dataclass
class RunConfig:
    command: str = "verify"
    name: str = "custom"
    dimensions: list | None = None
    seed: int = 0
    instances: int = 100
    tol_atomic: float = fn.TOL_ATOMIC
    tol_quad: float = fn.TOL_QUAD
    quadrature_nodes: int = DEFAULT_RADIAL_NODES
    out: str | None = None
    jobs: int = 1
    # verify
    domain: dict = field(default_factory=lambda: {"kind": "ball", "radius": None})
    profile: dict = field(default_factory=lambda: {"family": "random"})
    partitions: int = 2
    exhaustion_steps: int = 4
    # sharpness
    t_star: float = sh.DEFAULT_T_STAR
    epsilons: list = field(default_factory=lambda: [float(e) for e in sh.DEFAULT_EPSILONS])
    bump: dict = field(default_factory=lambda: {"support": list(sh.DEFAULT_SUPPORT)})
    slope_tolerance: float = 0.1
    # simplex
    samples: int = 20_000
    patch: float = 1.0
    vertices: list | None = None
    induction_draws: int = 10_000
    # scalar
    jensen: dict = field(default_factory=lambda: {"n_a": 200, "n_p": 200})
    minkowski: dict = field(default_factory=lambda: {"n_grid": 200, "n_values": [1, 2, 3], "upper": 10.0})
    improved_constant: dict = field(default_factory=lambda: {"n_max": 100})
    counterexample: dict = field(default_factory=lambda: {"j_max": 10_000})

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.dimensions is None:
            self.dimensions = [sh.DEFAULT_N] if self.command == "sharpness" else [1, 2, 3]
        dims = self.dimensions if isinstance(self.dimensions, list) else [self.dimensions]
        if not dims or any(not isinstance(d, int) or d < 1 for d in dims):
            raise ConfigError("dimensions must be positive integers")
        self.dimensions = dims
        for name in ("instances", "quadrature_nodes", "jobs", "samples", "partitions",
                     "exhaustion_steps", "induction_draws"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer")
        for name in ("tol_atomic", "tol_quad", "t_star", "slope_tolerance", "patch"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
                raise ConfigError(f"{name} must be a positive number")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        return self


def _check_keys(data: dict, allowed: set, where: str):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def parse_config(data: dict, command: str) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    cmd = data.get("command", command)
    if cmd != command:
        raise ConfigError(f"configuration is for {cmd!r}, not {command!r}")
    _check_keys(data, COMMON_KEYS | COMMAND_KEYS.get(command, set()), "configuration")
    defaults = RunConfig()
    data = dict(data)
    for key, allowed in NESTED_KEYS.items():
        if key in data:
            if not isinstance(data[key], dict):
                raise ConfigError(f"{key} must be an object")
            _check_keys(data[key], allowed, key)
            if key in MERGED_SECTIONS:
                data[key] = {**getattr(defaults, key), **data[key]}
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in data.items() if k in known})


def load_config(path: str | None, command: str) -> RunConfig:
    if path is None:
        return RunConfig(command=command)
    if path in NAMED_CONFIGS and not Path(path).exists():
        data = dict(NAMED_CONFIGS[path], name=path)
        if data["command"] != command:
            raise ConfigError(f"named configuration {path!r} is for {data['command']!r}")
        return parse_config(data, command)
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(data, command)


# ---------------------------------------------------------------------------
# results


@dataclass
class SuiteResult:
    command: str
    config_name: str
    checks: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    def gap(self, name, ref, value, tol, instance=None, **extra):
        self._add(name, ref, "gap", value, tol, value >= -tol, instance, extra)

    def residual(self, name, ref, value, bound, instance=None, **extra):
        self._add(name, ref, "residual", value, bound, abs(value) <= bound, instance, extra)

    def flag(self, name, ref, ok, instance=None, **extra):
        self._add(name, ref, "flag", float(bool(ok)), 0.0, bool(ok), instance, extra)

    def _add(self, name, ref, kind, value, tol, passed, instance, extra):
        rec = {"check": name, "ref": ref, "kind": kind, "value": float(value),
               "tolerance": float(tol), "passed": bool(passed and math.isfinite(value))}
        if instance is not None:
            rec["instance"] = instance
        rec.update(extra)
        self.checks.append(rec)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if not c["passed"]]

    def to_dict(self) -> dict:
        n_fail = len(self.failed)
        return {"schema": SCHEMA, "command": self.command, "config": self.config_name,
                "counts": {"total": len(self.checks), "passed": len(self.checks) - n_fail,
                           "failed": n_fail},
                "all_passed": n_fail == 0, "artifacts": self.artifacts, "checks": self.checks}


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_csv(path: Path, columns: dict):
    names = list(columns)
    cols = [np.asarray(columns[k]) for k in names]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*cols):
            writer.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# verify


def _verify_instance(cfg: RunConfig, n: int, idx: int) -> list:
    """Checks for one instance; returns a list of (kind, name, ref, value, tol) tuples."""
    rng = np.random.default_rng([cfg.seed, n, idx])
    fam = cfg.profile.get("family", "random")
    radius = cfg.domain.get("radius")
    if fam == "random":
        S = fn.random_radial_profile(rng, n, cfg.quadrature_nodes,
                                     cfg.profile.get("max_slope", 0.98))
        if radius is not None:
            S = S.truncated(float(radius))
    elif fam == "random-atomic":
        S = fn.random_atomic(rng, n)
    elif fam == "constant":
        S = RadialProfile.constant(float(cfg.profile.get("value", 1.0)), n,
                                   float(radius or 1.0), cfg.quadrature_nodes)
    elif fam == "values":
        S = GraphHypersurface.atomic(cfg.domain["weights"], cfg.profile["values"],
                                     cfg.profile.get("slopes"), n)
    else:
        raise ConfigError(f"unknown profile family {fam!r}")
    tol = cfg.tol_quad if isinstance(S, RadialProfile) else cfg.tol_atomic
    out = []

    def gap(name, ref, v):
        out.append(("gap", name, ref, float(v), tol))

    ach = check_achronal(S)
    out.append(("flag", "admissibility", "achronal graph: |grad ln f| <= 1", float(ach.admissible), 0.0))
    if not ach.admissible:
        return out
    r = fn.deficits(S)
    for name in ("delta_BE", "delta_CM", "delta_CM_star", "E"):
        gap(name, "deficits are nonnegative", getattr(r, name))
    res, ineq = fn.deficit_relation_check(S, r)
    out.append(("residual", "deficit_identity", "relation between deficits (identity)",
                res / max(1.0, abs(r.delta_CM)), IDENTITY_TOL))
    gap("deficit_inequality", "relation between deficits (inequality)", ineq)
    gap("excess_asymmetry", "A_F <= 2(n+1) E", fn.excess_asymmetry_check(S, r))
    gap("sandwich_lower", "A~_F <= A_F", r.A_F - r.A_F_tilde)
    gap("sandwich_upper", "A_F <= 2 A~_F", 2 * r.A_F_tilde - r.A_F)
    m = as_atoms(S).f.size
    for p in range(cfg.partitions if m > 1 else 0):
        mask = rng.random(m) < 0.5
        mask[rng.integers(m)] = True
        gap(f"be_subset[{p}]", "subset Brunn-Minkowski inequality", fn.be_subset_check(S, np.flatnonzero(mask)))
    _, _, chain = fn.median_split(S)
    for name, v in chain.gaps().items():
        gap(f"median_split.{name}", "median split chain", v)
    out.append(("residual", "median_split.symdiff", "V(C(S) sym-diff B_t0) = |V1 - V2|",
                chain.symdiff_residual, tol * max(1.0, chain.V1 + chain.V2)))
    for name, v in fn.stability_check(S, r).as_dict().items():
        gap(f"stability.{name}", "stability estimate", v)
    if isinstance(S, RadialProfile):
        table = fn.exhaustion_convergence_check(S, cfg.exhaustion_steps)
        out.append(("flag", "exhaustion.converged", "exhaustion by balls", float(table.converged), 0.0))
        out.append(("flag", "exhaustion.monotone", "exhaustion by balls", float(table.volume_monotone), 0.0))
    return out


def _verify_task(args):
    cfg, n, idx = args
    try:
        return n, idx, _verify_instance(cfg, n, idx), None
    except LorentzIsoError as exc:
        return n, idx, [], f"{type(exc).__name__}: {exc}"


def _instance_plan(cfg: RunConfig) -> list:
    count = 1 if cfg.profile.get("family") in ("constant", "values") else cfg.instances
    return [(cfg, n, i) for n in cfg.dimensions for i in range(count)]


def _map(func, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def cmd_verify(cfg: RunConfig) -> SuiteResult:
    fam = cfg.profile.get("family", "random")
    if fam == "values":
        w, v = cfg.domain.get("weights"), cfg.profile.get("values")
        if cfg.domain.get("kind") != "atomic" or not w or not v or len(w) != len(v):
            raise ConfigError("the 'values' profile needs an atomic domain with matching weights")
    suite = SuiteResult("verify", cfg.name)
    results = _map(_verify_task, _instance_plan(cfg), cfg.jobs)
    for n, idx, checks, err in sorted(results, key=lambda t: (t[0], t[1])):
        inst = f"n{n}-{idx}"
        if err is not None:
            suite.flag("instance", "instance construction", False, instance=inst, error=err)
        for kind, name, ref, value, tol in checks:
            if kind == "gap":
                suite.gap(name, ref, value, tol, instance=inst)
            elif kind == "residual":
                suite.residual(name, ref, value, tol, instance=inst)
            else:
                suite.flag(name, ref, value > 0, instance=inst)
    return suite


# ---------------------------------------------------------------------------
# sharpness


def _bump_from_config(spec: dict) -> sh.BumpFunction:
    if "t" in spec or "phi" in spec:
        from scipy.interpolate import CubicSpline

        t = np.asarray(spec.get("t", []), dtype=float)
        y = np.asarray(spec.get("phi", []), dtype=float)
        if t.size < 4 or t.size != y.size or np.any(np.diff(t) <= 0):
            raise ConfigError("sampled bump needs >= 4 increasing t values and matching phi")
        scale = float(np.max(np.abs(y)))
        if not scale > 0 or max(abs(y[0]), abs(y[-1])) > 1e-12 * scale or t[0] <= 0:
            raise ConfigError("sampled bump must be nonzero and vanish at both ends of a support inside (0, t_star)")
        y = y.copy()
        y[0] = y[-1] = 0.0
        spline = CubicSpline(t, y, bc_type="clamped")
        dspline = spline.derivative()
        lo, hi = float(t[0]), float(t[-1])

        def inside(f):
            def g(x):
                x = np.asarray(x, dtype=float)
                return np.where((x > lo) & (x < hi), f(np.clip(x, lo, hi)), 0.0)
            return g

        return sh.BumpFunction(inside(spline), inside(dspline), (lo, hi))
    support = spec.get("support", sh.DEFAULT_SUPPORT)
    if len(support) != 2:
        raise ConfigError("bump support must be [a, b]")
    try:
        return sh.default_bump(tuple(float(x) for x in support))
    except LorentzIsoError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_sharpness(cfg: RunConfig) -> tuple:
    eps = [float(e) for e in cfg.epsilons]
    if len(eps) < 2:
        raise ConfigError("a sharpness ladder needs at least two eps values")
    if any(not e > 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("eps values must be positive and strictly decreasing")
    n = cfg.dimensions[0]
    phi = _bump_from_config(cfg.bump)
    if not phi.support[1] < cfg.t_star:
        raise ConfigError("bump support must lie inside (0, t_star)")
    suite = SuiteResult("sharpness", cfg.name)
    try:
        ladder = sh.run_ladder(phi, n, cfg.t_star, eps, cfg.quadrature_nodes)
    except AdmissibilityError as exc:
        suite.flag("admissibility", "spacelike condition |r'| < r", False,
                   error=str(exc), node=list(exc.node) if exc.node is not None else None)
        return suite, None
    targets = {"delta_BE": 2.0, "delta_CM": 1.0, "delta_CM_star": 2.0}
    for name, slope in ladder.fitted_exponents.items():
        suite.residual(f"slope.{name}", "optimal exponents of the stability estimates",
                       slope - targets[name], cfg.slope_tolerance)
    for i, (e, r) in enumerate(zip(ladder.epsilons, ladder.reports)):
        inst = f"eps{i}"
        for v in r.violations(cfg.tol_quad):
            suite.flag(v, "deficit invariants", False, instance=inst)
        for name, v in fn.stability_check(None, r).as_dict().items():
            suite.gap(f"stability.{name}", "stability estimate", v, cfg.tol_quad, instance=inst)
    coeffs = ladder.analytic_coefficients
    suite.gap("A_F_limit", "A_F / eps >= (n+1)/2 mean|phi|",
              ladder.af_over_eps[-1] - 0.99 * coeffs.AF_lower_coeff, 0.0)
    return suite, ladder


# ---------------------------------------------------------------------------
# simplex


def _simplex_task(args):
    cfg, n, idx = args
    rng = np.random.default_rng([cfg.seed, n, idx])
    try:
        P = sx.random_spacelike_simplex(rng, n, cfg.patch)
    except LorentzIsoError as exc:
        return n, idx, None, f"{type(exc).__name__}: {exc}"
    V = sx.cone_volume_simplex(P)
    res = sx.cone_formula_check(P) / V
    h = sx.lorentzian_height(P)
    pm = sx.projected_measure(P, cfg.samples, seed=[cfg.seed, n, idx, 1])
    gap = h ** (n + 1) * pm.value / (n + 1) - V
    noise = 5.0 * h ** (n + 1) * pm.stderr / (n + 1)
    return n, idx, (res, gap, noise, V), None


def cmd_simplex(cfg: RunConfig) -> SuiteResult:
    suite = SuiteResult("simplex", cfg.name)
    if cfg.vertices is not None:
        try:
            P = sx.SpacelikeSimplex(np.asarray(cfg.vertices, dtype=float))
        except (LorentzIsoError, ValueError) as exc:
            raise ConfigError(f"rejected simplex: {exc}") from exc
        V = sx.cone_volume_simplex(P)
        suite.residual("cone_formula", "cone volume = h A / (n+1)", sx.cone_formula_check(P) / V,
                       IDENTITY_TOL, instance="explicit")
        return suite
    P = sx.SpacelikeSimplex([[2.0, -1.0], [2.0, 1.0]])
    suite.residual("cone_formula", "cone volume = h A / (n+1)", sx.cone_formula_check(P),
                   0.0, instance="canonical-segment")
    tasks = [(cfg, n, i) for n in cfg.dimensions for i in range(cfg.instances)]
    for n, idx, vals, err in sorted(_map(_simplex_task, tasks, cfg.jobs), key=lambda t: (t[0], t[1])):
        inst = f"n{n}-{idx}"
        if err is not None:
            suite.flag("instance", "random simplex", False, instance=inst, error=err)
            continue
        res, gap, noise, V = vals
        suite.residual("cone_formula", "cone volume = h A / (n+1)", res, IDENTITY_TOL, instance=inst)
        suite.gap("containment", "C(P) lies below the hyperboloid of radius h", gap,
                  cfg.tol_atomic * V + noise, instance=inst)
    rng = np.random.default_rng([cfg.seed, 0, 0, 2])
    for n in cfg.dimensions:
        q = rng.uniform(0.01, 10.0, size=(cfg.induction_draws, 4))
        worst = min(sx.induction_step_check(*row, n) for row in q)
        suite.gap("induction_step", "Minkowski inequality for the induction step", worst,
                  1e-12, instance=f"n{n}")
    return suite


# ---------------------------------------------------------------------------
# scalar


def cmd_scalar(cfg: RunConfig) -> tuple:
    suite = SuiteResult("scalar", cfg.name)
    tables = {}
    try:
        js = cfg.jensen
        if "a" in js or "p" in js:
            a = np.asarray(js.get("a", sc.right_end_grid(200)), dtype=float)
            p = np.asarray(js.get("p", sc.half_step_grid(200)), dtype=float)
            A, Pp = np.meshgrid(a, p, indexing="ij")
            g, b = sc.jensen_gap(A.ravel(), Pp.ravel())
            tables["jensen"] = {"a": A.ravel(), "p": Pp.ravel(), "gap": g, "bound": b,
                                "slack": g - b, "exact": A.ravel() == 1.0}
        else:
            tables["jensen"] = sc.jensen_sweep(int(js["n_a"]), int(js["n_p"]))
        mk = cfg.minkowski
        if not mk["upper"] > 0 or int(mk["n_grid"]) < 1:
            raise ConfigError("minkowski grid needs upper > 0 and n_grid >= 1")
        tables["minkowski"] = sc.minkowski_sweep(int(mk["n_grid"]), tuple(mk["n_values"]), float(mk["upper"]))
        n_max = int(cfg.improved_constant["n_max"])
        if n_max < 1:
            raise ConfigError("improved_constant.n_max must be positive")
        tables["improved_constant"] = sc.improved_constant_table(n_max)
    except LorentzIsoError as exc:
        raise ConfigError(f"grid outside the domain: {exc}") from exc
    for name in ("jensen", "minkowski"):
        t = tables[name]
        suite.gap(f"{name}.min_slack", f"quantitative {name.capitalize()} inequality",
                  float(np.min(t["slack"])), cfg.tol_atomic, exact_rows=int(np.sum(t["exact"])))
    ic = tables["improved_constant"]
    suite.residual("improved_constant.identity", "closed form of 4/L(1)",
                   float(np.max(ic["identity_residual"])), IDENTITY_TOL)
    suite.gap("improved_constant.below_basic", "4/L(1) <= 16(n+1)^2/n",
              float(np.min(ic["c_basic"] - ic["c_improved"])), 0.0)
    for key in ("c_improved_normalized", "c_basic_normalized"):
        suite.flag(f"improved_constant.{key}.monotone", "normalized constants are monotone",
                   _monotone(ic[key]))
    j_max = int(cfg.counterexample["j_max"])
    if j_max < 1:
        raise ConfigError("counterexample.j_max must be positive")
    js = np.unique(np.geomspace(1, j_max, 50).astype(int))
    vals = [sc.counterexample_family(int(j)) for j in js]
    tables["counterexample"] = {"j": js, "l2": [v[0] for v in vals], "l1_sq": [v[1] for v in vals]}
    l1 = np.array([v[1] for v in vals])
    suite.gap("counterexample.l1_in_range", "1 <= inf ||f^2 - c||_1 <= 2",
              float(min(np.min(l1) - 1.0, 2.0 - np.max(l1))), cfg.tol_atomic)
    return suite, tables


def _monotone(x) -> bool:
    d = np.diff(np.asarray(x))
    return bool(np.all(d >= 0) or np.all(d <= 0))


# ---------------------------------------------------------------------------
# report


def cmd_report(paths: list) -> dict:
    if not paths:
        raise ConfigError("report needs at least one result file")
    suites = []
    for p in paths:
        try:
            data = json.loads(Path(p).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or data.get("schema") != SCHEMA or "checks" not in data:
            raise ConfigError(f"{p} is not a schema-{SCHEMA} suite result")
        suites.append((str(p), data))
    failing = [dict(c, source=src) for src, d in suites for c in d["checks"] if not c.get("passed")]
    total = sum(len(d["checks"]) for _, d in suites)
    return {"schema": SCHEMA, "command": "report", "sources": [s for s, _ in suites],
            "counts": {"suites": len(suites), "total": total, "failed": len(failing),
                       "passed": total - len(failing)},
            "all_passed": not failing, "failing": failing}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file or a named configuration")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--jobs", type=int)
    common.add_argument("--tol-atomic", type=float, dest="tol_atomic")
    common.add_argument("--tol-quad", type=float, dest="tol_quad")
    parser = argparse.ArgumentParser(prog="lorentziso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="deficits, identities and stability checks")
    sub.add_parser("sharpness", parents=[common], help="perturbation ladder and fitted exponents")
    sub.add_parser("simplex", parents=[common], help="cone formula and containment for simplices")
    sub.add_parser("scalar", parents=[common], help="scalar inequality sweeps")
    rep = sub.add_parser("report", parents=[common], help="merge suite result files")
    rep.add_argument("paths", nargs="*")
    return parser


def _emit(out_dir: Path | None, name: str, text: str):
    if out_dir is None:
        sys.stdout.write(text)
    else:
        (out_dir / name).write_text(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args.config, args.command)
        for key in ("seed", "out", "jobs", "tol_atomic", "tol_quad"):
            v = getattr(args, key)
            if v is not None:
                setattr(cfg, key, v)
        cfg.validate()
        out_dir = Path(cfg.out) if cfg.out else None
        if out_dir is not None:
            try:
                out_dir.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise ConfigError(f"cannot create {out_dir}: {exc}") from exc

        if args.command == "report":
            merged = cmd_report(args.paths)
            _emit(out_dir, "report.json", _json_dump(merged))
            for c in merged["failing"]:
                print(f"FAIL {c['source']}: {c['check']} {c.get('instance', '')} value={c['value']!r}",
                      file=sys.stderr)
            return 0 if merged["all_passed"] else 1

        if args.command == "verify":
            suite = cmd_verify(cfg)
        elif args.command == "simplex":
            suite = cmd_simplex(cfg)
        elif args.command == "scalar":
            suite, tables = cmd_scalar(cfg)
            if out_dir is not None:
                for name, cols in tables.items():
                    write_csv(out_dir / f"{name}.csv", cols)
                suite.artifacts = {name: f"{name}.csv" for name in tables}
        else:
            suite, ladder = cmd_sharpness(cfg)
            if ladder is not None and out_dir is not None:
                (out_dir / "ladder.csv").write_text(ladder.to_csv())
                (out_dir / "sharpness_summary.json").write_text(ladder.summary_json() + "\n")
                suite.artifacts = {"ladder": "ladder.csv", "summary": "sharpness_summary.json"}
            elif ladder is not None:
                sys.stdout.write(ladder.to_csv())
            for c in suite.failed:
                if c["check"] == "admissibility":
                    print(f"inadmissible: {c.get('error')}", file=sys.stderr)
        _emit(out_dir, f"{args.command}.json", _json_dump(suite.to_dict()))
        return 0 if not suite.failed else 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LorentzIsoError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))
