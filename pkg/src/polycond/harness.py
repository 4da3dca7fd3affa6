"""Seeded Monte Carlo experiments over random systems.

Every run_* function is a pure function of its configuration: sampling and
optimizer streams are keyed by fixed namespaces plus the trial index, trials
are aggregated in index order, and reruns reproduce outputs bit-exactly for
any worker count.  Results persist as long-format CSV with a JSON sidecar
that echoes the full configuration.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import platform
from dataclasses import dataclass, fields
from importlib import metadata as _metadata

import numpy as np

from .condition import l_min, sigma_min_tangent
from .ensembles import (
    DistributionSpec,
    SeedPolicy,
    gamma_control_estimate,
    make_kss,
    sample_system,
)
from .errors import ConfigError, PreconditionError
from .geometry import CompressibilityParams
from .io import load_tensor
from .stats import GridEstimate, wilson_interval
from .systems import (
    CoefficientTensor,
    PolynomialSystem,
    SystemShape,
    derivative_contract,
    evaluate,
    jacobian,
)

_NS_GAMMA = 9
_NS_SAMPLE = 10
_NS_OPT = 11
_NS_EX1 = 30
_NS_COMP_SUP = 41
_NS_COMP_START = 42

ZERO_TOL = 1e-10
_ENSEMBLES = ("iid", "kss")
_EX1_BLOCK = 4096
_COMP_ENUM_CAP = 64
_COMP_ATTEMPTS = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs: problem size, ensemble, seeds, knobs.

    ensemble "iid" fills the coefficient tensor with dist draws; "kss" uses
    the orthogonally invariant Gaussian monomial ensemble (dist must be
    gaussian).  scale multiplies the sampled random part, det_source points
    at an optional deterministic tensor file, and gamma is the control
    exponent that file must pass before any trial runs.
    """

    shape: SystemShape
    dist: DistributionSpec
    seeds: SeedPolicy
    trials: int
    eps_grid: tuple
    ensemble: str = "iid"
    scale: float = 1.0
    det_source: str | None = None
    gamma: float = 1.0
    restarts: int = 8
    max_iters: int = 150
    tol: float = 1e-9
    newton_scans: int = 4
    c_sparse: float = 0.01
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"need trials >= 1, got {self.trials}")
        grid = tuple(float(e) for e in self.eps_grid)
        if not grid or grid[0] <= 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError(f"eps_grid must be positive and ascending, got {grid}")
        if self.ensemble not in _ENSEMBLES:
            raise ConfigError(f"ensemble must be one of {_ENSEMBLES}, got {self.ensemble!r}")
        if self.ensemble == "kss" and self.dist.kind != "gaussian":
            raise ConfigError(f"kss ensemble requires gaussian dist, got {self.dist.kind!r}")
        if self.restarts < 1 or self.max_iters < 1 or self.tol <= 0:
            raise ConfigError(
                f"need restarts >= 1, max_iters >= 1, tol > 0, got "
                f"{self.restarts}, {self.max_iters}, {self.tol}"
            )
        if self.scale < 0 or self.newton_scans < 0 or self.c_sparse <= 0:
            raise ConfigError(
                f"need scale >= 0, newton_scans >= 0, c_sparse > 0, got "
                f"{self.scale}, {self.newton_scans}, {self.c_sparse}"
            )
        object.__setattr__(self, "eps_grid", grid)

    def to_config(self) -> dict:
        return {
            "shape": {"n": self.shape.n, "d": self.shape.d},
            "dist": self.dist.to_config(),
            "seeds": self.seeds.to_config(),
            "trials": self.trials,
            "eps_grid": list(self.eps_grid),
            "ensemble": self.ensemble,
            "scale": self.scale,
            "det_source": self.det_source,
            "gamma": self.gamma,
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "newton_scans": self.newton_scans,
            "c_sparse": self.c_sparse,
            "out": self.out,
        }

    @classmethod
    def from_config(cls, obj: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        missing = {"shape", "dist", "seeds", "trials", "eps_grid"} - set(obj)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        kwargs = dict(obj)
        kwargs["shape"] = SystemShape(**obj["shape"])
        kwargs["dist"] = DistributionSpec.from_config(obj["dist"])
        kwargs["seeds"] = SeedPolicy.from_config(obj["seeds"])
        kwargs["eps_grid"] = tuple(obj["eps_grid"])
        return cls(**kwargs)


def _load_det(cfg: ExperimentConfig) -> CoefficientTensor | None:
    """Load and gate the deterministic part, refusing uncontrolled ones."""
    if cfg.det_source is None:
        return None
    det = load_tensor(cfg.det_source)
    if det.shape != cfg.shape:
        raise ConfigError(
            f"det tensor shape {det.shape} does not match config shape {cfg.shape}"
        )
    report = gamma_control_estimate(
        det, cfg.gamma, restarts=10, sweeps=40, seeds=cfg.seeds, key=(_NS_GAMMA,)
    )
    if not report.passed:
        raise PreconditionError(
            f"deterministic part exceeds the n^gamma ceiling at gamma={cfg.gamma}: "
            f"sup estimates {report.sup_estimates.tolist()} vs threshold {report.threshold:.6g}"
        )
    return det


def _trial_system(cfg: ExperimentConfig, det: CoefficientTensor | None, trial: int) -> PolynomialSystem:
    if cfg.ensemble == "kss":
        rand = make_kss(cfg.shape, cfg.seeds, (_NS_SAMPLE, trial)).rand
    else:
        rand = sample_system(cfg.shape, cfg.dist, cfg.seeds, (_NS_SAMPLE, trial))
    if cfg.scale != 1.0:
        rand = rand.scaled(cfg.scale)
    return PolynomialSystem(rand=rand, det=det)


@dataclass(frozen=True, eq=False)
class TailCurve:
    """Empirical P(L_min <= eps) over a grid, with provenance metadata.

    hits[j] counts trials whose minimized L fell at or below eps_grid[j];
    counts are nondecreasing because the events are nested.  metadata keeps
    the sampled ensemble, the generic complex root count bezout = d^(n-1),
    and the coefficient count N = (n-1) * binom(n-1+d, d).
    """

    eps_grid: np.ndarray
    hits: np.ndarray
    trials: int
    metadata: dict

    def __post_init__(self):
        grid = np.asarray(self.eps_grid, dtype=np.float64)
        hits = np.asarray(self.hits, dtype=np.int64)
        if grid.shape != hits.shape:
            raise ValueError("eps_grid and hits must have matching shapes")
        if np.any(hits < 0) or np.any(hits > self.trials):
            raise ValueError("hit counts must lie in [0, trials]")
        if np.any(np.diff(hits) < 0):
            raise ValueError("hits must be nondecreasing along eps_grid")
        object.__setattr__(self, "eps_grid", grid)
        object.__setattr__(self, "hits", hits)

    @property
    def estimate(self) -> np.ndarray:
        return self.hits / self.trials

    @property
    def ci(self) -> tuple[np.ndarray, np.ndarray]:
        return wilson_interval(self.hits, self.trials)


def _curve_metadata(cfg: ExperimentConfig) -> dict:
    n, d = cfg.shape.n, cfg.shape.d
    return {
        "n": n,
        "d": d,
        "ensemble": cfg.ensemble,
        "dist": cfg.dist.to_config(),
        "seeds": cfg.seeds.to_config(),
        "bezout": d ** (n - 1),
        "coefficient_count": (n - 1) * math.comb(n - 1 + d, d),
        "regime_note": (
            "grid targets the moderate-eps regime reachable by Monte Carlo; "
            "the strict linear-tail bound applies only below d^(-9n/4), where "
            "no sampling budget observes events"
        ),
    }


def run_tail(cfg: ExperimentConfig) -> TailCurve:
    """Sample systems, minimize L per trial, and bin against eps_grid."""
    det = _load_det(cfg)
    values = np.empty(cfg.trials)
    for t in range(cfg.trials):
        res = l_min(
            _trial_system(cfg, det, t),
            restarts=cfg.restarts,
            max_iters=cfg.max_iters,
            tol=cfg.tol,
            seeds=cfg.seeds,
            key=(_NS_OPT, t),
            newton_scans=cfg.newton_scans,
        )
        values[t] = res.value
    eps = np.asarray(cfg.eps_grid)
    hits = (values[None, :] <= eps[:, None]).sum(axis=1)
    return TailCurve(eps_grid=eps, hits=hits, trials=cfg.trials, metadata=_curve_metadata(cfg))


@dataclass(frozen=True, eq=False)
class Example1Result:
    """Sign-pattern frequencies at the planted point x0 = (1, 1, 0, ...).

    f_zero counts trials whose d=2 Rademacher system vanished exactly at x0
    (an integer-sum test, no float tolerance); joint additionally requires a
    rank-deficient tangent Jacobian at x0 normalized to the sphere.
    """

    n: int
    trials: int
    f_zero_hits: int
    joint_hits: int
    exact_p_f_zero: float

    @property
    def p_f_zero(self) -> float:
        return self.f_zero_hits / self.trials

    @property
    def p_joint(self) -> float:
        return self.joint_hits / self.trials

    @property
    def p_f_zero_ci(self) -> tuple[float, float]:
        lo, hi = wilson_interval(self.f_zero_hits, self.trials)
        return float(lo), float(hi)

    @property
    def p_joint_ci(self) -> tuple[float, float]:
        lo, hi = wilson_interval(self.joint_hits, self.trials)
        return float(lo), float(hi)


def run_example1(n: int, trials: int, seeds: SeedPolicy) -> Example1Result:
    """Exact-arithmetic frequency of f(x0) = 0 for d=2 sign tensors.

    Each form evaluates at x0 to the sum of its leading 2x2 block, four iid
    signs, so P(form = 0) = binom(4,2)/2^4 = 3/8 and the forms are
    independent across l; exact_p_f_zero = (3/8)^(n-1).
    """
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    if trials < 1:
        raise PreconditionError(f"need trials >= 1, got {trials}")
    shape = SystemShape(n=n, d=2)
    m = n - 1
    xu = np.zeros(n)
    xu[:2] = 1.0 / math.sqrt(2.0)
    f_zero = 0
    joint = 0
    done = 0
    block = 0
    while done < trials:
        b = min(_EX1_BLOCK, trials - done)
        rng = seeds.stream(_NS_EX1, block)
        signs = rng.integers(0, 2, size=(b, m, n, n)) * 2 - 1
        sums = signs[:, :, :2, :2].sum(axis=(2, 3))
        zero = np.all(sums == 0, axis=1)
        f_zero += int(zero.sum())
        for i in np.nonzero(zero)[0]:
            sys_i = PolynomialSystem(
                rand=CoefficientTensor(shape, signs[i].astype(np.float64))
            )
            if sigma_min_tangent(sys_i, xu) < ZERO_TOL:
                joint += 1
        done += b
        block += 1
    return Example1Result(
        n=n,
        trials=trials,
        f_zero_hits=f_zero,
        joint_hits=joint,
        exact_p_f_zero=(3.0 / 8.0) ** m,
    )


_EVENTS = ("double_root", "root_regularity", "simultaneous_vanishing")


@dataclass(frozen=True, eq=False)
class EventEstimates:
    """Witnessed-event frequencies over eps_grid, one curve per event.

    The witness pair comes from the l_min search, so every frequency is a
    lower bound on the existential probability: a missed witness undercounts
    and never overcounts.
    """

    events: dict
    eps_grid: np.ndarray
    trials: int

    def __post_init__(self):
        if set(self.events) != set(_EVENTS):
            raise ValueError(f"expected events {_EVENTS}, got {sorted(self.events)}")
        object.__setattr__(
            self, "eps_grid", np.asarray(self.eps_grid, dtype=np.float64)
        )


def run_corollary_events(cfg: ExperimentConfig) -> EventEstimates:
    """Frequencies of three root events witnessed by the l_min pair.

    double_root: f(x) and the y-derivative both vanish to ZERO_TOL
    (eps-independent).  root_regularity: f(x) vanishes and the y-derivative
    is at most d^(9/4) sqrt(n) eps.  simultaneous_vanishing: both f(x) and
    f(y) are at most (d^(9/2) n)^(1/4) eps.
    """
    det = _load_det(cfg)
    eps = np.asarray(cfg.eps_grid)
    n, d = cfg.shape.n, cfg.shape.d
    reg_scale = d**2.25 * math.sqrt(n)
    van_scale = (d**4.5 * n) ** 0.25
    hits = {name: np.zeros(eps.shape, dtype=np.int64) for name in _EVENTS}
    for t in range(cfg.trials):
        sys_t = _trial_system(cfg, det, t)
        res = l_min(
            sys_t,
            restarts=cfg.restarts,
            max_iters=cfg.max_iters,
            tol=cfg.tol,
            seeds=cfg.seeds,
            key=(_NS_OPT, t),
            newton_scans=cfg.newton_scans,
        )
        p = res.argmin
        fx = float(np.linalg.norm(evaluate(sys_t, p.x)))
        fy = float(np.linalg.norm(evaluate(sys_t, p.y)))
        dxy = float(np.linalg.norm(derivative_contract(sys_t, p.x, [p.y])))
        at_root = fx <= ZERO_TOL
        hits["double_root"] += at_root and dxy <= ZERO_TOL
        hits["root_regularity"] += at_root & (dxy <= reg_scale * eps)
        hits["simultaneous_vanishing"] += max(fx, fy) <= van_scale * eps
    events = {name: GridEstimate(eps, hits[name], cfg.trials) for name in _EVENTS}
    return EventEstimates(events=events, eps_grid=eps, trials=cfg.trials)


@dataclass(frozen=True, eq=False)
class CompressibleInfimum:
    """Per-trial minimized squared residual over the compressible set.

    infima[t] estimates inf over Comp(delta, rho) of the squared residual
    sum for trial t's system; frac_below compares against c_sparse * n.
    """

    n: int
    params: CompressibilityParams
    c_sparse: float
    infima: np.ndarray
    fixed_support: tuple | None

    def __post_init__(self):
        object.__setattr__(self, "infima", np.asarray(self.infima, dtype=np.float64))

    @property
    def trials(self) -> int:
        return len(self.infima)

    @property
    def normalized(self) -> np.ndarray:
        return self.infima / self.n

    @property
    def threshold(self) -> float:
        return self.c_sparse * self.n

    @property
    def frac_below(self) -> float:
        return float(np.mean(self.infima <= self.threshold))

    @property
    def frac_below_ci(self) -> tuple[float, float]:
        lo, hi = wilson_interval(int((self.infima <= self.threshold).sum()), self.trials)
        return float(lo), float(hi)


def _residual_sq(sys_t: PolynomialSystem, x: np.ndarray) -> float:
    f = evaluate(sys_t, x)
    return float(f @ f)


def _comp_project(v: np.ndarray, support: tuple, rho: float) -> np.ndarray:
    """Nearest unit vector within off-support distance rho of the support."""
    x = v / np.linalg.norm(v)
    off = x.copy()
    off[list(support)] = 0.0
    s = float(np.linalg.norm(off))
    if s <= rho:
        return x
    sup = x - off
    sn = float(np.linalg.norm(sup))
    if sn == 0.0:
        sup = np.zeros_like(x)
        sup[support[0]] = 1.0
        sn = 1.0
    return math.sqrt(1.0 - rho * rho) * (sup / sn) + (rho / s) * off


def _comp_descent(
    sys_t: PolynomialSystem,
    support: tuple,
    rho: float,
    x0: np.ndarray,
    max_iters: int,
    tol: float,
) -> float:
    x = _comp_project(x0, support, rho)
    val = _residual_sq(sys_t, x)
    step = 0.1
    for _ in range(max_iters):
        f = evaluate(sys_t, x)
        g = 2.0 * (jacobian(sys_t, x).T @ f)
        g -= (g @ x) * x
        gn = float(np.linalg.norm(g))
        if gn * step < tol:
            break
        moved = False
        while step * gn >= tol:
            cand = _comp_project(x - step * g, support, rho)
            cval = _residual_sq(sys_t, cand)
            if cval < val:
                x, val = cand, cval
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return val


def _trial_supports(cfg: ExperimentConfig, n: int, k: int, trial: int) -> list:
    """All size-k supports when few, else a seeded sample without repeats."""
    if math.comb(n, k) <= _COMP_ENUM_CAP:
        return list(itertools.combinations(range(n), k))
    rng = cfg.seeds.stream(_NS_COMP_SUP, trial)
    seen = set()
    out = []
    for _ in range(cfg.restarts):
        sup = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        if sup not in seen:
            seen.add(sup)
            out.append(sup)
    return out


def run_compressible_infimum(
    cfg: ExperimentConfig,
    params: CompressibilityParams,
    fixed_support: tuple | None = None,
) -> CompressibleInfimum:
    """Minimize the squared residual over compressible starts, per trial.

    Starts live on size-ceil(delta n) supports and the projected descent
    keeps iterates within off-support distance rho, i.e. inside
    Comp(delta, rho).  Start streams are keyed by (trial, support) alone,
    so restricting to a fixed support reruns exactly the descents the full
    sweep ran on that support and its infimum can only be larger.
    """
    det = _load_det(cfg)
    n = cfg.shape.n
    k = math.ceil(params.delta * n)
    if fixed_support is not None:
        fixed_support = tuple(sorted(int(i) for i in fixed_support))
        if len(fixed_support) != k or any(not 0 <= i < n for i in fixed_support):
            raise ConfigError(
                f"fixed_support must be {k} distinct indices in [0, {n}), got {fixed_support}"
            )
    infima = np.empty(cfg.trials)
    for t in range(cfg.trials):
        sys_t = _trial_system(cfg, det, t)
        supports = [fixed_support] if fixed_support is not None else _trial_supports(cfg, n, k, t)
        best = math.inf
        for sup in supports:
            rng = cfg.seeds.stream(_NS_COMP_START, t, *sup)
            for _ in range(_COMP_ATTEMPTS):
                x0 = np.zeros(n)
                x0[list(sup)] = rng.standard_normal(k)
                if not np.any(x0):
                    x0[sup[0]] = 1.0
                best = min(
                    best,
                    _comp_descent(sys_t, sup, params.rho, x0, cfg.max_iters, cfg.tol),
                )
        infima[t] = best
    return CompressibleInfimum(
        n=n,
        params=params,
        c_sparse=cfg.c_sparse,
        infima=infima,
        fixed_support=fixed_support,
    )


def _versions() -> dict:
    try:
        pkg = _metadata.version("polycond")
    except _metadata.PackageNotFoundError:
        pkg = "unknown"
    return {"polycond": pkg, "numpy": np.__version__, "python": platform.python_version()}


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _grid_rows(grid, hits, trials) -> list:
    est = hits / trials
    lo, hi = wilson_interval(hits, trials)
    return [
        [_fmt(grid[j]), _fmt(est[j]), _fmt(lo[j]), _fmt(hi[j]), _fmt(trials)]
        for j in range(len(grid))
    ]


GRID_COLUMNS = ["epsilon_or_delta", "estimate", "ci_low", "ci_high", "trials"]
EVENT_COLUMNS = ["event"] + GRID_COLUMNS
OPNORM_COLUMNS = ["n", "d", "trial", "value"]
COMPRESSIBLE_COLUMNS = ["trial", "infimum_sq", "infimum_sq_over_n"]
EXAMPLE1_COLUMNS = ["quantity", "estimate", "ci_low", "ci_high", "trials"]


def _tabulate(result) -> tuple[str, list, list, dict]:
    """Flatten a result into (kind, columns, rows, metadata)."""
    from .opnorm import OpnormScaling

    if isinstance(result, TailCurve):
        rows = _grid_rows(result.eps_grid, result.hits, result.trials)
        return "tail", GRID_COLUMNS, rows, dict(result.metadata)
    if isinstance(result, GridEstimate):
        rows = _grid_rows(result.grid, result.hits, result.trials)
        return "grid", GRID_COLUMNS, rows, {"trials": result.trials}
    if isinstance(result, EventEstimates):
        rows = []
        for name in _EVENTS:
            ge = result.events[name]
            rows += [[name] + r for r in _grid_rows(ge.grid, ge.hits, ge.trials)]
        return "corollary_events", EVENT_COLUMNS, rows, {"trials": result.trials}
    if isinstance(result, OpnormScaling):
        rows = [
            [_fmt(n), _fmt(result.d), _fmt(j), _fmt(result.values[i, j])]
            for i, n in enumerate(result.n_list)
            for j in range(result.values.shape[1])
        ]
        meta = {
            "n_list": list(result.n_list),
            "d": result.d,
            "k_restrict": result.k_restrict,
            "medians": result.medians.tolist(),
            "medians_over_n": result.ratios.tolist(),
        }
        return "opnorm_scaling", OPNORM_COLUMNS, rows, meta
    if isinstance(result, CompressibleInfimum):
        rows = [
            [_fmt(t), _fmt(result.infima[t]), _fmt(result.normalized[t])]
            for t in range(result.trials)
        ]
        meta = {
            "n": result.n,
            "delta": result.params.delta,
            "rho": result.params.rho,
            "c_sparse": result.c_sparse,
            "threshold": result.threshold,
            "frac_below": result.frac_below,
            "frac_below_ci": list(result.frac_below_ci),
            "fixed_support": list(result.fixed_support) if result.fixed_support else None,
        }
        return "compressible", COMPRESSIBLE_COLUMNS, rows, meta
    if isinstance(result, Example1Result):
        rows = [
            ["p_f_zero", _fmt(result.p_f_zero), _fmt(result.p_f_zero_ci[0]),
             _fmt(result.p_f_zero_ci[1]), _fmt(result.trials)],
            ["p_joint", _fmt(result.p_joint), _fmt(result.p_joint_ci[0]),
             _fmt(result.p_joint_ci[1]), _fmt(result.trials)],
        ]
        meta = {"n": result.n, "exact_p_f_zero": result.exact_p_f_zero}
        return "example1", EXAMPLE1_COLUMNS, rows, meta
    raise ConfigError(f"no CSV schema for result type {type(result).__name__}")


def write_outputs(
    result, path, config: ExperimentConfig | None = None, kind: str | None = None
) -> None:
    """Write result rows as CSV at path plus a JSON sidecar at path + '.json'.

    The sidecar records the result kind (overridable for generic grid
    results), the column order, a full config echo when one is given, and
    library versions, so outputs are self-describing and round-trip through
    read_outputs.
    """
    inferred, columns, rows, meta = _tabulate(result)
    kind = kind or inferred
    path = str(path)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            writer.writerows(rows)
        sidecar = {
            "kind": kind,
            "columns": columns,
            "metadata": meta,
            "config": config.to_config() if config is not None else None,
            "versions": _versions(),
        }
        with open(path + ".json", "w") as fh:
            json.dump(sidecar, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise ConfigError(f"cannot write outputs at {path}: {exc}") from exc


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_outputs(path) -> tuple[str, dict, dict]:
    """Read back a write_outputs artifact as (kind, columns dict, sidecar)."""
    path = str(path)
    try:
        with open(path + ".json") as fh:
            sidecar = json.load(fh)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[_parse_cell(c) for c in row] for row in reader]
    except OSError as exc:
        raise ConfigError(f"cannot read outputs at {path}: {exc}") from exc
    if header != sidecar.get("columns"):
        raise ConfigError(
            f"CSV header {header} disagrees with sidecar columns {sidecar.get('columns')}"
        )
    columns = {name: [row[j] for row in rows] for j, name in enumerate(header)}
    return sidecar["kind"], columns, sidecar
