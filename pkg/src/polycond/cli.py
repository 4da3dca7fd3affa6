"""Command-line entry points for sampling, evaluation, and experiments.

Every subcommand reads its inputs from --config (a JSON file path, or an
inline JSON object when the argument starts with "{"), with --seed and
--trials as overrides.  --threads is accepted for interface stability but
results never depend on it.  Exit codes: 0 success, 2 configuration or
usage errors, 3 violated numerical contracts.
"""

from __future__ import annotations

import argparse
import json
import sys
from json import JSONDecodeError

import numpy as np

from .condition import LMinResult, cond_at, l_min
from .diophantine import (
    DEFAULT_ALPHA,
    LcdQuery,
    lcd_estimate,
    small_ball_estimate,
    tensorization_check,
)
from .ensembles import DistributionSpec, SeedPolicy, make_kss, sample_system
from .errors import (
    ConfigError,
    ConstructionError,
    ContractViolation,
    InvariantViolation,
    PreconditionError,
    ShapeError,
)
from .harness import (
    ExperimentConfig,
    run_compressible_infimum,
    run_corollary_events,
    run_example1,
    run_tail,
    write_outputs,
)
from .geometry import CompressibilityParams
from .io import load_system, load_tensor, save_system
from .opnorm import opnorm, opnorm_scaling
from .systems import PolynomialSystem, SystemShape, evaluate


def _load_config(arg: str | None) -> dict:
    if arg is None:
        return {}
    text = arg if arg.lstrip().startswith("{") else open(arg).read()
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ConfigError(f"config must be a JSON object, got {type(obj).__name__}")
    return obj


def _require(obj: dict, key: str):
    if key not in obj:
        raise ConfigError(f"config is missing required key {key!r}")
    return obj[key]


def _seeds(obj: dict, args) -> SeedPolicy:
    if args.seed is not None:
        return SeedPolicy(args.seed)
    return SeedPolicy.from_config(obj.get("seeds", 0))


def _dist(obj: dict) -> DistributionSpec:
    return DistributionSpec.from_config(obj.get("dist", {"kind": "gaussian"}))


def _shape(obj: dict) -> SystemShape:
    raw = _require(obj, "shape")
    return SystemShape(n=int(_require(raw, "n")), d=int(_require(raw, "d")))


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _experiment_config(obj: dict, args) -> ExperimentConfig:
    obj = dict(obj)
    if args.seed is not None:
        obj["seeds"] = args.seed
    if args.trials is not None:
        obj["trials"] = args.trials
    return ExperimentConfig.from_config(obj)


def _sample(obj: dict, args) -> PolynomialSystem:
    shape = _shape(obj)
    seeds = _seeds(obj, args)
    ensemble = obj.get("ensemble", "iid")
    if ensemble == "kss":
        system = make_kss(shape, seeds)
    elif ensemble == "iid":
        system = PolynomialSystem(rand=sample_system(shape, _dist(obj), seeds))
    else:
        raise ConfigError(f"ensemble must be 'iid' or 'kss', got {ensemble!r}")
    scale = float(obj.get("scale", 1.0))
    return system if scale == 1.0 else system.scaled(scale)


def _cmd_gen(args) -> int:
    obj = _load_config(args.config)
    if not args.out:
        raise ConfigError("gen requires --out for the sampled system")
    save_system(_sample(obj, args), args.out)
    return 0


def _cmd_eval(args) -> int:
    obj = _load_config(args.config)
    system = load_system(_require(obj, "system"))
    x = np.asarray(_require(obj, "x"), dtype=np.float64)
    _emit({"value": evaluate(system, x).tolist()}, args)
    return 0


def _lmin_result_payload(res: LMinResult) -> dict:
    return {
        "value": res.value,
        "converged": res.converged,
        "restarts_used": res.restarts_used,
        "argmin": {"x": res.argmin.x.tolist(), "y": res.argmin.y.tolist()},
    }


def _cmd_lmin(args) -> int:
    obj = _load_config(args.config)
    system = load_system(_require(obj, "system"))
    res = l_min(
        system,
        restarts=int(obj.get("restarts", 50)),
        max_iters=int(obj.get("max_iters", 200)),
        tol=float(obj.get("tol", 1e-9)),
        seeds=_seeds(obj, args),
        newton_scans=int(obj.get("newton_scans", 12)),
    )
    _emit(_lmin_result_payload(res), args)
    return 0


def _cmd_cond(args) -> int:
    obj = _load_config(args.config)
    system = load_system(_require(obj, "system"))
    x = np.asarray(_require(obj, "x"), dtype=np.float64)
    rep = cond_at(system, x)
    _emit(
        {
            "mu1": None if rep.mu1_infinite else rep.mu1,
            "mu2": None if rep.mu2_infinite else rep.mu2,
            "mu1_infinite": rep.mu1_infinite,
            "mu2_infinite": rep.mu2_infinite,
            "sigma_min_tangent": rep.sigma_min_tangent,
            "weyl_total": rep.weyl_total,
        },
        args,
    )
    return 0


def _cmd_tail(args) -> int:
    cfg = _experiment_config(_load_config(args.config), args)
    if not args.out:
        raise ConfigError("tail requires --out for the CSV artifact")
    write_outputs(run_tail(cfg), args.out, config=cfg)
    return 0


def _cmd_corollary(args) -> int:
    cfg = _experiment_config(_load_config(args.config), args)
    if not args.out:
        raise ConfigError("corollary requires --out for the CSV artifact")
    write_outputs(run_corollary_events(cfg), args.out, config=cfg)
    return 0


def _comp_params(obj: dict, d: int) -> CompressibilityParams:
    if "delta" in obj or "rho" in obj:
        return CompressibilityParams(
            delta=float(_require(obj, "delta")), rho=float(_require(obj, "rho"))
        )
    return CompressibilityParams.for_degree(d)


def _cmd_compressible(args) -> int:
    obj = _load_config(args.config)
    extras = {k: obj.pop(k) for k in ("delta", "rho", "fixed_support") if k in obj}
    cfg = _experiment_config(obj, args)
    params = _comp_params(extras, cfg.shape.d)
    support = extras.get("fixed_support")
    result = run_compressible_infimum(
        cfg, params, fixed_support=tuple(support) if support else None
    )
    if not args.out:
        raise ConfigError("compressible requires --out for the CSV artifact")
    write_outputs(result, args.out, config=cfg)
    return 0


def _cmd_lcd(args) -> int:
    obj = _load_config(args.config)
    y = np.asarray(_require(obj, "y"), dtype=np.float64)
    if "alpha" in obj:
        alpha = float(obj["alpha"])
    else:
        alpha = DEFAULT_ALPHA.alpha(int(_require(obj, "n")), int(_require(obj, "d")))
    query = LcdQuery(
        alpha=alpha,
        gamma0=float(obj.get("gamma0", 0.5)),
        d_max=float(_require(obj, "d_max")),
        coarse_step=obj.get("coarse_step"),
        refine_tol=float(obj.get("refine_tol", 1e-6)),
    )
    res = lcd_estimate(y, query)
    _emit(
        {
            "found": res.found,
            "lcd": res.lcd if res.found else None,
            "certificate": res.certificate,
        },
        args,
    )
    return 0


def _cmd_opnorm(args) -> int:
    obj = _load_config(args.config)
    if obj.get("mode", "single") == "scaling":
        if not args.out:
            raise ConfigError("opnorm scaling requires --out for the CSV artifact")
        table = opnorm_scaling(
            d=int(_require(obj, "d")),
            n_list=_require(obj, "n_list"),
            dist=_dist(obj),
            trials=int(args.trials or _require(obj, "trials")),
            seeds=_seeds(obj, args),
            restarts=int(obj.get("restarts", 20)),
            max_sweeps=int(obj.get("max_sweeps", 200)),
            tol=float(obj.get("tol", 1e-10)),
            k_restrict=obj.get("k_restrict"),
        )
        write_outputs(table, args.out)
        return 0
    if "tensor" in obj:
        tensor = load_tensor(obj["tensor"])
    else:
        tensor = sample_system(_shape(obj), _dist(obj), _seeds(obj, args))
    res = opnorm(
        tensor,
        restarts=int(obj.get("restarts", 20)),
        max_sweeps=int(obj.get("max_sweeps", 200)),
        tol=float(obj.get("tol", 1e-10)),
        seeds=_seeds(obj, args),
    )
    _emit(
        {
            "value": res.value,
            "unsquared": res.unsquared,
            "sweeps": res.sweeps,
            "converged": res.converged,
            "arg": [v.tolist() for v in res.arg],
        },
        args,
    )
    return 0


def _cmd_example1(args) -> int:
    obj = _load_config(args.config)
    result = run_example1(
        n=int(obj.get("n", 4)),
        trials=int(args.trials or obj.get("trials", 400_000)),
        seeds=_seeds(obj, args),
    )
    if args.out:
        write_outputs(result, args.out)
    else:
        _emit(
            {
                "p_f_zero": result.p_f_zero,
                "p_joint": result.p_joint,
                "exact_p_f_zero": result.exact_p_f_zero,
                "trials": result.trials,
            },
            args,
        )
    return 0


def _cmd_report_data(args) -> int:
    """Run a battery of experiments and write a manifest the report reads."""
    import os

    obj = _load_config(args.config)
    if not args.out:
        raise ConfigError("report-data requires --out for the artifact directory")
    os.makedirs(args.out, exist_ok=True)
    entries = []
    for item in _require(obj, "experiments"):
        name = str(_require(item, "name"))
        kind = str(_require(item, "kind"))
        spec = dict(_require(item, "config"))
        path = os.path.join(args.out, f"{name}.csv")
        if kind == "tail":
            cfg = _experiment_config(spec, args)
            write_outputs(run_tail(cfg), path, config=cfg)
        elif kind == "corollary":
            cfg = _experiment_config(spec, args)
            write_outputs(run_corollary_events(cfg), path, config=cfg)
        elif kind == "compressible":
            extras = {k: spec.pop(k) for k in ("delta", "rho", "fixed_support") if k in spec}
            cfg = _experiment_config(spec, args)
            support = extras.get("fixed_support")
            result = run_compressible_infimum(
                cfg, _comp_params(extras, cfg.shape.d),
                fixed_support=tuple(support) if support else None,
            )
            write_outputs(result, path, config=cfg)
        elif kind == "opnorm_scaling":
            table = opnorm_scaling(
                d=int(_require(spec, "d")),
                n_list=_require(spec, "n_list"),
                dist=DistributionSpec.from_config(spec.get("dist", {"kind": "gaussian"})),
                trials=int(_require(spec, "trials")),
                seeds=SeedPolicy.from_config(spec.get("seeds", 0)),
                k_restrict=spec.get("k_restrict"),
            )
            write_outputs(table, path)
        elif kind == "example1":
            result = run_example1(
                n=int(_require(spec, "n")),
                trials=int(_require(spec, "trials")),
                seeds=SeedPolicy.from_config(spec.get("seeds", 0)),
            )
            write_outputs(result, path)
        elif kind == "small_ball":
            est = small_ball_estimate(
                np.asarray(_require(spec, "y"), dtype=np.float64),
                DistributionSpec.from_config(spec.get("dist", {"kind": "gaussian"})),
                eps_grid=_require(spec, "eps_grid"),
                trials=int(_require(spec, "trials")),
                seeds=SeedPolicy.from_config(spec.get("seeds", 0)),
            )
            write_outputs(est, path, kind="small_ball")
        elif kind == "tensorization":
            est = tensorization_check(
                DistributionSpec.from_config(spec.get("dist", {"kind": "gaussian"})),
                n=int(_require(spec, "n")),
                delta_grid=_require(spec, "delta_grid"),
                trials=int(_require(spec, "trials")),
                seeds=SeedPolicy.from_config(spec.get("seeds", 0)),
            )
            write_outputs(est, path, kind="tensorization")
        else:
            raise ConfigError(f"unknown experiment kind {kind!r}")
        entries.append({"name": name, "kind": kind, "csv": os.path.basename(path)})
    manifest = {"artifacts": entries}
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return 0


_COMMANDS = {
    "gen": (_cmd_gen, "sample a system and save it"),
    "eval": (_cmd_eval, "evaluate a saved system at a point"),
    "lmin": (_cmd_lmin, "minimize L over orthonormal pairs"),
    "cond": (_cmd_cond, "condition numbers at a point"),
    "tail": (_cmd_tail, "Monte Carlo tail curve for minimized L"),
    "lcd": (_cmd_lcd, "essential lattice distance scan"),
    "opnorm": (_cmd_opnorm, "multilinear sup norm, single or scaling table"),
    "example1": (_cmd_example1, "exact sign-pattern frequencies at x0"),
    "corollary": (_cmd_corollary, "root-event frequencies over eps"),
    "compressible": (_cmd_compressible, "residual infimum over the compressible set"),
    "report-data": (_cmd_report_data, "run a battery and write a manifest"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycond", description="random polynomial system experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file path or inline JSON object")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--out", help="output path (CSV or JSON, per subcommand)")
        p.add_argument("--trials", type=int, help="override the trial count")
        p.add_argument("--threads", type=int, default=1, help="affects speed only, never results")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ShapeError, ValueError, FileNotFoundError, JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ContractViolation, PreconditionError, InvariantViolation, ConstructionError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
