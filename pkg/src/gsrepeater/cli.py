"""Command-line front end.

Verbs: evaluate one configuration, optimize a single operating point,
sweep a gamma x t_coh grid, scan total distance, sequence a generation
schedule, or run a numerical oracle.  Artifacts are CSV or JSON with a
provenance header carrying the full resolved parameter set, so a file is
reproducible (and plottable) on its own.

Exit codes: 0 success, 2 validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import keyrate, optimizer, oracle, sequencer
from .params import (
    ConfigError,
    RgsGeometry,
    RunConfig,
    TreeGeometry,
    config_from_mapping,
    parse_branchings,
    read_config_mapping,
)

OUTDIR_ENV = "GSREPEATER_OUTDIR"

# flags that overlay config-file keys verbatim (flag wins over file)
_KEY_FLAGS = (
    ("--gamma-ghz", "gamma_ghz", "emitter rate gamma/2pi in GHz"),
    ("--tcoh-s", "tcoh_s", "spin coherence time in seconds ('inf' allowed)"),
    ("--l-km", "L_km", "total link distance in km"),
    ("--l-att-km", "L_att_km", "fiber attenuation length in km"),
    ("--mu-coup", "mu_coup", "coupling loss probability"),
    ("--eps-depol", "eps_depol", "single-photon depolarizing error"),
    ("--v-feedback", "v_feedback", "feedback line signal velocity in m/s"),
    ("--v-delay", "v_delay", "delay line signal velocity in m/s"),
    ("--beta", "beta", "feedback slowdown factor"),
    ("--t-h-s", "t_H_s", "Hadamard time in seconds"),
    ("--t-cz-a-s", "t_CZ_a_s", "ancilla CZ time in seconds"),
    ("--protocol", "protocol", "tree or rgs"),
    ("--scheme", "scheme", "ancilla or feedback"),
    ("--branchings", "branchings", "comma-separated branching vector"),
    ("--rgs-n", "rgs_n", "number of arms (rgs only)"),
    ("--m", "m", "number of intermediate stations"),
    ("--n-matter", "n_matter", "matter qubits per node override"),
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    for flag, key, help_text in _KEY_FLAGS:
        parser.add_argument(flag, dest=f"key_{key}", metavar="V", help=help_text)
    parser.add_argument(
        "--include-cz-error",
        action="store_true",
        help="fold the feedback CZ depolarizing error into the budget",
    )


def _add_space_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tree-depths", metavar="D,D", help="tree depths to search")
    parser.add_argument("--b-min", type=int, metavar="N", help="branching lower bound")
    parser.add_argument("--b-max", type=int, metavar="N", help="branching upper bound")
    parser.add_argument("--n-arms", metavar="N,N", help="rgs arm counts to search")
    parser.add_argument(
        "--encoding-depth", type=int, metavar="D", help="rgs arm encoding depth"
    )
    parser.add_argument("--m1-min", type=int, metavar="N", help="station count + 1, lower")
    parser.add_argument("--m1-max", type=int, metavar="N", help="station count + 1, upper")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="artifact path (joined to $%s)" % OUTDIR_ENV)
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="artifact format"
    )
    parser.add_argument("--seed", type=int, default=0, help="deterministic seed")
    parser.add_argument(
        "--parallelism",
        type=int,
        default=None,
        metavar="N",
        help="worker processes (default: available cores)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsrepeater",
        description="Secret-key-rate analysis for graph-state repeaters.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("evaluate", help="rate for one fully specified configuration")
    _add_config_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("optimize", help="best geometry and spacing at one point")
    _add_config_flags(p)
    _add_space_flags(p)
    _add_output_flags(p)
    p.add_argument("--no-prune", action="store_true", help="disable search pruning")

    p = sub.add_parser("sweep", help="optimize over a gamma x t_coh grid")
    _add_config_flags(p)
    _add_space_flags(p)
    _add_output_flags(p)
    p.add_argument(
        "--grid",
        required=True,
        metavar="G,..xT,..",
        help="gamma/2pi values (GHz) and t_coh values (s), axes joined by 'x'",
    )

    p = sub.add_parser("scan", help="optimize over total distances")
    _add_config_flags(p)
    _add_space_flags(p)
    _add_output_flags(p)
    p.add_argument(
        "--l-km-grid",
        required=True,
        metavar="L,..",
        help="total distances in km",
    )

    p = sub.add_parser("sequence", help="generation schedule for one configuration")
    _add_config_flags(p)
    p.add_argument("--output", help="trace path (joined to $%s)" % OUTDIR_ENV)

    p = sub.add_parser("oracle", help="numerical reference values")
    p.add_argument(
        "--kind",
        required=True,
        choices=("exhaustive", "mc-tree", "mc-rgs"),
        help="exhaustive tree success, Monte Carlo tree error, or rgs link",
    )
    p.add_argument("--branchings", default="2,3", metavar="B,B")
    p.add_argument("--rgs-n", type=int, default=6, metavar="N")
    p.add_argument("--mu", type=float, default=0.1, metavar="P")
    p.add_argument("--eps-sp", type=float, default=1e-4, metavar="E")
    p.add_argument("--trials", type=int, default=100000, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    return parser


# --- parameter resolution ---------------------------------------------------


def _csv_floats(key: str, raw: str) -> list[float]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(key, "needs at least one value")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(key, f"not a number list: {raw!r}") from None


def _csv_ints(key: str, raw: str) -> tuple[int, ...]:
    try:
        return parse_branchings(raw)
    except ConfigError:
        raise ConfigError(key, f"not an integer list: {raw!r}") from None


def _resolve_values(args) -> dict[str, str]:
    """Config-file mapping overlaid with any flags that were set."""
    values = read_config_mapping(args.config) if args.config else {}
    for _, key, _ in _KEY_FLAGS:
        flag_value = getattr(args, f"key_{key}")
        if flag_value is not None:
            values[key] = flag_value
    if args.include_cz_error:
        values["include_cz_error"] = "true"
    return values


def _resolve_space(args) -> optimizer.SearchSpace:
    base = optimizer.SearchSpace()
    kw = {}
    if args.tree_depths is not None:
        kw["tree_depths"] = _csv_ints("tree_depths", args.tree_depths)
    if args.n_arms is not None:
        kw["n_arms"] = _csv_ints("n_arms", args.n_arms)
    for name in ("b_min", "b_max", "encoding_depth", "m1_min", "m1_max"):
        value = getattr(args, name)
        if value is not None:
            kw[name] = value
    return replace(base, **kw) if kw else base


def _parse_grid(raw: str) -> tuple[list[float], list[float]]:
    head, sep, tail = raw.partition("x")
    if not sep:
        raise ConfigError("grid", f"expected 'G,..xT,..', got {raw!r}")
    return _csv_floats("grid", head), _csv_floats("grid", tail)


def _output_path(raw: str | None) -> str | None:
    if raw is None:
        return None
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(raw):
        return os.path.join(outdir, raw)
    return raw


def _search_kwargs(cfg: RunConfig) -> dict:
    return {
        "beta": cfg.beta,
        "t_H": cfg.t_H,
        "t_CZ_a": cfg.t_CZ_a,
        "n_matter": cfg.n_matter,
        "include_cz_error": cfg.include_cz_error,
    }


def _provenance(args, cfg: RunConfig, **extra) -> dict:
    prov = {"verb": args.verb, "seed": getattr(args, "seed", 0)}
    prov.update(extra)
    prov.update(
        {
            "protocol": cfg.protocol,
            "scheme": cfg.scheme,
            "gamma_ghz": cfg.emitter.gamma_ghz,
            "tcoh_s": cfg.emitter.t_coh,
            "L_km": cfg.channel.L / 1e3,
            "L_att_km": cfg.channel.L_att / 1e3,
            "mu_coup": cfg.channel.mu_coup,
            "eps_depol": cfg.channel.eps_depol,
            "v_feedback": cfg.channel.v_feedback,
            "v_delay": cfg.channel.v_delay,
            "beta": cfg.beta,
            "t_H_s": cfg.t_H,
            "t_CZ_a_s": cfg.t_CZ_a,
            "include_cz_error": str(cfg.include_cz_error).lower(),
        }
    )
    return prov


def _space_provenance(space: optimizer.SearchSpace) -> dict:
    return {
        "tree_depths": ",".join(str(d) for d in space.tree_depths),
        "b_min": space.b_min,
        "b_max": space.b_max,
        "n_arms": ",".join(str(n) for n in space.n_arms),
        "encoding_depth": space.encoding_depth,
        "m1_min": space.m1_min,
        "m1_max": space.m1_max,
    }


def _write_records(args, records, provenance, extra=None) -> str | None:
    path = _output_path(args.output)
    if path is None:
        return None
    if args.format == "json":
        optimizer.write_json(path, records, provenance, extra)
    else:
        optimizer.write_csv(path, records, provenance, extra)
    return path


def _summary(record: optimizer.OptimumRecord, prefix: str = "") -> str:
    geometry = record.geometry or "none"
    return (
        f"{prefix}R_eff = {record.R_eff:.6e} Hz  geometry = {geometry}"
        f"  m = {record.m}  secure = {str(record.secure).lower()}"
    )


def _best(records) -> optimizer.OptimumRecord:
    return max(records, key=lambda r: r.R_eff)


# --- verbs ------------------------------------------------------------------


def _record_from_eval(res: keyrate.EvalResult) -> optimizer.OptimumRecord:
    cfg = res.config
    return optimizer.OptimumRecord(
        protocol=cfg.protocol,
        scheme=cfg.scheme,
        gamma_ghz=cfg.emitter.gamma_ghz,
        tcoh_s=cfg.emitter.t_coh,
        R_eff=res.R_eff,
        spacing_km=cfg.channel.L / (res.m + 1) / 1e3,
        geometry=cfg.geometry.canonical(),
        m=res.m,
        n=res.n,
        L_feedback=res.link.L_feedback,
        L_delay=res.link.L_delay,
        secure=res.secure,
        config=cfg,
    )


def _run_evaluate(args) -> int:
    cfg = config_from_mapping(_resolve_values(args))
    record = _record_from_eval(keyrate.evaluate(cfg))
    _write_records(args, [record], _provenance(args, cfg, geometry=record.geometry, m=record.m))
    print(_summary(record))
    return 0


def _run_optimize(args) -> int:
    values = _resolve_values(args)
    cfg = config_from_mapping(values)
    space = _resolve_space(args)
    record = optimizer.optimize(
        cfg.protocol,
        cfg.scheme,
        cfg.emitter,
        cfg.channel,
        space,
        prune=not args.no_prune,
        **_search_kwargs(cfg),
    )
    _write_records(args, [record], {**_provenance(args, cfg), **_space_provenance(space)})
    print(_summary(record))
    return 0


def _run_sweep(args) -> int:
    gammas, tcohs = _parse_grid(args.grid)
    values = _resolve_values(args)
    values.setdefault("gamma_ghz", repr(gammas[0]))
    values.setdefault("tcoh_s", repr(tcohs[0]))
    cfg = config_from_mapping(values)
    space = _resolve_space(args)
    records = optimizer.sweep(
        cfg.protocol,
        cfg.scheme,
        gammas,
        tcohs,
        cfg.channel,
        space,
        parallelism=args.parallelism,
        **_search_kwargs(cfg),
    )
    provenance = {
        **_provenance(args, cfg, grid=args.grid),
        **_space_provenance(space),
    }
    _write_records(args, records, provenance)
    print(_summary(_best(records), prefix=f"rows = {len(records)}  best: "))
    return 0


def _run_scan(args) -> int:
    distances_km = _csv_floats("l_km_grid", args.l_km_grid)
    values = _resolve_values(args)
    values.setdefault("gamma_ghz", repr(optimizer.SCAN_GAMMA_GHZ))
    values.setdefault("tcoh_s", repr(optimizer.SCAN_TCOH_S))
    cfg = config_from_mapping(values)
    space = _resolve_space(args)
    records = optimizer.distance_scan(
        cfg.protocol,
        cfg.scheme,
        cfg.emitter,
        [L * 1e3 for L in distances_km],
        cfg.channel,
        space,
        parallelism=args.parallelism,
        **_search_kwargs(cfg),
    )
    provenance = {
        **_provenance(args, cfg, l_km_grid=args.l_km_grid),
        **_space_provenance(space),
    }
    _write_records(args, records, provenance, extra={"L_km": distances_km})
    print(_summary(_best(records), prefix=f"rows = {len(records)}  best: "))
    return 0


def _run_sequence(args) -> int:
    cfg = config_from_mapping(_resolve_values(args))
    schedule = sequencer.build_schedule(
        cfg.protocol, cfg.scheme, cfg.geometry, cfg.gate_times()
    )
    path = _output_path(args.output)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(sequencer.trace(schedule))
    print(
        f"makespan = {schedule.makespan:.6e} s  geometry = {cfg.geometry.canonical()}"
        f"  events = {len(schedule.events)}  photons = {len(schedule.emission_order)}"
    )
    return 0


def _run_oracle(args) -> int:
    branchings = parse_branchings(args.branchings)
    tree = TreeGeometry(branchings)
    if args.kind == "exhaustive":
        value = oracle.exhaustive_tree_success(tree, args.mu)
        print(f"exhaustive tree success = {value!r}")
        return 0
    if args.kind == "mc-tree":
        rep = oracle.mc_tree_logical_error(
            tree, args.mu, args.eps_sp, args.trials, seed=args.seed
        )
        print(
            f"mc tree logical error = {rep.estimate:.6e} +/- {rep.std_error:.1e}"
            f"  trials = {rep.trials}  seed = {rep.seed}"
        )
        return 0
    geometry = RgsGeometry(args.rgs_n, tree)
    success, infid = oracle.mc_rgs_link(
        geometry, args.mu, args.eps_sp, args.trials, seed=args.seed
    )
    print(
        f"mc rgs success = {success.estimate:.6e} +/- {success.std_error:.1e}"
        f"  infidelity = {infid.estimate:.6e} +/- {infid.std_error:.1e}"
        f"  seed = {success.seed}"
    )
    return 0


_VERBS = {
    "evaluate": _run_evaluate,
    "optimize": _run_optimize,
    "sweep": _run_sweep,
    "scan": _run_scan,
    "sequence": _run_sequence,
    "oracle": _run_oracle,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return _VERBS[args.verb](args)


def main(argv=None) -> int:
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 3
    except Exception as exc:  # runtime failures map to a distinct exit code
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
