"""Command-line front end.

Subcommands: ``sweep`` (tabulate bounds and simulation over a grid),
``verify`` (run the invariant suite against a configuration), ``capacity``
(capacity bounds and empirical estimate at one outage target), and
``optimal`` (throughput-optimal operating points).

Exit codes: 0 on success, 1 when verification fails, 2 on configuration
errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from . import __version__, bounds as bd, channel as ch, sim as sm
from .config import POLICY_NAMES, RunConfig, load_config
from .errors import (
    ConfigError,
    SaturationError,
    TxcapError,
    UnsaturatedNetworkError,
    ValidityWindowError,
)
from .sweep import family_of_name, run_sweep
from .verify import run_verification


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="txcap",
        description="Outage, throughput, and transmission-capacity analysis "
        "of Poisson interference fields.",
    )
    parser.add_argument("--version", action="version", version=f"txcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="path to a run configuration file")
        p.add_argument("--seed", type=int, default=None, help="override master seed")
        p.add_argument("--trials", type=int, default=None, help="override trial count")

    p_sweep = sub.add_parser("sweep", help="run the configured sweep and emit CSV/plot")
    common(p_sweep)
    p_sweep.add_argument("--out-dir", default=".", help="directory for CSV/plot/manifest")
    p_sweep.add_argument("--no-sim", action="store_true", help="skip Monte Carlo columns")

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    common(p_verify)

    p_cap = sub.add_parser("capacity", help="capacity bounds at one outage target")
    common(p_cap)
    p_cap.add_argument("--eps", type=float, required=True, help="outage target in (0,1)")
    p_cap.add_argument(
        "--policy",
        action="append",
        choices=POLICY_NAMES,
        help="policy family (repeatable; default all four)",
    )
    p_cap.add_argument("--no-sim", action="store_true", help="skip the empirical estimate")

    p_opt = sub.add_parser("optimal", help="throughput-optimal operating points")
    common(p_opt)
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    sim = cfg.sim
    if args.seed is not None:
        sim = replace(sim, master_seed=args.seed)
    if args.trials is not None:
        sim = replace(sim, trials=args.trials)
    return RunConfig(
        example=cfg.example, channel=cfg.channel, network=cfg.network, sim=sim, sweep=cfg.sweep
    )


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    if cfg.sweep is None:
        raise ConfigError("config has no [sweep] section")
    if args.no_sim:
        cfg = RunConfig(
            example=cfg.example,
            channel=cfg.channel,
            network=cfg.network,
            sim=cfg.sim,
            sweep=replace(cfg.sweep, run_sim=False),
        )
    manifest = run_sweep(cfg, args.out_dir)
    print(f"wrote {len(manifest.points)} grid points to {args.out_dir}")
    for note in manifest.notes:
        print(f"note: {note}")
    return 0


def _cmd_verify(args) -> int:
    cfg = _load(args)
    results = run_verification(cfg)
    failures = 0
    for res in results:
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag} {res.name}: {res.detail}")
        failures += 0 if res.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 1 if failures else 0


def _cmd_capacity(args) -> int:
    cfg = _load(args)
    names = args.policy or list(POLICY_NAMES)
    spec, net = cfg.channel, cfg.network
    if isinstance(spec.fading, ch.RayleighFading) and not math.isfinite(
        ch.avg_inversion_power(spec, 0.0)
    ):
        print(
            "warning: mean inversion power diverges for this channel at t = 0; "
            "thresholded inversion keeps it finite"
        )
    for name in names:
        family = family_of_name(name)
        try:
            c_lower, c_upper = bd.transmission_capacity_bounds(
                spec, family, net.density, args.eps
            )
            line = f"{name}: c_lower = {c_lower:.6e}, c_upper = {c_upper:.6e}"
        except ValidityWindowError as exc:
            print(f"{name}: {exc}")
            continue
        if not args.no_sim:
            try:
                est = sm.estimate_capacity(spec, net, family, cfg.sim, args.eps)
                line += f", c_sim = {est.mean:.6e} (+-{est.ci_half_width:.1e})"
            except SaturationError as exc:
                line += f", sim: {exc}"
        print(line)
    return 0


def _cmd_optimal(args) -> int:
    cfg = _load(args)
    spec, net = cfg.channel, cfg.network
    th = bd.theta(spec)
    print(f"theta = {th:.6f} (kappa = {bd.kappa(spec):.6f})")
    try:
        point = bd.optimal_random_access(spec, net.density)
        print(
            f"random access: mu* = {point.mu_star:.6e}, tau* = {point.tau_star:.6e}, "
            f"eps* = {point.eps_star:.6f}"
        )
    except UnsaturatedNetworkError as exc:
        print(f"random access: {exc}")
    t_opt = bd.optimal_threshold(spec, net.density)
    mu_opt = net.density * ch.signal_ccdf(spec, t_opt)
    tau_opt = mu_opt * math.exp(-bd.gamma_of_t(spec, net.density, t_opt))
    print(
        f"threshold schedule: t_opt = {t_opt:.6e}, active fraction = {mu_opt / net.density:.4f}, "
        f"tau upper bound = {tau_opt:.6e}"
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "capacity": _cmd_capacity,
        "optimal": _cmd_optimal,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TxcapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
