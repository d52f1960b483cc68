"""Run-configuration parsing: sectioned key = value files.

The format is deliberately rigid so that runs are reproducible: sections
map to subsystems, every key is checked against a schema, and unknown keys
or sections are hard errors.  Example::

    [channel]
    example = rayleigh
    alpha = 4.0
    beta = 3.0
    r = 5.0

    [network]
    lambda = 0.01

    [sim]
    trials = 20000
    master_seed = 42

    [sweep]
    policies = ra_nopc, ra_ci, th_nopc, th_ci
    x_axis = p
    grid = 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0
    sim = true
    csv = sweep.csv
    plot = sweep.svg
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .channel import (
    ChannelSpec,
    ConstantFading,
    FixedDistance,
    LognormalFading,
    NearestReceiver,
    NetworkSpec,
    RayleighFading,
)
from .errors import ConfigError, DomainError
from .sim import SimConfig

__all__ = ["RunConfig", "SweepSettings", "load_config", "parse_config_text"]

EXAMPLES = ("lognormal", "rayleigh", "nearest")
POLICY_NAMES = ("ra_nopc", "ra_ci", "th_nopc", "th_ci")
X_AXES = ("p", "eps", "alpha")

_SCHEMA = {
    "channel": {"example", "alpha", "beta", "r", "sigma_db", "psi", "lambda_prime"},
    "network": {"lambda"},
    "sim": {"window_radius", "d_min", "trials", "master_seed", "ci_level"},
    "sweep": {"policies", "x_axis", "grid", "sim", "csv", "plot"},
}


@dataclass(frozen=True)
class SweepSettings:
    policies: tuple[str, ...]
    x_axis: str
    grid: tuple[float, ...]
    run_sim: bool
    csv_name: str
    plot_name: str | None


@dataclass(frozen=True)
class RunConfig:
    example: str
    channel: ChannelSpec
    network: NetworkSpec
    sim: SimConfig
    sweep: SweepSettings | None


def _to_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from exc


def _to_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from exc


def _to_bool(section: str, key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"[{section}] {key} = {raw!r} is not a boolean")


def parse_config_text(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    chan = parser["channel"] if parser.has_section("channel") else {}
    example = str(chan.get("example", "rayleigh")).strip().lower()
    if example not in EXAMPLES:
        raise ConfigError(f"example must be one of {EXAMPLES}, got {example!r}")
    alpha = _to_float("channel", "alpha", chan.get("alpha", "4.0"))
    beta = _to_float("channel", "beta", chan.get("beta", "3.0"))
    r = _to_float("channel", "r", chan.get("r", "5.0"))
    sigma_db = _to_float("channel", "sigma_db", chan.get("sigma_db", "6.0"))
    psi = _to_float("channel", "psi", chan.get("psi", "1.0"))

    net_section = parser["network"] if parser.has_section("network") else {}
    density = _to_float("network", "lambda", net_section.get("lambda", "0.01"))
    lambda_prime = _to_float(
        "channel", "lambda_prime", chan.get("lambda_prime", repr(density))
    )

    try:
        if example == "lognormal":
            channel = ChannelSpec(
                alpha=alpha,
                beta=beta,
                fading=LognormalFading.from_db(sigma_db),
                distance=FixedDistance(r),
            )
        elif example == "rayleigh":
            channel = ChannelSpec(
                alpha=alpha, beta=beta, fading=RayleighFading(), distance=FixedDistance(r)
            )
        else:
            channel = ChannelSpec(
                alpha=alpha,
                beta=beta,
                fading=ConstantFading(psi),
                distance=NearestReceiver(lambda_prime),
            )
        network = NetworkSpec(density)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc

    sim_section = parser["sim"] if parser.has_section("sim") else {}
    try:
        sim = SimConfig(
            window_radius=_to_float(
                "sim", "window_radius", sim_section.get("window_radius", "500.0")
            ),
            d_min=_to_float("sim", "d_min", sim_section.get("d_min", "0.5")),
            trials=_to_int("sim", "trials", sim_section.get("trials", "100000")),
            master_seed=_to_int("sim", "master_seed", sim_section.get("master_seed", "0")),
            ci_level=_to_float("sim", "ci_level", sim_section.get("ci_level", "0.95")),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc

    sweep = None
    if parser.has_section("sweep"):
        sw = parser["sweep"]
        policies = tuple(
            token.strip().lower()
            for token in sw.get("policies", ", ".join(POLICY_NAMES)).split(",")
            if token.strip()
        )
        if not policies:
            raise ConfigError("sweep needs at least one policy")
        for name in policies:
            if name not in POLICY_NAMES:
                raise ConfigError(f"unknown policy {name!r}; choose from {POLICY_NAMES}")
        x_axis = str(sw.get("x_axis", "p")).strip().lower()
        if x_axis not in X_AXES:
            raise ConfigError(f"x_axis must be one of {X_AXES}, got {x_axis!r}")
        raw_grid = sw.get("grid", "")
        grid = tuple(
            _to_float("sweep", "grid", token.strip())
            for token in raw_grid.split(",")
            if token.strip()
        )
        if not grid:
            raise ConfigError("sweep grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("sweep grid must be strictly increasing")
        if x_axis == "p" and not all(0.0 < v <= 1.0 for v in grid):
            raise ConfigError("p grid values must lie in (0, 1]")
        if x_axis == "eps" and not all(0.0 < v < 1.0 for v in grid):
            raise ConfigError("eps grid values must lie in (0, 1)")
        if x_axis == "alpha" and not all(v > 2.0 for v in grid):
            raise ConfigError("alpha grid values must exceed 2")
        plot_name = sw.get("plot", "").strip() or None
        sweep = SweepSettings(
            policies=policies,
            x_axis=x_axis,
            grid=grid,
            run_sim=_to_bool("sweep", "sim", sw.get("sim", "true")),
            csv_name=sw.get("csv", "sweep.csv").strip(),
            plot_name=plot_name,
        )

    return RunConfig(example=example, channel=channel, network=network, sim=sim, sweep=sweep)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config_text(text)
