"""Sweep runner: tabulate bounds and simulation estimates over a grid.

Produces a CSV (stable formatting: full-precision repr, LF endings, so a
given configuration and seed reproduces the file byte for byte), an
optional static plot rendered from the CSV, and a JSON manifest recording
the resolved parameters, seed, and per-point notes.

Threshold policies share the activity abscissa with random access through
the map t(p), the threshold at which the active fraction equals p, so the
two scheduling rules are directly comparable point by point.
"""

from __future__ import annotations

import csv
import datetime
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__ as _version
from . import bounds as bd
from . import channel as ch
from . import sim as sm
from .bounds import PolicyFamily, PolicySpec, PowerControl, RandomAccess, ThresholdSchedule
from .channel import ChannelSpec, LognormalFading, RayleighFading
from .config import RunConfig, SweepSettings
from .errors import SaturationError, TxcapError, ValidityWindowError

__all__ = ["RunManifest", "run_sweep", "render_plot", "policy_for", "family_of_name"]

_NAME_TO_FAMILY = {f.value: f for f in PolicyFamily}


def family_of_name(name: str) -> PolicyFamily:
    return _NAME_TO_FAMILY[name]


def policy_for(spec: ChannelSpec, family: PolicyFamily, p: float) -> PolicySpec:
    """Concrete policy at activity fraction p; thresholds go through t(p)."""
    power = PowerControl.INVERSION if family.channel_inversion else PowerControl.UNIT
    if family.threshold_scheduling:
        t = 0.0 if p >= 1.0 else ch.threshold_for_probability(spec, p)
        return PolicySpec(ThresholdSchedule(t), power)
    return PolicySpec(RandomAccess(p), power)


@dataclass
class RunManifest:
    """Traceability record for one sweep: inputs, seed, and per-point rows."""

    version: str
    created: str
    seed: int
    parameters: dict
    points: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": self.version,
                "created": self.created,
                "seed": self.seed,
                "parameters": self.parameters,
                "points": self.points,
                "notes": self.notes,
            },
            indent=2,
            sort_keys=True,
        )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sub_seed(master: int, *indices: int) -> int:
    return int(np.random.SeedSequence([master, *indices]).generate_state(1, np.uint64)[0])


def _point_columns_p(
    cfg: RunConfig, sweep: SweepSettings, p: float, point_index: int, notes: list
) -> dict:
    spec, net = cfg.channel, cfg.network
    row: dict = {"p": p}
    for j, name in enumerate(sweep.policies):
        family = family_of_name(name)
        try:
            policy = policy_for(spec, family, p)
        except TxcapError as exc:
            notes.append(f"p={p} {name}: {exc}")
            continue
        bset = bd.outage_bounds(spec, policy, net.density)
        if family.threshold_scheduling:
            row[f"{name}_t"] = policy.scheduling.t
        row[f"{name}_mu"] = bset.mu
        row[f"{name}_q_lower"] = bset.q_lower
        row[f"{name}_q_upper"] = bset.q_upper
        row[f"{name}_tau_lower"] = bset.tau_lower
        row[f"{name}_tau_upper"] = bset.tau_upper
        if sweep.run_sim:
            sim_cfg = replace(cfg.sim, master_seed=_sub_seed(cfg.sim.master_seed, point_index, j))
            est = sm.estimate_outage(spec, net, policy, sim_cfg)
            row[f"{name}_q_sim"] = est.mean
            row[f"{name}_q_sim_ci"] = est.ci_half_width
            row[f"{name}_tau_sim"] = bset.mu * (1.0 - est.mean)
    return row


def _point_columns_eps(
    cfg: RunConfig, sweep: SweepSettings, eps: float, point_index: int, notes: list
) -> dict:
    spec, net = cfg.channel, cfg.network
    row: dict = {"eps": eps}
    for j, name in enumerate(sweep.policies):
        family = family_of_name(name)
        try:
            c_lower, c_upper = bd.transmission_capacity_bounds(spec, family, net.density, eps)
            row[f"{name}_c_lower"] = c_lower
            row[f"{name}_c_upper"] = c_upper
        except ValidityWindowError as exc:
            notes.append(f"eps={eps} {name}: {exc}")
            row[f"{name}_c_lower"] = math.nan
            row[f"{name}_c_upper"] = math.nan
        if sweep.run_sim:
            sim_cfg = replace(cfg.sim, master_seed=_sub_seed(cfg.sim.master_seed, point_index, j))
            try:
                est = sm.estimate_capacity(spec, net, family, sim_cfg, eps)
                row[f"{name}_c_sim"] = est.mean
                row[f"{name}_c_sim_ci"] = est.ci_half_width
            except SaturationError as exc:
                notes.append(f"eps={eps} {name}: {exc}")
                row[f"{name}_c_sim"] = math.nan
                row[f"{name}_c_sim_ci"] = math.nan
    return row


def _point_columns_alpha(cfg: RunConfig, alpha: float) -> dict:
    sigma = (
        cfg.channel.fading.sigma
        if isinstance(cfg.channel.fading, LognormalFading)
        else LognormalFading.from_db(6.0).sigma
    )
    f_ray = bd.fading_tc_factor(RayleighFading(), alpha)
    f_log = bd.fading_tc_factor(LognormalFading(sigma), alpha)
    # Independent gain factors multiply, so the combined effect is the product.
    return {
        "alpha": alpha,
        "factor_rayleigh": f_ray,
        "factor_lognormal": f_log,
        "factor_combined": f_ray * f_log,
    }


def run_sweep(cfg: RunConfig, out_dir: str | Path) -> RunManifest:
    """Run the configured sweep, writing CSV, optional plot, and manifest."""
    if cfg.sweep is None:
        raise ValidityWindowError("configuration has no [sweep] section")
    sweep = cfg.sweep
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        version=_version,
        created=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        seed=cfg.sim.master_seed,
        parameters={
            "example": cfg.example,
            "alpha": cfg.channel.alpha,
            "beta": cfg.channel.beta,
            "density": cfg.network.density,
            "x_axis": sweep.x_axis,
            "policies": list(sweep.policies),
            "grid": list(sweep.grid),
            "sim": sweep.run_sim,
            "trials": cfg.sim.trials,
            "window_radius": cfg.sim.window_radius,
            "d_min": cfg.sim.d_min,
        },
    )
    rows = []
    for i, x in enumerate(sweep.grid):
        if sweep.x_axis == "p":
            rows.append(_point_columns_p(cfg, sweep, x, i, manifest.notes))
        elif sweep.x_axis == "eps":
            rows.append(_point_columns_eps(cfg, sweep, x, i, manifest.notes))
        else:
            rows.append(_point_columns_alpha(cfg, x))
    manifest.points = rows

    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    csv_path = out / sweep.csv_name
    with open(csv_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(row.get(key)) for key in header) + "\n")

    manifest_path = out / (Path(sweep.csv_name).stem + "_manifest.json")
    manifest_path.write_text(manifest.to_json() + "\n", encoding="utf-8")

    if sweep.plot_name:
        render_plot(csv_path, out / sweep.plot_name, sweep.x_axis)
    return manifest


def render_plot(csv_path: str | Path, plot_path: str | Path, x_axis: str) -> None:
    """Render a static vector figure from a sweep CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(csv_path, "r", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        rows = list(reader)
    if not rows:
        return

    def column(name: str) -> np.ndarray:
        return np.array([float(row[name]) if row.get(name) else math.nan for row in rows])

    x = column(x_axis)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    if x_axis == "alpha":
        for key, label in (
            ("factor_rayleigh", "Rayleigh"),
            ("factor_lognormal", "lognormal"),
            ("factor_combined", "combined"),
        ):
            ax.plot(x, column(key), label=label)
        ax.set_ylabel("capacity factor")
    else:
        prefix = "q" if x_axis == "p" else "c"
        policies = sorted(
            {key.rsplit("_", 2)[0] for key in rows[0] if key.endswith(f"_{prefix}_lower")}
        )
        colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
        for k, name in enumerate(policies):
            color = colors[k % len(colors)]
            ax.plot(x, column(f"{name}_{prefix}_lower"), color=color, ls="--", lw=1.0)
            ax.plot(x, column(f"{name}_{prefix}_upper"), color=color, ls="-", lw=1.0, label=name)
            sim_key = f"{name}_{prefix}_sim"
            if sim_key in rows[0]:
                ax.errorbar(
                    x,
                    column(sim_key),
                    yerr=column(f"{sim_key}_ci"),
                    color=color,
                    fmt="o",
                    ms=3.5,
                    capsize=2.0,
                    lw=0.8,
                )
        ax.set_ylabel("outage probability" if x_axis == "p" else "transmission capacity")
    ax.set_xlabel(x_axis)
    ax.grid(True, alpha=0.3, linestyle=":")
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(plot_path)
    plt.close(fig)
