"""One-shot verification suite: invariants a healthy configuration must pass.

Runs round-trip identities, bound orderings, simulation sandwich checks,
and window-truncation diagnostics for the configured channel, and reports
one pass/fail line per check.  Intended as a quick field check of an
installation or a configuration; the full test suite is stricter.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import bounds as bd
from . import channel as ch
from . import sim as sm
from .bounds import PolicyFamily
from .channel import ConstantFading, FixedDistance
from .config import RunConfig
from .errors import TxcapError
from .sweep import policy_for

__all__ = ["CheckResult", "run_verification"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def run_verification(cfg: RunConfig) -> list[CheckResult]:
    spec, net = cfg.channel, cfg.network
    density = net.density
    results: list[CheckResult] = []
    p_grid = (0.02, 0.1, 0.35, 0.75)

    # Threshold map round trip.
    try:
        worst = max(
            abs(ch.signal_ccdf(spec, ch.threshold_for_probability(spec, p)) - p)
            for p in p_grid
        )
        results.append(_check("threshold_map_round_trip", worst < 1e-9, f"max |F(t(p))-p| = {worst:.3e}"))
    except TxcapError as exc:
        results.append(_check("threshold_map_round_trip", False, str(exc)))

    # gamma round trip on thresholds drawn from the admissible range.
    try:
        worst = 0.0
        for p in p_grid:
            t = ch.threshold_for_probability(spec, p)
            g = bd.gamma_of_t(spec, density, t)
            if 0.0 < g < bd.theta(spec) * density:
                t_back = bd.gamma_inverse(spec, density, g)
                worst = max(worst, abs(t_back - t) / max(t, 1e-12))
        results.append(_check("gamma_round_trip", worst < 1e-8, f"max rel err = {worst:.3e}"))
    except TxcapError as exc:
        results.append(_check("gamma_round_trip", False, str(exc)))

    # kappa(t) continuity at zero and monotone decrease.
    try:
        k0, k = bd.kappa_t(spec, 0.0), bd.kappa(spec)
        ts = [ch.threshold_for_probability(spec, p) for p in p_grid]
        ks = [bd.kappa_t(spec, t) for t in sorted(ts)]
        monotone = all(a > b for a, b in zip(ks, ks[1:]))
        ok = abs(k0 - k) <= 1e-9 * k and monotone
        results.append(_check("kappa_threshold_limit", ok, f"|k(0)-k|/k = {abs(k0 - k) / k:.3e}, monotone = {monotone}"))
    except TxcapError as exc:
        results.append(_check("kappa_threshold_limit", False, str(exc)))

    # Conditional moment against direct quadrature of the defining integral.
    try:
        direct = cond = None
        if isinstance(spec.distance, FixedDistance):
            direct = spec.distance.r**2 * ch.expect_psi(
                spec.fading, lambda v: v ** (-spec.delta)
            )
        elif isinstance(spec.fading, ConstantFading):
            direct = spec.fading.psi ** (-spec.delta) * ch.expect_distance(
                spec.distance, lambda d: d * d
            )
        cond = ch.cond_moment_w(spec, 0.0)
        rel = abs(cond - direct) / direct
        results.append(_check("moment_vs_quadrature", rel < 1e-6, f"rel err = {rel:.3e}"))
    except TxcapError as exc:
        results.append(_check("moment_vs_quadrature", False, str(exc)))

    # Threshold scheduling at t = 0 must coincide with always-transmit.
    try:
        diffs = []
        for fam_ra, fam_th in ((PolicyFamily.RA_NOPC, PolicyFamily.TH_NOPC), (PolicyFamily.RA_CI, PolicyFamily.TH_CI)):
            b_ra = bd.outage_bounds(spec, policy_for(spec, fam_ra, 1.0), density)
            b_th = bd.outage_bounds(spec, policy_for(spec, fam_th, 1.0), density)
            diffs += [abs(b_ra.q_lower - b_th.q_lower), abs(b_ra.q_upper - b_th.q_upper)]
        results.append(_check("zero_threshold_consistency", max(diffs) < 1e-9, f"max diff = {max(diffs):.3e}"))
    except TxcapError as exc:
        results.append(_check("zero_threshold_consistency", False, str(exc)))

    # Channel inversion must raise the outage lower bound (strict ordering).
    try:
        ordered = True
        for p in p_grid:
            q_npc = bd.outage_bounds(spec, policy_for(spec, PolicyFamily.RA_NOPC, p), density).q_lower
            q_ci = bd.outage_bounds(spec, policy_for(spec, PolicyFamily.RA_CI, p), density).q_lower
            ordered &= q_ci > q_npc
        results.append(_check("inversion_ordering", ordered, "q_lower(inversion) > q_lower(unit) on grid"))
    except TxcapError as exc:
        results.append(_check("inversion_ordering", False, str(exc)))

    # Analytic sandwich.
    try:
        ok = True
        for p in p_grid:
            for fam in PolicyFamily:
                b = bd.outage_bounds(spec, policy_for(spec, fam, p), density)
                ok &= b.q_lower <= b.q_upper + 1e-12
        results.append(_check("analytic_sandwich", ok, "q_lower <= q_upper everywhere"))
    except TxcapError as exc:
        results.append(_check("analytic_sandwich", False, str(exc)))

    # Simulation sandwich on a small grid.
    sim_cfg = cfg.sim
    try:
        ok = True
        details = []
        for i, p in enumerate((0.05, 0.2)):
            for j, fam in enumerate(PolicyFamily):
                policy = policy_for(spec, fam, p)
                b = bd.outage_bounds(spec, policy, density)
                if b.q_upper >= 1.0:
                    continue
                est = sm.estimate_outage(
                    spec, net, policy, replace(sim_cfg, master_seed=sim_cfg.master_seed + 97 * i + j)
                )
                inside = b.q_lower - est.ci_half_width <= est.mean <= b.q_upper + est.ci_half_width
                ok &= inside
                if not inside:
                    details.append(f"{fam.value}@p={p}: sim {est.mean:.4f} outside [{b.q_lower:.4f}, {b.q_upper:.4f}]")
        results.append(_check("simulated_sandwich", ok, "; ".join(details) or "all points inside bounds +- CI"))
    except TxcapError as exc:
        results.append(_check("simulated_sandwich", False, str(exc)))

    # The dominant-interferer probability is the exact lower bound under inversion.
    try:
        policy = policy_for(spec, PolicyFamily.RA_CI, 0.1)
        b = bd.outage_bounds(spec, policy, density)
        dom = sm.dominant_interferer_probability(spec, net, policy, sim_cfg)
        gap = abs(dom.mean - b.q_lower)
        results.append(_check("dominant_interferer_equality", gap <= dom.ci_half_width, f"|sim - bound| = {gap:.4f}, CI = {dom.ci_half_width:.4f}"))
    except TxcapError as exc:
        results.append(_check("dominant_interferer_equality", False, str(exc)))

    # Window truncation: doubling the radius must not move the estimate.
    try:
        policy = policy_for(spec, PolicyFamily.RA_NOPC, 0.05)
        report = sm.truncation_convergence_check(spec, net, policy, sim_cfg)
        results.append(_check("window_truncation", report.passed, f"|dq| = {report.delta:.5f}, threshold = {report.threshold:.5f}"))
    except TxcapError as exc:
        results.append(_check("window_truncation", False, str(exc)))

    # Interference tail exponent from the empirical characteristic function.
    try:
        ecf_cfg = replace(sim_cfg, trials=min(sim_cfg.trials, 10_000))
        slope = sm.ecf_stability_diagnostic(spec, net, ecf_cfg)
        ok = abs(slope - spec.delta) < 0.08
        results.append(_check("stability_exponent", ok, f"slope = {slope:.3f}, expected {spec.delta:.3f}"))
    except TxcapError as exc:
        results.append(_check("stability_exponent", False, str(exc)))

    return results
