import csv
import json
import math

import pytest

from txcap import ConfigError
from txcap.cli import main
from txcap.config import parse_config_text
from txcap.sweep import run_sweep

BASE = """
[channel]
example = {example}
alpha = 4.0
beta = 3.0
r = 5.0

[network]
lambda = 0.01

[sim]
trials = {trials}
master_seed = {seed}
window_radius = {radius}
d_min = 0.5

[sweep]
policies = {policies}
x_axis = {x_axis}
grid = {grid}
sim = {sim}
csv = out.csv
plot = {plot}
"""


def write_config(tmp_path, **kw):
    defaults = dict(
        example="rayleigh",
        trials=800,
        seed=42,
        radius=500,
        policies="ra_nopc, ra_ci",
        x_axis="p",
        grid="0.05, 0.2, 0.5",
        sim="true",
        plot="out.svg",
    )
    defaults.update(kw)
    path = tmp_path / "run.ini"
    path.write_text(BASE.format(**defaults))
    return str(path)


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def test_parse_defaults():
    cfg = parse_config_text("[channel]\nexample = rayleigh\n")
    assert cfg.example == "rayleigh"
    assert cfg.channel.alpha == 4.0
    assert cfg.network.density == 0.01
    assert cfg.sweep is None


def test_unknown_key_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config_text("[channel]\nexample = rayleigh\nbogus = 1\n")
    assert "bogus" in str(err.value)


def test_unknown_section_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("[nonsense]\nx = 1\n")


def test_invalid_alpha_message():
    with pytest.raises(ConfigError) as err:
        parse_config_text("[channel]\nexample = rayleigh\nalpha = 1.5\n")
    assert "alpha must exceed 2" in str(err.value)


def test_empty_policy_list_rejected():
    text = "[sweep]\npolicies =\ngrid = 0.1, 0.2\n"
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert "policy" in str(err.value)


def test_non_monotone_grid_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("[sweep]\ngrid = 0.2, 0.1\n")


def test_out_of_domain_grid_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("[sweep]\nx_axis = p\ngrid = 0.5, 1.5\n")
    with pytest.raises(ConfigError):
        parse_config_text("[sweep]\nx_axis = eps\ngrid = 0.5, 1.0\n")
    with pytest.raises(ConfigError):
        parse_config_text("[sweep]\nx_axis = alpha\ngrid = 1.0, 3.0\n")


def test_nearest_defaults_receiver_density_to_lambda():
    cfg = parse_config_text("[channel]\nexample = nearest\n\n[network]\nlambda = 0.02\n")
    assert cfg.channel.distance.lambda_prime == 0.02


# ---------------------------------------------------------------------------
# Sweep runner
# ---------------------------------------------------------------------------

def test_sweep_csv_is_byte_stable(tmp_path):
    path = write_config(tmp_path, trials=300)
    cfg = parse_config_text(open(path).read())
    run_sweep(cfg, tmp_path / "a")
    run_sweep(cfg, tmp_path / "b")
    assert (tmp_path / "a" / "out.csv").read_bytes() == (tmp_path / "b" / "out.csv").read_bytes()


def test_sweep_seed_changes_sim_columns(tmp_path):
    base = parse_config_text(open(write_config(tmp_path, trials=300)).read())
    other = parse_config_text(open(write_config(tmp_path, trials=300, seed=43)).read())
    run_sweep(base, tmp_path / "a")
    run_sweep(other, tmp_path / "b")
    assert (tmp_path / "a" / "out.csv").read_bytes() != (tmp_path / "b" / "out.csv").read_bytes()


def test_sweep_outputs_and_columns(tmp_path):
    path = write_config(tmp_path, policies="ra_nopc, th_ci", trials=300)
    code = main(["sweep", "--config", path, "--out-dir", str(tmp_path / "out")])
    assert code == 0
    with open(tmp_path / "out" / "out.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3
    for col in (
        "p",
        "ra_nopc_q_lower",
        "ra_nopc_q_upper",
        "ra_nopc_q_sim",
        "ra_nopc_tau_upper",
        "th_ci_t",
        "th_ci_q_sim_ci",
    ):
        assert col in rows[0]
    assert (tmp_path / "out" / "out.svg").exists()
    manifest = json.loads((tmp_path / "out" / "out_manifest.json").read_text())
    assert manifest["seed"] == 42
    assert len(manifest["points"]) == 3


def test_sweep_no_sim_flag(tmp_path):
    path = write_config(tmp_path)
    code = main(["sweep", "--config", path, "--out-dir", str(tmp_path / "out"), "--no-sim"])
    assert code == 0
    with open(tmp_path / "out" / "out.csv") as handle:
        header = handle.readline()
    assert "q_sim" not in header


def test_eps_sweep_reports_window_violations_and_continues(tmp_path):
    path = write_config(
        tmp_path,
        x_axis="eps",
        grid="0.05, 0.1, 0.95",
        policies="th_ci",
        sim="false",
        plot="",
    )
    code = main(["sweep", "--config", path, "--out-dir", str(tmp_path / "out")])
    assert code == 0
    with open(tmp_path / "out" / "out.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3
    assert rows[0]["th_ci_c_lower"] != "nan"
    assert rows[2]["th_ci_c_lower"] == "nan"
    manifest = json.loads((tmp_path / "out" / "out_manifest.json").read_text())
    assert any("window" in note for note in manifest["notes"])


def test_alpha_sweep_hits_fading_anchor(tmp_path):
    path = write_config(
        tmp_path, x_axis="alpha", grid="2.5, 3.0, 4.0", sim="false", plot=""
    )
    code = main(["sweep", "--config", path, "--out-dir", str(tmp_path / "out")])
    assert code == 0
    with open(tmp_path / "out" / "out.csv") as handle:
        rows = list(csv.DictReader(handle))
    at3 = [row for row in rows if float(row["alpha"]) == 3.0][0]
    assert abs(float(at3["factor_rayleigh"]) - 0.4135) < 1e-3
    combined = float(at3["factor_rayleigh"]) * float(at3["factor_lognormal"])
    assert math.isclose(float(at3["factor_combined"]), combined, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[channel]\nexample = rayleigh\nalpha = 1.5\n")
    assert main(["verify", "--config", str(bad)]) == 2
    assert main(["sweep", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2


def test_missing_config_exit_code(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "absent.ini")]) == 2


def test_verify_passes_on_healthy_config(tmp_path, capsys):
    path = write_config(tmp_path, trials=2500, seed=42)
    code = main(["verify", "--config", path])
    out = capsys.readouterr().out
    assert code == 0
    assert "FAIL" not in out


def test_verify_fails_on_tiny_window(tmp_path, capsys):
    path = write_config(tmp_path, trials=2500, seed=3, radius=10)
    code = main(["verify", "--config", path])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out


def test_capacity_subcommand(tmp_path, capsys):
    path = write_config(tmp_path, trials=800)
    code = main(
        ["capacity", "--config", path, "--eps", "0.1", "--policy", "ra_ci", "--no-sim"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "c_lower" in out and "c_upper" in out


def test_optimal_subcommand(tmp_path, capsys):
    path = write_config(tmp_path)
    code = main(["optimal", "--config", path])
    out = capsys.readouterr().out
    assert code == 0
    assert "mu*" in out and "t_opt" in out
