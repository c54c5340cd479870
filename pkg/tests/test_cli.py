"""Configuration round-trip, persistence schemas, and pipeline determinism."""
import json
from pathlib import Path

import pytest

from spingrad import cli

TINY = """
[chain]
n_values = 2

[grid]
layer_values = 1, 2
tiers = T1
seeds = 204, 604

[optimizer]
max_generations = 12

[bounds]
bounds_restarts = 4
"""


def tiny_config():
    return cli.config_from_ini(TINY)


def test_default_config_reproduces_study_grid():
    config = cli.ExperimentConfig()
    assert config.n_values == (2, 3, 4, 5, 6)
    assert config.layer_values == (1, 2, 3)
    assert config.tiers == ("T1", "T2", "T3", "T4")
    assert config.seeds == (204, 604, 1204, 2004, 3004)
    assert config.trotter_steps == 400
    assert config.b0 == 0.0
    assert config.g == pytest.approx(3.141592653589793 / 100)
    assert config.regularizer == 1e-6


def test_config_ini_roundtrip_identity():
    config = cli.ExperimentConfig()
    assert cli.config_from_ini(cli.config_to_ini(config)) == config
    custom = cli.ExperimentConfig(n_values=(3, 4), sigma0=0.17,
                                  tiers=("T2",), seeds=(1, 2, 3),
                                  extra_seeds=(9,), extra_seed_cells=("N4",))
    assert cli.config_from_ini(cli.config_to_ini(custom)) == custom


def test_config_validation():
    with pytest.raises(ValueError):
        cli.ExperimentConfig(seeds=(1, 1))
    with pytest.raises(ValueError):
        cli.ExperimentConfig(tiers=("T5",))
    with pytest.raises(ValueError):
        cli.ExperimentConfig(n_values=())


def test_only_filter_parsing():
    f = cli._parse_filter("L3,N5,T1")
    assert f.matches(3, 5, "T1")
    assert not f.matches(2, 5, "T1")
    assert not f.matches(3, 4, "T1")
    assert not f.matches(3, 5, "T2")
    assert cli._parse_filter(None).matches(1, 2, "T4")
    with pytest.raises(ValueError):
        cli._parse_filter("Q7")


def test_extra_seed_policy():
    config = cli.ExperimentConfig(extra_seeds=(42,), extra_seed_cells=("N5",))
    assert config.seeds_for(5, "T1") == config.seeds + (42,)
    assert config.seeds_for(4, "T1") == config.seeds


def test_init_config_subcommand(tmp_path):
    path = tmp_path / "config.ini"
    assert cli.main(["init-config", str(path)]) == 0
    assert cli.config_from_ini(path.read_text()) == cli.ExperimentConfig()


def test_bounds_command(tmp_path):
    out = tmp_path / "out"
    config = tiny_config()
    assert cli.cmd_bounds(config, out) == 0
    payload = json.loads((out / "bounds.json").read_text())
    assert payload["schema_version"] == cli.SCHEMA_VERSION
    assert payload["rows"][0]["n_spins"] == 2
    assert payload["rows"][0]["det_q_sql"] == 1.0
    text = (out / "bounds.csv").read_text()
    assert text.startswith("# schema_version=1\n")


def test_run_analyze_end_to_end(tmp_path):
    out = tmp_path / "out"
    config = tiny_config()
    assert cli.cmd_run(config, out) == 0

    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["records"]) == 4  # 2 layers x 1 tier x 2 seeds
    assert all(e["status"] == "ok" for e in manifest["records"])
    record = json.loads((out / "L1_N2_T1" / "seed204.json").read_text())
    assert record["schema_version"] == cli.SCHEMA_VERSION
    assert record["cell"] == {"layers": 1, "n_spins": 2, "tier": "T1"}

    assert cli.cmd_analyze(config, out) == 0
    for name in ("saturation_table.csv", "tier_matrix.csv", "seed_stats.csv"):
        assert (out / "analysis" / name).exists()
    assert (out / "analysis" / "motif" / "L2_N2_T1.json").exists()


def test_rerun_is_deterministic_modulo_runtime(tmp_path):
    config = tiny_config()
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert cli.cmd_run(config, out_a) == 0
    assert cli.cmd_run(config, out_b) == 0
    for rel in ("L1_N2_T1/seed204.json", "L2_N2_T1/seed604.json"):
        pa = json.loads((out_a / rel).read_text())
        pb = json.loads((out_b / rel).read_text())
        pa.pop("runtime")
        pb.pop("runtime")
        assert pa == pb
    ma = json.loads((out_a / "manifest.json").read_text())
    mb = json.loads((out_b / "manifest.json").read_text())
    assert ma == mb  # checksums cover only the deterministic result block


def test_analysis_csvs_bit_identical_across_runs(tmp_path):
    config = tiny_config()
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cli.cmd_bounds(config, out)
        cli.cmd_run(config, out)
        cli.cmd_analyze(config, out)
        outputs.append({
            rel: (out / "analysis" / rel).read_bytes()
            for rel in ("saturation_table.csv", "tier_matrix.csv",
                        "seed_stats.csv")
        } | {"bounds.csv": (out / "bounds.csv").read_bytes()})
    assert outputs[0] == outputs[1]


def test_resume_skips_completed_cells(tmp_path):
    config = tiny_config()
    out = tmp_path / "out"
    assert cli.cmd_run(config, out) == 0
    before = {p: p.stat().st_mtime_ns
              for p in out.rglob("seed*.json")}
    assert cli.cmd_run(config, out, resume=True) == 0
    after = {p: p.stat().st_mtime_ns for p in out.rglob("seed*.json")}
    assert before == after  # nothing rewritten


def test_resume_refuses_config_mismatch(tmp_path):
    out = tmp_path / "out"
    assert cli.cmd_run(tiny_config(), out) == 0
    other = cli.ExperimentConfig(n_values=(2,), layer_values=(1,),
                                 tiers=("T1",), seeds=(204,),
                                 max_generations=5)
    with pytest.raises(ValueError):
        cli.cmd_run(other, out, resume=True)


def test_only_filter_limits_required_cells(tmp_path):
    config = cli.config_from_ini(TINY.replace("layer_values = 1, 2",
                                              "layer_values = 1, 2")
                                 .replace("seeds = 204, 604", "seeds = 204"))
    out = tmp_path / "out"
    assert cli.cmd_run(config, out, only="L2") == 0
    # the L2 cell required both depths (warm start); both persisted
    assert (out / "L1_N2_T1" / "seed204.json").exists()
    assert (out / "L2_N2_T1" / "seed204.json").exists()


def test_record_path_scheme(tmp_path):
    assert cli.record_path(Path("o"), 3, 5, "T2", 204) == Path(
        "o/L3_N5_T2/seed204.json")


def test_parallel_jobs_match_serial(tmp_path):
    config = tiny_config()
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    assert cli.cmd_run(config, serial) == 0
    assert cli.cmd_run(config, parallel, jobs=2) == 0
    for rel in sorted(p.relative_to(serial) for p in serial.rglob("seed*.json")):
        a = json.loads((serial / rel).read_text())
        b = json.loads((parallel / rel).read_text())
        assert a["result"] == b["result"]
