import json
import subprocess
import sys

import numpy as np
import pytest

from noisylearn.errors import DomainError
from noisylearn.harness.cli import main
from noisylearn.harness.config import ConfigError, parse_config, read_config_file
from noisylearn.harness.emit import read_csv, read_jsonl, render, summary_path, write_rows
from noisylearn.harness.runner import TASK_DEFS, child_seed, run_sweep, summary_fields, wilson_interval


def test_config_defaults_and_override(tmp_path):
    cfg_file = tmp_path / "sweep.cfg"
    cfg_file.write_text("# identify sweep\ntask = identify-pauli\nn = 2,3\nlambda = 0, 0.1\ntrials = 7\n")
    values = read_config_file(cfg_file)
    cfg = parse_config(values)
    assert cfg.C == 8.0 and cfg.n == (2, 3) and cfg.lam == (0.0, 0.1) and cfg.trials == 7
    assert parse_config(values, {"trials": "9"}).trials == 9


def test_config_round_trip():
    cfg = parse_config({"task": "happy", "R": "3,4", "r": "1", "erasure_rate": "0.0166666666667",
                        "trials": "50", "seed": "12345678901234567890", "timing": "true"})
    again = parse_config({k: v for k, v in (line.split(" = ") for line in cfg.to_text().splitlines())})
    assert again == cfg


@pytest.mark.parametrize("values, err", [
    ({"lambda": "1.5"}, DomainError),
    ({"trials": "0"}, ConfigError),
    ({"colour": "blue"}, ConfigError),
    ({"n": "two"}, ConfigError),
    ({"format": "xml"}, ConfigError),
])
def test_config_rejections(values, err):
    base = {"task": "purity", "n": "2", "lambda": "0.1"}
    with pytest.raises(err):
        parse_config({**base, **values})


def test_missing_keys():
    with pytest.raises(ConfigError):
        parse_config({"task": "happy", "R": "3"})
    with pytest.raises(ConfigError):
        parse_config({"n": "2"})


def test_child_seed_is_stable():
    assert child_seed(42, 0, 0) == child_seed(42, 0, 0)
    assert len({child_seed(42, g, t) for g in range(5) for t in range(5)}) == 25


def test_wilson_interval():
    lo, hi = wilson_interval(90, 100)
    assert lo == pytest.approx(0.8256, abs=1e-3) and hi == pytest.approx(0.9448, abs=1e-3)
    assert wilson_interval(0, 10)[0] == 0.0


def test_identify_grid_summary():
    cfg = parse_config({"task": "identify-pauli", "n": "2,3", "lambda": "0,0.1", "trials": "10", "seed": "1"})
    res = run_sweep(cfg)
    assert len(res.summary) == 4
    assert {(r["n"], r["lambda"]) for r in res.summary} == {(2, 0.0), (2, 0.1), (3, 0.0), (3, 0.1)}
    for row in res.summary:
        mine = [r for r in res.reports if r.grid_index == row["grid_index"]]
        assert row["successes"] == sum(r.success for r in mine)
        assert row["success_rate"] == pytest.approx(row["successes"] / len(mine))


@pytest.mark.parametrize("task, extra", [
    ("purity", {"n": "2", "lambda": "0,0.5", "T": "10"}),
    ("happy", {"R": "3", "r": "1", "erasure_rate": "0.02"}),
    ("bell-sample", {"n": "2", "lambda": "0.2", "T": "200"}),
])
def test_worker_count_does_not_change_output(task, extra):
    cfg = parse_config({"task": task, "trials": "12", "seed": "99", **extra})
    one = run_sweep(cfg, workers=1)
    many = run_sweep(cfg, workers=8)
    fields = TASK_DEFS[task].trial_fields()
    rows = lambda r: [x.to_row() for x in r.reports]
    assert render(rows(one), fields, "csv") == render(rows(many), fields, "csv")
    assert render(one.summary, summary_fields(task), "json-lines") == render(many.summary, summary_fields(task), "json-lines")


def test_jsonl_round_trip(tmp_path):
    cfg = parse_config({"task": "purity", "n": "2", "lambda": "0.1", "T": "5", "trials": "4"})
    res = run_sweep(cfg)
    rows = [r.to_row() for r in res.reports]
    path = tmp_path / "out.jsonl"
    with path.open("w") as fh:
        write_rows(rows, TASK_DEFS["purity"].trial_fields(), "json-lines", fh)
    back = read_jsonl(path)
    assert back == json.loads(json.dumps(rows))
    assert list(back[0]) == list(TASK_DEFS["purity"].trial_fields())


def test_csv_header_and_empty_stream(tmp_path):
    fields = TASK_DEFS["identify-pauli"].trial_fields()
    assert fields[:2] == ("task", "grid_index") and fields[-2:] == ("wall_us", "seed")
    assert render([], fields, "csv") == ",".join(fields) + "\n"
    assert render([], fields, "json-lines") == ""


def test_wall_clock_only_with_timing():
    base = {"task": "purity", "n": "1", "lambda": "0", "T": "2", "trials": "3"}
    assert all(r.wall_us == 0 for r in run_sweep(parse_config(base)).reports)
    timed = run_sweep(parse_config({**base, "timing": "true"})).reports
    assert all(r.wall_us >= 0 for r in timed) and any(r.wall_us > 0 for r in timed)


def test_summary_path():
    assert summary_path("runs/results.csv").name == "results.summary.csv"


def test_cli_writes_files_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "res.csv"
    code = main(["purity", "--n", "2", "--lambda", "0", "--T", "20", "--trials", "10", "--out", str(out),
                 "--min-success", "0.5"])
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 10 and rows[0]["task"] == "purity"
    assert len(read_csv(summary_path(out))) == 1
    assert main(["purity", "--n", "2", "--lambda", "1", "--T", "3", "--trials", "30", "--min-success", "0.99"]) == 1
    assert main(["purity", "--n", "2", "--lambda", "1.5"]) == 2
    assert main(["purity", "--bogus"]) == 2
    assert main(["run", "--n", "2"]) == 2
    assert main(["--help"]) == 0


def test_cli_summary_goes_to_stdout(capsys):
    assert main(["purity", "--n", "1", "--lambda", "0", "--T", "2", "--trials", "3", "--format", "json-lines"]) == 0
    summary = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert summary[0]["trials"] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "noisylearn", "verify-lemmas", "--n", "1", "--lambda", "0.3",
                           "--trials", "5"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip().endswith("PASS")


def test_every_task_runs():
    specs = {
        "identify-pauli": {"n": "2", "lambda": "0.1"},
        "bell-sample": {"n": "2", "lambda": "0.1", "T": "100"},
        "shadows": {"n": "2", "lambda": "0.1", "N": "2000"},
        "purity": {"n": "2", "lambda": "0.1", "T": "5"},
        "happy": {"R": "3", "r": "1", "erasure_rate": "0.01"},
        "simon": {"n": "2", "lambda": "0", "queries": "20"},
        "verify-lemmas": {"n": "1", "lambda": "0.2"},
    }
    for task, extra in specs.items():
        res = run_sweep(parse_config({"task": task, "trials": "3", **extra}))
        assert res.reports and all(r.seed == child_seed(0, r.grid_index, r.trial) for r in res.reports), task
        assert np.isfinite(res.summary[0]["success_rate"])
