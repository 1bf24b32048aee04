import json

import numpy as np
import pytest

from nbspec import ConfigInvalid, DegenerateEigenvalue, EmitError
from nbspec.graph import mix_seed
from nbspec.lab import experiments
from nbspec.lab.cli import main
from nbspec.lab.config import make_config, parse_config_text
from nbspec.lab.experiments import run_trials, summarize, trial_grid
from nbspec.lab.records import (
    SCATTER_COLUMNS,
    TrialRecord,
    emit,
    read_scatter_csv,
    records_from_json,
    records_to_csv,
    records_to_json,
    write_scatter_csv,
)


def cfg_file(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


def test_parse_config_text():
    vals = parse_config_text(
        "# demo\nexperiment = bauer-fike\nn = [100, 200]\np = 0.3   # inline\n"
        "z_list = [0.5+0.5j, 2j]\nout = results/bf\nstore-eigenvalues = False\n"
    )
    assert vals == {
        "experiment": "bauer-fike", "n": [100, 200], "p": 0.3,
        "z_list": [0.5 + 0.5j, 2j], "out": "results/bf", "store_eigenvalues": False,
    }


@pytest.mark.parametrize("text", ["experiment = figure1\nbogus = 1\n", "experiment figure1\n"])
def test_parse_config_rejects(text):
    with pytest.raises(ConfigInvalid):
        parse_config_text(text)


@pytest.mark.parametrize("values", [
    {"experiment": "nope"},
    {"experiment": "figure1", "trials": 0},
    {"experiment": "figure1", "n": 10, "p": 0.1},
    {"experiment": "semicircle", "p": 1.0},
    {"experiment": "bulk-convergence", "z_list": [0.6 + 0.8j]},
    {"experiment": "bulk-convergence", "z_list": [1.5]},
])
def test_make_config_rejects_up_front(values):
    with pytest.raises(ConfigInvalid):
        make_config(values)


def test_defaults_and_grid():
    cfg = make_config({"experiment": "oracle"})
    assert cfg.n == tuple(range(6, 31)) and cfg.trials == 2
    grid = trial_grid(cfg)
    assert len(grid) == 50 and [g[0] for g in grid] == list(range(50))


def test_record_json_round_trip():
    rec = TrialRecord("bauer-fike", 3, mix_seed(1, 3), 0, 40, 0.3,
                      eig_H=[1 / 3 + 2j / 7, -0.1], eig_H0=[np.float64(np.pi) + 0j],
                      e_opnorm=0.1 + 0.2, kappa=np.float64(1e-300), bounds={"t": 1.25},
                      metrics={"x": [0.1, 2.0]}, flags={"ok": np.bool_(True)})
    back = records_from_json(records_to_json([rec]))[0]
    assert back == rec
    doc = json.loads(records_to_json([rec], {"seed": 1}))
    assert doc["schema_version"] == 1
    assert set(doc["records"][0]) == set(TrialRecord.__dataclass_fields__)


def test_records_csv_has_stable_columns():
    recs = [TrialRecord("x", 0, 1, 0, 5, 0.5, metrics={"b": 1.0}),
            TrialRecord("x", 1, 2, 1, 5, 0.5, metrics={"a": 2.0}, flags={"f": False})]
    lines = records_to_csv(recs).splitlines()
    assert lines[0].split(",")[-3:] == ["flags.f", "metrics.a", "metrics.b"]
    assert lines[2].endswith("false,2,")


def test_emit_errors(tmp_path):
    with pytest.raises(EmitError):
        emit([], "json", tmp_path / "o", "s")
    assert not (tmp_path / "o").exists()
    with pytest.raises(EmitError):
        write_scatter_csv(tmp_path / "s.csv", [], [], [])
    assert not (tmp_path / "s.csv").exists()


def test_scatter_round_trip_17_digits(tmp_path):
    rng = np.random.default_rng(0)
    h = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    h0 = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    d = np.abs(h - h0)
    path = write_scatter_csv(tmp_path / "s.csv", h, h0, d)
    assert path.read_text().splitlines()[0] == ",".join(SCATTER_COLUMNS)
    rows = read_scatter_csv(path)
    assert np.array_equal(rows[:, 0] + 1j * rows[:, 1], h)
    assert np.array_equal(rows[:, 2] + 1j * rows[:, 3], h0)
    assert np.array_equal(rows[:, 4], d)


def test_batch_survives_a_degenerate_trial(monkeypatch):
    real = experiments.TRIALS["bauer-fike"]

    def flaky(rec, g, cfg):
        if rec.stream == 1:
            raise DegenerateEigenvalue(0, 2.0)
        real(rec, g, cfg)

    monkeypatch.setitem(experiments.TRIALS, "bauer-fike", flaky)
    cfg = make_config({"experiment": "bauer-fike", "n": 40, "p": 0.3, "trials": 3})
    recs = run_trials(cfg)
    assert [r.ok for r in recs] == [True, False, True]
    assert recs[1].error.startswith("DegenerateEigenvalue")
    s = summarize(cfg, recs)
    assert s["stats"]["errors"] == 1 and not s["passed"]


def test_workers_do_not_change_results():
    base = {"experiment": "bauer-fike", "n": 30, "p": [0.3, 0.5], "trials": 2, "seed": 5}
    one = run_trials(make_config({**base, "workers": 1}))
    two = run_trials(make_config({**base, "workers": 2}))
    assert records_to_json(one) == records_to_json(two)


def test_cli_figure1_outputs_and_determinism(tmp_path, capsys):
    out = tmp_path / "f1"
    cfg = cfg_file(tmp_path, f"experiment = figure1\nn = 60\np = [0.5, 0.1]\nseed = 3\nout = '{out}'\n")
    assert main(["run", "--config", str(cfg)]) in (0, 1)
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["experiment"] == "figure1"
    names = sorted(p.name for p in out.iterdir())
    assert names == ["figure1.csv", "figure1.json", "figure1_n60_p0.1_t0.csv", "figure1_n60_p0.5_t0.csv"]
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    rows = read_scatter_csv(out / "figure1_n60_p0.5_t0.csv")
    assert rows.shape == (120, 5)
    # each row pairs an eigenvalue of tH with its nearest eigenvalue of tH0
    recs = records_from_json((out / "figure1.json").read_text())
    h0 = np.array(recs[0].eig_H0)
    for re_h, im_h, re_0, im_0, dist in rows:
        gaps = np.abs(complex(re_h, im_h) - h0)
        assert complex(re_0, im_0) in h0 and dist == gaps.min()
    main(["run", "--config", str(cfg)])
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


def test_cli_overrides_and_exit_codes(tmp_path, capsys):
    cfg = cfg_file(tmp_path, f"experiment = oracle\nn = 8\ntrials = 50\nout = '{tmp_path / 'o'}'\n")
    assert main(["run", "--config", str(cfg), "--trials", "3", "--n", "7,9"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["stats"]["trials"] == 6 and summary["passed"]
    assert main(["run", "--config", str(cfg), "--trials", "0"]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_cli_failing_check_exits_one(tmp_path, capsys):
    # tiny n: the semicircle KS check cannot pass
    cfg = cfg_file(tmp_path, f"experiment = semicircle\nn = 60\ntrials = 2\nout = '{tmp_path / 's'}'\n")
    assert main(["run", "--config", str(cfg)]) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False
