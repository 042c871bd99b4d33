import json
import math
import os

import numpy as np
import pytest

from mittag.cli import Range, RunRecord, SweepSpec, dispatch, emit_plot_data, run_sweep
from mittag.gammaf import pochhammer_ratio


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_prints_e(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "1", "--x", "1")
    assert code == 0
    assert out.strip().startswith("2.718281828")


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "0.5", "--x", "-1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(0.4275835761558070, rel=1e-12)


def test_crossing_json(capsys):
    code, out, _ = run(capsys, "crossing", "--alpha", "0.3", "--beta", "0.7")
    assert code == 0
    payload = json.loads(out)
    assert payload["certified"]
    assert payload["bracket"][0] < payload["root"] < payload["bracket"][1]


def test_domain_error_exit_code(capsys):
    code, out, err = run(capsys, "eval", "--alpha", "-1", "--x", "1")
    assert code == 1
    assert "alpha" in err


def test_usage_error_exit_code(capsys):
    assert dispatch(["no-such-command"]) == 2
    capsys.readouterr()
    assert dispatch(["eval"]) == 2  # missing required arguments
    capsys.readouterr()


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--kind", "unif", "--alpha", "0.5", "--x", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["holds"]


def test_sample_command_writes_csv(tmp_path, capsys):
    out_file = tmp_path / "draws.csv"
    code, out, _ = run(
        capsys, "sample", "--kind", "pillai", "--alpha", "0.5",
        "--n", "500", "--seed", "3", "--out", str(out_file),
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "value"
    assert len(lines) == 501
    assert all(float(v) > 0.0 for v in lines[1:])


def test_abel_command(tmp_path, capsys):
    out_file = tmp_path / "trace.csv"
    code, out, _ = run(
        capsys, "abel", "--alpha", "0.5", "--lam", "1.0", "--forcing", "one",
        "--nodes", "64", "--out", str(out_file),
    )
    assert code == 0
    assert json.loads(out)["problem"] == "fde1"
    assert out_file.exists()


def test_abel_csv_forcing(tmp_path, capsys):
    forcing = tmp_path / "g.csv"
    xs = np.linspace(0.0, 2.0, 41)
    forcing.write_text("x,g\n" + "\n".join(f"{x},{1.0}" for x in xs) + "\n")
    code, out, _ = run(
        capsys, "abel", "--alpha", "0.5", "--lam", "1.0",
        "--forcing", str(forcing), "--nodes", "64",
    )
    assert code == 0


def test_probe_command(capsys):
    code, out, _ = run(capsys, "probe", "--id", "alpha_dec_Ea_minus1")
    assert code == 0
    assert json.loads(out)["violations"] == []


def test_sweep_alpha_monotone_decreasing(tmp_path, capsys):
    # order sweep at fixed argument: values fall as the order grows
    spec = {
        "task": "eval",
        "family": "power",
        "ranges": {"alpha": {"start": 0.1, "stop": 1.9, "count": 19}},
        "fixed": {"x": 5.0},
        "out_path": str(tmp_path / "a.csv"),
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "sweep", "--spec", str(spec_file))
    assert code == 0
    rows = [l for l in (tmp_path / "a.csv").read_text().splitlines() if not l.startswith("#")]
    values = [float(r.split(",")[3]) for r in rows[1:]]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sweep_beta_monotone_increasing(tmp_path, capsys):
    # second-parameter sweep of the rescaled family climbs towards 1/(1-x)
    spec = {
        "task": "eval",
        "family": "rescaled_poch",
        "ranges": {"beta": {"start": 0.5, "stop": 200.0, "count": 16, "scale": "geometric"}},
        "fixed": {"alpha": 0.5, "x": 0.5},
        "out_path": str(tmp_path / "d.csv"),
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "sweep", "--spec", str(spec_file))
    assert code == 0
    rows = [l for l in (tmp_path / "d.csv").read_text().splitlines() if not l.startswith("#")]
    values = [float(r.split(",")[3]) for r in rows[1:]]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(2.0, rel=0.01)


def test_sweep_single_point(tmp_path, capsys):
    spec = {
        "task": "eval",
        "ranges": {"x": {"start": 1.0, "stop": 1.0, "count": 1}},
        "fixed": {"alpha": 1.0},
        "out_path": str(tmp_path / "one.csv"),
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    code, _, _ = run(capsys, "sweep", "--spec", str(spec_file))
    assert code == 0
    rows = [l for l in (tmp_path / "one.csv").read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 2  # header plus exactly one row


def test_rerun_byte_identical_modulo_timestamp(tmp_path, capsys):
    spec = {
        "task": "eval",
        "ranges": {"x": {"start": 0.5, "stop": 3.0, "count": 7}},
        "fixed": {"alpha": 0.7},
        "out_path": str(tmp_path / "r.csv"),
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    run(capsys, "sweep", "--spec", str(spec_file))
    first = (tmp_path / "r.csv").read_text().splitlines()
    run(capsys, "sweep", "--spec", str(spec_file))
    second = (tmp_path / "r.csv").read_text().splitlines()
    assert first[1:] == second[1:]  # only the timestamp line may differ
    assert first[0].startswith("# generated_at=")


def test_unif1_interpolation_table(tmp_path):
    # value columns interpolate monotonically between Lorentzian and Gaussian
    xs = np.linspace(0.0, 3.0, 13)
    rows = []
    from mittag.gammaf import gamma as G
    from mittag.mleval import MLParams, eval_ml

    for a in (0.1, 0.5, 0.9):
        for x in xs:
            rows.append((a, 1.0, x, eval_ml(MLParams(a), -G(1.0 + a) * x * x), "auto"))
    record = RunRecord(
        spec={"task": "eval"}, version="test", timestamp="t0",
        rows=tuple(rows), columns=("alpha", "beta", "x", "value", "method"),
    )
    path = tmp_path / "interp.csv"
    emit_plot_data(record, str(path))
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    data = {}
    for line in lines[1:]:
        a, _, x, v, _ = line.split(",")
        data.setdefault(float(a), []).append((float(x), float(v)))
    for x_idx in range(len(xs)):
        x = xs[x_idx]
        lorentz = 1.0 / (1.0 + x * x)
        gauss = math.exp(-x * x)
        chain = [data[a][x_idx][1] for a in (0.1, 0.5, 0.9)]
        assert gauss - 1e-9 <= chain[2] <= chain[1] <= chain[0] <= lorentz + 1e-9


def test_emit_plot_data_empty_record(tmp_path):
    record = RunRecord(spec={}, version="test", timestamp="t0", rows=(),
                       columns=("alpha", "beta", "x", "value", "method"))
    path = tmp_path / "empty.csv"
    emit_plot_data(record, str(path))
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert lines == ["alpha,beta,x,value,method"]


def test_run_sweep_rejects_bad_task():
    with pytest.raises(Exception):
        run_sweep(SweepSpec(task="nope", ranges={}))
