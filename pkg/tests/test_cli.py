import json

import pytest

from grits import (
    Axis,
    __version__,
    document_from_grid,
    drop_rows_or_columns,
    parse_table_json,
    serialize_table_json,
)
from grits.cli import main
from sample_tables import admin_table, distinct_table, unit_table


def write_doc(path, table_id, grid):
    path.write_bytes(serialize_table_json(document_from_grid(grid, table_id)))


@pytest.fixture
def dataset(tmp_path):
    gt, pred = tmp_path / "gt", tmp_path / "pred"
    gt.mkdir(), pred.mkdir()
    g1 = distinct_table(4, 4)
    write_doc(gt / "t1.json", "t1", g1)
    write_doc(pred / "t1.json", "t1", drop_rows_or_columns(g1, [0, 1], Axis.ROWS))
    write_doc(gt / "t2.json", "t2", admin_table())
    write_doc(pred / "t2.json", "t2", admin_table(split_group=True))
    return tmp_path


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["eval"]) == 2
    capsys.readouterr()


def test_version_exits_0(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_eval_writes_report(dataset, capsys):
    out = dataset / "report.json"
    code = main([
        "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
        "--metrics", "grits-top,grits-con,teds-con", "--out", str(out),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["version"] == __version__
    assert report["metrics"] == ["grits-top", "grits-con", "teds-con"]
    assert [t["id"] for t in report["tables"]] == ["t1", "t2"]
    t1 = report["tables"][0]["metrics"]
    assert t1["grits-con"] == [pytest.approx(2 / 3), 1.0, 0.5]
    assert isinstance(t1["teds-con"], float)
    t2 = report["tables"][1]["metrics"]
    assert t2["grits-top"][0] == 0.95
    agg = report["aggregate"]["grits-con"]
    assert set(agg) == {"fscore", "precision", "recall", "fscore_from_pr"}
    capsys.readouterr()


def test_eval_to_stdout(dataset, capsys):
    code = main([
        "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
        "--metrics", "grits-con",
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["tables"]) == 2


def test_eval_is_deterministic_across_thread_counts(dataset, capsys, monkeypatch):
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("GRITS_THREADS", threads)
        out = dataset / f"report_{threads}.json"
        assert main([
            "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
            "--out", str(out), "--metrics", "all",
        ]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    capsys.readouterr()


def test_eval_missing_pair_fails(dataset, capsys):
    (dataset / "pred" / "t2.json").unlink()
    code = main([
        "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
        "--metrics", "grits-con",
    ])
    assert code == 1
    assert "t2" in capsys.readouterr().err
    with pytest.warns(UserWarning, match="t2"):
        code = main([
            "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
            "--metrics", "grits-con", "--skip-missing",
            "--out", str(dataset / "r.json"),
        ])
    assert code == 0
    report = json.loads((dataset / "r.json").read_text())
    assert [t["id"] for t in report["tables"]] == ["t1"]


def test_eval_unknown_metric_fails(dataset, capsys):
    code = main([
        "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
        "--metrics", "nope",
    ])
    assert code == 1
    capsys.readouterr()


def test_eval_weighted_aggregate(dataset, capsys):
    out = dataset / "report.json"
    assert main([
        "eval", "--gt", str(dataset / "gt"), "--pred", str(dataset / "pred"),
        "--metrics", "grits-con", "--weighted", "--out", str(out),
    ]) == 0
    agg = json.loads(out.read_text())["aggregate"]["grits-con"]
    assert "fscore_cell_weighted" in agg
    capsys.readouterr()


def test_eval_lenient_location(tmp_path, capsys):
    gt, pred = tmp_path / "gt", tmp_path / "pred"
    gt.mkdir(), pred.mkdir()
    write_doc(gt / "t.json", "t", distinct_table(2, 2))
    write_doc(pred / "t.json", "t", unit_table([["a", "b"], ["c", "d"]]))
    strict = main(["eval", "--gt", str(gt), "--pred", str(pred),
                   "--metrics", "grits-loc"])
    assert strict == 1
    assert main(["eval", "--gt", str(gt), "--pred", str(pred),
                 "--metrics", "grits-loc", "--lenient-location",
                 "--out", str(tmp_path / "r.json")]) == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["tables"][0]["metrics"]["grits-loc"] == [0.0, 0.0, 0.0]
    capsys.readouterr()


def test_eval_synthetic_identity(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["eval", "--gt", "synthetic:5", "--pred", "synthetic:5",
                 "--metrics", "grits-con,dar-con", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert len(report["tables"]) == 5
    for t in report["tables"]:
        assert t["metrics"]["grits-con"] == [1.0, 1.0, 1.0]
        assert t["metrics"]["dar-con"] == [1.0, 1.0, 1.0]
    capsys.readouterr()


def test_corrupt_writes_dataset(tmp_path, capsys):
    src = tmp_path / "src"
    src.mkdir()
    write_doc(src / "t1.json", "t1", distinct_table(4, 4))
    out = tmp_path / "out"
    assert main(["corrupt", "--dataset", str(src), "--out", str(out),
                 "--axis", "rows", "--scheme", "first", "--p", "0.5"]) == 0
    files = sorted(out.glob("*.json"))
    assert [f.name for f in files] == ["t1.json"]
    doc = parse_table_json(files[0].read_bytes())
    assert doc.n_rows == 2 and doc.n_cols == 4
    capsys.readouterr()


def test_corrupt_rejects_spanning_tables(tmp_path, capsys):
    src = tmp_path / "src"
    src.mkdir()
    write_doc(src / "adm.json", "adm", admin_table())
    code = main(["corrupt", "--dataset", str(src), "--out", str(tmp_path / "o"),
                 "--axis", "rows", "--scheme", "first"])
    assert code == 1
    capsys.readouterr()


def test_experiment_scheme_outputs(tmp_path, capsys):
    out = tmp_path / "plots"
    assert main(["experiment", "scheme", "--dataset", "synthetic:6",
                 "--metrics", "grits-con", "--seed", "3",
                 "--out", str(out)]) == 0
    assert (out / "grits-con_schemes.csv").exists()
    assert (out / "report.json").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["kind"] == "scheme"
    assert len(report["conditions"]) == 6
    capsys.readouterr()


def test_experiment_sweep_outputs(tmp_path, capsys):
    out = tmp_path / "plots"
    assert main(["experiment", "sweep", "--dataset", "synthetic:5",
                 "--metrics", "grits-con", "--seed", "3",
                 "--p", "0:1:0.5", "--out", str(out)]) == 0
    dat = out / "grits-con_fscore_rows_p.dat"
    assert dat.exists()
    assert len(dat.read_text().splitlines()) == 3
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["p_values"] == [0.0, 0.5, 1.0]
    capsys.readouterr()


def test_experiment_sweep_accepts_comma_list(tmp_path, capsys):
    out = tmp_path / "plots"
    assert main(["experiment", "sweep", "--dataset", "synthetic:4",
                 "--metrics", "grits-con", "--p-values", "0.25,0.75",
                 "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["p_values"] == [0.25, 0.75]
    capsys.readouterr()


def test_oracle_check_passes(capsys):
    assert main(["oracle-check", "--trials", "30", "--max-dim", "2",
                 "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "30" in out


def test_convert_json_html_round_trip(tmp_path, capsys):
    src = tmp_path / "t.json"
    write_doc(src, "t", admin_table())
    html = tmp_path / "t.html"
    back = tmp_path / "back.json"
    assert main(["convert", str(src), str(html)]) == 0
    assert html.read_text().startswith("<table>")
    assert main(["convert", str(html), str(back)]) == 0
    doc = parse_table_json(back.read_bytes())
    assert doc.n_rows == 5 and doc.n_cols == 4
    texts = {c.text for c in doc.cells}
    assert "Sequence of Administration" in texts
    capsys.readouterr()


def test_convert_pascal_voc_unimplemented(tmp_path, capsys):
    (tmp_path / "x.xml").write_text("<annotation/>")
    code = main(["convert", "--pascal-voc", str(tmp_path / "x.xml"),
                 str(tmp_path / "out.json")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_console_script_is_installed():
    import shutil
    import subprocess

    exe = shutil.which("grits")
    assert exe, "console script not on PATH"
    out = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert __version__ in out.stdout
