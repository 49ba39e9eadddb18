import json
import subprocess
import sys

import numpy as np
import pytest

from opfminer.cli import (
    EXIT_CONFIG,
    EXIT_MISMATCH,
    EXIT_PARSE,
    ParseError,
    main,
    parse_dataset,
    parse_features,
    parse_report,
    render_report,
    report_dict,
    run_bench,
)
from opfminer import MiningConfig, TimeSeries, mine

from conftest import WORKED, random_series

EXPECTED = {(1, 2): 1.96, (2, 1): 4.28, (3, 2, 1): 2.11, (2, 1, 3): 1.51, (1, 3, 2): 2.17}


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("id=worked," + ",".join(map(str, WORKED)) + "\n")
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_dataset():
    s = parse_dataset("\nid=a, 1, 2.5, -3e1\n\n4,5\n")
    assert [(t.id, t.values) for t in s] == [("a", (1.0, 2.5, -30.0)), ("2", (4.0, 5.0))]
    for bad in ("", "1,x,3", "id=a\n", "1,nan"):
        with pytest.raises(ParseError):
            parse_dataset(bad)


def test_mine_json(dataset, capsys):
    code, out, err = run(["mine", "--input", dataset, "--minsup", 1.5, "--k-abs", 0.1,
                          "--emit-occurrences"], capsys)
    assert code == 0 and not err
    report = json.loads(out)
    assert report["artifact"] == "opfminer" and report["config"]["minsup"] == 1.5
    pats = report["series"][0]["patterns"]
    assert {tuple(p["pattern"]): p["support"] for p in pats} == pytest.approx(EXPECTED, abs=0.005)
    occ = {tuple(p["pattern"]): p["occurrences"] for p in pats}
    assert occ[(1, 3, 2)] == [3, 6, 10]
    assert all(p["count"] == len(p["occurrences"]) for p in pats)


def test_mine_csv_to_file(dataset, tmp_path, capsys):
    out_path = tmp_path / "r.csv"
    code, out, _ = run(["mine", "--input", dataset, "--minsup", 1.5, "--k-abs", 0.1,
                        "--format", "csv", "--output", out_path], capsys)
    assert code == 0 and out == ""
    parsed = parse_report(out_path.read_text(), "csv")
    assert parsed["worked"] == pytest.approx(EXPECTED, abs=0.005)


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_report_round_trip(fmt):
    rng = np.random.default_rng(4)
    series = [TimeSeries(random_series(rng, 30, 80), id=f"s{i}") for i in range(5)]
    config = MiningConfig(minsup=1.5)
    results = [mine(t, config) for t in series]
    parsed = parse_report(render_report(report_dict(results, config), fmt), fmt)
    for t, r in zip(series, results):
        assert parsed[t.id] == {p: round(s, 6) for p, s in r.supports().items()}


def test_mine_exit_codes(dataset, tmp_path, capsys):
    code, out, err = run(["mine", "--input", dataset, "--minsup", 0], capsys)
    assert code == EXIT_CONFIG and "minsup" in err and out == ""
    code, _, err = run(["mine", "--input", dataset, "--minsup", 1, "--preset", "nope"], capsys)
    assert code == EXIT_CONFIG and "preset" in err
    code, _, _ = run(["mine", "--input", tmp_path / "missing", "--minsup", 1], capsys)
    assert code == EXIT_PARSE
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,oops\n")
    code, _, _ = run(["mine", "--input", bad, "--minsup", 1], capsys)
    assert code == EXIT_PARSE
    with pytest.raises(SystemExit) as exc:
        main(["mine", "--input", str(dataset), "--minsup", "1", "--k-abs", "0.1",
              "--k-coeff", "1"])
    assert exc.value.code == 2


def test_mine_presets_same_patterns(dataset, capsys):
    reports = {}
    for preset in ("mat-opf", "opf-miner"):
        code, out, _ = run(["mine", "--input", dataset, "--minsup", 1.5, "--k-abs", 0.1,
                            "--preset", preset], capsys)
        assert code == 0
        reports[preset] = json.loads(out)["series"][0]
    a, b = reports["mat-opf"], reports["opf-miner"]
    assert {tuple(p["pattern"]) for p in a["patterns"]} == \
        {tuple(p["pattern"]) for p in b["patterns"]}
    assert a["metrics"]["support_calcs"] != b["metrics"]["support_calcs"]


def test_mine_axis_flags(dataset, capsys):
    code, out, _ = run(["mine", "--input", dataset, "--minsup", 1.5, "--k-abs", 0.1,
                        "--candidate-gen", "enumeration", "--prune", "none"], capsys)
    cfg = json.loads(out)["config"]
    assert code == 0 and cfg["candidate_gen"] == "enumeration" and cfg["prune"] == "none"
    code, _, err = run(["mine", "--input", dataset, "--minsup", 1.5,
                        "--support", "naive_match"], capsys)
    assert code == EXIT_CONFIG  # naive matching cannot prune


def test_bench_table(dataset, tmp_path, capsys):
    out_path = tmp_path / "bench.csv"
    code, _, err = run(["bench", "--input", dataset, "--presets", "opf-miner,opf-enum,mat-opf",
                        "--minsup-list", "1,1.5,2", "--k-coeff-list", "1,3",
                        "--replicate", "1,2", "--output", out_path], capsys)
    assert code == 0, err
    lines = out_path.read_text().splitlines()
    assert lines[0].split(",")[:3] == ["preset", "replicate", "n"]
    assert len(lines) == 1 + 3 * 3 * 2 * 2


def test_bench_minsup_monotone():
    rng = np.random.default_rng(12)
    series = [TimeSeries(random_series(rng, 300, 300, 0.0))]
    rows, bad = run_bench(series, ["opf-miner"], [2, 4, 8, 16], [1.0], [1])
    assert not bad
    for key in ("frequent", "candidates", "fusions", "support_calcs"):
        vals = [r[key] for r in rows]
        assert vals == sorted(vals, reverse=True)


def test_bench_k_monotone():
    rng = np.random.default_rng(13)
    series = [TimeSeries(random_series(rng, 300, 300, 0.0))]
    rows, _ = run_bench(series, ["opf-miner"], [4], [1 / 7, 1, 3, 7], [1])
    sizes = [r["frequent"] for r in rows]
    assert sizes == sorted(sizes, reverse=True)


def test_bench_reports_mismatch(dataset, tmp_path, capsys, monkeypatch):
    import opfminer.cli as cli
    real = cli.mine

    def broken(t, cfg):
        res = real(t, cfg)
        if cfg.preset == "opf-enum":
            res.levels.pop(3, None)
        return res
    monkeypatch.setattr(cli, "mine", broken)
    code, _, err = run(["bench", "--input", dataset, "--presets", "opf-miner,opf-enum",
                        "--minsup-list", "1.5", "--k-abs", "0.1"], capsys)
    assert code == EXIT_MISMATCH
    assert "only in opf-miner" in err


def test_features_and_eval(dataset, tmp_path, capsys):
    data = tmp_path / "multi.csv"
    rng = np.random.default_rng(21)
    data.write_text("".join(
        f"id=s{i}," + ",".join(f"{v:.3f}" for v in random_series(rng, 40, 60)) + "\n"
        for i in range(12)))
    feats = tmp_path / "f.csv"
    code, _, err = run(["features", "--input", data, "--minsup", 3, "--output", feats], capsys)
    assert code == 0, err
    fm = parse_features(feats.read_text())
    assert fm.rows.shape[0] == 12 and fm.series_ids[0] == "s0"

    outs = []
    for i in range(2):
        path = tmp_path / f"e{i}.json"
        code, _, err = run(["eval", "--features", feats, "--K-list", "2,3,4", "--seed", 5,
                            "--output", path], capsys)
        assert code == 0, err
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    runs = json.loads(outs[0])["runs"]
    assert [r["K"] for r in runs] == [2, 3, 4]
    assert all(-1 <= r["sc"] <= 1 for r in runs)


def test_features_single_series(dataset, tmp_path, capsys):
    feats = tmp_path / "f.csv"
    run(["features", "--input", dataset, "--minsup", 1.5, "--k-abs", 0.1, "--output", feats],
        capsys)
    fm = parse_features(feats.read_text())
    got = dict(zip(fm.vocabulary, fm.rows[0]))
    assert got == pytest.approx(EXPECTED, abs=0.005)


def test_eval_k_equals_rows(tmp_path, capsys):
    feats = tmp_path / "f.csv"
    feats.write_text("series_id,1-2,2-1\na,1,0\nb,3,0\nc,0,2\n")
    out = tmp_path / "e.json"
    code, _, _ = run(["eval", "--features", feats, "--K", 3, "--output", out], capsys)
    assert code == 0
    r = json.loads(out.read_text())["runs"][0]
    assert r["chi"] is None and r["sc"] == 0.0  # all singletons
    # duplicate rows leave a cluster empty: two effective clusters, zero scatter
    feats.write_text("series_id,1-2,2-1\na,1,0\nb,1,0\nc,0,2\n")
    with pytest.warns(UserWarning):
        code, _, _ = run(["eval", "--features", feats, "--K", 3, "--output", out], capsys)
    assert json.loads(out.read_text())["runs"][0]["chi"] == "inf"
    feats.write_text("series_id,1-2\na,1\nb,1\nc,5\n")
    with pytest.warns(UserWarning):
        code, _, _ = run(["eval", "--features", feats, "--K", 2, "--output", out], capsys)
    assert json.loads(out.read_text())["runs"][0]["chi"] == "inf"


def test_eval_errors(tmp_path, capsys):
    feats = tmp_path / "f.csv"
    feats.write_text("series_id,1-2\na,1\nb,2\n")
    code, _, err = run(["eval", "--features", feats, "--K", 5], capsys)
    assert code == EXIT_CONFIG
    feats.write_text("series_id,1-2,2-1\na,1\n")
    code, _, _ = run(["eval", "--features", feats, "--K", 2], capsys)
    assert code == EXIT_PARSE


def test_module_entry_point(dataset):
    proc = subprocess.run([sys.executable, "-m", "opfminer", "mine", "--input", str(dataset),
                           "--minsup", "1.5", "--k-abs", "0.1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["series"][0]["patterns"]) == 5
