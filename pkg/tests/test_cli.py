import json

import pytest

from symsubmax.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def k3_file(tmp_path):
    return write_json(
        tmp_path / "k3.json",
        {"type": "graph-cut", "n": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]]},
    )


@pytest.fixture
def card2_file(tmp_path):
    return write_json(tmp_path / "card2.json", {"type": "cardinality", "k": 2})


def test_solve_greedy_card(k3_file, card2_file, tmp_path):
    out = tmp_path / "report.json"
    code = main(
        [
            "solve",
            "--instance",
            k3_file,
            "--constraint",
            card2_file,
            "--algorithm",
            "greedy-card",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["final_value"] == 2.0
    assert rep["feasible"] is True
    assert rep["total_queries"] <= 2 * (3 + 2 + 2)
    assert "rounds" not in rep  # trace is flag-gated
    assert "duration_ms" not in rep  # timing is flag-gated


def test_solve_with_exact_and_trace(k3_file, tmp_path):
    card1 = write_json(tmp_path / "card1.json", {"type": "cardinality", "k": 1})
    out = tmp_path / "report.json"
    code = main(
        [
            "solve",
            "--instance",
            k3_file,
            "--constraint",
            card1,
            "--algorithm",
            "greedy-card",
            "--exact",
            "--trace",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["opt_value"] == 2.0
    assert rep["ratio"] == 1.0
    assert len(rep["rounds"]) == 1


def test_solve_deterministic_reruns(k3_file, card2_file, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = main(
            [
                "solve",
                "--instance",
                k3_file,
                "--constraint",
                card2_file,
                "--algorithm",
                "sample-greedy-card",
                "--epsilon",
                "0.1",
                "--seed",
                "7",
                "--trace",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_solve_mw_packing_on_knapsack(k3_file, tmp_path):
    knap = write_json(
        tmp_path / "knap.json", {"type": "knapsack", "weights": [1, 1, 1], "budget": 2.0}
    )
    out = tmp_path / "mw.json"
    code = main(
        [
            "solve",
            "--instance",
            k3_file,
            "--constraint",
            knap,
            "--algorithm",
            "mw-packing",
            "--epsilon",
            "0.5",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["final_value"] == 2.0
    assert rep["feasible"] is True


def test_solve_incompatible_pair(k3_file, card2_file, capsys):
    code = main(
        [
            "solve",
            "--instance",
            k3_file,
            "--constraint",
            card2_file,
            "--algorithm",
            "greedy-matroid",
            "--epsilon",
            "0.1",
        ]
    )
    assert code == 1
    assert "matroid" in capsys.readouterr().err


def test_exact_command(k3_file, tmp_path):
    card1 = write_json(tmp_path / "card1.json", {"type": "cardinality", "k": 1})
    out = tmp_path / "exact.json"
    code = main(["exact", "--instance", k3_file, "--constraint", card1, "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["opt_value"] == 2.0
    assert rep["witness"] == [0]


def test_exact_too_large(tmp_path, card2_file):
    big = write_json(tmp_path / "big.json", {"type": "graph-cut", "n": 25, "edges": []})
    code = main(["exact", "--instance", big, "--constraint", card2_file])
    assert code == 1


def test_verify_valid_and_invalid(tmp_path, k3_file):
    code = main(["verify", "--instance", k3_file, "--exhaustive", "--out", str(tmp_path / "v.json")])
    assert code == 0
    bad = write_json(tmp_path / "bad.json", {"type": "table", "n": 2, "values": [0, 5, 4, 0]})
    out = tmp_path / "bad-report.json"
    code = main(["verify", "--instance", bad, "--exhaustive", "--out", str(out)])
    assert code == 3
    rep = json.loads(out.read_text())
    assert any(v["kind"] == "symmetry" for v in rep["violations"])


def test_verify_sampled_mode(k3_file, tmp_path):
    code = main(
        ["verify", "--instance", k3_file, "--trials", "200", "--seed", "3", "--out", str(tmp_path / "s.json")]
    )
    assert code == 0


def test_tight_example_command(tmp_path):
    out = tmp_path / "tight3.json"
    code = main(["tight-example", "--k", "3", "--out", str(out)])
    assert code == 0
    inst = json.loads(out.read_text())
    assert inst["n"] == 21
    side = json.loads((tmp_path / "tight3.json.opt.json").read_text())
    assert side["optimal_value"] == 3.0
    assert side["certified_by"] == "brute-force"
    assert main(["tight-example", "--k", "2", "--out", str(tmp_path / "x.json")]) == 1
    code = main(["tight-example", "--k", "4", "--out", str(tmp_path / "tight4.json")])
    assert code == 0
    side4 = json.loads((tmp_path / "tight4.json.opt.json").read_text())
    assert side4["certified_by"] == "analytic"


def test_bench_command(tmp_path, k3_file, card2_file):
    card1 = write_json(tmp_path / "card1.json", {"type": "cardinality", "k": 1})
    manifest = write_json(
        tmp_path / "manifest.json",
        [
            {"instance": k3_file, "constraint": card1, "algorithm": "greedy-card", "exact": True},
            {"instance": k3_file, "constraint": card2_file, "algorithm": "greedy-card", "exact": True},
            {
                "instance": k3_file,
                "constraint": card2_file,
                "algorithm": "sample-greedy-card",
                "epsilon": 0.5,
                "seed": 1,
            },
        ],
    )
    out = tmp_path / "bench.csv"
    code = main(["bench", "--manifest", manifest, "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4  # header + 3 rows
    header = lines[0].split(",")
    assert header == ["instance", "algorithm", "n", "k", "value", "opt", "ratio", "queries", "millis"]
    row1 = lines[1].split(",")
    assert float(row1[4]) == 2.0 and float(row1[6]) == 1.0
    assert int(row1[7]) <= 1 * (3 + 1 + 2)


def test_bench_bad_manifest(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["bench", "--manifest", str(bad)]) == 1


def test_solve_missing_instance(card2_file):
    code = main(
        [
            "solve",
            "--instance",
            "/nonexistent/path.json",
            "--constraint",
            card2_file,
            "--algorithm",
            "greedy-card",
        ]
    )
    assert code == 1
