import json

import pytest

from refclass.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_query_mets(capsys, kb_path):
    code, out, _ = run(capsys, "query", kb_path("mets1.rcl"), "t")
    assert code == 0 and out == "Prob = [3/10, 1/2]\n"


def test_query_conflict(capsys, kb_path):
    assert run(capsys, "query", kb_path("conflict.rcl"), "t")[1] == "Prob = [2/9, 28/31]\n"
    off = run(capsys, "query", kb_path("conflict.rcl"), "t", "--no-constructions")
    assert off[1] == "Prob = [0, 1]\n"


def test_query_literal_sentence(capsys, kb_path):
    code, out, _ = run(capsys, "query", kb_path("mets2.rcl"), "(member m V)")
    assert code == 0 and out == "Prob = [1/10, 3/5]\n"


def test_query_unknown_sentence(capsys, kb_path):
    code, _, err = run(capsys, "query", kb_path("mets1.rcl"), "nope")
    assert code == 2 and "undeclared sentence" in err


def test_query_invalid_kb(capsys, tmp_path):
    bad = tmp_path / "bad.rcl"
    bad.write_text("class H\nstat H V [0.3, 0.5]\n")
    code, _, err = run(capsys, "query", bad, "t")
    assert code == 1 and "2:8: undeclared: undeclared class V" in err


def test_query_json_trace(capsys, kb_path):
    code, out, _ = run(capsys, "query", kb_path("mets2.rcl"), "t", "--trace", "json")
    first, rest = out.split("\n", 1)
    assert first == "Prob = [1/10, 3/5]"
    trace = json.loads(rest)
    for key in ("query", "equivalences", "candidates", "disagreements", "reflections",
                "iterations", "outcome", "prob"):
        assert key in trace
    assert trace["prob"] == ["1/10", "3/5"]
    assert trace["outcome"] == "Selected"
    assert {"from": 1, "to": 0, "rule": "SubsetRule"} in trace["reflections"] or \
        any(r["rule"] == "SubsetRule" for r in trace["reflections"])


def test_query_human_trace_and_plot(capsys, kb_path, tmp_path):
    fig = tmp_path / "out.png"
    code, out, _ = run(capsys, "query", kb_path("chain.rcl"), "bet", "--bounds",
                       "--trace", "human", "--plot", fig)
    assert code == 0
    assert "DerivedBounds" in out and "outcome: Selected" in out
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_max_bracket_blocks(capsys, tmp_path):
    f = tmp_path / "three.rcl"
    f.write_text("class a\nclass b\nclass c\nclass V\nmember x a\nmember x b\nmember x c\n"
                 "stat a V [0.5, 0.6]\nstat b V [0.4, 0.7]\nstat c V [0.55, 0.65]\n")
    classes = {}
    for blocks in ("2", "all"):
        code, out, _ = run(capsys, "query", f, "(member x V)", "--max-bracket-blocks", blocks,
                           "--trace", "json")
        assert code == 0
        classes[blocks] = [c["class"] for c in json.loads(out.split("\n", 1)[1])["candidates"]]
    assert "[a,b,c]" in classes["all"] and "[a,b,c]" not in classes["2"]


def test_check(capsys, kb_path, tmp_path):
    code, out, _ = run(capsys, "check", kb_path("mets1.rcl"))
    assert code == 0 and "4 classes, 3 memberships" in out
    bad = tmp_path / "bad.rcl"
    bad.write_text("class H\nclass V\nstat H V [0.6, 0.2]\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 1 and "interval-order" in err


def test_check_minimal(capsys, kb_path):
    code, _, err = run(capsys, "check", kb_path("chain.rcl"), "--minimal")
    assert code == 1 and "minimal" in err
    assert run(capsys, "check", kb_path("minimal.rcl"), "--minimal")[0] == 0


def test_classes(capsys, kb_path):
    code, out, _ = run(capsys, "classes", kb_path("mets1.rcl"), "m")
    listed = [line.split()[0] for line in out.splitlines() if not line.startswith(" ")]
    assert code == 0
    assert sorted(listed) == sorted(["H", "D", "K", "D&H", "H&K", "D&K", "D&H&K"])
    assert "%(H, V) = [3/10, 1/2]" in out


def test_classes_supersets(capsys, tmp_path):
    f = tmp_path / "one.rcl"
    f.write_text("class H\nclass G\nmember m H\nsubset H G\n")
    out = run(capsys, "classes", f, "m")[1]
    assert sorted(line.split() for line in out.splitlines()) == [["G", "Closure"], ["H", "Asserted"]]


def test_classes_unknown(capsys, kb_path):
    assert run(capsys, "classes", kb_path("mets1.rcl"), "zz")[0] == 2
