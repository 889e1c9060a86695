import json

import pytest

from pcgtools.cli import main
from pcgtools.formats import spec_to_json, write_edge_list
from pcgtools.graph import (
    ANTIMATCHING,
    CLIQUE,
    MATCHING,
    STABLE,
    MatrogenicSpec,
    build_matrogenic,
    cycle,
    random_threshold,
    split_antimatching,
    split_matching,
)


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def spec_file(write, spec):
    return write("spec.json", json.dumps(spec_to_json(spec)))


class TestConstruct:
    def test_threshold_lpg(self, capsys, write, tmp_path):
        g = write("g.el", "n 4\ne 0 1\ne 0 2\ne 0 3\n")
        out = str(tmp_path / "w.json")
        code, stdout, _ = run(capsys, "construct", "--family", "threshold", "--class", "lpg", "--input", g, "--out", out)
        assert code == 0
        assert "threshold-lpg" in stdout and "d_max=3" in stdout
        w = json.loads(open(out).read())
        assert (w["class"], w["d_min"], w["d_max"]) == ("LPG", "0", "3")

    def test_matching_mlpg_rejected(self, capsys, write):
        g = write("g.el", write_edge_list(split_matching(3)))
        code, _, err = run(capsys, "construct", "--family", "matching", "--class", "mlpg", "--input", g)
        assert code == 3
        assert "G ∉ mLPG" in err

    def test_ordered_matrogenic(self, capsys, write):
        s = spec_file(write, MatrogenicSpec.of((MATCHING, 2), (ANTIMATCHING, 1)))
        code, stdout, err = run(capsys, "construct", "--family", "matrogenic", "--class", "pcg", "--input", s)
        assert code == 0
        w = json.loads(stdout)
        assert (w["d_min"], w["d_max"]) == ("7", "14")
        assert "ordered-matrogenic-pcg" in err

    def test_order_violation_is_unsupported(self, capsys, write):
        s = spec_file(write, MatrogenicSpec.of((ANTIMATCHING, 1), (MATCHING, 1)))
        code, _, _ = run(capsys, "construct", "--family", "matrogenic", "--class", "pcg", "--input", s)
        assert code == 3

    def test_recognition_failure(self, capsys, write):
        g = write("g.el", write_edge_list(cycle(5)))
        code, _, err = run(capsys, "construct", "--family", "threshold", "--class", "lpg", "--input", g)
        assert code == 2 and "error" in err

    def test_trace(self, capsys, write, tmp_path):
        g = write("g.el", write_edge_list(split_antimatching(2)))
        trace = str(tmp_path / "trace.json")
        code, _, _ = run(capsys, "construct", "--family", "antimatching", "--class", "mlpg", "--input", g,
                         "--trace", trace)
        assert code == 0
        data = json.loads(open(trace).read())
        assert data["reconstructed"] is True


CASES = [
    ("threshold", "lpg", random_threshold(9, 3)),
    ("threshold", "mlpg", random_threshold(9, 4)),
    ("matching", "lpg", split_matching(4)),
    ("antimatching", "mlpg", split_antimatching(4)),
    ("matching-seq", "lpg", MatrogenicSpec.of((CLIQUE, 2), (MATCHING, 2), (STABLE, 1))),
    ("antimatching-seq", "mlpg", MatrogenicSpec.of((STABLE, 2), (ANTIMATCHING, 3))),
    ("matrogenic", "pcg", MatrogenicSpec.of((MATCHING, 2), (STABLE, 1), (ANTIMATCHING, 2))),
]


@pytest.mark.parametrize("family,cls,source", CASES)
def test_pipeline_identity(capsys, write, tmp_path, family, cls, source):
    if isinstance(source, MatrogenicSpec):
        graph_text = write_edge_list(build_matrogenic(source)[0])
        inp = spec_file(write, source)
    else:
        graph_text = write_edge_list(source)
        inp = write("g.el", graph_text)
    wpath = str(tmp_path / "w.json")
    assert run(capsys, "construct", "--family", family, "--class", cls, "--input", inp, "--out", wpath)[0] == 0
    w = json.loads(open(wpath).read())
    tree = write("t.nwk", w["newick"])
    code, out, _ = run(capsys, "eval", "--tree", tree, "--dmin", w["d_min"], "--dmax", w["d_max"])
    assert code == 0
    assert out == graph_text
    gpath = write("g2.el", graph_text)
    assert run(capsys, "verify", "--graph", gpath, "--witness", wpath)[:2] == (0, "valid\n")


class TestEval:
    def test_unit_star(self, capsys, write):
        t = write("t.nwk", "(v0:1,v1:1,v2:1,v3:1);")
        code, out, _ = run(capsys, "eval", "--tree", t, "--dmin", "0", "--dmax", "2")
        assert code == 0
        assert out == "n 4\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n"

    def test_caterpillar(self, capsys, write):
        # Unit spine s1-s2; a_i at weight 1, b_i at weight 2.
        t = write("t.nwk", "((v1:1,v3:2):1,v0:1,v2:2);")
        code, out, _ = run(capsys, "eval", "--tree", t, "--dmin", "0", "--dmax", "3")
        assert code == 0
        assert out == write_edge_list(split_matching(2))

    @pytest.mark.parametrize("dmin,dmax", [("0.5", "2"), ("0", "2.5"), ("3", "2"), ("x", "1")])
    def test_bad_bounds(self, capsys, write, dmin, dmax):
        t = write("t.nwk", "(v0:1,v1:1);")
        assert run(capsys, "eval", "--tree", t, "--dmin", dmin, "--dmax", dmax)[0] == 2

    def test_bad_newick_and_missing_file(self, capsys, write):
        t = write("t.nwk", "(v0:1,v1:1")
        assert run(capsys, "eval", "--tree", t, "--dmin", "0", "--dmax", "1")[0] == 2
        assert run(capsys, "eval", "--tree", "/nonexistent.nwk", "--dmin", "0", "--dmax", "1")[0] == 2


class TestVerifyDecide:
    def test_c5_with_mlpg_witness(self, capsys, write):
        g = write("c5.el", write_edge_list(cycle(5)))
        w = write("w.json", json.dumps({"class": "mLPG", "newick": "(v0:1,v1:1,v2:1,(v3:1,v4:1):1);",
                                        "d_min": "2", "d_max": "inf"}))
        assert run(capsys, "verify", "--graph", g, "--witness", w)[:2] == (1, "invalid\n")

    def test_decide_c5_pcg(self, capsys, write):
        g = write("c5.el", write_edge_list(cycle(5)))
        code, out, _ = run(capsys, "decide", "--graph", g, "--class", "pcg")
        assert code == 0
        v = json.loads(out)
        assert v["outcome"] == "MEMBER" and v["witness"]["class"] == "PCG"

    def test_decide_negative_is_exit_one(self, capsys, write):
        g = write("c5.el", write_edge_list(cycle(5)))
        code, out, _ = run(capsys, "decide", "--graph", g, "--class", "mlpg")
        assert code == 1
        v = json.loads(out)
        assert v["outcome"] == "NON_MEMBER" and v["topologies_examined"] == 15

    def test_cap_is_input_error(self, capsys, write):
        g = write("c7.el", write_edge_list(cycle(7)))
        assert run(capsys, "decide", "--graph", g, "--class", "pcg")[0] == 2

    def test_deterministic_bytes_and_jobs(self, capsys, write):
        g = write("c5.el", write_edge_list(cycle(5)))
        outs = []
        for jobs in ("1", "1", "2"):
            _, out, _ = run(capsys, "decide", "--graph", g, "--class", "pcg", "--jobs", jobs)
            v = json.loads(out)
            v.pop("elapsed_ms")
            outs.append(v)
        assert outs[0] == outs[1] == outs[2]


class TestClassifyProbe:
    def test_classify_antimatching(self, capsys, write):
        g = write("g.el", write_edge_list(split_antimatching(3)))
        code, out, _ = run(capsys, "classify", "--graph", g)
        assert code == 0
        r = json.loads(out)
        assert r["split"] is True and r["component_kind"] == "antimatching"
        assert r["degree_partition"]["degrees"] == [4, 2]

    def test_classify_disconnected(self, capsys, write):
        g = write("g.el", "n 3\ne 0 1\n")
        r = json.loads(run(capsys, "classify", "--graph", g)[1])
        assert r["connected"] is False and r["threshold"] is False

    def test_probe(self, capsys, write):
        s = spec_file(write, MatrogenicSpec.of((ANTIMATCHING, 1), (MATCHING, 1)))
        code, out, _ = run(capsys, "probe", "--spec", s)
        v = json.loads(out)
        assert v["label"] == "EXPLORATORY"
        assert code == (0 if v["outcome"] == "MEMBER" else 1)
