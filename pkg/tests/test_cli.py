import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hyperkoszul.cli import main
from hyperkoszul.hypergraph import classify, parse_hypergraph

DATA = Path(__file__).resolve().parent.parent / "data"
SUM = "p(v0)+p(v1)+p(v2)"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestClosure:
    def test_lower_closure_of_h2(self, capsys):
        code, out, _ = run(capsys, "closure", DATA / "h2.hg", "--kind", "delta")
        assert code == 0 and out.splitlines()[1:] == ["v2"]

    @pytest.mark.parametrize("kind", ["Delta", "delta", "bar-Delta", "bar-delta"])
    def test_idempotent(self, capsys, tmp_path, kind):
        _, once, _ = run(capsys, "closure", DATA / "h1.hg", "--kind", kind)
        _, twice, _ = run(capsys, "closure", write(tmp_path, "a.hg", once), "--kind", kind)
        assert once == twice

    def test_complement_twice(self, capsys, tmp_path):
        _, once, _ = run(capsys, "closure", DATA / "h1.hg", "--kind", "complement")
        _, twice, _ = run(capsys, "closure", write(tmp_path, "c.hg", once), "--kind", "complement")
        assert parse_hypergraph(twice) == parse_hypergraph((DATA / "h1.hg").read_text())

    def test_parse_error_reports_line(self, capsys, tmp_path):
        bad = write(tmp_path, "bad.hg", "vertices: v0 v1\nv0\nv7\n")
        code, _, err = run(capsys, "closure", bad, "--kind", "delta")
        assert code == 2 and "line 3" in err and "^" in err


def test_classify(capsys):
    rep = run_json(capsys, "classify", DATA / "k1.hg")
    assert rep["classification"] == "simplicial" and rep["edges"] == 5
    assert run_json(capsys, "classify", DATA / "l1.hg")["classification"] == "independence"


class TestHomology:
    def test_localized_generator(self, capsys):
        rep = run_json(capsys, "homology", DATA / "k1.hg", "--op", "p(v0)", "--m", 0, "--range", "0..1")
        assert rep["betti"] == [1, 0]

    def test_union_cycle(self, capsys):
        rep = run_json(capsys, "homology", DATA / "k_union.hg", "--op", SUM, "--range", "0..1", "--coeff", "rational")
        assert rep["betti"] == [1, 1]
        (coeffs_names,) = rep["homology"][1]["representatives"]
        terms = {tuple(n): c for c, n in coeffs_names}
        assert terms[("v0", "v1")] == -terms[("v0", "v2")] == terms[("v1", "v2")]

    def test_cohomology(self, capsys):
        rep = run_json(capsys, "homology", DATA / "l1.hg", "--op", "d(v0)", "--range", "0..2")
        assert rep["betti"] == [1, 2, 1]

    def test_partition(self, capsys):
        rep = run_json(capsys, "homology", DATA / "k1.hg", "--part", DATA / "part.txt",
                       "--weights", DATA / "w35.txt", "--range", "0..1")
        assert [b["block"] for b in rep["blocks"]] == [["v0"], ["v1", "v2"]]

    def test_non_admissible(self, capsys):
        code, _, err = run(capsys, "homology", DATA / "h1.hg", "--op", "p(v0)")
        assert code == 3 and "v0" in err

    def test_bad_expression(self, capsys):
        code, _, err = run(capsys, "homology", DATA / "k1.hg", "--op", "p(v0) + + p(v1)")
        assert code == 2 and "^" in err

    def test_bad_range(self, capsys):
        code, _, _ = run(capsys, "homology", DATA / "k1.hg", "--op", "p(v0)", "--range", "3..1")
        assert code == 2


class TestKoszul:
    def test_kernel_generator(self, capsys):
        rep = run_json(capsys, "koszul", DATA / "edge.hg", "--coeff", "rational")
        assert rep["exact"] and rep["kernel_degree_1"] == ["p(v1) - p(v0)"]

    def test_weighted_kernel(self, capsys):
        rep = run_json(capsys, "koszul", DATA / "edge.hg", "--weights", DATA / "w35.txt", "--coeff", "rational")
        assert rep["kernel_degree_1"] == ["3*p(v1) - 5*p(v0)"]

    def test_zero_weight_defect(self, capsys, tmp_path):
        H = write(tmp_path, "one.hg", "vertices: v0\nv0\n")
        w = write(tmp_path, "w.txt", "v0 0\n")
        rep = run_json(capsys, "koszul", H, "--weights", w)
        assert [n["defect"] for n in rep["nodes"]] == [1, 1]

    def test_uniform_is_trivial(self, capsys):
        rep = run_json(capsys, "koszul", DATA / "uniform.hg")
        assert rep["trivial"] and rep["notice"] == "trivial complex"

    def test_upper(self, capsys):
        rep = run_json(capsys, "koszul", DATA / "l1.hg", "--variance", "upper")
        assert rep["admissible"] == ["v0", "v1", "v2"] and rep["exact"]


class TestMV:
    def test_simplicial_pair(self, capsys):
        rep = run_json(capsys, "mv", "--a", DATA / "k1.hg", "--b", DATA / "k2.hg", "--op", SUM)
        assert rep["exact"] and rep["commuting"]

    def test_same_file(self, capsys):
        rep = run_json(capsys, "mv", "--a", DATA / "k1.hg", "--b", DATA / "k1.hg", "--op", SUM)
        assert rep["exact"] and rep["commuting"]

    def test_general_pair_uses_inner_closures(self, capsys):
        rep = run_json(capsys, "mv", "--a", DATA / "h1.hg", "--b", DATA / "h2.hg", "--op", "p(v2)")
        assert rep["exact"] and rep["commuting"]
        assert rep["top"]["hypergraphs"][0] == [["v0"], ["v1"], ["v0", "v1"]]

    def test_header_mismatch(self, capsys, tmp_path):
        other = write(tmp_path, "x.hg", "vertices: v0 v1\nv0\n")
        code, _, err = run(capsys, "mv", "--a", DATA / "k1.hg", "--b", other, "--op", "p(v0)")
        assert code == 3 and err


class TestPersist:
    def test_triangle(self, capsys):
        bars = run_json(capsys, "persist", "--filtration", DATA / "triangle.flt", "--closure", "Delta", "--op", SUM)
        assert [b for b in bars if b["index"] == 1] == [{"index": 1, "birth": 1, "death": 2}]

    def test_verify_and_out(self, capsys, tmp_path):
        out = tmp_path / "bars.json"
        code, stdout, _ = run(capsys, "persist", "--filtration", DATA / "triangle.flt", "--closure", "Delta",
                              "--op", SUM, "--verify", "--out", out)
        assert code == 0 and stdout == "verified\n"
        assert json.loads(out.read_text())[0]["index"] == 0

    def test_constant_localized(self, capsys, tmp_path):
        flt = write(tmp_path, "k1.flt", "vertices: v0 v1 v2\n0 v0 v1\n0 v0 v2\n0 v0\n0 v1\n0 v2\n")
        bars = run_json(capsys, "persist", "--filtration", flt, "--op", "p(v0)", "--range", "0")
        assert bars == [{"index": 0, "birth": 0, "death": None}]

    def test_tsv(self, capsys):
        code, out, _ = run(capsys, "persist", "--filtration", DATA / "triangle.flt", "--closure", "Delta",
                           "--op", SUM, "--format", "tsv")
        assert code == 0 and out.splitlines() == ["index\tbirth\tdeath", "0\t0\tinf", "1\t1\t2"]

    def test_incompatible(self, capsys, tmp_path):
        raw = write(tmp_path, "raw.flt", "0 v0 v1\n0 v0\n1 v1\n")
        code, _, err = run(capsys, "persist", "--filtration", raw, "--op", "p(v0)+p(v1)")
        assert code == 3 and err


class TestRandom:
    def test_extremes(self, capsys):
        _, full, _ = run(capsys, "random", "--vertices", 3, "--p", 1)
        assert len(full.splitlines()) == 8
        _, empty, _ = run(capsys, "random", "--vertices", 3, "--p", 0)
        assert empty.splitlines() == ["vertices: v0 v1 v2"]

    @pytest.mark.parametrize("model,kind", [("p-complex", "simplicial"), ("q-independence", "independence")])
    def test_models(self, capsys, model, kind):
        _, out, _ = run(capsys, "random", "--vertices", 5, "--p", "1/2", "--model", model, "--seed", 3)
        assert classify(parse_hypergraph(out)) in (kind, "simplicial and independence") or not parse_hypergraph(out)

    def test_pipeline_into_closure(self, capsys, tmp_path):
        _, out, _ = run(capsys, "random", "--vertices", 5, "--p", "0.6", "--model", "p-complex", "--seed", 11)
        _, closed, _ = run(capsys, "closure", write(tmp_path, "r.hg", out), "--kind", "delta")
        assert closed == out

    def test_bad_probability(self, capsys):
        assert run(capsys, "random", "--vertices", 3, "--p", "2")[0] == 3
        assert run(capsys, "random", "--vertices", 3, "--p", "abc")[0] == 2


def _subprocess(args, env=None):
    return subprocess.run([sys.executable, "-m", "hyperkoszul", *map(str, args)], capture_output=True,
                          text=True, env={**os.environ, **(env or {})})


def test_env_selects_coefficients():
    a = _subprocess(["koszul", DATA / "edge.hg"], {"HG_COEFF": "rational"})
    b = _subprocess(["koszul", DATA / "edge.hg"], {"HG_COEFF": "gf:7"})
    assert json.loads(a.stdout)["coefficients"] == "rational"
    assert json.loads(b.stdout)["coefficients"] == "gf:7"


def test_byte_identical_reruns():
    args = ["mv", "--a", DATA / "h1.hg", "--b", DATA / "h2.hg", "--op", "p(v2)"]
    assert _subprocess(args).stdout == _subprocess(args).stdout
    args = ["random", "--vertices", 6, "--p", "0.3", "--seed", 42]
    assert _subprocess(args).stdout == _subprocess(args).stdout
