import json

import pytest
from click.testing import CliRunner

from boundfree.cli import main
from boundfree.decider import instance_to_json
from boundfree.polynomial import Polynomial

from conftest import example1, example2

EXAMPLE1 = instance_to_json(example1())
EXAMPLE2 = instance_to_json(example2())
IDENTITY = [["1", "0"], ["0", "1"]]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return _write


def poly_json(pairs, arity):
    return {"arity": arity, "terms": [{"coeff": c, "exps": e} for c, e in pairs]}


class TestDecide:
    def test_example1_json(self, runner, write):
        res = runner.invoke(main, ["decide", "--input", write("e1.json", EXAMPLE1), "--json"])
        assert res.exit_code == 0
        assert json.loads(res.output) == {"injective": True, "branch": "Main-Injective", "witness": None}

    def test_example2_human(self, runner, write):
        res = runner.invoke(main, ["decide", "--input", write("e2.json", EXAMPLE2), "--witness"])
        assert res.exit_code == 0
        assert res.output.splitlines() == ["not injective on L_1 (branch A1-t1)", "witness: [0] vs [1]"]

    def test_bad_rational(self, runner, write):
        data = {"t": 1, "x": [["1/0", "0"], ["0", "1"]], "z": [IDENTITY, IDENTITY]}
        assert runner.invoke(main, ["decide", "--input", write("bad.json", data)]).exit_code == 2

    def test_not_json(self, runner, write):
        assert runner.invoke(main, ["decide", "--input", write("bad.json", "{nope")]).exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        assert runner.invoke(main, ["decide", "--input", str(tmp_path / "absent.json")]).exit_code == 2

    def test_singular_z(self, runner, write):
        data = {"t": 1, "x": IDENTITY, "z": [IDENTITY, [["0", "1"], ["0", "1"]]]}
        res = runner.invoke(main, ["decide", "--input", write("sing.json", data)])
        assert res.exit_code == 3
        assert "nonsingular" in res.output

    def test_unknown_flag(self, runner, write):
        res = runner.invoke(main, ["decide", "--input", write("e1.json", EXAMPLE1), "--fast"])
        assert res.exit_code == 2

    def test_byte_identical(self, runner, write):
        path = write("e2.json", EXAMPLE2)
        outs = {runner.invoke(main, ["decide", "--input", path, "--json"]).output for _ in range(2)}
        assert len(outs) == 1


class TestOracle:
    def test_example2(self, runner, write):
        res = runner.invoke(main, ["oracle", "--input", write("e2.json", EXAMPLE2), "--bound", "2"])
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert data["found"] and data["pairs"][0] == {"left": [0], "right": [1]}

    def test_singular_z_is_fine(self, runner, write):
        data = {"t": 1, "x": [["3", "0"], ["0", "1"]], "z": [[["3", "1"], ["0", "1"]], [["0", "1"], ["0", "1"]]]}
        res = runner.invoke(main, ["oracle", "--input", write("s.json", data), "--bound", "3"])
        assert res.exit_code == 0 and not json.loads(res.output)["found"]


class TestAutomaton:
    @pytest.mark.parametrize("base, count", [("3", 5), ("3/2", 17)])
    def test_state_counts(self, runner, base, count):
        res = runner.invoke(main, ["automaton", "--base", base, "--digits", "-2,-1,0,1,2"])
        assert res.exit_code == 0
        assert res.output.strip() == f"states: {count}"

    @pytest.mark.parametrize("base", ["1", "0", "-1", "x", "1/0"])
    def test_bad_base(self, runner, base):
        assert runner.invoke(main, ["automaton", "--base", base, "--digits", "0,1"]).exit_code == 2

    def test_bad_digits(self, runner):
        assert runner.invoke(main, ["automaton", "--base", "2", "--digits", "a,b"]).exit_code == 2

    def test_dot(self, runner, tmp_path):
        dot = tmp_path / "eq.dot"
        res = runner.invoke(main, ["automaton", "--base", "3", "--digits", "-2,-1,0,1,2", "--dot", str(dot)])
        assert res.exit_code == 0
        text = dot.read_text()
        assert text.startswith("digraph") and "q0" in text


class TestEncode:
    def test_eval_product(self, runner, write):
        p = write("p.json", poly_json([("1", [1, 1])], 2))
        res = runner.invoke(main, ["encode", "--poly", p, "--eval", "2,3"])
        assert res.exit_code == 0
        assert res.output.strip() == "gadget: 6, polynomial: 6"

    def test_square_at_zero(self, runner, write):
        p = write("p.json", poly_json([("1", [2])], 1))
        res = runner.invoke(main, ["encode", "--poly", p, "--eval", "0"])
        assert res.output.strip() == "gadget: 0, polynomial: 0"

    def test_fraction_rejected(self, runner, write):
        p = write("p.json", poly_json([("1/2", [1])], 1))
        assert runner.invoke(main, ["encode", "--poly", p]).exit_code == 2

    def test_cap(self, runner, write):
        # (2*3)^6 = 46656 > 2^14
        p = write("p.json", poly_json([("1", [2, 2, 2])], 3))
        assert runner.invoke(main, ["encode", "--poly", p]).exit_code == 4

    def test_eval_arity(self, runner, write):
        p = write("p.json", poly_json([("1", [1, 1])], 2))
        assert runner.invoke(main, ["encode", "--poly", p, "--eval", "2"]).exit_code == 2

    def test_out_file_round_trips(self, runner, write, tmp_path):
        p = write("p.json", poly_json([("3", [1]), ("-1", [0])], 1))
        out = tmp_path / "g.json"
        assert runner.invoke(main, ["encode", "--poly", p, "--out", str(out)]).exit_code == 0
        data = json.loads(out.read_text())
        assert data["k"] == len(data["A"]) == len(data["M"])


class TestLemma7Command:
    @pytest.fixture
    def poly(self, write):
        return write("p.json", Polynomial.from_json(poly_json([("1", [1, 0]), ("-2", [0, 1])], 2)).to_json())

    def test_collision(self, runner, poly):
        res = runner.invoke(main, ["lemma7", "--poly", poly, "--a", "4", "--bound", "5"])
        assert json.loads(res.output) == {"a": 4, "bound": 5, "found": True, "collision": {"left": [2, 0], "right": [2, 1]}}

    def test_none(self, runner, poly):
        res = runner.invoke(main, ["lemma7", "--poly", poly, "--a", "3", "--bound", "8"])
        assert json.loads(res.output)["found"] is False

    def test_bad_poly(self, runner, write):
        assert runner.invoke(main, ["lemma7", "--poly", write("p.json", "[]"), "--a", "1"]).exit_code == 2

    def test_byte_identical(self, runner, poly):
        outs = {runner.invoke(main, ["lemma7", "--poly", poly, "--a", "4", "--bound", "5"]).output for _ in range(2)}
        assert len(outs) == 1
