"""The command-line front end: output shapes, exit codes, determinism."""

import json

import pytest

from diffalg.cli import main

FLAGSHIP = """\
field: Q
vars: x, y
ranking: elim x > y
eq u1 = x'' + y
eq u2 = x'^2 + y
point p0: x = 0, y = 0
"""

CUSP = """\
field: Q
vars: x, y
ranking: elim x > y
eq g1 = y^2 - x^3
eq g2 = x'
point origin: x = 0, y = 0
"""

QT_PAIR = """\
field: Q(t)
vars: x, y
ranking: elim x > y
eq f = x' + y'''
eq g = x^2 + y''*x' + t
"""


@pytest.fixture
def flagship(tmp_path):
    p = tmp_path / "flagship.sys"
    p.write_text(FLAGSHIP)
    return str(p)


@pytest.fixture
def cusp(tmp_path):
    p = tmp_path / "cusp.sys"
    p.write_text(CUSP)
    return str(p)


class TestOrderAndJacobi:
    def test_order(self, flagship, capsys):
        assert main(["order", flagship]) == 0
        out = capsys.readouterr().out
        assert "order matrix (maxplus):" in out
        assert "[2  0]" in out

    def test_jacobi(self, flagship, capsys):
        assert main(["jacobi", flagship]) == 0
        out = capsys.readouterr().out
        assert "jacobi number: 2" in out
        assert "witness: x <- u1, y <- u2" in out
        assert "ritt bound: 2" in out

    def test_jacobi_minusinf_skips_ritt_bound(self, flagship, capsys):
        assert main(["jacobi", flagship, "--convention", "minusinf"]) == 0
        out = capsys.readouterr().out
        assert "ritt bound" not in out


class TestReduce:
    def test_reduce_over_qt(self, tmp_path, capsys):
        p = tmp_path / "pair.sys"
        p.write_text(QT_PAIR)
        assert main(["reduce", str(p), "--target", "f"]) == 0
        out = capsys.readouterr().out
        assert "multiplier: y''" in out
        assert "remainder: y''*y''' - x^2 - t" in out
        assert "verified: yes" in out

    def test_missing_target_is_domain_error(self, flagship, capsys):
        assert main(["reduce", flagship, "--target", "nope"]) == 3


class TestLinearize:
    def test_symbolic(self, flagship, capsys):
        assert main(["linearize", flagship]) == 0
        out = capsys.readouterr().out
        assert "L[u1] = dy + dx''" in out

    def test_at_point(self, cusp, capsys):
        assert main(["linearize", cusp, "--at", "origin", "--convention", "minusinf"]) == 0
        out = capsys.readouterr().out
        assert "L[g1, origin] = 0" in out
        assert "L[g2, origin] = dx'" in out
        assert "linearized jacobi number: -inf" in out
        assert "original jacobi number: 1" in out

    def test_point_off_zero_set(self, tmp_path, capsys):
        p = tmp_path / "off.sys"
        p.write_text(
            "field: Q\nvars: x, y\nranking: elim x > y\n"
            "eq g1 = y^2 - x^3\neq g2 = y\npoint p1: x = 1, y = 2\n"
        )
        assert main(["linearize", str(p), "--at", "p1"]) == 3


class TestDecompose:
    def test_flagship(self, flagship, capsys):
        assert main(["decompose", flagship]) == 0
        out = capsys.readouterr().out
        assert "charset: y; x'" in out
        assert "charset: y^3 + 1/4*y'^2; x'*y - 1/2*y'" in out
        assert "# complete: yes" in out

    def test_budget_exhaustion_exits_nonzero(self, flagship, capsys):
        assert main(["decompose", flagship, "--max-steps", "1"]) == 1
        assert "# complete: no" in capsys.readouterr().out

    def test_output_feeds_jbc_check(self, flagship, tmp_path, capsys):
        main(["decompose", flagship])
        comp_file = tmp_path / "comps.txt"
        comp_file.write_text(capsys.readouterr().out)
        assert main(["jbc-check", flagship, "--components", str(comp_file)]) == 0
        assert "verdict: HOLDS" in capsys.readouterr().out


class TestJbcCheck:
    def test_holds(self, flagship, capsys):
        assert main(["jbc-check", flagship]) == 0
        out = capsys.readouterr().out
        assert "verdict: HOLDS" in out
        assert "dim <= J: yes (equality)" in out

    def test_json(self, flagship, capsys):
        assert main(["jbc-check", flagship, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "HOLDS"
        assert data["system"]["jacobi_weak"] == 2

    def test_inconclusive_exits_one(self, flagship, capsys):
        assert main(["jbc-check", flagship, "--max-steps", "1"]) == 1
        assert "INCONCLUSIVE" in capsys.readouterr().out

    def test_non_square_is_domain_error(self, tmp_path, capsys):
        p = tmp_path / "rect.sys"
        p.write_text("field: Q\nvars: x, y\nranking: elim x > y\neq u = x\n")
        assert main(["jbc-check", str(p)]) == 3


class TestMembership:
    def test_member(self, tmp_path, capsys):
        p = tmp_path / "sq.sys"
        p.write_text("field: Q\nvars: x\nranking: elim x\neq g1 = x^2\n")
        assert main(["member", str(p), "x'^3", "--bounds", "2,3,6,6"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("Member (e = 1)")

    def test_not_proven_member(self, tmp_path, capsys):
        p = tmp_path / "sq.sys"
        p.write_text("field: Q\nvars: x\nranking: elim x\neq g1 = x^2\n")
        assert main(["member", str(p), "x"]) == 1
        assert "Inconclusive" in capsys.readouterr().out

    def test_radical(self, cusp, capsys):
        assert main(["radical-member", cusp, "y'"]) == 0
        assert "(e = 3)" in capsys.readouterr().out

    def test_individual_bound_flags(self, tmp_path, capsys):
        p = tmp_path / "sq.sys"
        p.write_text("field: Q\nvars: x\nranking: elim x\neq g1 = x^2\n")
        assert main(["member", str(p), "x'^3", "--jets", "2", "--prolong", "3", "--deg", "6"]) == 0

    def test_bad_expression_is_format_error(self, cusp, capsys):
        assert main(["member", cusp, "y +"]) == 2


class TestErrorChannel:
    def test_missing_file(self, capsys):
        assert main(["jacobi", "no-such-file.sys"]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_file(self, tmp_path, capsys):
        p = tmp_path / "bad.sys"
        p.write_text("field: Q\nvars: x\nranking: elim x\neq u = x +\n")
        assert main(["jacobi", str(p)]) == 2
        assert "line 4" in capsys.readouterr().err

    def test_usage_error_exits_two(self, flagship):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command", flagship])
        assert exc.value.code == 2


class TestDeterminism:
    def test_repeat_runs_are_byte_identical(self, flagship, capsys):
        main(["jbc-check", flagship])
        first = capsys.readouterr().out
        main(["jbc-check", flagship])
        second = capsys.readouterr().out
        assert first == second
