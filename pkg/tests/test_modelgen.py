from fractions import Fraction

import pytest

from mcsv import Instance, dp_solve
from mcsv.modelgen import (
    ModelError,
    SolverSolutionError,
    emit_model,
    enumerate_model,
    parse_model,
    parse_solver_solution,
)
from conftest import random_instance


def inst(vectors, alpha):
    return Instance(vectors=tuple(tuple(v) for v in vectors), alpha=alpha)


GOLDEN_ANTIPODAL = """\
\\ mcsv quadratic model v1
\\ N=2 q=3 alpha=1/2
\\ threshold alpha*||sum Y||^2 / N = 0/1 (= 0)
Maximize
 obj: x1 + x2
Subject To
 qc: [ 12 x1 ^2 - 24 x1 * x2 + 12 x2 ^2 ] <= 0
Binary
 x1 x2
End
"""

GOLDEN_ZERO = """\
\\ mcsv quadratic model v1
\\ N=1 q=1 alpha=1/3
\\ threshold alpha*||sum Y||^2 / N = 0/1 (= 0)
Maximize
 obj: x1
Subject To
 qc: [ 0 x1 ^2 ] <= 0
Binary
 x1
End
"""


class TestEmit:
    def test_golden_antipodal(self):
        m = emit_model(inst([(1, 1, 1), (-1, -1, -1)], Fraction(1, 2)))
        assert m.text == GOLDEN_ANTIPODAL
        assert m.var_names == ("x1", "x2")

    def test_golden_zero_vector(self):
        m = emit_model(inst([(0,)], Fraction(1, 3)))
        assert m.text == GOLDEN_ZERO

    def test_threshold_comment_fraction_only_when_not_finite(self):
        m = emit_model(inst([(1, 0), (0, 1), (1, 1)], Fraction(1, 3)))
        assert "= 8/9" in m.text
        assert "(=" not in m.text.splitlines()[2]

    def test_coefficients_round_trip(self, rng):
        for _ in range(25):
            i = random_instance(rng, n_max=7)
            pm = parse_model(emit_model(i).text)
            assert pm.n == i.n
            lhs_mult = i.n * i.alpha.denominator
            lin = i.alpha.numerator * i.total_norm_sq
            for a in range(i.n):
                for b in range(a, i.n):
                    dot = sum(i.vectors[a][j] * i.vectors[b][j] for j in range(i.q))
                    want = lhs_mult * dot * (1 if a == b else 2)
                    assert pm.quad.get((a, b), 0) == want or (i.n == 1 and dot == 0)
                assert pm.lin.get(a, 0) == -lin


class TestEnumeration:
    def test_zero_vector_optimum_one(self):
        val, mask = enumerate_model(parse_model(GOLDEN_ZERO))
        assert (val, mask) == (1, 1)

    def test_antipodal_optimum_two(self):
        val, _ = enumerate_model(parse_model(GOLDEN_ANTIPODAL))
        assert val == 2

    def test_matches_dp_on_randoms(self, rng):
        for _ in range(50):
            i = random_instance(rng, n_max=10)
            val, _ = enumerate_model(parse_model(emit_model(i).text))
            out, _ = dp_solve(i)
            assert val == (out.solution.cardinality if out.feasible else 0)

    def test_guard(self):
        i = inst([(1,)] * 23, Fraction(1, 2))
        with pytest.raises(ModelError):
            enumerate_model(parse_model(emit_model(i).text))


class TestParseModel:
    @pytest.mark.parametrize("text", [
        "",
        "Maximize\n obj: x1\nBinary\n x1\nEnd\n",
        "Maximize\n obj: x1\nSubject To\n qc: 1 x1 <= 0\nBinary\n x1\nEnd\n",
        "Maximize\n x1\nSubject To\n qc: [ 1 x1 ^2 ] <= 0\nBinary\n x1\nEnd\n",
        "Maximize\n obj: x1\nSubject To\n qc: [ 1 x1 ^2 ] <= 0\nBinary\n x2\nEnd\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(ModelError):
            parse_model(text)


class TestSolverSolution:
    def setup_method(self):
        self.inst = inst([(1, 1, 1), (-1, -1, -1)], Fraction(1, 2))

    def test_valid_assignment(self):
        out = parse_solver_solution("x1 = 1\nx2 = 1\n", self.inst)
        assert out.feasible and out.solution.cardinality == 2

    def test_matches_dp_witness(self, rng):
        for _ in range(20):
            i = random_instance(rng, n_max=8)
            out, _ = dp_solve(i)
            if not out.feasible:
                continue
            chosen = set(out.solution.indices)
            text = "\n".join(
                f"x{j + 1} {1 if j in chosen else 0}" for j in range(i.n)
            )
            parsed = parse_solver_solution(text, i)
            assert parsed.solution.cardinality == out.solution.cardinality

    def test_all_zeros_is_error(self):
        with pytest.raises(SolverSolutionError, match="empty subset"):
            parse_solver_solution("x1 0\nx2 0\n", self.inst)

    def test_fractional_value_is_error(self):
        with pytest.raises(SolverSolutionError, match="non-binary"):
            parse_solver_solution("x1 0.5\nx2 1\n", self.inst)

    def test_missing_variable_is_error(self):
        with pytest.raises(SolverSolutionError, match="missing"):
            parse_solver_solution("x1 1\n", self.inst)

    def test_violating_assignment_reported(self):
        j = inst([(3, 4)], Fraction(1, 10))
        with pytest.raises(SolverSolutionError, match="violates"):
            parse_solver_solution("x1 1\n", j)

    def test_conflicting_duplicates_rejected(self):
        with pytest.raises(SolverSolutionError, match="conflicting"):
            parse_solver_solution("x1 1\nx1 0\nx2 1\n", self.inst)

    def test_tolerant_near_binary_values(self):
        out = parse_solver_solution("x1 0.9999999\nx2 1.0000001\n", self.inst)
        assert out.solution.cardinality == 2
