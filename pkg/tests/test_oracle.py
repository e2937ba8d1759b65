from fractions import Fraction

import pytest

from mcsv import Instance, brute_solve, is_feasible
from conftest import random_instance


def inst(vectors, alpha):
    return Instance(vectors=tuple(tuple(v) for v in vectors), alpha=alpha)


def test_antipodal_pair():
    out = brute_solve(inst([(1, 1, 1), (-1, -1, -1)], Fraction(1, 2)))
    assert out.feasible and out.solution.cardinality == 2


def test_single_overweight_vector_infeasible():
    out = brute_solve(inst([(3, 4)], Fraction(1, 10)))
    assert not out.feasible


def test_zero_vector_guarantees_feasible(rng):
    for _ in range(10):
        base = random_instance(rng, n_max=6)
        i = Instance(vectors=base.vectors + ((0,) * base.q,), alpha=base.alpha)
        out = brute_solve(i)
        assert out.feasible and out.solution.cardinality >= 1


def test_guard():
    i = inst([(0,)] * 26, Fraction(1, 2))
    with pytest.raises(ValueError):
        brute_solve(i)


def test_solution_is_feasible(rng):
    for _ in range(40):
        i = random_instance(rng)
        out = brute_solve(i)
        if out.feasible:
            assert is_feasible(i, out.solution.indices)
            assert out.solution.sum == tuple(
                sum(i.vectors[j][d] for j in out.solution.indices)
                for d in range(i.q)
            )


def test_lex_smallest_tie_break():
    # both {0,1} and {1,2} sum to zero with cardinality 2; lex picks {0,1}
    out = brute_solve(inst([(1,), (-1,), (1,)], Fraction(1, 2)))
    assert out.solution.indices == (0, 1)


def test_exact_path_for_huge_coordinates():
    out = brute_solve(inst([(10**9,), (-(10**9),)], Fraction(1, 2)))
    assert out.feasible and out.solution.indices == (0, 1)
