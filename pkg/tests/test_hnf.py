import random
from fractions import Fraction as F

import pytest

from gnlattice.errors import BadParameter, RankDeficient
from gnlattice.ground_linalg import LabeledMatrix
from gnlattice.hnf import (
    basis_from_generators,
    hnf,
    integral_solutions,
    lex_column_basis,
    separators,
    visibility_form,
    xgcd,
)

from oracles import (
    in_lattice,
    is_hnf,
    lex_column_basis_exhaustive,
    mul,
    naive_det,
    naive_rank,
    random_int_matrix,
    random_unimodular,
    same_lattice,
)


def test_xgcd():
    for a in range(-12, 13):
        for b in range(-12, 13):
            g, x, y = xgcd(a, b)
            assert g >= 0 and a * x + b * y == g
            if a or b:
                assert a % g == 0 and b % g == 0


def test_hnf_examples():
    r = hnf(LabeledMatrix(["x", "y"], [[2, 3], [4, 5]]))
    assert r.H.rows == ((2, 0), (0, 1))
    r = hnf(LabeledMatrix(["x", "y"], [[1, 0], [0, 1]]))
    assert r.H.rows == ((1, 0), (0, 1))
    assert r.U == ((1, 0), (0, 1))


def test_hnf_of_rational_rows_scales_back():
    r = hnf(LabeledMatrix(["x", "y"], [[F(1, 2), 0], [0, F(1, 3)]]))
    assert r.H.rows == ((F(1, 2), 0), (0, F(1, 3)))


@pytest.mark.parametrize("seed", range(40))
def test_hnf_properties_on_random_input(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    a = random_int_matrix(rng, m, n)
    r = hnf(a)
    h = [list(x) for x in r.H.rows]
    assert is_hnf(h)
    assert mul(r.U, a) == h
    assert abs(naive_det(r.U)) == 1
    assert r.rank == naive_rank(a)
    assert all(not any(x) for x in h[r.rank :])


def test_basis_from_generators():
    b = basis_from_generators(LabeledMatrix(["a", "b"], [[1, 1], [2, 2], [0, 3]]))
    assert b.rows == ((1, 1), (0, 3))
    assert basis_from_generators(LabeledMatrix(["a", "b"], [])).nrows == 0
    rng = random.Random(5)
    for _ in range(20):
        g = random_int_matrix(rng, 3, 4)
        b = basis_from_generators(g + g)
        assert b.nrows == naive_rank(g)
        assert all(in_lattice(b.to_lists(), r) for r in g)


def test_lex_column_basis():
    assert lex_column_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [0, 1, 2]
    assert lex_column_basis([[0, 1], [0, 2]]) == [1]
    assert lex_column_basis([[0, 0]]) == []
    rng = random.Random(11)
    for _ in range(60):
        a = random_int_matrix(rng, rng.randint(1, 4), rng.randint(1, 6), -2, 2)
        assert lex_column_basis(a) == lex_column_basis_exhaustive(a)


def test_visibility_form_examples():
    v = visibility_form(LabeledMatrix(["s", "p"], [[1, 0], [0, 1]]), ["s"], ["p"])
    assert v.contraction_basis.rows == ((1,),)
    assert v.restriction_basis.rows == ((1,),)
    v = visibility_form(LabeledMatrix(["s", "p"], [[1, 2]]), ["s"], ["p"])
    assert v.contraction_basis.nrows == 0
    assert v.restriction_basis.rows == ((2,),)
    with pytest.raises(RankDeficient):
        visibility_form(LabeledMatrix(["s", "p"], [[1, 2], [2, 4]]), ["s"], ["p"])


@pytest.mark.parametrize("seed", range(20))
def test_visibility_form_blocks(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    labels = [f"x{i}" for i in range(n)]
    rows = random_unimodular(rng, n)
    rows = mul(rows, [[rng.choice([1, 2, 3]) if i == j else 0 for j in range(n)] for i in range(n)])
    b = LabeledMatrix(labels, rows)
    s = labels[: rng.randint(1, n - 1)]
    p = [a for a in labels if a not in s]
    v = visibility_form(b, s, p)
    full = v.matrix.to_lists()
    k = v.n_contraction_rows
    # top block vanishes on P, bottom block is independent on P
    assert all(x == 0 for r in full[:k] for j, x in enumerate(r) if labels[j] in p)
    assert naive_rank(v.restriction_basis.to_lists() or [[0]]) == v.restriction_basis.nrows
    assert same_lattice(full, rows)
    assert abs(naive_det(v.U)) == 1


def test_separators_examples():
    assert separators(LabeledMatrix(["e1", "e2", "e3"], [[2, 0, 0], [0, 3, 0], [0, 0, 4]])) == [
        ("e1",), ("e2",), ("e3",)
    ]
    assert separators(LabeledMatrix(["e1", "e2", "e3"], [[1, 1, 0], [0, 2, 0], [0, 0, 5]])) == [
        ("e1", "e2"), ("e3",)
    ]


def test_integral_solutions_examples():
    two = integral_solutions(2, space=LabeledMatrix(["a", "b"], [[1, 1]]))
    assert two.rows == ((1, 1),)
    three = integral_solutions(
        3, lattice=LabeledMatrix(["a", "b"], [[1, 0], [0, 1]]), space=LabeledMatrix(["a", "b"], [[2, 1]])
    )
    assert three.rows == ((2, 1),)
    assert integral_solutions(1, A=[[2]], B=[]) == []
    # A = [1], B = [[2]]: kernel is spanned by (2, -1) up to sign
    (k,) = integral_solutions(1, A=[[1]], B=[[2]])
    assert abs(k[0]) == 2 and abs(k[1]) == 1 and k[0] + 2 * k[1] == 0
    with pytest.raises(RankDeficient):
        integral_solutions(1, A=[[1, 1], [2, 2]])
    with pytest.raises(BadParameter):
        integral_solutions(4)


def test_integral_solutions_mode2_rational_space():
    v = integral_solutions(2, space=LabeledMatrix(["a", "b", "c"], [[F(1, 2), F(1, 3), 0]]))
    assert v.rows == ((3, 2, 0),)
