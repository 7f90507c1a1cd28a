from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gnlattice.errors import (
    DisjointnessViolation,
    GroundMismatch,
    RankDeficient,
    SingularMatrix,
    UnknownLabel,
)
from gnlattice.ground_linalg import (
    GroundSet,
    LabeledMatrix,
    LabeledVector,
    det,
    disjoint_concat,
    fraction_str,
    gram_schmidt,
    inverse,
    invert,
    negate_on,
    nullspace,
    project,
    rank,
    rref,
    solve_left,
)

from oracles import mul, naive_det, naive_rank, naive_solve

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=0, max_size=max_rows)
    )


def test_ground_set_rejects_duplicates_and_unknown_labels():
    with pytest.raises(DisjointnessViolation):
        GroundSet(["a", "a"])
    g = GroundSet(["a", "b"])
    with pytest.raises(UnknownLabel):
        g.index("c")
    assert g.index("b") == 1
    assert list(g.rename({"a": "x"})) == ["x", "b"]


def test_disjoint_concat():
    out = disjoint_concat(LabeledVector(["s"], [1]), LabeledVector(["p"], [2]))
    assert out.to_dict() == {"s": 1, "p": 2}
    out = disjoint_concat(LabeledVector(["s"], [0]), LabeledVector([], []))
    assert out.to_dict() == {"s": 0}
    with pytest.raises(DisjointnessViolation):
        disjoint_concat(LabeledVector(["s"], [0]), LabeledVector(["s"], [1]))


def test_negate_on():
    x = LabeledVector(["s", "p"], [1, 2])
    assert negate_on(x, ["p"]).to_dict() == {"s": 1, "p": -2}
    assert negate_on(x, []) == x
    m = LabeledMatrix(["a", "b", "c"], [[1, -2, 3], [F(1, 2), 0, -1]])
    assert negate_on(negate_on(m, ["a", "c"]), ["a", "c"]).rows == m.rows
    with pytest.raises(UnknownLabel):
        negate_on(x, ["q"])


def test_invert():
    assert invert(LabeledMatrix(["a", "b"], [[1, 0], [0, 1]])).rows == ((1, 0), (0, 1))
    assert invert(LabeledMatrix(["a", "b"], [[2, 0], [0, 3]])).rows == ((F(1, 2), 0), (0, F(1, 3)))
    with pytest.raises(SingularMatrix):
        invert(LabeledMatrix(["a", "b"], [[1, 2], [2, 4]]))


def test_gram_schmidt_examples():
    g = gram_schmidt(LabeledMatrix(["x", "y"], [[2, 0], [0, 3]]))
    assert g.b_star == ((2, 0), (0, 3))
    assert g.mu == ((1, 0), (0, 1))
    g = gram_schmidt(LabeledMatrix(["x", "y"], [[1, 1], [0, 3]]))
    assert g.mu[1][0] == F(3, 2)
    assert g.b_star[1] == (F(-3, 2), F(3, 2))
    with pytest.raises(RankDeficient):
        gram_schmidt([[1, 2], [2, 4]])


def test_project():
    x = LabeledVector(["a", "b"], [1, 1])
    on, off = project(x, LabeledMatrix(["a", "b"], [[1, 0]]))
    assert on.to_dict() == {"a": 1, "b": 0} and off.to_dict() == {"a": 0, "b": 1}
    on, off = project(x, LabeledMatrix(["a", "b"], [[2, 2]]))
    assert on == x and off.is_zero()
    with pytest.raises(GroundMismatch):
        project(x, LabeledMatrix(["b", "a"], [[1, 0]]))


def test_fraction_str():
    assert fraction_str(F(3)) == "3"
    assert fraction_str(F(-2, 4)) == "-1/2"


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_plain_elimination(a):
    assert rank(a) == naive_rank(a)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_inverse(a):
    d = det(a)
    assert d == naive_det(a)
    if d:
        inv = inverse(a)
        n = len(a)
        assert mul(a, inv) == [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        with pytest.raises(SingularMatrix):
            inverse(a)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_left_and_nullspace(a, data):
    n = len(a[0]) if a else 1
    b = data.draw(st.lists(small_ints, min_size=n, max_size=n))
    y = solve_left(a, b) if a else None
    expect = naive_solve(a, b) if a else None
    assert (y is None) == (expect is None)
    if y is not None:
        assert [sum(c * r[j] for c, r in zip(y, a)) for j in range(n)] == b
    if a:
        ker = nullspace(a, n)
        assert len(ker) == n - naive_rank(a)
        assert all(sum(x * y for x, y in zip(r, k)) == 0 for r in a for k in ker)


def test_rref_is_reduced():
    r, piv = rref([[2, 4, 1], [1, 2, 0]])
    assert piv == [0, 2]
    assert r == [[1, 2, 0], [0, 0, 1]]
