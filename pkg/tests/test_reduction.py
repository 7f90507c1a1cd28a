import random
from fractions import Fraction as F

import pytest

from gnlattice import GNL, LabeledMatrix, compose, dualize, equal
from gnlattice.errors import (
    BadParameter,
    LatticeMismatch,
    PreconditionFailed,
    RankDeficient,
    TooLargeForExhaustiveCheck,
)
from gnlattice.reduction import (
    beta_sq,
    certify_alpha_sm,
    dual_linked_reduced_basis,
    dual_lll_from_primal,
    enumerate_short,
    is_lll_reduced,
    linked_reduced_basis,
    lll,
    lll_alpha_sq,
    lll_reduce,
    round_half_away,
    successive_minima,
)
from gnlattice.ground_linalg import gso_rows
from gnlattice.regular import RegularSpace

from oracles import (
    dot,
    lattice_points_within,
    linked_instance,
    minima_oracle,
    mul,
    naive_det,
    random_independent,
    same_lattice,
)

XY = ["x", "y"]


def test_round_half_away():
    assert [round_half_away(F(k, 2)) for k in range(-5, 6)] == [-3, -2, -2, -1, -1, 0, 1, 1, 2, 2, 3]


def test_lll_examples():
    assert lll_reduce([[2, 0], [0, 3]]) == [[2, 0], [0, 3]]
    r = lll(LabeledMatrix(XY, [[1, 1], [0, 3]]))
    assert r.basis.rows == ((1, 1), (-2, 1))
    assert mul(r.transform, [[1, 1], [0, 3]]) == [[1, 1], [-2, 1]]


def test_lll_errors():
    with pytest.raises(RankDeficient):
        lll([[1, 2], [2, 4]])
    with pytest.raises(BadParameter):
        lll([[1, 0]], delta=F(1, 4))
    with pytest.raises(BadParameter):
        lll([[1, 0]], delta=1)


@pytest.mark.parametrize("seed", range(20))
def test_lll_random(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 4)
    b = random_independent(rng, m, 4, -9, 9)
    r = lll(b)
    assert is_lll_reduced(r.basis)
    assert same_lattice(r.basis, b)
    assert abs(naive_det(r.transform)) == 1


def test_rational_input_is_reduced_in_place():
    b = [[F(1, 2), F(1, 2)], [0, F(3, 2)]]
    assert lll_reduce(b) == [[F(1, 2), F(1, 2)], [-1, F(1, 2)]]


def test_dual_lll_examples():
    assert dual_lll_from_primal([[1, 0], [0, 1]]).basis == [[0, 1], [1, 0]]
    r = dual_lll_from_primal([[2, 0], [0, 3]])
    assert r.basis == [[0, F(1, 3)], [F(1, 2), 0]]
    assert r.swaps == 0 and r.witness.lovasz_holds()
    assert r.witness.e_sq == (F(1, 9), F(1, 4))
    with pytest.raises(PreconditionFailed):
        dual_lll_from_primal([[1, 0], [5, 1]])


@pytest.mark.parametrize("seed", range(20))
def test_dual_lll_random(seed):
    rng = random.Random(60 + seed)
    b = lll_reduce(random_independent(rng, 3, 3, -6, 6))
    r = dual_lll_from_primal(b)
    assert r.swaps == 0
    assert is_lll_reduced(r.basis)
    d = dualize(GNL.lattice(["a", "b", "c"], b))
    assert equal(GNL.lattice(["a", "b", "c"], r.basis), d)
    assert [1 / dot(x, x) for x in reversed(lll_gso_norms(b))] == list(r.witness.e_sq)


def lll_gso_norms(b):
    g = gso_rows([[F(x) for x in r] for r in b])
    return [list(v) for v in g.b_star]


def test_successive_minima_examples():
    assert successive_minima([[2, 0], [0, 3]]).lambdas_sq == (4, 9)
    sm = successive_minima(LabeledMatrix(XY, [[1, 1], [0, 3]]))
    assert sm.lambdas_sq == (2, 5)
    assert [w.to_dict() for w in sm.witnesses] == [{"x": 1, "y": 1}, {"x": 1, "y": -2}]
    assert successive_minima([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).lambdas_sq == (1, 1, 1)
    with pytest.raises(TooLargeForExhaustiveCheck):
        successive_minima([[int(i == j) for j in range(7)] for i in range(7)])


@pytest.mark.parametrize("seed", range(15))
def test_minima_against_box_oracle(seed):
    rng = random.Random(90 + seed)
    b = random_independent(rng, rng.randint(1, 4), 4, -5, 5)
    sm = successive_minima(b)
    assert list(sm.lambdas_sq) == minima_oracle(b, lll_reduce(b))


@pytest.mark.parametrize("seed", range(10))
def test_enumerate_short_is_complete(seed):
    rng = random.Random(120 + seed)
    b = lll_reduce(random_independent(rng, 3, 3, -4, 4))
    t = [F(rng.randint(-9, 9), 2) for _ in range(3)]
    radius = F(rng.randint(5, 40))
    got = sorted(tuple(c) for c in enumerate_short(b, radius, t))
    want = sorted(c for c, _, _ in lattice_points_within(b, radius, t))
    assert got == want


def test_certify_alpha_sm():
    b = [[1, 1], [0, 3]]
    sm = successive_minima(b)
    assert certify_alpha_sm([[1, 1], [1, -2]], [1, 1], sm)
    assert not certify_alpha_sm([[1, 1], [4, 1]], [1, 1], sm)
    red = lll_reduce(b)
    assert certify_alpha_sm(red, [lll_alpha_sq(2)] * 2, sm)
    with pytest.raises(LatticeMismatch):
        certify_alpha_sm([[2, 0], [0, 3]], [1, 1], sm)


def test_linked_identity():
    g = ["s1", "s2", "p1", "p2"]
    v = RegularSpace(g, LabeledMatrix(g, [[1, 0, 1, 0], [0, 1, 0, 1]]), ("s1", "s2"))
    k_p = GNL.lattice(["p1", "p2"], [[2, 0], [0, 3]])
    b_s = linked_reduced_basis(v, k_p)
    assert b_s.rows == ((2, 0), (0, 3))
    d = dual_linked_reduced_basis(v, k_p)
    assert equal(GNL.lattice(["s1", "s2"], d), GNL.lattice(["s1", "s2"], [[F(1, 2), 0], [0, F(1, 3)]]))
    z = dual_linked_reduced_basis(v, GNL.integers(["p1", "p2"]))
    assert equal(GNL.lattice(["s1", "s2"], z), GNL.integers(["s1", "s2"]))


def test_linked_two_edge_graph():
    # two parallel edges s, p: V = span{(1, 1)}
    g = ["s", "p"]
    v = RegularSpace(g, LabeledMatrix(g, [[1, 1]]), ("s",))
    b_s = linked_reduced_basis(v, GNL.integers(["p"]))
    assert b_s.rows == ((1,),)


def test_linked_checks_preconditions():
    g = ["s", "p1", "p2"]
    v = RegularSpace(g, LabeledMatrix(g, [[1, 1, 0]]), ("s",))
    with pytest.raises(PreconditionFailed):
        linked_reduced_basis(v, GNL.integers(["p1", "p2"]))


@pytest.mark.parametrize("seed", range(12))
def test_linked_random(seed):
    rng = random.Random(500 + seed)
    v, k_p, s, p = linked_instance(rng, max_dim=4)
    k_s = compose(v.as_gnl(), k_p)
    b_s = linked_reduced_basis(v, k_p)
    m = b_s.nrows
    red_p = lll_reduce(k_p.lattice_basis)
    for x_s, x_p in zip(b_s.to_lists(), red_p.to_lists()):
        assert dot(x_s, x_s) <= len(s) * len(p) * dot(x_p, x_p)
    assert equal(GNL.lattice(b_s.ground, b_s), GNL.lattice(k_s.ground, k_s.lattice_basis))
    sm = successive_minima(k_s.lattice_basis.reindex(b_s.ground))
    assert certify_alpha_sm(b_s, [beta_sq(len(s), len(p), m)] * m, sm)
    d = dual_linked_reduced_basis(v, k_p)
    dual_s = dualize(k_s)
    assert equal(GNL.lattice(d.ground, d), GNL.lattice(dual_s.ground, dual_s.lattice_basis))
