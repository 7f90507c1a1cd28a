import random
from fractions import Fraction as F

import pytest

from gnlattice import GNL, LabeledMatrix, LabeledVector, member
from gnlattice.cvp import (
    babai_nearest,
    closest,
    cvp_bruteforce,
    shortest_linked,
    shortest_preimage_projection,
    shortest_with_restriction,
)
from gnlattice.errors import NoPreimage, NotInLinkedLattice, NotInProjectionLattice, PreconditionFailed
from gnlattice.reduction import lll_reduce
from gnlattice.regular import RegularSpace

from oracles import closest_distance_oracle, lattice_points_within, random_independent

XY = ["x", "y"]


def test_babai_examples():
    r = babai_nearest(LabeledMatrix(XY, [[1, 0], [0, 1]]), LabeledVector(XY, [F(2, 5), F(13, 5)]))
    assert r.vector.to_dict() == {"x": 0, "y": 3}
    assert r.approx_factor_sq == 4 and not r.exact
    b = LabeledMatrix(XY, [[1, 1], [-2, 1]])
    r = babai_nearest(b, LabeledVector(XY, [-1, 2]))
    assert r.distance_sq == 0 and r.vector.to_dict() == {"x": -1, "y": 2}
    with pytest.raises(PreconditionFailed):
        babai_nearest(LabeledMatrix(XY, [[1, 0], [7, 1]]), LabeledVector(XY, [0, 0]))


def test_babai_uses_the_residual():
    # rounding each coordinate against the original target would give (3, 2)
    b = LabeledMatrix(XY, [[2, 0], [1, 2]])
    r = babai_nearest(b, LabeledVector(XY, [F(7, 5), F(19, 10)]))
    assert r.vector.to_dict() == {"x": 1, "y": 2}


def test_cvp_bruteforce_examples():
    b = LabeledMatrix(XY, [[2, 0], [0, 3]])
    r = cvp_bruteforce(b, LabeledVector(XY, [1, 1]))
    assert r.vector.to_dict() == {"x": 0, "y": 0} and r.distance_sq == 2 and r.exact
    assert cvp_bruteforce(b, LabeledVector(XY, [0, 0])).vector.is_zero()
    r = cvp_bruteforce(b, LabeledVector(XY, [4, -3]))
    assert r.vector.to_dict() == {"x": 4, "y": -3} and r.coefficients == (2, -1)


@pytest.mark.parametrize("seed", range(20))
def test_babai_within_factor_of_bruteforce(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    labels = ["a", "b", "c"]
    b = lll_reduce(LabeledMatrix(labels, random_independent(rng, m, 3, -6, 6)))
    x = LabeledVector(labels, [F(rng.randint(-30, 30), rng.randint(1, 4)) for _ in labels])
    exact = cvp_bruteforce(b, x)
    approx = babai_nearest(b, x)
    assert approx.distance_sq <= approx.approx_factor_sq * exact.distance_sq
    assert exact.distance_sq == closest_distance_oracle(b.to_lists(), list(x.entries))
    assert closest(b, x, exact=False).distance_sq >= exact.distance_sq


def test_q1_examples():
    l_pq = LabeledMatrix(["p", "q"], [[1, 3], [0, 5]])
    r = shortest_with_restriction(l_pq, LabeledVector(["p"], [1]))
    assert r.vector.to_dict() == {"p": 1, "q": -2} and r.exact
    assert shortest_with_restriction(l_pq, LabeledVector(["p"], [0])).vector.is_zero()
    with pytest.raises(NoPreimage):
        shortest_with_restriction(LabeledMatrix(["p", "q"], [[2, 1]]), LabeledVector(["p"], [1]))


def test_q2_examples():
    z2 = GNL.integers(XY)
    full = LabeledMatrix(XY, [[1, 0], [0, 1]])
    target = LabeledVector(XY, [2, -1])
    assert shortest_preimage_projection(z2, full, target).vector == target
    none = LabeledMatrix(XY, [])
    assert shortest_preimage_projection(z2, none, LabeledVector(XY, [0, 0])).vector.is_zero()
    r = shortest_preimage_projection(z2, LabeledMatrix(XY, [[1, 0]]), LabeledVector(XY, [1, 0]))
    assert r.vector.to_dict() == {"x": 1, "y": 0}
    with pytest.raises(NotInProjectionLattice):
        shortest_preimage_projection(z2, LabeledMatrix(XY, [[1, 0]]), LabeledVector(XY, [F(1, 2), 0]))
    with pytest.raises(NotInProjectionLattice):
        shortest_preimage_projection(z2, LabeledMatrix(XY, [[1, 0]]), LabeledVector(XY, [1, 1]))


def test_q3_examples():
    g = ["s1", "s2", "p1", "p2"]
    ident = RegularSpace(g, LabeledMatrix(g, [[1, 0, 1, 0], [0, 1, 0, 1]]), ("s1", "s2"))
    l_p = LabeledMatrix(["p1", "p2"], [[2, 1], [0, 3]])
    r = shortest_linked(ident, l_p, LabeledVector(["s1", "s2"], [2, 4]))
    assert r.vector.to_dict() == {"p1": 2, "p2": 4}
    with pytest.raises(NotInLinkedLattice):
        shortest_linked(ident, l_p, LabeledVector(["s1", "s2"], [1, 0]))


def test_q3_with_a_nontrivial_contraction():
    # V x P = span{(1, -1)}, so the partner is fixed only modulo that line
    g = ["s", "p1", "p2"]
    v = RegularSpace(g, LabeledMatrix(g, [[1, 0, 1], [0, 1, -1]]), ("s", "p1"))
    l_p = LabeledMatrix(["p1", "p2"], [[1, 0], [0, 1]])
    r = shortest_linked(v, l_p, LabeledVector(["s"], [3]))
    # partners of 3 are (b, 3 - b); the shortest have b = 1 or 2
    assert r.norm_sq == 5
    assert member(v.as_gnl(), LabeledVector(g, [3] + list(r.vector.entries)))


def _points_of(basis, radius):
    return [(v, d) for _, v, d in lattice_points_within(basis, radius)]


@pytest.mark.parametrize("seed", range(15))
def test_q1_matches_enumeration(seed):
    rng = random.Random(40 + seed)
    labels = ["p", "q1", "q2"]
    b = random_independent(rng, 3, 3, -4, 4)
    x = [sum(rng.randint(-2, 2) * r[0] for r in b)]
    res = shortest_with_restriction(LabeledMatrix(labels, b), LabeledVector(["p"], x))
    basis = lll_reduce(b)
    best = min(d for v, d in _points_of(basis, res.norm_sq) if v[0] == x[0])
    assert res.norm_sq == best
    approx = shortest_with_restriction(LabeledMatrix(labels, b), LabeledVector(["p"], x), exact=False)
    assert approx.vector["p"] == x[0] and member(GNL.lattice(labels, b), approx.vector)
