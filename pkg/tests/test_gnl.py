import random
from fractions import Fraction as F

import pytest

from gnlattice import (
    GNL,
    LabeledMatrix,
    LabeledVector,
    canonicalize,
    contains,
    contract,
    dualize,
    equal,
    intersect,
    member,
    minor,
    restrict,
    sum_,
)
from gnlattice.errors import BadParameter, GroundMismatch, UnknownLabel
from gnlattice.gnl import direct_sum
from gnlattice.hnf import integral_solutions

from oracles import dot, mul, naive_det, random_gnl, random_unimodular

E = ["e"]
XY = ["x", "y"]


def lat(ground, rows):
    return GNL.lattice(ground, rows)


def test_canonicalize_examples():
    k = canonicalize(LabeledMatrix(XY, [[1, 0]]), LabeledMatrix(XY, [[0, 1]]))
    assert k.lattice_basis.rows == ((1, 0),) and k.space_basis.rows == ((0, 1),)
    k = canonicalize(LabeledMatrix(XY, [[1, 1]]), LabeledMatrix(XY, [[1, 0]]))
    assert k.lattice_basis.rows == ((0, 1),) and k.space_basis.rows == ((1, 0),)
    k = canonicalize(LabeledMatrix(XY, [[1, 0], [2, 0]]), None)
    assert k.lattice_basis.rows == ((1, 0),) and k.space_dim == 0


def test_constructor_insists_on_orthogonal_parts():
    with pytest.raises(BadParameter):
        GNL(XY, [[1, 1]], [[1, 0]])


def test_dualize_examples():
    z = GNL.integers(["a", "b", "c"])
    assert equal(dualize(z), z)
    d = dualize(lat(XY, [[1, 1], [0, 3]]))
    assert equal(d, lat(XY, [[1, 0], [F(-1, 3), F(1, 3)]]))
    d = dualize(lat(XY, [[1, 1]]))
    assert d.space_basis.to_lists() == [[1, -1]]
    assert equal(d, canonicalize(LabeledMatrix(XY, [[F(1, 2), F(1, 2)]]), LabeledMatrix(XY, [[1, -1]])))


def test_dual_pairing_is_integral_and_determinant_reciprocal():
    b = [[1, 1], [0, 3]]
    d = dualize(lat(XY, b)).lattice_basis.to_lists()
    assert all(dot(u, v).denominator == 1 for u in b for v in d)
    assert abs(naive_det(b) * naive_det(d)) == 1


def test_dual_of_a_space_is_its_complement():
    v = GNL.space(["a", "b", "c"], [[1, 2, 0]])
    d = dualize(v)
    assert d.is_vector_space() and d.space_dim == 2
    assert all(dot(r, [1, 2, 0]) == 0 for r in d.space_basis.rows)


def test_sum_examples():
    assert equal(sum_(lat(E, [[2]]), lat(E, [[3]])), lat(E, [[1]]))
    k = lat(["s"], [[2]])
    both = sum_(k, GNL.zero(["q"]))
    assert equal(both, direct_sum(k, GNL.zero(["q"])))
    assert equal(sum_(k, GNL.zero(["s"])), k)


def test_intersect_examples():
    assert equal(intersect(lat(E, [[2]]), lat(E, [[3]])), lat(E, [[6]]))
    k = lat(XY, [[1, 1], [0, 3]])
    assert equal(intersect(k, k), k)
    diag = intersect(GNL.integers(XY), GNL.space(XY, [[1, 1]]))
    assert equal(diag, lat(XY, [[1, 1]]))
    via_solutions = integral_solutions(3, lattice=LabeledMatrix(XY, [[1, 0], [0, 1]]), space=LabeledMatrix(XY, [[1, 1]]))
    assert diag.lattice_basis.rows == via_solutions.rows


def test_minor_examples():
    k = lat(["s", "p"], [[1, 2]])
    assert equal(minor(k, ["s"], "restrict"), GNL.integers(["s"]))
    assert equal(minor(k, ["s"], "contract"), GNL.zero(["s"]))
    assert equal(restrict(k, ["s", "p"]), k)
    with pytest.raises(UnknownLabel):
        minor(k, ["q"])
    with pytest.raises(BadParameter):
        minor(k, ["s"], "squash")


def test_member_examples():
    k = lat(XY, [[1, 1], [0, 3]])
    assert member(k, LabeledVector(XY, [0, 0]))
    assert member(k, LabeledVector(XY, [1, 1]))
    assert not member(k, LabeledVector(XY, [1, 0]))
    with pytest.raises(GroundMismatch):
        member(k, LabeledVector(["x", "z"], [0, 0]))


def test_equal_examples():
    k = lat(XY, [[1, 1], [0, 3]])
    scrambled = lat(XY, mul([[2, 1], [1, 1]], [[1, 1], [0, 3]]))
    assert equal(k, scrambled)
    assert not equal(lat(E, [[2]]), lat(E, [[3]]))
    assert equal(k, k.reorder(["y", "x"]))
    with pytest.raises(GroundMismatch):
        equal(k, GNL.zero(["x"]))


@pytest.mark.parametrize("seed", range(30))
def test_algebra_laws_on_random_sets(seed):
    rng = random.Random(seed)
    labels = [f"a{i}" for i in range(rng.randint(1, 4))]
    k1 = random_gnl(rng, labels)
    k2 = random_gnl(rng, labels)
    for k in (k1, k2):
        assert all(dot(b, c) == 0 for b in k.lattice_basis.rows for c in k.space_basis.rows)
        assert equal(dualize(dualize(k)), k)
    assert equal(dualize(sum_(k1, k2)), intersect(dualize(k1), dualize(k2)))
    keep = rng.sample(labels, rng.randint(0, len(labels)))
    assert equal(dualize(restrict(k1, keep)), contract(dualize(k1), keep))
    meet = intersect(k1, k2)
    assert contains(k1, meet) and contains(k2, meet)
    assert contains(sum_(k1, k2), k1)


@pytest.mark.parametrize("seed", range(15))
def test_membership_agrees_after_double_dual(seed):
    rng = random.Random(100 + seed)
    labels = ["a", "b", "c"]
    k = random_gnl(rng, labels)
    kk = dualize(dualize(k))
    for _ in range(10):
        x = LabeledVector(labels, [F(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in labels])
        assert member(k, x) == member(kk, x)


def test_full_dimensional_lattices_stay_number_lattices():
    rng = random.Random(3)
    labels = ["a", "b", "c"]
    for _ in range(10):
        u = random_unimodular(rng, 3)
        k1 = lat(labels, mul(u, [[2, 0, 0], [0, 1, 0], [0, 0, 3]]))
        k2 = lat(labels, [[1, 1, 0], [0, 2, 0], [0, 0, 1]])
        for out in (sum_(k1, k2), intersect(k1, k2), restrict(k1, ["a", "b"]), contract(k1, ["a"])):
            assert out.is_number_lattice() and out.is_full_dimensional()
