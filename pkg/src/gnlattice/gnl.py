"""Generalized number lattices: a lattice plus an orthogonal vector space.

A :class:`GNL` on ground ``E`` is the set ``L + V`` where ``V`` is a
rational subspace and ``L`` a lattice inside ``V``'s orthogonal
complement.  Instances are always stored canonically: the lattice
basis in HNF, the space basis in reduced row echelon form.  Two GNLs
on the same ground are therefore equal exactly when their fields are.

Every operation here is a sum, a coordinate restriction, or a
dualization, and the rest is built from those three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    BadParameter,
    DisjointnessViolation,
    GroundMismatch,
    PreconditionFailed,
)
from .ground_linalg import (
    GroundSet,
    LabeledMatrix,
    LabeledVector,
    in_row_space,
    inverse,
    negate_on,
    nullspace,
    project_out,
    rank,
    rref,
    solve_left,
    _as_ground,
    fraction_str,
)
from .hnf import basis_from_generators, hnf


@dataclass(frozen=True)
class GNL:
    ground: GroundSet
    lattice_basis: LabeledMatrix
    space_basis: LabeledMatrix

    def __init__(self, ground, lattice_basis=(), space_basis=()):
        ground = _as_ground(ground)
        lat = _matrix(ground, lattice_basis)
        spc = _matrix(ground, space_basis)
        s_rows = spc.to_lists()
        l_rows = lat.to_lists()
        if l_rows and rank(l_rows) != len(l_rows):
            raise BadParameter("lattice basis rows are dependent")
        if s_rows and rank(s_rows) != len(s_rows):
            raise BadParameter("space basis rows are dependent")
        for r in l_rows:
            for c in s_rows:
                if sum(a * b for a, b in zip(r, c)):
                    raise BadParameter("lattice basis must be orthogonal to the space; use canonicalize")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "lattice_basis", basis_from_generators(lat) if l_rows else lat)
        object.__setattr__(self, "space_basis", LabeledMatrix(ground, rref(s_rows)[0]) if s_rows else spc)

    # construction helpers --------------------------------------------------

    @classmethod
    def lattice(cls, ground, generators) -> "GNL":
        return canonicalize(_matrix(_as_ground(ground), generators), None)

    @classmethod
    def space(cls, ground, generators) -> "GNL":
        return canonicalize(None, _matrix(_as_ground(ground), generators), ground=ground)

    @classmethod
    def zero(cls, ground) -> "GNL":
        return cls(ground)

    @classmethod
    def full_space(cls, ground) -> "GNL":
        ground = _as_ground(ground)
        n = len(ground)
        return cls(ground, (), [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def integers(cls, ground) -> "GNL":
        ground = _as_ground(ground)
        n = len(ground)
        return cls(ground, [[int(i == j) for j in range(n)] for i in range(n)])

    # properties ------------------------------------------------------------

    @property
    def labels(self) -> tuple:
        return self.ground.labels

    @property
    def lattice_dim(self) -> int:
        return self.lattice_basis.nrows

    @property
    def space_dim(self) -> int:
        return self.space_basis.nrows

    def is_number_lattice(self) -> bool:
        return self.space_dim == 0

    def is_vector_space(self) -> bool:
        return self.lattice_dim == 0

    def is_full_dimensional(self) -> bool:
        return self.lattice_dim + self.space_dim == len(self.ground)

    def span(self) -> LabeledMatrix:
        """A basis of the linear span of the set."""
        return self.lattice_basis.stack(self.space_basis)

    # relabelling -----------------------------------------------------------

    def reorder(self, ground) -> "GNL":
        ground = _as_ground(ground)
        if not ground.same_labels(self.ground):
            raise GroundMismatch(f"{ground} is not a reordering of {self.ground}")
        if ground == self.ground:
            return self
        return GNL(ground, self.lattice_basis.reindex(ground), self.space_basis.reindex(ground))

    def rename(self, mapping: Mapping[str, str]) -> "GNL":
        g = self.ground.rename(mapping)
        return GNL(g, self.lattice_basis.rename(mapping), self.space_basis.rename(mapping))

    def negate_on(self, labels: Iterable[str]) -> "GNL":
        labels = list(labels)
        return GNL(
            self.ground,
            negate_on(self.lattice_basis, labels),
            negate_on(self.space_basis, labels),
        )

    def __repr__(self) -> str:
        fmt = lambda m: "; ".join(" ".join(fraction_str(x) for x in r) for r in m.rows)
        return f"GNL({list(self.labels)}, lattice=[{fmt(self.lattice_basis)}], space=[{fmt(self.space_basis)}])"


def _matrix(ground: GroundSet, m) -> LabeledMatrix:
    if m is None:
        return LabeledMatrix(ground, ())
    if isinstance(m, LabeledMatrix):
        return m.reindex(ground) if m.ground != ground else m
    return LabeledMatrix(ground, m)


def canonicalize(lattice_generators, space_generators, ground=None) -> GNL:
    """The GNL generated by the given rows, in canonical form.

    The space part is the span of ``space_generators``; lattice
    generators are projected onto its orthogonal complement before the
    HNF basis is taken, so ``lattice + space`` is unchanged.
    """
    for m in (lattice_generators, space_generators):
        if isinstance(m, LabeledMatrix):
            ground = ground or m.ground
    if ground is None:
        raise BadParameter("ground cannot be inferred")
    ground = _as_ground(ground)
    lat = _matrix(ground, lattice_generators)
    spc = _matrix(ground, space_generators)
    s_rows = rref(spc.to_lists())[0] if spc.nrows else []
    l_rows = lat.to_lists()
    if s_rows and l_rows:
        l_rows = project_out(l_rows, s_rows)
    basis = basis_from_generators(LabeledMatrix(ground, l_rows)) if l_rows else LabeledMatrix(ground)
    return GNL(ground, basis, s_rows)


# --------------------------------------------------------------------------
# the three primitive operations


def dualize(k: GNL) -> GNL:
    """The dual ``{y : <x, y> is an integer for every x in k}``.

    Stack the lattice basis, the space basis and a basis of the
    complement of their span into one nonsingular matrix; the transposed
    inverse splits into blocks of the same sizes, and its lattice block
    together with its complement block is the dual.
    """
    n = len(k.ground)
    b1 = k.lattice_basis.to_lists()
    c1 = k.space_basis.to_lists()
    d1 = nullspace(b1 + c1, n)
    m = b1 + c1 + d1
    if not m:
        return GNL(k.ground)
    inv = inverse(m)
    dual_rows = [list(col) for col in zip(*inv)]  # rows of (M^-1)^T
    b2 = dual_rows[: len(b1)]
    d2 = dual_rows[len(b1) + len(c1) :]
    return canonicalize(LabeledMatrix(k.ground, b2), LabeledMatrix(k.ground, d2))


def sum_(k1: GNL, k2: GNL) -> GNL:
    """Minkowski sum after extending both sides by zeros to the union ground."""
    ground = k1.ground.union(k2.ground)
    lat = k1.lattice_basis.reindex(ground).stack(k2.lattice_basis.reindex(ground))
    spc = k1.space_basis.reindex(ground).stack(k2.space_basis.reindex(ground))
    return canonicalize(lat, spc)


def intersect(k1: GNL, k2: GNL) -> GNL:
    """Intersection after extending both sides freely to the union ground.

    Computed as the dual of the sum of the duals.
    """
    return dualize(sum_(dualize(k1), dualize(k2)))


def restrict(k: GNL, keep: Iterable[str]) -> GNL:
    keep = k.ground.subset(keep)
    return canonicalize(k.lattice_basis.restrict(keep), k.space_basis.restrict(keep), ground=keep)


def contract(k: GNL, keep: Iterable[str]) -> GNL:
    """Vectors of ``k`` that vanish off ``keep``, restricted to ``keep``."""
    keep = list(keep)
    return dualize(restrict(dualize(k), keep))


def minor(k: GNL, keep: Iterable[str], mode: str = "restrict") -> GNL:
    if mode == "restrict":
        return restrict(k, keep)
    if mode == "contract":
        return contract(k, keep)
    raise BadParameter(f"mode must be 'restrict' or 'contract', not {mode!r}")


# --------------------------------------------------------------------------
# membership and comparison


def _vector_on(k: GNL, x) -> list:
    if isinstance(x, LabeledVector):
        if x.ground != k.ground:
            if not x.ground.same_labels(k.ground):
                raise GroundMismatch(f"vector on {x.ground}, set on {k.ground}")
            x = x.reindex(k.ground)
        return list(x.entries)
    return [Fraction(v) for v in x]


def member(k: GNL, x) -> bool:
    v = _vector_on(k, x)
    c = k.space_basis.to_lists()
    if c:
        v = project_out([v], c)[0]
    b = k.lattice_basis.to_lists()
    if not b:
        return not any(v)
    lam = solve_left(b, v)
    return lam is not None and all(t.denominator == 1 for t in lam)


def coordinates(k: GNL, x) -> list:
    """Integer coefficients of ``x`` modulo the space part on the lattice basis."""
    v = _vector_on(k, x)
    c = k.space_basis.to_lists()
    if c:
        v = project_out([v], c)[0]
    lam = solve_left(k.lattice_basis.to_lists(), v)
    if lam is None or any(t.denominator != 1 for t in lam):
        raise BadParameter("vector is not a member")
    return [int(t) for t in lam]


def contains(big: GNL, small: GNL) -> bool:
    """Whether ``small`` is a subset of ``big`` (grounds with the same labels)."""
    if big.ground != small.ground:
        small = small.reorder(big.ground)
    space = big.space_basis.to_lists()
    for r in small.space_basis.rows:
        if not space or not in_row_space(space, list(r)):
            return False
    return all(member(big, list(r)) for r in small.lattice_basis.rows)


def equal(k1: GNL, k2: GNL) -> bool:
    """Same set.  Grounds may list the same labels in a different order."""
    if not k1.ground.same_labels(k2.ground):
        raise GroundMismatch(f"{k1.ground} vs {k2.ground}")
    k2 = k2.reorder(k1.ground)
    if rref(k1.space_basis.to_lists())[0] != rref(k2.space_basis.to_lists())[0]:
        return False
    return hnf(k1.lattice_basis).H.rows == hnf(k2.lattice_basis).H.rows


def direct_sum(k1: GNL, k2: GNL) -> GNL:
    if set(k1.labels) & set(k2.labels):
        raise DisjointnessViolation("direct sum needs disjoint grounds")
    return sum_(k1, k2)


def require(condition: bool, name: str, detail: str = "") -> None:
    if not condition:
        raise PreconditionFailed(name, detail)
