"""Regular vector spaces and bounded lifting through them.

A regular space is the row space of a totally unimodular matrix.  It is
kept as a *standard representative matrix*: one row per base label,
with an identity block on the base columns and every entry in
{0, 1, -1}.  Changing the base is done by single pivots, which keep
that shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    BadParameter,
    NotInRestriction,
    NotRegular,
    TooLargeForExhaustiveCheck,
)
from .ground_linalg import (
    GroundSet,
    LabeledMatrix,
    LabeledVector,
    _as_ground,
    det,
    project_out,
    rank,
    rref,
)
from .gnl import GNL, contract

TU_CHECK_LIMIT = (8, 12)
_UNIT = (Fraction(-1), Fraction(0), Fraction(1))


def is_totally_unimodular(m, limit=TU_CHECK_LIMIT) -> bool:
    """Exhaustive check that every square minor is 0, 1 or -1."""
    rows = m.to_lists() if isinstance(m, LabeledMatrix) else [[Fraction(x) for x in r] for r in m]
    if not rows:
        return True
    nr, nc = len(rows), len(rows[0])
    if min(nr, nc) > min(limit) or max(nr, nc) > max(limit):
        raise TooLargeForExhaustiveCheck(f"{nr}x{nc} matrix is beyond the {limit[0]}x{limit[1]} limit")
    if any(x not in _UNIT for r in rows for x in r):
        return False
    for k in range(2, min(nr, nc) + 1):
        for ri in combinations(range(nr), k):
            sub_rows = [rows[i] for i in ri]
            for ci in combinations(range(nc), k):
                if det([[r[j] for j in ci] for r in sub_rows]) not in _UNIT:
                    return False
    return True


@dataclass(frozen=True)
class RegularSpace:
    """Row space of ``std_rep``; row ``i`` has its identity entry at ``base[i]``."""

    ground: GroundSet
    std_rep: LabeledMatrix
    base: tuple

    def __post_init__(self):
        object.__setattr__(self, "ground", _as_ground(self.ground))
        object.__setattr__(self, "base", tuple(self.base))
        for i, b in enumerate(self.base):
            j = self.ground.index(b)
            col = [r[j] for r in self.std_rep.rows]
            if col != [Fraction(int(k == i)) for k in range(len(col))]:
                raise NotRegular(f"column {b!r} is not a unit column for row {i}")
        if any(x not in _UNIT for r in self.std_rep.rows for x in r):
            raise NotRegular("standard representative has entries outside {0, 1, -1}")

    @property
    def dim(self) -> int:
        return len(self.base)

    def as_gnl(self) -> GNL:
        return GNL.space(self.ground, self.std_rep)

    def cobase(self) -> tuple:
        return tuple(a for a in self.ground if a not in set(self.base))

    def orthogonal(self) -> "RegularSpace":
        """Complement space, from ``(I | K) -> (-K^T | I)``."""
        cob = self.cobase()
        rows = []
        for c in cob:
            j = self.ground.index(c)
            row = [Fraction(0)] * len(self.ground)
            row[j] = Fraction(1)
            for i, b in enumerate(self.base):
                row[self.ground.index(b)] = -self.std_rep.rows[i][j]
            rows.append(row)
        return RegularSpace(self.ground, LabeledMatrix(self.ground, rows), cob)


def from_matrix(m: LabeledMatrix, check: bool = True) -> RegularSpace:
    """Regular space spanned by the rows of a totally unimodular ``m``."""
    if check and not is_totally_unimodular(m):
        raise NotRegular("representative matrix is not totally unimodular")
    r, piv = rref(m.to_lists())
    base = tuple(m.ground.labels[c] for c in piv)
    if any(x not in _UNIT for row in r for x in row):
        raise NotRegular("row space has no standard representative with unit entries")
    return RegularSpace(m.ground, LabeledMatrix(m.ground, r), base)


def from_space(k: GNL) -> RegularSpace:
    if not k.is_vector_space():
        raise BadParameter("expected a vector space (empty lattice part)")
    return from_matrix(k.space_basis, check=False)


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


def incidence_matrix(edges: Sequence) -> LabeledMatrix:
    """Node-edge incidence: +1 at the tail, -1 at the head, 0 for self loops."""
    edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
    nodes: list = []
    for e in edges:
        for v in (e.tail, e.head):
            if v not in nodes:
                nodes.append(v)
    ground = GroundSet(e.id for e in edges)
    rows = []
    for v in nodes:
        row = []
        for e in edges:
            if e.tail == e.head:
                row.append(0)
            else:
                row.append(1 if e.tail == v else -1 if e.head == v else 0)
        rows.append(row)
    return LabeledMatrix(ground, rows)


def from_graph_incidence(edges: Sequence) -> RegularSpace:
    """Coboundary (cut) space of a directed graph, spanned by incidence rows."""
    inc = incidence_matrix(edges)
    return from_matrix(inc, check=False)


def _pivot(rows: list, r: int, c: int) -> None:
    p = rows[r][c]
    if p not in (1, -1):
        raise NotRegular(f"pivot entry {p} is not a unit")
    if p == -1:
        rows[r] = [-x for x in rows[r]]
    for i in range(len(rows)):
        if i != r and rows[i][c]:
            f = rows[i][c]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]


def priority_base(v: RegularSpace, priority: Sequence[Iterable[str]]) -> tuple:
    """Greedy base preferring earlier classes; ground order breaks ties."""
    classes = _classes(v.ground, priority)
    cols = {a: [r[v.ground.index(a)] for r in v.std_rep.rows] for a in v.ground}
    chosen: list = []
    for cls in classes:
        for a in cls:
            trial = [cols[b] for b in chosen + [a]]
            if rank(trial) == len(trial):
                chosen.append(a)
    return tuple(chosen)


def _classes(ground: GroundSet, priority) -> list:
    classes = [list(ground.subset(c)) for c in priority]
    seen = [a for c in classes for a in c]
    if len(seen) != len(set(seen)):
        raise BadParameter("priority classes overlap")
    if set(seen) != set(ground):
        classes.append([a for a in ground if a not in set(seen)])
    return classes


def std_rep_for_priority(v: RegularSpace, priority: Sequence[Iterable[str]]) -> RegularSpace:
    """Re-express ``v`` on its priority base, one unit pivot at a time."""
    target = priority_base(v, priority)
    rows = [list(r) for r in v.std_rep.rows]
    base = list(v.base)
    g = v.ground
    want = set(target)
    for new in target:
        if new in base:
            continue
        c = g.index(new)
        out = next(i for i, b in enumerate(base) if b not in want and rows[i][c] != 0)
        _pivot(rows, out, c)
        base[out] = new
        if any(x not in _UNIT for r in rows for x in r):
            raise NotRegular("pivoting left the unit entries; the space is not regular")
    order = sorted(range(len(base)), key=lambda i: target.index(base[i]))
    return RegularSpace(g, LabeledMatrix(g, [rows[i] for i in order]), tuple(base[i] for i in order))


def direct_sum(a: RegularSpace, b: RegularSpace) -> RegularSpace:
    ground = a.ground.disjoint_union(b.ground)
    rows = [list(r) + [Fraction(0)] * len(b.ground) for r in a.std_rep.rows]
    rows += [[Fraction(0)] * len(a.ground) + list(r) for r in b.std_rep.rows]
    return RegularSpace(ground, LabeledMatrix(ground, rows), a.base + b.base)


def rename(v: RegularSpace, mapping: Mapping[str, str]) -> RegularSpace:
    return RegularSpace(
        v.ground.rename(mapping),
        v.std_rep.rename(mapping),
        tuple(mapping.get(b, b) for b in v.base),
    )


def lift(v: RegularSpace, x_p: LabeledVector) -> LabeledVector:
    """A vector ``x_S`` with ``(x_S, x_P)`` in ``v``, where ``S`` is the rest of the ground.

    The standard representative is taken with priority ``(P, S)``; then
    ``x_S`` is a 0/+-1 combination of rows indexed by base labels in P,
    which gives ``|x_S|^2 <= |S| |P| |x_P|^2``.
    """
    p_labels = list(x_p.ground)
    s_labels = [a for a in v.ground if a not in set(p_labels)]
    w = std_rep_for_priority(v, [p_labels, s_labels])
    g = w.ground
    acc = [Fraction(0)] * len(g)
    for i, b in enumerate(w.base):
        if b in x_p.ground:
            coef = x_p[b]
            if coef:
                acc = [a + coef * t for a, t in zip(acc, w.std_rep.rows[i])]
    full = LabeledVector(g, acc)
    if full.restrict(p_labels).reindex(x_p.ground) != x_p:
        raise NotInRestriction("vector is not in the restriction of the space to its labels")
    return full.restrict(s_labels)


def lift_minimal(v: RegularSpace, x_p: LabeledVector) -> LabeledVector:
    """The lift projected off the contraction to S, making it unique and shortest."""
    x_s = lift(v, x_p)
    kernel = contract(v.as_gnl(), list(x_s.ground)).space_basis.to_lists()
    if not kernel:
        return x_s
    return LabeledVector(x_s.ground, project_out([list(x_s.entries)], kernel)[0])
