"""Exact rational linear algebra over labelled ground sets.

Vectors and matrices carry a :class:`GroundSet`, an ordered tuple of
distinct labels naming their columns.  All arithmetic is done with
:class:`fractions.Fraction`, so nothing here ever rounds.

The second half of the module holds plain list-of-rows helpers
(``rref``, ``nullspace``, ``inverse`` ...) that the rest of the package
uses internally.  Elimination is fraction-free (Bareiss style) on an
integer copy of the input, which keeps intermediate numbers small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DisjointnessViolation,
    GroundMismatch,
    RankDeficient,
    SingularMatrix,
    UnknownLabel,
)

Number = Union[int, Fraction, str]
Rows = list  # list[list[Fraction]]


def as_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def fraction_str(x: Fraction) -> str:
    """``"n"`` for integers, ``"p/q"`` otherwise (always reduced)."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GroundSet:
    labels: tuple

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(a) for a in labels)
        if len(set(labels)) != len(labels):
            dup = sorted({a for a in labels if labels.count(a) > 1})
            raise DisjointnessViolation(f"repeated labels {dup}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_pos", {a: i for i, a in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._pos

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)!r})"

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} not in {list(self.labels)}") from None

    def indices(self, labels: Iterable[str]) -> list[int]:
        return [self.index(a) for a in labels]

    def subset(self, labels: Iterable[str]) -> "GroundSet":
        """The given labels, listed in this ground's order."""
        wanted = set(labels)
        for a in wanted:
            self.index(a)
        return GroundSet(a for a in self.labels if a in wanted)

    def minus(self, labels: Iterable[str]) -> "GroundSet":
        drop = set(labels)
        return GroundSet(a for a in self.labels if a not in drop)

    def union(self, other: Iterable[str]) -> "GroundSet":
        return GroundSet(self.labels + tuple(a for a in other if a not in self))

    def disjoint_union(self, other: Iterable[str]) -> "GroundSet":
        other = tuple(other)
        clash = [a for a in other if a in self]
        if clash:
            raise DisjointnessViolation(f"grounds share labels {clash}")
        return GroundSet(self.labels + other)

    def intersection(self, other: Iterable[str]) -> "GroundSet":
        other = set(other)
        return GroundSet(a for a in self.labels if a in other)

    def rename(self, mapping: Mapping[str, str]) -> "GroundSet":
        return GroundSet(mapping.get(a, a) for a in self.labels)

    def same_labels(self, other: "GroundSet") -> bool:
        return set(self.labels) == set(other.labels) and len(self) == len(other)


def _as_ground(g) -> GroundSet:
    return g if isinstance(g, GroundSet) else GroundSet(g)


@dataclass(frozen=True)
class LabeledVector:
    ground: GroundSet
    entries: tuple

    def __init__(self, ground, entries: Iterable[Number]):
        ground = _as_ground(ground)
        entries = tuple(as_fraction(x) for x in entries)
        if len(entries) != len(ground):
            raise GroundMismatch(f"{len(entries)} entries for ground of size {len(ground)}")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_dict(cls, ground, values: Mapping[str, Number]) -> "LabeledVector":
        ground = _as_ground(ground)
        for a in values:
            ground.index(a)
        return cls(ground, (values.get(a, 0) for a in ground))

    @classmethod
    def zero(cls, ground) -> "LabeledVector":
        ground = _as_ground(ground)
        return cls(ground, [0] * len(ground))

    def __getitem__(self, label: str) -> Fraction:
        return self.entries[self.ground.index(label)]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def _check(self, other: "LabeledVector") -> None:
        if self.ground != other.ground:
            raise GroundMismatch(f"{self.ground} vs {other.ground}")

    def __add__(self, other: "LabeledVector") -> "LabeledVector":
        self._check(other)
        return LabeledVector(self.ground, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "LabeledVector") -> "LabeledVector":
        self._check(other)
        return LabeledVector(self.ground, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "LabeledVector":
        return LabeledVector(self.ground, [-a for a in self.entries])

    def scale(self, c: Number) -> "LabeledVector":
        c = as_fraction(c)
        return LabeledVector(self.ground, [c * a for a in self.entries])

    def dot(self, other: "LabeledVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def norm_sq(self) -> Fraction:
        return sum((a * a for a in self.entries), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.entries)

    def restrict(self, labels: Iterable[str]) -> "LabeledVector":
        sub = self.ground.subset(labels)
        return LabeledVector(sub, [self[a] for a in sub])

    def reindex(self, ground) -> "LabeledVector":
        """Reorder onto ``ground``; labels missing here become zero."""
        ground = _as_ground(ground)
        return LabeledVector(ground, [self[a] if a in self.ground else Fraction(0) for a in ground])

    def to_dict(self) -> dict:
        return dict(zip(self.ground.labels, self.entries))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}={fraction_str(x)}" for a, x in zip(self.ground, self.entries))
        return f"LabeledVector({body})"


@dataclass(frozen=True)
class LabeledMatrix:
    """Rows of rational numbers whose columns are named by ``ground``."""

    ground: GroundSet
    rows: tuple

    def __init__(self, ground, rows: Iterable[Iterable[Number]] = ()):
        ground = _as_ground(ground)
        out = []
        for r in rows:
            if isinstance(r, LabeledVector):
                r = r.reindex(ground).entries if r.ground != ground else r.entries
            r = tuple(as_fraction(x) for x in r)
            if len(r) != len(ground):
                raise GroundMismatch(f"row of length {len(r)} for ground of size {len(ground)}")
            out.append(r)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "rows", tuple(out))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.ground)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return (LabeledVector(self.ground, r) for r in self.rows)

    def row(self, i: int) -> LabeledVector:
        return LabeledVector(self.ground, self.rows[i])

    def column(self, label: str) -> tuple:
        j = self.ground.index(label)
        return tuple(r[j] for r in self.rows)

    def to_lists(self) -> Rows:
        return [list(r) for r in self.rows]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def restrict(self, labels: Iterable[str]) -> "LabeledMatrix":
        sub = self.ground.subset(labels)
        idx = self.ground.indices(sub)
        return LabeledMatrix(sub, [[r[j] for j in idx] for r in self.rows])

    def reindex(self, ground) -> "LabeledMatrix":
        """Reorder columns onto ``ground``; new labels get zero columns."""
        ground = _as_ground(ground)
        src = [self.ground.index(a) if a in self.ground else None for a in ground]
        for a in self.ground:
            if a not in ground:
                raise GroundMismatch(f"label {a!r} would be dropped by reindex")
        zero = Fraction(0)
        return LabeledMatrix(ground, [[r[j] if j is not None else zero for j in src] for r in self.rows])

    def stack(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if other.ground != self.ground:
            other = other.reindex(self.ground)
        return LabeledMatrix(self.ground, self.rows + other.rows)

    def rename(self, mapping: Mapping[str, str]) -> "LabeledMatrix":
        return LabeledMatrix(self.ground.rename(mapping), self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fraction_str(x) for x in r) for r in self.rows)
        return f"LabeledMatrix({list(self.ground.labels)}, [{body}])"


# --------------------------------------------------------------------------
# operations on labelled objects


def disjoint_concat(f, g):
    """Concatenate two vectors (or matrices with equal row counts) on disjoint grounds."""
    ground = f.ground.disjoint_union(g.ground)
    if isinstance(f, LabeledVector):
        return LabeledVector(ground, f.entries + g.entries)
    if f.nrows != g.nrows:
        raise GroundMismatch("row counts differ")
    return LabeledMatrix(ground, [a + b for a, b in zip(f.rows, g.rows)])


def negate_on(x, labels: Iterable[str]):
    """Flip the sign of the entries (columns) named by ``labels``."""
    flip = set(x.ground.indices(labels))
    if isinstance(x, LabeledVector):
        return LabeledVector(x.ground, [-a if j in flip else a for j, a in enumerate(x.entries)])
    return LabeledMatrix(
        x.ground, [[-a if j in flip else a for j, a in enumerate(r)] for r in x.rows]
    )


def invert(m):
    """Exact inverse of a square matrix.

    A ``LabeledMatrix`` keeps its ground on the result; the row/column
    roles swap, which only matters to callers that care about labels.
    """
    if isinstance(m, LabeledMatrix):
        if m.nrows != m.ncols:
            raise SingularMatrix(f"{m.nrows}x{m.ncols} matrix is not square")
        return LabeledMatrix(m.ground, inverse(m.to_lists()))
    return inverse(m)


@dataclass(frozen=True)
class GSOData:
    """Gram-Schmidt data for a matrix with independent rows.

    ``mu[i][j]`` is the coefficient of ``b_star[j]`` in ``b[i]`` (unit
    lower triangular), ``norms_sq[i]`` is ``|b_star[i]|^2``.
    """

    b_star: tuple
    mu: tuple
    norms_sq: tuple

    @property
    def dim(self) -> int:
        return len(self.norms_sq)


def gram_schmidt(b) -> GSOData:
    rows = b.to_lists() if isinstance(b, LabeledMatrix) else [[as_fraction(x) for x in r] for r in b]
    return gso_rows(rows)


def gso_rows(rows: Rows) -> GSOData:
    m = len(rows)
    b_star: list = []
    norms: list = []
    mu = [[Fraction(0)] * m for _ in range(m)]
    for i, r in enumerate(rows):
        v = list(r)
        for j in range(i):
            c = dot(r, b_star[j]) / norms[j]
            mu[i][j] = c
            if c:
                v = [a - c * s for a, s in zip(v, b_star[j])]
        mu[i][i] = Fraction(1)
        n = dot(v, v)
        if n == 0:
            raise RankDeficient(f"row {i} depends on the previous rows")
        b_star.append(v)
        norms.append(n)
    return GSOData(
        tuple(tuple(v) for v in b_star), tuple(tuple(r) for r in mu), tuple(norms)
    )


def project(x: LabeledVector, space) -> tuple:
    """Split ``x`` into its component in row(space) and the orthogonal rest."""
    rows = space.to_lists() if isinstance(space, LabeledMatrix) else space
    if isinstance(space, LabeledMatrix) and space.ground != x.ground:
        raise GroundMismatch(f"{space.ground} vs {x.ground}")
    on = project_rows([list(x.entries)], rows)[0]
    return LabeledVector(x.ground, on), LabeledVector(x.ground, [a - b for a, b in zip(x.entries, on)])


# --------------------------------------------------------------------------
# list-of-rows helpers


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def transpose(a: Rows, ncols: int | None = None) -> Rows:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def mat_mul(a: Rows, b: Rows) -> Rows:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[dot(r, c) for c in bt] for r in a]


def identity(n: int) -> Rows:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _row_to_int(row) -> tuple:
    """Scale a rational row to integers; returns (ints, scale)."""
    d = reduce(lcm, (x.denominator for x in row), 1)
    return [int(x * d) for x in row], d


def _ff_gauss_jordan(a: list) -> tuple:
    """Fraction-free Gauss-Jordan on an integer matrix (modified in place).

    Returns ``(pivots, d)``: afterwards ``a`` divided by ``d`` is the
    reduced row echelon form, rows permuted so pivot rows come first.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        prow = a[r]
        for i in range(m):
            if i == r:
                continue
            ai = a[i]
            f = ai[c]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(ai, prow)]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, prev


def rref(rows: Rows) -> tuple:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows:
        return [], []
    ints = [_row_to_int([as_fraction(x) for x in r])[0] for r in rows]
    pivots, d = _ff_gauss_jordan(ints)
    out = [[Fraction(x, d) for x in ints[i]] for i in range(len(pivots))]
    # pivot rows from the fraction-free pass carry the factor d on their pivot
    for i, c in enumerate(pivots):
        p = out[i][c]
        if p != 1:
            out[i] = [x / p for x in out[i]]
    return out, pivots


def rank(rows: Rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def row_basis(rows: Rows) -> Rows:
    return rref(rows)[0]


def nullspace(rows: Rows, ncols: int) -> Rows:
    """Basis (as rows) of {x : rows @ x = 0}, i.e. of the orthogonal complement of row(rows)."""
    r, piv = rref(rows) if rows else ([], [])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -r[i][f]
        basis.append(v)
    return basis


def det(rows: Rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise SingularMatrix("determinant of a non-square matrix")
    scaled = [_row_to_int([as_fraction(x) for x in r]) for r in rows]
    a = [s[0] for s in scaled]
    scale = reduce(lambda x, y: x * y, (s[1] for s in scaled), 1)
    # plain Bareiss forward elimination tracking row swaps
    sign = 1
    prev = 1
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale)


def inverse(rows: Rows) -> Rows:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise SingularMatrix("inverse of a non-square matrix")
    if n == 0:
        return []
    scaled = [_row_to_int([as_fraction(x) for x in r]) for r in rows]
    aug = [s[0] + [int(i == j) for j in range(n)] for i, s in enumerate(scaled)]
    pivots, d = _ff_gauss_jordan(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    # left block is d * I now; undo the row scaling on the right
    return [[Fraction(aug[i][n + j] * scaled[j][1], d) for j in range(n)] for i in range(n)]


def solve_left(a: Rows, b, ncols: int | None = None):
    """Some ``y`` with ``y @ a == b`` (unique when rows of ``a`` are independent), or None."""
    m = len(a)
    n = len(b)
    if m == 0:
        return [] if not any(b) else None
    # solve a^T y = b via elimination on the augmented system
    at = [[a[i][j] for i in range(m)] + [as_fraction(b[j])] for j in range(n)]
    r, piv = rref(at)
    if piv and piv[-1] == m:
        return None
    y = [Fraction(0)] * m
    for i, c in enumerate(piv):
        y[c] = r[i][m]
    return y


def in_row_space(rows: Rows, v) -> bool:
    return solve_left(rows, v) is not None


def project_rows(x: Rows, space: Rows) -> Rows:
    """Orthogonal projection of each row of ``x`` onto row(space)."""
    basis = row_basis(space) if space else []
    if not basis:
        return [[Fraction(0)] * len(r) for r in x]
    g = [[dot(u, v) for v in basis] for u in basis]
    ginv = inverse(g)
    out = []
    for r in x:
        coeffs = [dot(r, u) for u in basis]
        lam = [dot(coeffs, col) for col in zip(*ginv)]
        out.append([dot(lam, col) for col in zip(*basis)])
    return out


def project_out(x: Rows, space: Rows) -> Rows:
    """Component of each row of ``x`` orthogonal to row(space)."""
    on = project_rows(x, space)
    return [[a - b for a, b in zip(r, s)] for r, s in zip(x, on)]


def same_row_space(a: Rows, b: Rows) -> bool:
    return rref(a)[0] == rref(b)[0]


def is_integral_rows(a: Rows) -> bool:
    return all(as_fraction(x).denominator == 1 for r in a for x in r)


def to_fraction_rows(a) -> Rows:
    if isinstance(a, LabeledMatrix):
        return a.to_lists()
    return [[as_fraction(x) for x in r] for r in a]
