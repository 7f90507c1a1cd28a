"""Hermite normal form and the integer-lattice tools built on it.

The HNF here is row style: pivots move strictly right going down, each
pivot is positive, entries above a pivot lie in ``[0, pivot)`` and zero
rows sit at the bottom.  It is computed with the textbook gcd-driven
elimination, tracking the unimodular transform alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable

from .errors import RankDeficient, BadParameter
from .ground_linalg import (
    GroundSet,
    LabeledMatrix,
    as_fraction,
    in_row_space,
    nullspace,
    rank,
    rref,
    to_fraction_rows,
)


def xgcd(a: int, b: int) -> tuple:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf_int(a: list) -> tuple:
    """HNF of an integer matrix given as a list of rows.

    Returns ``(H, U, pivots)`` with ``H == U @ a`` and ``U`` unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(r) for r in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = h[i][c]
            if b == 0:
                continue
            top = h[r][c]
            g, x, y = xgcd(top, b)
            p, q = -b // g, top // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [p * s + q * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [p * s + q * t for s, t in zip(ur, ui)]
        d = h[r][c]
        if d == 0:
            continue
        if d < 0:
            h[r] = [-t for t in h[r]]
            u[r] = [-t for t in u[r]]
            d = -d
        for i in range(r):
            k = h[i][c] // d
            if k:
                h[i] = [s - k * t for s, t in zip(h[i], h[r])]
                u[i] = [s - k * t for s, t in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return h, u, pivots


@dataclass(frozen=True)
class HnfResult:
    """``H == U @ A``; ``U`` is an integer matrix indexed by row numbers."""

    H: LabeledMatrix
    U: tuple
    pivot_columns: tuple

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)

    def nonzero_rows(self) -> LabeledMatrix:
        return LabeledMatrix(self.H.ground, self.H.rows[: self.rank])


def _common_denominator(rows) -> int:
    return reduce(lcm, (x.denominator for r in rows for x in r), 1)


def hnf(a) -> HnfResult:
    """HNF of a rational matrix: scale to integers, reduce, scale back.

    >>> hnf(LabeledMatrix(["x", "y"], [[2, 3], [4, 5]])).H
    LabeledMatrix(['x', 'y'], [2 0; 0 1])
    """
    if not isinstance(a, LabeledMatrix):
        rows = to_fraction_rows(a)
        a = LabeledMatrix([f"c{j}" for j in range(len(rows[0]) if rows else 0)], rows)
    k = _common_denominator(a.rows)
    ints = [[int(x * k) for x in r] for r in a.rows]
    h, u, piv = hnf_int(ints)
    H = LabeledMatrix(a.ground, [[Fraction(x, k) for x in r] for r in h])
    return HnfResult(H, tuple(tuple(r) for r in u), tuple(a.ground.labels[c] for c in piv))


def basis_from_generators(gens) -> LabeledMatrix:
    """Canonical (HNF) basis of the lattice generated by the rows of ``gens``."""
    return hnf(gens).nonzero_rows()


def lex_column_basis(a) -> list:
    """Positions of the lexicographically earliest columns forming a column basis."""
    rows = to_fraction_rows(a)
    return list(rref(rows)[1]) if rows else []


@dataclass(frozen=True)
class VisibilityForm:
    """Block form ``[[C1S, 0], [C2S, C2P]]`` of a basis.

    ``restriction_basis`` (the ``C2P`` block) is a basis of the lattice
    restricted to P, ``contraction_basis`` (``C1S``) one of the lattice
    contracted to S.  ``matrix`` is the whole block matrix on the
    original ground and ``U`` the unimodular map taking the input basis to it.
    """

    matrix: LabeledMatrix
    U: tuple
    contraction_basis: LabeledMatrix
    restriction_basis: LabeledMatrix
    n_contraction_rows: int


def visibility_form(basis: LabeledMatrix, S: Iterable[str], P: Iterable[str]) -> VisibilityForm:
    ground = basis.ground
    S = ground.subset(S)
    P = ground.subset(P)
    if len(S) + len(P) != len(ground) or set(S) & set(P):
        raise BadParameter("S and P must partition the ground")
    if rank(basis.to_lists()) != basis.nrows:
        raise RankDeficient("visibility form needs independent rows")
    # with P first, HNF pivots land in P before S; rows with no P pivot are
    # exactly the lattice vectors vanishing on P
    order = GroundSet(P.labels + S.labels)
    res = hnf(basis.reindex(order))
    n_p = sum(1 for c in res.pivot_columns if c in P)
    rows_p = res.H.rows[:n_p]
    rows_s = res.H.rows[n_p : res.rank]
    u = res.U[n_p : res.rank] + res.U[:n_p]
    full = LabeledMatrix(order, rows_s + rows_p).reindex(ground)
    c1 = LabeledMatrix(order, rows_s).restrict(S)
    c2 = LabeledMatrix(order, rows_p).restrict(P)
    return VisibilityForm(full, u, c1, c2, len(rows_s))


def separators(basis) -> list:
    """Finest partition of the ground into blocks the lattice splits along.

    Two labels are joined when some HNF row is nonzero on both; labels in
    the same connected component form a block.  Blocks are listed in
    order of their first label.
    """
    h = hnf(basis).nonzero_rows()
    labels = h.ground.labels
    parent = list(range(len(labels)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for r in h.rows:
        support = [j for j, x in enumerate(r) if x]
        for j in support[1:]:
            a, b = find(support[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict = {}
    for j, a in enumerate(labels):
        blocks.setdefault(find(j), []).append(a)
    return [tuple(b) for _, b in sorted(blocks.items())]


def integer_left_kernel(rows: list, nrows: int | None = None) -> list:
    """Basis of the integer vectors ``x`` with ``x @ rows == 0``."""
    m = len(rows) if rows else (nrows or 0)
    if m == 0:
        return []
    rows = [[as_fraction(x) for x in r] for r in rows]
    n = len(rows[0])
    if n == 0:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    k = _common_denominator(rows)
    h, u, piv = hnf_int([[int(x * k) for x in r] for r in rows])
    return [u[i] for i in range(len(piv), m)]


def integral_solutions(mode: int, *, A=None, B=None, space=None, lattice=None):
    """Integral solution lattices.

    Mode 1 returns a list of integer coefficient rows; modes 2 and 3
    return a ``LabeledMatrix`` on the ground of their input.

    mode 1
        ``A`` (independent rows) and ``B`` (rows in row(A)): all integral
        ``(x1, x2)`` with ``x1 @ A + x2 @ B == 0``.
    mode 2
        ``space`` (rows spanning V): a basis of V intersected with Z^n.
    mode 3
        ``lattice`` (basis C) and ``space``: a basis of L intersected
        with V, as rows of C-combinations evaluated.
    """
    if mode == 1:
        a = to_fraction_rows(A)
        b = to_fraction_rows(B) if B is not None else []
        if rank(a) != len(a):
            raise RankDeficient("rows of A must be independent")
        for r in b:
            if not in_row_space(a, r):
                raise RankDeficient("rows of B must lie in row(A)")
        return integer_left_kernel(a + b)
    if mode == 2:
        v = to_fraction_rows(space)
        n = _width(space)
        q = nullspace(v, n)
        if not q:
            return LabeledMatrix(space.ground, [[int(i == j) for j in range(n)] for i in range(n)])
        qt = [list(c) for c in zip(*q)]
        return basis_from_generators(LabeledMatrix(space.ground, integer_left_kernel(qt)))
    if mode == 3:
        c = to_fraction_rows(lattice)
        n = _width(lattice)
        q = nullspace(to_fraction_rows(space), n)
        if not c or not q:  # empty lattice, or V is everything
            return basis_from_generators(LabeledMatrix(lattice.ground, c))
        cq = [[sum((x * y for x, y in zip(r, qr)), Fraction(0)) for qr in q] for r in c]
        lam = integer_left_kernel(cq)
        gens = [[sum((l * r[j] for l, r in zip(lr, c)), Fraction(0)) for j in range(n)] for lr in lam]
        return basis_from_generators(LabeledMatrix(lattice.ground, gens))
    raise BadParameter(f"unknown mode {mode}")


def _width(m) -> int:
    if isinstance(m, LabeledMatrix):
        return m.ncols
    raise BadParameter("pass a LabeledMatrix so the column count is known")
