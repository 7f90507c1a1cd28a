"""LLL reduction, the swap-free dual basis, successive minima, linked bases.

Everything is exact.  Lengths are kept squared so that no square roots
appear: an approximation factor ``alpha`` is handled as ``alpha**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import floor, isqrt, lcm
from typing import Optional, Sequence

from .errors import (
    BadParameter,
    LatticeMismatch,
    PreconditionFailed,
    RankDeficient,
    TooLargeForExhaustiveCheck,
)
from .ground_linalg import (
    GSOData,
    LabeledMatrix,
    LabeledVector,
    dot,
    gso_rows,
    project_out,
    rank,
    to_fraction_rows,
)
from .gnl import GNL, contains, contract, equal, restrict
from .hnf import basis_from_generators, hnf
from .regular import RegularSpace, from_space, lift

DEFAULT_DELTA = Fraction(3, 4)
MINIMA_DIM_LIMIT = 6


def round_half_away(x: Fraction) -> int:
    """Nearest integer, halves rounded away from zero."""
    if x >= 0:
        return floor(x + Fraction(1, 2))
    return -floor(-x + Fraction(1, 2))


def _check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise BadParameter(f"delta must lie strictly between 1/4 and 1, got {delta}")
    return delta


def _rows_of(b) -> tuple:
    if isinstance(b, LabeledMatrix):
        return b.ground, b.to_lists()
    return None, to_fraction_rows(b)


def _wrap(ground, rows):
    return LabeledMatrix(ground, rows) if ground is not None else rows


# --------------------------------------------------------------------------
# LLL


@dataclass(frozen=True)
class LLLResult:
    basis: object
    transform: tuple  # integer rows: basis == transform @ input
    swaps: int


def lll(b, delta=DEFAULT_DELTA) -> LLLResult:
    """Exact LLL with the usual size reduction and Lovasz swaps."""
    delta = _check_delta(delta)
    ground, rows = _rows_of(b)
    m = len(rows)
    if m and rank(rows) != m:
        raise RankDeficient("LLL needs linearly independent rows")
    # a common scale makes the rows integral; it changes no decision below
    k = reduce(lcm, (x.denominator for r in rows for x in r), 1)
    work = [[x * k for x in r] for r in rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    swaps = 0
    if m:
        g = gso_rows(work)
        mu = [list(r) for r in g.mu]
        norms = list(g.norms_sq)
    i = 1
    while i < m:
        for j in range(i - 1, -1, -1):
            if abs(mu[i][j]) > Fraction(1, 2):
                q = round_half_away(mu[i][j])
                work[i] = [a - q * c for a, c in zip(work[i], work[j])]
                u[i] = [a - q * c for a, c in zip(u[i], u[j])]
                for t in range(j + 1):
                    mu[i][t] -= q * mu[j][t]
        if mu[i][i - 1] ** 2 * norms[i - 1] + norms[i] >= delta * norms[i - 1]:
            i += 1
            continue
        work[i - 1], work[i] = work[i], work[i - 1]
        u[i - 1], u[i] = u[i], u[i - 1]
        swaps += 1
        g = gso_rows(work)
        mu = [list(r) for r in g.mu]
        norms = list(g.norms_sq)
        i = max(i - 1, 1)
    out = [[x / k for x in r] for r in work]
    return LLLResult(_wrap(ground, out), tuple(tuple(r) for r in u), swaps)


def lll_reduce(b, delta=DEFAULT_DELTA):
    return lll(b, delta).basis


def is_size_reduced(b, gso: Optional[GSOData] = None) -> bool:
    g = gso or gso_rows(_rows_of(b)[1])
    return all(abs(g.mu[i][j]) <= Fraction(1, 2) for i in range(g.dim) for j in range(i))


def lovasz_holds(b, delta=DEFAULT_DELTA, gso: Optional[GSOData] = None) -> bool:
    delta = Fraction(delta)
    g = gso or gso_rows(_rows_of(b)[1])
    return all(
        g.mu[i + 1][i] ** 2 * g.norms_sq[i] + g.norms_sq[i + 1] >= delta * g.norms_sq[i]
        for i in range(g.dim - 1)
    )


def is_lll_reduced(b, delta=DEFAULT_DELTA) -> bool:
    rows = _rows_of(b)[1]
    if not rows:
        return True
    if rank(rows) != len(rows):
        return False
    g = gso_rows(rows)
    return is_size_reduced(rows, g) and lovasz_holds(rows, delta, g)


# --------------------------------------------------------------------------
# dual basis without swaps


@dataclass(frozen=True)
class DualGSOWitness:
    """GSO data of the dual basis, read off the primal one.

    The dual basis has Gram-Schmidt vectors ``b*_{m-i+1} / |b*_{m-i+1}|^2``,
    so their squared norms are ``e_sq[i] = 1 / |b*_{m-i+1}|^2``.  ``h`` is
    the unit lower triangular coefficient matrix; the subdiagonal entries are
    the negated primal ones, read in reverse.
    """

    h: tuple
    e_sq: tuple

    def lovasz_holds(self, delta=DEFAULT_DELTA) -> bool:
        delta = Fraction(delta)
        h, e = self.h, self.e_sq
        return all(h[i + 1][i] ** 2 * e[i] + e[i + 1] >= delta * e[i] for i in range(len(e) - 1))


@dataclass(frozen=True)
class DualLLLResult:
    basis: object
    witness: DualGSOWitness
    swaps: int
    size_reduction_steps: int
    delta: Fraction = DEFAULT_DELTA


def _unit_lower_inverse(k: list) -> list:
    m = len(k)
    inv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i):
            inv[i][j] = -sum((k[i][t] * inv[t][j] for t in range(j, i)), Fraction(0))
    return inv


def dual_lll_from_primal(b, delta=DEFAULT_DELTA, gso: Optional[GSOData] = None) -> DualLLLResult:
    """LLL-reduced basis of the dual lattice of an LLL-reduced ``b``, with no swaps.

    The reversed dual basis already satisfies the Lovasz condition; only
    one size-reduction pass is needed.  The dual lattice here is the one
    inside the span of ``b`` (the lattice part of its dual set).
    """
    delta = _check_delta(delta)
    ground, rows = _rows_of(b)
    if not is_lll_reduced(rows, delta):
        raise PreconditionFailed("input basis must be LLL-reduced", f"delta={delta}")
    m = len(rows)
    g = gso or gso_rows(rows)
    k_inv = _unit_lower_inverse([list(r) for r in g.mu])
    # rows of (K^-1)^T D^-2 B*:  row i = sum_t k_inv[t][i] * b*_t / |b*_t|^2
    scaled = [[x / g.norms_sq[t] for x in g.b_star[t]] for t in range(m)]
    n = len(rows[0]) if rows else 0
    dual_plus = [
        [sum((k_inv[t][i] * scaled[t][c] for t in range(i, m)), Fraction(0)) for c in range(n)]
        for i in range(m)
    ]
    dual = dual_plus[::-1]
    # coefficient matrix of the reversed basis: H = T (K^-1)^T T
    h = [[k_inv[m - 1 - j][m - 1 - i] for j in range(m)] for i in range(m)]
    e_sq = tuple(1 / g.norms_sq[m - 1 - i] for i in range(m))
    witness = DualGSOWitness(tuple(tuple(r) for r in h), e_sq)
    if not witness.lovasz_holds(delta):
        raise AssertionError("reversed dual basis violates the Lovasz condition")
    steps = 0
    for i in range(1, m):
        for j in range(i - 1, -1, -1):
            if abs(h[i][j]) > Fraction(1, 2):
                q = round_half_away(h[i][j])
                dual[i] = [a - q * c for a, c in zip(dual[i], dual[j])]
                for t in range(j + 1):
                    h[i][t] -= q * h[j][t]
                steps += 1
    return DualLLLResult(_wrap(ground, dual), witness, 0, steps, delta)


# --------------------------------------------------------------------------
# successive minima by exhaustive search


@dataclass(frozen=True)
class SuccessiveMinima:
    lambdas_sq: tuple
    witnesses: tuple
    lattice_hnf: tuple


def _sqrt_upper(r: Fraction) -> Fraction:
    """A rational upper bound for sqrt(r), within 1/denominator."""
    p, q = r.numerator, r.denominator
    return Fraction(isqrt(p * q) + 1, q)


def enumerate_short(rows: list, radius_sq: Fraction, target=None):
    """Yield integer coefficient vectors ``c`` with ``|c @ rows - target|^2 <= radius_sq``.

    Schnorr-Euchner style depth-first search on the GSO of ``rows``;
    interval ends are bounded above exactly and every candidate is
    checked exactly, so nothing in the ball is missed.
    """
    m = len(rows)
    g = gso_rows(rows)
    if target is None:
        y = [Fraction(0)] * m
        base = Fraction(0)
    else:
        t = [Fraction(x) for x in target]
        y = [dot(t, g.b_star[j]) / g.norms_sq[j] for j in range(m)]
        rest = [a - sum((y[j] * g.b_star[j][c] for j in range(m)), Fraction(0)) for c, a in enumerate(t)]
        base = dot(rest, rest)
    if base > radius_sq:
        return
    coeffs = [0] * m

    def rec(j: int, used: Fraction):
        center = y[j] - sum((coeffs[i] * g.mu[i][j] for i in range(j + 1, m)), Fraction(0))
        room = (radius_sq - used) / g.norms_sq[j]
        w = _sqrt_upper(room)
        lo, hi = floor(center - w), floor(center + w) + 1
        for c in range(lo, hi + 1):
            d = (c - center) ** 2 * g.norms_sq[j]
            if used + d > radius_sq:
                continue
            coeffs[j] = c
            if j == 0:
                yield list(coeffs)
            else:
                yield from rec(j - 1, used + d)
        coeffs[j] = 0

    if m == 0:
        yield []
        return
    yield from rec(m - 1, base)


def _canonical_sign(v: list) -> list:
    for x in v:
        if x:
            return v if x > 0 else [-t for t in v]
    return v


def successive_minima(b, dim_limit: int = MINIMA_DIM_LIMIT) -> SuccessiveMinima:
    """Exact squared successive minima with witness vectors.

    Searches every lattice vector no longer than the longest row of an
    LLL-reduced basis, which bounds the last minimum.  Among equally short
    candidates the witness is the lexicographically smallest one whose
    first nonzero entry is positive.
    """
    ground, rows = _rows_of(b)
    m = len(rows)
    if m > dim_limit:
        raise TooLargeForExhaustiveCheck(f"dimension {m} exceeds {dim_limit}")
    if m and rank(rows) != m:
        raise RankDeficient("successive minima need independent rows")
    red = lll(rows).basis
    radius = max((dot(r, r) for r in red), default=Fraction(0))
    vecs = []
    for c in enumerate_short(red, radius):
        if any(c):
            v = [sum((ci * r[col] for ci, r in zip(c, red)), Fraction(0)) for col in range(len(red[0]))]
            vecs.append((dot(v, v), _canonical_sign(v)))
    vecs.sort()
    lambdas, wits, chosen = [], [], []
    for n, v in vecs:
        if len(chosen) == m:
            break
        if rank(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            lambdas.append(n)
            wits.append(tuple(v))
    h = hnf(LabeledMatrix([f"c{j}" for j in range(len(rows[0]))], rows)).nonzero_rows().rows if rows else ()
    wit = tuple(LabeledVector(ground, w) for w in wits) if ground is not None else tuple(wits)
    return SuccessiveMinima(tuple(lambdas), wit, h)


def certify_alpha_sm(b, alpha_sq: Sequence, minima: SuccessiveMinima) -> bool:
    """Whether row ``i`` of ``b`` has squared length at most ``alpha_sq[i] * lambda_i^2``."""
    _, rows = _rows_of(b)
    label = [f"c{j}" for j in range(len(rows[0]))] if rows else []
    if len(rows) != len(minima.lambdas_sq) or (
        rows and hnf(LabeledMatrix(label, rows)).nonzero_rows().rows != minima.lattice_hnf
    ):
        raise LatticeMismatch("basis does not generate the lattice the minima belong to")
    if len(alpha_sq) != len(rows):
        raise BadParameter("one factor per row is needed")
    return all(dot(r, r) <= Fraction(a) * lam for r, a, lam in zip(rows, alpha_sq, minima.lambdas_sq))


def lll_alpha_sq(m: int) -> Fraction:
    """Squared factor ``2^(m-1)`` bounding LLL rows (delta = 3/4) against the minima."""
    return Fraction(2) ** (m - 1)


# --------------------------------------------------------------------------
# bases linked through a regular space


def _as_regular(v) -> RegularSpace:
    return v if isinstance(v, RegularSpace) else from_space(v)


def _check_linkage(v: RegularSpace, k_p: GNL) -> list:
    p = list(k_p.labels)
    s = [a for a in v.ground if a not in set(p)]
    vg = v.as_gnl()
    v_cross = contract(vg, p)
    v_dot = restrict(vg, p)
    if not equal(v_cross, GNL.space(k_p.ground, k_p.space_basis).reorder(v_cross.ground)):
        raise PreconditionFailed("space part of K_P must equal the space contracted to P")
    span_p = GNL.space(k_p.ground, k_p.span())
    if not equal(v_dot, span_p.reorder(v_dot.ground)):
        raise PreconditionFailed("span of K_P must equal the space restricted to P")
    return s


def _reduced_basis_for(k_p: GNL, basis, delta) -> LabeledMatrix:
    if basis is None:
        return lll_reduce(k_p.lattice_basis, delta)
    basis = basis.reindex(k_p.ground) if basis.ground != k_p.ground else basis
    if not is_lll_reduced(basis, delta):
        raise PreconditionFailed("supplied basis of L_P must be LLL-reduced")
    if basis_from_generators(basis).rows != k_p.lattice_basis.rows:
        raise LatticeMismatch("supplied basis does not generate the lattice part of K_P")
    return basis


def _lift_rows(v: RegularSpace, rows: LabeledMatrix, s: list) -> LabeledMatrix:
    kernel = contract(v.as_gnl(), s).space_basis.to_lists()
    out = []
    for x_p in rows:
        x_s = lift(v, x_p)
        vec = list(x_s.entries)
        if kernel:
            vec = project_out([vec], kernel)[0]
        out.append(vec)
    return LabeledMatrix(v.ground.subset(s), out)


def linked_reduced_basis(v_sp, k_p: GNL, basis: Optional[LabeledMatrix] = None,
                         delta=DEFAULT_DELTA) -> LabeledMatrix:
    """Basis of the lattice part of ``V_SP <-> K_P`` linked to a reduced basis of ``L_P``.

    Each reduced row is lifted through the regular space and projected
    off the space contracted to S.  With ``m`` rows the result is
    ``beta``-successive-minimal with ``beta = |S| |P| 2^((m-1)/2)``.
    """
    v = _as_regular(v_sp)
    s = _check_linkage(v, k_p)
    return _lift_rows(v, _reduced_basis_for(k_p, basis, delta), s)


def dual_linked_reduced_basis(v_sp, k_p: GNL, basis: Optional[LabeledMatrix] = None,
                              delta=DEFAULT_DELTA) -> LabeledMatrix:
    """Same as :func:`linked_reduced_basis` for the duals.

    The dual of ``V_SP <-> K_P`` is ``V_SP^perp >-< K_P^d``; its reduced
    basis on P comes from :func:`dual_lll_from_primal`, so no LLL run is
    needed on the dual side.
    """
    v = _as_regular(v_sp)
    s = _check_linkage(v, k_p)
    red = _reduced_basis_for(k_p, basis, delta)
    if not red.is_integral():
        raise PreconditionFailed("lattice part of K_P must be integral")
    dual_p = dual_lll_from_primal(red, delta).basis
    # the dual lattice of K_P lies in span(K_P); its points are unchanged by
    # projecting off the space part of K_P, which is already orthogonal
    v_perp = v.orthogonal()
    # skewed composition: lift through V^perp with P negated
    lifted = _lift_rows(v_perp, LabeledMatrix(dual_p.ground, [[-x for x in r] for r in dual_p.rows]), s)
    return lifted


def beta_sq(n_s: int, n_p: int, m: int) -> Fraction:
    return Fraction(n_s * n_p) ** 2 * Fraction(2) ** (m - 1)
