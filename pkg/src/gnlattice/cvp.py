"""Closest vectors, and the three shortest-vector problems that reduce to them.

``q1``  shortest member of a lattice on ``P + Q`` with a prescribed ``P`` part.
``q2``  shortest lattice vector with a prescribed projection onto a space.
``q3``  shortest vector of ``L_P`` linked to a given vector through a regular space.

Each takes ``exact``: True runs the certified enumeration, False uses
the nearest-plane approximation (which still returns a valid member).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .composition import compose
from .errors import (
    BadParameter,
    GroundMismatch,
    NoPreimage,
    NotInLinkedLattice,
    NotInProjectionLattice,
    PreconditionFailed,
)
from .ground_linalg import (
    GroundSet,
    LabeledMatrix,
    LabeledVector,
    dot,
    gso_rows,
    nullspace,
    project_out,
    project_rows,
    rank,
    solve_left,
)
from .gnl import GNL, canonicalize, contains, contract, member, restrict
from .hnf import basis_from_generators, visibility_form
from .reduction import (
    DEFAULT_DELTA,
    enumerate_short,
    is_lll_reduced,
    lll,
    round_half_away,
)
from .regular import RegularSpace, from_space


@dataclass(frozen=True)
class CvpResult:
    vector: LabeledVector
    coefficients: tuple
    distance_sq: Fraction
    exact: bool
    approx_factor_sq: Optional[Fraction] = None


def _target_on(b: LabeledMatrix, x) -> LabeledVector:
    if not isinstance(x, LabeledVector):
        return LabeledVector(b.ground, x)
    if x.ground != b.ground:
        if not x.ground.same_labels(b.ground):
            raise GroundMismatch(f"target on {x.ground}, basis on {b.ground}")
        x = x.reindex(b.ground)
    return x


def _combine(coeffs, rows: list, n: int) -> list:
    return [sum((c * r[j] for c, r in zip(coeffs, rows)), Fraction(0)) for j in range(n)]


def babai_nearest(b: LabeledMatrix, x, delta=DEFAULT_DELTA) -> CvpResult:
    """Nearest-plane rounding against an LLL-reduced basis.

    Working from the last Gram-Schmidt vector down, each coefficient is
    the rounded component of the current residual.  For ``delta = 3/4``
    the result is within ``2^(m/2)`` of the closest distance.
    """
    x = _target_on(b, x)
    rows = b.to_lists()
    if not is_lll_reduced(rows, delta):
        raise PreconditionFailed("basis must be LLL-reduced")
    m, n = len(rows), b.ncols
    coeffs = [0] * m
    if m:
        g = gso_rows(rows)
        resid = list(x.entries)
        for j in range(m - 1, -1, -1):
            c = round_half_away(dot(resid, g.b_star[j]) / g.norms_sq[j])
            coeffs[j] = c
            if c:
                resid = [a - c * r for a, r in zip(resid, rows[j])]
    v = LabeledVector(b.ground, _combine(coeffs, rows, n))
    factor = Fraction(2) ** m if Fraction(delta) == DEFAULT_DELTA else None
    return CvpResult(v, tuple(coeffs), (v - x).norm_sq(), False, factor)


def cvp_bruteforce(b: LabeledMatrix, x) -> CvpResult:
    """Exact closest vector; ties go to the lexicographically smallest coefficients.

    The search radius is the distance of the nearest-plane answer on an
    LLL-reduced copy, and the enumeration covers that whole ball.
    """
    x = _target_on(b, x)
    rows = b.to_lists()
    m, n = len(rows), b.ncols
    if m == 0:
        z = LabeledVector.zero(b.ground)
        return CvpResult(z, (), (z - x).norm_sq(), True, Fraction(1))
    if rank(rows) != m:
        raise BadParameter("basis rows must be independent")
    red = lll(rows)
    red_b = LabeledMatrix(b.ground, red.basis)
    radius = babai_nearest(red_b, x).distance_sq
    best = None
    for c in enumerate_short(red.basis, radius, target=list(x.entries)):
        # coefficients on the caller's basis: c @ transform
        orig = tuple(sum(ci * red.transform[i][j] for i, ci in enumerate(c)) for j in range(m))
        v = _combine(c, red.basis, n)
        d = sum(((a - t) ** 2 for a, t in zip(v, x.entries)), Fraction(0))
        key = (d, orig)
        if best is None or key < best[0]:
            best = (key, v)
    (d, orig), v = best
    return CvpResult(LabeledVector(b.ground, v), orig, d, True, Fraction(1))


def closest(b: LabeledMatrix, x, exact: bool = True) -> CvpResult:
    if exact:
        return cvp_bruteforce(b, x)
    x = _target_on(b, x)
    if b.nrows == 0:
        z = LabeledVector.zero(b.ground)
        return CvpResult(z, (), (z - x).norm_sq(), False, Fraction(1))
    red = LabeledMatrix(b.ground, lll(b.to_lists()).basis)
    return babai_nearest(red, x)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ShortVectorResult:
    vector: LabeledVector
    norm_sq: Fraction
    exact: bool
    approx_factor_sq: Optional[Fraction] = None


def _lattice_basis(l) -> LabeledMatrix:
    if isinstance(l, GNL):
        if not l.is_number_lattice():
            raise BadParameter("expected a number lattice (empty space part)")
        return l.lattice_basis
    return basis_from_generators(l)


def shortest_with_restriction(l_pq, x_p: LabeledVector, exact: bool = True) -> ShortVectorResult:
    """Shortest ``(x_P, x_Q)`` in the lattice with the given ``P`` part.

    Take any member with that ``P`` part and subtract from its ``Q`` part
    the closest vector of the lattice contracted to ``Q``.
    """
    b = _lattice_basis(l_pq)
    p_labels = list(x_p.ground)
    b.ground.indices(p_labels)
    q_labels = [a for a in b.ground if a not in set(p_labels)]
    vf = visibility_form(b, q_labels, p_labels)
    c2p = vf.restriction_basis.reindex(x_p.ground) if p_labels else vf.restriction_basis
    lam = solve_left(c2p.to_lists(), list(x_p.entries)) if c2p.nrows else (
        [] if x_p.is_zero() else None
    )
    if lam is None or any(t.denominator != 1 for t in lam):
        raise NoPreimage("no lattice vector has this restriction")
    rows_p = vf.matrix.rows[vf.n_contraction_rows :]
    one = LabeledVector(b.ground, _combine(lam, rows_p, b.ncols))
    x_q = one.restrict(q_labels)
    c1q = vf.contraction_basis
    res = closest(c1q, x_q, exact=exact)
    best_q = x_q - res.vector
    q_part = best_q.reindex(b.ground)
    p_part = one.restrict(p_labels).reindex(b.ground)
    v = p_part + q_part
    return ShortVectorResult(v, v.norm_sq(), res.exact, res.approx_factor_sq)


def _primed(labels, taken, mark: str) -> dict:
    out = {}
    for a in labels:
        name = a + mark
        while name in taken:
            name += mark
        out[a] = name
        taken.add(name)
    return out


def shortest_preimage_projection(l_p, space, x_proj: LabeledVector, exact: bool = True) -> ShortVectorResult:
    """Shortest ``x`` in ``L_P`` whose projection onto ``space`` equals ``x_proj``.

    ``space`` is a ``LabeledMatrix`` spanning the subspace (possibly no rows).
    Each basis row is split into its part on the space and the rest, the
    two parts placed on two copies of the ground; this turns the problem
    into :func:`shortest_with_restriction` on the first copy.
    """
    b = _lattice_basis(l_p)
    g = b.ground
    x_proj = x_proj.reindex(g) if x_proj.ground != g else x_proj
    srows = space.reindex(g).to_lists() if space.nrows else []
    rows = b.to_lists()
    on = project_rows(rows, srows) if srows else [[Fraction(0)] * len(g) for _ in rows]
    off = [[a - c for a, c in zip(r, o)] for r, o in zip(rows, on)]
    taken = set(g)
    one = _primed(g, taken, "'")
    two = _primed(g, taken, "''")
    doubled = GroundSet([one[a] for a in g] + [two[a] for a in g])
    lifted = LabeledMatrix(doubled, [o + f for o, f in zip(on, off)])
    if srows and project_out([list(x_proj.entries)], srows)[0] != [0] * len(g):
        raise NotInProjectionLattice("target does not lie in the space")
    target = LabeledVector([one[a] for a in g], x_proj.entries)
    try:
        res = shortest_with_restriction(lifted, target, exact=exact)
    except NoPreimage:
        raise NotInProjectionLattice("target is not the projection of a lattice vector") from None
    v = res.vector
    x = LabeledVector(g, [v[one[a]] + v[two[a]] for a in g])
    return ShortVectorResult(x, x.norm_sq(), res.exact, res.approx_factor_sq)


def _regular(v) -> GNL:
    if isinstance(v, RegularSpace):
        return v.as_gnl()
    if isinstance(v, GNL) and v.is_vector_space():
        return v
    raise BadParameter("expected a vector space")


def shortest_linked(v_sp, l_p, x_s: LabeledVector, exact: bool = True) -> ShortVectorResult:
    """Shortest ``x_P`` in ``L_P`` whose link through ``V_SP`` is ``x_S``.

    Project ``L_P`` off the space contracted to P; there ``x_S`` has a
    single partner ``x'_P``, and the answer is the shortest lattice vector
    projecting onto it (:func:`shortest_preimage_projection`).
    """
    vg = _regular(v_sp)
    b = _lattice_basis(l_p)
    p = list(b.ground)
    s = list(x_s.ground)
    if set(s) | set(p) != set(vg.labels) or set(s) & set(p):
        raise GroundMismatch("x_S and L_P must split the ground of the space")
    v_cross_p = contract(vg, p).space_basis.reindex(b.ground)
    v_dot_p = restrict(vg, p)
    lat = GNL.lattice(b.ground, b).reorder(v_dot_p.ground)
    if not contains(v_dot_p, lat):
        raise PreconditionFailed("L_P must lie in the space restricted to P")
    span = b.to_lists()
    for r in v_cross_p.rows:
        if solve_left(span, list(r)) is None:
            raise PreconditionFailed("span of L_P must contain the space contracted to P")
    ls = compose(vg, lat)
    x_s_on = x_s.reindex(ls.ground)
    if not member(ls, x_s_on) or any(
        dot(list(x_s_on.entries), list(r)) for r in ls.space_basis.rows
    ):
        raise NotInLinkedLattice("x_S is not in the linked lattice L_S")
    # a partner of x_S on P, then its unique representative off V_SP x P
    full = vg.space_basis.reindex(GroundSet(s + p))
    coeff = solve_left([list(r[: len(s)]) for r in full.rows], list(x_s.entries))
    if coeff is None:
        raise NotInLinkedLattice("x_S is not in the space restricted to S")
    partner = _combine(coeff, [list(r[len(s):]) for r in full.rows], len(p))
    kernel = v_cross_p.to_lists()
    if kernel:
        partner = project_out([partner], kernel)[0]
    comp = LabeledMatrix(b.ground, nullspace(kernel, len(p))) if kernel else LabeledMatrix(
        b.ground, [[int(i == j) for j in range(len(p))] for i in range(len(p))]
    )
    try:
        return shortest_preimage_projection(b, comp, LabeledVector(b.ground, partner), exact=exact)
    except NotInProjectionLattice:
        raise NotInLinkedLattice("partner of x_S is not in the projected lattice") from None


