"""Matched and skewed composition, and solving for a missing factor.

For ``K1`` on ``S + P`` and ``K2`` on ``P + Q`` the matched composition
keeps ``(f_S, h_Q)`` whenever some ``g_P`` has ``(f_S, g_P)`` in ``K1``
and ``(g_P, h_Q)`` in ``K2``; the skewed one pairs ``g_P`` with
``-g_P`` instead.  Both are computed as a sum followed by a contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BadParameter, DisjointnessViolation, PreconditionFailed
from .ground_linalg import LabeledMatrix, project_out, solve_left
from .gnl import GNL, contains, contract, restrict, sum_

MATCHED = "matched"
SKEWED = "skewed"


def _split(k1: GNL, k2: GNL, shared: Optional[Iterable[str]]) -> tuple:
    common = [a for a in k1.labels if a in k2.ground]
    if shared is None:
        shared = common
    else:
        shared = list(shared)
        for a in shared:
            k1.ground.index(a)
            k2.ground.index(a)
        extra = [a for a in common if a not in shared]
        if extra:
            raise DisjointnessViolation(f"labels {extra} occur on both sides but are not composed over")
    shared_set = set(shared)
    s = [a for a in k1.labels if a not in shared_set]
    q = [a for a in k2.labels if a not in shared_set]
    return s, [a for a in k1.labels if a in shared_set], q


def compose(k1: GNL, k2: GNL, kind: str = MATCHED, shared: Optional[Iterable[str]] = None) -> GNL:
    """``k1 <-> k2`` (matched) or ``k1 >-< k2`` (skewed) over their shared labels.

    The result lives on the unshared labels of ``k1`` followed by those
    of ``k2``.  Disjoint grounds give the direct sum.
    """
    s, p, q = _split(k1, k2, shared)
    if kind == MATCHED:
        k2 = k2.negate_on(p)
    elif kind != SKEWED:
        raise ValueError(f"kind must be {MATCHED!r} or {SKEWED!r}")
    return contract(sum_(k1, k2), s + q)


def matched(k1: GNL, k2: GNL) -> GNL:
    return compose(k1, k2, MATCHED)


def skewed(k1: GNL, k2: GNL) -> GNL:
    return compose(k1, k2, SKEWED)


@dataclass(frozen=True)
class IITReport:
    """Outcome of :func:`iit_solve` for ``K_SP`` and ``K_SQ``.

    The two ``*_ok`` flags are the feasibility containments on ``S``; the
    ``unique_*`` flags are the containments on ``P`` that make the
    solution the only one.
    """

    restriction_ok: bool
    contraction_ok: bool
    solution: Optional[GNL]
    unique_restriction_ok: Optional[bool] = None
    unique_contraction_ok: Optional[bool] = None

    @property
    def feasible(self) -> bool:
        return self.restriction_ok and self.contraction_ok

    @property
    def unique(self) -> bool:
        return bool(self.feasible and self.unique_restriction_ok and self.unique_contraction_ok)

    def failures(self) -> list:
        out = []
        if not self.restriction_ok:
            out.append("K_SP restricted to S must contain K_SQ restricted to S")
        if not self.contraction_ok:
            out.append("K_SP contracted to S must be contained in K_SQ contracted to S")
        return out


def iit_solve(k_sp: GNL, k_sq: GNL, shared: Optional[Iterable[str]] = None) -> IITReport:
    """Find ``K_PQ`` with ``K_SP <-> K_PQ == K_SQ``.

    ``S`` is the set of shared labels.  When the two containments on
    ``S`` hold the answer is ``K_SP <-> K_SQ``; otherwise no solution
    exists and ``solution`` is None.
    """
    _, s, _ = _split(k_sp, k_sq, shared)
    r_ok = contains(restrict(k_sp, s), restrict(k_sq, s))
    c_ok = contains(contract(k_sq, s), contract(k_sp, s))
    if not (r_ok and c_ok):
        return IITReport(r_ok, c_ok, None)
    sol = compose(k_sp, k_sq, MATCHED, shared=s)
    p = [a for a in k_sp.labels if a not in set(s)]
    ur = contains(restrict(k_sp, p), restrict(sol, p))
    uc = contains(contract(sol, p), contract(k_sp, p))
    return IITReport(r_ok, c_ok, sol, ur, uc)


def require_iit(k_sp: GNL, k_sq: GNL, shared=None) -> GNL:
    rep = iit_solve(k_sp, k_sq, shared)
    if not rep.feasible:
        raise PreconditionFailed(rep.failures()[0])
    return rep.solution


@dataclass(frozen=True)
class LinkedBasisPair:
    """Row ``i`` of ``b_s`` is the partner of row ``i`` of ``b_p`` through ``V_SP``."""

    b_p: LabeledMatrix
    b_s: LabeledMatrix
    space_s: LabeledMatrix  # basis of V_S = V_SP <-> V_P

    def as_gnl(self) -> GNL:
        return GNL(self.b_s.ground, self.b_s, self.space_s)


def invertibly_linked_basis(v_sp: GNL, k_p: GNL, basis: Optional[LabeledMatrix] = None) -> LinkedBasisPair:
    """Carry a basis of the lattice part of ``K_P`` across ``V_SP`` to S.

    Needs ``V_SP x P`` inside the space part of ``K_P`` and ``K_P`` inside
    ``V_SP . P``.  Each basis row is lifted to S and the lift projected off
    ``V_S``; the P row is replaced by the partner of what remains, which
    differs from the original only by a vector of ``V_P``.
    """
    if not v_sp.is_vector_space():
        raise BadParameter("V_SP must be a vector space")
    p = list(k_p.labels)
    s = [a for a in v_sp.labels if a not in set(p)]
    v_p = GNL.space(k_p.ground, k_p.space_basis)
    if not contains(v_p, contract(v_sp, p)):
        raise PreconditionFailed("V_SP x P must lie in the space part of K_P")
    if not contains(restrict(v_sp, p), k_p):
        raise PreconditionFailed("K_P must lie in V_SP . P")
    v_s = compose(v_sp, v_p)
    b_p = k_p.lattice_basis if basis is None else basis.reindex(k_p.ground)
    rows = v_sp.space_basis.reindex(v_sp.ground.subset(s + p)).to_lists()
    on_s = [r[: len(s)] for r in rows]
    on_p = [r[len(s):] for r in rows]
    cross_p = contract(v_sp, p).space_basis.reindex(k_p.ground).to_lists()
    vs_rows = v_s.space_basis.reindex(s).to_lists()
    out_s, out_p = [], []
    for x_p in b_p.to_lists():
        lam = solve_left(on_p, x_p)
        x_s = [sum(c * r[j] for c, r in zip(lam, on_s)) for j in range(len(s))]
        if vs_rows:
            x_s = project_out([x_s], vs_rows)[0]
        # partner of the projected lift, made unique modulo V_SP x P
        mu = solve_left(on_s, x_s)
        partner = [sum(c * r[j] for c, r in zip(mu, on_p)) for j in range(len(p))]
        if cross_p:
            partner = project_out([partner], cross_p)[0]
        out_s.append(x_s)
        out_p.append(partner)
    g_s = v_sp.ground.subset(s)
    return LinkedBasisPair(
        LabeledMatrix(k_p.ground, out_p), LabeledMatrix(g_s, out_s), v_s.space_basis.reindex(g_s)
    )
