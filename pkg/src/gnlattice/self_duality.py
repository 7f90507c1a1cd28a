"""Self-dual sets relative to a label involution, and two ways to build them.

``K`` is self-dual relative to an involution ``p`` of its labels when its
dual equals ``K`` with coordinates permuted by ``p``.  Composing two such
sets whose involutions agree on the shared labels gives another one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .composition import compose
from .errors import BadParameter, PortConditionViolated, PreconditionFailed
from .ground_linalg import GroundSet, LabeledMatrix, rank
from .gnl import GNL, direct_sum, dualize, equal
from .regular import RegularSpace, direct_sum as regular_direct_sum, from_graph_incidence, rename


@dataclass(frozen=True)
class Involution:
    """A permutation of labels that is its own inverse."""

    mapping: tuple  # sorted (label, image) pairs

    def __init__(self, pairs):
        m = dict(pairs.items() if isinstance(pairs, Mapping) else pairs)
        full = dict(m)
        for a, b in m.items():
            if full.setdefault(b, a) != a:
                raise BadParameter(f"{a!r} -> {b!r} is not part of an involution")
        object.__setattr__(self, "mapping", tuple(sorted(full.items())))

    def __call__(self, label: str) -> str:
        return dict(self.mapping).get(label, label)

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def restricted(self, labels: Iterable[str]) -> "Involution":
        labels = set(labels)
        d = self.as_dict()
        for a in labels:
            if d.get(a, a) not in labels:
                raise BadParameter(f"involution moves {a!r} outside the label set")
        return Involution({a: b for a, b in d.items() if a in labels})

    def check_on(self, ground) -> None:
        labels = set(ground)
        for a, b in self.mapping:
            if a not in labels or b not in labels:
                raise BadParameter(f"involution uses {a!r} <-> {b!r} outside the ground")

    @classmethod
    def identity(cls) -> "Involution":
        return cls({})


def apply_permutation(k: GNL, p: Involution) -> GNL:
    """The set of vectors ``f_p`` with ``f_p(p(e)) = f(e)`` for ``f`` in ``k``."""
    p.check_on(k.ground)
    order = GroundSet(p(a) for a in k.labels)
    # column a of the result is column p(a) of k; relabelling does exactly that
    moved = GNL(order, k.lattice_basis.rows, k.space_basis.rows)
    return moved.reorder(k.ground)


def is_self_dual(k: GNL, p: Involution | None = None) -> bool:
    p = p or Involution.identity()
    return equal(dualize(k), apply_permutation(k, p))


@dataclass(frozen=True)
class SelfDualCertificate:
    sp_self_dual: bool
    p_self_dual: bool
    result_self_dual: bool
    number_lattice: bool


def compose_self_dual(k_sp: GNL, k_p: GNL, p: Involution) -> tuple:
    """``K_SP <-> K_P`` together with a recomputed self-duality check.

    Both inputs must be self-dual relative to ``p`` (restricted to their
    grounds), and ``p`` must map ``P`` onto itself.
    """
    p_labels = list(k_p.labels)
    s_labels = [a for a in k_sp.labels if a not in set(p_labels)]
    p_sp = p.restricted(k_sp.labels)
    p_p = p.restricted(p_labels)
    p_s = p.restricted(s_labels)
    if not is_self_dual(k_sp, p_sp):
        raise PreconditionFailed("K_SP must be self-dual relative to the involution")
    if not is_self_dual(k_p, p_p):
        raise PreconditionFailed("K_P must be self-dual relative to the involution on P")
    out = compose(k_sp, k_p)
    cert = SelfDualCertificate(True, True, is_self_dual(out, p_s), out.is_number_lattice())
    if not cert.result_self_dual:
        raise AssertionError("composition of self-dual sets came out not self-dual")
    if k_sp.is_number_lattice() and k_p.is_number_lattice() and k_sp.is_full_dimensional() \
            and k_p.is_full_dimensional() and not out.is_number_lattice():
        raise AssertionError("composition of full number lattices has a space part")
    return out, cert


def direct_sum_copies(seed: GNL, copies: int, suffix: str = "_") -> GNL:
    """Direct sum of relabelled copies ``a -> a_1, a_2, ...`` of ``seed``."""
    out = None
    for i in range(1, copies + 1):
        c = seed.rename({a: f"{a}{suffix}{i}" for a in seed.labels})
        out = c if out is None else direct_sum(out, c)
    return out


def copy_involution(p: Involution, labels: Iterable[str], copies: int, suffix: str = "_") -> Involution:
    d = {}
    for i in range(1, copies + 1):
        for a in labels:
            d[f"{a}{suffix}{i}"] = f"{p(a)}{suffix}{i}"
    return Involution(d)


def check_port_condition(v_z: RegularSpace, ports: Sequence[str]) -> None:
    """Ports must contain no loop and no cutset of the underlying graph."""
    g = v_z.ground
    ports = list(g.subset(ports))
    rows = v_z.std_rep.rows
    cols = lambda labels: [[r[g.index(a)] for r in rows] for a in labels]
    if ports and rank(cols(ports)) != len(ports):
        raise PortConditionViolated("port set contains a loop")
    rest = [a for a in g if a not in set(ports)]
    if (rank(cols(rest)) if rest else 0) != v_z.dim:
        raise PortConditionViolated("port set contains a cutset")


def port_space(edges, ports: Sequence[str], mark: str = "'") -> tuple:
    """``V_Z + V_Z'^perp`` on edges and primed edges, plus the swap involution.

    Returns ``(space, involution)``; the space is self-dual relative to
    swapping every edge with its primed copy.
    """
    v_z = from_graph_incidence(edges)
    check_port_condition(v_z, ports)
    prime = {a: a + mark for a in v_z.ground}
    clash = set(prime.values()) & set(v_z.ground)
    if clash:
        raise BadParameter(f"primed labels {sorted(clash)} collide with edge ids")
    v_zz = regular_direct_sum(v_z, rename(v_z.orthogonal(), prime))
    return v_zz, Involution(prime)


def port_lattice(edges, ports: Sequence[str], l_ss: GNL, mark: str = "'") -> tuple:
    """Compose the port space with a self-dual ``L_SS'`` on the non-port edges.

    The result is a number lattice on the ports and their copies,
    self-dual relative to the swap.  Returns ``(lattice, certificate)``.
    """
    v_zz, p = port_space(edges, ports, mark)
    ports = set(ports)
    expected = {a for a in v_zz.ground if a not in ports and a.removesuffix(mark) not in ports}
    if set(l_ss.labels) != expected:
        raise BadParameter("L_SS' must live on the non-port edges and their copies")
    out, cert = compose_self_dual(v_zz.as_gnl(), l_ss, p)
    if not out.is_number_lattice():
        raise AssertionError("port lattice has a space part despite the port condition")
    return out, cert
