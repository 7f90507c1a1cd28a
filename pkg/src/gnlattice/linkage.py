"""A small language for chains of compositions.

    atom  := NAME ['^d'] '[' set (',' set)* ']'
    set   := ['-'] NAME
    expr  := atom | '(' expr ')' | expr ('<->' | '>-<') expr

``<->`` is matched and ``>-<`` skewed composition, both left
associative.  An index set may occur at most twice; a set occurring
twice is composed over, a set occurring once survives.  ``-A`` means the
atom's binding with its ``A`` coordinates negated.

An expression is *regular* when no index set occurs more than twice and
no nonempty group of atoms has all of its sets paired inside the group;
such expressions evaluate to the same set under any bracketing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Mapping, Optional, Union

from .composition import MATCHED, SKEWED, compose
from .errors import LinkageSyntaxError, NotRegular, UnboundName
from .gnl import GNL, contains, contract, dualize, restrict

OPS = {"<->": MATCHED, ">-<": SKEWED}
SYMBOL = {MATCHED: "<->", SKEWED: ">-<"}
NULL_CHECK_LIMIT = 16


@dataclass(frozen=True)
class SignedSet:
    name: str
    negated: bool = False

    def __str__(self) -> str:
        return ("-" if self.negated else "") + self.name


@dataclass(frozen=True)
class Atom:
    name: str
    sets: tuple
    dual: bool = False

    def __str__(self) -> str:
        return f"{self.name}{'^d' if self.dual else ''}[{','.join(map(str, self.sets))}]"


@dataclass(frozen=True)
class Compose:
    kind: str
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        # left-associative: only a composite right operand needs brackets
        right = f"({self.right})" if isinstance(self.right, Compose) else str(self.right)
        return f"{self.left} {SYMBOL[self.kind]} {right}"


Expr = Union[Atom, Compose]

_TOKEN = re.compile(r"\s*(?:(<->|>-<)|(\^d)|([A-Za-z_][A-Za-z0-9_']*)|([\[\],()\-]))")


def _tokens(text: str) -> list:
    """Tokens paired with their 1-based column in ``text``."""
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise LinkageSyntaxError(f"unexpected character {text[pos + bad]!r}", pos + bad + 1)
        out.append((m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
    out.append(("", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, want: Optional[str] = None) -> str:
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            found = repr(tok) if tok else "end of input"
            raise LinkageSyntaxError(f"expected {want!r}, found {found}", pos)
        self.i += 1
        return tok

    def name(self) -> str:
        tok, pos = self.toks[self.i]
        if not tok or not (tok[0].isalpha() or tok[0] == "_"):
            raise LinkageSyntaxError(f"expected a name, found {tok!r}" if tok else "expected a name", pos)
        self.i += 1
        return tok

    def expr(self) -> Expr:
        node = self.operand()
        while self.peek() in OPS:
            kind = OPS[self.take()]
            node = Compose(kind, node, self.operand())
        return node

    def operand(self) -> Expr:
        if self.peek() == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        name = self.name()
        dual = False
        if self.peek() == "^d":
            self.take()
            dual = True
        self.take("[")
        sets = [self.signed()]
        while self.peek() == ",":
            self.take(",")
            sets.append(self.signed())
        self.take("]")
        return Atom(name, tuple(sets), dual)

    def signed(self) -> SignedSet:
        neg = False
        if self.peek() == "-":
            self.take("-")
            neg = True
        return SignedSet(self.name(), neg)


def parse(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    tok, pos = p.toks[p.i]
    if tok:
        raise LinkageSyntaxError(f"unexpected {tok!r}", pos)
    return node


def atoms(e: Expr) -> list:
    if isinstance(e, Atom):
        return [e]
    return atoms(e.left) + atoms(e.right)


def _set_names(a: Atom) -> list:
    return [s.name for s in a.sets]


def surviving_sets(e: Expr) -> list:
    names = [n for a in atoms(e) for n in _set_names(a)]
    return [n for n in dict.fromkeys(names) if names.count(n) == 1]


@dataclass(frozen=True)
class RegularityReport:
    overused: tuple  # sets occurring more than twice
    null_groups: tuple  # minimal groups of atoms (by position) with no surviving set
    surviving: tuple

    @property
    def regular(self) -> bool:
        return not self.overused and not self.null_groups

    def diagnostics(self) -> list:
        out = [f"index set {n} occurs more than twice" for n in self.overused]
        for g in self.null_groups:
            out.append("null subexpression on atoms " + ", ".join(g))
        return out


def check_regular(e: Expr) -> RegularityReport:
    ats = atoms(e)
    names = [n for a in ats for n in _set_names(a)]
    overused = tuple(n for n in dict.fromkeys(names) if names.count(n) > 2)
    for a in ats:
        own = _set_names(a)
        if len(set(own)) != len(own):
            overused += tuple(n for n in dict.fromkeys(own) if own.count(n) > 1 and n not in overused)
    nulls: list = []
    if len(ats) <= NULL_CHECK_LIMIT:
        for size in range(1, len(ats) + 1):
            for group in combinations(range(len(ats)), size):
                if any(set(n) <= set(group) for n in nulls):
                    continue
                inside = [n for i in group for n in _set_names(ats[i])]
                if all(inside.count(n) >= 2 for n in inside):
                    nulls.append(group)
    labels = tuple(tuple(str(ats[i]) for i in g) for g in nulls)
    return RegularityReport(overused, labels, tuple(surviving_sets(e)))


def require_regular(e: Expr) -> None:
    rep = check_regular(e)
    if not rep.regular:
        raise NotRegular("; ".join(rep.diagnostics()))


def _labels_of(set_name: str, index_sets: Optional[Mapping]) -> list:
    if index_sets is None:
        return [set_name]
    if set_name not in index_sets:
        raise UnboundName(f"index set {set_name!r} has no labels")
    return list(index_sets[set_name])


def atom_value(a: Atom, bindings: Mapping[str, GNL], index_sets=None) -> GNL:
    if a.name not in bindings:
        raise UnboundName(f"no binding for {a.name!r}")
    k = bindings[a.name]
    if a.dual:
        k = dualize(k)
    want = [lab for s in a.sets for lab in _labels_of(s.name, index_sets)]
    if set(want) != set(k.labels) or len(want) != len(k.labels):
        raise UnboundName(f"binding for {a.name!r} is on {list(k.labels)}, atom needs {want}")
    neg = [lab for s in a.sets if s.negated for lab in _labels_of(s.name, index_sets)]
    return k.negate_on(neg) if neg else k


def evaluate(e: Expr, bindings: Mapping[str, GNL], index_sets=None, check: bool = True) -> GNL:
    """Value of a regular expression.

    ``index_sets`` maps each index set name to its labels; by default a
    set name is itself the single label it stands for.  Atoms marked
    ``^d`` take the dual of their binding.
    """
    if isinstance(e, str):
        e = parse(e)
    if check:
        require_regular(e)
    if isinstance(e, Atom):
        return atom_value(e, bindings, index_sets)
    left = evaluate(e.left, bindings, index_sets, check=False)
    right = evaluate(e.right, bindings, index_sets, check=False)
    return compose(left, right, e.kind)


def dualize_expr(e: Expr) -> Expr:
    """Swap every connective and mark every atom dual; evaluating the
    result gives the dual of the original value."""
    if isinstance(e, Atom):
        return replace(e, dual=not e.dual)
    other = SKEWED if e.kind == MATCHED else MATCHED
    return Compose(other, dualize_expr(e.left), dualize_expr(e.right))


def to_matched(e: Expr) -> Expr:
    """Equivalent expression using only ``<->``.

    A skewed node is turned matched by negating, in its right operand,
    the sets it composes over.
    """
    if isinstance(e, Atom):
        return e
    left, right = to_matched(e.left), to_matched(e.right)
    if e.kind == SKEWED:
        shared = {s.name for a in atoms(left) for s in a.sets} & {s.name for a in atoms(right) for s in a.sets}
        right = _flip(right, shared)
    return Compose(MATCHED, left, right)


def _flip(e: Expr, names: set) -> Expr:
    if isinstance(e, Atom):
        return replace(e, sets=tuple(SignedSet(s.name, s.negated ^ (s.name in names)) for s in e.sets))
    return Compose(e.kind, _flip(e.left, names), _flip(e.right, names))


def connective_of(e: Expr) -> dict:
    """For each composed-over set, the kind of the node where it is matched up."""
    out: dict = {}

    def walk(node):
        if isinstance(node, Atom):
            return {s.name for s in node.sets}
        a, b = walk(node.left), walk(node.right)
        for n in a & b:
            out[n] = node.kind
        return a ^ b

    walk(e)
    return out


def to_dot(e: Expr, bindings: Optional[Mapping[str, GNL]] = None, index_sets=None, name: str = "linkage") -> str:
    """DOT text for the diagram: atoms are nodes, composed-over sets edges.

    Solid edges are matched, dashed skewed.  With bindings, an edge from
    ``K`` to ``M`` over ``R`` is drawn directed when restricting ``K`` to
    ``R`` contains ``M``'s restriction and ``K``'s contraction is inside ``M``'s.
    """
    require_regular(e)
    ats = atoms(e)
    kinds = connective_of(e)
    values = [atom_value(a, bindings, index_sets) for a in ats] if bindings is not None else None
    lines = [f"digraph {name} {{"]
    for i, a in enumerate(ats):
        lines.append(f'  n{i} [label="{a}"];')
    where: dict = {}
    for i, a in enumerate(ats):
        for s in a.sets:
            where.setdefault(s.name, []).append(i)
    for set_name, ends in where.items():
        if len(ends) != 2:
            continue
        i, j = ends
        style = "solid" if kinds.get(set_name, MATCHED) == MATCHED else "dashed"
        direction = None
        if values is not None:
            r = _labels_of(set_name, index_sets)
            if _points(values[i], values[j], r):
                direction = (i, j)
            elif _points(values[j], values[i], r):
                direction = (j, i)
        if direction is None:
            lines.append(f'  n{i} -> n{j} [label="{set_name}", style={style}, dir=none];')
        else:
            a, b = direction
            lines.append(f'  n{a} -> n{b} [label="{set_name}", style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _points(k: GNL, m: GNL, r: list) -> bool:
    return contains(restrict(k, r), restrict(m, r)) and contains(contract(m, r), contract(k, r))
