"""Command line front end: ``gnlattice <command> ...``.

Inputs are JSON files.  A lattice file looks like::

    {"ground": ["a", "b"], "lattice_basis": [["1", "1/2"]], "space_basis": []}

with every number a ``"p/q"`` string (or ``"n"``, or a JSON integer).  A
graph file is ``{"edges": [{"id": "e1", "tail": "u", "head": "v"}, ...]}``
and a permutation file a list of label pairs.  Results go to stdout as
canonical JSON (sorted keys, LF line endings).  With ``--verify`` a
certificate is written to stderr.

Exit status: 0 on success, 1 for unreadable or malformed input, 2 when a
precondition of the requested operation fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import composition, cvp, gnl, hnf as hnf_engine, linkage, reduction, regular, self_duality
from .errors import LatticeError, LinkageSyntaxError, PreconditionFailed
from .ground_linalg import LabeledMatrix, LabeledVector, det, fraction_str, rank
from .gnl import GNL


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# file formats


def _num(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"numbers must be integers or 'p/q' strings, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad number {x!r}") from exc


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def read_matrices(path) -> tuple:
    """``(ground, lattice rows, space rows)`` exactly as written in the file."""
    data = _read_json(path)
    if not isinstance(data, dict) or "ground" not in data:
        raise InputError(f"{path}: expected an object with a 'ground' list")
    ground = [str(a) for a in data["ground"]]
    if len(set(ground)) != len(ground):
        raise InputError(f"{path}: repeated labels in ground")
    mats = []
    for key in ("lattice_basis", "space_basis"):
        rows = data.get(key, [])
        if not isinstance(rows, list):
            raise InputError(f"{path}: '{key}' must be a list of rows")
        out = []
        for r in rows:
            if not isinstance(r, list) or len(r) != len(ground):
                raise InputError(f"{path}: every row of '{key}' needs {len(ground)} entries")
            out.append([_num(x) for x in r])
        mats.append(LabeledMatrix(ground, out))
    return ground, mats[0], mats[1]


def read_gnl(path) -> GNL:
    _, lat, spc = read_matrices(path)
    return gnl.canonicalize(lat, spc)


def read_graph(path) -> list:
    data = _read_json(path)
    try:
        return [regular.Edge(str(e["id"]), str(e["tail"]), str(e["head"])) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected {{'edges': [{{'id', 'tail', 'head'}}, ...]}}") from exc


def read_space(path) -> regular.RegularSpace:
    """A regular space from a graph file or from a lattice file's space part."""
    data = _read_json(path)
    if isinstance(data, dict) and "edges" in data:
        return regular.from_graph_incidence(read_graph(path))
    _, _, spc = read_matrices(path)
    return regular.from_matrix(spc)


def read_perm(path) -> self_duality.Involution:
    data = _read_json(path)
    if isinstance(data, dict):
        data = list(data.items())
    try:
        pairs = [(str(a), str(b)) for a, b in data]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: expected a list of label pairs") from exc
    return self_duality.Involution(pairs)


def _rows(m: LabeledMatrix) -> list:
    return [[fraction_str(x) for x in r] for r in m.rows]


def gnl_json(k: GNL) -> dict:
    return {"ground": list(k.labels), "lattice_basis": _rows(k.lattice_basis), "space_basis": _rows(k.space_basis)}


def basis_json(b: LabeledMatrix) -> dict:
    return {"ground": list(b.ground.labels), "lattice_basis": _rows(b), "space_basis": []}


def vector_json(v: LabeledVector) -> dict:
    return {a: fraction_str(x) for a, x in zip(v.ground, v.entries)}


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_vector(text: str, ground) -> LabeledVector:
    """``"1,-1/2"`` in ground order or ``"a=1,b=-1/2"`` by label (others zero)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if parts and all("=" in p for p in parts):
            vals = {k.strip(): _num(v.strip()) for k, v in (p.split("=", 1) for p in parts)}
            return LabeledVector.from_dict(ground, vals)
        return LabeledVector(ground, [_num(p) for p in parts])
    except LatticeError as exc:
        raise InputError(f"bad vector {text!r}: {exc}") from exc


def parse_labeled(text: str) -> LabeledVector:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts or not all("=" in p for p in parts):
        raise InputError(f"expected label=value pairs, got {text!r}")
    pairs = [p.split("=", 1) for p in parts]
    return LabeledVector([k.strip() for k, _ in pairs], [_num(v.strip()) for _, v in pairs])


def _labels(text: str) -> list:
    return [a.strip() for a in text.split(",") if a.strip()]


# --------------------------------------------------------------------------
# commands: each returns (result, certificate) where result is a JSON-able
# object or a string to print verbatim


def cmd_hnf(path, args):
    _, lat, _ = read_matrices(path)
    res = hnf_engine.hnf(lat)
    u = [list(r) for r in res.U]
    out = {"ground": list(lat.ground.labels), "H": _rows(res.H), "U": [[str(x) for x in r] for r in u],
           "pivot_columns": list(res.pivot_columns)}
    ua = [[sum((u[i][t] * lat.rows[t][j] for t in range(lat.nrows)), Fraction(0)) for j in range(lat.ncols)]
          for i in range(len(u))]
    cert = {"U_det": str(det(u)) if u else "1", "H_equals_UA": [list(r) for r in res.H.rows] == ua}
    return out, cert


def cmd_basis(path, args):
    _, lat, spc = read_matrices(path)
    k = gnl.canonicalize(lat, spc)
    raw_ok = all(gnl.member(k, list(r)) for r in lat.rows)
    return gnl_json(k), {"generators_are_members": raw_ok}


def cmd_dual(path, args):
    k = read_gnl(path)
    d = gnl.dualize(k)
    return gnl_json(d), {"involution": gnl.equal(gnl.dualize(d), k)}


def cmd_separators(path, args):
    k = read_gnl(path)
    if not k.is_number_lattice():
        raise PreconditionFailed("separators need a number lattice (empty space part)")
    blocks = hnf_engine.separators(k.lattice_basis)
    parts = [gnl.restrict(k, b) for b in blocks]
    total = parts[0]
    for p in parts[1:]:
        total = gnl.sum_(total, p)
    return {"blocks": [list(b) for b in blocks]}, {"direct_sum_identity": gnl.equal(total, k)}


def _load_basis(path) -> LabeledMatrix:
    _, lat, _ = read_matrices(path)
    if lat.nrows and rank(lat.to_lists()) != lat.nrows:
        lat = hnf_engine.basis_from_generators(lat)
    return lat


def cmd_lll(path, args):
    b = _load_basis(path)
    res = reduction.lll(b, args.delta)
    out = res.basis
    ok = hnf_engine.basis_from_generators(out).rows == hnf_engine.basis_from_generators(b).rows
    cert = {"size_reduced": reduction.is_size_reduced(out), "lovasz": reduction.lovasz_holds(out, args.delta),
            "same_lattice": ok, "swaps": res.swaps, "delta": fraction_str(Fraction(args.delta))}
    return basis_json(out), cert


def cmd_dual_lll(path, args):
    _, b, _ = read_matrices(path)
    res = reduction.dual_lll_from_primal(b, args.delta)
    out = res.basis
    want = gnl.dualize(GNL.lattice(b.ground, b)).lattice_basis
    cert = {"swaps": res.swaps, "size_reduction_steps": res.size_reduction_steps,
            "size_reduced": reduction.is_size_reduced(out), "lovasz": reduction.lovasz_holds(out, args.delta),
            "same_lattice_as_dual": hnf_engine.basis_from_generators(out).rows == want.rows}
    return basis_json(out), cert


def cmd_minima(path, args):
    b = _load_basis(path)
    sm = reduction.successive_minima(b)
    return {"lambdas_sq": [fraction_str(x) for x in sm.lambdas_sq],
            "witnesses": [vector_json(w) for w in sm.witnesses]}, {"dimension": len(sm.lambdas_sq)}


def cmd_selfdual_check(path, args):
    k = read_gnl(path)
    perm = read_perm(args.perm) if args.perm else self_duality.Involution.identity()
    return {"self_dual": self_duality.is_self_dual(k, perm)}, {"involution": [list(p) for p in perm.mapping]}


UNARY = {
    "hnf": cmd_hnf,
    "basis": cmd_basis,
    "dual": cmd_dual,
    "separators": cmd_separators,
    "lll": cmd_lll,
    "dual-lll": cmd_dual_lll,
    "minima": cmd_minima,
    "selfdual-check": cmd_selfdual_check,
}


def cmd_sum(args):
    a, b = read_gnl(args.a), read_gnl(args.b)
    out = gnl.sum_(a, b)
    cert = {"contains_first": gnl.contains(out, gnl.sum_(a, GNL.zero(out.ground))),
            "contains_second": gnl.contains(out, gnl.sum_(b, GNL.zero(out.ground)).reorder(out.ground))}
    return gnl_json(out), cert


def cmd_intersect(args):
    a, b = read_gnl(args.a), read_gnl(args.b)
    out = gnl.intersect(a, b)
    free = lambda k: gnl.sum_(k, GNL.full_space([x for x in out.labels if x not in k.ground])).reorder(out.ground)
    cert = {"inside_first": gnl.contains(free(a), out), "inside_second": gnl.contains(free(b), out)}
    return gnl_json(out), cert


def cmd_minor(args):
    k = read_gnl(args.file)
    keep = _labels(args.keep)
    out = gnl.minor(k, keep, args.mode)
    other = "contract" if args.mode == "restrict" else "restrict"
    cert = {"dot_cross_duality": gnl.equal(gnl.dualize(out), gnl.minor(gnl.dualize(k), keep, other))}
    return gnl_json(out), cert


def cmd_compose(args):
    a, b = read_gnl(args.a), read_gnl(args.b)
    shared = _labels(args.shared) if args.shared else None
    out = composition.compose(a, b, args.kind, shared)
    other = composition.SKEWED if args.kind == composition.MATCHED else composition.MATCHED
    dual = composition.compose(gnl.dualize(a), gnl.dualize(b), other, shared)
    return gnl_json(out), {"dual_identity": gnl.equal(gnl.dualize(out), dual)}


def cmd_iit(args):
    a, b = read_gnl(args.ksp), read_gnl(args.ksq)
    rep = composition.iit_solve(a, b)
    if not rep.feasible:
        raise PreconditionFailed(rep.failures()[0])
    out = {"restriction_ok": rep.restriction_ok, "contraction_ok": rep.contraction_ok,
           "unique_restriction_ok": rep.unique_restriction_ok, "unique_contraction_ok": rep.unique_contraction_ok,
           "unique": rep.unique, "solution": gnl_json(rep.solution)}
    back = composition.compose(a, rep.solution)
    return out, {"round_trip": gnl.equal(back, b)}


def _space_and_lattice(args):
    v = read_space(args.space)
    k = read_gnl(args.kp)
    return v, k


def cmd_linked_basis(args):
    v, k = _space_and_lattice(args)
    if args.dual:
        bs = reduction.dual_linked_reduced_basis(v, k, delta=args.delta)
        target = gnl.dualize(composition.compose(v.as_gnl(), k))
    else:
        bs = reduction.linked_reduced_basis(v, k, delta=args.delta)
        target = composition.compose(v.as_gnl(), k)
    n_s, n_p = len(bs.ground), len(k.ground)
    cert = {"same_lattice": hnf_engine.basis_from_generators(bs).rows == target.lattice_basis.reindex(bs.ground).rows}
    if bs.nrows <= reduction.MINIMA_DIM_LIMIT:
        sm = reduction.successive_minima(bs)
        m = bs.nrows
        cert["beta_sq"] = fraction_str(reduction.beta_sq(n_s, n_p, m))
        cert["beta_sm"] = reduction.certify_alpha_sm(bs, [reduction.beta_sq(n_s, n_p, m)] * m, sm)
    return basis_json(bs), cert


def _cvp_json(res) -> dict:
    return {"vector": vector_json(res.vector), "coefficients": [str(c) for c in res.coefficients],
            "distance_sq": fraction_str(res.distance_sq), "exact": res.exact}


def cmd_babai(args):
    b = _load_basis(args.file)
    x = parse_vector(args.target, b.ground)
    res = cvp.babai_nearest(b, x, args.delta)
    cert = {"approx_factor_sq": fraction_str(res.approx_factor_sq) if res.approx_factor_sq else None}
    if b.nrows <= reduction.MINIMA_DIM_LIMIT:
        best = cvp.cvp_bruteforce(b, x)
        cert["exact_distance_sq"] = fraction_str(best.distance_sq)
        if res.approx_factor_sq is not None:
            cert["within_factor"] = res.distance_sq <= res.approx_factor_sq * best.distance_sq
    return _cvp_json(res), cert


def cmd_cvp(args):
    b = _load_basis(args.file)
    x = parse_vector(args.target, b.ground)
    res = cvp.closest(b, x, exact=args.exact)
    return _cvp_json(res), {"member": gnl.member(GNL.lattice(b.ground, b), res.vector)}


def _short_json(res) -> dict:
    return {"vector": vector_json(res.vector), "norm_sq": fraction_str(res.norm_sq), "exact": res.exact}


def cmd_q1(args):
    b = _load_basis(args.file)
    x_p = parse_labeled(args.restriction)
    res = cvp.shortest_with_restriction(b, x_p, exact=args.exact)
    ok = gnl.member(GNL.lattice(b.ground, b), res.vector) and res.vector.restrict(x_p.ground).reindex(x_p.ground) == x_p
    return _short_json(res), {"member_with_restriction": ok}


def cmd_q2(args):
    b = _load_basis(args.file)
    _, _, spc = read_matrices(args.space_file)
    x = parse_vector(args.target, b.ground)
    res = cvp.shortest_preimage_projection(b, spc.reindex(b.ground), x, exact=args.exact)
    return _short_json(res), {"member": gnl.member(GNL.lattice(b.ground, b), res.vector)}


def cmd_q3(args):
    v = read_space(args.space)
    b = _load_basis(args.lp)
    x_s = parse_labeled(args.linked)
    res = cvp.shortest_linked(v, b, x_s, exact=args.exact)
    return _short_json(res), {"member": gnl.member(GNL.lattice(b.ground, b), res.vector)}


def cmd_selfdual_compose(args):
    a, b = read_gnl(args.ksp), read_gnl(args.kp)
    perm = read_perm(args.perm) if args.perm else self_duality.Involution.identity()
    out, cert = self_duality.compose_self_dual(a, b, perm)
    return gnl_json(out), {"result_self_dual": cert.result_self_dual, "number_lattice": cert.number_lattice}


def cmd_port_space(args):
    edges = read_graph(args.graph)
    ports = _labels(args.ports)
    if args.lattice:
        out, cert = self_duality.port_lattice(edges, ports, read_gnl(args.lattice))
        return gnl_json(out), {"self_dual": cert.result_self_dual, "number_lattice": cert.number_lattice}
    v, perm = self_duality.port_space(edges, ports)
    k = v.as_gnl()
    return gnl_json(k), {"self_dual": self_duality.is_self_dual(k, perm),
                         "involution": [list(p) for p in perm.mapping]}


def _read_expr(args):
    if args.inline:
        return linkage.parse(args.source)
    try:
        text = Path(args.source).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.source}: {exc.strerror}") from exc
    return linkage.parse(text.strip())


def _bindings(args) -> dict:
    out = {}
    for item in args.bind or []:
        if "=" not in item:
            raise InputError(f"--bind expects NAME=FILE, got {item!r}")
        name, path = item.split("=", 1)
        out[name.strip()] = read_gnl(path.strip())
    return out


def _index_sets(args):
    if not args.index_sets:
        return None
    data = _read_json(args.index_sets)
    if not isinstance(data, dict):
        raise InputError("index set file must map set names to label lists")
    return {str(k): [str(x) for x in v] for k, v in data.items()}


def cmd_expr(args):
    e = _read_expr(args)
    if args.action == "dual":
        return str(linkage.dualize_expr(e)) + "\n", {}
    if args.action == "dot":
        b = _bindings(args) if args.bind else None
        return linkage.to_dot(e, b, _index_sets(args)), {}
    rep = linkage.check_regular(e)
    if not rep.regular:
        raise PreconditionFailed("expression must be regular", "; ".join(rep.diagnostics()))
    b = _bindings(args)
    idx = _index_sets(args)
    out = linkage.evaluate(e, b, idx)
    dual = linkage.evaluate(linkage.dualize_expr(e), b, idx)
    return gnl_json(out), {"surviving_sets": list(rep.surviving), "dual_identity": gnl.equal(gnl.dualize(out), dual)}


# --------------------------------------------------------------------------
# argument parsing and dispatch


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verify", action="store_true", help="write a certificate to stderr")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    p = argparse.ArgumentParser(prog="gnlattice", description="Exact generalized number lattice toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    for name in UNARY:
        s = sub.add_parser(name, parents=[common])
        s.add_argument("files", nargs="+")
        s.add_argument("--jobs", type=int, default=1, help="process several input files in parallel")
        if name in ("lll", "dual-lll"):
            s.add_argument("--delta", type=_fraction_arg, default=Fraction(3, 4))
        if name == "selfdual-check":
            s.add_argument("--perm")

    for name, fn in (("sum", cmd_sum), ("intersect", cmd_intersect)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("a")
        s.add_argument("b")
        s.set_defaults(func=fn)

    s = sub.add_parser("minor", parents=[common])
    s.add_argument("file")
    s.add_argument("--keep", required=True)
    s.add_argument("--mode", choices=["restrict", "contract"], default="restrict")
    s.set_defaults(func=cmd_minor)

    s = sub.add_parser("compose", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--kind", choices=[composition.MATCHED, composition.SKEWED], default=composition.MATCHED)
    s.add_argument("--shared", help="comma separated labels to compose over")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("iit-solve", parents=[common])
    s.add_argument("ksp")
    s.add_argument("ksq")
    s.set_defaults(func=cmd_iit)

    s = sub.add_parser("linked-basis", parents=[common])
    s.add_argument("space", help="graph file or lattice file whose space part is regular")
    s.add_argument("kp")
    s.add_argument("--dual", action="store_true")
    s.add_argument("--delta", type=_fraction_arg, default=Fraction(3, 4))
    s.set_defaults(func=cmd_linked_basis)

    s = sub.add_parser("babai", parents=[common])
    s.add_argument("file")
    s.add_argument("--target", required=True)
    s.add_argument("--delta", type=_fraction_arg, default=Fraction(3, 4))
    s.set_defaults(func=cmd_babai)

    s = sub.add_parser("cvp", parents=[common])
    s.add_argument("file")
    s.add_argument("--target", required=True)
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_cvp)

    s = sub.add_parser("q1", parents=[common])
    s.add_argument("file")
    s.add_argument("--restriction", required=True, help="label=value pairs fixing the P part")
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_q1)

    s = sub.add_parser("q2", parents=[common])
    s.add_argument("file")
    s.add_argument("--space", dest="space_file", required=True, help="lattice file whose space part is V")
    s.add_argument("--target", required=True)
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_q2)

    s = sub.add_parser("q3", parents=[common])
    s.add_argument("space")
    s.add_argument("lp")
    s.add_argument("--linked", required=True, help="label=value pairs of x_S")
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_q3)

    s = sub.add_parser("selfdual-compose", parents=[common])
    s.add_argument("ksp")
    s.add_argument("kp")
    s.add_argument("--perm")
    s.set_defaults(func=cmd_selfdual_compose)

    s = sub.add_parser("port-space", parents=[common])
    s.add_argument("graph")
    s.add_argument("--ports", required=True)
    s.add_argument("--lattice", help="self-dual lattice on the non-port edges and their copies")
    s.set_defaults(func=cmd_port_space)

    s = sub.add_parser("expr", parents=[common])
    s.add_argument("action", choices=["eval", "dual", "dot"])
    s.add_argument("source", help="file holding the expression (or the text itself with --inline)")
    s.add_argument("--inline", action="store_true")
    s.add_argument("--bind", action="append", metavar="NAME=FILE")
    s.add_argument("--index-sets", help="JSON object mapping index set names to label lists")
    s.set_defaults(func=cmd_expr)
    return p


def _run_unary(task):
    name, path, args = task
    return UNARY[name](path, args)


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(result) -> str:
    return result if isinstance(result, str) else canonical(result)


def run(args) -> None:
    if args.command in UNARY:
        files = args.files
        tasks = [(args.command, f, args) for f in files]
        if args.jobs > 1 and len(files) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_unary, tasks))
        else:
            results = [_run_unary(t) for t in tasks]
        if len(files) == 1:
            result, cert = results[0]
        else:
            result = {f: r for f, (r, _) in zip(files, results)}
            cert = {f: c for f, (_, c) in zip(files, results)}
    else:
        result, cert = args.func(args)
    _emit(_render(result), args.output)
    if args.verify:
        sys.stderr.write(canonical({"certificate": cert}))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors here; --help still exits 0
        return 1 if exc.code else 0
    try:
        run(args)
    except (InputError, LinkageSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionFailed as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
