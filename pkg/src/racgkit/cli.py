"""Command-line front end.

Complex arguments are JSON files, ``-`` for stdin, or ``corpus:NAME`` for a
built-in example.  Exit codes: 0 success, 2 bad input or failed
precondition, 3 an internal consistency check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import corpus, coxeter, davis, fibration, homology, l2, sphere2
from .errors import LemmaViolation, ParseError, PreconditionError, RacgError, ResourceLimitError
from .homology import render
from .simplicial import FlagComplex, as_simplicial, from_json, is_flag, to_flag

SUB = str.maketrans("0123456789-", "₀₁₂₃₄₅₆₇₈₉₋")


def beta(i) -> str:
    return "β" + str(i).translate(SUB)


# -- input --------------------------------------------------------------------

def _read_text(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    try:
        with open(src) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"{src}: {exc.strerror}") from exc


def load_complex(src: str, args, flag: bool = True):
    """A :class:`FlagComplex` (or general complex with ``flag=False``) from ``src``."""
    if src.startswith("corpus:"):
        L = corpus.get(src[len("corpus:"):])
        return L if flag else L.to_simplicial()
    try:
        return from_json(_read_text(src), want_flag=flag, assume_flag=getattr(args, "assume_flag", False))
    except ParseError as exc:
        raise ParseError(f"{src}: {exc}") from exc


def load_json(src: str):
    try:
        return json.loads(_read_text(src))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{src}: line {exc.lineno}: {exc.msg}") from exc


class Out:
    """Collects a JSON document and the matching text lines."""

    def __init__(self, args):
        self.json = args.json
        self.doc: dict = {}
        self.lines: list[str] = []

    def put(self, key, value, text=None):
        self.doc[key] = value
        if text is not False:
            self.lines.append(text if text is not None else f"{key}: {value}")

    def line(self, text):
        self.lines.append(text)

    def emit(self):
        if self.json:
            print(json.dumps(self.doc, indent=2, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _bool(b) -> str:
    return "true" if b else "false"


# -- commands ------------------------------------------------------------------

def cmd_info(args, out):
    K = load_complex(args.file, args, flag=False)
    out.put("f_vector", list(K.f_vector), "f-vector: " + " ".join(map(str, K.f_vector)))
    out.put("dim", K.dim)
    out.put("flag", is_flag(K), f"flag: {_bool(is_flag(K))}")
    out.put("kappa", render(davis.kappa(K)))


def cmd_homology(args, out):
    K = load_complex(args.file, args, flag=False)
    b = homology.betti(K)
    out.put("betti", b.render(), "betti: " + " ".join(b.render()))
    rb = homology.reduced_betti(K)
    out.put("reduced_betti", {str(k): v for k, v in rb.items()},
            "reduced: " + (" ".join(f"{k}:{v}" for k, v in rb.items()) or "0"))


def cmd_ghs(args, out):
    K = load_complex(args.file, args, flag=False)
    n = K.dim if args.n is None else args.n
    out.put("ghs", homology.is_GHS(K, n), f"GHS^{n}: {_bool(homology.is_GHS(K, n))}")


def cmd_ghd(args, out):
    K = load_complex(args.file, args, flag=False)
    B = load_complex(args.boundary, args, flag=False)
    n = K.dim if args.n is None else args.n
    r = homology.is_GHD(K, B, n)
    out.put("ghd", r, f"GHD^{n}: {_bool(r)}")


def cmd_pseudomanifold(args, out):
    K = load_complex(args.file, args, flag=False)
    r = homology.is_pseudomanifold(K)
    out.put("pseudomanifold", r, f"pseudomanifold: {_bool(r)}")


def cmd_spherical_links(args, out):
    K = load_complex(args.file, args, flag=False)
    r = homology.spherical_links_codim(K, args.m)
    out.put("spherical_links", r, f"spherical links in codimension <= {args.m}: {_bool(r)}")


def cmd_ball_check(args, out):
    K = load_complex(args.file, args, flag=False)
    r = homology.is_homology_ball(K)
    out.put("homology_ball", r.homology, False)
    out.put("collapsible", r.collapsible, False)
    out.put("verdict", r.verdict, r.verdict)


def _words_from(W, text):
    return [tuple(w) if isinstance(w, list) else W.names(W.parse(w)) for w in text]


def cmd_racg(args, out):
    L = load_complex(args.file, args)
    W = coxeter.RACG(L)
    if args.racg_cmd == "nf":
        nf = coxeter.normal_form(W, args.word)
        out.put("normal_form", list(nf), ".".join(nf) or "e")
        out.put("length", len(nf), False)
    elif args.racg_cmd == "ball":
        b = coxeter.ball(W, args.N)
        out.put("count", len(b), f"{len(b)} elements")
        out.put("elements", [".".join(w) or "e" for w in b], False)
        for w in b:
            out.line(".".join(w) or "e")
    elif args.racg_cmd == "cosets":
        P = coxeter.spherical_cosets(W, args.N)
        items = [{"rep": ".".join(c.rep) or "e", "simplex": list(c.simplex)} for c in P]
        out.put("count", len(P), f"{len(P)} spherical cosets")
        out.put("cosets", items, False)
        for c in items:
            out.line(f"{c['rep']} W{{{','.join(c['simplex'])}}}")
    elif args.racg_cmd == "nerve":
        if args.chambers.lstrip().startswith("["):
            try:
                C = json.loads(args.chambers)
            except json.JSONDecodeError as exc:
                raise ParseError(f"--chambers: column {exc.colno}: {exc.msg}") from exc
        else:
            C = load_json(args.chambers)
        if not isinstance(C, list):
            raise ParseError("chambers file must be a JSON list of words")
        walls = coxeter.supporting_walls(W, [W.parse(c) for c in C])
        N = coxeter.nerve_of_convex_union(W, [W.parse(c) for c in C])
        out.put("supporting_walls", [".".join(r) for r in walls], False)
        out.put("nerve", {"format": "flag-graph", "vertices": list(N.vertices),
                          "edges": [list(e) for e in N.sorted_edges()]}, False)
        out.line(f"{len(walls)} supporting walls; nerve f-vector "
                 + " ".join(map(str, N.f_vector)))
        for r in walls:
            out.line(".".join(r))


def cmd_kappa(args, out):
    L = load_complex(args.file, args, flag=False)
    out.put("kappa", render(davis.kappa(L)), render(davis.kappa(L)))


def _emit_cubical(X, args, out):
    if args.format == "off":
        out.put("off", X.to_off(), X.to_off().rstrip("\n"))
    elif args.format == "cells":
        out.put("cells", X.to_json(), json.dumps(X.to_json(), indent=1))
    else:
        out.put("counts", list(X.counts), "cells by dimension: " + " ".join(map(str, X.counts)))
        out.put("euler_characteristic", X.euler_characteristic())


def cmd_davis_ball(args, out):
    W = coxeter.RACG(load_complex(args.file, args))
    X = davis.davis_ball(W, args.N, truncation=args.truncation)
    _emit_cubical(X, args, out)


def cmd_cover(args, out):
    X = davis.commutator_cover(load_complex(args.file, args))
    _emit_cubical(X, args, out)


def cmd_npc(args, out):
    L = load_complex(args.file, args)
    X = davis.commutator_cover(L)
    r = davis.npc_check(X)
    out.put("npc", r, f"all vertex links flag: {_bool(r)}")
    m = davis.links_match_nerve(X, L)
    out.put("links_isomorphic_to_nerve", m, f"every vertex link isomorphic to L: {_bool(m)}")


def cmd_chi(args, out):
    L = load_complex(args.file, args)
    r = davis.chi_orb_consistency(L)
    out.put("chi", r.chi, f"chi(P_L) = {r.chi}")
    out.put("predicted", render(r.predicted), f"2^{r.p} * kappa = {render(r.predicted)}")
    out.put("ok", r.ok, f"consistent: {_bool(r.ok)}")
    if not r.ok:
        raise LemmaViolation("chi(P_L) differs from 2^p kappa(L)")


def _l2_lines(r, out):
    out.put("betti", r.render(), False)
    out.put("provenance", list(r.provenance), False)
    for i, (v, why) in enumerate(zip(r.render(), r.provenance)):
        out.line(f"{beta(i)} = {v}    [{why}]")
    if r.relative is not None:
        out.put("relative_betti", r.relative.render(), False)
        for i, v in enumerate(r.relative.render()):
            out.line(f"{beta(i)}(A, ∂A) = {v}")
    if r.fvector is not None:
        out.put("kappa", render(r.kappa), f"kappa = {render(r.kappa)}")
    for n in r.notes:
        out.line("note: " + n)
    out.put("complete", r.complete, False)


def cmd_l2(args, out):
    if (args.expr is None) == (args.recognize is None):
        raise PreconditionError("give exactly one of --expr or --recognize")
    if args.expr is not None:
        e = l2.parse_expr(args.expr)
        out.put("expr", str(e), False)
        r = l2.l2_betti(e)
    else:
        L = load_complex(args.recognize, args)
        e = l2.recognize(L)
        out.put("expr", None if e is None else str(e), f"recognized: {e if e is not None else 'unknown'}")
        r = l2.complex_l2(L)
    _l2_lines(r, out)


def cmd_atiyah(args, out):
    if args.expr is not None:
        r = l2.l2_betti(l2.parse_expr(args.expr))
    elif args.file is not None:
        r = l2.complex_l2(load_complex(args.file, args))
    else:
        raise PreconditionError("give a complex or --expr")
    rep = l2.atiyah_check(r)
    out.put("alternating_sum", render(rep.alternating_sum), f"sum (-1)^i beta_i = {render(rep.alternating_sum)}")
    out.put("kappa", render(rep.kappa), f"kappa = {render(rep.kappa)}")
    out.put("independent", rep.independent, False)
    out.put("ok", rep.ok, f"consistent: {_bool(rep.ok)}")
    if not rep.ok:
        raise LemmaViolation("Atiyah's formula fails")


def cmd_certify(args, out):
    S = load_complex(args.file, args)
    cert = sphere2.certify(S)
    sphere2.verify_certificate(cert)
    summ = sphere2.certificate_summary(cert)
    out.put("summary", summ, f"certificate: {summ['root']} (depth {summ['depth']}; "
            + ", ".join(f"{k} x{v}" for k, v in sorted(summ["nodes"].items())) + ")")
    out.put("verified", True, "validator: ok")
    if args.emit_cert:
        with open(args.emit_cert, "w") as fh:
            json.dump(cert, fh, indent=1, sort_keys=True)
        out.line(f"wrote {args.emit_cert}")


def cmd_verify(args, out):
    cert = load_json(args.cert)
    sphere2.verify_certificate(cert)
    out.put("verified", True, "certificate ok")


def _parse_signs(text: str) -> list[int]:
    signs = []
    for ch in text.replace(",", ""):
        if ch == "+":
            signs.append(1)
        elif ch == "-":
            signs.append(-1)
        elif not ch.isspace():
            raise ParseError(f"orientation: unexpected character {ch!r}; use + and -")
    return signs


def cmd_fibration(args, out):
    if args.fib_cmd == "local-model":
        n, l = args.n, args.l
        B = fibration.ball_B(n, l)
        bd = fibration.boundary_B(n, l)
        r = homology.is_homology_ball(B)
        out.put("quadrants", fibration.quadrant_count(n), f"quadrants: {fibration.quadrant_count(n)}")
        out.put("B_f_vector", list(B.f_vector), "B(l) f-vector: " + " ".join(map(str, B.f_vector)))
        out.put("B_ball", r.verdict, f"B(l): {r.verdict}")
        out.put("boundary_f_vector", list(bd.f_vector),
                "boundary f-vector: " + " ".join(map(str, bd.f_vector)))
        sph = homology.has_sphere_homology(bd, n - 2)
        out.put("boundary_sphere", sph, f"boundary is a homology {n - 2}-sphere: {_bool(sph)}")
        return
    W = coxeter.RACG(load_complex(args.file, args))
    D = fibration.doubling_domain(W)
    classes = fibration.hypersurface_classes(D)
    if args.fib_cmd == "domain":
        pairing = fibration.face_pairing(D)
        out.put("chambers", [".".join(w) or "e" for w in D.names()], f"{len(D)} chambers")
        out.put("boundary_faces", len(pairing), f"{len(pairing)} boundary faces, paired")
        out.put("classes", [fibration.class_label(W, c) for c in classes],
                f"{len(classes)} hypersurface classes: "
                + " ".join(fibration.class_label(W, c) for c in classes))
    elif args.fib_cmd == "dplus":
        signs = _parse_signs(args.orient)
        rep = fibration.dplus_check(W, D, signs)
        out.put("orientation", rep.orientation, False)
        out.put("positive_walls", rep.positive_walls, "positive walls: " + " ".join(rep.positive_walls))
        out.put("is_disk", rep.is_disk, f"D+ is a disk: {_bool(rep.is_disk)}")
        out.put("verdict", rep.verdict, rep.verdict)
    elif args.fib_cmd == "search":
        o = fibration.search_orientations(W, D)
        if o is None:
            out.put("orientation", None, f"no orientation of the {len(classes)} classes gives a disk")
        else:
            signs = "".join("+" if o[c] > 0 else "-" for c in classes)
            out.put("orientation", signs, f"orientation {signs} gives a disk")


def cmd_corpus(args, out):
    if args.name is None:
        out.put("names", corpus.names(), "\n".join(corpus.names()))
        return
    L = corpus.get(args.name)
    doc = {"format": "flag-graph", "vertices": list(L.vertices), "edges": [list(e) for e in L.sorted_edges()]}
    out.put("complex", doc, json.dumps(doc))


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--assume-flag", action="store_true",
                        help="accept simplicial input without checking flagness")
    p = argparse.ArgumentParser(prog="racgkit", parents=[common],
                                description="Invariants of right-angled Coxeter groups and Davis complexes.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, file=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if file:
            sp.add_argument("file", help="JSON file, '-' or corpus:NAME")
        sp.set_defaults(fn=fn)
        return sp

    add("info", cmd_info, "f-vector, dimension, flagness")
    add("homology", cmd_homology, "rational Betti numbers")
    add("ghs-check", cmd_ghs, "generalized homology sphere test").add_argument("-n", type=int)
    sp = add("ghd-check", cmd_ghd, "generalized homology disk test")
    sp.add_argument("--boundary", required=True)
    sp.add_argument("-n", type=int)
    add("pseudomanifold", cmd_pseudomanifold, "pseudomanifold test")
    add("spherical-links", cmd_spherical_links, "spherical links up to a codimension").add_argument(
        "-m", type=int, required=True)
    add("ball-check", cmd_ball_check, "homology ball and collapsibility")

    sp = add("racg", cmd_racg, "Coxeter group computations", file=False)
    rs = sp.add_subparsers(dest="racg_cmd", required=True)
    r = rs.add_parser("nf", parents=[common])
    r.add_argument("file")
    r.add_argument("word", help="generators separated by spaces or dots")
    for name in ("ball", "cosets"):
        r = rs.add_parser(name, parents=[common])
        r.add_argument("file")
        r.add_argument("-N", type=int, required=True)
    r = rs.add_parser("nerve", parents=[common])
    r.add_argument("file")
    r.add_argument("--chambers", required=True, help="JSON list of words, inline or as a file")

    add("kappa", cmd_kappa, "the Euler characteristic kappa(L)")
    for name, fn, h in (("davis-ball", cmd_davis_ball, "finite ball of the Davis complex"),
                        ("commutator-cover", cmd_cover, "the cubical complex P_L")):
        sp = add(name, fn, h)
        sp.add_argument("--format", choices=("summary", "cells", "off"), default="summary")
        if name == "davis-ball":
            sp.add_argument("-N", type=int, required=True)
            sp.add_argument("--truncation", choices=("vertices", "representatives"), default="vertices")
    add("npc-check", cmd_npc, "link condition on P_L")
    add("chi-check", cmd_chi, "chi(P_L) = 2^p kappa(L)")

    sp = add("l2", cmd_l2, "closed-form l2-Betti numbers", file=False)
    sp.add_argument("--expr")
    sp.add_argument("--recognize", metavar="FILE")
    sp = add("atiyah-check", cmd_atiyah, "Atiyah's formula cross-check", file=False)
    sp.add_argument("file", nargs="?")
    sp.add_argument("--expr")

    sp = add("certify-s2", cmd_certify, "vanishing certificate for a flag 2-sphere")
    sp.add_argument("--emit-cert", metavar="PATH")
    sp = add("verify-cert", cmd_verify, "re-check a certificate", file=False)
    sp.add_argument("cert")

    sp = add("fibration", cmd_fibration, "local model and fibration criterion", file=False)
    fs = sp.add_subparsers(dest="fib_cmd", required=True)
    f = fs.add_parser("local-model", parents=[common])
    f.add_argument("-n", type=int, required=True)
    f.add_argument("-l", type=int, required=True)
    for name in ("domain", "dplus", "search"):
        f = fs.add_parser(name, parents=[common])
        f.add_argument("file")
        if name == "dplus":
            f.add_argument("--orient", required=True, help="one sign per class, e.g. '+-'")

    sp = add("corpus", cmd_corpus, "list or print built-in complexes", file=False)
    sp.add_argument("name", nargs="?")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args)
    try:
        args.fn(args, out)
    except LemmaViolation as exc:
        print(f"error: internal consistency check failed: {exc}", file=sys.stderr)
        return 3
    except (PreconditionError, ParseError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RacgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.emit()
    return 0


if __name__ == "__main__":
    sys.exit(main())
