"""Closed-form l^2-Betti numbers of right-angled Coxeter groups.

Values are computed from an expression tree (:class:`Expr`) by exact rules:
the empty set, simplices, ``k`` points, m-gons, cones, suspensions, joins
(Kunneth), disjoint unions, doubles along a vertex and planar surfaces with
holes.  A degree no rule determines stays unknown (``None``).  When a node
has exactly one unknown degree and its f-vector is known, Atiyah's formula
``sum (-1)^i beta_i = kappa`` solves it.

Every result carries a provenance string per degree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NotPureError, ParseError, PreconditionError, LemmaViolation
from .homology import BettiVector, is_GHS, is_pseudomanifold, render
from .simplicial import (FlagComplex, FVector, convolve_fvectors, cone, disjoint_union,
                         double_along_vertex, full_subcomplex, join, points, polygon,
                         simplex, suspension)

HALF = Fraction(1, 2)


# -- expression tree ------------------------------------------------------------

class Expr:
    """Base class of l2 expressions; subclasses are frozen dataclasses."""

    def realize(self) -> FlagComplex:
        raise PreconditionError(f"{self} has no concrete realization")


@dataclass(frozen=True)
class Empty(Expr):
    def __str__(self):
        return "(empty)"

    def realize(self):
        return FlagComplex()


@dataclass(frozen=True)
class Simplex(Expr):
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise PreconditionError("simplex dimension must be >= 0")

    def __str__(self):
        return f"(simplex {self.k})"

    def realize(self):
        return simplex(self.k)


@dataclass(frozen=True)
class Points(Expr):
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise PreconditionError("number of points must be >= 0")

    def __str__(self):
        return f"(points {self.k})"

    def realize(self):
        return points(self.k)


@dataclass(frozen=True)
class MGon(Expr):
    m: int

    def __post_init__(self):
        if self.m < 4:
            raise PreconditionError(f"a {self.m}-gon is not flag; need m >= 4")

    def __str__(self):
        return f"(mgon {self.m})"

    def realize(self):
        return polygon(self.m)


@dataclass(frozen=True)
class Cone(Expr):
    e: Expr

    def __str__(self):
        return f"(cone {self.e})"

    def realize(self):
        return cone(self.e.realize())


@dataclass(frozen=True)
class Susp(Expr):
    e: Expr

    def __str__(self):
        return f"(susp {self.e})"

    def realize(self):
        return suspension(self.e.realize())


@dataclass(frozen=True)
class Join(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"(join {self.a} {self.b})"

    def realize(self):
        return join(self.a.realize(), self.b.realize())


@dataclass(frozen=True)
class DisjointUnion(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"(union {self.a} {self.b})"

    def realize(self):
        return disjoint_union(self.a.realize(), self.b.realize())


@dataclass(frozen=True)
class DoubleV(Expr):
    e: Expr
    v: str

    def __str__(self):
        return f"(double {self.e} {self.v})"

    def realize(self):
        L = self.e.realize()
        if self.v not in L.index:
            raise PreconditionError(f"{self.v!r} is not a vertex of {self.e}")
        return double_along_vertex(L, self.v)


@dataclass(frozen=True)
class PlanarHoles(Expr):
    """A flag 2-sphere with ``g + 1`` holes bounded by the given m-gons."""

    g: int
    ms: tuple

    def __post_init__(self):
        object.__setattr__(self, "ms", tuple(self.ms))
        if self.g < 0:
            raise PreconditionError("g must be >= 0")
        if len(self.ms) != self.g + 1:
            raise PreconditionError(f"need g+1 = {self.g + 1} boundary cycles, got {len(self.ms)}")
        if any(m < 4 for m in self.ms):
            raise PreconditionError("boundary cycles must have length >= 4 (flagness)")

    def __str__(self):
        return f"(planar {self.g} " + " ".join(map(str, self.ms)) + ")"


@dataclass(frozen=True, eq=False)
class Opaque(Expr):
    """A concrete complex no constructor describes; values come from other rules."""

    L: FlagComplex

    def __eq__(self, other):
        return isinstance(other, Opaque) and self.L == other.L

    def __hash__(self):
        return hash(self.L)

    def __str__(self):
        return f"(complex {len(self.L.vertices)} vertices)"

    def realize(self):
        return self.L


# -- results ---------------------------------------------------------------------

@dataclass(frozen=True)
class L2Result:
    betti: BettiVector
    provenance: tuple
    fvector: FVector | None = None
    relative: BettiVector | None = None
    notes: tuple = field(default=())

    @property
    def complete(self) -> bool:
        return self.betti.complete

    @property
    def kappa(self) -> Fraction | None:
        if self.fvector is None:
            return None
        return sum((Fraction(-1, 2) ** (k + 1) * n for k, n in enumerate(self.fvector, start=-1)),
                   Fraction(0))

    def __getitem__(self, i):
        return self.betti[i]

    def render(self) -> list[str]:
        return self.betti.render()

    def to_json(self) -> dict:
        out = {
            "betti": self.render(),
            "provenance": list(self.provenance),
            "complete": self.complete,
        }
        if self.fvector is not None:
            out["f_vector"] = list(self.fvector)
            out["kappa"] = render(self.kappa)
        if self.relative is not None:
            out["relative_betti"] = self.relative.render()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _fv_is_simplex(fv: FVector | None) -> bool:
    if fv is None:
        return False
    n = fv[0] if len(fv) > 1 else 0
    return n > 0 and len(fv) == n + 1 and fv[n - 1] == 1


def _simplex_fv(k: int) -> FVector:
    from math import comb
    return FVector([comb(k + 1, j) for j in range(k + 2)])


class _Node:
    """Mutable per-degree table used while evaluating one expression node."""

    def __init__(self, top: int, fv: FVector | None):
        self.vals: list = [None] * (top + 1)
        self.prov: list = ["unknown"] * (top + 1)
        self.fv = fv

    def set(self, i, v, why):
        if i >= len(self.vals):
            if v != 0:
                raise LemmaViolation(f"nonzero value {v} above the top degree")
            return
        if self.vals[i] is not None:
            if self.vals[i] != v:
                raise LemmaViolation(f"degree {i}: rules disagree ({self.vals[i]} vs {v})")
            return
        self.vals[i] = Fraction(v)
        self.prov[i] = why

    def finish(self, nonempty_nonsimplex: bool, relative=None, notes=()) -> L2Result:
        if nonempty_nonsimplex and self.vals:
            self.set(0, 0, "beta_0 vanishing (infinite group)")
        unknown = [i for i, v in enumerate(self.vals) if v is None]
        if len(unknown) == 1 and self.fv is not None:
            i = unknown[0]
            k = sum((Fraction(-1, 2) ** (j + 1) * n for j, n in enumerate(self.fv, start=-1)),
                    Fraction(0))
            rest = sum(((-1) ** j * v for j, v in enumerate(self.vals) if v is not None), Fraction(0))
            v = (k - rest) * (-1) ** i
            if v < 0:
                raise LemmaViolation(f"Atiyah completion gives negative value {v} in degree {i}")
            self.set(i, v, "Atiyah completion")
        return L2Result(BettiVector(tuple(self.vals)), tuple(self.prov), self.fv, relative, tuple(notes))


def _as_list(r: L2Result, top: int) -> list:
    return [r.betti[i] for i in range(top + 1)]


@lru_cache(maxsize=4096)
def l2_betti(e: Expr) -> L2Result:
    """Evaluate the rules on an expression; degrees run ``0 .. dim + 1``.

    >>> l2_betti(Join(Points(3), Points(3))).render()
    ['0', '0', '1/4', '0']
    """
    if isinstance(e, Empty):
        n = _Node(0, FVector([1]))
        n.set(0, 1, "empty set")
        return n.finish(False)
    if isinstance(e, Simplex):
        n = _Node(e.k + 1, _simplex_fv(e.k))
        n.set(0, HALF ** (e.k + 1), "simplex")
        for i in range(1, e.k + 2):
            n.set(i, 0, "simplex")
        return n.finish(False)
    if isinstance(e, Points):
        if e.k == 0:
            return l2_betti(Empty())
        if e.k == 1:
            return l2_betti(Simplex(0))
        n = _Node(1, FVector([1, e.k]))
        n.set(0, 0, "k points")
        n.set(1, Fraction(e.k, 2) - 1, "k points")
        return n.finish(True)
    if isinstance(e, MGon):
        n = _Node(2, FVector([1, e.m, e.m]))
        n.set(2, 0, "top-degree vanishing (pseudomanifold)")
        return n.finish(True)
    if isinstance(e, Cone):
        r = l2_betti(e.e)
        fv = None if r.fvector is None else convolve_fvectors(r.fvector, [1, 1])
        n = _Node(len(r.betti), fv)
        for i in range(len(n.vals)):
            v = r.betti[i]
            if v is not None:
                n.set(i, v * HALF, "cone halving")
        return n.finish(not _fv_is_simplex(fv))
    if isinstance(e, Susp):
        r = l2_betti(e.e)
        fv = None if r.fvector is None else convolve_fvectors(r.fvector, [1, 2])
        n = _Node(len(r.betti), fv)
        for i in range(len(n.vals)):
            n.set(i, 0, "suspension")
        return n.finish(True)
    if isinstance(e, Join):
        ra, rb = l2_betti(e.a), l2_betti(e.b)
        fv = None if ra.fvector is None or rb.fvector is None else \
            convolve_fvectors(ra.fvector, rb.fvector)
        top = len(ra.betti) + len(rb.betti) - 2
        n = _Node(top, fv)
        za = ra.complete and not any(ra.betti)
        zb = rb.complete and not any(rb.betti)
        for k in range(top + 1):
            if za or zb:
                n.set(k, 0, "join with an l2-acyclic factor")
                continue
            acc, ok = Fraction(0), True
            for i in range(k + 1):
                x, y = ra.betti[i], rb.betti[k - i]
                if x == 0 or y == 0:
                    continue
                if x is None or y is None:
                    ok = False
                    break
                acc += x * y
            if ok:
                n.set(k, acc, "join (Kunneth)")
        return n.finish(not _fv_is_simplex(fv))
    if isinstance(e, DisjointUnion):
        if isinstance(e.a, Empty):
            return l2_betti(e.b)
        if isinstance(e.b, Empty):
            return l2_betti(e.a)
        ra, rb = l2_betti(e.a), l2_betti(e.b)
        fv = None
        if ra.fvector is not None and rb.fvector is not None:
            m = max(len(ra.fvector), len(rb.fvector))
            fa = list(ra.fvector) + [0] * (m - len(ra.fvector))
            fb = list(rb.fvector) + [0] * (m - len(rb.fvector))
            fv = FVector([1] + [x + y for x, y in zip(fa[1:], fb[1:])])
        top = max(len(ra.betti), len(rb.betti), 2) - 1
        n = _Node(top, fv)
        for i in range(2, top + 1):
            x, y = ra.betti[i], rb.betti[i]
            if x is not None and y is not None:
                n.set(i, x + y, "disjoint union")
        notes = []
        if not (_fv_is_simplex(ra.fvector) or _fv_is_simplex(rb.fvector)) \
                and ra.fvector is not None and rb.fvector is not None:
            x, y = ra.betti[1], rb.betti[1]
            if x is not None and y is not None:
                n.set(1, x + y + 1, "disjoint union")
        else:
            notes.append("beta_1 of a disjoint union with a simplex side is not given by a rule")
        return n.finish(True, notes=notes)
    if isinstance(e, DoubleV):
        r = l2_betti(e.e)
        D = e.realize()
        n = _Node(len(r.betti) - 1, D.f_vector)
        for i, v in enumerate(r.betti):
            if v is not None:
                n.set(i, 2 * v, "double (index-2 subgroup)")
        return n.finish(bool(D.vertices) and not _fv_is_simplex(D.f_vector))
    if isinstance(e, PlanarHoles):
        alpha = HALF * sum(l2_betti(MGon(m)).betti[1] for m in e.ms)
        n = _Node(3, None)
        for i in range(4):
            n.set(i, alpha if i == 1 else 0, "planar surface with holes")
        rel = BettiVector(tuple(e.g + alpha if i == 2 else 0 for i in range(4)))
        return n.finish(True, relative=rel)
    if isinstance(e, Opaque):
        return complex_betti_leaf(e.L)
    raise PreconditionError(f"unknown expression {e!r}")


def planar_betti(g: int, ms: Sequence[int]) -> L2Result:
    return l2_betti(PlanarHoles(g, tuple(ms)))


# -- concrete complexes ---------------------------------------------------------

def _is_simplex(L: FlagComplex) -> bool:
    n = len(L.vertices)
    return n > 0 and len(L.edges) == n * (n - 1) // 2


def vanishing_rules(L: FlagComplex) -> L2Result:
    """Degrees fixed by the two vanishing rules; all other degrees unknown."""
    n = _Node(L.dim + 1, None)
    if L.vertices and not _is_simplex(L):
        n.set(0, 0, "beta_0 vanishing (infinite group)")
    try:
        pm = L.dim >= 0 and is_pseudomanifold(L)
    except NotPureError:
        pm = False
    if pm:
        n.set(L.dim + 1, 0, "top-degree vanishing (pseudomanifold)")
    return L2Result(BettiVector(tuple(n.vals)), tuple(n.prov), L.f_vector)


def complex_betti_leaf(L: FlagComplex) -> L2Result:
    base = vanishing_rules(L)
    n = _Node(L.dim + 1, L.f_vector)
    for i, (v, why) in enumerate(zip(base.betti, base.provenance)):
        if v is not None:
            n.set(i, v, why)
    notes = []
    if L.dim == 2 and is_GHS(L, 2):
        for i in range(len(n.vals)):
            n.set(i, 0, "flag 2-sphere theorem")
        notes.append("flag triangulated 2-sphere; see sphere2.certify for a reduction certificate")
    return n.finish(bool(L.vertices) and not _is_simplex(L), notes=notes)


def _components(vertices, adj) -> list[list]:
    seen, out = set(), []
    for v in vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        order = {u: i for i, u in enumerate(vertices)}
        out.append(sorted(comp, key=order.__getitem__))
    return out


def _nest(cls, parts: list) -> Expr:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(p, out)
    return out


def recognize(L: FlagComplex, partial: bool = False) -> Expr | None:
    """Describe ``L`` by constructors, or ``None`` if some piece is unrecognised.

    With ``partial`` unrecognised pieces become :class:`Opaque` leaves instead.
    """
    vs = L.vertices
    n = len(vs)
    if n == 0:
        return Empty()
    if _is_simplex(L):
        return Simplex(n - 1)
    if not L.edges:
        return Points(n)
    degs = [len(L.adj[v]) for v in vs]
    if n >= 4 and all(d == 2 for d in degs) and len(_components(vs, L.neighbors)) == 1:
        return MGon(n)
    for v in vs:
        if len(L.adj[v]) == n - 1:
            rest = recognize(full_subcomplex(L, [u for u in vs if u != v]), partial)
            return None if rest is None else Cone(rest)
    comp = _components(vs, lambda x: [u for u in vs if u != x and u not in L.adj[x]])
    if len(comp) > 1:
        parts = [recognize(full_subcomplex(L, c), partial) for c in comp]
        return None if any(p is None for p in parts) else _nest(Join, parts)
    conn = _components(vs, L.neighbors)
    if len(conn) > 1:
        parts = [recognize(full_subcomplex(L, c), partial) for c in conn]
        return None if any(p is None for p in parts) else _nest(DisjointUnion, parts)
    return Opaque(L) if partial else None


def complex_l2(L: FlagComplex) -> L2Result:
    """Best available values for a concrete flag complex.

    Recognised structure is evaluated by the rules; the remaining pieces use
    the vanishing rules and the flag 2-sphere theorem.  The f-vector of the
    whole complex then allows one last Atiyah completion.
    """
    r = l2_betti(recognize(L, partial=True))
    n = _Node(L.dim + 1, L.f_vector)
    for i, (v, why) in enumerate(zip(r.betti, r.provenance)):
        if v is not None:
            n.set(i, v, why)
    return n.finish(bool(L.vertices) and not _is_simplex(L), notes=r.notes)


# -- Atiyah check ----------------------------------------------------------------

@dataclass(frozen=True)
class AtiyahReport:
    alternating_sum: Fraction
    kappa: Fraction
    independent: bool

    @property
    def ok(self) -> bool:
        return self.alternating_sum == self.kappa

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"alternating_sum": render(self.alternating_sum), "kappa": render(self.kappa),
                "ok": self.ok, "independent": self.independent}


def atiyah_check(x) -> AtiyahReport:
    """Compare ``sum (-1)^i beta_i`` with ``kappa``.

    ``independent`` is False when some degree was itself solved from Atiyah's
    formula, in which case agreement is automatic.
    """
    r = x if isinstance(x, L2Result) else complex_l2(x) if isinstance(x, FlagComplex) else l2_betti(x)
    if not r.complete:
        raise PreconditionError("Atiyah check needs every degree known")
    if r.fvector is None:
        raise PreconditionError("f-vector unknown for this expression")
    return AtiyahReport(r.betti.euler_characteristic(), r.kappa,
                        "Atiyah completion" not in r.provenance)


def denominators_ok(r: L2Result) -> bool:
    """Every known value has denominator dividing ``2^(dim+1)``."""
    if r.fvector is None:
        return True
    bound = 2 ** (len(r.fvector) - 1)
    return all(v is None or bound % v.denominator == 0 for v in r.betti)


# -- s-expressions ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"column {pos + 1}: unexpected character")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_expr(text: str) -> Expr:
    """Parse ``(join (points 3) (mgon 5))`` style expressions."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression")
    pos = 0

    def need_int(t):
        try:
            return int(t)
        except ValueError:
            raise ParseError(f"expected an integer, got {t!r}") from None

    def node():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of expression")
        if toks[pos] != "(":
            raise ParseError(f"expected '(' got {toks[pos]!r}")
        pos += 1
        if pos >= len(toks):
            raise ParseError("unexpected end of expression")
        head = toks[pos]
        pos += 1
        args = []
        while pos < len(toks) and toks[pos] != ")":
            if toks[pos] == "(":
                args.append(node())
            else:
                args.append(toks[pos])
                pos += 1
        if pos >= len(toks):
            raise ParseError("missing ')'")
        pos += 1
        return build(head, args)

    def exprs(head, args, k):
        if len(args) != k or not all(isinstance(a, Expr) for a in args):
            raise ParseError(f"({head} ...) takes {k} subexpression(s)")
        return args

    def build(head, args):
        try:
            if head == "empty":
                if args:
                    raise ParseError("(empty) takes no arguments")
                return Empty()
            if head in ("points", "simplex", "mgon"):
                if len(args) != 1 or isinstance(args[0], Expr):
                    raise ParseError(f"({head} k) takes one integer")
                k = need_int(args[0])
                return {"points": Points, "simplex": Simplex, "mgon": MGon}[head](k)
            if head == "cone":
                return Cone(*exprs(head, args, 1))
            if head == "susp":
                return Susp(*exprs(head, args, 1))
            if head in ("join", "union"):
                if len(args) < 2 or not all(isinstance(a, Expr) for a in args):
                    raise ParseError(f"({head} ...) takes at least two subexpressions")
                return _nest(Join if head == "join" else DisjointUnion, args)
            if head == "double":
                if len(args) != 2 or not isinstance(args[0], Expr) or isinstance(args[1], Expr):
                    raise ParseError("(double X v) takes an expression and a vertex name")
                return DoubleV(args[0], args[1])
            if head == "planar":
                if len(args) < 2 or any(isinstance(a, Expr) for a in args):
                    raise ParseError("(planar g m0 m1 ...) takes integers")
                return PlanarHoles(need_int(args[0]), tuple(need_int(a) for a in args[1:]))
        except PreconditionError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc)) from exc
        raise ParseError(f"unknown constructor {head!r}")

    e = node()
    if pos != len(toks):
        raise ParseError("trailing input after expression")
    return e


def conjectural_surface_prediction(genus: int) -> dict:
    """Conjectured values for a flag closed orientable surface of given genus.

    This is a prediction only: ``beta_2 = g`` and all other degrees zero.
    """
    return {"status": "conjectural prediction", "betti": [0, 0, genus, 0]}
