"""Finite flag and simplicial complexes.

A :class:`FlagComplex` is stored by its 1-skeleton only; its simplices are
the cliques of that graph, enumerated on demand and cached.  A
:class:`SimplicialComplex` is a general finite complex given by generating
simplices (closure is taken on construction).

Vertices are opaque strings.  Simplices are tuples of vertices sorted by the
complex's vertex order, which also fixes orientations for homology.
"""
from __future__ import annotations

import itertools
import json
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .errors import NotFlagError, ParseError, PreconditionError


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


class FVector(tuple):
    """Counts ``(f_-1, f_0, ..., f_dim)``; ``fv[k]`` is the number of k-simplices."""

    def __new__(cls, counts):
        counts = tuple(int(c) for c in counts)
        if not counts or counts[0] != 1:
            raise ValueError("f_-1 must be 1")
        return super().__new__(cls, counts)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return tuple(self)[k]
        if k < -1:
            raise IndexError(k)
        return tuple.__getitem__(self, k + 1) if k + 1 < len(self) else 0

    @property
    def dim(self) -> int:
        return len(self) - 2

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self[k] for k in range(self.dim + 1))

    def __repr__(self):
        return f"FVector{tuple(self)}"


def convolve_fvectors(f1: Sequence[int], f2: Sequence[int]) -> FVector:
    """f-vector of a join: ``f_k = sum_{i+j=k-1} f_i f_j`` with indices from -1."""
    out = [0] * (len(f1) + len(f2) - 1)
    for a, x in enumerate(f1):
        for b, y in enumerate(f2):
            out[a + b] += x * y
    return FVector(out)


class FlagComplex:
    """Flag complex determined by its 1-skeleton.

    >>> L = polygon(5)
    >>> L.f_vector
    FVector(1, 5, 5)
    """

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise PreconditionError("duplicate vertex")
        index = {v: i for i, v in enumerate(verts)}
        adj = {v: set() for v in verts}
        seen = set()
        for e in edges:
            a, b = (str(x) for x in e)
            if a == b:
                raise PreconditionError(f"loop at {a!r}")
            if a not in index or b not in index:
                raise PreconditionError(f"edge {a!r}-{b!r} uses an unknown vertex")
            key = frozenset((a, b))
            if key in seen:
                raise PreconditionError(f"duplicate edge {a!r}-{b!r}")
            seen.add(key)
            adj[a].add(b)
            adj[b].add(a)
        self.vertices = verts
        self.index = index
        self.edges = frozenset(seen)
        self.adj = {v: frozenset(n) for v, n in adj.items()}

    # -- basic structure -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FlagComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.edges == other.edges

    def __hash__(self):
        return hash((frozenset(self.vertices), self.edges))

    def __repr__(self):
        return f"FlagComplex(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __len__(self):
        return len(self.vertices)

    def sort(self, vs: Iterable[str]) -> tuple:
        return tuple(sorted(vs, key=self.index.__getitem__))

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted((self.sort(e) for e in self.edges),
                      key=lambda e: (self.index[e[0]], self.index[e[1]]))

    def neighbors(self, v: str) -> frozenset:
        return self.adj[v]

    def is_simplex(self, tau: Iterable[str]) -> bool:
        tau = list(tau)
        if any(v not in self.index for v in tau) or len(set(tau)) != len(tau):
            return False
        return all(b in self.adj[a] for a, b in itertools.combinations(tau, 2))

    @cached_property
    def simplices(self) -> tuple:
        """All simplices including the empty one, in lexicographic vertex order."""
        out = []
        order = self.index

        def extend(clique, cands):
            out.append(clique)
            for i, v in enumerate(cands):
                nv = self.adj[v]
                extend(clique + (v,), [u for u in cands[i + 1:] if u in nv])

        extend((), sorted(self.vertices, key=order.__getitem__))
        return tuple(out)

    @cached_property
    def f_vector(self) -> FVector:
        counts = [0] * (max((len(s) for s in self.simplices), default=0) + 1)
        for s in self.simplices:
            counts[len(s)] += 1
        return FVector(counts)

    @property
    def dim(self) -> int:
        return self.f_vector.dim

    @cached_property
    def maximal_simplices(self) -> tuple:
        """Maximal cliques via Bron-Kerbosch with pivoting."""
        found = []

        def bk(r, p, x):
            if not p and not x:
                found.append(self.sort(r))
                return
            pivot = max(p | x, key=lambda u: len(p & self.adj[u]))
            for v in sorted(p - self.adj[pivot], key=self.index.__getitem__):
                bk(r | {v}, p & self.adj[v], x & self.adj[v])
                p = p - {v}
                x = x | {v}

        if self.vertices:
            bk(frozenset(), frozenset(self.vertices), frozenset())
        return tuple(sorted(found, key=lambda s: [self.index[v] for v in s]))

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def to_simplicial(self) -> "SimplicialComplex":
        return SimplicialComplex(self.maximal_simplices, vertices=self.vertices)

    def relabel(self, mapping) -> "FlagComplex":
        f = mapping if callable(mapping) else mapping.__getitem__
        return FlagComplex([f(v) for v in self.vertices],
                           [(f(a), f(b)) for a, b in self.sorted_edges()])


class SimplicialComplex:
    """General finite simplicial complex, closed under taking faces."""

    def __init__(self, simplices: Iterable[Iterable] = (), vertices: Iterable | None = None):
        gens = [tuple(str(v) for v in s) for s in simplices]
        order = [str(v) for v in vertices] if vertices is not None else []
        seen = set(order)
        if len(seen) != len(order):
            raise PreconditionError("duplicate vertex")
        for s in gens:
            if len(set(s)) != len(s):
                raise PreconditionError(f"repeated vertex in simplex {s}")
            for v in s:
                if v not in seen:
                    if vertices is not None:
                        raise PreconditionError(f"simplex uses unknown vertex {v!r}")
                    seen.add(v)
                    order.append(v)
        self.vertices = tuple(order)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        faces = {frozenset([v]) for v in self.vertices}
        for s in gens:
            if frozenset(s) in faces:
                continue
            for k in range(1, len(s) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(s, k))
        self.faces = frozenset(faces)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.faces == other.faces

    def __hash__(self):
        return hash(self.faces)

    def __repr__(self):
        return f"SimplicialComplex(f={tuple(self.f_vector)})"

    def __contains__(self, simplex) -> bool:
        s = frozenset(simplex)
        return not s or s in self.faces

    def sort(self, vs: Iterable[str]) -> tuple:
        return tuple(sorted(vs, key=self.index.__getitem__))

    @cached_property
    def simplices(self) -> tuple:
        """Nonempty simplices ordered by dimension, then lexicographically."""
        return tuple(sorted((self.sort(f) for f in self.faces),
                            key=lambda s: (len(s), [self.index[v] for v in s])))

    def simplices_of_dim(self, k: int) -> list:
        return [s for s in self.simplices if len(s) == k + 1]

    @cached_property
    def f_vector(self) -> FVector:
        counts = [1]
        for s in self.simplices:
            while len(counts) <= len(s):
                counts.append(0)
            counts[len(s)] += 1
        return FVector(counts)

    @property
    def dim(self) -> int:
        return self.f_vector.dim

    @cached_property
    def maximal_simplices(self) -> tuple:
        cofaced = set()
        for f in self.faces:
            for v in f:
                cofaced.add(f - {v})
        return tuple(s for s in self.simplices if frozenset(s) not in cofaced)

    def is_pure(self) -> bool:
        return len({len(s) for s in self.maximal_simplices}) <= 1

    def one_skeleton(self) -> FlagComplex:
        return FlagComplex(self.vertices, [s for s in self.simplices if len(s) == 2])

    def link(self, tau: Iterable[str]) -> "SimplicialComplex":
        t = frozenset(str(v) for v in tau)
        if t and t not in self.faces:
            raise PreconditionError(f"{sorted(t)} is not a simplex")
        if not t:
            return self
        lk = [f - t for f in self.faces if t < f]
        verts = [v for v in self.vertices if frozenset([v]) in lk]
        return SimplicialComplex([self.sort(f) for f in lk], vertices=verts)

    def full_subcomplex(self, vs: Iterable[str]) -> "SimplicialComplex":
        keep = set(vs)
        verts = [v for v in self.vertices if v in keep]
        return SimplicialComplex([self.sort(f) for f in self.faces if f <= keep], vertices=verts)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.faces <= other.faces

    def relabel(self, mapping) -> "SimplicialComplex":
        f = mapping if callable(mapping) else mapping.__getitem__
        return SimplicialComplex([[f(v) for v in s] for s in self.maximal_simplices],
                                 vertices=[f(v) for v in self.vertices])


def as_simplicial(K) -> SimplicialComplex:
    return K.to_simplicial() if isinstance(K, FlagComplex) else K


# -- operations ---------------------------------------------------------------

def is_flag(K) -> bool:
    """True iff every clique of the 1-skeleton of ``K`` spans a simplex."""
    if isinstance(K, FlagComplex):
        return True
    skel = K.one_skeleton()
    return all(frozenset(c) in K.faces for c in skel.simplices if c)


def to_flag(K, assume_flag: bool = False) -> FlagComplex:
    if isinstance(K, FlagComplex):
        return K
    if not assume_flag and not is_flag(K):
        raise NotFlagError("complex is not flag")
    return K.one_skeleton()


def f_vector(L) -> FVector:
    return L.f_vector


def link(L: FlagComplex, tau: Iterable[str] = ()) -> FlagComplex:
    """Link of a simplex: the full subcomplex on vertices joinable to ``tau``."""
    tau = tuple(str(v) for v in tau)
    if not L.is_simplex(tau):
        raise PreconditionError(f"{tau} is not a simplex")
    if not tau:
        return L
    common = set(L.vertices)
    for v in tau:
        common &= L.adj[v]
    return full_subcomplex(L, common)


def star(L: FlagComplex, v: str) -> FlagComplex:
    return full_subcomplex(L, set(L.adj[v]) | {v})


def full_subcomplex(L: FlagComplex, T: Iterable[str]) -> FlagComplex:
    keep = {str(v) for v in T}
    unknown = keep - set(L.vertices)
    if unknown:
        raise PreconditionError(f"unknown vertices {sorted(unknown)}")
    verts = [v for v in L.vertices if v in keep]
    return FlagComplex(verts, [e for e in L.sorted_edges() if e[0] in keep and e[1] in keep])


def minus(L: FlagComplex, T: Iterable[str]) -> FlagComplex:
    """``L - T``: the full subcomplex spanned by the vertices outside ``T``."""
    drop = {str(v) for v in T}
    return full_subcomplex(L, [v for v in L.vertices if v not in drop])


def join(L1: FlagComplex, L2: FlagComplex) -> FlagComplex:
    """Join; vertex sets that clash are relabelled ``v#0`` / ``v#1``."""
    if set(L1.vertices) & set(L2.vertices):
        L1 = L1.relabel(lambda v: f"{v}#0")
        L2 = L2.relabel(lambda v: f"{v}#1")
    cross = [(a, b) for a in L1.vertices for b in L2.vertices]
    return FlagComplex(L1.vertices + L2.vertices,
                       L1.sorted_edges() + L2.sorted_edges() + cross)


def join_many(factors: Sequence[FlagComplex]) -> FlagComplex:
    out = FlagComplex()
    for f in factors:
        out = join(out, f)
    return out


def cone(L: FlagComplex, apex: str = "c") -> FlagComplex:
    apex = _fresh(apex, L.index)
    return join(L, FlagComplex([apex]))


def suspension(L: FlagComplex, poles: tuple[str, str] = ("n", "s")) -> FlagComplex:
    a = _fresh(poles[0], L.index)
    b = _fresh(poles[1], set(L.index) | {a})
    return join(L, FlagComplex([a, b]))


def disjoint_union(L1: FlagComplex, L2: FlagComplex) -> FlagComplex:
    if set(L1.vertices) & set(L2.vertices):
        L1 = L1.relabel(lambda v: f"{v}#0")
        L2 = L2.relabel(lambda v: f"{v}#1")
    return FlagComplex(L1.vertices + L2.vertices, L1.sorted_edges() + L2.sorted_edges())


def double_along_vertex(L: FlagComplex, v: str) -> FlagComplex:
    """Two copies of ``L - v`` glued along the link of ``v``.

    Vertices of the link keep their labels; the others become ``x#0``/``x#1``.
    """
    v = str(v)
    if v not in L.index:
        raise PreconditionError(f"unknown vertex {v!r}")
    lk = L.adj[v]
    rest = minus(L, [v])

    def copy(i):
        return lambda x: x if x in lk else f"{x}#{i}"

    verts, edges = [], []
    for i in (0, 1):
        f = copy(i)
        for x in rest.vertices:
            if f(x) not in verts:
                verts.append(f(x))
        for a, b in rest.sorted_edges():
            e = (f(a), f(b))
            if i == 1 and a in lk and b in lk:
                continue
            edges.append(e)
    return FlagComplex(verts, edges)


def valence(S: FlagComplex, v: str) -> int:
    return len(S.adj[str(v)])


def four_cycles(L: FlagComplex) -> list[tuple]:
    """All 4-cycles of the 1-skeleton, each once, in canonical rotation."""
    idx = L.index
    out = set()
    for a in L.vertices:
        for b, d in itertools.combinations(sorted(L.adj[a], key=idx.__getitem__), 2):
            for c in L.adj[b] & L.adj[d]:
                if c == a:
                    continue
                cyc = (a, b, c, d)
                out.add(canonical_cycle(cyc, idx))
    return sorted(out, key=lambda c: [idx[v] for v in c])


def canonical_cycle(cyc: Sequence[str], idx) -> tuple:
    n = len(cyc)
    i = min(range(n), key=lambda j: idx[cyc[j]])
    fwd = tuple(cyc[(i + k) % n] for k in range(n))
    bwd = tuple(cyc[(i - k) % n] for k in range(n))
    return min(fwd, bwd, key=lambda c: [idx[v] for v in c])


def empty_circuits_4(S: FlagComplex) -> list[tuple]:
    """4-circuits that are neither a vertex link nor bound two adjacent triangles.

    A 4-cycle bounds two adjacent triangles exactly when it has a chord, so
    the second condition is a chord test.
    """
    out = []
    for cyc in four_cycles(S):
        a, b, c, d = cyc
        if c in S.adj[a] or d in S.adj[b]:
            continue
        vs = set(cyc)
        common = S.adj[a] & S.adj[b] & S.adj[c] & S.adj[d]
        if any(S.adj[x] == vs for x in common):
            continue
        out.append(cyc)
    return out


def barycentric_subdivision(K) -> FlagComplex:
    """Order complex of the face poset; vertices are labelled ``{a,b,...}``."""
    K = as_simplicial(K)

    def name(s):
        return "{" + ",".join(s) + "}"

    verts = [name(s) for s in K.simplices]
    edges = [(name(s), name(t)) for s in K.simplices for t in K.simplices
             if len(s) < len(t) and set(s) < set(t)]
    return FlagComplex(verts, edges)


def flag_of_poset(elements: Sequence, leq) -> FlagComplex:
    """Flag complex whose simplices are the chains of a finite poset."""
    names = [str(e) for e in elements]
    edges = [(names[i], names[j]) for i, j in itertools.combinations(range(len(elements)), 2)
             if leq(elements[i], elements[j]) or leq(elements[j], elements[i])]
    return FlagComplex(names, edges)


# -- isomorphism ---------------------------------------------------------------

def _incidence_graph(K: SimplicialComplex) -> nx.Graph:
    g = nx.Graph()
    for v in K.vertices:
        g.add_node(("v", v), kind="v")
    for i, s in enumerate(K.maximal_simplices):
        g.add_node(("s", i), kind="s")
        for v in s:
            g.add_edge(("s", i), ("v", v))
    return g


def find_isomorphism(A, B) -> dict | None:
    """A vertex bijection carrying ``A`` onto ``B``, or ``None``."""
    if isinstance(A, FlagComplex) and isinstance(B, FlagComplex):
        if len(A.vertices) != len(B.vertices) or len(A.edges) != len(B.edges):
            return None
        gm = nx.algorithms.isomorphism.GraphMatcher(A.graph(), B.graph())
        return dict(gm.mapping) if gm.is_isomorphic() else None
    A, B = as_simplicial(A), as_simplicial(B)
    if A.f_vector != B.f_vector:
        return None
    gm = nx.algorithms.isomorphism.GraphMatcher(
        _incidence_graph(A), _incidence_graph(B),
        node_match=lambda x, y: x["kind"] == y["kind"])
    if not gm.is_isomorphic():
        return None
    return {a[1]: b[1] for a, b in gm.mapping.items() if a[0] == "v"}


def is_isomorphic(A, B) -> bool:
    return find_isomorphism(A, B) is not None


# -- builders -----------------------------------------------------------------

def points(k: int, prefix: str = "p") -> FlagComplex:
    return FlagComplex([f"{prefix}{i}" for i in range(k)])


def simplex(k: int, prefix: str = "x") -> FlagComplex:
    vs = [f"{prefix}{i}" for i in range(k + 1)]
    return FlagComplex(vs, itertools.combinations(vs, 2))


def polygon(m: int, prefix: str = "v") -> FlagComplex:
    """Cycle on ``m`` vertices (flag only for ``m >= 4``)."""
    vs = [f"{prefix}{i}" for i in range(m)]
    return FlagComplex(vs, [(vs[i], vs[(i + 1) % m]) for i in range(m)] if m >= 3 else
                       ([(vs[0], vs[1])] if m == 2 else []))


def path(k: int, prefix: str = "v") -> FlagComplex:
    vs = [f"{prefix}{i}" for i in range(k)]
    return FlagComplex(vs, [(vs[i], vs[i + 1]) for i in range(k - 1)])


def octahedron(n: int = 3) -> FlagComplex:
    """Boundary of the n-dimensional cross-polytope, vertices ``+i``/``-i``."""
    vs = [f"{sign}{i}" for i in range(1, n + 1) for sign in "+-"]
    edges = [(a, b) for a, b in itertools.combinations(vs, 2) if a[1:] != b[1:]]
    return FlagComplex(vs, edges)


def icosahedron() -> FlagComplex:
    vs = [f"i{k}" for k in range(12)]
    e = []
    for i in range(1, 6):
        j = i % 5 + 1
        e += [(0, i), (i, j), (5 + i, 5 + j), (i, 5 + i), (i, 5 + j), (5 + i, 11)]
    return FlagComplex(vs, [(vs[a], vs[b]) for a, b in e])


def complete_bipartite(m: int, n: int) -> FlagComplex:
    return join(points(m, "a"), points(n, "b"))


# -- JSON exchange --------------------------------------------------------------

def to_json(K) -> dict:
    if isinstance(K, FlagComplex):
        return {"format": "flag-graph", "vertices": list(K.vertices),
                "edges": [list(e) for e in K.sorted_edges()]}
    return {"format": "simplicial", "vertices": list(K.vertices),
            "maximal_simplices": [list(s) for s in K.maximal_simplices]}


def from_json(data, want_flag: bool = False, assume_flag: bool = False):
    """Parse either exchange format.

    With ``want_flag`` a ``simplicial`` document is converted to a
    :class:`FlagComplex`; non-flag input is rejected unless ``assume_flag``.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "format" not in data:
        raise ParseError("missing field 'format'")
    fmt = data["format"]
    try:
        if fmt == "flag-graph":
            if "vertices" not in data or "edges" not in data:
                raise ParseError("flag-graph needs fields 'vertices' and 'edges'")
            for i, e in enumerate(data["edges"]):
                if not isinstance(e, (list, tuple)) or len(e) != 2:
                    raise ParseError(f"field 'edges[{i}]': expected a pair")
            return FlagComplex(data["vertices"], data["edges"])
        if fmt == "simplicial":
            if "maximal_simplices" not in data:
                raise ParseError("simplicial needs field 'maximal_simplices'")
            K = SimplicialComplex(data["maximal_simplices"], vertices=data.get("vertices"))
            return to_flag(K, assume_flag) if want_flag else K
    except PreconditionError as exc:
        if isinstance(exc, NotFlagError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"field 'format': unknown value {fmt!r}")
