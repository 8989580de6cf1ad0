"""Certificates that a flag triangulated 2-sphere has vanishing l^2-homology.

The recursion has three kinds of node:

``suspension``
    the sphere is the suspension of a 4- or 5-gon (a leaf);
``square``
    an empty 4-circuit splits the sphere into two smaller capped spheres;
``andreev``
    no empty 4-circuits and not a suspension: the valence-4 vertices are
    pairwise non-adjacent and the square/triangle cellulation passes the
    combinatorial checks behind the hyperbolic polytope realization (a leaf).

Certificates are plain JSON-compatible dicts; :func:`verify_certificate`
re-checks one from scratch.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import LemmaViolation, NotFlagError, NotSphereError, PreconditionError
from .homology import is_GHS
from .simplicial import (FlagComplex, SimplicialComplex, empty_circuits_4, four_cycles,
                         from_json, full_subcomplex, is_flag, is_isomorphic, to_json)

CAP = "cap"


def _kappa(L) -> Fraction:
    return sum((Fraction(-1, 2) ** (k + 1) * n for k, n in enumerate(L.f_vector, start=-1)),
               Fraction(0))


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
        out.append(comp)
    return out


def is_triangulated_2sphere(S: FlagComplex) -> bool:
    """Pure 2-dimensional, connected, every edge in two triangles, cyclic links, chi = 2."""
    if S.dim != 2 or len(_components(S.vertices, S.neighbors)) != 1:
        return False
    tri = [t for t in S.simplices if len(t) == 3]
    count = {e: 0 for e in S.sorted_edges()}
    for t in tri:
        for e in itertools.combinations(t, 2):
            count[e] += 1
    if any(c != 2 for c in count.values()):
        return False
    for v in S.vertices:
        lk = S.adj[v]
        if len(lk) < 3 or any(len(S.adj[u] & lk) != 2 for u in lk):
            return False
        if len(_components(sorted(lk), lambda u: S.adj[u] & lk)) != 1:
            return False
    return S.f_vector.euler_characteristic() == 2


def _require_sphere(S) -> FlagComplex:
    if not isinstance(S, FlagComplex):
        if not is_flag(S):
            raise NotFlagError("complex is not flag")
        S = S.one_skeleton()
    if not is_triangulated_2sphere(S):
        raise NotSphereError("not a triangulated 2-sphere")
    return S


def _cycle_order(S: FlagComplex, vs) -> list:
    """The vertices of a chordless cycle in cyclic order."""
    vs = set(vs)
    start = min(vs, key=S.index.__getitem__)
    order = [start]
    prev = None
    while len(order) < len(vs):
        nxt = sorted((S.adj[order[-1]] & vs) - {prev} - set(order), key=S.index.__getitem__)
        if not nxt:
            raise LemmaViolation("link is not a cycle")
        prev = order[-1]
        order.append(nxt[0])
    return order


def suspended_polygon(S: FlagComplex) -> tuple | None:
    """``(poles, m)`` if ``S`` is the suspension of a 4- or 5-gon, else ``None``."""
    if len(S.vertices) not in (6, 7):
        return None
    vs = S.vertices
    comp = _components(vs, lambda x: [u for u in vs if u != x and u not in S.adj[x]])
    for c in comp:
        if len(c) != 2:
            continue
        rest = [u for u in vs if u not in c]
        R = full_subcomplex(S, rest)
        if len(rest) in (4, 5) and len(R.edges) == len(rest) and all(len(R.adj[u]) == 2 for u in rest) \
                and len(_components(rest, R.neighbors)) == 1:
            return tuple(sorted(c, key=S.index.__getitem__)), len(rest)
    return None


def choose_empty_circuit(S: FlagComplex) -> tuple | None:
    """The empty 4-circuit with lexicographically least sorted label tuple."""
    cs = empty_circuits_4(S)
    if not cs:
        return None
    return min(cs, key=lambda c: (tuple(sorted(c)), c))


def split_along(S: FlagComplex, circuit) -> tuple[FlagComplex, FlagComplex]:
    """Cap off the two disks that an empty 4-circuit cuts ``S`` into."""
    C = set(circuit)
    rest = [v for v in S.vertices if v not in C]
    sides = _components(rest, lambda x: S.adj[x] - C)
    if len(sides) != 2:
        raise LemmaViolation(f"4-circuit {circuit} does not separate the sphere into two disks")
    out = []
    for side in sorted(sides, key=lambda c: min(S.index[v] for v in c)):
        if len(side) < 2:
            raise PreconditionError(f"{circuit} is a vertex link, not an empty circuit")
        keep = set(side) | C
        D = full_subcomplex(S, [v for v in S.vertices if v in keep])
        apex = CAP
        while apex in D.index:
            apex += "'"
        out.append(FlagComplex(list(D.vertices) + [apex],
                               list(D.sorted_edges()) + [(apex, c) for c in circuit]))
    return out[0], out[1]


def square_compose(S1: FlagComplex, s1: str, S2: FlagComplex, s2: str, matching: dict) -> FlagComplex:
    """Glue ``S1 - s1`` and ``S2 - s2`` along the links of ``s1`` and ``s2``.

    ``matching`` sends link vertices of ``s1`` to link vertices of ``s2`` and
    must be an isomorphism of the links.  Glued vertices keep their ``S1``
    labels; other clashing labels get ``#0`` / ``#1`` suffixes (or the next
    free even/odd number).  Works in any
    dimension as long as the links are isomorphic under ``matching``.
    """
    for S, s in ((S1, s1), (S2, s2)):
        if s not in S.index:
            raise PreconditionError(f"unknown vertex {s!r}")
    l1, l2 = S1.adj[s1], S2.adj[s2]
    if S1.dim == 2 and (len(l1) != 4 or len(l2) != 4):
        raise PreconditionError("both vertices must have valence 4")
    if set(matching) != set(l1) or set(matching.values()) != set(l2) or len(set(matching.values())) != len(l1):
        raise PreconditionError("matching must be a bijection between the two links")
    for a, b in itertools.combinations(l1, 2):
        if (b in S1.adj[a]) != (matching[b] in S2.adj[matching[a]]):
            raise PreconditionError("matching is not an isomorphism of the links")
    inv = {v: k for k, v in matching.items()}
    rest1 = [v for v in S1.vertices if v != s1 and v not in l1]
    rest2 = [v for v in S2.vertices if v != s2 and v not in l2]
    clash = (set(rest1) | set(l1)) & set(rest2)
    taken = set(S1.vertices) | set(S2.vertices)

    def fresh(v, k):
        while f"{v}#{k}" in taken:
            k += 2
        taken.add(f"{v}#{k}")
        return f"{v}#{k}"

    n1 = {v: (fresh(v, 0) if v in clash and v not in l1 else v) for v in rest1}
    n1.update({v: v for v in l1})
    n2 = {v: (fresh(v, 1) if v in clash else v) for v in rest2}
    n2.update({v: inv[v] for v in l2})
    verts = [n1[v] for v in S1.vertices if v != s1] + [n2[v] for v in rest2]
    edges = [(n1[a], n1[b]) for a, b in S1.sorted_edges() if s1 not in (a, b)]
    edges += [(n2[a], n2[b]) for a, b in S2.sorted_edges()
              if s2 not in (a, b) and not (a in l2 and b in l2)]
    out = FlagComplex(verts, edges)
    if S1.dim == 2 and not is_triangulated_2sphere(out):
        raise LemmaViolation("composite is not a 2-sphere")
    if not is_GHS(out, S1.dim):
        raise LemmaViolation("composite is not a homology sphere")
    return out


# -- the Andreev branch ----------------------------------------------------------

def valence4(S: FlagComplex) -> list:
    return [v for v in S.vertices if len(S.adj[v]) == 4]


def dual_cell_check(S: FlagComplex, T=None) -> dict:
    """Check the square/triangle cellulation ``[S - T]``; returns the passed checks.

    Raises :class:`PreconditionError` when ``S`` is a suspended 4/5-gon or has
    empty 4-circuits, and :class:`LemmaViolation` when any check fails.
    """
    S = _require_sphere(S)
    if suspended_polygon(S):
        raise PreconditionError("sphere is the suspension of a 4- or 5-gon")
    if empty_circuits_4(S):
        raise PreconditionError("sphere has empty 4-circuits")
    T = valence4(S) if T is None else list(T)
    for a, b in itertools.combinations(T, 2):
        if b in S.adj[a]:
            raise LemmaViolation(f"valence-4 vertices {a} and {b} are adjacent")
    Tset = set(T)
    verts = [v for v in S.vertices if v not in Tset]
    G = full_subcomplex(S, verts)
    tri_cells = [frozenset(t) for t in S.simplices if len(t) == 3 and not Tset & set(t)]
    squares = {t: _cycle_order(S, S.adj[t]) for t in T}
    sq_cells = [frozenset(c) for c in squares.values()]
    cells = tri_cells + sq_cells
    cell_edges = []
    for c in tri_cells:
        cell_edges.append({frozenset(e) for e in itertools.combinations(c, 2)})
    for cyc in squares.values():
        cell_edges.append({frozenset((cyc[i], cyc[(i + 1) % 4])) for i in range(4)})
    checks = {}

    ok = True
    for i, j in itertools.combinations(range(len(cells)), 2):
        common = cells[i] & cells[j]
        if len(common) > 2 or (len(common) == 2 and not (frozenset(common) in cell_edges[i]
                                                          and frozenset(common) in cell_edges[j])):
            ok = False
            break
    checks["cell intersections are cells"] = ok

    edges = {frozenset(e) for e in G.edges}
    count = {e: 0 for e in edges}
    for ce in cell_edges:
        for e in ce:
            if e not in count:
                raise LemmaViolation("a cell edge is missing from S - T")
            count[e] += 1
    checks["every edge in two cells"] = all(c == 2 for c in count.values())
    checks["euler characteristic 2"] = len(verts) - len(edges) + len(cells) == 2

    tri_set = set(tri_cells)
    checks["no empty 3-circuits"] = all(frozenset(t) in tri_set
                                        for t in G.simplices if len(t) == 3)
    sq_set = set(sq_cells)
    ok = True
    for cyc in four_cycles(G):
        a, b, c, d = cyc
        if frozenset(cyc) in sq_set:
            continue
        if c in G.adj[a] and {frozenset((a, b, c)), frozenset((a, c, d))} <= tri_set:
            continue
        if d in G.adj[b] and {frozenset((a, b, d)), frozenset((b, c, d))} <= tri_set:
            continue
        ok = False
        break
    checks["4-circuits bound two triangles or a square"] = ok

    ok = True
    for t, (a, b, c, d) in squares.items():
        for x, y, others in ((a, c, {b, d}), (b, d, {a, c})):
            if (G.adj[x] & G.adj[y]) - others:
                ok = False
    checks["no m5 configuration"] = ok

    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise LemmaViolation("cellulation check failed: " + ", ".join(failed))
    return checks


# -- certificates ----------------------------------------------------------------

def certify(S) -> dict:
    """Certificate tree for a flag triangulated 2-sphere."""
    S = _require_sphere(S)
    kappa = _kappa(S)
    if kappa != 0:
        raise LemmaViolation(f"kappa of a flag 2-sphere is {kappa}, expected 0")
    node = {"complex": to_json(S), "vertices": len(S.vertices)}
    susp = suspended_polygon(S)
    if susp:
        node.update(kind="suspension", poles=list(susp[0]), m=susp[1])
        return node
    circ = choose_empty_circuit(S)
    if circ is not None:
        S1, S2 = split_along(S, circ)
        node.update(kind="square", circuit=list(circ), children=[certify(S1), certify(S2)])
        return node
    T = valence4(S)
    for a, b in itertools.combinations(T, 2):
        if b in S.adj[a]:
            raise LemmaViolation(f"adjacent valence-4 vertices {a}, {b} with no empty 4-circuit")
    checks = dual_cell_check(S, T)
    node.update(kind="andreev", T=T, checks=sorted(checks))
    return node


def certificate_summary(cert: dict) -> dict:
    kinds: dict = {}

    def walk(n, depth):
        kinds[n["kind"]] = kinds.get(n["kind"], 0) + 1
        return max([depth] + [walk(c, depth + 1) for c in n.get("children", ())])

    depth = walk(cert, 0)
    return {"root": cert["kind"], "depth": depth, "nodes": kinds}


def verify_certificate(cert: dict) -> bool:
    """Independently re-check every node; raises on the first failure."""

    def fail(msg):
        raise LemmaViolation(f"invalid certificate: {msg}")

    def check(n):
        try:
            S = from_json(n["complex"], want_flag=True)
        except (KeyError, PreconditionError) as exc:
            fail(f"bad complex: {exc}")
        if not is_triangulated_2sphere(S):
            fail("node is not a 2-sphere")
        if _kappa(S) != 0:
            fail("kappa is not 0")
        kind = n.get("kind")
        if kind == "suspension":
            if not suspended_polygon(S):
                fail("suspension leaf is not a suspended 4/5-gon")
        elif kind == "square":
            circ = tuple(n["circuit"])
            if circ not in {tuple(c) for c in empty_circuits_4(S)} and \
                    set(circ) not in [set(c) for c in empty_circuits_4(S)]:
                fail(f"{circ} is not an empty 4-circuit")
            kids = n.get("children", [])
            if len(kids) != 2:
                fail("square node needs two children")
            expect = split_along(S, circ)
            for child, want in zip(kids, expect):
                got = from_json(child["complex"], want_flag=True)
                if len(got.vertices) >= len(S.vertices):
                    fail("child does not have fewer vertices")
                if not is_isomorphic(got, want):
                    fail("child is not the capped side of the circuit")
                check(child)
        elif kind == "andreev":
            if suspended_polygon(S) or empty_circuits_4(S):
                fail("andreev leaf violates its hypotheses")
            if sorted(n.get("T", [])) != sorted(valence4(S)):
                fail("T is not the set of valence-4 vertices")
            dual_cell_check(S, n["T"])
        else:
            fail(f"unknown node kind {kind!r}")

    check(cert)
    return True
