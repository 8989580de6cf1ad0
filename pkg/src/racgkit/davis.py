"""Cubical complexes: finite balls in the Davis complex and the commutator cover.

Cells are hashable keys with signed codimension-one faces.  Two key schemes
are used:

* Davis balls: ``(w, sigma)`` with ``w`` the shortest element (index word) of
  the spherical coset ``w W_sigma`` and ``sigma`` a sorted tuple of generator
  indices.  The cell is a ``|sigma|``-cube whose vertices are the coset.
* Commutator cover: strings over ``+ - *`` of length ``p``.  Starred
  coordinates are free and must span a simplex of the nerve.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable

from .coxeter import RACG
from .errors import PreconditionError, ResourceLimitError
from .homology import ChainComplex, betti
from .simplicial import FlagComplex, SimplicialComplex, is_flag, is_isomorphic

DEFAULT_MAX_P = 22
MAX_P_ENV = "RACGKIT_MAX_P"


def kappa(L) -> Fraction:
    """Sum of ``(-1/2)^(k+1) f_k`` over ``k = -1 .. dim``.

    >>> from racgkit.simplicial import polygon
    >>> kappa(polygon(5))
    Fraction(-1, 4)
    """
    return sum((Fraction(-1, 2) ** (k + 1) * n for k, n in enumerate(L.f_vector, start=-1)),
               Fraction(0))


class CubicalComplex:
    """A finite cubical complex given by its cells and signed boundary faces.

    ``faces[c]`` is a tuple of ``(face, sign)`` pairs; a ``k``-cube has exactly
    ``2k`` of them.
    """

    def __init__(self, dims: dict, faces: dict, label: Callable | None = None, kind: str = "cubical"):
        self.dims = dims
        self.faces = faces
        self.kind = kind
        self._label = label or str
        self.cells = sorted(dims, key=lambda c: (dims[c], c))

    def __repr__(self):
        return f"CubicalComplex({self.kind}, counts={self.counts})"

    def __len__(self):
        return len(self.cells)

    def __contains__(self, c):
        return c in self.dims

    @property
    def dim(self) -> int:
        return max(self.dims.values(), default=-1)

    @cached_property
    def counts(self) -> tuple:
        out = [0] * (self.dim + 1)
        for d in self.dims.values():
            out[d] += 1
        return tuple(out)

    def cells_of_dim(self, k: int) -> list:
        return [c for c in self.cells if self.dims[c] == k]

    @property
    def vertices(self) -> list:
        return self.cells_of_dim(0)

    def label(self, c) -> str:
        return self._label(c)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts))

    @cached_property
    def _closure(self) -> dict:
        out: dict = {}
        for c in self.cells:
            acc = {c}
            for f, _ in self.faces[c]:
                acc |= out[f]
            out[c] = frozenset(acc)
        return out

    def closure(self, c) -> frozenset:
        """All faces of ``c`` including ``c``."""
        return self._closure[c]

    @cached_property
    def _vertices_of(self) -> dict:
        return {c: frozenset(f for f in cl if self.dims[f] == 0) for c, cl in self._closure.items()}

    def cell_vertices(self, c) -> frozenset:
        return self._vertices_of[c]

    def is_subcomplex_of(self, other: "CubicalComplex") -> bool:
        return all(c in other.dims for c in self.cells)

    def subcomplex(self, cells: Iterable) -> "CubicalComplex":
        keep = set()
        for c in cells:
            keep |= self._closure[c]
        return CubicalComplex({c: self.dims[c] for c in keep}, {c: self.faces[c] for c in keep},
                              self._label, self.kind)

    def chain_complex(self, exclude=None, check: bool = True) -> ChainComplex:
        ex = frozenset(exclude.cells if isinstance(exclude, CubicalComplex) else exclude or ())
        return ChainComplex.from_cells(self.cells, self.dims.__getitem__, self.faces.__getitem__,
                                       exclude=ex, check=check)

    def check(self):
        """Raise ``AssertionError`` unless every k-cube has 2k faces and d^2 = 0."""
        for c in self.cells:
            if len(self.faces[c]) != 2 * self.dims[c]:
                raise AssertionError(f"cell {self.label(c)} has {len(self.faces[c])} faces")
            if any(f not in self.dims for f, _ in self.faces[c]):
                raise AssertionError(f"cell {self.label(c)} has a face outside the complex")
        self.chain_complex(check=True)

    def to_json(self) -> dict:
        return {
            "format": "cubical",
            "kind": self.kind,
            "cells": [{"id": self.label(c), "dim": self.dims[c],
                       "faces": [[self.label(f), s] for f, s in self.faces[c]]} for c in self.cells],
        }

    def to_off(self) -> str:
        """Vertex/face listing in an OFF-like text format (one line per cell)."""
        verts = self.vertices
        pos = {v: i for i, v in enumerate(verts)}
        lines = ["COFF", f"{len(verts)} {len(self.cells) - len(verts)}"]
        lines += [self.label(v) for v in verts]
        for c in self.cells:
            if self.dims[c]:
                vs = sorted(pos[v] for v in self.cell_vertices(c))
                lines.append(f"{self.dims[c]} {len(vs)} " + " ".join(map(str, vs)))
        return "\n".join(lines) + "\n"


# -- Davis balls -----------------------------------------------------------------

def _davis_faces(W: RACG, w: tuple, sigma: tuple) -> tuple:
    out = []
    for j, s in enumerate(sigma):
        rest = sigma[:j] + sigma[j + 1:]
        sign = -1 if j % 2 else 1
        out.append(((W.nf(w + (s,)), rest), sign))
        out.append(((w, rest), -sign))
    return tuple(out)


def davis_ball(W: RACG, N: int, truncation: str = "vertices") -> CubicalComplex:
    """Cells ``w W_sigma`` of the Davis complex near the identity.

    ``truncation="vertices"`` keeps a cell iff all its vertices lie in the
    word-metric ball of radius ``N`` (the cell's longest element has length
    ``l(w) + |sigma|``).  ``truncation="representatives"`` keeps every cell
    whose shortest element has length at most ``N``, together with its faces.
    """
    if not isinstance(W, RACG):
        W = RACG(W)
    if N < 0:
        raise PreconditionError("radius must be nonnegative")
    if truncation not in ("vertices", "representatives"):
        raise PreconditionError(f"unknown truncation {truncation!r}")
    simplices = [tuple(W.nerve.index[v] for v in s) for s in W.nerve.simplices]
    simplices.sort(key=lambda s: (len(s), s))
    extra = max((len(s) for s in simplices), default=0) if truncation == "representatives" else 0
    dims, faces = {}, {}
    for w in W.ball(N + extra):
        rd = set(W.right_descents(w))
        for s in simplices:
            if rd & set(s):
                continue
            if truncation == "vertices" and len(w) + len(s) > N:
                continue
            key = (w, tuple(sorted(s)))
            dims[key] = len(s)
            faces[key] = _davis_faces(W, *key)
    if truncation == "representatives":
        top = [c for c in dims if len(c[0]) <= N]
        keep = set()
        stack = list(top)
        while stack:
            c = stack.pop()
            if c in keep:
                continue
            keep.add(c)
            stack.extend(f for f, _ in faces[c])
        dims = {c: dims[c] for c in keep}
        faces = {c: faces[c] for c in keep}

    def label(c):
        w, s = c
        return f"{W.label(w)}|{','.join(W.names(s))}"

    return CubicalComplex(dims, faces, label, kind="davis-ball")


def coset_vertices(W: RACG, cell: tuple) -> frozenset:
    """Group elements of the coset ``w W_sigma`` (as index words)."""
    w, sigma = cell
    out = {w}
    for s in sigma:
        out |= {W.nf(u + (s,)) for u in out}
    return frozenset(out)


# -- commutator cover -----------------------------------------------------------

def max_p() -> int:
    try:
        return int(os.environ.get(MAX_P_ENV, DEFAULT_MAX_P))
    except ValueError:
        return DEFAULT_MAX_P


def _cover_faces(key: str) -> tuple:
    out = []
    j = 0
    for i, ch in enumerate(key):
        if ch == "*":
            sign = -1 if j % 2 else 1
            out.append((key[:i] + "+" + key[i + 1:], sign))
            out.append((key[:i] + "-" + key[i + 1:], -sign))
            j += 1
    return tuple(out)


def commutator_cover(L: FlagComplex, limit: int | None = None) -> CubicalComplex:
    """The subcomplex of ``[-1,1]^p`` made of faces parallel to simplices of ``L``.

    The vertex ``+...+`` corresponds to the identity.  Raises
    :class:`ResourceLimitError` when ``p`` exceeds ``limit`` (default 22, or
    the ``RACGKIT_MAX_P`` environment variable).
    """
    p = len(L.vertices)
    limit = max_p() if limit is None else limit
    if p > limit:
        raise ResourceLimitError(f"commutator cover needs 2^{p} vertices; limit is p <= {limit}")
    dims, faces = {}, {}
    for sigma in [()] + list(L.simplices):
        star = {L.index[v] for v in sigma}
        free = [i for i in range(p) if i not in star]
        for bits in range(1 << len(free)):
            key = ["*"] * p
            for k, i in enumerate(free):
                key[i] = "-" if bits >> k & 1 else "+"
            key = "".join(key)
            dims[key] = len(star)
            faces[key] = _cover_faces(key)
    return CubicalComplex(dims, faces, kind="commutator-cover")


def cube(n: int) -> CubicalComplex:
    """The solid cube ``[-1,1]^n`` with all its faces."""
    from .simplicial import simplex
    return commutator_cover(simplex(n - 1), limit=max(n, 1)) if n else commutator_cover(FlagComplex([], []))


# -- links and curvature ---------------------------------------------------------

def vertex_links(X: CubicalComplex) -> dict:
    """Map each vertex to its link; k-simplices are the (k+1)-cubes at the vertex.

    Link vertices are labelled by the edges of ``X`` through the vertex.
    """
    if "links" in X.__dict__:
        return X.__dict__["links"]
    gens: dict = {v: [] for v in X.vertices}
    for c in X.cells:
        if X.dims[c] < 1:
            continue
        at: dict = {}
        for e in X.closure(c):
            if X.dims[e] == 1:
                for v in X.cell_vertices(e):
                    at.setdefault(v, []).append(X.label(e))
        for v, labels in at.items():
            gens[v].append(labels)
    out = {}
    for v, simplices in gens.items():
        verts = sorted({e for s in simplices for e in s})
        out[v] = SimplicialComplex(simplices, vertices=verts)
    X.__dict__["links"] = out
    return out


def npc_check(X: CubicalComplex) -> bool:
    """Gromov's link condition: every vertex link is a flag complex."""
    return all(is_flag(lk) for lk in vertex_links(X).values())


def _same_by_coordinates(lk: SimplicialComplex, L: FlagComplex) -> bool:
    """In a commutator cover an edge key has one ``*``; its position names a generator."""
    try:
        name = {e: L.vertices[e.index("*")] for e in lk.vertices}
    except (ValueError, IndexError):
        return False
    if len(set(name.values())) != len(name) or len(name) != len(L.vertices):
        return False
    edges = {frozenset((name[a], name[b])) for a, b in lk.one_skeleton().edges}
    return edges == {frozenset(e) for e in L.edges}


def links_match_nerve(X: CubicalComplex, L: FlagComplex) -> bool:
    """Every vertex link is flag and isomorphic to ``L``.

    For commutator covers the natural labelling is tried first, so the
    general isomorphism search only runs when it fails.
    """
    for lk in vertex_links(X).values():
        if not is_flag(lk):
            return False
        if X.kind == "commutator-cover" and _same_by_coordinates(lk, L):
            continue
        if not is_isomorphic(lk.one_skeleton(), L):
            return False
    return True


@dataclass(frozen=True)
class ChiReport:
    """Both sides of ``chi(P_L) = 2^p kappa(L)``."""

    chi: int
    p: int
    kappa: Fraction

    @property
    def predicted(self) -> Fraction:
        return 2 ** self.p * self.kappa

    @property
    def ok(self) -> bool:
        return self.chi == self.predicted

    def __bool__(self):
        return self.ok


def chi_orb_consistency(L: FlagComplex, limit: int | None = None) -> ChiReport:
    X = commutator_cover(L, limit)
    return ChiReport(X.euler_characteristic(), len(L.vertices), kappa(L))


def cover_cell_count(L: FlagComplex) -> int:
    """Closed-form cell count of the commutator cover: sum of f_k 2^(p-k-1)."""
    p = len(L.vertices)
    return sum(n * 2 ** (p - k - 1) for k, n in enumerate(L.f_vector, start=-1))


def homology_of(X: CubicalComplex):
    return betti(X)
