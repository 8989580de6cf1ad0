"""Exact rational homology of simplicial and cubical complexes.

Ranks come from fraction-free elimination on sparse integer columns, so
every Betti number is exact and the result does not depend on hashing or
thread scheduling.  On top of that sit the recognisers for generalized
homology spheres and disks, pseudomanifolds, and homology balls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import NotPureError, PreconditionError
from .simplicial import FlagComplex, SimplicialComplex, as_simplicial


def render(q) -> str:
    """Canonical ``p/q`` rendering; integers have no denominator."""
    if q is None:
        return "?"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class BettiVector:
    """Degree-indexed exact rationals; ``None`` marks an unknown degree.

    Degrees past the end of ``values`` are known zeros.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(None if v is None else Fraction(v) for v in self.values)
        if any(v is not None and v < 0 for v in vals):
            raise ValueError("Betti numbers are nonnegative")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, i):
        if i < 0:
            raise IndexError(i)
        return self.values[i] if i < len(self.values) else Fraction(0)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def known(self, i) -> bool:
        return self[i] is not None

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.values)

    def euler_characteristic(self) -> Fraction:
        if not self.complete:
            raise ValueError("Euler characteristic needs every degree")
        return sum(((-1) ** i * v for i, v in enumerate(self.values)), Fraction(0))

    def trimmed(self) -> "BettiVector":
        vals = list(self.values)
        while vals and vals[-1] == 0:
            vals.pop()
        return BettiVector(tuple(vals))

    def render(self) -> list[str]:
        return [render(v) for v in self.values]

    def __repr__(self):
        return "BettiVector(" + ", ".join(self.render()) + ")"


# -- sparse exact rank -----------------------------------------------------------

def _primitive(col: dict) -> dict:
    g = 0
    for v in col.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        col = {k: v // g for k, v in col.items()}
    return col


def sparse_rank(columns: Iterable[dict]) -> int:
    """Rank over Q of a matrix given as sparse integer columns ``{row: entry}``.

    Columns are reduced against earlier pivots keyed by their largest row
    index; each update ``a*c - b*p`` is followed by removing the content, so
    entries stay integral and small for incidence matrices.
    """
    pivots: dict[int, dict] = {}
    rank = 0
    for col in columns:
        c = {k: v for k, v in col.items() if v}
        while c:
            r = max(c)
            p = pivots.get(r)
            if p is None:
                pivots[r] = _primitive(c)
                rank += 1
                break
            a, b = p[r], c[r]
            new = {k: a * v for k, v in c.items()}
            for k, v in p.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            c = _primitive(new)
    return rank


class ChainComplex:
    """Finite chain complex with sparse integer boundary matrices.

    ``bases[k]`` lists the k-cells; ``boundary[k][j]`` is the sparse column of
    the j-th k-cell, indexed by positions in ``bases[k-1]``.
    """

    def __init__(self, bases: dict, boundary: dict, check: bool = True):
        self.bases = bases
        self.boundary = boundary
        for k, cols in boundary.items():
            if len(cols) != len(bases.get(k, ())):
                raise ValueError(f"degree {k}: {len(cols)} columns for {len(bases.get(k, ()))} cells")
            n = len(bases.get(k - 1, ()))
            if any(r < 0 or r >= n for col in cols for r in col):
                raise ValueError(f"degree {k}: row index out of range")
        if check:
            self.check_square_zero()

    def check_square_zero(self):
        for k in self.boundary:
            if k - 1 not in self.boundary:
                continue
            lower = self.boundary[k - 1]
            for j, col in enumerate(self.boundary[k]):
                acc: dict = {}
                for r, a in col.items():
                    for rr, b in lower[r].items():
                        acc[rr] = acc.get(rr, 0) + a * b
                if any(acc.values()):
                    raise AssertionError(f"boundary of boundary nonzero on {self.bases[k][j]!r}")

    @property
    def degrees(self) -> list[int]:
        return sorted(k for k, b in self.bases.items() if b)

    def rank(self, k) -> int:
        return sparse_rank(self.boundary.get(k, ()))

    def betti(self) -> dict:
        ranks = {k: self.rank(k) for k in self.boundary}
        return {k: len(self.bases[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
                for k in sorted(self.bases)}

    @classmethod
    def from_cells(cls, cells: Sequence, dim_of: Callable, faces_of: Callable,
                   exclude=frozenset(), check=True) -> "ChainComplex":
        """Build from cells with signed faces; cells in ``exclude`` are quotiented out."""
        bases: dict[int, list] = {}
        for c in cells:
            if c in exclude:
                continue
            bases.setdefault(dim_of(c), []).append(c)
        pos = {k: {c: i for i, c in enumerate(b)} for k, b in bases.items()}
        boundary = {}
        for k, b in bases.items():
            if k == 0 and not any(faces_of(c) for c in b):
                continue
            cols = []
            lower = pos.get(k - 1, {})
            for c in b:
                col: dict = {}
                for f, sign in faces_of(c):
                    if f in exclude:
                        continue
                    i = lower[f]
                    col[i] = col.get(i, 0) + sign
                cols.append({i: v for i, v in col.items() if v})
            boundary[k] = cols
        for k in list(bases):
            bases.setdefault(k - 1, [])
        return cls(bases, boundary, check=check)


# -- chain complexes of concrete complexes ----------------------------------------

def _simplex_faces(s):
    return [(s[:i] + s[i + 1:], (-1) ** i) for i in range(len(s))]


def simplicial_chain_complex(K, exclude=None, augmented=False, check=True) -> ChainComplex:
    """Oriented by the vertex order of ``K``; ``augmented`` adds the empty simplex."""
    K = as_simplicial(K)
    cells = list(K.simplices)
    if augmented:
        cells = [()] + cells
    excl = frozenset(K.sort(f) for f in exclude.faces) if exclude is not None else frozenset()
    faces = _simplex_faces if augmented else (lambda s: _simplex_faces(s) if len(s) > 1 else [])
    return ChainComplex.from_cells(cells, lambda s: len(s) - 1, faces, exclude=excl, check=check)


def chain_complex(K, exclude=None, check=True) -> ChainComplex:
    if hasattr(K, "chain_complex"):
        return K.chain_complex(exclude=exclude, check=check)
    return simplicial_chain_complex(K, exclude=exclude, check=check)


def _to_vector(b: dict, top: int) -> BettiVector:
    return BettiVector(tuple(b.get(i, 0) for i in range(top + 1)))


def betti(K) -> BettiVector:
    """Ordinary rational Betti numbers ``b_0 .. b_dim``."""
    cc = chain_complex(K)
    degs = cc.degrees
    return _to_vector(cc.betti(), max(degs) if degs else -1)


def reduced_betti(K) -> dict:
    """Reduced Betti numbers including degree -1 (nonzero only for the empty complex)."""
    if hasattr(K, "chain_complex"):
        if not K.cells:
            return {-1: 1}
        b = dict(chain_complex(K).betti())
        b[0] = b.get(0, 0) - 1
        return {k: v for k, v in b.items() if v}
    b = simplicial_chain_complex(K, augmented=True).betti()
    return {k: v for k, v in b.items() if v}


def relative_betti(K, A) -> BettiVector:
    """Betti numbers of the pair ``(K, A)``; ``A`` must be a subcomplex."""
    if isinstance(K, FlagComplex) or isinstance(K, SimplicialComplex):
        K, A = as_simplicial(K), as_simplicial(A)
        if not A.faces <= K.faces:
            raise PreconditionError("A is not a subcomplex of K")
        b = simplicial_chain_complex(K, exclude=A).betti()
        return _to_vector(b, K.dim)
    if not A.is_subcomplex_of(K):
        raise PreconditionError("A is not a subcomplex of K")
    b = K.chain_complex(exclude=A).betti()
    return _to_vector(b, K.dim)


def has_sphere_homology(K, d: int) -> bool:
    """Reduced rational homology equals that of the d-sphere (``d=-1``: empty)."""
    return reduced_betti(K) == {d: 1}


# -- manifold recognisers ---------------------------------------------------------

def _ghs(S: SimplicialComplex, n: int) -> bool:
    if S.dim != n:
        return False
    if not has_sphere_homology(S, n):
        return False
    for s in S.simplices:
        if not has_sphere_homology(S.link(s), n - len(s)):
            return False
    return True


def is_GHS(S, n: int) -> bool:
    """Generalized homology n-sphere: every k-simplex link has the homology of
    the (n-k-1)-sphere and ``S`` itself has the homology of the n-sphere."""
    S = as_simplicial(S)
    if S.dim != n:
        raise PreconditionError(f"complex has dimension {S.dim}, expected {n}")
    return _ghs(S, n)


def _restrict(K: SimplicialComplex, B: SimplicialComplex) -> SimplicialComplex:
    faces = [K.sort(f) for f in K.faces if f in B.faces]
    verts = [v for v in K.vertices if frozenset([v]) in B.faces]
    return SimplicialComplex(faces, vertices=verts)


def _ghd(D: SimplicialComplex, B: SimplicialComplex, n: int) -> bool:
    if D.dim != n or not B.faces <= D.faces:
        return False
    rel = simplicial_chain_complex(D, exclude=B).betti()
    if {k: v for k, v in rel.items() if v} != {n: 1}:
        return False
    for v in D.vertices:
        lk = D.link([v])
        if frozenset([v]) in B.faces:
            if not _ghd(lk, _restrict(lk, B), n - 1):
                return False
        elif not _ghs(lk, n - 1):
            return False
    return True


def is_GHD(D, boundary, n: int) -> bool:
    """Generalized homology n-disk with the given boundary subcomplex."""
    D, boundary = as_simplicial(D), as_simplicial(boundary)
    if D.dim != n:
        raise PreconditionError(f"complex has dimension {D.dim}, expected {n}")
    if not boundary.faces <= D.faces:
        raise PreconditionError("boundary is not a subcomplex")
    return _ghd(D, boundary, n)


def _require_pure(K: SimplicialComplex):
    if not K.is_pure():
        raise NotPureError("complex is not pure")


def is_pseudomanifold(L) -> bool:
    """Pure, and every codimension-one simplex lies in exactly two top simplices."""
    K = as_simplicial(L)
    _require_pure(K)
    n = K.dim
    if n < 0:
        return False
    count = {frozenset(s): 0 for s in K.simplices_of_dim(n - 1)}
    for top in K.maximal_simplices:
        for f, _ in _simplex_faces(top):
            if f:
                count[frozenset(f)] += 1
    return all(c == 2 for c in count.values())


def spherical_links_codim(L, m: int) -> bool:
    """Every simplex of dimension ``n-i`` with ``i <= m`` has a GHS^(i-1) link."""
    K = as_simplicial(L)
    _require_pure(K)
    n = K.dim
    if n + 1 <= m and not _ghs(K, n):
        return False
    for s in K.simplices:
        i = n - (len(s) - 1)
        if i <= m and not _ghs(K.link(s), i - 1):
            return False
    return True


# -- balls and collapses -------------------------------------------------------------

def greedy_collapse(K, key: Callable | None = None) -> set:
    """Apply elementary collapses greedily; returns the surviving faces.

    A free face is a simplex with exactly one proper coface, which must be
    maximal and one dimension up.  Pairs are taken highest-dimension first,
    ties broken by ``key`` (default: vertex order).
    """
    K = as_simplicial(K)
    faces = set(K.faces)
    idx = K.index
    order = key or (lambda f: [idx[v] for v in sorted(f, key=idx.__getitem__)])
    cof: dict = {f: set() for f in faces}
    for f in faces:
        if len(f) > 1:
            for v in f:
                cof[f - {v}].add(f)
    while True:
        free = [(f, next(iter(c))) for f, c in cof.items()
                if f in faces and len(c) == 1 and not cof[next(iter(c))]]
        if not free:
            return faces
        f, s = min(free, key=lambda p: (-len(p[1]), order(p[0])))
        for x in (s, f):
            faces.discard(x)
            if len(x) > 1:
                for v in x:
                    cof[x - {v}].discard(x)
            del cof[x]


@dataclass(frozen=True)
class BallReport:
    """Outcome of :func:`is_homology_ball`.

    Truthy when the homology check passes; ``collapsible`` records whether a
    greedy collapse also reached a single vertex.
    """

    homology: bool
    collapsible: bool

    def __bool__(self):
        return self.homology

    @property
    def verdict(self) -> str:
        if self.homology and self.collapsible:
            return "collapsible ball"
        if self.homology:
            return "homology ball only"
        return "not a ball"


def is_homology_ball(K, key: Callable | None = None) -> BallReport:
    K = as_simplicial(K)
    if not K.vertices:
        raise PreconditionError("empty complex")
    acyclic = not reduced_betti(K)
    collapsible = acyclic and len(greedy_collapse(K, key)) == 1
    return BallReport(acyclic, collapsible)
