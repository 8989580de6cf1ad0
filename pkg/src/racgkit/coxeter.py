"""Right-angled Coxeter groups: word problem, balls, cosets, walls, nerves.

Group elements are handled in two spellings.  The :class:`RACG` methods work
on *index words*: tuples of generator positions in the nerve's vertex order.
The module-level functions take and return *names* (tuples of vertex labels),
which is what users and the CLI see.

Normal forms are ShortLex-least reduced words with respect to the vertex
order of the nerve.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotConvexError, PreconditionError
from .simplicial import FlagComplex


class RACG:
    """The right-angled Coxeter group with nerve ``L``."""

    def __init__(self, L: FlagComplex):
        self.nerve = L
        self.generators = L.vertices
        self.p = len(L.vertices)
        self.gen_index = dict(L.index)
        self.comm_mask = [0] * self.p
        for a, b in L.edges:
            i, j = L.index[a], L.index[b]
            self.comm_mask[i] |= 1 << j
            self.comm_mask[j] |= 1 << i

    def __repr__(self):
        return f"RACG(generators={list(self.generators)})"

    def commute(self, i: int, j: int) -> bool:
        return bool(self.comm_mask[i] >> j & 1)

    # -- index words --------------------------------------------------------
    def mul_gen(self, w: tuple, s: int) -> tuple:
        """Reduced word for ``w*s`` given a reduced word ``w`` (not normalised)."""
        cm = self.comm_mask[s]
        for i in range(len(w) - 1, -1, -1):
            x = w[i]
            if x == s:
                return w[:i] + w[i + 1:]
            if not cm >> x & 1:
                break
        return w + (s,)

    def reduce(self, word: Iterable[int]) -> tuple:
        w: tuple = ()
        for s in word:
            w = self.mul_gen(w, s)
        return w

    def lex_normal(self, w: Sequence[int]) -> tuple:
        """ShortLex-least rearrangement of a reduced word by commuting swaps."""
        rest = list(w)
        out = []
        cm = self.comm_mask
        while rest:
            best = bi = None
            prefix = 0
            for i, x in enumerate(rest):
                if prefix & ~cm[x] == 0 and (best is None or x < best):
                    best, bi = x, i
                prefix |= 1 << x
                if prefix & ~cm[x] and best is not None and all(prefix & ~cm[y] for y in range(best)):
                    break
            out.append(best)
            del rest[bi]
        return tuple(out)

    def nf(self, word: Iterable[int]) -> tuple:
        return self.lex_normal(self.reduce(word))

    def mul(self, u: Sequence[int], v: Sequence[int]) -> tuple:
        return self.nf(tuple(u) + tuple(v))

    def inv(self, w: Sequence[int]) -> tuple:
        return self.lex_normal(tuple(reversed(w)))

    def length(self, w: Sequence[int]) -> int:
        return len(self.reduce(w))

    def phi(self, w: Iterable[int]) -> int:
        """Image in the abelianization (Z/2)^p as a bit mask."""
        m = 0
        for s in w:
            m ^= 1 << s
        return m

    def left_descents(self, w: Sequence[int]) -> list[int]:
        out, prefix = [], 0
        for x in w:
            if prefix & ~self.comm_mask[x] == 0 and not prefix >> x & 1:
                out.append(x)
            prefix |= 1 << x
        return sorted(set(out))

    def right_descents(self, w: Sequence[int]) -> list[int]:
        return self.left_descents(tuple(reversed(w)))

    def min_coset_rep(self, w: Sequence[int], sigma: Iterable[int]) -> tuple:
        """Shortest element of ``w W_sigma``."""
        w = self.nf(w)
        sig = set(sigma)
        while True:
            d = [s for s in self.right_descents(w) if s in sig]
            if not d:
                return w
            w = self.nf(w + (d[0],))

    def ball(self, n: int) -> list[tuple]:
        """Normal forms of length at most ``n`` ordered by (length, lex)."""
        if n < 0:
            raise PreconditionError("radius must be nonnegative")
        out = [()]
        frontier = [()]
        for k in range(n):
            nxt = set()
            for w in frontier:
                for s in range(self.p):
                    u = self.mul_gen(w, s)
                    if len(u) == k + 1:
                        nxt.add(self.lex_normal(u))
            frontier = sorted(nxt)
            out.extend(frontier)
        return out

    def is_reflection(self, r: Sequence[int]) -> bool:
        """Conjugate of a generator?  Peels matching outer letters ``a r a``."""
        r = self.nf(r)
        while len(r) > 1:
            if len(r) % 2 == 0:
                return False
            for a in self.left_descents(r):
                r2 = self.nf((a,) + r + (a,))
                if len(r2) == len(r) - 2:
                    r = r2
                    break
            else:
                return False
        return len(r) == 1

    def conjugate(self, w: Sequence[int], s: int) -> tuple:
        return self.nf(tuple(w) + (s,) + tuple(reversed(w)))

    def in_special_subgroup(self, w: Sequence[int], sigma: Iterable[int]) -> bool:
        sig = set(sigma)
        return all(x in sig for x in self.nf(w))

    # -- names ----------------------------------------------------------------
    def parse(self, word) -> tuple:
        """Index word from names; accepts a sequence or a string split on spaces/dots."""
        if isinstance(word, str):
            word = [t for t in word.replace(".", " ").replace("*", " ").split() if t not in ("e", "1")]
        out = []
        for x in word:
            if isinstance(x, int) and not isinstance(x, bool):
                if not 0 <= x < self.p:
                    raise PreconditionError(f"unknown generator index {x}")
                out.append(x)
                continue
            x = str(x)
            if x not in self.gen_index:
                raise PreconditionError(f"unknown generator {x!r}")
            out.append(self.gen_index[x])
        return tuple(out)

    def names(self, w: Sequence[int]) -> tuple:
        return tuple(self.generators[i] for i in w)

    def label(self, w: Sequence[int]) -> str:
        return ".".join(self.names(w)) or "e"


def _group(W) -> RACG:
    return W if isinstance(W, RACG) else RACG(W)


# -- public operations on names ---------------------------------------------------

def normal_form(W: RACG, word) -> tuple:
    """ShortLex normal form of a word in the generators (as names).

    >>> from racgkit.simplicial import points
    >>> W = RACG(points(2))
    >>> normal_form(W, ["p0", "p0"])
    ()
    """
    W = _group(W)
    return W.names(W.nf(W.parse(word)))


def word_length(W: RACG, word) -> int:
    W = _group(W)
    return W.length(W.parse(word))


def ball(W: RACG, N: int) -> list[tuple]:
    W = _group(W)
    return [W.names(w) for w in W.ball(N)]


@dataclass(frozen=True)
class SphericalCoset:
    """``rep * W_simplex`` with ``rep`` the shortest element of the coset."""

    rep: tuple
    simplex: tuple

    @property
    def dim(self) -> int:
        return len(self.simplex)


class CosetPoset:
    """Spherical cosets ordered by inclusion."""

    def __init__(self, W: RACG, cosets: list[tuple]):
        self.W = W
        self._cosets = cosets

    def __len__(self):
        return len(self._cosets)

    def __iter__(self):
        W = self.W
        return (SphericalCoset(W.names(w), W.names(s)) for w, s in self._cosets)

    @property
    def index_cosets(self) -> list[tuple]:
        return list(self._cosets)

    def leq_index(self, a: tuple, b: tuple) -> bool:
        (w, sigma), (v, tau) = a, b
        if not set(sigma) <= set(tau):
            return False
        return self.W.in_special_subgroup(self.W.mul(self.W.inv(v), w), tau)

    def leq(self, a: SphericalCoset, b: SphericalCoset) -> bool:
        W = self.W
        return self.leq_index((W.parse(a.rep), W.parse(a.simplex)),
                              (W.parse(b.rep), W.parse(b.simplex)))

    def elements(self) -> list[SphericalCoset]:
        return list(self)


def spherical_coset_indices(W: RACG, N: int) -> list[tuple]:
    simplices = [tuple(W.nerve.index[v] for v in s) for s in W.nerve.simplices]
    out = []
    for w in W.ball(N):
        rd = set(W.right_descents(w))
        for s in simplices:
            if not rd & set(s):
                out.append((w, s))
    return out


def spherical_cosets(W: RACG, N: int) -> CosetPoset:
    """All ``w W_sigma`` whose shortest element has length at most ``N``."""
    W = _group(W)
    return CosetPoset(W, spherical_coset_indices(W, N))


def is_reflection(W: RACG, r) -> bool:
    W = _group(W)
    return W.is_reflection(W.parse(r))


def wall_halfspace(W: RACG, r, w) -> str:
    """``'+'`` if the chamber ``wK`` lies in the half-space of ``r`` containing ``K``."""
    W = _group(W)
    ri, wi = W.parse(r), W.parse(w)
    if not W.is_reflection(ri):
        raise PreconditionError(f"{W.label(W.nf(ri))} is not a reflection")
    return "+" if W.length(ri + wi) > W.length(wi) else "-"


# -- supporting walls and nerves -----------------------------------------------------

def _chamber_set(W: RACG, C) -> set:
    out = set()
    for c in C:
        out.add(W.nf(W.parse(c) if not (isinstance(c, tuple) and all(isinstance(x, int) for x in c)) else c))
    if not out:
        raise PreconditionError("empty set of chambers")
    return out


def supporting_wall_indices(W: RACG, chambers: set, check_ball: bool = True) -> list[tuple]:
    """Reflections (index words) of the supporting walls of a convex union.

    The walls crossing a codimension-one face of ``C`` are candidates; ``C``
    must lie on one side of each.  With ``check_ball`` every chamber of the
    ball one step beyond ``C`` must be cut off by one of those walls, which
    verifies convexity up to that radius.
    """
    cand = {}
    for w in sorted(chambers):
        for s in range(W.p):
            if W.nf(w + (s,)) not in chambers:
                cand.setdefault(W.conjugate(w, s), w)
    side = {}
    for r in sorted(cand, key=lambda r: (len(r), r)):
        signs = {W.length(r + w) > len(w) for w in chambers}
        if len(signs) > 1:
            raise NotConvexError(f"chambers on both sides of wall {W.label(r)}", witness=W.names(r))
        side[r] = signs.pop()
    if check_ball:
        radius = max(len(w) for w in chambers) + 1
        for u in W.ball(radius):
            if u in chambers:
                continue
            if not any((W.length(r + u) > len(u)) != side[r] for r in side):
                raise NotConvexError(f"chamber {W.label(u)} is not cut off by any wall of C",
                                     witness=W.names(u))
    return sorted(side, key=lambda r: (len(r), r))


def supporting_walls(W: RACG, C: Iterable) -> list[tuple]:
    W = _group(W)
    return [W.names(r) for r in supporting_wall_indices(W, _chamber_set(W, C))]


def nerve_from_reflections(W: RACG, reflections: Sequence[tuple]) -> FlagComplex:
    labels = [W.label(r) for r in reflections]
    edges = []
    for i in range(len(reflections)):
        for j in range(i + 1, len(reflections)):
            a, b = reflections[i], reflections[j]
            if not W.reduce(a + b + a + b):
                edges.append((labels[i], labels[j]))
    return FlagComplex(labels, edges)


def nerve_of_convex_union(W: RACG, C: Iterable) -> FlagComplex:
    """Nerve of the reflection group generated by the supporting walls of ``C``."""
    W = _group(W)
    return nerve_from_reflections(W, supporting_wall_indices(W, _chamber_set(W, C)))


def iterated_double_domain(W: RACG, s1, s2, N: int) -> list[tuple]:
    """First ``N`` elements of ``1, s1, s1 s2, s1 s2 s1, ...``."""
    W = _group(W)
    a, b = W.parse([s1])[0], W.parse([s2])[0]
    if a == b or W.commute(a, b):
        raise PreconditionError("the two generators must be distinct and not joined by an edge")
    if N < 1:
        raise PreconditionError("N must be at least 1")
    out, w = [], ()
    for k in range(N):
        out.append(W.names(w))
        w = w + ((a, b)[k % 2],)
    return out
