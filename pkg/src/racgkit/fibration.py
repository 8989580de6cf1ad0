"""Local octahedral model and the positive-region test for fibering commutator covers.

Two independent pieces live here.

The local model: functions ``lambda: {1..n} -> {-1, 0, +1}`` index quadrants of
the coordinate hyperplane arrangement and simplices of the octahedral sphere
``O^{n-1}``.  :func:`ball_B` and :func:`sheet` build the balls ``B(l)`` and the
sheets ``P(l)``.

The domain: the iterated double ``D`` of the fundamental chamber along every
generator is a fundamental domain for the commutator subgroup.  Its
supporting walls fall into classes (one per standard hypersurface in the
cover); choosing a sign per class splits the boundary of ``D`` into positive
and negative regions, and :func:`dplus_check` tests whether the positive region
is a disk.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import comb

from .coxeter import RACG, nerve_from_reflections, supporting_wall_indices
from .errors import LemmaViolation, PreconditionError, ResourceLimitError
from .homology import is_homology_ball, reduced_betti
from .simplicial import FlagComplex, SimplicialComplex

MAX_CLASSES = 20
MAX_CLASSES_ENV = "RACGKIT_MAX_CLASSES"


# -- local model ------------------------------------------------------------------

@dataclass(frozen=True)
class SignedFunction:
    """``lambda`` as a tuple of -1/0/+1 values for coordinates ``1..n``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v not in (-1, 0, 1) for v in self.values):
            raise PreconditionError("values must be -1, 0 or +1")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def zeros(self) -> int:
        return sum(1 for v in self.values if v == 0)

    @property
    def negatives(self) -> int:
        return sum(1 for v in self.values if v < 0)

    def simplex(self) -> tuple:
        """Vertices ``+i`` / ``-i`` of the octahedral sphere spanned by the quadrant."""
        return tuple(("+" if v > 0 else "-") + str(i + 1) for i, v in enumerate(self.values) if v)

    def __str__(self):
        return "".join({1: "+", 0: "0", -1: "-"}[v] for v in self.values)


def signed_functions(n: int, zeros: int | None = None) -> list[SignedFunction]:
    out = [SignedFunction(v) for v in itertools.product((1, 0, -1), repeat=n)]
    return [f for f in out if zeros is None or f.zeros == zeros]


def _check_n(n: int):
    if n < 2:
        raise PreconditionError("n must be at least 2")


def octahedron_model(n: int) -> dict:
    """Map each ``lambda`` with no zeros to its facet of ``O^{n-1}``."""
    _check_n(n)
    return {f: f.simplex() for f in signed_functions(n, 0)}


def octahedral_sphere(n: int) -> SimplicialComplex:
    _check_n(n)
    verts = [s + str(i) for i in range(1, n + 1) for s in "+-"]
    return SimplicialComplex(list(octahedron_model(n).values()), vertices=verts)


def quadrant_count(n: int) -> int:
    """Number of (n-1)-dimensional quadrants, counted over all hyperplanes."""
    return len(signed_functions(n, 1))


def _check_l(n: int, l: int):
    _check_n(n)
    if not 0 <= l <= n - 1:
        raise PreconditionError(f"l must be in 0..{n - 1}")


def ball_B(n: int, l: int) -> SimplicialComplex:
    """Union of the facets of ``O^{n-1}`` with at most ``l`` negative entries."""
    _check_l(n, l)
    return SimplicialComplex([f.simplex() for f in signed_functions(n, 0) if f.negatives <= l])


def boundary_B(n: int, l: int) -> SimplicialComplex:
    """The (n-2)-simplices with one zero and exactly ``l`` negative entries."""
    _check_l(n, l)
    return SimplicialComplex([f.simplex() for f in signed_functions(n, 1) if f.negatives == l])


def topological_boundary(K: SimplicialComplex) -> SimplicialComplex:
    """Codimension-one faces lying in exactly one facet of a pure complex."""
    top = K.simplices_of_dim(K.dim)
    count: dict = {}
    for s in top:
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            count[f] = count.get(f, 0) + 1
    return SimplicialComplex([f for f, c in count.items() if c == 1])


def boundary_count(n: int, l: int) -> int:
    return n * comb(n - 1, l)


def sheet(n: int, l: int, apex: str = "o") -> SimplicialComplex:
    """The sheet ``P(l)``: the cone, with apex at the origin, on ``boundary_B(n, l)``."""
    base = boundary_B(n, l)
    return SimplicialComplex([s + (apex,) for s in base.maximal_simplices])


def sheets_through(f: SignedFunction) -> set[int]:
    """Indices ``l`` of the sheets containing the quadrant ``Q_f``."""
    zero = [i for i, v in enumerate(f.values) if v == 0]
    if not zero:
        return set()
    out = set()
    for keep in zero:
        for signs in itertools.product((1, -1), repeat=len(zero) - 1):
            out.add(f.negatives + sum(1 for s in signs if s < 0))
    return out


# -- fundamental domain -----------------------------------------------------------

@dataclass
class ChamberDomain:
    """Chambers of ``D(p)`` as index words plus the doubling log."""

    W: RACG
    chambers: list
    log: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.chambers)

    def names(self) -> list[tuple]:
        return [self.W.names(w) for w in self.chambers]

    @property
    def chamber_set(self) -> set:
        return set(self.chambers)

    def by_phi(self) -> dict:
        return {self.W.phi(w): w for w in self.chambers}


def doubling_domain(W, check_convex: bool = True) -> ChamberDomain:
    """``D(0) = K`` and ``D(i+1) = D(i) u s_{i+1} D(i)``.

    Checks that the ``2^p`` chambers map bijectively to ``(Z/2)^p`` under
    abelianization and, with ``check_convex``, that ``D`` is convex.
    """
    if not isinstance(W, RACG):
        W = RACG(W)
    if W.p > 16:
        raise ResourceLimitError(f"domain has 2^{W.p} chambers; limit is p <= 16")
    D = [()]
    log = []
    for s in range(W.p):
        D = D + [W.nf((s,) + w) for w in D]
        log.append((W.generators[s], len(D)))
    dom = ChamberDomain(W, D, log)
    if len(set(D)) != 2 ** W.p or len(dom.by_phi()) != 2 ** W.p:
        raise LemmaViolation("chambers of D do not map bijectively onto (Z/2)^p")
    if check_convex:
        supporting_wall_indices(W, set(D))
    return dom


@dataclass(frozen=True)
class Wall:
    """A supporting wall of ``D``: reflection, generator type and one boundary face."""

    reflection: tuple
    s: int
    face: tuple
    cls: tuple


def _class_key(W: RACG, w: tuple, s: int) -> tuple:
    st = W.comm_mask[s] | (1 << s)
    return (s, W.phi(w) & ~st)


def boundary_faces(D: ChamberDomain) -> list[tuple]:
    """Chamber faces ``(w, s)`` with ``w`` in ``D`` and ``ws`` outside."""
    W, C = D.W, D.chamber_set
    return [(w, s) for w in D.chambers for s in range(W.p) if W.nf(w + (s,)) not in C]


def face_pairing(D: ChamberDomain) -> dict:
    """Pair ``(w, s)`` with ``(u, s)``, ``u`` the chamber with abelianization ``phi(w) + e_s``.

    The element ``u s w^-1`` of the commutator subgroup carries one face to
    the other.  Raises :class:`LemmaViolation` if a partner is not a boundary face.
    """
    W = D.W
    rep = D.by_phi()
    faces = set(boundary_faces(D))
    out = {}
    for w, s in sorted(faces):
        u = rep[W.phi(w) ^ (1 << s)]
        gamma = W.nf(u + (s,) + tuple(reversed(w)))
        if W.phi(gamma) != 0:
            raise LemmaViolation("pairing element is not in the commutator subgroup")
        if (u, s) not in faces:
            raise LemmaViolation(f"face {W.label(w)}|{W.generators[s]} has no partner")
        out[(w, s)] = ((u, s), gamma)
    return out


def supporting_walls_of(D: ChamberDomain) -> list[Wall]:
    if "walls" in D._cache:
        return list(D._cache["walls"])
    W = D.W
    walls: dict = {}
    for w, s in boundary_faces(D):
        r = W.conjugate(w, s)
        if r not in walls:
            walls[r] = Wall(r, s, (w, s), _class_key(W, w, s))
    D._cache["walls"] = sorted(walls.values(), key=lambda x: (len(x.reflection), x.reflection))
    return list(D._cache["walls"])


def domain_nerve(D: ChamberDomain) -> FlagComplex:
    """Nerve of the reflection group generated by the supporting walls of ``D``."""
    if "nerve" not in D._cache:
        D._cache["nerve"] = nerve_from_reflections(D.W, [w.reflection for w in supporting_walls_of(D)])
    return D._cache["nerve"]


def hypersurface_classes(D: ChamberDomain) -> list[tuple]:
    """Classes of supporting walls under the commutator subgroup, in a fixed order."""
    return sorted({w.cls for w in supporting_walls_of(D)})


def class_label(W: RACG, cls: tuple) -> str:
    s, mask = cls
    bits = "".join(W.generators[i] + "," for i in range(W.p) if mask >> i & 1).rstrip(",")
    return f"{W.generators[s]}[{bits}]"


def wall_is_positive(W: RACG, wall: Wall, sign: int) -> bool:
    """Normal of a class with sign +1 points to the side of odd ``s``-parity."""
    w, s = wall.face
    outward = W.phi(w + (s,)) >> s & 1
    return outward == (1 if sign > 0 else 0)


# -- positive regions --------------------------------------------------------------

def _chains(L: FlagComplex) -> list[tuple]:
    simplices = [frozenset(s) for s in L.simplices if s]
    by_size = sorted(simplices, key=len)
    out = []

    def extend(chain):
        out.append(tuple(chain))
        last = chain[-1]
        for t in by_size:
            if len(t) > len(last) and last < t:
                extend(chain + [t])

    for s in by_size:
        extend([s])
    return out


def _chain_label(L: FlagComplex, s: frozenset) -> str:
    return "{" + ",".join(L.sort(s)) + "}"


def boundary_region(L: FlagComplex, test) -> SimplicialComplex:
    """Chains of simplices of ``L`` whose smallest member passes ``test``.

    With ``L`` the nerve of a convex domain, the barycentric subdivision of
    ``L`` models the domain's boundary and the chains whose smallest simplex
    contains a vertex ``v`` model the face on the wall ``v``.
    """
    chains = [c for c in _chains(L) if test(c[0])]
    return SimplicialComplex([[_chain_label(L, s) for s in c] for c in chains])


def region_is_disk(L: FlagComplex, positive: set) -> dict:
    """Disk test for the region of ``|bsd L|`` made of the faces in ``positive``."""
    n = L.dim + 1
    pos = set(positive)
    Dp = boundary_region(L, lambda s: bool(s & pos))
    Dm = boundary_region(L, lambda s: bool(s - pos))
    X = boundary_region(L, lambda s: bool(s & pos) and bool(s - pos))
    ok_p = bool(Dp.vertices) and bool(is_homology_ball(Dp))
    ok_m = bool(Dm.vertices) and bool(is_homology_ball(Dm))
    ok_x = reduced_betti(X) == {n - 2: 1}
    return {"is_disk": ok_p and ok_m and ok_x, "D_plus": Dp, "D_minus": Dm, "intersection": X,
            "D_plus_ball": ok_p, "D_minus_ball": ok_m, "intersection_sphere": ok_x, "n": n}


@dataclass
class DplusReport:
    is_disk: bool
    positive_walls: list
    negative_walls: list
    orientation: dict
    D_plus: SimplicialComplex
    D_minus: SimplicialComplex
    intersection: SimplicialComplex
    n: int
    details: dict

    @property
    def verdict(self) -> str:
        if not self.is_disk:
            return "positive region is not a disk"
        msg = "the commutator cover fibers over the circle with fiber N_{1..m}"
        return msg + (" (homology-level only)" if self.n >= 4 else "")

    def __bool__(self):
        return self.is_disk


def dplus_check(W, D: ChamberDomain, orientation) -> DplusReport:
    """Classify the supporting walls of ``D`` by sign and test whether ``D_+`` is a disk.

    ``orientation`` maps each hypersurface class to +1 or -1; a sequence is
    taken in the order of :func:`hypersurface_classes`.
    """
    if not isinstance(W, RACG):
        W = RACG(W)
    classes = hypersurface_classes(D)
    if not isinstance(orientation, dict):
        orientation = list(orientation)
        if len(orientation) != len(classes):
            raise PreconditionError(f"need {len(classes)} signs, got {len(orientation)}")
        orientation = dict(zip(classes, orientation))
    missing = [c for c in classes if c not in orientation]
    if missing:
        raise PreconditionError("no sign for class " + class_label(W, missing[0]))
    if any(v not in (1, -1) for v in orientation.values()):
        raise PreconditionError("signs must be +1 or -1")
    walls = supporting_walls_of(D)
    LD = domain_nerve(D)
    pos = {W.label(w.reflection) for w in walls if wall_is_positive(W, w, orientation[w.cls])}
    res = region_is_disk(LD, pos)
    neg = [v for v in LD.vertices if v not in pos]
    return DplusReport(res["is_disk"], sorted(pos, key=LD.index.__getitem__), neg,
                       {class_label(W, c): orientation[c] for c in classes},
                       res["D_plus"], res["D_minus"], res["intersection"], res["n"],
                       {k: res[k] for k in ("D_plus_ball", "D_minus_ball", "intersection_sphere")})


def max_classes() -> int:
    try:
        return int(os.environ.get(MAX_CLASSES_ENV, MAX_CLASSES))
    except ValueError:
        return MAX_CLASSES


def search_orientations(W, D: ChamberDomain, limit: int | None = None) -> dict | None:
    """First sign assignment (all-plus first, then lexicographic) whose ``D_+`` is a disk."""
    if not isinstance(W, RACG):
        W = RACG(W)
    classes = hypersurface_classes(D)
    limit = max_classes() if limit is None else limit
    if len(classes) > limit:
        raise ResourceLimitError(f"{len(classes)} hypersurface classes exceeds the limit {limit}")
    for signs in itertools.product((1, -1), repeat=len(classes)):
        if dplus_check(W, D, signs).is_disk:
            return dict(zip(classes, signs))
    return None
