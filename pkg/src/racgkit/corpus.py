"""Named flag complexes used by the tests, demos and the ``corpus:NAME`` CLI scheme."""
from __future__ import annotations

import random
from functools import lru_cache

from .errors import PreconditionError
from .simplicial import (FlagComplex, complete_bipartite, cone, find_isomorphism, icosahedron,
                         join, link, minus, octahedron, points, polygon, simplex, suspension)


def subdivide_edge(S: FlagComplex, a: str, b: str, new: str = "m") -> FlagComplex:
    """Stellar subdivision of the edge ``ab`` of a 2-sphere."""
    if b not in S.adj[a]:
        raise PreconditionError(f"{a}{b} is not an edge")
    apexes = sorted(S.adj[a] & S.adj[b], key=S.index.__getitem__)
    edges = [e for e in S.sorted_edges() if set(e) != {a, b}]
    edges += [(new, x) for x in [a, b] + apexes]
    return FlagComplex(list(S.vertices) + [new], edges)


def _composite() -> FlagComplex:
    from .sphere2 import square_compose
    P = suspension(polygon(5))
    return square_compose(P, "v0", P, "v0", {x: x for x in P.adj["v0"]})


def _icosahedron_pair() -> FlagComplex:
    from .sphere2 import square_compose
    S = subdivide_edge(icosahedron(), "i0", "i1")
    return square_compose(S, "m", S, "m", {x: x for x in S.adj["m"]})


_BUILDERS = {
    "empty": lambda: FlagComplex(),
    "point": lambda: points(1),
    "two-points": lambda: points(2),
    "three-points": lambda: points(3),
    "edge": lambda: simplex(1),
    "triangle": lambda: simplex(2),
    "square": lambda: polygon(4),
    "pentagon": lambda: polygon(5),
    "hexagon": lambda: polygon(6),
    "k33": lambda: complete_bipartite(3, 3),
    "octahedron": lambda: octahedron(3),
    "octahedron-s3": lambda: octahedron(4),
    "icosahedron": icosahedron,
    "icosahedron-minus-vertex": lambda: minus(icosahedron(), ["i0"]),
    "icosahedron-subdivided": lambda: subdivide_edge(icosahedron(), "i0", "i1"),
    "susp-pentagon": lambda: suspension(polygon(5)),
    "cone-pentagon": lambda: cone(polygon(5)),
    "pentagon-join-pentagon": lambda: join(polygon(5), polygon(5)),
    "composite-sphere": _composite,
    "icosahedron-pair": _icosahedron_pair,
}

SPHERES_2D = ["octahedron", "icosahedron", "icosahedron-subdivided", "susp-pentagon",
              "composite-sphere", "icosahedron-pair"]


def names() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> FlagComplex:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise PreconditionError(f"unknown corpus entry {name!r}; known: {', '.join(_BUILDERS)}") from None


# -- generated families ------------------------------------------------------------

S2_SEEDS = ["octahedron", "susp-pentagon", "icosahedron-subdivided"] + [f"susp-{m}-gon" for m in (4, 6, 7, 8)]


def _seed_sphere(name: str) -> FlagComplex:
    if name.startswith("susp-") and name.endswith("-gon"):
        return suspension(polygon(int(name[5:-4])))
    return get(name)


def random_square_composite(rng: random.Random, pieces: int = 2) -> tuple[FlagComplex, list]:
    """Glue ``pieces`` random seed spheres at random valence-4 vertices.

    The link matching is a random rotation or reflection of the 4-cycle.
    Stops early if the sphere built so far has no valence-4 vertex left.
    Returns the sphere and a log of ``(seed, vertex, vertex, matching)`` steps.
    """
    from .sphere2 import _cycle_order, square_compose, valence4
    name = rng.choice(S2_SEEDS)
    S = _seed_sphere(name)
    log = [name]
    for _ in range(pieces - 1):
        if not valence4(S):
            break
        other = rng.choice(S2_SEEDS)
        S2 = _seed_sphere(other)
        a, b = rng.choice(valence4(S)), rng.choice(valence4(S2))
        ca, cb = _cycle_order(S, S.adj[a]), _cycle_order(S2, S2.adj[b])
        shift, flip = rng.randrange(4), rng.random() < 0.5
        if flip:
            cb = cb[::-1]
        matching = {ca[i]: cb[(i + shift) % 4] for i in range(4)}
        S = square_compose(S, a, S2, b, matching)
        log.append((other, a, b, matching))
    return S, log


def random_square_composites(count: int, seed: int = 0, max_pieces: int = 4) -> list[FlagComplex]:
    rng = random.Random(seed)
    return [random_square_composite(rng, rng.randint(2, max_pieces))[0] for _ in range(count)]


def s3_corpus() -> dict:
    """Flag 3-spheres: joins of polygons, suspensions of flag 2-spheres, and vertex composites."""
    out = {}
    for m in range(4, 8):
        for n in range(m, 8):
            out[f"{m}-gon*{n}-gon"] = join(polygon(m, "a"), polygon(n, "b"))
    for name in SPHERES_2D:
        out[f"susp({name})"] = suspension(get(name))
    out["octahedron-s3"] = octahedron(4)
    from .sphere2 import square_compose
    bases = [("5-gon*5-gon", "a0"), ("4-gon*5-gon", "b0"), ("susp(susp-pentagon)", "n"),
             ("octahedron-s3", "+1"), ("susp(icosahedron)", "i0")]
    for x, (n1, v1) in enumerate(bases):
        for n2, v2 in bases[x:]:
            A, B = out[n1], out[n2]
            iso = find_isomorphism(link(A, [v1]), link(B, [v2]))
            if iso is None:
                continue
            out[f"{n1}[{v1}]#{n2}[{v2}]"] = square_compose(A, v1, B, v2, iso)
    return out
