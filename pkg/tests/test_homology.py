import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from racgkit.errors import NotPureError, PreconditionError
from racgkit.homology import (BettiVector, betti, greedy_collapse, has_sphere_homology, is_GHD,
                              is_GHS, is_homology_ball, is_pseudomanifold, reduced_betti,
                              relative_betti, render, spherical_links_codim)
from racgkit.simplicial import (FlagComplex, SimplicialComplex, cone, icosahedron, minus,
                                octahedron, points, polygon, simplex, suspension)
from racgkit import corpus


def numpy_betti(maximal):
    """Betti numbers from dense boundary matrices and floating-point rank."""
    faces = set()
    for m in maximal:
        for k in range(1, len(m) + 1):
            faces.update(tuple(sorted(c)) for c in itertools.combinations(m, k))
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    top = max(by_dim, default=-1)
    idx = {d: {f: i for i, f in enumerate(sorted(fs))} for d, fs in by_dim.items()}
    ranks = {}
    for d in range(1, top + 1):
        M = np.zeros((len(idx[d - 1]), len(idx[d])))
        for f, j in idx[d].items():
            for i in range(len(f)):
                M[idx[d - 1][f[:i] + f[i + 1:]], j] = (-1) ** i
        ranks[d] = np.linalg.matrix_rank(M)
    return [len(idx[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(top + 1)]


TORUS = [tuple((i + d) % 7 for d in shift) for i in range(7) for shift in ((0, 1, 3), (0, 2, 3))]
RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 3, 5), (3, 4, 6),
       (4, 5, 2), (5, 6, 3), (6, 2, 4)]


def complex_of(facets):
    return SimplicialComplex([tuple(str(v) for v in f) for f in facets])


@st.composite
def random_complexes(draw):
    n = draw(st.integers(1, 7))
    facets = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=4),
                           min_size=1, max_size=8))
    return [tuple(sorted(f)) for f in facets]


class TestBetti:
    def test_torus(self):
        assert list(betti(complex_of(TORUS))) == [1, 2, 1]

    def test_projective_plane_over_rationals(self):
        assert list(betti(complex_of(RP2))) == [1, 0, 0]

    def test_pentagon_and_points(self):
        assert list(betti(polygon(5))) == [1, 1]
        assert list(betti(points(3))) == [3]

    def test_empty(self):
        assert reduced_betti(FlagComplex()) == {-1: 1}
        assert has_sphere_homology(FlagComplex(), -1)

    @settings(max_examples=80, deadline=None)
    @given(random_complexes())
    def test_against_numpy(self, facets):
        assert [int(b) for b in betti(complex_of(facets))] == numpy_betti(facets)

    @pytest.mark.parametrize("name", corpus.SPHERES_2D)
    def test_spheres(self, name):
        assert has_sphere_homology(corpus.get(name), 2)

    def test_relative(self):
        D = SimplicialComplex([("a", "b", "c")])
        B = SimplicialComplex([("a", "b"), ("b", "c"), ("a", "c")])
        assert list(relative_betti(D, B)) == [0, 0, 1]


class TestBettiVector:
    def test_render(self):
        assert render(Fraction(1, 4)) == "1/4"
        assert render(2) == "2"
        assert render(None) == "?"
        assert BettiVector((1, None)).render() == ["1", "?"]

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            BettiVector((-1,))

    def test_trailing_degrees_are_zero(self):
        assert BettiVector((1,))[5] == 0


class TestManifolds:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_octahedral_spheres(self, n):
        assert is_GHS(octahedron(n + 1), n)

    def test_torus_is_not_a_sphere(self):
        assert not is_GHS(complex_of(TORUS), 2)
        assert is_pseudomanifold(complex_of(TORUS))

    def test_dimension_mismatch(self):
        with pytest.raises(PreconditionError):
            is_GHS(polygon(5), 2)

    def test_disk(self):
        D = minus(icosahedron(), ["i0"])
        boundary = FlagComplex(sorted(icosahedron().adj["i0"]),
                               [e for e in D.sorted_edges()
                                if set(e) <= icosahedron().adj["i0"]])
        assert is_GHD(D, boundary, 2)
        assert not is_GHD(D, FlagComplex(), 2)

    def test_cone_is_disk_with_base_boundary(self):
        assert is_GHD(cone(polygon(6)), polygon(6), 2)

    def test_two_tetrahedra_wedged(self):
        a = [("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")]
        b = [("a", "x", "y"), ("a", "x", "z"), ("a", "y", "z"), ("x", "y", "z")]
        K = SimplicialComplex(a + b)
        assert is_pseudomanifold(K)
        assert not is_GHS(K, 2)

    def test_non_pure_raises(self):
        K = SimplicialComplex([("a", "b", "c"), ("c", "d")])
        with pytest.raises(NotPureError):
            is_pseudomanifold(K)

    def test_spherical_links(self):
        assert spherical_links_codim(suspension(polygon(5)), 3)
        assert spherical_links_codim(complex_of(TORUS), 2)
        assert not spherical_links_codim(complex_of(TORUS), 3)


class TestBalls:
    def test_simplex_collapses(self):
        r = is_homology_ball(simplex(3))
        assert r and r.collapsible and r.verdict == "collapsible ball"

    def test_circle_is_not_a_ball(self):
        r = is_homology_ball(polygon(5))
        assert not r and r.verdict == "not a ball"

    def test_cone_collapses_to_a_point(self):
        assert len(greedy_collapse(cone(polygon(7)))) == 1

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            is_homology_ball(FlagComplex())
