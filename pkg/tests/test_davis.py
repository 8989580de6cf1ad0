from fractions import Fraction

import pytest

from racgkit.coxeter import RACG
from racgkit.davis import (chi_orb_consistency, commutator_cover, coset_vertices, cover_cell_count,
                           cube, davis_ball, kappa, links_match_nerve, npc_check, vertex_links)
from racgkit.errors import PreconditionError, ResourceLimitError
from racgkit.homology import betti, has_sphere_homology, reduced_betti
from racgkit.simplicial import FlagComplex, octahedron, points, polygon, simplex
from racgkit import corpus

from oracles import grid_counts, kappa_from_fvector

SMALL = [n for n in corpus.names() if len(corpus.get(n).vertices) <= 12]


class TestKappa:
    @pytest.mark.parametrize("name", corpus.names())
    def test_matches_oracle(self, name):
        L = corpus.get(name)
        assert kappa(L) == kappa_from_fvector(L.f_vector)

    def test_values(self):
        assert kappa(FlagComplex()) == 1
        assert kappa(polygon(5)) == Fraction(-1, 4)
        assert kappa(corpus.get("k33")) == Fraction(1, 4)
        assert kappa(octahedron(3)) == 0


class TestDavisBall:
    @pytest.mark.parametrize("n", range(0, 6))
    def test_square_is_a_grid(self, n):
        assert davis_ball(RACG(polygon(4)), n).counts == grid_counts(n)

    def test_small_cases(self):
        assert davis_ball(RACG(points(1)), 1).counts == (2, 1)
        assert davis_ball(RACG(points(1)), 0).counts == (1,)
        assert davis_ball(RACG(points(2)), 2).counts == (5, 4)

    def test_representatives_truncation_contains_stars(self):
        X = davis_ball(RACG(polygon(5)), 0, truncation="representatives")
        # squares at the identity: 1 + 5 + 5 vertices, 5 + 10 edges
        assert X.counts == (11, 15, 5)
        assert not reduced_betti(X)

    @pytest.mark.parametrize("name,N", [("pentagon", 4), ("k33", 3), ("octahedron", 3),
                                        ("icosahedron", 2), ("three-points", 3)])
    def test_contractible(self, name, N):
        X = davis_ball(RACG(corpus.get(name)), N)
        X.check()
        assert not reduced_betti(X)

    def test_cells_are_cubes(self):
        W = RACG(polygon(5))
        X = davis_ball(W, 3)
        for c in X.cells:
            assert len(coset_vertices(W, c)) == 2 ** X.dims[c]
            assert X.cell_vertices(c) == {(v, ()) for v in coset_vertices(W, c)}

    def test_bad_arguments(self):
        with pytest.raises(PreconditionError):
            davis_ball(RACG(points(2)), -1)
        with pytest.raises(PreconditionError):
            davis_ball(RACG(points(2)), 2, truncation="nope")


class TestCommutatorCover:
    def test_counts(self):
        assert commutator_cover(points(1)).counts == (2, 1)
        assert commutator_cover(points(2)).counts == (4, 4)
        assert commutator_cover(polygon(4)).counts == (16, 32, 16)
        assert commutator_cover(polygon(5)).counts == (32, 80, 40)
        assert commutator_cover(octahedron(3)).counts == (64, 192, 192, 64)

    def test_surfaces(self):
        assert list(betti(commutator_cover(polygon(4)))) == [1, 2, 1]
        # genus 5: chi = 32 - 80 + 40 = -8
        assert list(betti(commutator_cover(polygon(5)))) == [1, 10, 1]

    def test_octahedron_cover_is_a_3_torus(self):
        assert list(betti(commutator_cover(octahedron(3)))) == [1, 3, 3, 1]

    def test_cube(self):
        assert cube(3).counts == (8, 12, 6, 1)
        assert cube(0).counts == (1,)
        assert not reduced_betti(cube(3))

    @pytest.mark.parametrize("name", SMALL)
    def test_cell_count_formula(self, name):
        L = corpus.get(name)
        assert sum(commutator_cover(L).counts) == cover_cell_count(L)

    def test_resource_limit(self):
        with pytest.raises(ResourceLimitError):
            commutator_cover(points(5), limit=4)

    def test_env_limit(self, monkeypatch):
        monkeypatch.setenv("RACGKIT_MAX_P", "3")
        with pytest.raises(ResourceLimitError):
            commutator_cover(points(4))


class TestLinks:
    @pytest.mark.parametrize("name", ["square", "pentagon", "k33", "octahedron", "susp-pentagon"])
    def test_links_are_the_nerve(self, name):
        L = corpus.get(name)
        X = commutator_cover(L)
        assert npc_check(X)
        assert links_match_nerve(X, L)

    def test_chi(self):
        for name in ["pentagon", "k33", "octahedron", "icosahedron"]:
            r = chi_orb_consistency(corpus.get(name))
            assert r.ok, name

    def test_cube_corner_link_is_a_simplex(self):
        lk = vertex_links(cube(3))["+++"]
        assert lk.f_vector == (1, 3, 3, 1)

    def test_non_npc_detected(self):
        # the surface of a 3-cube: each corner link is a hollow triangle
        X = cube(3)
        cells = [c for c in X.cells if X.dims[c] == 2]
        Y = X.subcomplex(cells)
        assert not npc_check(Y)

    def test_sphere_links_in_cover(self):
        X = commutator_cover(polygon(6))
        for lk in vertex_links(X).values():
            assert has_sphere_homology(lk, 1)
