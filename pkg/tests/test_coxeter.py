import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from racgkit.coxeter import (RACG, ball, is_reflection, iterated_double_domain,
                             nerve_of_convex_union, normal_form, spherical_cosets,
                             supporting_walls, wall_halfspace, word_length)
from racgkit.errors import NotConvexError, PreconditionError
from racgkit.simplicial import (FlagComplex, double_along_vertex, is_isomorphic, points,
                                polygon, simplex)
from racgkit import corpus

from oracles import bfs_ball, element_key, raw_words, tits_matrices


def atlas(max_nodes):
    for g in nx.graph_atlas_g():
        if 1 <= len(g) <= max_nodes:
            yield FlagComplex([f"s{v}" for v in g.nodes], [(f"s{a}", f"s{b}") for a, b in g.edges])


def oracle(L):
    return tits_matrices(list(L.vertices), L.edges)


class TestNormalForm:
    def test_involution(self):
        W = RACG(points(2))
        assert normal_form(W, ["p0", "p0"]) == ()
        assert normal_form(W, "p0 p1 p1 p0") == ()

    def test_commuting_letters_sorted(self):
        W = RACG(simplex(1))
        assert normal_form(W, ["x1", "x0"]) == ("x0", "x1")

    def test_free_product_keeps_order(self):
        W = RACG(points(2))
        assert normal_form(W, ["p1", "p0"]) == ("p1", "p0")

    def test_cancellation_across_commuting_letters(self):
        W = RACG(polygon(4))
        # v0 commutes with v1 and v3
        assert normal_form(W, "v0 v1 v3 v0") == ("v1", "v3")
        assert normal_form(W, "v0 v2 v0") == ("v0", "v2", "v0")

    def test_unknown_generator(self):
        with pytest.raises(PreconditionError):
            normal_form(RACG(points(2)), ["q"])

    @pytest.mark.parametrize("L", list(atlas(4)), ids=str)
    def test_tits_oracle_radius_4(self, L):
        W, mats = RACG(L), oracle(L)
        nf_of = {}
        for word in raw_words(W.p, 4):
            k = element_key(mats, word)
            nf = W.nf(word)
            assert nf_of.setdefault(k, nf) == nf

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_properties(self, data):
        L = corpus.get(data.draw(st.sampled_from(["pentagon", "k33", "octahedron", "icosahedron"])))
        W = RACG(L)
        u = tuple(data.draw(st.lists(st.integers(0, W.p - 1), max_size=8)))
        v = tuple(data.draw(st.lists(st.integers(0, W.p - 1), max_size=8)))
        nu = W.nf(u)
        assert W.nf(nu) == nu
        assert W.nf(u + W.inv(nu)) == ()
        assert W.mul(W.mul(u, v), W.inv(v)) == nu
        assert len(nu) <= len(u) and (len(u) - len(nu)) % 2 == 0
        mats = oracle(L)
        assert element_key(mats, u) == element_key(mats, nu)


class TestBalls:
    @pytest.mark.parametrize("name,n", [("pentagon", 3), ("square", 4), ("k33", 3), ("two-points", 5)])
    def test_ball_size_matches_bfs(self, name, n):
        L = corpus.get(name)
        assert len(RACG(L).ball(n)) == len(bfs_ball(oracle(L), n))

    def test_pentagon_ball_3(self):
        assert len(ball(RACG(polygon(5)), 3)) == 61

    def test_ball_lengths_are_exact(self):
        W = RACG(polygon(5))
        for w in W.ball(4):
            assert word_length(W, W.names(w)) == len(w)

    def test_negative_radius(self):
        with pytest.raises(PreconditionError):
            RACG(points(2)).ball(-1)


class TestCosets:
    def brute_cosets(self, W, N, mats):
        """Cosets as sets of matrix keys; enumerate by right-multiplying the whole subgroup."""
        out = set()
        simplices = [tuple(W.nerve.index[v] for v in s) for s in W.nerve.simplices]
        for w in W.ball(N):
            for s in simplices:
                sub = [()]
                for g in s:
                    sub += [x + (g,) for x in sub]
                keys = frozenset(element_key(mats, w + x) for x in sub)
                if min(len(W.nf(w + x)) for x in sub) == len(w):
                    out.add((keys, s))
        return out

    @pytest.mark.parametrize("name", ["square", "pentagon", "triangle"])
    def test_against_brute_force(self, name):
        L = corpus.get(name)
        W, mats = RACG(L), oracle(L)
        P = spherical_cosets(W, 3)
        brute = self.brute_cosets(W, 3, mats)
        assert len(P) == len(brute)

    def test_order(self):
        W = RACG(polygon(5))
        P = spherical_cosets(W, 2)
        cosets = P.elements()
        for a in cosets:
            assert P.leq(a, a)
        v = next(c for c in cosets if c.rep == () and c.simplex == ())
        e = next(c for c in cosets if c.rep == () and c.simplex == ("v0", "v1"))
        assert P.leq(v, e) and not P.leq(e, v)


class TestWalls:
    def test_reflections(self):
        W = RACG(polygon(5))
        assert is_reflection(W, "v0")
        assert is_reflection(W, "v2 v0 v2")
        assert not is_reflection(W, "v0 v2")
        assert not is_reflection(W, [])

    def test_halfspace(self):
        W = RACG(polygon(5))
        assert wall_halfspace(W, "v0", []) == "+"
        assert wall_halfspace(W, "v0", "v0") == "-"
        with pytest.raises(PreconditionError):
            wall_halfspace(W, "v0 v2", [])

    def test_single_chamber_walls_are_generators(self):
        W = RACG(polygon(5))
        assert sorted(supporting_walls(W, [()])) == [(f"v{i}",) for i in range(5)]

    def test_non_convex_union(self):
        W = RACG(points(2))
        with pytest.raises(NotConvexError) as exc:
            supporting_walls(W, [(), ("p0", "p1")])
        assert exc.value.witness

    @pytest.mark.parametrize("m", range(4, 9))
    def test_double_nerve(self, m):
        L = polygon(m)
        N = nerve_of_convex_union(RACG(L), [(), ("v0",)])
        assert is_isomorphic(N, double_along_vertex(L, "v0"))

    def test_iterated_doubling(self):
        W = RACG(polygon(5))
        D = iterated_double_domain(W, "v0", "v2", 4)
        assert D == [(), ("v0",), ("v0", "v2"), ("v0", "v2", "v0")]
        with pytest.raises(PreconditionError):
            iterated_double_domain(W, "v0", "v1", 3)
