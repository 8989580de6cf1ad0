from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from racgkit.davis import kappa
from racgkit.errors import ParseError, PreconditionError
from racgkit.l2 import (Cone, DisjointUnion, DoubleV, Empty, Join, MGon, Opaque, PlanarHoles,
                        Points, Simplex, Susp, atiyah_check, complex_l2, conjectural_surface_prediction,
                        denominators_ok, l2_betti, parse_expr, planar_betti, recognize,
                        vanishing_rules)
from racgkit.simplicial import complete_bipartite, double_along_vertex, icosahedron, polygon
from racgkit import corpus


def values(r):
    return [r.betti[i] for i in range(len(r.betti))]


leaf = st.one_of(st.integers(2, 6).map(Points), st.integers(4, 7).map(MGon),
                 st.integers(0, 2).map(Simplex))
exprs = st.recursive(leaf, lambda sub: st.one_of(
    st.tuples(sub, sub).map(lambda t: Join(*t)),
    sub.map(Cone), sub.map(Susp)), max_leaves=3)


class TestRules:
    def test_empty(self):
        assert values(l2_betti(Empty())) == [1]

    def test_simplex(self):
        assert values(l2_betti(Simplex(2)))[0] == F(1, 8)

    @pytest.mark.parametrize("k", range(2, 11))
    def test_points(self, k):
        r = l2_betti(Points(k))
        assert r[1] == F(k, 2) - 1 and r[0] == 0

    def test_single_point(self):
        assert l2_betti(Points(1))[0] == F(1, 2)

    def test_k33(self):
        assert values(l2_betti(Join(Points(3), Points(3)))) == [0, 0, F(1, 4)]

    def test_pentagon(self):
        r = l2_betti(MGon(5))
        assert values(r) == [0, F(1, 4), 0]
        assert "Atiyah completion" in r.provenance

    def test_pentagon_join(self):
        assert values(l2_betti(Join(MGon(5), MGon(5)))) == [0, 0, F(1, 16), 0, 0]

    def test_cone_halves(self):
        assert l2_betti(Cone(Points(4)))[1] == F(1, 2)

    def test_suspension_vanishes(self):
        assert all(v == 0 for v in values(l2_betti(Susp(MGon(7)))))

    def test_disjoint_union(self):
        r = l2_betti(DisjointUnion(MGon(5), MGon(5)))
        # two infinite factors: beta_1 adds and picks up one more
        assert r[1] == F(1, 4) + F(1, 4) + 1

    def test_disjoint_union_with_simplex_side(self):
        # the union rule is silent on beta_1; only Euler characteristic pins it down
        r = l2_betti(DisjointUnion(MGon(5), Simplex(0)))
        assert r.provenance[1] == "Atiyah completion"
        assert r[1] == F(3, 4)

    def test_double(self):
        for m in range(4, 9):
            assert l2_betti(DoubleV(MGon(m), "v0"))[1] == 2 * l2_betti(MGon(m))[1]

    def test_mgon_needs_four_sides(self):
        with pytest.raises(PreconditionError):
            MGon(3)


class TestPlanar:
    def test_one_pentagon(self):
        r = planar_betti(0, [5])
        assert r[1] == F(1, 8)
        assert r.relative[2] == F(1, 8)

    def test_two_squares(self):
        r = planar_betti(1, [4, 4])
        assert r[1] == 0
        assert r.relative[2] == 1

    def test_hole_count(self):
        with pytest.raises(PreconditionError):
            PlanarHoles(1, (5,))


class TestConsistency:
    @settings(max_examples=60, deadline=None)
    @given(exprs)
    def test_atiyah_and_denominators(self, e):
        r = l2_betti(e)
        assert denominators_ok(r)
        if r.complete:
            assert atiyah_check(r).ok
            assert r.kappa == kappa(e.realize())

    @settings(max_examples=40, deadline=None)
    @given(exprs, exprs)
    def test_kunneth(self, a, b):
        ra, rb = l2_betti(a), l2_betti(b)
        if not (ra.complete and rb.complete):
            return
        rj = l2_betti(Join(a, b))
        for k in range(len(rj.betti)):
            conv = sum((ra.betti[i] * rb.betti[k - i] for i in range(k + 1)), F(0))
            assert rj.betti[k] == conv

    @pytest.mark.parametrize("ms", [(4, 5), (5, 5), (5, 6, 7)])
    def test_poincare_duality_on_joins(self, ms):
        e = MGon(ms[0])
        for m in ms[1:]:
            e = Join(e, MGon(m))
        vals = values(l2_betti(e))
        # the join of m-gons is a sphere of dimension 2*len(ms) - 1
        assert len(vals) == 2 * len(ms) + 1
        assert vals == vals[::-1]

    def test_fvector_tracks_realization(self):
        e = Join(Cone(Points(3)), Susp(MGon(5)))
        assert l2_betti(e).fvector == e.realize().f_vector


class TestRecognize:
    def test_k_mn(self):
        e = recognize(complete_bipartite(3, 4))
        assert l2_betti(e)[2] == F(1, 4) * 2

    def test_polygon(self):
        assert recognize(polygon(6)) == MGon(6)

    def test_unrecognised(self):
        assert recognize(icosahedron()) is None
        assert isinstance(recognize(icosahedron(), partial=True), Opaque)

    @pytest.mark.parametrize("name", corpus.names())
    def test_round_trip(self, name):
        from racgkit.simplicial import is_isomorphic
        L = corpus.get(name)
        e = recognize(L, partial=True)
        assert is_isomorphic(e.realize(), L)

    def test_icosahedron_vanishing(self):
        r = vanishing_rules(icosahedron())
        assert r.betti[0] == 0 and r.betti[3] == 0
        assert r.betti[1] is None and r.betti[2] is None

    def test_simplex_rules_silent(self):
        assert vanishing_rules(corpus.get("triangle")).betti[0] is None

    def test_icosahedron_via_sphere_theorem(self):
        assert values(complex_l2(icosahedron())) == [0, 0, 0, 0]


class TestParse:
    def test_examples(self):
        assert parse_expr("(join (points 3) (points 3))") == Join(Points(3), Points(3))
        assert parse_expr("(join (mgon 5) (mgon 5) (mgon 5))") == Join(MGon(5), Join(MGon(5), MGon(5)))
        assert parse_expr("(double (mgon 5) v0)") == DoubleV(MGon(5), "v0")
        assert parse_expr("(planar 0 5)") == PlanarHoles(0, (5,))

    def test_str_round_trip(self):
        e = Join(Cone(Points(3)), Susp(MGon(5)))
        assert parse_expr(str(e)) == e

    @pytest.mark.parametrize("text", ["", "(points)", "(points x)", "(mgon 3)", "(join (points 2))",
                                      "(frob 1)", "(points 2", "(points 2) junk"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_expr(text)


def test_conjecture_is_labelled():
    assert conjectural_surface_prediction(2)["status"] == "conjectural prediction"
