from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ghostline import ghost_series as ghost
from ghostline import newton
from ghostline.valuation import INF
from ghostline.weight_space import Boundary, Classical, Perturbed, new_context

C0 = new_context(7, 2, 0)
C4 = new_context(7, 2, 4)


class TestLowerConvexHull:
    def test_three_point_examples(self):
        np_ = newton.lower_convex_hull([(0, 0), (1, 1), (2, 3)])
        assert [v for v in np_.vertices] == [(0, 0), (1, 1), (2, 3)]
        assert np_.slopes == ((Fraction(1), 1), (Fraction(2), 1))

        np_ = newton.lower_convex_hull([(0, 0), (1, 5), (2, 3)])
        assert np_.vertices == ((0, 0), (2, 3))
        assert np_.slopes == ((Fraction(3, 2), 2),)

        np_ = newton.lower_convex_hull([(0, 0), (1, INF), (2, 4)])
        assert np_.vertices == ((0, 0), (2, 4))

    def test_collinear_points_are_not_vertices(self):
        np_ = newton.lower_convex_hull([(0, 0), (1, 1), (2, 2), (3, 5)])
        assert np_.vertices == ((0, 0), (2, 2), (3, 5))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            newton.lower_convex_hull([])
        with pytest.raises(ValueError):
            newton.lower_convex_hull([(0, INF), (1, INF)])
        with pytest.raises(ValueError):
            newton.lower_convex_hull([(0, 0), (0, 1)])

    @given(
        st.lists(
            st.tuples(st.integers(0, 30), st.fractions(min_value=-20, max_value=20)),
            min_size=1,
            max_size=25,
            unique_by=lambda t: t[0],
        )
    )
    @settings(max_examples=200)
    def test_idempotent_and_supporting(self, pts):
        np_ = newton.lower_convex_hull(pts)
        again = newton.lower_convex_hull(np_.vertices)
        assert again.vertices == np_.vertices
        # every input point lies on or above the hull
        for x, y in pts:
            for (x0, y0), (x1, y1) in zip(np_.vertices, np_.vertices[1:]):
                if x0 <= x <= x1:
                    assert (y - y0) * (x1 - x0) >= (y1 - y0) * (x - x0)
        # slopes strictly increase and widths add up
        slopes = [s for s, _ in np_.slopes]
        assert slopes == sorted(set(slopes))
        assert sum(w for _, w in np_.slopes) == np_.vertices[-1][0] - np_.vertices[0][0]


def hull_value(np_, x):
    for (x0, y0), (x1, y1) in zip(np_.vertices, np_.vertices[1:]):
        if x0 <= x <= x1:
            return y0 + Fraction(y1 - y0, x1 - x0) * (x - x0)
    raise AssertionError(f"x = {x} outside hull")


class TestGhostPolygon:
    def test_regime_straight_line(self):
        np_, _ = newton.np_of_ghost_auto(C4, Perturbed(18, Fraction(7)), 5)
        assert [hull_value(np_, x) for x in range(1, 6)] == [1, 9, 17, 25, 33]
        assert [x for x, _ in np_.vertices if 1 <= x <= 5] == [1, 5]
        assert newton.slope_at(np_, 3) == 8 and not newton.is_vertex(np_, 3)

    def test_regime_three_segments(self):
        r = Fraction(4)
        np_, _ = newton.np_of_ghost_auto(C4, Perturbed(18, r), 5)
        assert [hull_value(np_, x) for x in range(1, 6)] == [1, 3 + r, 11 + r, 19 + r, 33]
        assert [x for x, _ in np_.vertices if 1 <= x <= 5] == [1, 2, 4, 5]
        assert [newton.slope_at(np_, i) for i in range(2, 6)] == [2 + r, 8, 8, 14 - r]
        assert not newton.is_vertex(np_, 3)
        assert newton.is_vertex(np_, 2) and newton.is_vertex(np_, 4)

    def test_regime_fully_broken(self):
        r = Fraction(5, 2)
        np_, _ = newton.np_of_ghost_auto(C4, Perturbed(18, r), 5)
        assert [hull_value(np_, x) for x in range(1, 6)] == [1, 3 + r, 8 + 2 * r, 19 + r, 33]
        assert [x for x, _ in np_.vertices if 1 <= x <= 5] == [1, 2, 3, 4, 5]
        assert [newton.slope_at(np_, i) for i in range(2, 6)] == [2 + r, 5 + r, 11 - r, 14 - r]

    def test_boundary_slopes(self):
        t = Fraction(1, 2)
        np_, _ = newton.np_of_ghost_auto(C0, Boundary(t), 6)
        want = [t * d for d in (0, 3, 5, 8, 10, 13)]
        assert [newton.slope_at(np_, i) for i in range(1, 7)] == want
        assert want == sorted(want)
        for n in range(0, 7):
            assert newton.slope_at(np_, n + 1) == t * (
                ghost.degree(C0, n + 1) - ghost.degree(C0, n)
            )

    def test_classical_inner_slope_is_integral(self):
        np_, _ = newton.np_of_ghost_auto(C0, Classical(4), 2)
        assert newton.slope_at(np_, 1).denominator == 1

    def test_buffer_stability(self):
        for w in (Perturbed(18, Fraction(4)), Boundary(Fraction(2, 5)), Classical(30)):
            base, _ = newton.np_of_ghost_auto(C4, w, 8)
            bigger = newton.np_of_ghost(C4, w, 8, buffer=2 * (2 * 7 + 8))
            n = base.certified_upto
            assert [v for v in bigger.vertices if v[0] <= n] == list(base.vertices)
            prefix = [s for s, wd in base.slopes]
            assert [s for s, wd in bigger.slopes][: len(prefix)] == prefix

    def test_certification_failure_raises(self):
        # a long forced straight line cannot be certified from a tiny window
        k = C4.weight_of_bullet(400)
        n_mid = (2 * 400 + 2) // 2
        with pytest.raises(newton.CertificationError):
            newton.np_of_ghost(C4, Classical(k), n_mid, buffer=2)

    def test_queries_beyond_certification_rejected(self):
        np_, _ = newton.np_of_ghost_auto(C4, Classical(18), 5)
        with pytest.raises(ValueError):
            newton.is_vertex(np_, np_.certified_upto + 1)
        with pytest.raises(ValueError):
            newton.slope_at(np_, np_.certified_upto + 1)
        with pytest.raises(ValueError):
            newton.slope_at(np_, 0)

    def test_json_schema(self):
        np_, _ = newton.np_of_ghost_auto(C4, Perturbed(18, Fraction(5, 2)), 3)
        d = np_.to_json_dict()
        assert set(d) == {"vertices", "slopes", "certified_upto"}
        assert d["vertices"][0] == [0, "0/1"]
        assert all(isinstance(s, str) and "/" in s for s, _ in d["slopes"])
