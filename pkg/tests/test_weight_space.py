from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ghostline.valuation import INF
from ghostline.weight_space import (
    Boundary,
    Classical,
    Perturbed,
    format_point,
    format_rational,
    new_context,
    parse_point,
    parse_rational,
    vp_between_weights,
    vp_point_to_weight,
)


class TestNewContext:
    def test_derived_constants(self):
        ctx = new_context(7, 2, 0)
        assert (ctx.k_eps, ctx.delta_eps, ctx.t1, ctx.t2) == (4, 0, 0, 4)
        ctx = new_context(7, 2, 4)  # a + s >= p - 1 branch
        assert (ctx.k_eps, ctx.delta_eps, ctx.t1, ctx.t2) == (6, 0, 1, 5)
        ctx = new_context(7, 2, 2)  # a + s < p - 1 with delta = 1
        assert (ctx.k_eps, ctx.delta_eps, ctx.t1, ctx.t2) == (2, 1, 3, 7)

    def test_beta_parity_values(self):
        ctx = new_context(7, 2, 4)
        assert ctx.beta_even == ctx.t1 == 1
        assert ctx.beta_odd == ctx.t2 - 4 == 1
        assert ctx.beta(0) == ctx.beta(-2) == ctx.beta_even
        assert ctx.beta(3) == ctx.beta(-1) == ctx.beta_odd

    @pytest.mark.parametrize(
        "p,a,s,msg",
        [
            (6, 1, 0, "prime"),
            (3, 1, 0, "prime"),
            (7, 0, 0, "a must"),
            (7, 4, 0, "a must"),
            (7, 2, -1, "s_eps"),
            (7, 2, 6, "s_eps"),
        ],
    )
    def test_rejects_out_of_range(self, p, a, s, msg):
        with pytest.raises(ValueError, match=msg):
            new_context(p, a, s)

    def test_delta_identity_everywhere(self):
        for p in (5, 7, 11, 13):
            for a in range(1, p - 3):
                for s in range(0, p - 1):
                    ctx = new_context(p, a, s)
                    lhs = (p - 1) * ctx.delta_eps + ctx.res(a + 2 * s)
                    assert lhs == s + ctx.res(a + s)

    def test_bullet_roundtrip(self):
        ctx = new_context(7, 2, 4)
        assert ctx.bullet(18) == 2 and ctx.weight_of_bullet(2) == 18
        with pytest.raises(ValueError):
            ctx.bullet(19)


class TestVpBetweenWeights:
    def test_examples(self):
        ctx = new_context(7, 2, 0)
        assert vp_between_weights(ctx, 10, 16) == 1
        assert vp_between_weights(ctx, 18, 60) == 2
        assert vp_between_weights(ctx, 31, 31) is INF

    @given(st.integers(-500, 500), st.integers(-500, 500))
    def test_symmetry(self, k1, k2):
        ctx = new_context(7, 2, 0)
        assert vp_between_weights(ctx, k1, k2) == vp_between_weights(ctx, k2, k1)


points = st.one_of(
    st.integers(-60, 120).map(Classical),
    st.builds(
        Perturbed,
        st.integers(-60, 120),
        st.fractions(min_value=Fraction(1, 6), max_value=Fraction(12)),
    ),
    st.builds(Boundary, st.fractions(min_value=Fraction(1, 9), max_value=Fraction(8, 9))),
)


class TestVpPointToWeight:
    def test_examples(self):
        ctx = new_context(7, 2, 0)
        assert vp_point_to_weight(ctx, Perturbed(18, Fraction(5)), 18) == 5
        assert vp_point_to_weight(ctx, Perturbed(18, Fraction(5)), 24) == 1
        assert vp_point_to_weight(ctx, Boundary(Fraction(1, 2)), 100) == Fraction(1, 2)
        assert vp_point_to_weight(ctx, Classical(18), 18) is INF
        assert vp_point_to_weight(ctx, Classical(18), 60) == 2

    def test_boundary_profile_constant(self):
        ctx = new_context(11, 3, 5)
        w = Boundary(Fraction(2, 3))
        assert len({vp_point_to_weight(ctx, w, k) for k in range(2, 300)}) == 1

    @given(points, st.integers(-60, 120), st.integers(-60, 120))
    @settings(max_examples=300)
    def test_ultrametric(self, w, k, k2):
        ctx = new_context(7, 2, 0)
        d_wk = vp_point_to_weight(ctx, w, k)
        d_wk2 = vp_point_to_weight(ctx, w, k2)
        d_kk2 = vp_between_weights(ctx, k, k2)
        assert d_wk >= min(d_wk2, d_kk2)
        if d_wk2 != d_kk2:
            assert d_wk == min(d_wk2, d_kk2)

    def test_perturbation_radius_positive(self):
        with pytest.raises(ValueError):
            Perturbed(18, Fraction(0))
        with pytest.raises(ValueError):
            Boundary(Fraction(1))


class TestEncodings:
    def test_parse_examples(self):
        assert parse_point("classical:18") == Classical(18)
        assert parse_point("perturbed:18:5/2") == Perturbed(18, Fraction(5, 2))
        assert parse_point("boundary:1/3") == Boundary(Fraction(1, 3))

    @given(points)
    def test_roundtrip(self, w):
        assert parse_point(format_point(w)) == w

    @pytest.mark.parametrize(
        "bad", ["classical", "perturbed:18", "boundary:3/2", "orbit:1", "classical:x"]
    )
    def test_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            parse_point(bad)

    def test_rational_formatting(self):
        assert format_rational(Fraction(3, 2)) == "3/2"
        assert format_rational(7) == "7/1"
        assert format_rational(INF) == "inf"
        assert parse_rational("-5/10") == Fraction(-1, 2)
