import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surjunct import LaurentPoly, normalize, parse
from surjunct.errors import DimensionMismatchError, ExponentLimitError, ZeroPolynomialError
from surjunct.laurent import (
    add,
    collapse_collinear,
    evaluate,
    evaluate_exact,
    evaluation_error_bound,
    expand_collinear,
    mul,
    neg,
    shift,
    translate_to_base,
)
from surjunct.univariate import UnivariateIntPoly

from strategies import laurent_polys

OMEGA = cmath.exp(2j * math.pi / 3)


def P(text, dim=None):
    return parse(text, dim)


class TestNormalize:
    def test_merge(self):
        assert normalize([((0, 0), 1), ((0, 0), 2)]).as_dict() == {(0, 0): 3}

    def test_cancellation(self):
        f = normalize([((1, 0), 1), ((1, 0), -1)])
        assert f.is_zero() and f.dim == 2

    def test_ledrappier(self):
        f = normalize([((0, 0), 1), ((1, 0), 1), ((0, 1), 1)])
        assert len(f) == 3
        assert f == P("1+u1+u2")

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            normalize([((0, 0), 1), ((1,), 1)])

    def test_exponent_limit(self):
        with pytest.raises(ExponentLimitError):
            normalize([((10**7,), 1)])

    def test_canonical_order_is_lex(self):
        f = normalize([((1, 0), 5), ((0, 1), 2), ((0, 0), 1), ((-1, 3), 4)])
        assert f.support() == sorted(f.support())


class TestRing:
    def test_identity(self):
        f = P("3 - u1*u2^-1 + 7*u2^2")
        assert mul(f, LaurentPoly.constant(2, 1)) == f

    def test_unit_monomials(self):
        assert mul(P("u1"), P("u1^-1")) == LaurentPoly.constant(1, 1)

    def test_hand_expansion(self):
        assert mul(P("1+u1"), P("1-u1")) == P("1-u1^2")

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            add(P("u1"), P("u2"))

    def test_operators(self):
        f = P("1+u1")
        assert f * f - 1 == P("2*u1 + u1^2")
        assert -f == neg(f)
        assert f**0 == LaurentPoly.constant(1, 1)

    @given(laurent_polys(dim=2), laurent_polys(dim=2), laurent_polys(dim=2))
    @settings(max_examples=150)
    def test_axioms(self, f, g, h):
        assert add(f, g) == add(g, f)
        assert mul(f, g) == mul(g, f)
        assert mul(f, add(g, h)) == add(mul(f, g), mul(f, h))
        assert mul(mul(f, g), h) == mul(f, mul(g, h))
        assert add(f, neg(f)).is_zero()

    def test_immutable(self):
        f = P("u1")
        with pytest.raises(AttributeError):
            f.dim = 3


class TestEvaluate:
    def test_ledrappier_zero(self):
        f = P("1+u1+u2")
        assert abs(evaluate(f, [OMEGA, OMEGA**2])) < 1e-12
        assert abs(evaluate(f, [OMEGA**2, OMEGA])) < 1e-12

    def test_furstenberg_exact(self):
        assert evaluate_exact(P("3-2*u1"), [Fraction(3, 2)]) == 0

    def test_constant(self):
        assert evaluate(LaurentPoly.constant(2, 5), [0.3 + 2j, -1]) == 5

    def test_zero_component(self):
        with pytest.raises(ValueError):
            evaluate(P("u1"), [0])
        with pytest.raises(ValueError):
            evaluate_exact(P("u1"), [0])

    def test_negative_exponent_exact(self):
        assert evaluate_exact(P("u1^-2 + 3"), [Fraction(1, 2)]) == 7

    @given(
        laurent_polys(dim=2, coeff=1000),
        laurent_polys(dim=2, coeff=1000),
        st.floats(0, 1),
        st.floats(0, 1),
    )
    @settings(max_examples=150)
    def test_homomorphism_on_torus(self, f, g, a, b):
        z = [cmath.exp(2j * math.pi * a), cmath.exp(2j * math.pi * b)]
        lhs = evaluate(mul(f, g), z)
        rhs = evaluate(f, z) * evaluate(g, z)
        fg_bound = evaluation_error_bound(mul(f, g), z)
        prod_bound = (
            evaluation_error_bound(f, z) * (abs(evaluate(g, z)) + evaluation_error_bound(g, z))
            + evaluation_error_bound(g, z) * abs(evaluate(f, z))
            + 4e-16 * abs(rhs)
        )
        assert abs(lhs - rhs) <= fg_bound + prod_bound


class TestBase:
    def test_examples(self):
        m, fb = translate_to_base(P("u1*u2^-1 + u2^-1"))
        assert m == (0, -1) and fb == P("u1 + 1", 2)
        m, fb = translate_to_base(P("1+u1+u2"))
        assert m == (0, 0) and fb == P("1+u1+u2")
        m, fb = translate_to_base(P("2*u1^3"))
        assert m == (3,) and fb == LaurentPoly.constant(1, 2)

    def test_zero(self):
        with pytest.raises(ZeroPolynomialError):
            translate_to_base(LaurentPoly(2))

    @given(laurent_polys(nonzero=True))
    def test_recombine(self, f):
        m, fb = translate_to_base(f)
        assert shift(fb, m) == f
        for i in range(f.dim):
            assert min(e[i] for e in fb.support()) == 0


class TestCollapse:
    def test_not_collinear(self):
        assert collapse_collinear(P("1+u1+u2")) is None

    def test_antidiagonal(self):
        # u1 + u2 = u2 * (1 + u1 u2^-1)
        assert collapse_collinear(P("1 + u1*u2^-1")) == ((1, -1), UnivariateIntPoly([1, 1]))
        n0, g = collapse_collinear(P("u1+u2"))
        assert n0 == (1, -1) and g == UnivariateIntPoly([1, 1])

    def test_even_support(self):
        assert collapse_collinear(P("1+u1^2+u1^4")) == ((1,), UnivariateIntPoly([1, 0, 1, 0, 1]))

    def test_single_term(self):
        assert collapse_collinear(P("-4*u1^2*u2")) == ((1, 0), UnivariateIntPoly([-4]))

    @given(laurent_polys(nonzero=True, max_terms=4))
    @settings(max_examples=200)
    def test_reexpansion(self, f):
        col = collapse_collinear(f)
        if col is not None:
            n0, g = col
            assert expand_collinear(n0, g, f.support()[0]) == f

    @given(
        st.integers(1, 3).flatmap(
            lambda d: st.tuples(
                st.just(d),
                st.tuples(*[st.integers(-3, 3)] * d).filter(any),
                st.tuples(*[st.integers(-3, 3)] * d),
                st.lists(st.integers(-5, 5), min_size=2, max_size=6),
            )
        )
    )
    def test_detects_constructed_collinear(self, args):
        d, v, anchor, coeffs = args
        g = UnivariateIntPoly(coeffs)
        if g.degree < 1:
            return
        f = expand_collinear(v, g, anchor)
        assert collapse_collinear(f) is not None
