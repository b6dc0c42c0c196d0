"""Shared random generators for property tests."""

import numpy as np
from hypothesis import strategies as st

from surjunct.laurent import LaurentPoly, shift
from surjunct.univariate import cyclotomic


def laurent_polys(dim=None, max_terms=5, coeff=9, exp=3, nonzero=False):
    dims = st.just(dim) if dim else st.integers(1, 3)

    @st.composite
    def build(draw):
        d = draw(dims)
        terms = draw(
            st.dictionaries(
                st.tuples(*[st.integers(-exp, exp)] * d),
                st.integers(-coeff, coeff).filter(bool),
                min_size=1 if nonzero else 0,
                max_size=max_terms,
            )
        )
        return LaurentPoly(d, terms)

    return build()


def random_laurent(rng: np.random.Generator, dim: int, max_terms=4, coeff=3, exp=2) -> LaurentPoly:
    """Nonzero sparse polynomial; fixed seeds keep corpora reproducible."""
    while True:
        k = int(rng.integers(1, max_terms + 1))
        terms = {}
        for _ in range(k):
            m = tuple(int(x) for x in rng.integers(-exp, exp + 1, size=dim))
            terms[m] = terms.get(m, 0) + int(rng.integers(-coeff, coeff + 1))
        f = LaurentPoly(dim, terms)
        if f:
            return f


def generalized_cyclotomic(rng: np.random.Generator, dim: int) -> LaurentPoly:
    """+-u^m Phi_n(u^v) for random n, m, v != 0."""
    n = int(rng.integers(1, 13))
    while True:
        v = tuple(int(x) for x in rng.integers(-2, 3, size=dim))
        if any(v):
            break
    m = [int(x) for x in rng.integers(-2, 3, size=dim)]
    sign = 1 if rng.integers(2) else -1
    phi = cyclotomic(n)
    f = LaurentPoly(dim, {tuple(k * x for x in v): sign * c for k, c in enumerate(phi.coeffs) if c})
    return shift(f, m)


def random_int_poly(rng: np.random.Generator, max_deg=12, coeff=9) -> list[int]:
    """Coefficient list (constant first) with nonzero constant term."""
    deg = int(rng.integers(1, max_deg + 1))
    c = [int(x) for x in rng.integers(-coeff, coeff + 1, size=deg + 1)]
    while c[0] == 0:
        c[0] = int(rng.integers(-coeff, coeff + 1))
    while c[-1] == 0 and len(c) > 1:
        c.pop()
    return c
