"""Sparse integer Laurent polynomials in d commuting variables u1..ud."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, ExponentLimitError, ZeroPolynomialError
from .univariate import EPS, UnivariateIntPoly

Monomial = tuple[int, ...]

# Guard against pathological inputs, e.g. u1^1000000000.
MAX_EXPONENT = 10**6


class LaurentPoly:
    """Immutable element of Z[u1^+-1, ..., ud^+-1].

    Terms are kept in lexicographic order of exponent vectors with no zero
    coefficients, so equality and hashing are structural.
    """

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Monomial, int] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = sorted((tuple(m), int(c)) for m, c in (terms or {}).items() if c)
        for m, _ in items:
            if len(m) != dim:
                raise DimensionMismatchError(f"monomial {m} has length {len(m)}, expected {dim}")
            if any(abs(e) > MAX_EXPONENT for e in m):
                raise ExponentLimitError(f"exponent in {m} exceeds limit {MAX_EXPONENT}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", tuple(items))
        object.__setattr__(self, "_hash", hash((dim, self.terms)))

    def __setattr__(self, key, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def constant(cls, dim: int, c: int) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def variable(cls, dim: int, i: int) -> "LaurentPoly":
        """u_{i+1} (0-based index)."""
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def support(self) -> list[Monomial]:
        return [m for m, _ in self.terms]

    def coeff(self, m: Monomial) -> int:
        return dict(self.terms).get(tuple(m), 0)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .parser import format_poly

        return f"LaurentPoly({self.dim}, {format_poly(self)!r})"

    def __add__(self, other):
        return add(self, _coerce(other, self.dim))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other, self.dim)))

    def __rsub__(self, other):
        return add(_coerce(other, self.dim), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other, self.dim))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        return reduce(mul, [self] * k, LaurentPoly.constant(self.dim, 1))

    def __call__(self, *z):
        return evaluate(self, z)


def _coerce(x, dim: int) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(dim, x)
    return NotImplemented


def normalize(raw_terms: Iterable[tuple[Sequence[int], int]], dim: int | None = None) -> LaurentPoly:
    """Merge duplicate monomials, drop zeros, sort.

    ``dim`` is only needed when ``raw_terms`` is empty.
    """
    acc: dict[Monomial, int] = {}
    for m, c in raw_terms:
        m = tuple(int(e) for e in m)
        if dim is None:
            dim = len(m)
        elif len(m) != dim:
            raise DimensionMismatchError(f"monomial {m} has length {len(m)}, expected {dim}")
        acc[m] = acc.get(m, 0) + int(c)
    if dim is None:
        raise ValueError("cannot infer dimension of an empty term list")
    return LaurentPoly(dim, acc)


def _check_dims(f: LaurentPoly, g: LaurentPoly):
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dimensions differ: {f.dim} vs {g.dim}")


def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    _check_dims(f, g)
    acc = dict(f.terms)
    for m, c in g.terms:
        acc[m] = acc.get(m, 0) + c
    return LaurentPoly(f.dim, acc)


def neg(f: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(f.dim, {m: -c for m, c in f.terms})


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    _check_dims(f, g)
    acc: dict[Monomial, int] = {}
    for m1, c1 in f.terms:
        for m2, c2 in g.terms:
            m = tuple(a + b for a, b in zip(m1, m2))
            acc[m] = acc.get(m, 0) + c1 * c2
    return LaurentPoly(f.dim, acc)


def shift(f: LaurentPoly, m: Sequence[int]) -> LaurentPoly:
    """u^m * f."""
    if len(m) != f.dim:
        raise DimensionMismatchError("shift vector length differs from dimension")
    return LaurentPoly(f.dim, {tuple(a + b for a, b in zip(e, m)): c for e, c in f.terms})


def permute_variables(f: LaurentPoly, perm: Sequence[int]) -> LaurentPoly:
    """Variable u_{perm[i]+1} of the result carries exponent i of ``f``."""
    out = {}
    for e, c in f.terms:
        new = [0] * f.dim
        for i, p in enumerate(perm):
            new[p] = e[i]
        out[tuple(new)] = c
    return LaurentPoly(f.dim, out)


def embed(f: LaurentPoly, dim: int) -> LaurentPoly:
    """View f in more variables (new variables absent)."""
    if dim < f.dim:
        raise DimensionMismatchError("cannot embed into a smaller dimension")
    return LaurentPoly(dim, {e + (0,) * (dim - f.dim): c for e, c in f.terms})


def evaluate(f: LaurentPoly, z: Sequence[complex]) -> complex:
    """Floating evaluation sum f_m z^m at a point of (C*)^d.

    Error model: each term is formed with at most sum|m_i| + 1 roundings and
    the sum adds len(f) more, so the result is within
    :func:`evaluation_error_bound` of the exact value.
    """
    if len(z) != f.dim:
        raise DimensionMismatchError(f"point has {len(z)} coordinates, expected {f.dim}")
    z = [complex(v) for v in z]
    if any(v == 0 for v in z):
        raise ValueError("evaluation point has a zero component")
    total = 0j
    for m, c in f.terms:
        term = complex(c)
        for zi, e in zip(z, m):
            if e:
                term *= zi**e
        total += term
    return total


def evaluation_error_bound(f: LaurentPoly, z: Sequence[complex]) -> float:
    """Rounding bound for :func:`evaluate` in the standard floating model."""
    z = [complex(v) for v in z]
    depth = len(f.terms) + max((sum(abs(e) for e in m) for m, _ in f.terms), default=0) + 2
    mass = sum(abs(c) * math.prod(abs(zi) ** e for zi, e in zip(z, m)) for m, c in f.terms)
    # complex multiplication costs up to sqrt(2)*2 eps per operation
    return 4 * depth * EPS * mass


def evaluate_exact(f: LaurentPoly, x: Sequence) -> Fraction:
    """Exact evaluation at a rational point (all components nonzero)."""
    if len(x) != f.dim:
        raise DimensionMismatchError(f"point has {len(x)} coordinates, expected {f.dim}")
    x = [Fraction(v) for v in x]
    if any(v == 0 for v in x):
        raise ValueError("evaluation point has a zero component")
    return sum(
        (c * math.prod((xi**e for xi, e in zip(x, m)), start=Fraction(1)) for m, c in f.terms),
        Fraction(0),
    )


def on_torus(f: LaurentPoly, angles: Sequence[float]) -> complex:
    """f at (e^{2 pi i theta_1}, ...)."""
    return evaluate(f, [cmath.exp(2j * math.pi * t) for t in angles])


def translate_to_base(f: LaurentPoly) -> tuple[Monomial, LaurentPoly]:
    """Split f = u^m * f' with m the componentwise minimum of the support."""
    if not f:
        raise ZeroPolynomialError()
    supp = f.support()
    m = tuple(min(e[i] for e in supp) for i in range(f.dim))
    return m, shift(f, [-e for e in m])


def _primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    return tuple(x // g for x in v)


def collapse_collinear(f: LaurentPoly) -> tuple[Monomial, UnivariateIntPoly] | None:
    """Write f = u^v * g(u^n0) with n0 primitive, if the support is collinear.

    The anchor v is the lexicographically smallest support point, which is an
    endpoint of the segment whenever the support is collinear; all other
    support points are then v + k*n0 with k > 0.  Returns ``(n0, g)`` or None.
    A single term collapses along the first unit vector to a constant.
    """
    if not f:
        raise ZeroPolynomialError()
    supp = f.support()
    v = supp[0]
    offsets = [tuple(a - b for a, b in zip(e, v)) for e in supp]
    if len(supp) == 1:
        n0 = (1,) + (0,) * (f.dim - 1)
        return n0, UnivariateIntPoly([f.terms[0][1]])
    n0 = _primitive_vector(offsets[1])
    coeffs: dict[int, int] = {}
    for (off, (_, c)) in zip(offsets, f.terms):
        k = None
        for a, b in zip(off, n0):
            if b:
                k = a // b
                break
        if k is None or k < 0 or tuple(k * b for b in n0) != off:
            return None
        coeffs[k] = c
    deg = max(coeffs)
    return n0, UnivariateIntPoly(coeffs.get(k, 0) for k in range(deg + 1))


def expand_collinear(n0: Sequence[int], g: UnivariateIntPoly, anchor: Sequence[int]) -> LaurentPoly:
    """Inverse of :func:`collapse_collinear`: u^anchor * g(u^n0)."""
    return LaurentPoly(
        len(n0),
        {tuple(a + k * b for a, b in zip(anchor, n0)): c for k, c in enumerate(g.coeffs) if c},
    )


def univariate_image(f: LaurentPoly) -> UnivariateIntPoly:
    """For d = 1: the based polynomial as a dense integer polynomial."""
    if f.dim != 1:
        raise DimensionMismatchError("univariate_image needs d = 1")
    _, based = translate_to_base(f)
    deg = max(m[0] for m in based.support())
    return UnivariateIntPoly(based.coeff((k,)) for k in range(deg + 1))


def coefficient_mass(f: LaurentPoly) -> int:
    return sum(abs(c) for _, c in f.terms)


def torus_values(f: LaurentPoly, grid: int) -> np.ndarray:
    """f on the uniform grid {j/grid}^d of the torus, shape (grid,)*d.

    Folding exponents mod grid and applying an inverse FFT gives the exact
    trigonometric sum at every node.
    """
    if not f:
        raise ZeroPolynomialError()
    arr = np.zeros((grid,) * f.dim, dtype=complex)
    for m, c in f.terms:
        arr[tuple(e % grid for e in m)] += c
    return np.fft.ifftn(arr) * grid**f.dim
