"""Exact integer polynomials in one variable, plus a certified 1-D Mahler measure.

Everything here except :func:`refine_roots` and :func:`mahler_1d` is exact
integer arithmetic.  Coefficient lists are stored constant term first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import divisors, totient

from .errors import ConvergenceError, RootOnEndpointError, ZeroPolynomialError

EPS = np.finfo(float).eps

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
NEAR_CIRCLE_RADIUS = 1e-9


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class UnivariateIntPoly:
    """Dense integer polynomial, ``coeffs[k]`` is the coefficient of t^k."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "UnivariateIntPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"UnivariateIntPoly({list(self.coeffs)})"

    def __neg__(self):
        return UnivariateIntPoly(-c for c in self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivariateIntPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return UnivariateIntPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UnivariateIntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UnivariateIntPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UnivariateIntPoly":
        return UnivariateIntPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "UnivariateIntPoly":
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return UnivariateIntPoly(c // g for c in self.coeffs)

    def trailing_zeros(self) -> int:
        """Multiplicity of the root t = 0."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def strip_t_powers(self) -> "UnivariateIntPoly":
        return UnivariateIntPoly(self.coeffs[self.trailing_zeros():])

    def compose_power(self, b: int) -> "UnivariateIntPoly":
        """g(t^b)."""
        out = [0] * (b * self.degree + 1) if self.coeffs else []
        for k, c in enumerate(self.coeffs):
            out[b * k] = c
        return UnivariateIntPoly(out)

    def sign_at(self, x: Fraction) -> int:
        """Sign of g(x) for rational x, by clearing the denominator."""
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        deg = self.degree
        val = sum(c * n**k * d ** (deg - k) for k, c in enumerate(self.coeffs))
        return (val > 0) - (val < 0)


def _as_poly(g) -> UnivariateIntPoly:
    return g if isinstance(g, UnivariateIntPoly) else UnivariateIntPoly(g)


def divmod_exact(a: UnivariateIntPoly, b: UnivariateIntPoly):
    """Quotient and remainder over Q; returned as Fraction coefficient lists."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a.coeffs]
    q = [Fraction(0)] * max(len(r) - len(b.coeffs) + 1, 0)
    lc = b.lc
    db = b.degree
    for k in range(len(r) - 1, db - 1, -1):
        if r[k]:
            f = r[k] / lc
            q[k - db] = f
            for j, c in enumerate(b.coeffs):
                r[k - db + j] -= f * c
    while r and r[-1] == 0:
        r.pop()
    return q, r


def exact_quotient(a: UnivariateIntPoly, b: UnivariateIntPoly) -> UnivariateIntPoly:
    """a / b when b divides a in Z[t] (or Q[t] with integral result)."""
    q, r = divmod_exact(a, b)
    if r or any(x.denominator != 1 for x in q):
        raise ArithmeticError(f"{b} does not divide {a} over Z")
    return UnivariateIntPoly(int(x) for x in q)


def prem(a: UnivariateIntPoly, b: UnivariateIntPoly) -> UnivariateIntPoly:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, integer only."""
    if not b:
        raise ZeroDivisionError("pseudo-remainder by zero")
    r = list(a.coeffs)
    db = b.degree
    delta = len(r) - 1 - db
    if delta < 0:
        return a
    lc = b.lc
    e = delta + 1
    while len(r) - 1 >= db and r:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [c * lc for c in r]
        for j, c in enumerate(b.coeffs):
            r[shift + j] -= top * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    return UnivariateIntPoly(c * lc**e for c in r)


def gcd_primitive(g, h) -> UnivariateIntPoly:
    """Primitive gcd over Q with positive leading coefficient (subresultant PRS)."""
    a, b = _as_poly(g), _as_poly(h)
    if not a and not b:
        raise ZeroPolynomialError("gcd of two zero polynomials")
    if not b:
        return a.primitive()
    if not a:
        return b.primitive()
    if b.degree > a.degree:
        a, b = b, a
    a, b = a.primitive(), b.primitive()
    sg, sh = 1, 1
    while True:
        delta = a.degree - b.degree
        r = prem(a, b)
        if not r:
            return b.primitive()
        if r.degree == 0:
            return UnivariateIntPoly([1])
        a = b
        div = sg * sh**delta
        b = UnivariateIntPoly(c // div for c in r.coeffs)
        sg = a.lc
        # h <- g^delta / h^(delta - 1), exact in Z
        if delta == 0:
            pass
        elif delta == 1:
            sh = sg
        else:
            sh = sg**delta // sh ** (delta - 1)


def squarefree_part(g) -> UnivariateIntPoly:
    """g / gcd(g, g'), primitive with positive leading coefficient."""
    g = _as_poly(g)
    if not g:
        raise ZeroPolynomialError()
    if g.degree == 0:
        return UnivariateIntPoly([1])
    d = gcd_primitive(g, g.derivative())
    return exact_quotient(g.primitive(), d).primitive()


def squarefree_decomposition(g) -> list[tuple[UnivariateIntPoly, int]]:
    """Primitive g = prod a_i^i with a_i squarefree and pairwise coprime.

    Returns the nonconstant a_i with their multiplicities; content and sign of
    ``g`` are dropped.  Uses the gcd chain A_k = gcd(A_{k-1}, A_{k-1}').
    """
    g = _as_poly(g)
    if not g:
        raise ZeroPolynomialError()
    chain = [g.primitive()]
    while chain[-1].degree > 0:
        chain.append(gcd_primitive(chain[-1], chain[-1].derivative()))
    # B_i = A_{i-1} / A_i collects the factors of multiplicity >= i
    bs = [exact_quotient(chain[i - 1], chain[i]).primitive() for i in range(1, len(chain))]
    bs.append(UnivariateIntPoly([1]))
    out = []
    for i in range(len(bs) - 1):
        a = exact_quotient(bs[i], bs[i + 1]).primitive()
        if a.degree > 0:
            out.append((a, i + 1))
    return out


def reciprocal(g) -> UnivariateIntPoly:
    """t^deg(g) * g(1/t); requires g(0) != 0."""
    g = _as_poly(g)
    if not g:
        raise ZeroPolynomialError()
    if g.coeffs[0] == 0:
        raise ValueError("reciprocal requires g(0) != 0; strip powers of t first")
    return UnivariateIntPoly(reversed(g.coeffs))


def sturm_sequence(g) -> list[UnivariateIntPoly]:
    """Sturm chain g, g', -rem, ... with sign-correct pseudo-remainders."""
    g = _as_poly(g)
    seq = [g, g.derivative()]
    while seq[-1] and seq[-1].degree > 0:
        a, b = seq[-2], seq[-1]
        r = prem(a, b)
        if not r:
            break
        delta = a.degree - b.degree
        # prem multiplies by lc(b)^(delta+1); undo its sign
        s = -1 if (b.lc < 0 and (delta + 1) % 2) else 1
        r = r * (-s)
        seq.append(UnivariateIntPoly(c // r.content() for c in r.coeffs))
    return [p for p in seq if p]


def _sign_changes(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for x, y in zip(nz, nz[1:]) if x != y)


def sturm_count(g, a, b) -> int:
    """Number of distinct real roots of squarefree g in the open interval (a, b)."""
    g = _as_poly(g)
    a, b = Fraction(a), Fraction(b)
    if not g:
        raise ZeroPolynomialError()
    if not a < b:
        raise ValueError("sturm_count needs a < b")
    if g.sign_at(a) == 0 or g.sign_at(b) == 0:
        raise RootOnEndpointError(f"root of {g} at an interval endpoint")
    seq = sturm_sequence(g)
    return _sign_changes(p.sign_at(a) for p in seq) - _sign_changes(p.sign_at(b) for p in seq)


@dataclass(frozen=True)
class UnitCircleCertificate:
    """Exact count of distinct roots on |t| = 1.

    ``mult_one`` / ``mult_minus_one`` are the multiplicities of t = 1 and
    t = -1 in g, ``pairs`` the number of distinct non-real conjugate pairs on
    the circle.  ``total_multiplicity`` counts circle roots with multiplicity.
    """

    count: int
    mult_one: int
    mult_minus_one: int
    pairs: int
    total_multiplicity: int


def _multiplicity(g: UnivariateIntPoly, root: int) -> int:
    lin = UnivariateIntPoly([-root, 1])
    m = 0
    while g and g(root) == 0:
        g = exact_quotient(g, lin)
        m += 1
    return m


def chebyshev_fold(h: UnivariateIntPoly) -> UnivariateIntPoly:
    """For palindromic h of degree 2m, the H with t^-m h(t) = H(t + 1/t)."""
    n = h.degree
    if n % 2 or any(h.coeffs[k] != h.coeffs[n - k] for k in range(n + 1)):
        raise ValueError("chebyshev_fold needs a palindromic polynomial of even degree")
    m = n // 2
    s = UnivariateIntPoly([0, 1])
    prev, cur = UnivariateIntPoly([2]), s  # t^k + t^-k for k = 0, 1
    out = UnivariateIntPoly([h.coeffs[m]])
    for k in range(1, m + 1):
        out = out + cur * h.coeffs[m + k]
        prev, cur = cur, s * cur - prev
    return out


def _pairs_on_circle(sqf: UnivariateIntPoly) -> int:
    """Conjugate pairs on |t|=1 of squarefree sqf with no roots at 0, 1, -1."""
    if sqf.degree < 2:
        return 0
    h = gcd_primitive(sqf, reciprocal(sqf))
    if h.degree < 2:
        return 0
    H = chebyshev_fold(h)
    return sturm_count(H, -2, 2)


def unit_circle_roots(g) -> UnitCircleCertificate:
    g = _as_poly(g)
    if not g:
        raise ZeroPolynomialError()
    if g.coeffs[0] == 0:
        raise ValueError("unit_circle_roots requires g(0) != 0; strip powers of t first")
    m1 = _multiplicity(g, 1)
    mm1 = _multiplicity(g, -1)
    pairs = 0
    total = m1 + mm1
    for factor, mult in squarefree_decomposition(g):
        f = factor
        for r in (1, -1):
            if f.degree > 0 and f(r) == 0:
                f = exact_quotient(f, UnivariateIntPoly([-r, 1]))
        k = _pairs_on_circle(f)
        pairs += k
        total += 2 * k * mult
    count = (m1 > 0) + (mm1 > 0) + 2 * pairs
    return UnitCircleCertificate(count, m1, mm1, pairs, total)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> UnivariateIntPoly:
    """n-th cyclotomic polynomial by dividing t^n - 1 by Phi_d, d | n, d < n."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    p = UnivariateIntPoly([-1] + [0] * (n - 1) + [1])
    for d in divisors(n):
        if d < n:
            p = exact_quotient(p, cyclotomic(d))
    return p


def cyclotomic_index(c: UnivariateIntPoly) -> int | None:
    """n with c == +-Phi_n, or None."""
    deg = c.degree
    if deg < 1 or abs(c.lc) != 1:
        return None
    for n in range(1, 2 * deg * deg + 1):
        if totient(n) == deg:
            phi = cyclotomic(n)
            if c == phi or c == -phi:
                return n
    return None


# --------------------------------------------------------------------------
# numeric roots


def _trim_complex(coeffs) -> tuple[np.ndarray, int]:
    """Drop exact-zero leading coefficients and zero roots; return (coeffs, n_zero_roots)."""
    c = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ZeroPolynomialError()
    return c[nz[0] : nz[-1] + 1], int(nz[0])


def _initial_guess(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    r = abs(c[0] / c[-1]) ** (1.0 / n)
    # Cauchy-style upper bound keeps the start inside a sensible annulus
    upper = 1 + max(abs(c[:-1] / c[-1]))
    r = min(max(r, 1.0 / upper), upper)
    k = np.arange(n)
    return r * np.exp(1j * (2 * np.pi * k / n + 0.4))


def _residual_bound(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """|p(z)| plus a Horner rounding bound, per point."""
    rev = c[::-1]
    val = np.polyval(rev, z)
    absz = np.abs(z)
    mag = np.polyval(np.abs(rev), absz)
    n = len(c) - 1
    return np.abs(val), 2 * (n + 1) * EPS * mag


def inclusion_radii(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Radii n*|W_i| of the Weierstrass inclusion discs around approximations z.

    The union of the discs contains every root, and each connected component
    made of m discs contains exactly m roots counted with multiplicity.
    """
    n = len(c) - 1
    res, err = _residual_bound(c, z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    denom = abs(c[-1]) * np.prod(np.abs(diff), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (res + err) / denom
    w = np.where(denom > 0, w, np.inf)
    return n * w * (1 + 1e-10)


def refine_roots(coeffs, tol: float = DEFAULT_ROOT_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Aberth-Ehrlich simultaneous iteration.

    ``coeffs`` are complex, constant term first.  Returns ``(roots, radii,
    converged)`` where each true root lies in the union of discs
    ``D(roots[i], radii[i])`` (component-wise root counts hold).  Exact-zero
    roots are returned with radius 0.
    """
    c, nzero = _trim_complex(coeffs)
    n = len(c) - 1
    zero_roots = np.zeros(nzero, dtype=complex)
    if n == 0:
        return zero_roots, np.zeros(nzero), True
    if n == 1:
        z = np.array([-c[0] / c[1]])
        r = inclusion_radii(c, z)
        return np.concatenate([zero_roots, z]), np.concatenate([np.zeros(nzero), r]), True
    rev = c[::-1]
    drev = np.polyder(rev)
    z = _initial_guess(c)
    converged = False
    for _ in range(max_iter):
        p = np.polyval(rev, z)
        dp = np.polyval(drev, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0)
        step = np.where(p == 0, 0, step)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z)) * 1e-3):
            converged = True
            break
    radii = inclusion_radii(c, z)
    if not converged:
        converged = bool(np.all(radii <= tol * np.maximum(1.0, np.abs(z))))
    return (
        np.concatenate([zero_roots, z]),
        np.concatenate([np.zeros(nzero), radii]),
        converged,
    )


def _eval_exact(coeffs: Sequence[int], z: complex) -> tuple[complex, complex]:
    """p(z) and p'(z) for integer p, exact in Q(i) at the binary value of z, then rounded."""
    x, y = Fraction(z.real), Fraction(z.imag)
    pr = pi = dr = di = Fraction(0)
    for a in reversed(coeffs):
        dr, di = dr * x - di * y + pr, dr * y + di * x + pi
        pr, pi = pr * x - pi * y + a, pr * y + pi * x
    return complex(float(pr), float(pi)), complex(float(dr), float(di))


def polish_int_roots(coeffs: Sequence[int], z: np.ndarray, steps: int = 3):
    """Aberth steps and inclusion radii from exact residuals of an integer polynomial.

    Float residuals stall at eps * sum |c_k||z|^k, which for clustered roots
    keeps the Weierstrass radii far above the root accuracy.  Evaluating the
    residual exactly removes that floor.  Returns ``(roots, radii)``.
    """
    n = len(coeffs) - 1
    z = np.array(z, dtype=complex)
    for _ in range(steps):
        pd = [_eval_exact(coeffs, zi) for zi in z]
        p = np.array([a for a, _ in pd])
        dp = np.array([b for _, b in pd])
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1 - ratio * s)
        z = z - np.where(np.isfinite(step), step, 0)
    res = np.array([abs(_eval_exact(coeffs, zi)[0]) for zi in z])
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    denom = abs(coeffs[-1]) * np.prod(np.abs(diff), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(denom > 0, res / denom, np.inf)
    # rounding of the residual and of the product of n - 1 differences
    return z, n * w * (1 + 4 * (n + 2) * EPS)


def _components(z: np.ndarray, r: np.ndarray) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= r[i] + r[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _log_mahler_from_roots(c: np.ndarray, z: np.ndarray, r: np.ndarray) -> tuple[float, float]:
    value = math.log(abs(c[-1]))
    err = 4 * EPS * abs(value)
    for comp in _components(z, r):
        mods = np.abs(z[comp])
        est = float(np.sum(np.log(np.maximum(1.0, mods))))
        lo = float(np.min(mods - r[comp]))
        hi = float(np.max(mods + r[comp]))
        k = len(comp)
        low = k * math.log(max(1.0, lo))
        high = k * math.log(max(1.0, hi)) if math.isfinite(hi) else math.inf
        value += est
        err += max(est - low, high - est) + 4 * EPS * abs(est)
    return value, err


def mahler_1d(coeffs, tol: float = 1e-10, max_iter: int = DEFAULT_MAX_ITER) -> tuple[float, float]:
    """log M of a complex-coefficient polynomial with a certified error bound.

    Uses Mahler's formula |lead| * prod max(1, |alpha|) over Aberth-refined
    roots.  A root whose inclusion disc straddles the unit circle contributes
    0 to the estimate; the straddle is charged to the bound.  Raises
    ConvergenceError when the bound cannot be pushed below ``tol``.
    """
    c, _ = _trim_complex(coeffs)
    if len(c) == 1:
        return math.log(abs(c[0])), 4 * EPS * abs(math.log(abs(c[0])))
    value = bound = math.inf
    for budget in (max_iter, 4 * max_iter):
        z, r, _ = refine_roots(c, tol=min(tol, DEFAULT_ROOT_TOL), max_iter=budget)
        value, bound = _log_mahler_from_roots(c, z, r)
        if bound <= tol:
            return value, bound
    raise ConvergenceError(
        f"log Mahler bound {bound:.3g} exceeds tolerance {tol:.3g}", value=value, bound=bound
    )


def _mahler_squarefree_int(a: UnivariateIntPoly, tol: float) -> tuple[float, float]:
    c = np.array([float(x) for x in a.coeffs], dtype=complex)
    z, r, _ = refine_roots(c, tol=min(tol, DEFAULT_ROOT_TOL))
    value, bound = _log_mahler_from_roots(c, z, r)
    if bound <= tol:
        return value, bound
    z, r = polish_int_roots(a.coeffs, z)
    value, bound = _log_mahler_from_roots(c, z, r)
    if bound <= tol:
        return value, bound
    raise ConvergenceError(
        f"log Mahler bound {bound:.3g} exceeds tolerance {tol:.3g}", value=value, bound=bound
    )


def mahler_int(g, tol: float = 1e-10) -> tuple[float, float]:
    """log M of an integer polynomial, exact on circle and repeated factors.

    Uses the squarefree decomposition M(g) = |content| * prod M(a_i)^i, and
    counts cyclotomic-type factors (all roots on the circle) as exact zeros.
    """
    g = _as_poly(g)
    if not g:
        raise ZeroPolynomialError()
    g = g.strip_t_powers()
    value = math.log(abs(g.content()))
    bound = 4 * EPS * abs(value)
    for a, mult in squarefree_decomposition(g):
        a = a.strip_t_powers()
        if a.degree <= 0:
            value += mult * math.log(abs(a.lc)) if a else 0.0
            continue
        if abs(a.lc) == 1 and abs(a.coeffs[0]) == 1 and unit_circle_roots(a).count == a.degree:
            continue  # Kronecker: all roots on the circle, M = 1
        v, b = _mahler_squarefree_int(a, tol / max(1, mult))
        value += mult * v
        bound += mult * b
    return value, bound


def numeric_unit_circle_count(coeffs, threshold: float = 1e-8) -> int | None:
    """Roots (with multiplicity) satisfying ||alpha| - 1| < threshold.

    Returns None (inconclusive) when an inclusion component straddles the
    threshold band edge.
    """
    z, r, _ = refine_roots(coeffs)
    count = 0
    for comp in _components(z, r):
        dist = np.abs(np.abs(z[comp]) - 1.0)
        rad = r[comp]
        spread = float(np.max(dist + rad))
        floor = float(np.min(dist - rad))
        if spread < threshold:
            count += len(comp)
        elif floor >= threshold:
            continue
        else:
            return None
    return count
