"""Numeric geometry of f on the unit torus U^d.

Angles are fractions of a full turn: the point with angles theta is
(e^{2 pi i theta_1}, ..., e^{2 pi i theta_d}).

Lipschitz bound used by the grid certificate: for F(theta) = f(e^{2 pi i theta}),

    dF/dtheta_j = sum_m 2 pi i m_j f_m e^{2 pi i m.theta},

so |grad F|_2 <= sum_m 2 pi |f_m| |m|_2 by the triangle inequality applied to
the vector-valued sum.  Hence |F(a) - F(b)| <= L |a - b|_2, and every torus
point lies within sqrt(d) / (2 N) of a node of the N-grid.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, ConvergenceError, ZeroPolynomialError
from .laurent import (
    LaurentPoly,
    coefficient_mass,
    collapse_collinear,
    shift,
    torus_values,
    univariate_image,
)
from .univariate import (
    EPS,
    UnivariateIntPoly,
    _log_mahler_from_roots,
    cyclotomic,
    divmod_exact,
    inclusion_radii,
    mahler_int,
)

log = logging.getLogger(__name__)

# Largest grid per dimension for the certificate; d > 3 falls back to MAX_GRID_POINTS.
MAX_GRID = {1: 1 << 20, 2: 4096, 3: 256}
MAX_GRID_POINTS = 1 << 24

DEFAULT_WITNESS_TOL = 1e-10
NEWTON_ITERS = 100

DEFAULT_OUTER_GRID = 256
MAX_OUTER_GRID = 2048


@dataclass(frozen=True)
class TorusPoint:
    angles: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) % 1.0 for a in self.angles))

    def point(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.asarray(self.angles))


class TorusStatus(str, Enum):
    CERTIFIED_NO_ZERO = "Certified-NoZero"
    WITNESS_FOUND = "WitnessFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TorusCertificate:
    status: TorusStatus
    grid_size: int
    min_modulus: float
    lipschitz_bound: float
    dim: int = 1
    witness: TorusPoint | None = None
    residual: float | None = None

    @property
    def margin(self) -> float:
        """min |f| on the grid minus the Lipschitz slack; > 0 certifies."""
        return self.min_modulus - self.lipschitz_bound * math.sqrt(self.dim) / (2 * self.grid_size)

    def as_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "grid_size": self.grid_size,
            "min_modulus": self.min_modulus,
            "lipschitz_bound": self.lipschitz_bound,
        }
        if self.witness is not None:
            out["witness_angles"] = list(self.witness.angles)
            out["residual"] = self.residual
        return out


@dataclass(frozen=True)
class RootOfUnityWitness:
    """Exact zero of f at a tuple of roots of unity, angles as reduced fractions."""

    angles: tuple[Fraction, ...]
    order: int  # lcm of the component orders

    def as_dict(self) -> dict:
        return {"angles": [str(a) for a in self.angles], "order": self.order}


class EntropyMethod(str, Enum):
    ROOTS_1D = "Roots1D"
    ITERATED_QUADRATURE = "IteratedQuadrature"


@dataclass(frozen=True)
class EntropyResult:
    log_mahler: float
    error_estimate: float
    method: EntropyMethod
    grid_size: int
    history: tuple[tuple[int, float], ...] = field(default=())

    @property
    def h_top(self) -> float:
        return abs(self.log_mahler)

    def as_dict(self) -> dict:
        return {
            "log_mahler": self.log_mahler,
            "h_top": self.h_top,
            "error": self.error_estimate,
            "method": self.method.value,
            "grid_size": self.grid_size,
        }


def lipschitz_bound(f: LaurentPoly) -> float:
    if not f:
        raise ZeroPolynomialError()
    return 2 * math.pi * math.fsum(abs(c) * math.hypot(*m) for m, c in f.terms)


def _grid_cap(d: int) -> int:
    return MAX_GRID.get(d, int(MAX_GRID_POINTS ** (1.0 / d)))


def _f_and_jacobian(f: LaurentPoly, theta: np.ndarray) -> tuple[complex, np.ndarray]:
    exps = np.array([m for m, _ in f.terms], dtype=float)
    coef = np.array([c for _, c in f.terms], dtype=float)
    phase = np.exp(2j * np.pi * (exps @ theta))
    val = np.sum(coef * phase)
    grad = (2j * np.pi * exps.T) @ (coef * phase)
    return val, grad


def refine_torus_zero(f: LaurentPoly, start, max_iter: int = NEWTON_ITERS):
    """Damped Gauss-Newton on |f|^2 over the torus; returns (angles, residual)."""
    theta = np.asarray(start, dtype=float)
    val, grad = _f_and_jacobian(f, theta)
    res = abs(val)
    for _ in range(max_iter):
        if res == 0:
            break
        J = np.vstack([grad.real, grad.imag])
        F = np.array([val.real, val.imag])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        t = 1.0
        improved = False
        while t > 1e-6:
            cand = theta + t * step
            cval, cgrad = _f_and_jacobian(f, cand)
            if abs(cval) < res:
                theta, val, grad, res = cand, cval, cgrad, abs(cval)
                improved = True
                break
            t /= 2
        if not improved:
            break
    return np.mod(theta, 1.0), res


def center(f: LaurentPoly) -> LaurentPoly:
    """u^-c f with c the |f_m|-weighted mean exponent rounded half-up.

    |f| on the torus is unchanged, the Lipschitz bound shrinks, and the
    choice commutes with multiplication by monomials (exact arithmetic).
    """
    w = coefficient_mass(f)
    c = [
        math.floor(Fraction(sum(abs(a) * m[i] for m, a in f.terms), w) + Fraction(1, 2))
        for i in range(f.dim)
    ]
    return shift(f, [-x for x in c])


def certify_no_torus_zero(
    f: LaurentPoly, grid: int = 64, witness_tol: float = DEFAULT_WITNESS_TOL
) -> TorusCertificate:
    """Grid certificate that |f| > 0 on U^d, else a refined zero witness.

    Works on the centered representative of f, whose Lipschitz bound is
    the one recorded in the certificate.
    """
    if not f:
        raise ZeroPolynomialError()
    if grid < 2:
        raise ValueError("grid must be >= 2")
    d = f.dim
    if grid > _grid_cap(d):
        raise BudgetExceededError(f"grid {grid} exceeds cap {_grid_cap(d)} for d={d}")
    f = center(f)
    L = lipschitz_bound(f)
    mods = np.abs(torus_values(f, grid))
    flat = int(np.argmin(mods))
    mn = float(mods.flat[flat])
    slack = L * math.sqrt(d) / (2 * grid)
    # rounding in the FFT is far below this pad
    pad = 64 * EPS * coefficient_mass(f) * math.log2(grid ** d + 1)
    if mn - pad > slack:
        return TorusCertificate(TorusStatus.CERTIFIED_NO_ZERO, grid, mn, L, d)
    idx = np.unravel_index(flat, mods.shape)
    start = np.array(idx, dtype=float) / grid
    angles, res = refine_torus_zero(f, start)
    if res < witness_tol:
        return TorusCertificate(
            TorusStatus.WITNESS_FOUND, grid, mn, L, d, TorusPoint(tuple(angles)), float(res)
        )
    return TorusCertificate(TorusStatus.INCONCLUSIVE, grid, mn, L, d, TorusPoint(tuple(angles)), float(res))


def write_grid_csv(f: LaurentPoly, grid: int, path) -> None:
    """|f| on the uniform grid: columns theta1..thetad, modulus."""
    mods = np.abs(torus_values(f, grid))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"theta{i + 1}" for i in range(f.dim)] + ["modulus"])
        for idx in np.ndindex(*mods.shape):
            w.writerow([f"{i / grid:.10g}" for i in idx] + [f"{mods[idx]:.17g}"])


# --------------------------------------------------------------------------
# exact roots-of-unity search


def _unit_fractions(max_order: int) -> list[Fraction]:
    out = []
    for o in range(1, max_order + 1):
        for k in range(o):
            if math.gcd(k, o) == 1:
                out.append(Fraction(k, o))
    return out


def vanishes_at_roots_of_unity(f: LaurentPoly, angles) -> bool:
    """Exact test f(e^{2 pi i a_1}, ...) == 0 in Z[t]/Phi_L."""
    angles = [Fraction(a) % 1 for a in angles]
    L = math.lcm(*(a.denominator for a in angles))
    steps = [int(a * L) for a in angles]
    acc = [0] * L
    for m, c in f.terms:
        acc[sum(e * s for e, s in zip(m, steps)) % L] += c
    _, rem = divmod_exact(UnivariateIntPoly(acc), cyclotomic(L))
    return not rem


def roots_of_unity_witness(f: LaurentPoly, max_order: int = 12) -> RootOfUnityWitness | None:
    """First tuple of roots of unity (order <= max_order) where f vanishes exactly.

    Candidates come from a cheap floating prefilter and are confirmed by
    exact reduction modulo the cyclotomic polynomial of the common order.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if not f:
        raise ZeroPolynomialError()
    fracs = _unit_fractions(max_order)
    ang = np.array([float(a) for a in fracs])
    d = f.dim
    mass = coefficient_mass(f)
    # vals over the product grid, axis i indexes the angle of u_{i+1}
    vals = np.zeros((len(fracs),) * d, dtype=complex)
    for m, c in f.terms:
        term = np.array(c, dtype=complex)
        for i, e in enumerate(m):
            shape = [1] * d
            shape[i] = len(fracs)
            term = term * np.exp(2j * np.pi * e * ang).reshape(shape)
        vals = vals + term
    cand = np.argwhere(np.abs(vals) <= 1e-8 * max(mass, 1))
    for idx in cand:  # argwhere is in C order, i.e. lexicographic
        angles = tuple(fracs[i] for i in idx)
        if vanishes_at_roots_of_unity(f, angles):
            return RootOfUnityWitness(angles, math.lcm(*(a.denominator for a in angles)))
    return None


# --------------------------------------------------------------------------
# Mahler measure


def _slice_coefficients(f: LaurentPoly, nodes: np.ndarray) -> np.ndarray:
    """Coefficients in u1 (constant first) of f with u2..ud fixed at ``nodes``.

    ``nodes`` has shape (S, d-1) in turns; result has shape (S, deg_u1 + 1).
    """
    lo = min(m[0] for m, _ in f.terms)
    hi = max(m[0] for m, _ in f.terms)
    out = np.zeros((nodes.shape[0], hi - lo + 1), dtype=complex)
    for m, c in f.terms:
        rest = np.asarray(m[1:], dtype=float)
        out[:, m[0] - lo] += c * np.exp(2j * np.pi * (nodes @ rest))
    return out


def _batch_aberth(C: np.ndarray, max_iter: int = 200, tol: float = 1e-15) -> np.ndarray:
    """Aberth iteration on many same-degree polynomials at once; rows of C constant first."""
    S, n1 = C.shape
    n = n1 - 1
    lead = C[:, -1:]
    r = np.abs(C[:, :1] / lead) ** (1.0 / n)
    upper = 1 + np.max(np.abs(C[:, :-1] / lead), axis=1, keepdims=True)
    r = np.clip(r, 1 / upper, upper)
    k = np.arange(n)
    Z = r * np.exp(1j * (2 * np.pi * k / n + 0.4))[None, :]
    D = C[:, 1:] * np.arange(1, n1)[None, :]
    active = np.ones(S, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        Za = Z[active]
        Ca, Da = C[active], D[active]
        p = np.zeros_like(Za)
        for j in range(n, -1, -1):
            p = p * Za + Ca[:, j : j + 1]
        dp = np.zeros_like(Za)
        for j in range(n - 1, -1, -1):
            dp = dp * Za + Da[:, j : j + 1]
        diff = Za[:, :, None] - Za[:, None, :]
        idx = np.arange(n)
        diff[:, idx, idx] = np.inf
        s = np.sum(1.0 / diff, axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step) & (p != 0), step, 0)
        Z[active] = Za - step
        done = np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(Za)), axis=1)
        ids = np.flatnonzero(active)
        active[ids[done]] = False
    return Z


def _slice_log_mahler(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row (log M, certified bound) for complex slices, constant first."""
    S = C.shape[0]
    vals = np.zeros(S)
    errs = np.zeros(S)
    scale = np.max(np.abs(C), axis=1)
    # trailing (high-order) coefficients negligible against the row are dropped
    deg = np.full(S, C.shape[1] - 1)
    for j in range(C.shape[1] - 1, -1, -1):
        small = (np.abs(C[:, j]) <= 1e-13 * scale) & (deg == j)
        deg[small] -= 1
    low = np.zeros(S, dtype=int)
    for j in range(C.shape[1]):
        small = (np.abs(C[:, j]) <= 1e-13 * scale) & (low == j) & (low < deg)
        low[small] += 1
    for n in np.unique(deg - low):
        for lo in np.unique(low[deg - low == n]):
            rows = np.flatnonzero((deg - low == n) & (low == lo))
            sub = C[rows, lo : lo + n + 1]
            dropped = np.sum(np.abs(C[rows]), axis=1) - np.sum(np.abs(sub), axis=1)
            extra = np.where(dropped > 0, (n + 1) * dropped / np.abs(sub[:, -1]), 0.0)
            if n == 0:
                vals[rows] = np.log(np.abs(sub[:, 0]))
                errs[rows] = 4 * EPS * np.abs(vals[rows]) + extra
                continue
            if n == 1:
                a0, a1 = np.abs(sub[:, 0]), np.abs(sub[:, 1])
                vals[rows] = np.log(np.maximum(a0, a1))
                errs[rows] = 8 * EPS * (1 + np.abs(vals[rows])) + extra
                continue
            Z = _batch_aberth(sub)
            for i, r in enumerate(rows):
                c = sub[i]
                rad = inclusion_radii(c, Z[i])
                v, e = _log_mahler_from_roots(c, Z[i], rad)
                vals[r], errs[r] = v, e + extra[i]
    return vals, errs


def _quadrature_nodes(N: int, d: int, offset: float = 0.0) -> np.ndarray:
    axes = [(np.arange(N) + offset) / N] * (d - 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _quadrature(f: LaurentPoly, N: int) -> tuple[float, float]:
    nodes = _quadrature_nodes(N, f.dim)
    C = _slice_coefficients(f, nodes)
    scale = coefficient_mass(f)
    degenerate = np.max(np.abs(C), axis=1) <= 1e-12 * scale
    if degenerate.any():
        log.info("perturbing %d degenerate slice node(s) by half a step", int(degenerate.sum()))
        nodes[degenerate] += 0.5 / N
        C[degenerate] = _slice_coefficients(f, nodes[degenerate])
        if (np.max(np.abs(C[degenerate]), axis=1) <= 1e-12 * scale).any():
            raise ConvergenceError("slice polynomial vanishes identically after perturbation")
    vals, errs = _slice_log_mahler(C)
    # fixed-order reduction keeps the sum reproducible
    return math.fsum(vals.tolist()) / len(vals), math.fsum(errs.tolist()) / len(errs)


def mahler_multi(
    f: LaurentPoly,
    outer_grid: int = DEFAULT_OUTER_GRID,
    tol: float = 1e-9,
    max_grid: int = MAX_OUTER_GRID,
) -> EntropyResult:
    """log M(f) with an error estimate.

    Single-variable (after monomial change of variables) inputs are handled
    exactly through the integer root machinery.  Otherwise u2..ud are fixed
    on a uniform grid, each slice's 1-D log Mahler measure is computed from
    its roots, and the slices are averaged; the grid is doubled until the
    change between successive levels plus the slice bounds is below ``tol``
    or ``max_grid`` is reached.
    """
    if not f:
        raise ZeroPolynomialError()
    col = collapse_collinear(f)
    if f.dim == 1 or col is not None:
        g = univariate_image(f) if f.dim == 1 else col[1]
        value, bound = mahler_int(g, tol=min(tol, 1e-10))
        return EntropyResult(value, float(bound), EntropyMethod.ROOTS_1D, 0)
    if f.dim > 1 and outer_grid ** (f.dim - 1) > MAX_GRID_POINTS:
        raise BudgetExceededError("outer grid too large for this dimension")
    # at least one doubling is needed for a self-convergence estimate
    N = min(outer_grid, max(max_grid // 2, 1))
    prev, _ = _quadrature(f, N)
    history = [(N, prev)]
    value, err = prev, math.inf
    while True:
        N *= 2
        value, slice_err = _quadrature(f, N)
        history.append((N, value))
        err = abs(value - prev) + slice_err
        if err <= tol or 2 * N > max_grid:
            break
        prev = value
    # log M >= 0 for nonzero integer polynomials, so a negative estimate is
    # at least that far from the truth
    err = max(err, -value)
    return EntropyResult(value, float(err), EntropyMethod.ITERATED_QUADRATURE, N, tuple(history))
