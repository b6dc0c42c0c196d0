"""Finite, exact models of the discrete examples.

* The subshift Sigma of {0,1}^Z (sequences with at most one run of 1s) and
  the cellular automaton tau(x)(n) = 1 if (x(n), x(n+1)) = (0, 1) else x(n),
  which is injective and shift-commuting but not onto.
* Periodic points of the mod-p reduction of X_f: configurations on the torus
  Z^d / (N_1 Z x ... x N_d Z) with values in F_p satisfying the defining
  relation.  These are finite-model stand-ins for the T-valued systems.
* Image chains alpha^k(K) of shift-commuting endomorphisms on those finite
  groups, the finite version of the descending-chain argument.
* Reconstruction of the mod-p Ledrappier configuration from its values on
  E = {n2 = 0} u {n1 = 0, n2 < 0}.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from sympy import isprime

from .errors import BudgetExceededError, InconsistentReportError, InsufficientDataError
from .laurent import LaurentPoly, embed

DEFAULT_CELL_CAP = 1 << 20

# ---------------------------------------------------------------------------
# Sigma


@dataclass(frozen=True)
class SigmaConfig:
    """A point of Sigma.  ``kind`` is one of AllZero, AllOne, Block, LeftRay, RightRay.

    Block(a, b): ones exactly on [a, b]; LeftRay(b): ones on (-inf, b];
    RightRay(a): ones on [a, +inf).
    """

    kind: str
    a: int | None = None
    b: int | None = None

    def __post_init__(self):
        need = {"AllZero": (False, False), "AllOne": (False, False), "Block": (True, True),
                "LeftRay": (False, True), "RightRay": (True, False)}
        if self.kind not in need:
            raise ValueError(f"unknown Sigma variant {self.kind!r}")
        ha, hb = need[self.kind]
        if (self.a is not None) != ha or (self.b is not None) != hb:
            raise ValueError(f"bad parameters for {self.kind}")
        if self.kind == "Block" and self.a > self.b:
            raise ValueError("Block needs a <= b")

    def __repr__(self):
        args = ",".join(str(x) for x in (self.a, self.b) if x is not None)
        return f"{self.kind}({args})" if args else self.kind

    def __getitem__(self, n: int) -> int:
        k = self.kind
        if k == "AllZero":
            return 0
        if k == "AllOne":
            return 1
        if k == "Block":
            return int(self.a <= n <= self.b)
        if k == "LeftRay":
            return int(n <= self.b)
        return int(n >= self.a)

    def window(self, lo: int, hi: int) -> list[int]:
        return [self[n] for n in range(lo, hi + 1)]


ALL_ZERO = SigmaConfig("AllZero")
ALL_ONE = SigmaConfig("AllOne")


def Block(a: int, b: int) -> SigmaConfig:
    return SigmaConfig("Block", a, b)


def LeftRay(b: int) -> SigmaConfig:
    return SigmaConfig("LeftRay", None, b)


def RightRay(a: int) -> SigmaConfig:
    return SigmaConfig("RightRay", a, None)


def sigma_tau(c: SigmaConfig) -> SigmaConfig:
    if c.kind == "Block":
        return Block(c.a - 1, c.b)
    if c.kind == "RightRay":
        return RightRay(c.a - 1)
    return c


def sigma_shift(c: SigmaConfig, k: int) -> SigmaConfig:
    """Translate by k: result(n) = c(n - k)."""
    if c.kind == "Block":
        return Block(c.a + k, c.b + k)
    if c.kind == "LeftRay":
        return LeftRay(c.b + k)
    if c.kind == "RightRay":
        return RightRay(c.a + k)
    return c


def sigma_preimage(c: SigmaConfig) -> SigmaConfig | None:
    if c.kind == "Block":
        return Block(c.a + 1, c.b) if c.b > c.a else None
    if c.kind == "RightRay":
        return RightRay(c.a + 1)
    return c


def tau_pointwise(cells: Sequence[int]) -> list[int]:
    """tau on a finite window; the last cell has no right neighbour and is dropped."""
    return [1 if (cells[i], cells[i + 1]) == (0, 1) else cells[i] for i in range(len(cells) - 1)]


def sigma_family(lo: int, hi: int) -> list[SigmaConfig]:
    """Every symbolic point with parameters in [lo, hi]."""
    out = [ALL_ZERO, ALL_ONE]
    out += [Block(a, b) for a in range(lo, hi + 1) for b in range(a, hi + 1)]
    out += [LeftRay(b) for b in range(lo, hi + 1)]
    out += [RightRay(a) for a in range(lo, hi + 1)]
    return out


@dataclass
class SigmaCheck:
    name: str
    passed: bool
    detail: str = ""


def sigma_checks(lo: int = -50, hi: int = 50, shifts: range = range(-10, 11)) -> list[SigmaCheck]:
    """Equivariance, injectivity and the non-surjectivity witness over a bounded family."""
    fam = sigma_family(lo, hi)
    bad = [(c, k) for c in fam for k in shifts
           if sigma_tau(sigma_shift(c, k)) != sigma_shift(sigma_tau(c), k)]
    checks = [SigmaCheck("equivariant", not bad, f"{len(fam) * len(shifts)} pairs")]
    images = [sigma_tau(c) for c in fam]
    checks.append(SigmaCheck("injective", len(set(images)) == len(images), f"{len(fam)} points"))
    orphans = [c for c in fam if sigma_preimage(c) is None]
    single = all(c.kind == "Block" and c.a == c.b for c in orphans)
    detail = f"witness: single-1 block {orphans[0]!r}" if orphans and single else ""
    checks.append(SigmaCheck("surjective", not orphans, detail))
    inverse_ok = all(sigma_preimage(sigma_tau(c)) == c for c in fam) and all(
        sigma_tau(p) == c for c in fam if (p := sigma_preimage(c)) is not None
    )
    checks.append(SigmaCheck("preimage_inverse", inverse_ok))
    return checks


# ---------------------------------------------------------------------------
# mod-p periodic points


@dataclass(frozen=True)
class PeriodicLattice:
    periods: tuple[int, ...]

    def __init__(self, periods: Sequence[int], cap: int = DEFAULT_CELL_CAP):
        periods = tuple(int(n) for n in periods)
        if not periods or any(n < 1 for n in periods):
            raise ValueError("periods must be positive")
        if math.prod(periods) > cap:
            raise BudgetExceededError(f"lattice {periods} exceeds the cell cap {cap}")
        object.__setattr__(self, "periods", periods)

    @property
    def cells(self) -> int:
        return math.prod(self.periods)

    @property
    def dim(self) -> int:
        return len(self.periods)

    def index(self, n: Sequence[int]) -> int:
        # Python's % is the Euclidean remainder for positive moduli
        return int(np.ravel_multi_index(tuple(x % N for x, N in zip(n, self.periods)), self.periods))


def _check_prime(p: int):
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


def relation_matrix(f: LaurentPoly, p: int, lattice: PeriodicLattice) -> np.ndarray:
    """Matrix of x -> sum_m f_m x(. + m) on F_p^(cells), entries in [0, p)."""
    if f.dim < lattice.dim:
        f = embed(f, lattice.dim)
    if f.dim != lattice.dim:
        raise ValueError("lattice dimension differs from polynomial dimension")
    M = lattice.cells
    A = np.zeros((M, M), dtype=np.int64)
    for flat, n in enumerate(np.ndindex(*lattice.periods)):
        for m, c in f.terms:
            j = lattice.index([a + b for a, b in zip(n, m)])
            A[flat, j] = (A[flat, j] + c) % p
    return A


def row_reduce(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; pivots chosen first-nonzero in column order."""
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * pow(int(R[r, col]), -1, p)) % p
        others = np.flatnonzero(R[:, col])
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, col], R[r])) % p
        pivots.append(col)
        r += 1
    return R, pivots


def rank_mod_p(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(row_reduce(A, p)[1])


def nullspace_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} over F_p, as rows."""
    R, pivots = row_reduce(A, p)
    n = A.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-R[r, fc]) % p
    return basis


@dataclass(frozen=True)
class PeriodicCount:
    periods: tuple[int, ...]
    kernel_dim: int
    count: int


def periodic_points_count(f: LaurentPoly, p: int, lattice: PeriodicLattice) -> PeriodicCount:
    """Number of lattice-periodic mod-p configurations satisfying the relation."""
    if not f:
        raise ValueError("zero polynomial")
    _check_prime(p)
    A = relation_matrix(f, p, lattice)
    k = lattice.cells - rank_mod_p(A, p)
    return PeriodicCount(lattice.periods, k, p**k)


def brute_force_count(f: LaurentPoly, p: int, lattice: PeriodicLattice) -> int:
    """Enumerate all p^cells configurations; only for tiny lattices."""
    A = relation_matrix(f, p, lattice)
    if p ** lattice.cells > 1 << 22:
        raise BudgetExceededError("too many configurations to enumerate")
    total = 0
    for x in itertools.product(range(p), repeat=lattice.cells):
        if not np.any((A @ np.array(x, dtype=np.int64)) % p):
            total += 1
    return total


def write_periodic_csv(rows: Sequence[PeriodicCount], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        d = len(rows[0].periods) if rows else 0
        w.writerow([f"N{i + 1}" for i in range(d)] + ["kernel_dim", "count"])
        for r in rows:
            w.writerow(list(r.periods) + [r.kernel_dim, r.count])


@dataclass(frozen=True)
class ImageChain:
    dims: tuple[int, ...]
    kernel_dim: int
    injective: bool

    @property
    def stabilized(self) -> int:
        return self.dims[-1]


def image_chain_stabilization(
    g: LaurentPoly, f: LaurentPoly, p: int, lattice: PeriodicLattice
) -> ImageChain:
    """Dimensions of alpha^k(K), k = 0, 1, ..., until they repeat.

    K is the group of lattice-periodic mod-p points of X_f and alpha is
    multiplication by g, i.e. x -> sum_m g_m x(. + m), which commutes with
    shifts and maps K into itself.
    """
    _check_prime(p)
    K = nullspace_mod_p(relation_matrix(f, p, lattice), p)
    G = relation_matrix(g, p, lattice) if g else np.zeros((lattice.cells,) * 2, dtype=np.int64)
    F = relation_matrix(f, p, lattice)
    # alpha(K) must stay inside K
    if K.size and np.any((F @ ((G @ K.T) % p)) % p):
        raise InconsistentReportError("multiplier does not preserve the periodic subgroup")
    k = K.shape[0]
    dims = [k]
    V = K
    for _ in range(k + 1):
        W = (V @ G.T) % p
        R, piv = row_reduce(W, p) if W.size else (W, [])
        V = R[: len(piv)]
        dims.append(len(piv))
        if dims[-1] == dims[-2]:
            break
    else:
        raise InconsistentReportError("image chain did not stabilize within dim + 1 steps")
    injective = dims[1] == dims[0]
    if injective and len(set(dims)) != 1:
        raise InconsistentReportError("injective multiplier with a shrinking image chain")
    return ImageChain(tuple(dims), k, injective)


# ---------------------------------------------------------------------------
# Ledrappier reconstruction from E


def in_E(n1: int, n2: int) -> bool:
    return n2 == 0 or (n1 == 0 and n2 < 0)


def reconstruct_from_E(
    data: Mapping[tuple[int, int], int],
    p: int,
    window: tuple[tuple[int, int], tuple[int, int]],
) -> dict[tuple[int, int], int]:
    """Fill ``window = ((n1_lo, n1_hi), (n2_lo, n2_hi))`` from values on E.

    Uses x(n1+1, n2) + x(n1, n2) + x(n1, n2+1) = 0 mod p: rows above 0 are
    computed upward, rows below 0 by sweeping outward from column 0.  The
    needed E-values are row 0 on [min(lo, 0), hi + max(n2_hi, 0)] and
    column 0 down to n2_lo; a missing one raises InsufficientDataError.
    """
    _check_prime(p)
    (lo, hi), (blo, bhi) = window
    if lo > hi or blo > bhi:
        raise ValueError("empty window")

    def e_value(n):
        if n not in data:
            raise InsufficientDataError(f"missing E-value at {n}")
        return data[n] % p

    for n in data:
        if not in_E(*n):
            raise ValueError(f"{n} is not in E")
    top = max(bhi, 0)
    left, right = min(lo, 0), max(hi, 0)
    x: dict[tuple[int, int], int] = {}
    for n1 in range(left, right + top + 1):
        x[(n1, 0)] = e_value((n1, 0))
    for n2 in range(1, top + 1):
        for n1 in range(left, right + top - n2 + 1):
            x[(n1, n2)] = (-x[(n1 + 1, n2 - 1)] - x[(n1, n2 - 1)]) % p
    for n2 in range(-1, min(blo, 0) - 1, -1):
        x[(0, n2)] = e_value((0, n2))
        for n1 in range(0, right):
            x[(n1 + 1, n2)] = (-x[(n1, n2)] - x[(n1, n2 + 1)]) % p
        for n1 in range(-1, left - 1, -1):
            x[(n1, n2)] = (-x[(n1 + 1, n2)] - x[(n1, n2 + 1)]) % p
    out = {(a, b): x[(a, b)] for a in range(lo, hi + 1) for b in range(blo, bhi + 1)}
    for (a, b), v in out.items():
        if (a + 1, b) in out and (a, b + 1) in out:
            if (out[(a + 1, b)] + v + out[(a, b + 1)]) % p:
                raise InconsistentReportError(f"relation violated at {(a, b)}")
    return out
