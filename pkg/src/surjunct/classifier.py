"""Classification of X_f and the surjunctivity verdict.

For nonzero f in Z[u1^+-1, ..., ud^+-1], X_f is the closed shift-invariant
subgroup of T^(Z^d) cut out by sum_m f_m x(n + m) = 0.  For irreducible f:

* connected    iff f is not +-k u^m with |k| >= 2
* mixing       iff f is not a generalized cyclotomic polynomial
* expansive    iff f has no zero on the unit torus U^d
* entropy      = |log M(f)|
* the algebraic descending chain condition always holds.

Generalized cyclotomic is taken to mean f = +-u^m c(u^n) with c a
cyclotomic polynomial and n a nonzero integer vector.

The verdict uses the expansive-systems theorem (expansive => surjunctive)
first, then the connected-mixing theorem (connected, mixing, a.d.c.c. and
finite entropy => surjunctive).  Irreducibility of f is assumed, not checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from sympy import divisors

from .errors import InconsistentReportError, ZeroPolynomialError
from .laurent import LaurentPoly, collapse_collinear, univariate_image
from .parser import format_poly
from .torus import (
    DEFAULT_OUTER_GRID,
    MAX_OUTER_GRID,
    EntropyResult,
    TorusStatus,
    certify_no_torus_zero,
    mahler_multi,
    roots_of_unity_witness,
)
from .univariate import UnivariateIntPoly, cyclotomic, cyclotomic_index, unit_circle_roots

SCHEMA_VERSION = "1"

DISCLAIMERS = (
    "Irreducibility of f is not verified; properties are those of the module R_d/fR_d "
    "and the criteria used are exact only for irreducible f.",
    "The dual group of X is the cyclic R_d-module R_d/fR_d.",
    "Finite topological dimension is not decided here; the connected finite-dimensional "
    "route is recorded as an annotation only.",
)


class Truth(str, Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, b: bool) -> "Truth":
        return cls.TRUE if b else cls.FALSE


class Certainty(str, Enum):
    EXACT = "Exact"
    CERTIFIED_NUMERIC = "CertifiedNumeric"
    NUMERIC_WITNESS = "NumericWitness"


@dataclass(frozen=True)
class PropertyValue:
    value: Truth
    certainty: Certainty
    evidence: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "value": self.value.value,
            "certainty": self.certainty.value,
            "evidence": self.evidence,
        }


class VerdictStatus(str, Enum):
    SURJUNCTIVE = "Surjunctive"
    TRIVIALLY_SURJUNCTIVE = "TriviallySurjunctive"
    UNKNOWN = "Unknown"


class Theorem(str, Enum):
    EXPANSIVE = "Theorem2"
    CONNECTED_MIXING = "Theorem3"


# property anchors cited in verdict reasoning
ANCHORS = {
    "connected": "X connected iff V_C(f) nonempty; disconnected iff f = +-k u^m, |k| >= 2",
    "mixing": "mixing iff f is not a generalized cyclotomic polynomial",
    "expansive": "expansive iff V_C(f) does not meet U^d",
    "adcc": "X_f satisfies the algebraic descending chain condition",
    "entropy": "h_top = |log M(f)| < infinity",
    "unit": "f a unit: X = {0}",
    "Theorem2": "expansive algebraic Z^d-actions are surjunctive",
    "Theorem3": "connected, mixing, a.d.c.c., finite entropy => surjunctive",
    "Theorem1": "connected with finite topological dimension => surjunctive (hypothesis not checked)",
}


@dataclass(frozen=True)
class SurjunctivityVerdict:
    status: VerdictStatus
    theorem: Theorem | None
    reasoning: tuple[tuple[str, str, str], ...]
    blocking: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "theorem": self.theorem.value if self.theorem else None,
            "reasoning": [{"property": p, "value": v, "anchor": a} for p, v, a in self.reasoning],
            "blocking": list(self.blocking),
        }


@dataclass(frozen=True)
class PropertyReport:
    poly: LaurentPoly
    connected: PropertyValue
    mixing: PropertyValue
    expansive: PropertyValue
    entropy: EntropyResult
    is_unit: bool
    is_generalized_cyclotomic: bool
    adcc: PropertyValue
    verdict: SurjunctivityVerdict
    disclaimers: tuple[str, ...] = DISCLAIMERS

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "poly": format_poly(self.poly),
            "dim": self.poly.dim,
            "is_unit": self.is_unit,
            "is_generalized_cyclotomic": self.is_generalized_cyclotomic,
            "properties": {
                "connected": self.connected.as_dict(),
                "mixing": self.mixing.as_dict(),
                "expansive": self.expansive.as_dict(),
                "adcc": self.adcc.as_dict(),
            },
            "entropy": self.entropy.as_dict(),
            "verdict": self.verdict.as_dict(),
            "disclaimers": list(self.disclaimers),
        }


def _require_nonzero(f: LaurentPoly):
    if not f:
        raise ZeroPolynomialError()


def single_term(f: LaurentPoly) -> tuple[tuple[int, ...], int] | None:
    return f.terms[0] if len(f.terms) == 1 else None


def is_unit(f: LaurentPoly) -> bool:
    t = single_term(f)
    return t is not None and abs(t[1]) == 1


def connectedness(f: LaurentPoly) -> PropertyValue:
    _require_nonzero(f)
    t = single_term(f)
    if t is not None and abs(t[1]) >= 2:
        return PropertyValue(
            Truth.FALSE,
            Certainty.EXACT,
            {"form": "+-k*u^m", "k": abs(t[1]), "m": list(t[0]), "shift_alphabet": f"Z/{abs(t[1])}Z"},
        )
    if t is not None:
        return PropertyValue(
            Truth.TRUE, Certainty.EXACT, {"form": "+-u^m", "note": "trivial system X = {0}"}
        )
    return PropertyValue(Truth.TRUE, Certainty.EXACT, {"form": "not a single term"})


def generalized_cyclotomic_form(f: LaurentPoly) -> dict | None:
    """Exhibit f = +-u^m c(u^n) with c cyclotomic, or return None."""
    _require_nonzero(f)
    col = collapse_collinear(f)
    if col is None:
        return None
    n0, g = col
    g = g.strip_t_powers()
    if g.degree < 1:
        return None
    exps = [k for k, c in enumerate(g.coeffs) if c]
    b0 = math.gcd(*exps)
    for b in divisors(b0):
        chat = UnivariateIntPoly(g.coeffs[k] for k in range(0, g.degree + 1, b))
        idx = cyclotomic_index(chat)
        if idx is not None:
            sign = 1 if chat.lc == cyclotomic(idx).lc else -1
            return {
                "cyclotomic_index": idx,
                "direction": [b * x for x in n0],
                "sign": sign,
                "anchor": list(f.support()[0]),
            }
    return None


def is_generalized_cyclotomic(f: LaurentPoly) -> bool:
    return generalized_cyclotomic_form(f) is not None


def mixing(f: LaurentPoly) -> PropertyValue:
    form = generalized_cyclotomic_form(f)
    if form is None:
        return PropertyValue(Truth.TRUE, Certainty.EXACT, {"generalized_cyclotomic": False})
    return PropertyValue(
        Truth.FALSE, Certainty.EXACT, {"generalized_cyclotomic": True, "form": form}
    )


def expansivity(
    f: LaurentPoly,
    grid: int = 64,
    max_rou_order: int = 12,
    witness_tol: float = 1e-10,
) -> PropertyValue:
    _require_nonzero(f)
    t = single_term(f)
    if t is not None:
        return PropertyValue(
            Truth.TRUE, Certainty.EXACT, {"method": "monomial", "modulus_on_torus": abs(t[1])}
        )
    col = collapse_collinear(f)
    if f.dim == 1 or col is not None:
        # u^n0 sweeps the whole circle, so torus zeros of f are circle zeros of g
        g = univariate_image(f) if f.dim == 1 else col[1].strip_t_powers()
        cert = unit_circle_roots(g)
        ev = {
            "method": "sturm_unit_circle",
            "unit_circle_root_count": cert.count,
            "mult_at_1": cert.mult_one,
            "mult_at_-1": cert.mult_minus_one,
            "conjugate_pairs": cert.pairs,
        }
        if f.dim > 1:
            ev["direction"] = list(col[0])
        return PropertyValue(Truth.of(cert.count == 0), Certainty.EXACT, ev)
    w = roots_of_unity_witness(f, max_rou_order)
    if w is not None:
        return PropertyValue(
            Truth.FALSE, Certainty.EXACT, {"method": "root_of_unity_witness", **w.as_dict()}
        )
    cert = certify_no_torus_zero(f, grid, witness_tol)
    ev = {"method": "torus_grid", **cert.as_dict()}
    if cert.status is TorusStatus.CERTIFIED_NO_ZERO:
        return PropertyValue(Truth.TRUE, Certainty.CERTIFIED_NUMERIC, ev)
    if cert.status is TorusStatus.WITNESS_FOUND:
        return PropertyValue(Truth.FALSE, Certainty.NUMERIC_WITNESS, ev)
    return PropertyValue(Truth.UNKNOWN, Certainty.CERTIFIED_NUMERIC, ev)


def entropy(
    f: LaurentPoly,
    outer_grid: int = DEFAULT_OUTER_GRID,
    tol: float = 1e-9,
    max_grid: int = MAX_OUTER_GRID,
) -> EntropyResult:
    _require_nonzero(f)
    return mahler_multi(f, outer_grid=outer_grid, tol=tol, max_grid=max_grid)


def check_chain(connected: PropertyValue, expansive: PropertyValue, mixing_: PropertyValue):
    """Raise if disconnected => expansive => mixing is violated."""
    if connected.value is Truth.FALSE and expansive.value is not Truth.TRUE:
        raise InconsistentReportError("disconnected system not reported expansive")
    if expansive.value is Truth.TRUE and mixing_.value is not Truth.TRUE:
        raise InconsistentReportError("expansive system not reported mixing")


def verdict(
    connected: PropertyValue,
    mixing_: PropertyValue,
    expansive: PropertyValue,
    entropy_: EntropyResult,
    unit: bool,
    gen_cyclotomic: bool,
) -> SurjunctivityVerdict:
    check_chain(connected, expansive, mixing_)
    if unit:
        return SurjunctivityVerdict(
            VerdictStatus.TRIVIALLY_SURJUNCTIVE,
            None,
            (("is_unit", "True", ANCHORS["unit"]),),
        )
    reasoning = []
    if expansive.value is Truth.TRUE:
        reasoning.append(("expansive", "True", ANCHORS["expansive"]))
        if connected.value is Truth.TRUE:
            reasoning.append(("connected", "True", ANCHORS["Theorem1"]))
        reasoning.append(("theorem", "Theorem2", ANCHORS["Theorem2"]))
        return SurjunctivityVerdict(VerdictStatus.SURJUNCTIVE, Theorem.EXPANSIVE, tuple(reasoning))
    if connected.value is Truth.TRUE and mixing_.value is Truth.TRUE:
        reasoning += [
            ("connected", "True", ANCHORS["connected"]),
            ("mixing", "True", ANCHORS["mixing"]),
            ("adcc", "True", ANCHORS["adcc"]),
            ("entropy", f"{entropy_.h_top:.10g}", ANCHORS["entropy"]),
        ]
        if expansive.value is Truth.UNKNOWN:
            reasoning.append(("expansive", "Unknown", ANCHORS["expansive"]))
        reasoning.append(("theorem", "Theorem3", ANCHORS["Theorem3"]))
        return SurjunctivityVerdict(
            VerdictStatus.SURJUNCTIVE, Theorem.CONNECTED_MIXING, tuple(reasoning)
        )
    blocking = []
    if gen_cyclotomic:
        blocking.append("f is a generalized cyclotomic polynomial (not mixing)")
    elif mixing_.value is not Truth.TRUE:
        blocking.append(f"mixing is {mixing_.value.value}")
    if expansive.value is Truth.FALSE:
        blocking.append("f vanishes on the unit torus (not expansive)")
    elif expansive.value is Truth.UNKNOWN:
        blocking.append("expansivity undecided by the torus certificate")
    if connected.value is not Truth.TRUE:
        blocking.append(f"connected is {connected.value.value}")
    reasoning = [
        ("connected", connected.value.value, ANCHORS["connected"]),
        ("mixing", mixing_.value.value, ANCHORS["mixing"]),
        ("expansive", expansive.value.value, ANCHORS["expansive"]),
    ]
    return SurjunctivityVerdict(VerdictStatus.UNKNOWN, None, tuple(reasoning), tuple(blocking))


@dataclass(frozen=True)
class AnalyzeConfig:
    grid: int = 64
    entropy_grid: int = DEFAULT_OUTER_GRID
    entropy_max_grid: int = MAX_OUTER_GRID
    tol: float = 1e-9
    max_rou_order: int = 12
    witness_tol: float = 1e-10

    def __post_init__(self):
        for name in ("grid", "entropy_grid", "entropy_max_grid", "max_rou_order"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.tol <= 0 or self.witness_tol <= 0:
            raise ValueError("tolerances must be positive")


def analyze(f: LaurentPoly, config: AnalyzeConfig | None = None) -> PropertyReport:
    cfg = config or AnalyzeConfig()
    _require_nonzero(f)
    conn = connectedness(f)
    unit = is_unit(f)
    if conn.value is Truth.FALSE:
        exp = PropertyValue(
            Truth.TRUE, Certainty.EXACT, {"method": "implied by disconnectedness"}
        )
    else:
        exp = expansivity(f, cfg.grid, cfg.max_rou_order, cfg.witness_tol)
    gc = generalized_cyclotomic_form(f)
    mix = mixing(f)
    if exp.value is Truth.TRUE and mix.value is not Truth.TRUE:
        raise InconsistentReportError(f"{format_poly(f)}: expansive but not mixing")
    ent = entropy(f, cfg.entropy_grid, cfg.tol, cfg.entropy_max_grid)
    adcc = PropertyValue(Truth.TRUE, Certainty.EXACT, {"reason": "cyclic module R_d/fR_d"})
    v = verdict(conn, mix, exp, ent, unit, gc is not None)
    return PropertyReport(f, conn, mix, exp, ent, unit, gc is not None, adcc, v)
