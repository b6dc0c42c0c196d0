import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from surjunct import LaurentPoly, parse
from surjunct.classifier import (
    SCHEMA_VERSION,
    AnalyzeConfig,
    Certainty,
    PropertyValue,
    Theorem,
    Truth,
    VerdictStatus,
    analyze,
    check_chain,
    connectedness,
    expansivity,
    generalized_cyclotomic_form,
    is_generalized_cyclotomic,
    is_unit,
    mixing,
)
from surjunct.errors import InconsistentReportError, ZeroPolynomialError
from surjunct.laurent import neg, shift
from surjunct.torus import TorusStatus, certify_no_torus_zero

from strategies import generalized_cyclotomic, laurent_polys, random_int_poly

FAST = AnalyzeConfig(entropy_grid=64, entropy_max_grid=128, tol=1e-6)


class TestSimpleProperties:
    @pytest.mark.parametrize(
        "text, unit, connected",
        [("u1", True, True), ("-u1*u2^-1", True, True), ("2*u1", False, False), ("1+u1", False, True)],
    )
    def test_unit_and_connected(self, text, unit, connected):
        f = parse(text)
        assert is_unit(f) is unit
        assert connectedness(f).value is Truth.of(connected)
        assert connectedness(f).certainty is Certainty.EXACT

    @pytest.mark.parametrize(
        "text, index",
        [
            ("1+u1", 2),
            ("-1+u1", 1),
            ("1-u1", 1),
            ("1+u1+u2^-1", None),
            ("u1^2 - u1*u2 + u2^2", 6),
            ("1+u1^3", 2),
            ("1+u1^2+u1^4", 3),
            ("1+u1+u1^2+u1^3", None),
            ("1+u1+u2", None),
            ("3-2*u1", None),
            ("-1", None),
        ],
    )
    def test_generalized_cyclotomic(self, text, index):
        form = generalized_cyclotomic_form(parse(text))
        if index is None:
            assert form is None
        else:
            assert form["cyclotomic_index"] == index

    def test_mixing_is_complement(self):
        for text in ("1+u1", "1+u1+u2", "7"):
            f = parse(text)
            assert (mixing(f).value is Truth.TRUE) == (not is_generalized_cyclotomic(f))

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomialError):
            analyze(parse("0"))


class TestExpansivity:
    def test_ledrappier_exact(self):
        pv = expansivity(parse("1+u1+u2"))
        assert pv.value is Truth.FALSE and pv.certainty is Certainty.EXACT
        assert pv.evidence["angles"] == ["1/3", "2/3"]

    def test_furstenberg_exact(self):
        pv = expansivity(parse("3-2*u1"))
        assert pv.value is Truth.TRUE and pv.certainty is Certainty.EXACT
        assert pv.evidence["unit_circle_root_count"] == 0

    def test_certified(self):
        pv = expansivity(parse("3+u1+u2"))
        assert pv.value is Truth.TRUE and pv.certainty is Certainty.CERTIFIED_NUMERIC

    def test_collinear_exact(self):
        pv = expansivity(parse("u1+u2"))
        assert pv.value is Truth.FALSE and pv.certainty is Certainty.EXACT

    def test_numeric_witness_off_roots_of_unity(self):
        # |3 + 2x| = 2 on the circle forces cos(2 pi theta1) = -3/4
        pv = expansivity(parse("3+2*u1+2*u2"))
        assert pv.value is Truth.FALSE and pv.certainty is Certainty.NUMERIC_WITNESS
        a1 = pv.evidence["witness_angles"][0]
        assert abs(math.cos(2 * math.pi * a1) + 0.75) < 1e-9

    def test_agrees_with_exact_in_one_variable(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            c = random_int_poly(rng, max_deg=8)
            f = LaurentPoly(1, {(k,): a for k, a in enumerate(c)})
            exact = expansivity(f)
            cert = certify_no_torus_zero(f, grid=256)
            if cert.status is TorusStatus.CERTIFIED_NO_ZERO:
                assert exact.value is Truth.TRUE
            elif cert.status is TorusStatus.WITNESS_FOUND:
                assert exact.value is Truth.FALSE


class TestChain:
    def test_check_chain_rejects(self):
        t = PropertyValue(Truth.TRUE, Certainty.EXACT, {})
        f = PropertyValue(Truth.FALSE, Certainty.EXACT, {})
        with pytest.raises(InconsistentReportError):
            check_chain(f, f, t)
        with pytest.raises(InconsistentReportError):
            check_chain(t, t, f)
        check_chain(t, f, f)

    @given(laurent_polys(dim=2, max_terms=4, coeff=3, exp=2, nonzero=True))
    @settings(max_examples=40, deadline=None)
    def test_property_chain(self, f):
        r = analyze(f, FAST)
        if r.connected.value is Truth.FALSE:
            assert r.expansive.value is Truth.TRUE
            assert expansivity(f).value is not Truth.FALSE
        if r.expansive.value is Truth.TRUE:
            assert r.mixing.value is Truth.TRUE
        if r.is_generalized_cyclotomic:
            assert abs(r.entropy.log_mahler) <= r.entropy.error_estimate


class TestInvariance:
    @pytest.mark.parametrize("text", ["1+u1+u2", "3-2*u1", "2*u1", "1+u1", "3+u1+u2", "u1"])
    def test_monomial_and_sign(self, text):
        f = parse(text)
        base = analyze(f, FAST)
        m = [3, -2][: f.dim]
        for g in (shift(f, m), neg(f)):
            r = analyze(g, FAST)
            assert r.connected.value is base.connected.value
            assert r.mixing.value is base.mixing.value
            assert r.expansive.value is base.expansive.value
            assert r.verdict.status is base.verdict.status
            assert r.verdict.theorem is base.verdict.theorem
            assert abs(r.entropy.log_mahler - base.entropy.log_mahler) <= (
                r.entropy.error_estimate + base.entropy.error_estimate + 1e-12
            )

    def test_generalized_cyclotomic_entropy_zero(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            d = int(rng.integers(1, 3))
            f = generalized_cyclotomic(rng, d)
            r = analyze(f, FAST)
            assert r.is_generalized_cyclotomic
            assert r.mixing.value is Truth.FALSE
            assert r.expansive.value is not Truth.TRUE
            assert abs(r.entropy.log_mahler) <= r.entropy.error_estimate


class TestGolden:
    def test_ledrappier(self):
        r = analyze(parse("1+u1+u2"))
        assert r.connected.value is Truth.TRUE
        assert r.mixing.value is Truth.TRUE
        assert r.expansive.value is Truth.FALSE
        assert r.verdict.status is VerdictStatus.SURJUNCTIVE
        assert r.verdict.theorem is Theorem.CONNECTED_MIXING

    def test_furstenberg(self):
        r = analyze(parse("3-2*u1"))
        assert r.verdict.theorem is Theorem.EXPANSIVE
        assert abs(r.entropy.h_top - math.log(3)) < 1e-9

    def test_full_shift(self):
        r = analyze(parse("2*u1"))
        assert r.connected.value is Truth.FALSE
        assert r.expansive.value is Truth.TRUE and r.mixing.value is Truth.TRUE
        assert abs(r.entropy.h_top - math.log(2)) < 1e-12
        assert r.verdict.theorem is Theorem.EXPANSIVE

    def test_blocking(self):
        r = analyze(parse("1+u1"))
        assert r.is_generalized_cyclotomic
        assert r.verdict.status is VerdictStatus.UNKNOWN
        assert len(r.verdict.blocking) >= 2

    def test_unit(self):
        r = analyze(parse("-u1^3*u2"))
        assert r.verdict.status is VerdictStatus.TRIVIALLY_SURJUNCTIVE
        assert r.entropy.h_top == 0


class TestReport:
    def test_schema(self):
        d = analyze(parse("1+u1+u2")).as_dict()
        assert d["schema"] == SCHEMA_VERSION == "1"
        assert set(d) == {
            "schema",
            "poly",
            "dim",
            "is_unit",
            "is_generalized_cyclotomic",
            "properties",
            "entropy",
            "verdict",
            "disclaimers",
        }
        assert set(d["properties"]) == {"connected", "mixing", "expansive", "adcc"}
        for pv in d["properties"].values():
            assert set(pv) >= {"value", "certainty", "evidence"}
        assert d["verdict"]["theorem"] == "Theorem3"
        assert d["disclaimers"]
        json.dumps(d)

    def test_deterministic(self):
        f = parse("3+u1+u2")
        a = json.dumps(analyze(f, FAST).as_dict(), sort_keys=True)
        b = json.dumps(analyze(f, FAST).as_dict(), sort_keys=True)
        assert a == b

    def test_config_validation(self):
        with pytest.raises(ValueError):
            AnalyzeConfig(grid=0)
        with pytest.raises(ValueError):
            AnalyzeConfig(tol=0)
