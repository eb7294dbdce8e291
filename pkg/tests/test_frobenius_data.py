import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import ec_trace_brute, hyper_points, power_sums_from_lpoly
from satotate import _kernels
from satotate.equidist import diagnose
from satotate.finite_field import IntPoly, primes_up_to
from satotate.frobenius_data import (
    BadReduction,
    EllipticCurveQ,
    HyperCurveQ,
    NotWeil,
    detect_period,
    ec_scan,
    ec_trace,
    eigenangles,
    g2_local_factor,
    g2_point_counts,
    g2_scan,
    hasse_bound_ok,
    is_ordinary,
    power_sequence,
    weil_bounds_ok,
)
from satotate.st_groups import get_group

EC_TEST_CURVES = [(1, 1), (-1, 0), (0, 1), (-2, 3), (5, -7)]
G2_TEST_CURVES = [(1, 1, 0, 0, 0, 1), (1, 0, 2, 0, -1, 0, 3)]

# frozen from exhaustive enumeration (oracles.ec_trace_brute)
A_P_GENERIC = {3: 0, 5: -3, 7: 3, 11: -2, 13: -4, 17: 0, 19: -1, 23: -4}
A_P_CM = {3: 0, 5: -2, 7: 0, 11: 0, 13: 6, 17: 2, 19: 0, 23: 0}
# (p, N1, N2) for y^2 = x^5 + x + 1 from listing all points over F_p and F_{p^2}
G2_COUNTS = [(5, 6, 46), (11, 8, 134), (13, 15, 177)]


class TestEllipticTraces:
    def test_frozen_values(self):
        for p, a in A_P_GENERIC.items():
            assert ec_trace(EllipticCurveQ(1, 1), p) == a
        for p, a in A_P_CM.items():
            assert ec_trace(EllipticCurveQ(-1, 0), p) == a

    @pytest.mark.parametrize("a,b", EC_TEST_CURVES)
    def test_matches_enumeration(self, a, b):
        E = EllipticCurveQ(a, b)
        for p in primes_up_to(200):
            p = int(p)
            if E.is_good(p):
                assert ec_trace(E, p) == ec_trace_brute(a, b, p)

    def test_bad_reduction(self):
        with pytest.raises(BadReduction):
            ec_trace(EllipticCurveQ(1, 1), 31)
        with pytest.raises(BadReduction):
            ec_trace(EllipticCurveQ(1, 1), 2)
        with pytest.raises(ValueError):
            EllipticCurveQ(0, 0)

    def test_bsgs_matches_direct_count(self):
        rng = np.random.default_rng(11)
        primes = primes_up_to(60000)
        primes = primes[primes > _kernels.BSGS_THRESHOLD]
        for a, b in EC_TEST_CURVES:
            for p in rng.choice(primes, size=40, replace=False):
                p = int(p)
                if EllipticCurveQ(a, b).is_good(p):
                    assert _kernels.ec_trace_bsgs(a, b, p) == _kernels.ec_trace_direct(a, b, p)

    def test_scan_cardinality(self):
        scan = ec_scan(EllipticCurveQ(1, 1), 100)
        assert len(scan.data) == 23 and scan.skipped == [2, 31]
        scan = ec_scan(EllipticCurveQ(-1, 0), 10)
        assert scan.primes.tolist() == [3, 5, 7]

    def test_scan_respects_hasse(self, scan_generic):
        assert np.all(np.abs(scan_generic.normalized) <= 2)
        assert np.all(np.diff(scan_generic.primes) > 0)
        assert all(hasse_bound_ok(d.a_p, d.p) for d in scan_generic.data)


class TestGenusTwo:
    def test_frozen_counts(self):
        C = HyperCurveQ(IntPoly(G2_TEST_CURVES[0]))
        for p, n1, n2 in G2_COUNTS:
            assert g2_point_counts(C, p) == (n1, n2)

    @pytest.mark.parametrize("coeffs", G2_TEST_CURVES)
    def test_counts_match_enumeration(self, coeffs):
        C = HyperCurveQ(IntPoly(coeffs))
        for p in primes_up_to(50):
            p = int(p)
            if C.is_good(p):
                assert g2_point_counts(C, p) == (hyper_points(coeffs, p, 1), hyper_points(coeffs, p, 2))

    @pytest.mark.parametrize("coeffs", G2_TEST_CURVES)
    def test_cubic_extension_prediction(self, coeffs):
        C = HyperCurveQ(IntPoly(coeffs))
        for p in (3, 5, 7):
            if not C.is_good(p):
                continue
            lf = g2_local_factor(C, p)
            s3 = power_sums_from_lpoly(lf.e1, lf.e2, p, 3)[3]
            assert p**3 + 1 - s3 == hyper_points(coeffs, p, 3)

    def test_lpolynomial_roots_on_circle(self):
        C = HyperCurveQ(IntPoly(G2_TEST_CURVES[0]))
        for lf in g2_scan(C, 500):
            assert lf.coefficients == (1, -lf.e1, lf.e2, -lf.p * lf.e1, lf.p**2)
            assert weil_bounds_ok(lf.e1, lf.e2, lf.p)
            roots = lf.roots()
            assert np.allclose(np.abs(roots * math.sqrt(lf.p)), 1, atol=1e-9)
            poly = np.polynomial.Polynomial(lf.coefficients)
            assert np.max(np.abs(poly(roots))) < 1e-6 * lf.p**2
            assert 0 <= lf.theta[0] <= lf.theta[1] <= math.pi

    def test_scan_skips_bad_primes(self):
        C = HyperCurveQ(IntPoly(G2_TEST_CURVES[0]))  # disc 3381 = 3 * 7^2 * 23
        ps = [lf.p for lf in g2_scan(C, 200)]
        good = [int(p) for p in primes_up_to(200) if p not in (2, 3, 7, 23)]
        assert ps == good

    def test_rejects_repeated_factor(self):
        with pytest.raises(ValueError):
            HyperCurveQ(IntPoly((0, 0, 1, 0, 0, 1)))  # x^2 (x^3 + 1)
        with pytest.raises(ValueError):
            HyperCurveQ(IntPoly((1, 0, 0, 1)))

    def test_eigenangles_reject_non_weil(self):
        with pytest.raises(ArithmeticError):
            eigenangles(100, 0, 5)

    def test_scan_consistent_with_usp4(self):
        C = HyperCurveQ(IntPoly(G2_TEST_CURVES[0]))
        a1 = np.array([lf.a1 for lf in g2_scan(C, 2000)])
        rep = diagnose(a1, get_group("USp4"), 4)
        assert rep.verdict == "consistent"


class TestPowerSequence:
    def test_first_term(self):
        seq = power_sequence(5, 2, 3)
        assert seq.terms[0] == pytest.approx(2 / math.sqrt(5))

    def test_degenerate_constant(self):
        seq = power_sequence(4, 4, 4)
        assert np.allclose(seq.terms, 2)
        assert detect_period(seq.terms, 8) == 1

    def test_not_weil(self):
        with pytest.raises(NotWeil):
            power_sequence(5, 5, 10)

    def test_ordinary(self):
        assert is_ordinary(5, 2)
        assert not is_ordinary(5, 0)
        assert not is_ordinary(9, 3)

    @given(st.sampled_from([2, 3, 5, 7, 9, 25]), st.data())
    def test_terms_match_complex_powers(self, q, data):
        bound = int(2 * math.sqrt(q))
        a_q = data.draw(st.integers(-bound, bound))
        seq = power_sequence(q, a_q, 30)
        alpha = seq.alpha
        direct = [2 * (alpha**n).real / q ** (n / 2) for n in range(1, 31)]
        assert np.allclose(seq.terms, direct, atol=1e-9)

    @pytest.mark.parametrize("q,a_q", [(3, 3), (2, 2), (4, 2), (5, 0), (9, 3)])
    def test_supersingular_or_root_of_unity_is_periodic(self, q, a_q):
        seq = power_sequence(q, a_q, 2000)
        # alpha / sqrt(q) has order dividing 12 here, which can exceed 2q for small q
        period = detect_period(seq.terms, max(2 * q, 12))
        assert period is not None and period <= 12
        assert diagnose(seq.terms, get_group("U1")).verdict == "inconsistent"

    def test_ordinary_equidistributes(self):
        n = 10**5
        t = power_sequence(5, 2, n).terms
        assert abs(np.mean(t**2) - 2) < 3 / math.sqrt(n)
        assert abs(np.mean(t**4) - 6) < 3 / math.sqrt(n)
        assert detect_period(t, 10) is None
