import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import comb

from satotate.st_groups import (
    CATALOG,
    G1_GROUPS,
    IrrepSpec,
    MAX_MOMENT,
    UnsupportedMoment,
    char_inner_product,
    get_group,
    haar_sample,
    st3_audit,
    st3_check,
    sym_char,
    trace_density,
    trace_moment,
    usp4_char,
    usp4_density,
    weyl_dimension,
)

angles = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)

# E[tr^{2k}] on USp(4): 1, 1, 3, 14, 84, 594 (walks in the Weyl chamber of type C2)
USP4_EVEN_MOMENTS = [1, 1, 3, 14, 84, 594]


def complete_symmetric_brute(values, d):
    """h_d by summing every degree-d monomial."""
    total = 0j
    for combo in itertools.combinations_with_replacement(range(len(values)), d):
        total += np.prod([values[i] for i in combo])
    return total


def gamma_brute(a, b, t1, t2):
    ev = [np.exp(1j * t1), np.exp(-1j * t1), np.exp(1j * t2), np.exp(-1j * t2)]

    def J(d):
        return complete_symmetric_brute(ev, d) if d >= 0 else 0

    if b == 0:
        return J(a)
    return J(a) * (J(b) + J(b - 2)) - (J(a + 1) + J(a - 1)) * J(b - 1)


class TestCatalog:
    def test_component_masses(self):
        for g in CATALOG.values():
            assert sum(c.mass for c in g.components) == pytest.approx(1.0, abs=1e-12)
            for ci, comp in enumerate(g.components):
                mass = g.expect(lambda x: np.ones(np.shape(x)[0]), component=ci)
                assert mass == pytest.approx(1.0, abs=1e-8)

    def test_usp4_density_integrates_to_one(self):
        val, _ = integrate.dblquad(lambda t2, t1: usp4_density(t1, t2), 0, math.pi, 0, math.pi)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_trace_ranges(self):
        for g in CATALOG.values():
            x = haar_sample(g, 2000, seed=1)
            bound = 2 if g.genus == 1 else 4
            assert np.all(np.abs(g.trace(x)) <= bound + 1e-12)


class TestTraceDensity:
    def test_values_at_zero(self):
        assert float(trace_density(get_group("SU2")).pdf(0.0)) == pytest.approx(1 / math.pi)
        assert float(trace_density(get_group("U1")).pdf(0.0)) == pytest.approx(1 / (2 * math.pi))

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_total_mass(self, name):
        law = trace_density(get_group(name))
        assert float(law.cdf(law.hi)) == pytest.approx(1.0, abs=1e-6)
        assert float(law.cdf(law.lo - 1e-9)) == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("name", ["SU2", "U1"])
    def test_pdf_integrates_to_cdf(self, name):
        law = trace_density(get_group(name))
        val, _ = integrate.quad(law.pdf, -2, 0.7, limit=200)
        assert val == pytest.approx(float(law.cdf(0.7)), abs=1e-7)

    def test_nu1_atom(self):
        law = trace_density(get_group("NU1"))
        jump = float(law.cdf(0.0)) - float(law.cdf_left(0.0))
        assert jump == pytest.approx(0.5, abs=1e-12)


class TestMoments:
    def test_examples(self):
        su2 = get_group("SU2")
        assert [trace_moment(su2, k).value for k in (2, 4, 6)] == [1, 2, 5]
        u1 = get_group("U1")
        assert [trace_moment(u1, k).value for k in (2, 4)] == [2, 6]
        assert trace_moment(get_group("NU1"), 4).value == 3

    def test_usp4_quadrature(self):
        usp4 = get_group("USp4")
        m = trace_moment(usp4, 4)
        assert m.method == "quadrature"
        for k, expected in enumerate(USP4_EVEN_MOMENTS):
            assert trace_moment(usp4, 2 * k).value == pytest.approx(expected, abs=1e-6)
            assert abs(trace_moment(usp4, 2 * k + 1).value) < 1e-9

    @pytest.mark.parametrize("name", G1_GROUPS)
    def test_closed_form_matches_quadrature(self, name):
        g = get_group(name)
        for k in range(13):
            cf = trace_moment(g, k, "closed_form").value
            q = trace_moment(g, k, "quadrature").value
            assert cf == pytest.approx(q, abs=1e-8)

    def test_product_moments_are_convolutions(self):
        g = get_group("U1xU1")
        for k in range(9):
            conv = sum(comb(k, j, exact=True) * trace_moment(get_group("U1"), j).value
                       * trace_moment(get_group("U1"), k - j).value for j in range(k + 1))
            q = trace_moment(g, k, "quadrature").value
            assert trace_moment(g, k).value == pytest.approx(conv)
            assert q == pytest.approx(conv, abs=1e-8)

    def test_su2xsu2_moments(self):
        g = get_group("SU2xSU2")
        catalan = [1, 0, 1, 0, 2, 0, 5]
        m4 = sum(comb(4, j, exact=True) * catalan[j] * catalan[4 - j] for j in range(5))
        assert trace_moment(g, 4).value == m4 == 10

    def test_unsupported(self):
        with pytest.raises(UnsupportedMoment):
            trace_moment(get_group("SU2"), MAX_MOMENT + 1)
        with pytest.raises(UnsupportedMoment):
            trace_moment(get_group("SU2"), -1)


class TestCharacters:
    def test_sym_examples(self):
        assert sym_char(0, 1.3) == 1
        assert sym_char(1, 0.4) == pytest.approx(0.4)
        assert sym_char(2, 2.0) == 3

    @given(st.integers(0, 12), angles)
    def test_sym_is_geometric_sum(self, m, theta):
        direct = sum(np.exp(1j * (m - 2 * j) * theta) for j in range(m + 1))
        assert sym_char(m, 2 * math.cos(theta)) == pytest.approx(direct.real, abs=1e-8)

    def test_gamma_examples(self):
        assert usp4_char(0, 0, (0.3, 1.1)) == 1
        assert usp4_char(1, 0, (0.3, 1.1)) == pytest.approx(2 * math.cos(0.3) + 2 * math.cos(1.1))
        assert usp4_char(1, 1, (0.0, 0.0)) == pytest.approx(5)

    def test_weyl_dimension(self):
        for a in range(9):
            for b in range(a + 1):
                expected = (a - b + 1) * (b + 1) * (a + 2) * (a + b + 3) / 6
                assert weyl_dimension(a, b) == expected
                assert usp4_char(a, b, (0.0, 0.0)) == pytest.approx(expected, abs=1e-6)

    @given(st.integers(0, 5), st.data(), angles, angles)
    def test_gamma_matches_monomial_expansion(self, a, data, t1, t2):
        b = data.draw(st.integers(0, a))
        brute = gamma_brute(a, b, t1, t2)
        assert abs(brute.imag) < 1e-8
        assert usp4_char(a, b, (t1, t2)) == pytest.approx(brute.real, abs=1e-7)

    def test_gamma_orthonormality(self):
        usp4 = get_group("USp4")
        labels = [(a, b) for a in range(4) for b in range(a + 1)]
        for (a, b), (c, d) in itertools.product(labels, repeat=2):
            ip = char_inner_product(usp4, IrrepSpec.gamma(a, b), IrrepSpec.gamma(c, d))
            assert abs(ip - (1.0 if (a, b) == (c, d) else 0.0)) < 1e-6

    def test_sym_orthonormality(self):
        su2 = get_group("SU2")
        assert char_inner_product(su2, IrrepSpec.sym(3), IrrepSpec.sym(3)) == pytest.approx(1)
        assert abs(char_inner_product(su2, IrrepSpec.sym(2), IrrepSpec.sym(4))) < 1e-10
        usp4 = get_group("USp4")
        assert abs(char_inner_product(usp4, IrrepSpec.gamma(1, 0), IrrepSpec.gamma(0, 0))) < 1e-10

    def test_parse_roundtrip(self):
        for text in ("trivial", "phi:2", "sym:3", "gamma:2,1", "sym:1+sym:2"):
            assert IrrepSpec.parse(text).label == text
        with pytest.raises(ValueError):
            IrrepSpec.parse("gamma:1")

    @pytest.mark.parametrize("text,dim", [("trivial", 1), ("phi:3", 1), ("sym:4", 5), ("gamma:2,1", 16)])
    def test_identity_value_is_dimension(self, text, dim):
        r = IrrepSpec.parse(text)
        identity = np.zeros((1, 2)) if r.param_dim == 2 else np.zeros(1)
        assert r.dim == dim
        assert np.real(r(identity))[0] == pytest.approx(dim)


class TestST3:
    def test_examples(self):
        su2, nu1 = get_group("SU2"), get_group("NU1")
        assert st3_check(su2, "abs_trace_sq", 0)[0] == pytest.approx(1)
        assert st3_check(nu1, "abs_trace_sq", 1)[0] == pytest.approx(0)
        assert st3_check(nu1, "abs_trace_sq", 0)[0] == pytest.approx(2)

    def test_audit_all_integer(self):
        rows = st3_audit()
        assert rows and all(r["integer"] for r in rows)
        assert {r["group"] for r in rows} == set(CATALOG)

    def test_detects_non_integer(self):
        value, ok = st3_check(get_group("SU2"), lambda x: np.cos(x) ** 2 + 0.3, 0)
        assert not ok


class TestHaarSample:
    def test_deterministic(self):
        g = get_group("USp4")
        assert np.array_equal(haar_sample(g, 100, 5), haar_sample(g, 100, 5))
        assert not np.array_equal(haar_sample(g, 100, 5), haar_sample(g, 100, 6))

    @pytest.mark.parametrize("name,m2,width", [("U1", 2, 3), ("USp4", 1, 5), ("SU2", 1, 3), ("NU1", 1, 3)])
    def test_second_moment(self, name, m2, width):
        n = 50000
        g = get_group(name)
        tr = g.trace(haar_sample(g, n, seed=3))
        assert abs(np.mean(tr**2) - m2) <= width / math.sqrt(n)

    def test_nu1_half_zero(self):
        g = get_group("NU1")
        tr = g.trace(haar_sample(g, 20000, seed=2))
        assert abs(np.mean(tr == 0) - 0.5) < 0.02
