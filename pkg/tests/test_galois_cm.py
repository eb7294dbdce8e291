from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import matrix_rank_fraction
from satotate.finite_field import IntPoly, primes_up_to
from satotate.galois_cm import (
    CMTypeSpec,
    FiniteGroup,
    InvalidCMType,
    InvalidGroup,
    cm_rank,
    cm_rank_oracle,
    conjugate_type,
    cyclic,
    cyclotomic_densities,
    dihedral,
    direct_product,
    enumerate_cm_types,
    full_incidence_matrix,
    parse_expected,
    parse_group,
    pattern_densities,
    quaternion,
    read_group_table,
    small_groups,
    st_torus_dim,
    write_group_table,
)

SUBGROUP_COUNTS = {
    "C1": 1, "C2": 2, "C3": 2, "C4": 3, "C2xC2": 5, "C5": 2, "C6": 4, "D3": 6, "C7": 2,
    "C8": 4, "C4xC2": 8, "C2xC2xC2": 16, "D4": 10, "Q8": 6,
}

ALL_SPECS = [spec for G in small_groups(8) for spec in enumerate_cm_types(G)]


def phi_star_rank(spec: CMTypeSpec) -> int:
    """Rank of Phi*: [sigma] -> sum over r in R of [r sigma], straight from the definition."""
    G = spec.G
    S_tilde = set().union(*spec.S)
    R_tilde = {G.inv(g) for g in S_tilde}
    H_prime = [g for g in range(G.order) if {G.mul(g, r) for r in R_tilde} == R_tilde]
    reflex_cosets = G.right_cosets(H_prime)
    R_reps = {min(G.right_coset(H_prime, r)) for r in R_tilde}
    columns = []
    for sigma in G.right_cosets(spec.H):
        s = min(sigma)
        image = [0] * len(reflex_cosets)
        for r in R_reps:
            target = G.right_coset(H_prime, G.mul(r, s))
            image[reflex_cosets.index(target)] += 1
        columns.append(image)
    return matrix_rank_fraction(columns)


class TestFiniteGroups:
    def test_subgroup_counts(self):
        assert {G.name: len(G.subgroups()) for G in small_groups(8)} == SUBGROUP_COUNTS

    def test_orders(self):
        assert [G.order for G in small_groups(8)] == [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]

    def test_quaternion_relations(self):
        Q = quaternion()
        i, j, k, minus_one = 1, 2, 3, 4
        assert Q.mul(i, j) == k and Q.mul(j, i) == Q.mul(minus_one, k)
        assert all(Q.mul(x, x) == minus_one for x in (i, j, k))
        assert Q.central_involutions() == [minus_one]

    def test_dihedral_not_abelian(self):
        D = dihedral(4)
        assert not np.array_equal(D.table, D.table.T)
        assert D.central_involutions() == [2]  # r^2

    def test_rejects_bad_tables(self):
        with pytest.raises(InvalidGroup):
            FiniteGroup([[0, 1], [1, 1]])
        # a Latin square that is not associative
        loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
        with pytest.raises(InvalidGroup):
            FiniteGroup(loop)

    def test_table_file_roundtrip(self, tmp_path):
        G = direct_product(cyclic(4), cyclic(2))
        path = tmp_path / "g.txt"
        write_group_table(G, path)
        H = read_group_table(path)
        assert np.array_equal(G.table, H.table)
        assert parse_group(f"table:{path}").order == 8
        path.write_text("3\n0 1 2\n1 2 0\n")
        with pytest.raises(InvalidGroup):
            read_group_table(path)

    def test_parse_group(self):
        assert parse_group("cyclic:6").order == 6
        assert parse_group("dihedral:3").order == 6
        assert parse_group("product:cyclic:2*cyclic:2*cyclic:2").order == 8
        with pytest.raises(InvalidGroup):
            parse_group("simple:60")


class TestCMRank:
    def test_c2(self):
        spec = CMTypeSpec.build(cyclic(2), [0], 1, [0])
        res = cm_rank(spec)
        assert res.D == ((1,),) and res.nu == 1 and res.cm_rank == 2
        assert cm_rank_oracle(spec) == 2
        assert st_torus_dim(spec) == 1

    def test_c4(self):
        spec = CMTypeSpec.build(cyclic(4), [0], 2, [0, 1])
        res = cm_rank(spec)
        assert res.D == ((1, 1), (1, 0)) and res.nu == 2 and res.cm_rank == 3
        assert cm_rank_oracle(spec) == 3
        assert full_incidence_matrix(spec) == [[1, 1, 0, 0], [1, 0, 0, 1], [0, 0, 1, 1], [0, 1, 1, 0]]
        assert st_torus_dim(spec) == 2

    def test_conjugate_c2_type(self):
        # S = {g} misses the identity coset; the literal D would be [0]
        spec = CMTypeSpec.build(cyclic(2), [0], 1, [1])
        res = cm_rank(spec)
        assert res.conjugated and res.cm_rank == 2 == cm_rank_oracle(spec)

    def test_invalid_types(self):
        with pytest.raises(InvalidCMType):
            CMTypeSpec.build(cyclic(4), [0], 2, [0, 2])  # S meets Sc
        with pytest.raises(InvalidCMType):
            CMTypeSpec.build(cyclic(4), [0], 1, [0, 1])  # c has order 4
        with pytest.raises(InvalidCMType):
            CMTypeSpec.build(dihedral(3), [0], 3, [0, 1, 2])  # reflection is not central
        with pytest.raises(InvalidCMType):
            CMTypeSpec.build(cyclic(4), [0, 1], 2, [0])  # not a subgroup

    def test_enumeration_size(self):
        assert len(ALL_SPECS) == 520

    def test_rank_identity_exhaustive(self):
        for spec in ALL_SPECS:
            res = cm_rank(spec)
            assert res.cm_rank == cm_rank_oracle(spec)
            assert 1 <= res.cm_rank <= spec.g + 1

    def test_oracle_equals_definition(self):
        for spec in ALL_SPECS:
            assert cm_rank_oracle(spec) == phi_star_rank(spec)

    def test_block_structure(self):
        for spec in ALL_SPECS:
            if any(spec.G.identity in s for s in spec.S):
                D = np.array(cm_rank(spec).D)
                k, g = D.shape
                full = np.array(full_incidence_matrix(spec))
                U = np.ones_like(D)
                expected = np.block([[D, U - D], [U - D, D]])
                assert np.array_equal(full, expected)

    def test_primitive_cyclic_types(self):
        # in C_{2g} with trivial H the type {0, 1, ..., g-1} is primitive and has rank g + 1
        for n in (2, 4, 6, 8):
            g = n // 2
            spec = CMTypeSpec.build(cyclic(n), [0], g, list(range(g)))
            assert cm_rank(spec).nu == g == cm_rank_oracle(spec) - 1

    @given(st.sampled_from(ALL_SPECS), st.integers(0, 7))
    def test_rank_invariant_under_translation(self, spec, shift):
        G = spec.G
        x = shift % G.order
        moved = CMTypeSpec.build(G, spec.H, spec.c, [G.mul(min(s), x) for s in spec.S])
        assert cm_rank(moved).cm_rank == cm_rank(spec).cm_rank
        assert cm_rank(conjugate_type(spec)).cm_rank == cm_rank(spec).cm_rank

    @given(st.sampled_from(ALL_SPECS))
    def test_reflex_stabilizer_is_subgroup(self, spec):
        res = cm_rank(spec)
        assert spec.G.is_subgroup(res.reflex_stabilizer)
        assert sum(len(r) for r in res.R) == len(set().union(*spec.S))


class TestDensities:
    def test_cyclotomic_five(self):
        rep = cyclotomic_densities(5, 10**6)
        assert rep.labels == ["1", "2", "3", "4"]
        assert all(abs(e - 0.25) <= 0.005 for e in rep.empirical)
        assert rep.max_deviation() < 0.01

    def test_cyclotomic_four(self):
        rep = cyclotomic_densities(4, 100)
        assert rep.labels == ["1", "3"]
        assert rep.total == len(primes_up_to(100)) - 1

    def test_cyclotomic_three_tiny(self):
        rep = cyclotomic_densities(3, 10)
        assert rep.counts == [1, 2]
        assert rep.empirical == [pytest.approx(1 / 3), pytest.approx(2 / 3)]

    @given(st.integers(3, 40), st.integers(40, 3000))
    def test_cyclotomic_sums(self, n, bound):
        rep = cyclotomic_densities(n, bound)
        assert sum(rep.empirical) == pytest.approx(1, abs=1e-9)
        assert rep.total == sum(1 for p in primes_up_to(bound) if n % p)

    def test_gaussian_pattern(self):
        rep = pattern_densities(IntPoly((1, 0, 1)), 10**5)
        dens = dict(zip(rep.labels, rep.empirical))
        assert abs(dens["1,1"] - 0.5) <= 0.01 and abs(dens["2"] - 0.5) <= 0.01
        assert rep.total == len(primes_up_to(10**5)) - 1

    def test_cube_root_of_two(self):
        expected = parse_expected("1,1,1:1/6;1,2:1/2;3:1/3")
        assert expected == {(1, 1, 1): Fraction(1, 6), (1, 2): Fraction(1, 2), (3,): Fraction(1, 3)}
        rep = pattern_densities(IntPoly((-2, 0, 0, 1)), 10**5, expected)
        assert rep.max_deviation() <= 0.01
        assert sum(rep.empirical) == pytest.approx(1, abs=1e-9)

    def test_patterns_sum_to_degree(self):
        rep = pattern_densities(IntPoly((1, 0, 1)), 1000)
        assert all(sum(map(int, lab.split(","))) == 2 for lab in rep.labels)
