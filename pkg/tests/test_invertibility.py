"""Rule-by-rule tests for the invertibility decision ladder."""

import numpy as np
import pytest

from dsaddle import (
    BlockSystem,
    GeneratorSpec,
    Verdict,
    assemble,
    corollary_rules,
    diagnose,
    direct_sum_iff,
    e_iff_rule,
    gen_instance,
    necessary_conditions,
    oracle_invertible,
    permute_similar,
    psd_ladder,
    rank_b_iff,
    rank_c_iff,
    rescale_middle,
    schur_sufficient,
)

from _families import (
    direct_sum_singular,
    fixture_three_block,
    max_deficient,
    psd_disjoint_ranges,
)


def scalar_system(a, b, c, d, e):
    return BlockSystem(np.array([[a]]), np.array([[b]]), np.array([[c]]),
                       np.array([[d]]), np.array([[e]]))


def witness_is_sound(sys, diag, rtol=1e-8):
    K = assemble(sys).matrix
    u = diag.witness
    assert u is not None and np.linalg.norm(u) == pytest.approx(1.0)
    return np.linalg.norm(K @ u) <= rtol * np.linalg.norm(K, 2)


class TestNecessaryConditions:
    def test_all_zero_blocks_fail_n1(self):
        report = necessary_conditions(scalar_system(0, 0, 0, 0, 0))
        assert not report.holds("N1")
        np.testing.assert_allclose(np.abs(report.witness("N1")), [1.0])

    def test_pd_a_satisfies_n1(self):
        report = necessary_conditions(scalar_system(1.0, 0.0, 1.0, 1.0, 1.0))
        assert report.holds("N1")

    def test_full_rank_bt_satisfies_n2(self):
        report = necessary_conditions(scalar_system(2.0, 1.0, 1.0, 0.0, 3.0))
        assert report.holds("N2")

    def test_diagnose_short_circuits_with_embedded_witness(self):
        sys = BlockSystem(np.zeros((2, 2)), np.array([[0.0, 0.0]]),
                          np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]))
        diag = diagnose(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert diag.rule == "necessary:N1"
        assert witness_is_sound(sys, diag)


class TestSchurSufficient:
    def test_identity_blocks(self):
        # S1 = I and S2 = I, both invertible
        diag = schur_sufficient(scalar_system(1.0, 0.0, 0.0, 1.0, 1.0))
        assert diag.verdict is Verdict.INVERTIBLE
        # an indefinite D is no obstacle as long as the chain stays regular
        diag = schur_sufficient(scalar_system(1.0, 0.0, 0.0, -1.0, 1.0))
        assert diag.verdict is Verdict.INVERTIBLE

    def test_singular_a_is_undetermined(self):
        diag = schur_sufficient(scalar_system(0.0, 1.0, 1.0, 0.0, 1.0))
        assert diag.verdict is Verdict.UNDETERMINED

    def test_scalar_chain(self):
        sys = scalar_system(2.0, 1.0, 1.0, 0.0, 3.0)
        diag = schur_sufficient(sys)
        # S1 = 0 + 1/2, S2 = 3 + 1/(1/2) = 5; determinant oracle agrees
        assert diag.verdict is Verdict.INVERTIBLE
        assert np.linalg.det(assemble(sys).matrix) != pytest.approx(0.0)

    def test_sound_on_random_pd_leading_block(self):
        for seed in range(40):
            spec = GeneratorSpec(n=4, m=3, p=2, null_a=0, null_d=1, null_e=1,
                                 rank_b=2, rank_c=2, seed=seed)
            sys, _ = gen_instance(spec)
            diag = schur_sufficient(sys)
            if diag.verdict is Verdict.INVERTIBLE:
                assert oracle_invertible(sys)


class TestPsdLadder:
    def test_case1_pd_leading_block(self):
        sys = BlockSystem(np.eye(2), np.array([[1.0, 0.0]]), np.array([[1.0]]),
                          np.array([[0.0]]), np.array([[1.0]]))
        diag = psd_ladder(sys)
        assert diag.verdict is Verdict.INVERTIBLE and diag.rule == "psd_ladder:case1"

    def test_case2_running_example(self):
        sys = fixture_three_block()
        diag = psd_ladder(sys)
        assert diag.verdict is Verdict.INVERTIBLE and diag.rule == "psd_ladder:case2"
        assert oracle_invertible(sys)

    def test_case3_disjoint_ranges(self):
        sys, cert = psd_disjoint_ranges(seed=1)
        assert cert.range_disjoint
        diag = psd_ladder(sys)
        assert diag.verdict is Verdict.INVERTIBLE
        assert diag.rule.startswith("psd_ladder")
        assert oracle_invertible(sys)

    def test_indefinite_d_is_undetermined(self):
        sys = scalar_system(1.0, 1.0, 1.0, -1.0, 1.0)
        assert psd_ladder(sys).verdict is Verdict.UNDETERMINED


class TestCorollaries:
    def test_rank_b_deficient_is_singular(self):
        sys = scalar_system(0.0, 0.0, 1.0, 1.0, 1.0)
        diag = corollary_rules(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert diag.rule == "corollary_b_full_rank"
        assert witness_is_sound(sys, diag)

    def test_rank_b_full_is_invertible(self):
        sys = scalar_system(0.0, 1.0, 0.0, 1.0, 1.0)
        diag = corollary_rules(sys)
        assert diag.verdict is Verdict.INVERTIBLE
        assert np.abs(np.linalg.det(assemble(sys).matrix)) > 1e-12

    def test_rank_c_direction(self):
        invertible = scalar_system(1.0, 1.0, 1.0, 1.0, 0.0)
        assert corollary_rules(invertible).verdict is Verdict.INVERTIBLE
        singular = scalar_system(1.0, 1.0, 0.0, 1.0, 0.0)
        diag = corollary_rules(singular)
        assert diag.verdict is Verdict.SINGULAR and witness_is_sound(singular, diag)

    def test_middle_kernel_corollary(self):
        invertible = scalar_system(1.0, 1.0, 0.0, 0.0, 1.0)
        diag = corollary_rules(invertible)
        assert diag.verdict is Verdict.INVERTIBLE
        assert diag.rule == "corollary_middle_kernels"
        # m = 2 with B^T and C both annihilating e2
        singular = BlockSystem(np.eye(1), np.array([[1.0], [0.0]]),
                               np.array([[1.0, 0.0]]), np.zeros((2, 2)), np.eye(1))
        diag = corollary_rules(singular)
        assert diag.verdict is Verdict.SINGULAR and witness_is_sound(singular, diag)

    def test_no_corollary_applies(self):
        assert corollary_rules(fixture_three_block()).verdict is Verdict.UNDETERMINED

    def test_pd_blocks_with_zero_d_generically_invertible(self):
        # independent kernel placements make ker(B^T) and ker(C) meet only
        # in {0} for generic draws, so the middle-kernel corollary fires
        for seed in range(10):
            spec = GeneratorSpec(n=4, m=3, p=3, null_d=3, rank_b=2, rank_c=2,
                                 seed=seed)
            sys, _ = gen_instance(spec)
            diag = corollary_rules(sys)
            assert diag.verdict is Verdict.INVERTIBLE
            assert diag.rule == "corollary_middle_kernels"
            assert oracle_invertible(sys)


class TestDirectSumIff:
    def test_invertible_when_ranges_disjoint(self):
        sys, _ = psd_disjoint_ranges(seed=2)
        assert direct_sum_iff(sys).verdict is Verdict.INVERTIBLE

    def test_subsumes_ladder_case3(self):
        case3_seen = 0
        for seed in range(8):
            sys, _ = psd_disjoint_ranges(seed=seed)
            ladder = psd_ladder(sys)
            if ladder.rule == "psd_ladder:case3":
                case3_seen += 1
                assert direct_sum_iff(sys).verdict is Verdict.INVERTIBLE
        assert case3_seen > 0

    def test_spec_singular_example(self):
        # aligned ranges with both direct sums holding
        sys = BlockSystem(np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]),
                          np.array([[1.0], [0.0]]), np.array([[0.0]]),
                          np.diag([0.0, 1.0]))
        diag = direct_sum_iff(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert witness_is_sound(sys, diag)
        expected = np.zeros(5)
        expected[0], expected[3] = 1.0, -1.0
        got = diag.witness * np.sign(diag.witness[0])
        np.testing.assert_allclose(got, expected / np.sqrt(2.0), atol=1e-12)

    def test_generated_singular_family(self):
        for seed in range(10):
            sys, _ = direct_sum_singular(seed)
            diag = direct_sum_iff(sys)
            assert diag.verdict is Verdict.SINGULAR
            assert witness_is_sound(sys, diag)
            assert not oracle_invertible(sys)

    def test_undetermined_when_direct_sum_fails(self):
        # ranges overlap but ker(A) + ker(B) does not fill R^n
        sys = BlockSystem(np.diag([1.0, 1.0, 0.0]), np.array([[1.0, 0.0, 0.0]]),
                          np.array([[1.0]]), np.array([[0.0]]), np.array([[0.0]]))
        assert direct_sum_iff(sys).verdict is Verdict.UNDETERMINED


class TestRankBIff:
    def test_invertible_needs_decoupled_c(self):
        # rank(B) = m makes ran(B) everything, so R forces C = 0
        sys, _ = max_deficient(seed=3, rank_c=0)
        diag = rank_b_iff(sys)
        assert diag.verdict is Verdict.INVERTIBLE
        assert oracle_invertible(sys)

    def test_zero_e_overlap_is_singular(self):
        n, m, p = 4, 2, 2
        spec = GeneratorSpec(n=n, m=m, p=p, null_a=m, rank_b=m, rank_c=p,
                             null_e=p, require_ds2=True, seed=17)
        sys, cert = gen_instance(spec)
        assert not cert.range_disjoint and not sys.E.any()
        diag = rank_b_iff(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert witness_is_sound(sys, diag)
        assert not oracle_invertible(sys)

    def test_rank_deficient_b_undetermined(self):
        spec = GeneratorSpec(n=4, m=2, p=2, null_a=1, rank_b=1, rank_c=2, seed=5)
        sys, _ = gen_instance(spec)
        assert rank_b_iff(sys).verdict is Verdict.UNDETERMINED


class TestRankCIff:
    def test_mirrors_rank_b_on_reversed_system(self):
        for seed in (0, 4, 9):
            sys, _ = max_deficient(seed=seed, rank_c=0)
            mirrored = permute_similar(sys)
            direct = rank_b_iff(sys).verdict
            assert rank_c_iff(mirrored).verdict == direct

    def test_zero_a_overlap_is_singular(self):
        spec = GeneratorSpec(n=2, m=2, p=5, null_a=2, rank_b=2, rank_c=2,
                             null_e=2, require_ds1=True, require_ds2=True,
                             seed=13)
        sys, _ = gen_instance(spec)
        assert not sys.A.any()
        diag = rank_c_iff(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert witness_is_sound(sys, diag)
        assert not oracle_invertible(sys)

    def test_small_p_undetermined(self):
        sys = BlockSystem(np.zeros((1, 1)), np.array([[1.0], [0.0]]),
                          np.ones((1, 2)), np.eye(2), np.ones((1, 1)))
        assert rank_c_iff(sys).verdict is Verdict.UNDETERMINED


class TestEIffRule:
    def test_running_example_invertible(self):
        diag = e_iff_rule(fixture_three_block())
        assert diag.verdict is Verdict.INVERTIBLE and diag.rule == "e_iff"

    def test_zero_e_singular_with_assembled_kernel_witness(self):
        sys = BlockSystem(np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]),
                          np.array([[1.0]]), np.array([[0.0]]), np.array([[0.0]]))
        diag = e_iff_rule(sys)
        assert diag.verdict is Verdict.SINGULAR
        assert witness_is_sound(sys, diag)

    def test_large_d_undetermined_until_rescaled(self):
        sys = BlockSystem(np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]),
                          np.array([[1.0]]), np.array([[5.0]]), np.array([[2.0]]))
        assert e_iff_rule(sys).verdict is Verdict.UNDETERMINED
        shrunk = rescale_middle(sys, 0.5)
        diag = e_iff_rule(shrunk)
        assert diag.verdict is Verdict.INVERTIBLE
        assert oracle_invertible(sys) == oracle_invertible(shrunk) is True

    def test_singular_e_family(self):
        for seed in range(8):
            sys, cert = max_deficient(seed=seed, null_e=1)
            assert cert.n3  # kernel of E placed inside ran(C)
            diag = e_iff_rule(sys)
            assert diag.verdict is Verdict.SINGULAR
            assert witness_is_sound(sys, diag)


class TestOracle:
    def test_examples(self):
        assert oracle_invertible(scalar_system(1.0, 0.0, 0.0, -1.0, 1.0))
        assert not oracle_invertible(scalar_system(0, 0, 0, 0, 0))
        assert oracle_invertible(fixture_three_block())


class TestDiagnose:
    def test_ladder_prefers_schur_for_pd_a(self):
        diag = diagnose(scalar_system(2.0, 1.0, 1.0, 0.0, 3.0))
        assert diag.verdict is Verdict.INVERTIBLE
        assert diag.rule == "schur_sufficient"

    def test_attaches_oracle_on_request(self):
        diag = diagnose(fixture_three_block(), with_oracle=True)
        assert diag.oracle_check is True

    def test_undetermined_system(self):
        # indefinite singular A and indefinite singular E defeat every rule
        sys = BlockSystem(np.diag([0.0, -1.0]), np.array([[1.0, 0.0]]),
                          np.array([[1.0], [0.0]]), np.array([[1.0]]),
                          np.diag([0.0, -1.0]))
        diag = diagnose(sys, with_oracle=True)
        assert diag.verdict is Verdict.UNDETERMINED
        assert diag.oracle_check is False  # undetermined is allowed either way

    def test_json_payload_shape(self):
        payload = diagnose(fixture_three_block()).to_dict()
        assert payload["verdict"] == "invertible"
        ids = [entry["id"] for entry in payload["conditions"]]
        assert ids == ["N1", "N2", "N3", "R", "DS1", "DS2"]
        assert payload["definiteness"]["A"] == "positive_semidefinite"
        assert payload["ranks"] == {"B": 1, "C": 1}

    def test_soundness_over_mixed_families(self):
        families = (
            lambda seed: max_deficient(seed % 6, null_e=seed % 2),
            lambda seed: psd_disjoint_ranges(seed % 6),
            lambda seed: direct_sum_singular(seed % 6),
        )
        for seed in range(18):
            sys, _ = families[seed % 3](seed)
            diag = diagnose(sys)
            if diag.verdict is Verdict.INVERTIBLE:
                assert oracle_invertible(sys)
            elif diag.verdict is Verdict.SINGULAR:
                assert witness_is_sound(sys, diag)

    def test_permutation_coherence(self):
        for seed in range(12):
            sys, _ = max_deficient(seed % 6, null_e=seed % 2)
            one = diagnose(sys).verdict
            other = diagnose(permute_similar(sys)).verdict
            definitive = {Verdict.INVERTIBLE, Verdict.SINGULAR}
            if one in definitive and other in definitive:
                assert one == other
