"""Mixed strategies: marginals, expected payoffs, sampling, serialization."""

import io
import math
from fractions import Fraction

import pytest

from blotto_lab import (
    ExplicitMixed,
    GameSpec,
    MarginalProfile,
    PreconditionError,
    canonical_pair_equilibrium,
    enumerate_allocations,
    expected_payoff_marginal,
    expected_payoff_pure_vs_mixed,
    independent_pairs_strategy,
    parity_strategy,
    read_strategy,
    write_strategy,
)
from oracles import brute_expected_payoff, brute_marginals

FULL_GAME = GameSpec(120, 6, Fraction(0))


def unit(spec, bids):
    return ExplicitMixed(spec, {tuple(bids): Fraction(1)})


class TestMarginalProfile:
    def test_point_mass_marginals(self):
        sp = GameSpec(120, 6)
        sigma = unit(sp, (20,) * 6)
        profile = sigma.marginals()
        for k in range(6):
            vec = profile.field(k)
            assert vec[20] == 1
            assert sum(vec) == 1

    def test_rejects_non_probability_vectors(self):
        sp = GameSpec(4, 2)
        short_mass = [[Fraction(1, 4)] * 2 + [Fraction(0)] * 3] * 2
        with pytest.raises(PreconditionError):
            MarginalProfile(sp, short_mass)
        wrong_length = [[Fraction(1, 2)] * 2] * 2
        with pytest.raises(PreconditionError):
            MarginalProfile(sp, wrong_length)

    def test_expected_total_is_budget_for_feasible_strategies(self):
        sp = GameSpec(8, 4)
        for sigma in (
            canonical_pair_equilibrium(sp),
            independent_pairs_strategy(sp),
            parity_strategy(sp, "odd"),
            parity_strategy(sp, "even"),
        ):
            assert sigma.marginals().expected_total() == sp.budget


class TestCanonicalMarginals:
    def test_uniform_over_correlated_pairs_is_uniform_marginal(self):
        sigma = canonical_pair_equilibrium(FULL_GAME)
        assert sigma.marginals() == MarginalProfile.uniform(FULL_GAME)

    def test_analytic_marginals_match_atom_sum(self):
        sp = GameSpec(8, 4)
        for sigma in (
            canonical_pair_equilibrium(sp),
            independent_pairs_strategy(sp),
            parity_strategy(sp, "odd"),
            parity_strategy(sp, "even"),
        ):
            assert sigma.marginals() == brute_marginals(sigma, sp)

    def test_parity_marginal_support(self):
        sp = GameSpec(8, 4)
        even = parity_strategy(sp, "even").marginals()
        for k in range(4):
            assert all(p == 0 for x, p in enumerate(even.field(k)) if x % 2 == 1)


class TestExpectedPayoffs:
    def test_uniform_profile_value(self):
        profile = MarginalProfile.uniform(FULL_GAME)
        assert expected_payoff_marginal(profile, profile, FULL_GAME) == Fraction(120, 41)

    def test_closed_form_across_tie_values(self):
        for alpha in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)):
            for n, k in ((4, 2), (8, 4), (12, 6)):
                sp = GameSpec(n, k, alpha)
                profile = MarginalProfile.uniform(sp)
                expected = Fraction(k * (2 * n + alpha * k), 4 * n + 2 * k)
                assert expected_payoff_marginal(profile, profile, sp) == expected

    def test_parity_cross_profile_pays_half_per_battlefield(self):
        for alpha in (Fraction(0), Fraction(1), Fraction(2)):
            sp = GameSpec(8, 4, alpha)
            odd = MarginalProfile.parity(sp, "odd")
            even = MarginalProfile.parity(sp, "even")
            assert expected_payoff_marginal(odd, even, sp) == Fraction(sp.battlefields, 2)
            assert expected_payoff_marginal(even, odd, sp) == Fraction(sp.battlefields, 2)

    def test_marginal_linearity_matches_support_sum(self):
        sp = GameSpec(4, 2, Fraction(1, 3))
        pool = list(enumerate_allocations(sp))
        w = Fraction(1, len(pool))
        sigma_a = ExplicitMixed(sp, {s: w for s in pool})
        sigma_b = ExplicitMixed(
            sp, {(4, 0): Fraction(1, 2), (1, 3): Fraction(1, 4), (2, 2): Fraction(1, 4)}
        )
        via_marginals = expected_payoff_marginal(sigma_a.marginals(), sigma_b.marginals(), sp)
        assert via_marginals == brute_expected_payoff(sigma_a, sigma_b, sp)

    def test_overbid_hits_certainty(self):
        profile = MarginalProfile.uniform(FULL_GAME)
        s = (41, 79, 0, 0, 0, 0)
        value = expected_payoff_pure_vs_mixed(s, profile, FULL_GAME)
        # both positive bids exceed 2m = 40, so they win surely; zeros never win
        assert value == 2

    def test_member_of_support_is_indifferent(self):
        sigma = canonical_pair_equilibrium(FULL_GAME)
        assert expected_payoff_pure_vs_mixed((0, 40, 0, 40, 0, 40), sigma, FULL_GAME) == Fraction(120, 41)

    def test_concentrated_vs_even_point_mass(self):
        sp = GameSpec(6, 3, Fraction(0))
        sigma = unit(sp, (2, 2, 2))
        assert expected_payoff_pure_vs_mixed((6, 0, 0), sigma, sp) == 1


class TestSampling:
    def test_point_mass_is_constant(self):
        sp = GameSpec(6, 3)
        sigma = unit(sp, (2, 2, 2))
        assert sigma.sample(7, 5) == [(2, 2, 2)] * 5

    def test_same_seed_same_stream(self):
        sigma = canonical_pair_equilibrium(FULL_GAME)
        assert sigma.sample(123, 1000) == sigma.sample(123, 1000)

    def test_frequencies_within_binomial_bounds(self):
        sigma = canonical_pair_equilibrium(FULL_GAME)
        draws = sigma.sample(2024, 100_000)
        counts = {}
        for s in draws:
            counts[s] = counts.get(s, 0) + 1
        p = Fraction(1, 41)
        mean = 100_000 * p
        sigma_bound = 5 * math.sqrt(100_000 * p * (1 - p))
        assert len(counts) == 41
        for atom, _ in sigma.atoms():
            assert abs(counts[atom] - mean) < sigma_bound, atom

    def test_explicit_sampler_respects_weights(self):
        sp = GameSpec(4, 2)
        sigma = ExplicitMixed(sp, {(4, 0): Fraction(3, 4), (0, 4): Fraction(1, 4)})
        draws = sigma.sample(99, 40_000)
        heavy = sum(1 for d in draws if d == (4, 0))
        assert abs(heavy - 30_000) < 5 * math.sqrt(40_000 * 0.75 * 0.25)


class TestSerialization:
    def test_round_trip(self):
        sp = GameSpec(6, 2, Fraction(1, 2))
        sigma = canonical_pair_equilibrium(sp)
        buf = io.StringIO()
        write_strategy(sigma, buf, comment="round trip")
        buf.seek(0)
        back = read_strategy(buf)
        assert back.spec == sp
        assert dict(back.atoms()) == dict(sigma.atoms())

    def test_header_format(self):
        sp = GameSpec(4, 2, Fraction(1, 3))
        buf = io.StringIO()
        write_strategy(canonical_pair_equilibrium(sp), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "4 2 1 3"
        assert lines[1] == "1 5 0 4"

    def test_rejects_bad_totals(self):
        text = "4 2 1 1\n1 2 4 0\n"
        with pytest.raises(PreconditionError):
            read_strategy(io.StringIO(text))
