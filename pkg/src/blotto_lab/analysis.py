"""Exact best responses, equilibrium verification, and strategy classification.

The workhorse is a budget dynamic program over (battlefield, remaining units)
that maximizes a separable value function, so best responses against any
marginal profile cost O(K * N^2) instead of a scan over all C(N+K-1, K-1)
bid vectors.  Because payoffs between independent mixers depend only on
marginals, checking deviations against marginals is sufficient for
equilibrium verification.  Everything returns exact rationals; a gap of zero
means zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import (
    GameSpec,
    InvalidComparisonError,
    PreconditionError,
    RationalLike,
    WrongRegimeError,
    exact_fraction,
)
from .mixed import (
    MarginalProfile,
    MixedStrategy,
    expected_payoff_marginal,
)
from . import constructors


@dataclass(frozen=True)
class BestResponseResult:
    """Exact maximum payoff against a marginal profile and its witness.

    ``argmax`` is the lexicographically smallest maximizing bid vector;
    ``value_table[k][x]`` is the expected value of bidding ``x`` on
    battlefield ``k``.
    """

    value: Fraction
    argmax: "tuple[int, ...]"
    value_table: "tuple[tuple[Fraction, ...], ...]"


def best_response(m_opp: MarginalProfile, spec: GameSpec) -> BestResponseResult:
    """Maximize the expected payoff of a pure strategy against ``m_opp``."""
    n = spec.budget
    tables = []
    for k in range(spec.battlefields):
        opp = m_opp.field(k)
        below = Fraction(0)
        row = []
        for x in range(n + 1):
            row.append(below + spec.half_tie * opp[x])
            below += opp[x]
        tables.append(row)
    den = 1
    for row in tables:
        for v in row:
            den = math.lcm(den, v.denominator)
    scaled = [[int(v * den) for v in row] for row in tables]
    value, argmax = _budget_dp(scaled, n, maximize=True)
    return BestResponseResult(
        value=Fraction(value, den),
        argmax=argmax,
        value_table=tuple(tuple(row) for row in tables),
    )


def _budget_dp(
    tables: "list[list[int]]", budget: int, maximize: bool
) -> "tuple[int, tuple[int, ...]]":
    """Optimize sum of per-field table values over exact-budget allocations.

    Returns the optimum and its lexicographically smallest witness.  Suffix
    table ``suffix[j][r]`` holds the optimum over fields j.. with ``r`` units
    left; every budget is reachable since bids may be zero or take the rest.
    """
    k = len(tables)
    suffix = [None] * k
    suffix[k - 1] = list(tables[k - 1][: budget + 1])
    for j in range(k - 2, -1, -1):
        row, prev = tables[j], suffix[j + 1]
        cur = []
        for r in range(budget + 1):
            if maximize:
                best = max(row[x] + prev[r - x] for x in range(r + 1))
            else:
                best = min(row[x] + prev[r - x] for x in range(r + 1))
            cur.append(best)
        suffix[j] = cur
    bids = []
    r = budget
    for j in range(k - 1):
        row, prev, target = tables[j], suffix[j + 1], suffix[j][r]
        for x in range(r + 1):
            if row[x] + prev[r - x] == target:
                bids.append(x)
                r -= x
                break
    bids.append(r)
    return suffix[0][budget], tuple(bids)


@dataclass(frozen=True)
class EquilibriumReport:
    """Best-response gaps and payoffs of a strategy profile."""

    gap_a: Fraction
    gap_b: Fraction
    payoff_a: Fraction
    payoff_b: Fraction
    best_reply_a: "tuple[int, ...]"
    best_reply_b: "tuple[int, ...]"

    @property
    def is_equilibrium(self) -> bool:
        return self.gap_a == 0 and self.gap_b == 0


def verify_equilibrium(
    sigma_a: MixedStrategy, sigma_b: MixedStrategy, spec: GameSpec
) -> EquilibriumReport:
    """Exact equilibrium check via marginal best responses.

    Sound because expected payoffs between independent mixers are linear in
    each player's marginals: no joint-distribution deviation can beat the
    best pure response to the opponent's marginals.
    """
    m_a = sigma_a.marginals()
    m_b = sigma_b.marginals()
    pay_a = expected_payoff_marginal(m_a, m_b, spec)
    pay_b = expected_payoff_marginal(m_b, m_a, spec)
    br_a = best_response(m_b, spec)
    br_b = best_response(m_a, spec)
    return EquilibriumReport(
        gap_a=br_a.value - pay_a,
        gap_b=br_b.value - pay_b,
        payoff_a=pay_a,
        payoff_b=pay_b,
        best_reply_a=br_a.argmax,
        best_reply_b=br_b.argmax,
    )


class Verdict(Enum):
    GOOD = "good"
    NEVER_GOOD = "never_good"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GoodnessVerdict:
    """Classification of a pure strategy's equilibrium membership.

    ``threshold`` is the active-battlefield cutoff below which a strategy is
    never played in any equilibrium (meaningful for tie values below 1);
    ``active_fields`` counts the strategy's positive bids.
    """

    verdict: Verdict
    witness: "MixedStrategy | None"
    threshold: Fraction
    active_fields: int


def concentration_threshold(spec: GameSpec) -> Fraction:
    """Active-battlefield cutoff 2NK(1-a)/((2N+K)(2-a)) for tie value a < 1.

    Zero (vacuous) for tie values of 1 and above, where the bound is void.
    """
    a = spec.tie_value
    if a >= 1:
        return Fraction(0)
    n, k = spec.budget, spec.battlefields
    return Fraction(2 * n * k, 2 * n + k) * (1 - a) / (2 - a)


def concentration_bounds(active_fields: int, spec: GameSpec) -> "tuple[Fraction, Fraction]":
    """(ceiling for a strategy active on few fields, floor for a uniform mixer).

    The ceiling bounds the payoff of any pure strategy with the given number
    of positive bids against any opponent; the floor is what a
    uniform-marginal strategy guarantees against any pure opponent.  Strict
    ceiling < floor is exactly what makes such strategies never best replies.
    """
    a = spec.tie_value
    n, k = spec.budget, spec.battlefields
    ceiling = a / 2 * k + (2 - a) / 2 * active_fields
    floor = Fraction(n * k, 2 * n + k) + a / 2 * Fraction(k * k, 2 * n + k)
    return ceiling, floor


def classify(s: Sequence[int], spec: GameSpec) -> GoodnessVerdict:
    """Good / never-good / unknown verdict for a pure strategy.

    Good comes with a verified witness equilibrium containing ``s`` (needs an
    even battlefield count, an evenly divisible budget, and no bid above
    twice the fair share).  Never-good applies for tie values in [0, 1) when
    the strategy concentrates on fewer active battlefields than the cutoff.
    Anything else is honestly unknown rather than guessed.
    """
    s = spec.validate_allocation(s)
    active = sum(1 for b in s if b > 0)
    threshold = concentration_threshold(spec)
    if spec.divisible and spec.tie_value < 1 and active < threshold:
        return GoodnessVerdict(Verdict.NEVER_GOOD, None, threshold, active)
    if (
        spec.divisible
        and spec.battlefields % 2 == 0
        and max(s) <= 2 * spec.fair_share
    ):
        witness = constructors.good_strategy_witness(s, spec)
        report = verify_equilibrium(witness, witness, spec)
        if (
            report.is_equilibrium
            and witness.probability(s) > 0
            and witness.marginals() == MarginalProfile.uniform(spec)
        ):
            return GoodnessVerdict(Verdict.GOOD, witness, threshold, active)
    return GoodnessVerdict(Verdict.UNKNOWN, None, threshold, active)


def classify_constant_sum(s: Sequence[int], spec: GameSpec) -> Verdict:
    """Binary verdict in the constant-sum game: good iff no bid above 2N/K."""
    if spec.tie_value != 1:
        raise WrongRegimeError(
            f"constant-sum classification needs tie value 1, got {spec.tie_value}"
        )
    if spec.battlefields % 2:
        raise PreconditionError("constant-sum classification needs an even battlefield count")
    s = spec.validate_allocation(s)
    cap = 2 * spec.fair_share
    return Verdict.GOOD if max(s) <= cap else Verdict.NEVER_GOOD


@dataclass(frozen=True)
class DominanceReport:
    """Extremes of the payoff difference (candidate minus target)."""

    min_gap: Fraction
    max_gap: Fraction
    min_witness: "tuple[int, ...]"
    max_witness: "tuple[int, ...]"

    @property
    def dominates(self) -> bool:
        return self.min_gap >= 0 and self.max_gap > 0


def weakly_dominates(
    candidate: Sequence[int], target: Sequence[int], spec: GameSpec
) -> DominanceReport:
    """Does ``candidate`` weakly dominate ``target``?

    The payoff difference against an opponent ``t`` is separable across
    battlefields, so its minimum and maximum over all opponent bid vectors
    come from the same budget DP (run once minimizing, once maximizing) -
    no enumeration of the opponent space.
    """
    candidate = spec.validate_allocation(candidate)
    target = spec.validate_allocation(target)
    if candidate == target:
        raise InvalidComparisonError("cannot compare a strategy against itself")
    # Scale battlefield values by 2 * denominator(tie value) to stay integer.
    q2 = 2 * spec.tie_value.denominator
    p = spec.tie_value.numerator

    def scaled_value(x: int, b: int) -> int:
        if x > b:
            return q2
        if x == b:
            return p
        return 0

    tables = []
    for c_bid, t_bid in zip(candidate, target):
        tables.append(
            [scaled_value(c_bid, b) - scaled_value(t_bid, b) for b in range(spec.budget + 1)]
        )
    lo, lo_witness = _budget_dp(tables, spec.budget, maximize=False)
    hi, hi_witness = _budget_dp(tables, spec.budget, maximize=True)
    return DominanceReport(
        min_gap=Fraction(lo, q2),
        max_gap=Fraction(hi, q2),
        min_witness=lo_witness,
        max_witness=hi_witness,
    )


def no_dominance_regime(spec: GameSpec) -> bool:
    """True when no pure strategy can be weakly dominated: tie value < 2/K."""
    return spec.tie_value < Fraction(2, spec.battlefields)


def psne_check(s: Sequence[int], spec: GameSpec) -> bool:
    """Is (s, s) a pure-strategy Nash equilibrium?

    Exact test: the best deviation against a point mass at ``s`` must not
    beat the all-ties payoff K * tie_value / 2.
    """
    s = spec.validate_allocation(s)
    br = best_response(MarginalProfile.point_mass(spec, s), spec)
    return br.value <= spec.battlefields * spec.half_tie


_PROFILE_BUILDERS: "dict[str, Callable[[GameSpec], MixedStrategy]]" = {
    "uniform": constructors.canonical_pair_equilibrium,
    "odd": lambda spec: constructors.parity_strategy(spec, "odd"),
    "even": lambda spec: constructors.parity_strategy(spec, "even"),
}

DEFAULT_SCAN_PROFILES = (
    ("uniform", "uniform"),
    ("odd", "even"),
    ("even", "even"),
    ("odd", "odd"),
)


@dataclass(frozen=True)
class ScanRow:
    tie_value: Fraction
    profile_a: str
    profile_b: str
    report: EquilibriumReport


def alpha_robustness_scan(
    spec: GameSpec,
    tie_values: Iterable[RationalLike],
    profiles: "Sequence[tuple[str, str]]" = DEFAULT_SCAN_PROFILES,
) -> "list[ScanRow]":
    """Verify the named profiles across a grid of tie values.

    Profiles are named 'uniform' (pair-coupled uniform marginals), 'odd', and
    'even' (parity marginals); each grid point re-verifies every profile on a
    copy of ``spec`` with that tie value.
    """
    rows = []
    for value in tie_values:
        grid_spec = replace(spec, tie_value=exact_fraction(value))
        for name_a, name_b in profiles:
            sigma_a = _PROFILE_BUILDERS[name_a](grid_spec)
            sigma_b = _PROFILE_BUILDERS[name_b](grid_spec)
            rows.append(
                ScanRow(
                    tie_value=grid_spec.tie_value,
                    profile_a=name_a,
                    profile_b=name_b,
                    report=verify_equilibrium(sigma_a, sigma_b, grid_spec),
                )
            )
    return rows
