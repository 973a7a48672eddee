"""Mixed strategies, marginal profiles, and expected payoffs.

Because the two players randomize independently, expected payoffs depend only
on the per-battlefield marginal distributions.  Everything here keeps those
marginals as exact rationals; the structured families (pair-coupled uniform,
independent pairs, the swapped-pair variant, parity pairs) answer marginal and
probability queries analytically so their supports never need to be
materialized.

Sampling is seeded and reproducible: every ``sample`` call builds a fresh
``numpy.random.Generator`` over PCG64 from the given 64-bit seed, so identical
seeds give identical draws across processes and releases.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import IO, Iterator, Mapping, Sequence

import numpy as np

from .core import (
    GameSpec,
    InvalidAllocationError,
    PreconditionError,
    exact_fraction,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class MarginalProfile:
    """One exact bid-level distribution per battlefield.

    ``field(k)`` is a tuple of ``budget + 1`` Fractions summing to one.
    """

    __slots__ = ("spec", "_fields")

    def __init__(self, spec: GameSpec, per_field: Sequence[Sequence[Fraction]]):
        if len(per_field) != spec.battlefields:
            raise PreconditionError(
                f"expected {spec.battlefields} marginal vectors, got {len(per_field)}"
            )
        fields = []
        for k, vec in enumerate(per_field):
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != spec.budget + 1:
                raise PreconditionError(
                    f"marginal {k} has {len(vec)} levels, expected {spec.budget + 1}"
                )
            if any(x < 0 for x in vec) or sum(vec) != 1:
                raise PreconditionError(f"marginal {k} is not a probability vector")
            fields.append(vec)
        self.spec = spec
        self._fields = tuple(fields)

    def field(self, k: int) -> "tuple[Fraction, ...]":
        return self._fields[k]

    def __iter__(self) -> Iterator["tuple[Fraction, ...]"]:
        return iter(self._fields)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MarginalProfile)
            and self.spec == other.spec
            and self._fields == other._fields
        )

    def __hash__(self) -> int:
        return hash((self.spec, self._fields))

    def expected_total(self) -> Fraction:
        """Sum over battlefields of the expected bid."""
        return sum(
            (sum(Fraction(x) * p for x, p in enumerate(vec)) for vec in self._fields),
            start=ZERO,
        )

    @classmethod
    def constant(cls, spec: GameSpec, vec: Sequence[Fraction]) -> "MarginalProfile":
        """Same distribution on every battlefield."""
        vec = tuple(vec)
        return cls(spec, [vec] * spec.battlefields)

    @classmethod
    def point_mass(cls, spec: GameSpec, bids: Sequence[int]) -> "MarginalProfile":
        bids = spec.validate_allocation(bids)
        fields = []
        for b in bids:
            vec = [ZERO] * (spec.budget + 1)
            vec[b] = ONE
            fields.append(tuple(vec))
        return cls(spec, fields)

    @classmethod
    def uniform(cls, spec: GameSpec) -> "MarginalProfile":
        """Uniform on {0, ..., 2 * fair_share} at every battlefield."""
        top = 2 * spec.fair_share
        w = Fraction(1, top + 1)
        vec = [w] * (top + 1) + [ZERO] * (spec.budget - top)
        return cls.constant(spec, vec)

    @classmethod
    def parity(cls, spec: GameSpec, parity: str) -> "MarginalProfile":
        """Uniform on the odd or even levels within {0, ..., 2 * fair_share}."""
        levels = parity_levels(spec, parity)
        w = Fraction(1, len(levels))
        vec = [ZERO] * (spec.budget + 1)
        for x in levels:
            vec[x] = w
        return cls.constant(spec, vec)


def parity_levels(spec: GameSpec, parity: str) -> "tuple[int, ...]":
    """Odd or even bid levels within {0, ..., 2 * fair_share}."""
    top = 2 * spec.fair_share
    if parity == "odd":
        return tuple(range(1, top, 2))
    if parity == "even":
        return tuple(range(0, top + 1, 2))
    raise PreconditionError(f"parity must be 'odd' or 'even', got {parity!r}")


class MixedStrategy:
    """Finitely supported distribution over pure strategies.

    Subclasses either hold an explicit table or describe a structured family;
    both expose exact ``probability``/``marginals`` and seeded ``sample``.
    """

    spec: GameSpec

    def support_size(self) -> int:
        raise NotImplementedError

    def atoms(self) -> Iterator["tuple[tuple[int, ...], Fraction]"]:
        """Yield (bid vector, probability) pairs in a deterministic order."""
        raise NotImplementedError

    def probability(self, bids: Sequence[int]) -> Fraction:
        raise NotImplementedError

    def marginals(self) -> MarginalProfile:
        raise NotImplementedError

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        raise NotImplementedError

    def _marginals_from_atoms(self) -> MarginalProfile:
        n = self.spec.budget
        acc = [[ZERO] * (n + 1) for _ in range(self.spec.battlefields)]
        for bids, prob in self.atoms():
            for k, b in enumerate(bids):
                acc[k][b] += prob
        return MarginalProfile(self.spec, acc)


class ExplicitMixed(MixedStrategy):
    """Mixed strategy given by an explicit atom -> probability table."""

    def __init__(self, spec: GameSpec, weights: Mapping[Sequence[int], Fraction]):
        table = {}
        total = ZERO
        for bids, prob in weights.items():
            vec = spec.validate_allocation(bids)
            prob = exact_fraction(prob)
            if prob <= 0:
                raise PreconditionError(f"atom {vec} has nonpositive probability {prob}")
            if vec in table:
                raise PreconditionError(f"duplicate atom {vec}")
            table[vec] = prob
            total += prob
        if total != 1:
            raise PreconditionError(f"probabilities sum to {total}, not 1")
        self.spec = spec
        self._table = dict(sorted(table.items()))

    def support_size(self) -> int:
        return len(self._table)

    def atoms(self) -> Iterator["tuple[tuple[int, ...], Fraction]"]:
        return iter(self._table.items())

    def probability(self, bids: Sequence[int]) -> Fraction:
        return self._table.get(tuple(bids), ZERO)

    def marginals(self) -> MarginalProfile:
        return self._marginals_from_atoms()

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        support = list(self._table)
        den = math.lcm(*(p.denominator for p in self._table.values()))
        weights = np.cumsum([p.numerator * (den // p.denominator) for p in self._table.values()])
        draws = _rng(seed).integers(0, den, size=count)
        idx = np.searchsorted(weights, draws, side="right")
        return [support[i] for i in idx]


class _PairFamily(MixedStrategy):
    """Shared plumbing for families built from battlefield pairs (1,2), (3,4), ..."""

    def __init__(self, spec: GameSpec):
        if spec.battlefields % 2:
            raise PreconditionError(
                f"{spec.battlefields} battlefields cannot be paired; "
                "for an odd count use uniform_marginal_solver"
            )
        self.spec = spec
        self.pairs = spec.battlefields // 2

    @staticmethod
    def _interleave(firsts: Sequence[int], pair_sum: int) -> "tuple[int, ...]":
        out = []
        for j in firsts:
            out.append(j)
            out.append(pair_sum - j)
        return tuple(out)


class PairCoupledUniform(_PairFamily):
    """One uniform split, perfectly correlated across all pairs.

    Atoms are (j, c-j, j, c-j, ...) for j in {0, ..., c} where c is the
    per-pair budget.  Every marginal is uniform on {0, ..., c}.
    """

    def __init__(self, spec: GameSpec, pair_budget: "int | None" = None):
        super().__init__(spec)
        c = spec.budget // self.pairs if spec.budget % self.pairs == 0 else None
        if c is None:
            raise PreconditionError(
                f"budget {spec.budget} is not divisible by the {self.pairs} battlefield pairs"
            )
        if pair_budget is not None and pair_budget != c:
            raise PreconditionError(
                f"pair budget must be {c} for this game, got {pair_budget}"
            )
        self.pair_budget = c

    def support_size(self) -> int:
        return self.pair_budget + 1

    def atom(self, index: int) -> "tuple[int, ...]":
        if not 0 <= index <= self.pair_budget:
            raise IndexError(index)
        return self._interleave([index] * self.pairs, self.pair_budget)

    def atoms(self) -> Iterator["tuple[tuple[int, ...], Fraction]"]:
        w = Fraction(1, self.support_size())
        for j in range(self.pair_budget + 1):
            yield self.atom(j), w

    def probability(self, bids: Sequence[int]) -> Fraction:
        bids = tuple(bids)
        j = bids[0]
        if 0 <= j <= self.pair_budget and bids == self.atom(j):
            return Fraction(1, self.support_size())
        return ZERO

    def marginals(self) -> MarginalProfile:
        c = self.pair_budget
        w = Fraction(1, c + 1)
        vec = [w] * (c + 1) + [ZERO] * (self.spec.budget - c)
        return MarginalProfile.constant(self.spec, vec)

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        js = _rng(seed).integers(0, self.pair_budget + 1, size=count)
        return [self.atom(int(j)) for j in js]


class IndependentPairsUniform(_PairFamily):
    """Independent uniform splits, one per battlefield pair.

    The support has (2m+1)^(K/2) equiprobable atoms, indexed by the
    most-significant-first digits (j_1, ..., j_L) in base 2m+1; atoms are
    addressable by index and are never stored as a table.
    """

    def __init__(self, spec: GameSpec):
        super().__init__(spec)
        self.pair_sum = 2 * spec.fair_share
        self.base = self.pair_sum + 1

    def support_size(self) -> int:
        return self.base**self.pairs

    def _digits(self, index: int) -> "tuple[int, ...]":
        digits = []
        for _ in range(self.pairs):
            index, d = divmod(index, self.base)
            digits.append(d)
        return tuple(reversed(digits))

    def _atom_for_digits(self, digits: Sequence[int]) -> "tuple[int, ...]":
        return self._interleave(digits, self.pair_sum)

    def _digits_of(self, bids: Sequence[int]) -> "tuple[int, ...] | None":
        """Per-pair first components, or None when bids lie outside the family."""
        bids = tuple(bids)
        if len(bids) != self.spec.battlefields:
            return None
        for i in range(self.pairs):
            a, b = bids[2 * i], bids[2 * i + 1]
            if a < 0 or a > self.pair_sum or a + b != self.pair_sum:
                return None
        return bids[0::2]

    def atom(self, index: int) -> "tuple[int, ...]":
        if not 0 <= index < self.support_size():
            raise IndexError(index)
        return self._atom_for_digits(self._digits(index))

    def atoms(self) -> Iterator["tuple[tuple[int, ...], Fraction]"]:
        w = Fraction(1, self.support_size())
        for i in range(self.support_size()):
            yield self.atom(i), w

    def probability(self, bids: Sequence[int]) -> Fraction:
        if self._digits_of(bids) is None:
            return ZERO
        return Fraction(1, self.support_size())

    def marginals(self) -> MarginalProfile:
        return MarginalProfile.uniform(self.spec)

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        mat = _rng(seed).integers(0, self.base, size=(count, self.pairs))
        return [self._atom_for_digits([int(d) for d in row]) for row in mat]


class SwappedPairsWitness(IndependentPairsUniform):
    """Independent pairs with two atoms swapped so a target strategy is played.

    Replacing the atom whose per-pair splits follow the target's odd-indexed
    bids, and the one following its (mirrored) even-indexed bids, by the
    target itself and its mirror leaves every marginal untouched, so the
    result still has uniform marginals while giving the target positive
    probability.
    """

    def __init__(self, spec: GameSpec, target: Sequence[int]):
        super().__init__(spec)
        target = spec.validate_allocation(target)
        top = self.pair_sum
        if any(b > top for b in target):
            raise PreconditionError(
                f"{target} bids above {top} on some battlefield; not coverable"
            )
        if self._digits_of(target) is not None:
            raise PreconditionError(
                f"{target} already lies in the independent-pairs support; the swap "
                "is the identity (use independent_pairs_strategy directly)"
            )
        self.target = target
        self.removed_a = self._atom_for_digits(target[0::2])
        self.removed_b = self._atom_for_digits([top - b for b in target[1::2]])
        mirror = []
        for i in range(self.pairs):
            mirror.append(top - target[2 * i + 1])
            mirror.append(top - target[2 * i])
        self.added_b = tuple(mirror)

    def _swap(self, bids: "tuple[int, ...]") -> "tuple[int, ...]":
        if bids == self.removed_a:
            return self.target
        if bids == self.removed_b:
            return self.added_b
        return bids

    def atom(self, index: int) -> "tuple[int, ...]":
        return self._swap(super().atom(index))

    def probability(self, bids: Sequence[int]) -> Fraction:
        bids = tuple(bids)
        w = Fraction(1, self.support_size())
        if bids == self.target or bids == self.added_b:
            return w
        if bids == self.removed_a or bids == self.removed_b:
            return ZERO
        return super().probability(bids)

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        mat = _rng(seed).integers(0, self.base, size=(count, self.pairs))
        return [self._swap(self._atom_for_digits([int(d) for d in row])) for row in mat]


class ParityPairUniform(_PairFamily):
    """Pair-coupled uniform restricted to odd or even splits.

    Marginals are uniform on the odd (or even) levels within
    {0, ..., 2 * fair_share}; the two parities support the payoff-inequivalent
    equilibria of the constant-sum regime.
    """

    def __init__(self, spec: GameSpec, parity: str):
        super().__init__(spec)
        self.pair_sum = 2 * spec.fair_share
        self.parity = parity
        self.levels = parity_levels(spec, parity)
        if not self.levels:
            raise PreconditionError(f"no {parity} levels available for {spec}")

    def support_size(self) -> int:
        return len(self.levels)

    def atom(self, index: int) -> "tuple[int, ...]":
        j = self.levels[index]
        return self._interleave([j] * self.pairs, self.pair_sum)

    def atoms(self) -> Iterator["tuple[tuple[int, ...], Fraction]"]:
        w = Fraction(1, self.support_size())
        for i in range(self.support_size()):
            yield self.atom(i), w

    def probability(self, bids: Sequence[int]) -> Fraction:
        bids = tuple(bids)
        j = bids[0]
        if j in self.levels and bids == self._interleave([j] * self.pairs, self.pair_sum):
            return Fraction(1, self.support_size())
        return ZERO

    def marginals(self) -> MarginalProfile:
        return MarginalProfile.parity(self.spec, self.parity)

    def sample(self, seed: int, count: int) -> "list[tuple[int, ...]]":
        idx = _rng(seed).integers(0, len(self.levels), size=count)
        return [self.atom(int(i)) for i in idx]


def marginals(sigma: MixedStrategy) -> MarginalProfile:
    """Marginal bid distribution of ``sigma`` at every battlefield."""
    return sigma.marginals()


def sample(sigma: MixedStrategy, seed: int, count: int) -> "list[tuple[int, ...]]":
    """Draw ``count`` pure strategies from ``sigma``, deterministic in ``seed``."""
    return sigma.sample(seed, count)


def expected_payoff_marginal(
    m_self: MarginalProfile, m_opp: MarginalProfile, spec: GameSpec
) -> Fraction:
    """Expected payoff between independent players from marginals alone."""
    total = ZERO
    for k in range(spec.battlefields):
        own = m_self.field(k)
        opp = m_opp.field(k)
        below = ZERO
        for x in range(spec.budget + 1):
            if own[x]:
                total += own[x] * (below + spec.half_tie * opp[x])
            below += opp[x]
    return total


def expected_payoff_pure_vs_mixed(
    s: Sequence[int], sigma: "MixedStrategy | MarginalProfile", spec: GameSpec
) -> Fraction:
    """Expected payoff of pure strategy ``s`` against an independent mixer."""
    profile = sigma if isinstance(sigma, MarginalProfile) else sigma.marginals()
    s = spec.validate_allocation(s)
    total = ZERO
    for k, bid in enumerate(s):
        opp = profile.field(k)
        total += sum(opp[:bid], start=ZERO) + spec.half_tie * opp[bid]
    return total


# ---------------------------------------------------------------------------
# Text serialization: header "N K alpha_num alpha_den", then one line per atom
# "p_num p_den b_1 ... b_K".  Lines starting with '#' are comments.
# ---------------------------------------------------------------------------


def write_strategy(sigma: MixedStrategy, stream: IO[str], comment: "str | None" = None) -> None:
    spec = sigma.spec
    if comment:
        for line in comment.splitlines():
            stream.write(f"# {line}\n")
    alpha = spec.tie_value
    stream.write(f"{spec.budget} {spec.battlefields} {alpha.numerator} {alpha.denominator}\n")
    for bids, prob in sigma.atoms():
        cells = [str(prob.numerator), str(prob.denominator), *map(str, bids)]
        stream.write(" ".join(cells) + "\n")


def read_strategy(stream: IO[str], allow_any_tie_value: bool = False) -> ExplicitMixed:
    lines = [ln.strip() for ln in stream if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidAllocationError("empty strategy file")
    head = lines[0].split()
    if len(head) != 4:
        raise InvalidAllocationError(f"bad header: {lines[0]!r}")
    n, k, num, den = map(int, head)
    spec = GameSpec(n, k, Fraction(num, den), allow_any_tie_value=allow_any_tie_value)
    weights = {}
    for ln in lines[1:]:
        cells = ln.split()
        if len(cells) != 2 + k:
            raise InvalidAllocationError(f"bad atom line: {ln!r}")
        p_num, p_den, *bids = map(int, cells)
        weights[tuple(bids)] = Fraction(p_num, p_den)
    return ExplicitMixed(spec, weights)
