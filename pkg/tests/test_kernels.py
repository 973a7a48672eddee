"""The three DP backends must agree bit-for-bit."""

import numpy as np
import pytest

from blotto_lab import GameSpec, MarginalProfile, best_response
from blotto_lab.kernels import available_backends, get_kernels

BACKENDS = available_backends()


def random_values(rng, n, lo=-50, hi=500):
    return rng.integers(lo, hi, size=n + 1).astype(np.int64)


@pytest.mark.parametrize("backend", BACKENDS)
def test_lex_against_exhaustive_search(backend):
    kern = get_kernels(backend)
    rng = np.random.default_rng(1)
    for n, k in ((6, 3), (9, 2), (5, 4), (12, 4)):
        for _ in range(12):
            values = random_values(rng, n)
            total, bids = kern.lex(values, n, k)
            assert sum(bids) == n and len(bids) == k
            best = None
            best_bids = None
            from itertools import combinations_with_replacement

            def allocations():
                for cuts in combinations_with_replacement(range(n + 1), k - 1):
                    bounds = (0,) + cuts + (n,)
                    yield tuple(bounds[i + 1] - bounds[i] for i in range(k))

            for s in allocations():
                v = sum(int(values[x]) for x in s)
                if best is None or v > best or (v == best and s < best_bids):
                    best, best_bids = v, s
            assert total == best
            assert bids == best_bids


def test_all_backends_identical_lex():
    rng = np.random.default_rng(7)
    kerns = [get_kernels(b) for b in BACKENDS]
    for n, k in ((10, 4), (20, 6), (40, 3)):
        for _ in range(10):
            values = random_values(rng, n)
            results = [kern.lex(values, n, k) for kern in kerns]
            assert len({(t, b) for t, b in results}) == 1, results


def test_all_backends_identical_sampled():
    rng = np.random.default_rng(11)
    kerns = [get_kernels(b) for b in BACKENDS]
    for n, k in ((10, 4), (14, 3)):
        for _ in range(10):
            values = random_values(rng, n, lo=0, hi=5)  # small range forces ties
            uniforms = rng.random(k - 1)
            results = [kern.sampled(values, n, k, uniforms) for kern in kerns]
            assert len({(t, b) for t, b in results}) == 1, results


def test_sampled_value_matches_lex_value():
    rng = np.random.default_rng(3)
    kern = get_kernels("python")
    for _ in range(20):
        values = random_values(rng, 12, lo=0, hi=4)
        total_lex, _ = kern.lex(values, 12, 4)
        total_sampled, bids = kern.sampled(values, 12, 4, rng.random(3))
        assert total_sampled == total_lex
        assert sum(int(values[x]) for x in bids) == total_lex


def test_sampled_spreads_over_maximizers():
    # all-zero values: every allocation is optimal; the sampler should reach
    # several distinct ones while lex always returns (0, 0, ..., n)
    kern = get_kernels("python")
    n, k = 6, 3
    values = [0] * (n + 1)
    rng = np.random.default_rng(5)
    seen = {kern.sampled(values, n, k, rng.random(k - 1))[1] for _ in range(200)}
    assert len(seen) > 5
    assert kern.lex(values, n, k)[1] == (0, 0, 6)


def test_python_backend_handles_big_integers():
    kern = get_kernels("python")
    huge = [x * x * 10**30 for x in range(11)]  # convex: all-in on one field wins
    total, bids = kern.lex(huge, 10, 2)
    assert total == 100 * 10**30
    assert bids == (0, 10)


def test_numba_backend_is_default_when_available(monkeypatch):
    monkeypatch.delenv("BLOTTO_KERNEL", raising=False)
    from blotto_lab.kernels import HAVE_NUMBA, default_backend

    if HAVE_NUMBA:
        assert default_backend() == "numba"
    else:
        assert default_backend() == "numpy"


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("BLOTTO_KERNEL", "numpy")
    from blotto_lab.kernels import default_backend

    assert default_backend() == "numpy"
    monkeypatch.setenv("BLOTTO_KERNEL", "bogus")
    with pytest.raises(ValueError):
        default_backend()


def test_kernel_agrees_with_exact_best_response():
    # shared-table DP must match the exact Fraction DP used by analysis
    import math
    from fractions import Fraction

    sp = GameSpec(12, 4, Fraction(1, 3))
    profile = MarginalProfile.uniform(sp)
    exact = best_response(profile, sp)
    den = 1
    for v in exact.value_table[0]:
        den = math.lcm(den, v.denominator)
    values = [int(v * den) for v in exact.value_table[0]]
    for backend in BACKENDS:
        total, bids = get_kernels(backend).lex(values, sp.budget, sp.battlefields)
        assert Fraction(total, den) == exact.value
        assert bids == exact.argmax
