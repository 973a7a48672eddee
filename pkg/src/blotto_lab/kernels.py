"""Budget-DP kernels for the fictitious-play inner loop.

Fictitious play over the Lotto space reduces each round to maximizing
``sum_k values[bid_k]`` subject to the exact budget, with one shared value
table because all battlefields look alike under the empirical belief.  That
DP is the hot loop, so it ships in three interchangeable backends:

* ``numba``  - @njit kernels, the default when numba imports;
* ``numpy``  - vectorized max-plus stages via sliding windows;
* ``python`` - plain loops on Python ints (arbitrary precision, used as the
  big-integer fallback when scaled values could overflow int64).

Set ``BLOTTO_KERNEL=numba|numpy|python`` to pin a backend.  All backends
return bit-identical results; ``benchmarks/fp_bench.py`` compares their
throughput.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAVE_NUMBA = False

ENV_VAR = "BLOTTO_KERNEL"
NEG = -(1 << 61)  # sentinel for unreachable states; values are guarded below 2**60

BestReply = "tuple[int, tuple[int, ...]]"


# ---------------------------------------------------------------------------
# python backend: lists of Python ints, never overflows
# ---------------------------------------------------------------------------


def br_lex_python(values: Sequence[int], budget: int, fields: int) -> BestReply:
    """Optimal value and lexicographically smallest optimal bid vector."""
    values = list(values)
    suffix = [values[: budget + 1]]  # suffix[c-1][r]: best over c fields, budget r
    for _ in range(1, fields):
        prev = suffix[-1]
        suffix.append(
            [max(values[x] + prev[r - x] for x in range(r + 1)) for r in range(budget + 1)]
        )
    bids = []
    r = budget
    for c in range(fields - 1, 0, -1):
        target = suffix[c][r]
        prev = suffix[c - 1]
        for x in range(r + 1):
            if values[x] + prev[r - x] == target:
                bids.append(x)
                r -= x
                break
    bids.append(r)
    return suffix[fields - 1][budget], tuple(bids)


def br_sampled_python(
    values: Sequence[int], budget: int, fields: int, uniforms: Sequence[float]
) -> BestReply:
    """Uniform draw over all optimal bid vectors, driven by ``uniforms``.

    Counts optimal completions per state and walks stages choosing each bid
    with probability proportional to the completions it leaves open, so the
    draw is uniform over the full argmax set (up to float resolution of the
    supplied uniforms).
    """
    values = list(values)
    suffix = [values[: budget + 1]]
    counts = [[1] * (budget + 1)]
    for _ in range(1, fields):
        prev, prev_counts = suffix[-1], counts[-1]
        row, row_counts = [], []
        for r in range(budget + 1):
            best = max(values[x] + prev[r - x] for x in range(r + 1))
            row.append(best)
            row_counts.append(
                sum(prev_counts[r - x] for x in range(r + 1) if values[x] + prev[r - x] == best)
            )
        suffix.append(row)
        counts.append(row_counts)
    bids = []
    r = budget
    for c in range(fields - 1, 0, -1):
        target = suffix[c][r]
        prev, prev_counts = suffix[c - 1], counts[c - 1]
        total = counts[c][r]
        want = min(int(uniforms[fields - 1 - c] * total), total - 1)
        acc = 0
        for x in range(r + 1):
            if values[x] + prev[r - x] == target:
                acc += prev_counts[r - x]
                if acc > want:
                    bids.append(x)
                    r -= x
                    break
    bids.append(r)
    return suffix[fields - 1][budget], tuple(bids)


# ---------------------------------------------------------------------------
# numpy backend: stage-wise max-plus products through sliding windows
# ---------------------------------------------------------------------------


def _stages_numpy(values: np.ndarray, budget: int, fields: int) -> np.ndarray:
    n = budget
    stages = np.empty((fields, n + 1), dtype=np.int64)
    stages[0] = values[: n + 1]
    pad = np.empty(2 * n + 1, dtype=np.int64)
    pad[:n] = NEG
    head = values[: n + 1, None]
    for c in range(1, fields):
        pad[n:] = stages[c - 1]
        windows = np.lib.stride_tricks.sliding_window_view(pad, n + 1)
        stages[c] = (head + windows[::-1]).max(axis=0)
    return stages


def br_lex_numpy(values: Sequence[int], budget: int, fields: int) -> BestReply:
    v = np.asarray(values, dtype=np.int64)
    stages = _stages_numpy(v, budget, fields)
    bids = []
    r = budget
    for c in range(fields - 1, 0, -1):
        cand = v[: r + 1] + stages[c - 1][r::-1]
        x = int(np.nonzero(cand == stages[c][r])[0][0])
        bids.append(x)
        r -= x
    bids.append(r)
    return int(stages[fields - 1][budget]), tuple(bids)


def br_sampled_numpy(
    values: Sequence[int], budget: int, fields: int, uniforms: Sequence[float]
) -> BestReply:
    n = budget
    v = np.asarray(values, dtype=np.int64)
    reach = np.tri(n + 1, n + 1, 0, dtype=bool).T  # reach[x, r]: x <= r
    stages = np.empty((fields, n + 1), dtype=np.int64)
    counts = np.empty((fields, n + 1), dtype=np.int64)
    stages[0] = v[: n + 1]
    counts[0] = 1
    pad = np.empty(2 * n + 1, dtype=np.int64)
    pad[:n] = NEG
    pad_counts = np.zeros(2 * n + 1, dtype=np.int64)
    head = v[: n + 1, None]
    for c in range(1, fields):
        pad[n:] = stages[c - 1]
        pad_counts[n:] = counts[c - 1]
        windows = np.lib.stride_tricks.sliding_window_view(pad, n + 1)[::-1]
        count_windows = np.lib.stride_tricks.sliding_window_view(pad_counts, n + 1)[::-1]
        totals = head + windows
        stages[c] = totals.max(axis=0)
        optimal = (totals == stages[c][None, :]) & reach
        counts[c] = (count_windows * optimal).sum(axis=0)
    bids = []
    r = budget
    for c in range(fields - 1, 0, -1):
        cand = v[: r + 1] + stages[c - 1][r::-1]
        optimal = cand == stages[c][r]
        branch = np.where(optimal, counts[c - 1][r::-1], 0)
        total = int(counts[c][r])
        want = min(int(uniforms[fields - 1 - c] * total), total - 1)
        x = int(np.searchsorted(np.cumsum(branch), want + 1))
        bids.append(x)
        r -= x
    bids.append(r)
    return int(stages[fields - 1][budget]), tuple(bids)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _br_lex_jit(values, budget, fields):  # pragma: no cover - numba
        n = budget
        stages = np.empty((fields, n + 1), dtype=np.int64)
        for r in range(n + 1):
            stages[0, r] = values[r]
        for c in range(1, fields):
            for r in range(n + 1):
                best = values[0] + stages[c - 1, r]
                for x in range(1, r + 1):
                    cand = values[x] + stages[c - 1, r - x]
                    if cand > best:
                        best = cand
                stages[c, r] = best
        bids = np.zeros(fields, dtype=np.int64)
        r = n
        for i in range(fields - 1):
            c = fields - 1 - i
            target = stages[c, r]
            for x in range(r + 1):
                if values[x] + stages[c - 1, r - x] == target:
                    bids[i] = x
                    r -= x
                    break
        bids[fields - 1] = r
        return stages[fields - 1, n], bids

    @njit(cache=True)
    def _br_sampled_jit(values, budget, fields, uniforms):  # pragma: no cover - numba
        n = budget
        stages = np.empty((fields, n + 1), dtype=np.int64)
        counts = np.empty((fields, n + 1), dtype=np.int64)
        for r in range(n + 1):
            stages[0, r] = values[r]
            counts[0, r] = 1
        for c in range(1, fields):
            for r in range(n + 1):
                best = values[0] + stages[c - 1, r]
                for x in range(1, r + 1):
                    cand = values[x] + stages[c - 1, r - x]
                    if cand > best:
                        best = cand
                total = 0
                for x in range(r + 1):
                    if values[x] + stages[c - 1, r - x] == best:
                        total += counts[c - 1, r - x]
                stages[c, r] = best
                counts[c, r] = total
        bids = np.zeros(fields, dtype=np.int64)
        r = n
        for i in range(fields - 1):
            c = fields - 1 - i
            target = stages[c, r]
            total = counts[c, r]
            want = np.int64(uniforms[i] * total)
            if want > total - 1:
                want = total - 1
            acc = 0
            for x in range(r + 1):
                if values[x] + stages[c - 1, r - x] == target:
                    acc += counts[c - 1, r - x]
                    if acc > want:
                        bids[i] = x
                        r -= x
                        break
        bids[fields - 1] = r
        return stages[fields - 1, n], bids

    def br_lex_numba(values: Sequence[int], budget: int, fields: int) -> BestReply:
        v = np.asarray(values, dtype=np.int64)
        total, bids = _br_lex_jit(v, budget, fields)
        return int(total), tuple(int(b) for b in bids)

    def br_sampled_numba(
        values: Sequence[int], budget: int, fields: int, uniforms: Sequence[float]
    ) -> BestReply:
        v = np.asarray(values, dtype=np.int64)
        u = np.asarray(uniforms, dtype=np.float64)
        total, bids = _br_sampled_jit(v, budget, fields, u)
        return int(total), tuple(int(b) for b in bids)

else:  # pragma: no cover - exercised only without numba
    br_lex_numba = None
    br_sampled_numba = None


@dataclass(frozen=True)
class KernelSet:
    name: str
    lex: Callable
    sampled: Callable


_BACKENDS = {
    "python": KernelSet("python", br_lex_python, br_sampled_python),
    "numpy": KernelSet("numpy", br_lex_numpy, br_sampled_numpy),
}
if HAVE_NUMBA:
    _BACKENDS["numba"] = KernelSet("numba", br_lex_numba, br_sampled_numba)


def available_backends() -> "tuple[str, ...]":
    return tuple(sorted(_BACKENDS))


def default_backend() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice:
        if choice not in _BACKENDS:
            raise ValueError(
                f"{ENV_VAR}={choice!r} not available; choose from {available_backends()}"
            )
        return choice
    return "numba" if HAVE_NUMBA else "numpy"


def get_kernels(name: "str | None" = None) -> KernelSet:
    """Resolve a kernel backend by name, env var, or availability."""
    return _BACKENDS[name if name is not None else default_backend()]
