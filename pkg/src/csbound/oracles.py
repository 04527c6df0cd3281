"""Ground-truth references: exact LCS dynamic programs, the diagonal variant,
exhaustive evaluation of the suffix-extension expectation, and seeded Monte
Carlo estimates of the normalized LCS length.

Everything here is independent of the operator machinery so it can serve as
an oracle for it.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ResourceGuardError
from .states import TupleState, decode, parse_string

DEFAULT_DP_MEMORY = 1024**3  # bytes
DEFAULT_ENUM_BUDGET = 50_000_000  # rough operation count for exhaustive sweeps


@dataclass(frozen=True)
class LcsInstance:
    """d strings over {0..sigma-1}, lengths not necessarily equal."""

    sigma: int
    strings: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.sigma < 2:
            raise ValueError(f"sigma must be >= 2, got {self.sigma}")
        if len(self.strings) < 2:
            raise ValueError("need at least two strings")
        for s in self.strings:
            if any(not 0 <= ch < self.sigma for ch in s):
                raise ValueError(f"character out of range [0, {self.sigma}) in {s!r}")

    @classmethod
    def from_text(cls, *texts: str, sigma: int | None = None) -> LcsInstance:
        """Build an instance from digit strings, inferring sigma if omitted."""
        strings = tuple(parse_string(t) for t in texts)
        if sigma is None:
            sigma = max(2, max(max(s) for s in strings if s) + 1 if any(strings) else 2)
        for s in strings:
            if s and max(s) >= sigma:
                raise ValueError(f"character {max(s)} out of range for sigma={sigma}")
        return cls(sigma, strings)


def _guard_bytes(needed: int, cap: int, what: str) -> None:
    if needed > cap:
        raise ResourceGuardError(f"{what} needs {needed} bytes, cap is {cap}")


def _sweep_two(a, b, diag_fold: np.ndarray | None) -> int:
    """Row-by-row LCS sweep for two strings; optionally folds every DP cell
    into ``diag_fold`` as a running max per index-sum."""
    bb = np.asarray(b, dtype=np.int64)
    width = len(b) + 1
    prev = np.zeros(width, dtype=np.int32)
    for i in range(1, len(a) + 1):
        eq = bb == a[i - 1]
        cand = np.maximum(prev[1:], prev[:-1] + eq)
        cur = np.zeros(width, dtype=np.int32)
        # unrolling the drop-last-character predecessor turns the row into a
        # running maximum of the remaining candidates
        np.maximum.accumulate(cand, out=cand)
        cur[1:] = cand
        if diag_fold is not None:
            segment = diag_fold[i : i + width]
            np.maximum(segment, cur, out=segment)
        prev = cur
    return int(prev[-1])


def _sweep_three(a, b, c, diag_fold: np.ndarray | None) -> int:
    """Two-slab LCS sweep for three strings, vectorized along the last axis."""
    cc = np.asarray(c, dtype=np.int64)
    nb, nc = len(b), len(c)
    prev = np.zeros((nb + 1, nc + 1), dtype=np.int32)
    sums = None
    if diag_fold is not None:
        sums = np.add.outer(np.arange(nb + 1), np.arange(nc + 1)).ravel()
    for i in range(1, len(a) + 1):
        ai = a[i - 1]
        cur = np.zeros_like(prev)
        for j in range(1, nb + 1):
            cand = np.maximum(prev[j, 1:], cur[j - 1, 1:])
            if b[j - 1] == ai:
                eq = cc == ai
                cand = np.maximum(cand, np.where(eq, prev[j - 1, :-1] + 1, 0))
            np.maximum.accumulate(cand, out=cand)
            cur[j, 1:] = cand
        if diag_fold is not None:
            np.maximum.at(diag_fold, i + sums, cur.ravel())
        prev = cur
    return int(prev[-1, -1])


def _full_table(strings) -> np.ndarray:
    """Complete DP table for any number of strings (last axis vectorized).

    Cell (i_1, ..., i_d) holds the LCS length of the prefixes of those
    lengths: one plus the all-minus-one cell when the d current characters
    all match, otherwise the best drop-one-character predecessor.
    """
    dims = tuple(len(s) + 1 for s in strings)
    table = np.zeros(dims, dtype=np.int32)
    last = np.asarray(strings[-1], dtype=np.int64)
    for idx in np.ndindex(dims[:-1]):
        if 0 in idx:
            continue
        chars = [strings[j][idx[j] - 1] for j in range(len(idx))]
        cand = table[idx[:-1] + (idx[-1] - 1,)][1:]
        for j in range(len(idx) - 1):
            drop = idx[:j] + (idx[j] - 1,) + idx[j + 1 :]
            cand = np.maximum(cand, table[drop][1:])
        if all(ch == chars[0] for ch in chars[1:]):
            eq = last == chars[0]
            diag = table[tuple(i - 1 for i in idx)][:-1] + 1
            cand = np.maximum(cand, np.where(eq, diag, 0))
        np.maximum.accumulate(cand, out=cand)
        table[idx][1:] = cand
    return table


def lcs(instance: LcsInstance, memory_cap: int = DEFAULT_DP_MEMORY) -> int:
    """Exact LCS length of all strings in the instance."""
    strings = instance.strings
    if any(len(s) == 0 for s in strings):
        return 0
    d = len(strings)
    if d == 2:
        _guard_bytes(8 * (len(strings[1]) + 1), memory_cap, "two-string DP rows")
        return _sweep_two(strings[0], strings[1], None)
    if d == 3:
        slab = (len(strings[1]) + 1) * (len(strings[2]) + 1)
        _guard_bytes(8 * slab, memory_cap, "three-string DP slabs")
        return _sweep_three(strings[0], strings[1], strings[2], None)
    cells = math.prod(len(s) + 1 for s in strings)
    _guard_bytes(4 * cells, memory_cap, f"{d}-string DP table")
    return int(_full_table(strings)[tuple(len(s) for s in strings)])


def diagonal_lcs(instance: LcsInstance, n: int, memory_cap: int = DEFAULT_DP_MEMORY) -> int:
    """Best LCS over prefixes whose lengths sum to n.

    Read off one DP sweep as the maximum over cells with index-sum n rather
    than re-running per split.
    """
    strings = instance.strings
    total = sum(len(s) for s in strings)
    if not 0 <= n <= total:
        raise ValueError(f"prefix-length sum {n} infeasible (0..{total})")
    d = len(strings)
    fold = np.zeros(total + 1, dtype=np.int32)
    if d == 2:
        _guard_bytes(8 * (len(strings[1]) + 1), memory_cap, "two-string DP rows")
        _sweep_two(strings[0], strings[1], fold)
    elif d == 3:
        slab = (len(strings[1]) + 1) * (len(strings[2]) + 1)
        _guard_bytes(8 * slab, memory_cap, "three-string DP slabs")
        _sweep_three(strings[0], strings[1], strings[2], fold)
    else:
        cells = math.prod(len(s) + 1 for s in strings)
        _guard_bytes(4 * cells, memory_cap, f"{d}-string DP table")
        table = _full_table(strings)
        sums = np.zeros((), dtype=np.int64)
        for length in (len(s) for s in strings):
            sums = np.add.outer(sums, np.arange(length + 1)).reshape(-1)
        np.maximum.at(fold, sums, table.ravel())
    return int(fold[n])


@functools.lru_cache(maxsize=200_000)
def _lcs_cached(strings: tuple[tuple[int, ...], ...]) -> int:
    """Small-instance LCS on plain tuples, memoized across the enumeration
    sweeps (the same prefix/suffix combinations recur constantly)."""
    if any(len(s) == 0 for s in strings):
        return 0
    if len(strings) == 2:
        a, b = strings
        prev = [0] * (len(b) + 1)
        for x in a:
            cur = [0]
            for j, y in enumerate(b, start=1):
                if x == y:
                    cur.append(prev[j - 1] + 1)
                else:
                    cur.append(max(prev[j], cur[j - 1]))
            prev = cur
        return prev[-1]
    return int(_full_table(strings)[tuple(len(s) for s in strings)])


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def exhaustive_w(state: TupleState, n: int, budget: int = DEFAULT_ENUM_BUDGET) -> float:
    """Exact expected best-split LCS after n random suffix characters.

    Enumerates all sigma**(d*n) suffix fills; for each one, maximizes the
    LCS over every way of distributing the n characters among the d strings.
    Intended for tiny instances (the enumeration cost is guarded).
    """
    sigma, d = state.sigma, state.d
    if n < 0:
        raise ValueError("n must be nonnegative")
    fills = sigma ** (d * n)
    cost = fills * math.comb(n + d - 1, d - 1) * (state.l + n) ** 2
    if cost > budget:
        raise ResourceGuardError(
            f"exhaustive expectation cost ~{cost} over budget {budget}"
        )
    splits = list(_compositions(n, d))
    total = 0
    for fill in product(range(sigma), repeat=d * n):
        suffixes = [fill[j * n : (j + 1) * n] for j in range(d)]
        best = 0
        for split in splits:
            words = tuple(
                state.strings[j] + suffixes[j][: split[j]] for j in range(d)
            )
            value = _lcs_cached(words)
            if value > best:
                best = value
        total += best
    return total / fills


def exhaustive_w_vector(
    sigma: int, d: int, l: int, n: int, budget: int = DEFAULT_ENUM_BUDGET
) -> np.ndarray:
    """The exhaustive expectation at every encoded state, in encode order."""
    count = sigma ** (l * d)
    if count > 4096:
        raise ResourceGuardError(f"vector assembly limited to 4096 states, got {count}")
    return np.array(
        [exhaustive_w(decode(k, sigma, d, l), n, budget) for k in range(count)]
    )


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    n: int
    sigma: int
    d: int


def mc_estimate(
    sigma: int,
    d: int,
    n: int,
    samples: int,
    seed: int = 0,
    workers: int = 1,
    memory_cap: int = DEFAULT_DP_MEMORY,
) -> McEstimate:
    """Seeded Monte Carlo estimate of (LCS length)/n for random strings.

    Sample k derives its generator from (seed, k), so the estimate is
    reproducible and independent of how samples are spread over workers.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")

    def one(k: int) -> float:
        rng = np.random.default_rng((seed, k))
        draws = rng.integers(0, sigma, size=(d, n))
        instance = LcsInstance(
            sigma, tuple(tuple(int(ch) for ch in row) for row in draws)
        )
        return lcs(instance, memory_cap) / n

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(one, range(samples))))
    else:
        values = np.array([one(k) for k in range(samples)])
    stderr = float(np.std(values, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return McEstimate(
        mean=float(values.mean()),
        stderr=stderr,
        samples=samples,
        n=n,
        sigma=sigma,
        d=d,
    )


def mc_exact(
    sigma: int, d: int, n: int, budget: int = DEFAULT_ENUM_BUDGET
) -> float:
    """Exact mean of (LCS length)/n over all sigma**(d*n) string tuples."""
    if n < 1:
        raise ValueError("n must be >= 1")
    fills = sigma ** (d * n)
    if fills * n**2 > budget:
        raise ResourceGuardError(f"exact enumeration of {fills} tuples over budget")
    total = 0
    for fill in product(range(sigma), repeat=d * n):
        words = tuple(fill[j * n : (j + 1) * n] for j in range(d))
        total += _lcs_cached(words)
    return total / fills / n
