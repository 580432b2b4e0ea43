"""Chunked lexicographic enumeration of k-subsets and deterministic reduction.

Chunk boundaries depend only on ``(N, k, chunk_size)``, never on the worker
count, so a sum over subsets is bit-identical however it is scheduled.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import BudgetExceededError

DEFAULT_BUDGET = 10**8
CHUNK_SIZE = 1 << 16
# subsets below this count are materialised once and cached
CACHE_LIMIT = 4_000_000


def check_budget(N: int, k: int, budget: int = DEFAULT_BUDGET) -> int:
    count = math.comb(N, k)
    if count > budget:
        raise BudgetExceededError(count, budget)
    return count


@lru_cache(maxsize=32)
def _all_combinations(N: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.intp)
    if k == 1:
        return np.arange(N, dtype=np.intp)[:, None]
    if k == 2:
        i, j = np.triu_indices(N, 1)
        return np.stack([i, j], axis=1).astype(np.intp)
    # prefix with first element a, followed by (k-1)-subsets of {a+1..N-1}
    parts = []
    for a in range(N - k + 1):
        rest = _all_combinations(N - a - 1, k - 1) + (a + 1)
        parts.append(np.column_stack([np.full(len(rest), a, dtype=np.intp), rest]))
    out = np.concatenate(parts)
    out.flags.writeable = False
    return out


def combination_chunks(N: int, k: int, chunk_size: int = CHUNK_SIZE) -> Iterator[np.ndarray]:
    """Yield ``(m, k)`` index arrays covering all k-subsets of range(N) in lexicographic order."""
    total = math.comb(N, k)
    if total <= CACHE_LIMIT:
        combos = _all_combinations(N, k)
        for start in range(0, total, chunk_size):
            yield combos[start:start + chunk_size]
        return
    it = itertools.combinations(range(N), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk_size)),
            dtype=np.intp,
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def subset_sum(
    N: int,
    k: int,
    chunk_fn: Callable[[np.ndarray], float],
    *,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    chunk_size: int = CHUNK_SIZE,
) -> float:
    """Sum ``chunk_fn(idx)`` over lexicographic chunks of k-subsets.

    Chunk partial sums are merged with ``math.fsum`` in chunk order.
    """
    check_budget(N, k, budget)
    chunks = combination_chunks(N, k, chunk_size)
    if threads <= 1:
        partials = [chunk_fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(chunk_fn, chunks))
    return math.fsum(partials)
