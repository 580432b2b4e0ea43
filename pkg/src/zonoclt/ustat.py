"""U-statistics with symmetric kernels: exact, incomplete, and projection-variance estimates.

A kernel of order ``m`` acts on a stack of argument tuples shaped
``(batch, dim, m)`` (each tuple stored as columns) and returns ``(batch,)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import moments
from .errors import InvalidInputError
from .linalg import as_column_matrix, batch_abs_det
from .randomness import SeededStream
from .subsets import DEFAULT_BUDGET, check_budget, subset_sum


@dataclass(frozen=True)
class UStatKernel:
    order: int
    eval: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, tuples: np.ndarray) -> np.ndarray:
        return self.eval(tuples)


def abs_det_kernel(n: int) -> UStatKernel:
    return UStatKernel(n, batch_abs_det, "abs-det")


def det_sq_kernel(n: int) -> UStatKernel:
    return UStatKernel(n, lambda t: batch_abs_det(t) ** 2, "det-sq")


def mixed_volume_kernel(n: int) -> UStatKernel:
    c = 2.0**n / math.factorial(n)
    return UStatKernel(n, lambda t: c * batch_abs_det(t), "mixed-volume")


def clt_combined_kernel(n: int) -> UStatKernel:
    """``2^n |det| - beta_n det^2``: the kernel whose U-statistic drives the Z_N limit."""
    c, b = 2.0**n, moments.beta_n(n)

    def f(t):
        d = batch_abs_det(t)
        return c * d - b * d * d

    return UStatKernel(n, f, "clt-combined")


def identity_kernel(n: int = 1) -> UStatKernel:
    """Order-1 kernel returning the first coordinate."""
    return UStatKernel(1, lambda t: t[:, 0, 0], "identity")


def constant_kernel(c: float, order: int = 2) -> UStatKernel:
    return UStatKernel(order, lambda t: np.full(t.shape[0], float(c)), "constant")


KERNELS: dict[str, Callable[[int], UStatKernel]] = {
    "abs-det": abs_det_kernel,
    "det-sq": det_sq_kernel,
    "clt-combined": clt_combined_kernel,
    "mixed-volume": mixed_volume_kernel,
    "identity": identity_kernel,
}


def get_kernel(label: str, n: int) -> UStatKernel:
    try:
        return KERNELS[label](n)
    except KeyError:
        raise InvalidInputError(
            f"unknown kernel {label!r}; choose from {sorted(KERNELS)}"
        ) from None


def gaussian_law(dim: int) -> Callable:
    """Sampler ``(rng, size) -> (size, dim)`` of standard Gaussian vectors."""
    return lambda rng, size: rng.standard_normal((size, dim))


def exact_ustat(k: UStatKernel, data, *, threads: int = 1, budget: int = DEFAULT_BUDGET) -> float:
    """Average of the kernel over all ``C(N, m)`` subsets of the columns of ``data``."""
    x = as_column_matrix(data)
    N = x.shape[1]
    if N < k.order:
        raise InvalidInputError(f"need N >= m, got N={N}, m={k.order}")
    xt = np.ascontiguousarray(x.T)

    def chunk(idx):
        return float(np.sum(k.eval(xt[idx].transpose(0, 2, 1))))

    total = subset_sum(N, k.order, chunk, threads=threads, budget=budget)
    return total / math.comb(N, k.order)


def incomplete_ustat(
    k: UStatKernel, data, draws: int, s, *, block: int = 8192, subsets=None
) -> float:
    """Kernel average over ``draws`` subsets sampled uniformly with replacement.

    Passing ``subsets`` (an ``(draws, m)`` index array) replaces the random
    choice with a fixed design.
    """
    if draws < 1:
        raise InvalidInputError("draws must be >= 1")
    x = as_column_matrix(data)
    N, m = x.shape[1], k.order
    if N < m:
        raise InvalidInputError(f"need N >= m, got N={N}, m={m}")
    xt = np.ascontiguousarray(x.T)
    if subsets is not None:
        idx = np.asarray(subsets, dtype=np.intp)
        if idx.shape != (draws, m):
            raise InvalidInputError(f"subsets must have shape {(draws, m)}")
        return float(np.sum(k.eval(xt[idx].transpose(0, 2, 1)))) / draws
    rng = s if isinstance(s, np.random.Generator) else s.generator()
    partial = []
    for start in range(0, draws, block):
        b = min(block, draws - start)
        idx = np.argpartition(rng.random((b, N)), m - 1, axis=1)[:, :m]
        partial.append(float(np.sum(k.eval(xt[idx].transpose(0, 2, 1)))))
    return math.fsum(partial) / draws


@dataclass(frozen=True)
class ZetaEstimate:
    zeta_hat: float
    outer_count: int
    inner_count: int
    std_error: float
    raw: float
    clamped: bool = False


def estimate_zeta(
    k: UStatKernel,
    sampler: Callable,
    outer: int,
    inner: int,
    s,
    *,
    batches: int = 20,
    block: int = 64,
) -> ZetaEstimate:
    """Nested Monte Carlo estimate of ``Var E[h(X_1, ..., X_m) | X_1]``.

    For each outer draw of ``X_1`` the conditional mean is estimated from
    ``inner`` fresh draws of the remaining arguments. The raw variance of
    those means is biased upward by (mean within-draw variance) / inner,
    which is subtracted. The standard error comes from ``batches``
    contiguous batches of outer draws.
    """
    if outer < 100 or inner < 100:
        raise InvalidInputError("estimate_zeta needs outer >= 100 and inner >= 100")
    m = k.order
    rng = s if isinstance(s, np.random.Generator) else s.generator()
    means = np.empty(outer)
    within = np.empty(outer)
    for start in range(0, outer, block):
        b = min(block, outer - start)
        x1 = sampler(rng, b)  # (b, dim)
        dim = x1.shape[1]
        if m == 1:
            vals = k.eval(x1[:, :, None])
            means[start:start + b] = vals
            within[start:start + b] = 0.0
            continue
        rest = sampler(rng, b * inner * (m - 1)).reshape(b, inner, m - 1, dim)
        tuples = np.empty((b, inner, dim, m))
        tuples[..., 0] = x1[:, None, :]
        tuples[..., 1:] = rest.transpose(0, 1, 3, 2)
        vals = k.eval(tuples.reshape(b * inner, dim, m)).reshape(b, inner)
        means[start:start + b] = vals.mean(axis=1)
        within[start:start + b] = vals.var(axis=1, ddof=1)

    def corrected(mu, w):
        return float(np.var(mu, ddof=1) - np.mean(w) / inner)

    raw = corrected(means, within)
    per_batch = [
        corrected(mu, w)
        for mu, w in zip(np.array_split(means, batches), np.array_split(within, batches))
    ]
    se = float(np.std(per_batch, ddof=1) / math.sqrt(batches))
    return ZetaEstimate(max(raw, 0.0), outer, inner, se, raw, clamped=raw < 0)


def ustat_variance_check(
    k: UStatKernel,
    dim: int,
    N_grid,
    replications: int,
    s: SeededStream,
    *,
    zeta: float,
    sampler: Callable | None = None,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> list[dict]:
    """Rows ``(N, var, ratio)`` with ``ratio = N Var(U_N) / (m^2 zeta)`` from replicated exact U-statistics."""
    sampler = sampler or gaussian_law(dim)
    rows = []
    for N in N_grid:
        check_budget(N, k.order, budget)
        values = replicate_ustat(k, sampler, N, replications, s.child(N), threads=threads)
        var = float(np.var(values, ddof=1))
        ratio = N * var / (k.order**2 * zeta) if zeta > 0 else math.nan
        rows.append({"N": N, "mean": float(np.mean(values)), "var": var, "ratio": ratio})
    return rows


def replicate_ustat(k, sampler, N, replications, s: SeededStream, *, threads=1) -> np.ndarray:
    """Exact U-statistics of ``replications`` independent samples; replication r uses ``s.child(r)``."""

    def one(r):
        data = sampler(s.child(r).generator(), N).T
        return exact_ustat(k, data)

    if threads <= 1:
        return np.array([one(r) for r in range(replications)])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(one, range(replications))))
