"""Zonotopes, segment mixed volumes, cube projections and the splitting triple."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import moments
from .errors import BudgetExceededError, InvalidInputError
from .linalg import as_column_matrix, batch_abs_det, gram_det_sqrt
from .randomness import GrassmannSample, SeededStream, sample_gaussian_matrix
from .subsets import DEFAULT_BUDGET, subset_sum

# a Gaussian Gram determinant this small means a broken draw, not bad luck
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class Zonotope:
    """Minkowski sum of the segments ``[-x_i, x_i]`` over the columns of ``generators``."""

    generators: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "generators", as_column_matrix(self.generators))

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    def volume(self, **kw) -> float:
        return zonotope_volume(self, **kw)


def zonotope_volume(z, *, threads: int = 1, budget: int = DEFAULT_BUDGET) -> float:
    """``2^n`` times the sum of ``|det|`` over all n-subsets of generators.

    Accepts a :class:`Zonotope` or an ``(n, N)`` array. Fewer than ``n``
    generators give volume 0.
    """
    x = z.generators if isinstance(z, Zonotope) else as_column_matrix(z)
    n, N = x.shape
    if n > 6:
        raise InvalidInputError(f"zonotope_volume supports n <= 6, got {n}")
    if N < n:
        return 0.0
    xt = np.ascontiguousarray(x.T)

    def chunk(idx):
        # (m, n, n) with the chosen generators as columns
        return float(np.sum(batch_abs_det(xt[idx].transpose(0, 2, 1))))

    return 2.0**n * subset_sum(N, n, chunk, threads=threads, budget=budget)


def mixed_volume_segments(*vectors) -> float:
    """``V(x_1, ..., x_n) = 2^n |det[x_1 ... x_n]| / n!``."""
    if len(vectors) == 1 and np.ndim(vectors[0]) == 2:
        m = as_column_matrix(vectors[0])
    else:
        m = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidInputError(f"need n vectors in R^n, got shape {m.shape}")
    return 2.0**n * float(batch_abs_det(m[None])[0]) / math.factorial(n)


def minkowski_oracle(segments, volume=None) -> float:
    """Mixed volume of n segments by inclusion-exclusion over Minkowski sums.

    ``V = (1/n!) sum_j (-1)^(n+j) sum_{|S|=j} |sum_{i in S} [-x_i, x_i]|``.
    ``volume`` maps an ``(n, j)`` generator matrix to the volume of its
    zonotope and defaults to :func:`zonotope_volume`; pass an independent
    routine (e.g. a convex hull) to use this as a test oracle.
    """
    volume = volume or zonotope_volume
    m = np.column_stack([np.asarray(v, dtype=float) for v in segments])
    n = m.shape[0]
    if m.shape[1] != n:
        raise InvalidInputError(f"need exactly n={n} segments, got {m.shape[1]}")
    if n > 3:
        raise BudgetExceededError(n, 3, what="segments (oracle limited to n <= 3)")
    total = 0.0
    for j in range(1, n + 1):
        sign = (-1) ** (n + j)
        for s in itertools.combinations(range(n), j):
            total += sign * volume(m[:, list(s)])
    return total / math.factorial(n)


def cube_projection_volume(e: GrassmannSample, **kw) -> float:
    """Volume of the projection of ``[-1, 1]^N`` onto the subspace spanned by ``e``.

    In basis coordinates the projected cube is the zonotope generated by the
    columns of the ``(n, N)`` basis matrix.
    """
    return zonotope_volume(e.basis.rows, **kw)


@dataclass(frozen=True)
class SplittingTriple:
    n: int
    N: int
    x_n: float
    y_n: float
    z_n: float
    alpha: float
    beta: float
    delta: float
    resampled: bool = False

    def expansion_terms(self, ez: float | None = None) -> dict:
        """Both sides of the centred expansion of ``Z_N``.

        ``ez`` defaults to the closed form ``E X_N / E Y_N``; with it the two
        sides agree up to rounding.
        """
        n, N = self.n, self.N
        ex = moments.xn_mean(n, N)
        ey2 = moments.yn_second_moment(n, N)
        ez = moments.zn_mean(n, N) if ez is None else ez
        s = N ** (n - 0.5)
        lhs = (self.z_n - ez) / N ** ((n - 1) / 2)
        rhs = (
            self.alpha * (self.x_n - ex) / s
            - self.beta * (self.y_n**2 - ey2) / s
            - self.delta
        )
        return {"lhs": lhs, "rhs": rhs, "residual": lhs - rhs}


def decompose(n: int, N: int, x_n: float, y_n: float) -> tuple[float, float, float]:
    """Coefficients ``(alpha, beta, delta)`` of the centred expansion for one draw."""
    ex = moments.xn_mean(n, N)
    ey = moments.yn_mean(n, N)
    vy = moments.yn_var(n, N)
    alpha = N ** (n / 2) / y_n
    beta = N ** (n / 2) * ex / (y_n * (y_n + ey) * ey)
    delta = beta * vy / N ** (n - 0.5)
    return alpha, beta, delta


def triple_from_matrix(g, *, resampled=False, **kw) -> SplittingTriple:
    g = as_column_matrix(g)
    n, N = g.shape
    x = zonotope_volume(g, **kw)
    y = gram_det_sqrt(g)
    z = x / y
    alpha, beta, delta = decompose(n, N, x, y)
    return SplittingTriple(n, N, x, y, z, alpha, beta, delta, resampled)


def sample_splitting_triple(n: int, N: int, s: SeededStream, **kw) -> SplittingTriple:
    """Draw ``G`` and return ``(|G B|, det(G G^T)^{1/2}, |P_E B|)`` plus expansion coefficients.

    A degenerate draw is replaced once by a fresh draw from the same
    generator and flagged with ``resampled``.
    """
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    rng = s.generator()
    g = sample_gaussian_matrix(n, N, rng)
    if gram_det_sqrt(g) > DEGENERATE_TOL:
        return triple_from_matrix(g, **kw)
    g = sample_gaussian_matrix(n, N, rng)
    if gram_det_sqrt(g) <= DEGENERATE_TOL:
        raise InvalidInputError("two consecutive degenerate Gaussian draws")
    return triple_from_matrix(g, resampled=True, **kw)
