"""Reproducible, splittable random streams and the samplers built on them.

Every stream is a value ``(master_seed, key path, stream_index)`` mapped to a
counter-based Philox generator through ``numpy.random.SeedSequence``. Two
streams that differ anywhere in their key are independent, and a stream
always replays the same sequence, so results never depend on which thread
consumed which stream.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import OrthonormalBasis, orthonormalize_rows

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    master_seed: int
    stream_index: int = 0
    parent: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise InvalidInputError("master_seed must be an unsigned 64-bit integer")
        if self.stream_index < 0:
            raise InvalidInputError("stream_index must be nonnegative")

    @property
    def key(self) -> tuple[int, ...]:
        return self.parent + (self.stream_index,)

    def child(self, index: int) -> "SeededStream":
        """Sub-stream ``index`` of this stream."""
        return SeededStream(self.master_seed, index, self.key)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class GrassmannSample:
    basis: OrthonormalBasis


def _rng(s) -> np.random.Generator:
    return s if isinstance(s, np.random.Generator) else s.generator()


def sample_gaussian_matrix(n: int, N: int, s) -> np.ndarray:
    """``(n, N)`` matrix of independent standard normals."""
    if n < 1 or N < 1:
        raise InvalidInputError(f"need n, N >= 1, got n={n}, N={N}")
    return _rng(s).standard_normal((n, N))


def sample_chi(k: int, s, size=None):
    """chi variate(s) with ``k`` degrees of freedom, via sqrt of a Gamma(k/2, 2) draw."""
    if k < 1:
        raise InvalidInputError(f"chi needs k >= 1 degrees of freedom, got {k}")
    out = np.sqrt(_rng(s).gamma(k / 2.0, 2.0, size=size))
    return float(out) if size is None else out


def sample_grassmannian(n: int, N: int, s) -> GrassmannSample:
    """Haar-uniform n-dimensional subspace of R^N: the row space of a Gaussian matrix."""
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    return GrassmannSample(orthonormalize_rows(sample_gaussian_matrix(n, N, s)))


def sample_ynfactor(n: int, N: int, s, size=None):
    """Product of independent chi_N, chi_{N-1}, ..., chi_{N-n+1}.

    Same law as ``det(G G^T)^{1/2}`` for an ``(n, N)`` Gaussian ``G``.
    """
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    rng = _rng(s)
    out = np.ones(size) if size is not None else 1.0
    for k in range(N, N - n, -1):
        out = out * sample_chi(k, rng, size=size)
    return out
