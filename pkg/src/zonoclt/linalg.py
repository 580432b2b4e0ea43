"""Small dense linear algebra on column matrices.

A column matrix is a plain ``(n, N)`` float array whose columns are the
vectors ``x_1, ..., x_N`` in R^n. Everything here is meant for small ``n``
(up to about 8) and is a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, RankDeficiencyError

RANK_TOL = 1e-10


def as_column_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2-d column matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_column_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class OrthonormalBasis:
    """``dim_sub`` orthonormal rows in R^``dim_ambient``."""

    rows: np.ndarray

    @property
    def dim_sub(self) -> int:
        return self.rows.shape[0]

    @property
    def dim_ambient(self) -> int:
        return self.rows.shape[1]

    def projector(self) -> np.ndarray:
        return self.rows.T @ self.rows


def det(m) -> float:
    """Signed determinant (LAPACK LU with partial pivoting)."""
    a = _square(m)
    if a.shape[0] > 12:
        raise InvalidInputError("det is limited to n <= 12")
    if a.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(a))


def det_via_projections(m) -> float:
    """|det| as a product of Gram-Schmidt residual norms.

    ``|x_1| * |P x_2| * ... * |P x_n|`` where each ``P`` projects onto the
    orthogonal complement of the span of the preceding columns. Kept
    independent of :func:`det` so the two can check each other.
    """
    a = _square(m)
    n = a.shape[0]
    basis = []
    out = 1.0
    for k in range(n):
        v = a[:, k].copy()
        # two passes of modified Gram-Schmidt for stability
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        r = float(np.linalg.norm(v))
        out *= r
        if r <= RANK_TOL * max(1.0, float(np.linalg.norm(a[:, k]))):
            return 0.0
        basis.append(v / r)
    return out


def gram_det_sqrt(m) -> float:
    """``det(M M^T)^{1/2}`` computed through a QR factorisation of ``M^T``.

    By Cauchy-Binet this equals the square root of the sum of the squared
    maximal minors of ``M``.
    """
    a = as_column_matrix(m)
    n, N = a.shape
    if N < n:
        raise InvalidInputError(f"need N >= n, got n={n}, N={N}")
    r = np.linalg.qr(a.T, mode="r")
    return float(np.prod(np.abs(np.diag(r))))


def orthonormalize_rows(m) -> OrthonormalBasis:
    """Orthonormal basis of the row space, signs fixed so that R has a positive diagonal."""
    a = as_column_matrix(m)
    n, N = a.shape
    if n > N:
        raise RankDeficiencyError(f"{n} rows cannot be independent in R^{N}")
    q, r = np.linalg.qr(a.T)
    d = np.diag(r)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.any(np.abs(d) < RANK_TOL * scale):
        raise RankDeficiencyError("rows are numerically linearly dependent")
    q = q * np.sign(d)
    return OrthonormalBasis(rows=np.ascontiguousarray(q.T))


def project_complement(v, f: OrthonormalBasis) -> np.ndarray:
    """``v - sum <v, q_i> q_i`` over the rows ``q_i`` of ``f``."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != f.dim_ambient:
        raise InvalidInputError(
            f"vector of length {v.shape} does not live in R^{f.dim_ambient}"
        )
    return v - f.rows.T @ (f.rows @ v)


def batch_abs_det(blocks: np.ndarray) -> np.ndarray:
    """|det| of a stack of square matrices with shape ``(..., n, n)``.

    Uses cofactor expansion for n <= 3, LU otherwise.
    """
    n = blocks.shape[-1]
    if n == 1:
        return np.abs(blocks[..., 0, 0])
    if n == 2:
        return np.abs(
            blocks[..., 0, 0] * blocks[..., 1, 1] - blocks[..., 0, 1] * blocks[..., 1, 0]
        )
    if n == 3:
        b = blocks
        return np.abs(
            b[..., 0, 0] * (b[..., 1, 1] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 1])
            - b[..., 0, 1] * (b[..., 1, 0] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 0])
            + b[..., 0, 2] * (b[..., 1, 0] * b[..., 2, 1] - b[..., 1, 1] * b[..., 2, 0])
        )
    return np.abs(np.linalg.det(blocks))
