"""Closed-form Gaussian moment constants.

All quantities derive from chi moments ``E chi_k^p = 2^{p/2} Gamma((k+p)/2) / Gamma(k/2)``
and the factorisation of a Gaussian determinant into independent chi factors.
Gamma ratios go through ``scipy.special.poch`` so they stay accurate for
large ``k``; falling factorials are exact integer products.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

from scipy.special import poch

from .errors import InvalidInputError


def _check_n(n):
    if n < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {n}")


def _check_nN(n, N):
    _check_n(n)
    if N < n:
        raise InvalidInputError(f"need N >= n, got n={n}, N={N}")


@lru_cache(maxsize=None)
def chi_moment(k: int, p: float) -> float:
    if k < 1:
        raise InvalidInputError(f"chi needs k >= 1, got {k}")
    if p < 0:
        raise InvalidInputError(f"moment order must be >= 0, got {p}")
    if p == 2:
        return float(k)
    return 2.0 ** (p / 2.0) * float(poch(k / 2.0, p / 2.0))


def chi_var(k: int) -> float:
    return k - chi_moment(k, 1) ** 2


def delta_np(n: int, p: float) -> float:
    """p-th root of ``E |det[g_1 ... g_n]|^p`` for standard Gaussian columns."""
    _check_n(n)
    if p <= 0:
        raise InvalidInputError(f"p must be positive, got {p}")
    log_prod = sum(math.log(chi_moment(k, p)) for k in range(1, n + 1))
    return math.exp(log_prod / p)


def beta_n(n: int) -> float:
    return 2.0 ** (n - 1) * delta_np(n, 1) / delta_np(n, 2) ** 2


def expected_dn(n: int) -> float:
    """E |det[theta_1 ... theta_n]| for independent uniform unit vectors."""
    _check_n(n)
    return delta_np(n, 1) / chi_moment(n, 1) ** n


def zeta1(n: int, radial_law: str = "gaussian-norm") -> float:
    """``4^n Var R (E R)^{2(n-1)} (E D_n)^2`` with ``R`` the norm of a standard Gaussian."""
    _check_n(n)
    if radial_law != "gaussian-norm":
        raise InvalidInputError(f"unsupported radial law {radial_law!r}")
    er = chi_moment(n, 1)
    return 4.0**n * chi_var(n) * er ** (2 * (n - 1)) * expected_dn(n) ** 2


def zeta_mixed_volume(n: int) -> float:
    """Hoeffding projection variance of the segment mixed-volume kernel ``2^n |det| / n!``."""
    return zeta1(n) / math.factorial(n) ** 2


def zeta_abs_det(n: int) -> float:
    """Hoeffding projection variance of the kernel ``|det|``.

    Given ``g_1``, ``E[|det| | g_1] = |g_1| * Delta_{n-1,1}``.
    """
    return zeta1(n) / 4.0**n


def zeta_clt_combined(n: int) -> float:
    """Projection variance of ``2^n |det| - beta_n det^2`` for Gaussian columns.

    With ``R = |g_1|``: ``E[kernel | g_1] = a R - b R^2``, ``a = 2^n Delta_{n-1,1}``,
    ``b = beta_n (n-1)!``.
    """
    _check_n(n)
    a = 2.0**n * (delta_np(n - 1, 1) if n > 1 else 1.0)
    b = beta_n(n) * math.factorial(n - 1)
    er = chi_moment(n, 1)
    var_r = chi_var(n)
    cov_r_r2 = chi_moment(n, 3) - er * n
    var_r2 = 2.0 * n
    return a * a * var_r - 2.0 * a * b * cov_r_r2 + b * b * var_r2


def cn_limit(n: int) -> float:
    """Limit of ``Var X_N / N^{2n-1}``."""
    return n * n * zeta1(n) / math.factorial(n) ** 2


def falling_factorial(N: int, n: int) -> float:
    return float(math.prod(range(N - n + 1, N + 1)))


def xn_mean(n: int, N: int) -> float:
    _check_nN(n, N)
    return 2.0**n * math.comb(N, n) * delta_np(n, 1)


def yn_second_moment(n: int, N: int) -> float:
    _check_nN(n, N)
    return falling_factorial(N, n)


@lru_cache(maxsize=None)
def yn_mean(n: int, N: int) -> float:
    _check_nN(n, N)
    return math.exp(sum(math.log(chi_moment(k, 1)) for k in range(N - n + 1, N + 1)))


@lru_cache(maxsize=None)
def yn_var(n: int, N: int) -> float:
    """Var of chi_N ... chi_{N-n+1}, by peeling one chi factor at a time.

    ``Var(chi Y') = Var(chi) E Y'^2 + (E chi)^2 Var Y'`` avoids the
    cancellation in ``E Y^2 - (E Y)^2``.
    """
    _check_nN(n, N)
    if n == 1:
        return chi_var(N)
    return chi_var(N) * yn_second_moment(n - 1, N - 1) + chi_moment(N, 1) ** 2 * yn_var(
        n - 1, N - 1
    )


def zn_mean(n: int, N: int) -> float:
    """E Z_N = E X_N / E Y_N, by independence of Y_N and Z_N."""
    return xn_mean(n, N) / yn_mean(n, N)


@dataclass(frozen=True)
class MomentTable:
    n: int
    entries: dict = field(default_factory=dict)

    def to_json(self, **kw) -> str:
        return json.dumps({"n": self.n, "entries": self.entries}, **kw)


def moment_table(n: int, N_grid=()) -> MomentTable:
    _check_n(n)
    entries = {
        "delta_n1": {"value": delta_np(n, 1), "note": "E|det G_n|"},
        "delta_n2_sq": {"value": delta_np(n, 2) ** 2, "note": "E det(G_n)^2 = n!"},
        "beta_n": {"value": beta_n(n), "note": "2^(n-1) Delta_{n,1} / Delta_{n,2}^2"},
        "expected_dn": {"value": expected_dn(n), "note": "Delta_{n,1} / (E chi_n)^n"},
        "zeta1": {"value": zeta1(n), "note": "4^n Var R (E R)^(2(n-1)) (E D_n)^2, R = chi_n"},
        "zeta_abs_det": {"value": zeta_abs_det(n), "note": "zeta1 / 4^n"},
        "zeta_mixed_volume": {"value": zeta_mixed_volume(n), "note": "zeta1 / (n!)^2"},
        "zeta_clt_combined": {
            "value": zeta_clt_combined(n),
            "note": "Var E[2^n d - beta_n d^2 | g_1], derived",
        },
        "cn_limit": {"value": cn_limit(n), "note": "n^2 zeta1 / (n!)^2, derived"},
    }
    for N in N_grid:
        entries[f"N={N}"] = {
            "xn_mean": xn_mean(n, N),
            "yn_mean": yn_mean(n, N),
            "yn_second_moment": yn_second_moment(n, N),
            "yn_var": yn_var(n, N),
            "zn_mean": zn_mean(n, N),
        }
    return MomentTable(n=n, entries=entries)
