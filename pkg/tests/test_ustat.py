import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zonoclt import moments
from zonoclt.errors import InvalidInputError
from zonoclt.geometry import zonotope_volume
from zonoclt.randomness import SeededStream
from zonoclt.subsets import _all_combinations
from zonoclt.ustat import (
    KERNELS,
    UStatKernel,
    abs_det_kernel,
    clt_combined_kernel,
    constant_kernel,
    estimate_zeta,
    exact_ustat,
    gaussian_law,
    get_kernel,
    identity_kernel,
    incomplete_ustat,
    replicate_ustat,
    ustat_variance_check,
)

from conftest import within_se

S = SeededStream(5)


def test_kernel_registry():
    for label in ("abs-det", "det-sq", "clt-combined"):
        assert get_kernel(label, 2).label == label
    with pytest.raises(InvalidInputError):
        get_kernel("nope", 2)


@pytest.mark.parametrize("label", sorted(KERNELS))
def test_kernels_symmetric(label, rng):
    n = 3
    k = get_kernel(label, n)
    t = rng.standard_normal((50, n, k.order))
    perm = rng.permutation(k.order)
    assert np.allclose(k(t), k(t[:, :, perm]), rtol=1e-13)


def test_exact_ustat_trivial(rng):
    x = rng.standard_normal((2, 9))
    assert exact_ustat(constant_kernel(3.5, 2), x) == pytest.approx(3.5)
    assert exact_ustat(identity_kernel(), x) == pytest.approx(x[0].mean(), rel=1e-14)


@pytest.mark.parametrize("n,N", [(1, 12), (2, 15), (3, 9)])
def test_abs_det_ustat_is_zonotope_volume(n, N, rng):
    x = rng.standard_normal((n, N))
    u = exact_ustat(abs_det_kernel(n), x)
    assert 2**n * math.comb(N, n) * u == pytest.approx(zonotope_volume(x), rel=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_exact_ustat_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((2, 11))
    k = clt_combined_kernel(2)
    assert exact_ustat(k, x[:, rng.permutation(11)]) == pytest.approx(exact_ustat(k, x), rel=1e-12)


def test_incomplete_with_full_design_equals_exact(rng):
    x = rng.standard_normal((2, 10))
    idx = _all_combinations(10, 2)
    k = abs_det_kernel(2)
    assert incomplete_ustat(k, x, len(idx), S, subsets=idx) == pytest.approx(exact_ustat(k, x), rel=1e-12)
    assert incomplete_ustat(constant_kernel(2.0), x, 17, S) == pytest.approx(2.0)


def test_incomplete_close_to_exact(rng):
    x = rng.standard_normal((2, 10))
    k = abs_det_kernel(2)
    vals = k(x.T[_all_combinations(10, 2)].transpose(0, 2, 1))
    draws = 10**5
    se = vals.std() / math.sqrt(draws)
    assert within_se(incomplete_ustat(k, x, draws, S.child(1)), exact_ustat(k, x), se)


def test_incomplete_unbiased(rng):
    x = rng.standard_normal((2, 10))
    k = abs_det_kernel(2)
    est = np.array([incomplete_ustat(k, x, 20, S.child(2).child(r)) for r in range(1000)])
    assert within_se(est.mean(), exact_ustat(k, x), est.std(ddof=1) / math.sqrt(1000))


def test_zeta_constant_and_identity():
    z = estimate_zeta(constant_kernel(1.0, 2), gaussian_law(2), 200, 100, S.child(3))
    assert abs(z.zeta_hat) <= 3 * z.std_error + 1e-12
    z = estimate_zeta(identity_kernel(), gaussian_law(1), 4000, 100, S.child(4))
    assert within_se(z.zeta_hat, 1.0, z.std_error)
    with pytest.raises(InvalidInputError):
        estimate_zeta(identity_kernel(), gaussian_law(1), 50, 100, S)


def test_zeta_abs_det_small():
    z = estimate_zeta(abs_det_kernel(2), gaussian_law(2), 1000, 500, S.child(5))
    assert within_se(z.zeta_hat, moments.zeta_abs_det(2), z.std_error)
    assert z.zeta_hat >= -3 * z.std_error


def test_zeta_degenerate_kernel_clamped():
    # E[x1 x2 | x1] = 0, so only Monte Carlo noise remains
    k = UStatKernel(2, lambda t: t[:, 0, 0] * t[:, 0, 1], "product")
    raws = []
    for r in range(10):
        z = estimate_zeta(k, gaussian_law(1), 200, 200, S.child(6).child(r))
        assert z.zeta_hat >= 0.0
        assert z.clamped == (z.raw < 0)
        assert abs(z.raw) <= 4 * z.std_error
        raws.append(z.raw)
    assert min(raws) < 0


def test_variance_check_identity():
    rows = ustat_variance_check(identity_kernel(), 1, [50, 100], 10**4, S.child(7), zeta=1.0)
    for r in rows:
        assert abs(r["ratio"] - 1) < 0.1


def test_variance_check_constant():
    rows = ustat_variance_check(constant_kernel(2.0, 2), 2, [10, 20], 100, S.child(8), zeta=1.0)
    assert all(r["var"] == 0.0 for r in rows)


def test_slln_abs_det():
    k = abs_det_kernel(2)
    target = moments.delta_np(2, 1)
    gaps, last = [], None
    for N in (20, 40, 80):
        last = replicate_ustat(k, gaussian_law(2), N, 400, S.child(9).child(N))
        gaps.append(np.mean(np.abs(last - target)))
    # typical distance shrinks with N; the replication average sits on the target
    assert gaps[0] > gaps[1] > gaps[2]
    assert abs(last.mean() - target) < 0.05 * target
