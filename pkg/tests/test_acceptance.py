"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
All runs use the CLI default seed.
"""
import itertools
import math
import time

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from zonoclt import moments
from zonoclt.geometry import cube_projection_volume, minkowski_oracle, sample_splitting_triple, zonotope_volume
from zonoclt.harness import ExperimentConfig, run_experiment
from zonoclt.harness.config import DEFAULT_SEED
from zonoclt.linalg import orthonormalize_rows
from zonoclt.randomness import GrassmannSample, SeededStream, sample_gaussian_matrix, sample_ynfactor
from zonoclt.ustat import estimate_zeta, gaussian_law, get_kernel

from conftest import ACCEPTANCE_LINES

SEED = DEFAULT_SEED
ROOT = SeededStream(SEED).child(900)


def record(k, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def hull_volume(x):
    """Volume of sum [-x_i, x_i] from the convex hull of its 2^N candidate vertices."""
    n, N = x.shape
    if N < n or np.linalg.matrix_rank(x) < n:
        return 0.0
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=N)))
    pts = signs @ x.T
    if n == 1:
        return float(pts.max() - pts.min())
    return float(ConvexHull(pts).volume)


@pytest.fixture(scope="module")
def xn_report():
    return run_experiment(ExperimentConfig("xn-clt", n=2, N_grid=(200,), replications=2000, threads=1))


@pytest.fixture(scope="module")
def zn_report():
    t0 = time.perf_counter()
    r2 = run_experiment(ExperimentConfig("zn-clt", n=2, N_grid=(500,), replications=2000, threads=1))
    r1 = run_experiment(ExperimentConfig("zn-clt", n=1, N_grid=(200,), replications=5000, threads=1))
    return r2, r1, time.perf_counter() - t0


def test_c01_splitting_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for n, N in [(1, 10), (2, 8), (3, 7)]:
        for r in range(1000):
            s = ROOT.child(1).child(N).child(r)
            t = sample_splitting_triple(n, N, s)
            g = sample_gaussian_matrix(n, N, s.generator())
            z = cube_projection_volume(GrassmannSample(orthonormalize_rows(g)))
            worst = max(worst, abs(t.x_n - t.y_n * z) / t.x_n)
    dt = time.perf_counter() - t0
    record(1, worst < 1e-9 and dt < 10, f"max rel |X - Y Z|/X = {worst:.2e}, {dt:.1f}s")


def test_c02_zonotope_formula_vs_minkowski():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for i in range(200):
        n = 1 + i % 3
        N = int(rng.integers(n, 6))
        x = rng.standard_normal((n, N))
        formula = zonotope_volume(x)
        # Minkowski expansion with mixed volumes from inclusion-exclusion over hull volumes
        expansion = sum(
            minkowski_oracle([x[:, j] for j in idx], volume=hull_volume)
            for idx in itertools.product(range(N), repeat=n)
            if len(set(idx)) == n
        )
        direct = hull_volume(x)
        worst = max(worst, abs(formula - expansion) / formula, abs(formula - direct) / formula)
    dt = time.perf_counter() - t0
    record(2, worst < 1e-8 and dt < 10, f"max rel disagreement {worst:.2e}, {dt:.1f}s")


def test_c03_yn_second_moment():
    t0 = time.perf_counter()
    M, zs = 10**5, []
    for n, N in [(2, 3), (2, 50), (3, 20)]:
        y2 = sample_ynfactor(n, N, ROOT.child(3).child(N), size=M) ** 2
        se = y2.std(ddof=1) / math.sqrt(M)
        zs.append((y2.mean() - moments.yn_second_moment(n, N)) / se)
    dt = time.perf_counter() - t0
    ok = all(abs(z) < 3 for z in zs) and dt < 5
    record(3, ok, f"z-scores {np.round(zs, 2).tolist()}, {dt:.1f}s")


def test_c04_yn_variance_limit():
    t0 = time.perf_counter()
    r = run_experiment(ExperimentConfig("yn-variance", n=2, N_grid=(10**4,), replications=10**5))
    ratio = r.rows[0].extra["var_scaled"]
    dt = time.perf_counter() - t0
    record(4, 0.95 <= ratio <= 1.05 and dt < 30, f"Var Y/N = {ratio:.4f}, {dt:.1f}s")


def test_c05_closed_form_constants():
    t0 = time.perf_counter()
    M = 10**5
    rng = ROOT.child(5).generator()
    checks = []
    for n in range(1, 5):
        d2 = np.linalg.det(rng.standard_normal((M, n, n))) ** 2
        exact = moments.delta_np(n, 2) ** 2
        checks.append(bool(abs(exact - math.factorial(n)) < 1e-12 * math.factorial(n))
                      and bool(abs(d2.mean() - exact) < 3 * d2.std(ddof=1) / math.sqrt(M)))
    d = np.abs(np.linalg.det(rng.standard_normal((M, 2, 2))))
    checks.append(bool(abs(moments.delta_np(2, 1) - 1) < 1e-12
                       and abs(d.mean() - 1) < 3 * d.std(ddof=1) / math.sqrt(M)))
    # beta_2 = 2 E|d| / E d^2, standard error by the delta method
    a, b = d.mean(), (d * d).mean()
    beta_hat = 2 * a / b
    grad = np.array([2 / b, -2 * a / b**2])
    cov = np.cov(np.vstack([d, d * d])) / M
    se = math.sqrt(grad @ cov @ grad)
    checks.append(bool(abs(moments.beta_n(2) - 1) < 1e-12 and abs(beta_hat - 1) < 3 * se))
    dt = time.perf_counter() - t0
    record(5, all(checks) and dt < 30, f"checks {checks}, beta_hat={beta_hat:.4f}, {dt:.1f}s")


def test_c06_zeta_consistency():
    t0 = time.perf_counter()
    n = 2
    mv = estimate_zeta(get_kernel("mixed-volume", n), gaussian_law(n), 2000, 2000, ROOT.child(6).child(0))
    ad = estimate_zeta(get_kernel("abs-det", n), gaussian_law(n), 2000, 2000, ROOT.child(6).child(1))
    target_mv = moments.zeta1(n) / math.factorial(n) ** 2
    target_ad = moments.zeta1(n) / 4**n
    ok = (abs(mv.zeta_hat - target_mv) <= 3 * mv.std_error
          and abs(ad.zeta_hat - target_ad) <= 3 * ad.std_error)
    dt = time.perf_counter() - t0
    record(6, ok and dt < 120,
           f"mixed-volume {mv.zeta_hat:.4f}±{mv.std_error:.4f} vs {target_mv:.4f}; "
           f"abs-det {ad.zeta_hat:.4f}±{ad.std_error:.4f} vs {target_ad:.4f}, {dt:.1f}s")


def test_c07_ustat_variance_law():
    t0 = time.perf_counter()
    r = run_experiment(ExperimentConfig("zeta-ratio", n=2, kernel="abs-det", N_grid=(100,),
                                        replications=2000))
    est, closed = r.rows[0].var_ratio, r.rows[0].extra["var_ratio_closed_zeta"]
    dt = time.perf_counter() - t0
    ok = 0.8 <= est <= 1.2 and 0.8 <= closed <= 1.2 and dt < 120
    record(7, ok, f"N Var U/(m^2 zeta): {est:.3f} (estimated zeta), {closed:.3f} (closed form), {dt:.1f}s")


def test_c08_xn_clt(xn_report):
    row = xn_report.rows[0]
    dt = xn_report.wall_clock
    record(8, row.ks_d < 0.06 and dt < 180, f"KS = {row.ks_d:.4f}, {dt:.1f}s")


def test_c09_zn_clt(zn_report):
    r2, r1, dt = zn_report
    d2, d1 = r2.rows[0].ks_d, r1.rows[0].ks_d
    record(9, d2 < 0.06 and d1 < 0.05 and dt < 900, f"KS n=2: {d2:.4f}, n=1: {d1:.4f}, {dt:.1f}s")


def test_c10_decomposition_limits(zn_report):
    row = zn_report[0].rows[0]
    ok = (0.95 <= row.alpha_mean <= 1.05 and abs(row.beta_mean - moments.beta_n(2)) <= 0.1
          and row.delta_mean < 0.05)
    record(10, ok, f"alpha {row.alpha_mean:.4f}, beta {row.beta_mean:.4f}, delta {row.delta_mean:.4f}")


def test_c11_zn_variance_ratio(zn_report):
    r2 = zn_report[0]
    ratio = r2.rows[0].var_ratio
    record(11, 0.8 <= ratio <= 1.2,
           f"ratio {ratio:.4f} with zeta_hat {r2.summary['zeta_hat']:.4f} (clt-combined kernel)")


def test_c12_berry_esseen_trend():
    t0 = time.perf_counter()
    r = run_experiment(ExperimentConfig("berry-esseen", n=2, kernel="abs-det",
                                        N_grid=(50, 100, 200), replications=5000))
    slope = r.summary["loglog_slope"]
    ks = [round(row.ks_d, 4) for row in r.rows]
    dt = time.perf_counter() - t0
    ok = r.summary["decay_ok"] and -1.0 <= slope <= -0.25 and dt < 300
    record(12, ok, f"KS {ks}, slope {slope:.3f}, {dt:.1f}s")


def test_c13_moment_scaling():
    t0 = time.perf_counter()
    r = run_experiment(ExperimentConfig("moment-scaling", n=2, p=4, N_grid=(25, 50, 100)))
    mm = r.summary["max_over_min"]
    dt = time.perf_counter() - t0
    record(13, mm < 3 and dt < 180, f"max/min = {mm:.3f}, {dt:.1f}s")


def test_c14_determinism(xn_report, zn_report):
    xn8 = run_experiment(ExperimentConfig("xn-clt", n=2, N_grid=(200,), replications=2000, threads=8))
    zn8 = run_experiment(ExperimentConfig("zn-clt", n=2, N_grid=(500,), replications=2000, threads=8))
    z18 = run_experiment(ExperimentConfig("zn-clt", n=1, N_grid=(200,), replications=5000, threads=8))
    same = [
        xn_report.statistics_json() == xn8.statistics_json(),
        zn_report[0].statistics_json() == zn8.statistics_json(),
        zn_report[1].statistics_json() == z18.statistics_json(),
    ]
    record(14, all(same), f"byte-identical (xn n=2, zn n=2, zn n=1): {same}")
