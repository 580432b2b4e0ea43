"""Monte Carlo experiments over an N grid.

Replication ``r`` at grid point ``N`` always draws from the stream
``(seed, tag, N, r)``, and results are collected in replication order, so
every statistic is a pure function of the config and the master seed.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import moments
from ..geometry import cube_projection_volume, sample_splitting_triple, zonotope_volume
from ..linalg import orthonormalize_rows
from ..randomness import GrassmannSample, SeededStream, sample_gaussian_matrix, sample_ynfactor
from ..subsets import check_budget
from ..ustat import estimate_zeta, gaussian_law, get_kernel, replicate_ustat
from .config import ExperimentConfig
from .report import ExperimentReport, ReportRow, version_string
from .stats import ks_distance, loglog_slope, standard_error_of_mean, standardize

# stream tags: draws of the same kind share streams across experiments
TAG_TRIPLE = 1
TAG_XN = 2
TAG_YN = 3
TAG_USTAT = 4
TAG_ZETA = 5

YN_BLOCK = 8192
MAX_RESAMPLE_FRACTION = 1e-3


class DegenerateDrawError(RuntimeError):
    pass


def _streams(cfg: ExperimentConfig, tag: int, N: int) -> SeededStream:
    return SeededStream(cfg.master_seed).child(tag).child(N)


def _replicate(fn, count: int, threads: int) -> list:
    if threads <= 1:
        return [fn(r) for r in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _mean(x) -> float:
    return float(np.mean(x))


def _var(x) -> float:
    return float(np.var(x, ddof=1))


def kernel_zeta_closed_form(label: str, n: int) -> float | None:
    """Projection variance of a built-in kernel under the standard Gaussian law."""
    return {
        "abs-det": moments.zeta_abs_det,
        "mixed-volume": moments.zeta_mixed_volume,
        "clt-combined": moments.zeta_clt_combined,
        "det-sq": lambda n: math.factorial(n - 1) ** 2 * 2.0 * n,
        "identity": lambda n: 1.0,
    }.get(label, lambda n: None)(n)


def sample_xn(cfg: ExperimentConfig, N: int) -> np.ndarray:
    check_budget(N, cfg.n)
    base = _streams(cfg, TAG_XN, N)

    def one(r):
        return zonotope_volume(sample_gaussian_matrix(cfg.n, N, base.child(r)))

    return np.array(_replicate(one, cfg.replications, cfg.threads))


def sample_triples(cfg: ExperimentConfig, N: int) -> list:
    check_budget(N, cfg.n)
    base = _streams(cfg, TAG_TRIPLE, N)
    triples = _replicate(
        lambda r: sample_splitting_triple(cfg.n, N, base.child(r)), cfg.replications, cfg.threads
    )
    resamples = sum(t.resampled for t in triples)
    if resamples > MAX_RESAMPLE_FRACTION * cfg.replications:
        raise DegenerateDrawError(f"{resamples} degenerate draws out of {cfg.replications} at N={N}")
    return triples


def sample_yn(cfg: ExperimentConfig, N: int) -> np.ndarray:
    base = _streams(cfg, TAG_YN, N)
    sizes = [min(YN_BLOCK, cfg.replications - s) for s in range(0, cfg.replications, YN_BLOCK)]
    parts = _replicate(
        lambda b: sample_ynfactor(cfg.n, N, base.child(b), size=sizes[b]), len(sizes), cfg.threads
    )
    return np.concatenate(parts)


def run_xn_clt(cfg: ExperimentConfig) -> ExperimentReport:
    n, rows, samples = cfg.n, [], {}
    cn = moments.cn_limit(n)
    for N in cfg.N_grid:
        x = sample_xn(cfg, N)
        z = standardize(x)
        samples[N] = z
        scaled = _var(x) / N ** (2 * n - 1)
        rows.append(ReportRow(
            N=N, mean=_mean(x), var=_var(x), ks_d=ks_distance(z), var_ratio=scaled / cn,
            extra={"var_scaled": scaled, "cn_limit": cn, "mean_exact": moments.xn_mean(n, N),
                   "mean_se": standard_error_of_mean(x)},
        ))
    return _report(cfg, rows, {"cn_limit": cn}, samples)


def run_yn_experiments(cfg: ExperimentConfig) -> ExperimentReport:
    n, rows, samples = cfg.n, [], {}
    for N in cfg.N_grid:
        y = sample_yn(cfg, N)
        y2 = y * y
        t = math.sqrt(N) * (y2 / float(N) ** n - 1.0) / math.sqrt(2 * n)
        samples[N] = t
        scaled = _var(y) / N ** (n - 1)
        ey2 = moments.yn_second_moment(n, N)
        se = standard_error_of_mean(y2)
        rows.append(ReportRow(
            N=N, mean=_mean(y), var=_var(y), ks_d=ks_distance(t), var_ratio=scaled / (n / 2),
            extra={"var_scaled": scaled, "var_scaled_exact": moments.yn_var(n, N) / N ** (n - 1),
                   "ey2_empirical": _mean(y2), "ey2_exact": ey2, "ey2_se": se,
                   "ey2_z": (_mean(y2) - ey2) / se},
        ))
    return _report(cfg, rows, {"limit": n / 2}, samples)


def _zeta_estimate(cfg: ExperimentConfig, label: str):
    kernel = get_kernel(label, cfg.n)
    s = SeededStream(cfg.master_seed).child(TAG_ZETA).child(0)
    return estimate_zeta(kernel, gaussian_law(cfg.n), cfg.zeta_outer, cfg.zeta_inner, s)


def _zeta_summary(est, closed):
    return {"zeta_hat": est.zeta_hat, "zeta_se": est.std_error, "zeta_raw": est.raw,
            "zeta_clamped": est.clamped, "zeta_closed_form": closed,
            "zeta_outer": est.outer_count, "zeta_inner": est.inner_count}


def run_zn_clt(cfg: ExperimentConfig) -> ExperimentReport:
    n, rows, samples = cfg.n, [], {}
    est = _zeta_estimate(cfg, "clt-combined")
    zeta_cf = moments.zeta_clt_combined(n)
    for N in cfg.N_grid:
        triples = sample_triples(cfg, N)
        z = np.array([t.z_n for t in triples])
        std = standardize(z)
        samples[N] = std
        norm = N ** ((n - 1) / 2) * n / math.factorial(n)
        sd = math.sqrt(_var(z))
        split_err = max(abs(t.x_n - t.y_n * t.z_n) / t.x_n for t in triples)
        rows.append(ReportRow(
            N=N, mean=_mean(z), var=_var(z), ks_d=ks_distance(std),
            var_ratio=sd / (norm * math.sqrt(est.zeta_hat)) if est.zeta_hat > 0 else None,
            alpha_mean=_mean([t.alpha for t in triples]),
            beta_mean=_mean([t.beta for t in triples]),
            delta_mean=_mean([t.delta for t in triples]),
            resamples=sum(t.resampled for t in triples),
            extra={"var_ratio_closed_zeta": sd / (norm * math.sqrt(zeta_cf)),
                   "mean_exact": moments.zn_mean(n, N), "mean_se": standard_error_of_mean(z),
                   "splitting_max_rel_err": split_err},
        ))
    return _report(cfg, rows, {**_zeta_summary(est, zeta_cf), "beta_limit": moments.beta_n(n)}, samples)


def run_decomposition_check(cfg: ExperimentConfig) -> ExperimentReport:
    n, rows, samples = cfg.n, [], {}
    for N in cfg.N_grid:
        triples = sample_triples(cfg, N)
        base = _streams(cfg, TAG_TRIPLE, N)
        z = np.array([t.z_n for t in triples])
        closed = [abs(t.expansion_terms()["residual"]) for t in triples]
        pilot = [abs(t.expansion_terms(ez=float(z.mean()))["residual"]) for t in triples]

        def geometric_err(r):
            # independent route: project the cube onto the row space of the same G
            g = sample_gaussian_matrix(n, N, base.child(r).generator())
            zg = cube_projection_volume(GrassmannSample(orthonormalize_rows(g)))
            t = triples[r]
            return abs(t.x_n - t.y_n * zg) / t.x_n

        split = max(_replicate(geometric_err, cfg.replications, cfg.threads)) if not any(
            t.resampled for t in triples) else None
        ez = moments.zn_mean(n, N)
        rows.append(ReportRow(
            N=N, mean=_mean(z), var=_var(z), ks_d=ks_distance(standardize(z)),
            alpha_mean=_mean([t.alpha for t in triples]),
            beta_mean=_mean([t.beta for t in triples]),
            delta_mean=_mean([t.delta for t in triples]),
            resamples=sum(t.resampled for t in triples),
            extra={"residual_closed_max": max(closed), "residual_pilot_max": max(pilot),
                   "mean_exact": ez, "mean_gap": _mean(z) - ez,
                   "mean_se": standard_error_of_mean(z), "splitting_max_rel_err": split},
        ))
    return _report(cfg, rows, {"alpha_limit": 1.0, "beta_limit": moments.beta_n(n), "delta_limit": 0.0}, samples)


def run_zeta_ratio(cfg: ExperimentConfig) -> ExperimentReport:
    label = cfg.kernel or "abs-det"
    kernel = get_kernel(label, cfg.n)
    est = _zeta_estimate(cfg, label)
    closed = kernel_zeta_closed_form(label, cfg.n)
    rows, samples = [], {}
    m = kernel.order
    for N in cfg.N_grid:
        check_budget(N, m)
        u = replicate_ustat(kernel, gaussian_law(cfg.n), N, cfg.replications,
                            _streams(cfg, TAG_USTAT, N), threads=cfg.threads)
        samples[N] = standardize(u)
        v = _var(u)
        rows.append(ReportRow(
            N=N, mean=_mean(u), var=v,
            var_ratio=N * v / (m * m * est.zeta_hat) if est.zeta_hat > 0 else None,
            extra={"var_ratio_closed_zeta": N * v / (m * m * closed) if closed else None},
        ))
    return _report(cfg, rows, {"kernel": label, **_zeta_summary(est, closed)}, samples)


def run_berry_esseen(cfg: ExperimentConfig) -> ExperimentReport:
    label = cfg.kernel or "abs-det"
    kernel = get_kernel(label, cfg.n)
    rows, samples = [], {}
    for N in cfg.N_grid:
        check_budget(N, kernel.order)
        u = replicate_ustat(kernel, gaussian_law(cfg.n), N, cfg.replications,
                            _streams(cfg, TAG_USTAT, N), threads=cfg.threads)
        std = standardize(u)
        samples[N] = std
        rows.append(ReportRow(N=N, mean=_mean(u), var=_var(u), ks_d=ks_distance(std)))
    ks = [r.ks_d for r in rows]
    noise = 1.0 / math.sqrt(cfg.replications)
    summary = {
        "kernel": label,
        "noise_floor": noise,
        "decay_ok": all(b <= a + noise for a, b in zip(ks, ks[1:])),
        "loglog_slope": loglog_slope(cfg.N_grid, ks) if len(ks) > 1 else None,
    }
    return _report(cfg, rows, summary, samples)


def run_moment_scaling(cfg: ExperimentConfig) -> ExperimentReport:
    n, p, rows = cfg.n, cfg.p, []
    for N in cfg.N_grid:
        x = sample_xn(cfg, N)
        central = float(np.mean(np.abs(x - x.mean()) ** p))
        rows.append(ReportRow(
            N=N, mean=_mean(x), var=_var(x),
            var_ratio=central / N ** (p * (n - 0.5)),
            extra={"p": p, "central_moment": central},
        ))
    ratios = [r.var_ratio for r in rows]
    summary = {"p": p, "max_over_min": max(ratios) / min(ratios)}
    if p == 2:
        summary["cn_limit"] = moments.cn_limit(n)
    return _report(cfg, rows, summary, {})


def run_moments_dump(cfg: ExperimentConfig) -> ExperimentReport:
    table = moments.moment_table(cfg.n, cfg.N_grid)
    rows = [ReportRow(N=N, mean=moments.xn_mean(cfg.n, N), extra=table.entries[f"N={N}"])
            for N in cfg.N_grid]
    summary = {k: v for k, v in table.entries.items() if not k.startswith("N=")}
    return _report(cfg, rows, summary, {})


RUNNERS = {
    "xn-clt": run_xn_clt,
    "yn-variance": run_yn_experiments,
    "zn-clt": run_zn_clt,
    "decomposition": run_decomposition_check,
    "zeta-ratio": run_zeta_ratio,
    "berry-esseen": run_berry_esseen,
    "moment-scaling": run_moment_scaling,
    "moments-dump": run_moments_dump,
}


def _report(cfg, rows, summary, samples) -> ExperimentReport:
    return ExperimentReport(
        config=cfg.to_dict(), rows=rows, summary=summary, master_seed=cfg.master_seed,
        threads=cfg.threads, version=version_string(), samples=samples,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    report = RUNNERS[cfg.experiment](cfg)
    report.wall_clock = time.perf_counter() - t0
    return report
