"""Print the Y_N variance limit, the U-statistic variance law and the decomposition coefficients against N."""
import argparse

from zonoclt import moments
from zonoclt.harness import ExperimentConfig, run_experiment
from zonoclt.harness.config import DEFAULT_SEED

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--n", type=int, default=2)
p.add_argument("--seed", type=int, default=DEFAULT_SEED)
p.add_argument("--threads", type=int, default=4)
args = p.parse_args()
n = args.n

r = run_experiment(ExperimentConfig("yn-variance", n=n, N_grid=(10, 100, 1000, 10000),
                                    replications=10**5, master_seed=args.seed))
print(f"Var Y_N / N^(n-1)   (limit n/2 = {n / 2})")
for row in r.rows:
    print(f"  N={row.N:>6}  empirical {row.extra['var_scaled']:.4f}  exact {row.extra['var_scaled_exact']:.4f}")

r = run_experiment(ExperimentConfig("zeta-ratio", n=n, kernel="abs-det", N_grid=(20, 50, 100),
                                    replications=2000, master_seed=args.seed, threads=args.threads))
print("N Var(U_N) / (m^2 zeta), abs-det kernel")
for row in r.rows:
    print(f"  N={row.N:>6}  {row.var_ratio:.4f}")

r = run_experiment(ExperimentConfig("decomposition", n=n, N_grid=(50, 200, 500), replications=1000,
                                    master_seed=args.seed, threads=args.threads))
print(f"mean alpha / beta / delta   (limits 1, {moments.beta_n(n):.4f}, 0)")
for row in r.rows:
    print(f"  N={row.N:>6}  {row.alpha_mean:.4f}  {row.beta_mean:.4f}  {row.delta_mean:.4f}"
          f"  residual {row.extra['residual_closed_max']:.1e}")
