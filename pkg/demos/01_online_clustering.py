"""Online k-means on a two-component mixture, compared with the offline optimum."""

import numpy as np

from nosub import ComponentSpec, MixtureSpec, OnlineConfig, SolverSpec, opt_kmeans_cost_oracle, plan_online, run_online, sample_mixture

# two well separated gaussians on the line
mix = MixtureSpec([ComponentSpec("gaussian", [0.0], 1.0), ComponentSpec("gaussian", [30.0], 1.0)])
X = sample_mixture(mix, 500, seed=1)
k = 2
opt = opt_kmeans_cost_oracle(X.points, k)
print(f"n={X.n}, optimal 2-means cost {opt:.2f}")

# the offline plan depends only on the data; reuse it across seeds
cfg = OnlineConfig(k, SolverSpec("exact-1d-dp"))
schedule = plan_online(X.points, cfg)
print("expected number of centers:", round(sum(s.p_t for s in schedule), 2))

runs = [run_online(X.points, cfg.with_seed(s), schedule) for s in range(50)]
centers = np.array([r.n_centers for r in runs])
ratios = np.array([r.final_cost / opt for r in runs])
print(f"centers taken: mean {centers.mean():.1f}, range {centers.min()}..{centers.max()}")
print(f"cost / optimum: median {np.median(ratios):.3f}, worst {ratios.max():.3f}")
print("guarantee 1358 k^3 =", 1358 * k**3)

# the last few steps of one run: merge index, merged mass and sampling probability
for rec in runs[0].trace[-5:]:
    print(rec.t, rec.v_t, rec.s_t, round(rec.p_t, 4), rec.selected)
