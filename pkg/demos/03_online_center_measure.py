"""The Online Center measure on mixtures stays logarithmic in n."""

import math

from nosub import ComponentSpec, MixtureSpec, oc_bracket, oc_exact, run_scaling, sample_mixture

k = 2
mix = MixtureSpec([ComponentSpec("gaussian", [0.0], 1.0), ComponentSpec("uniform-box", [20.0], 1.0)])

# small samples: exact OC by search over subsets
for seed in range(3):
    X = sample_mixture(mix, 12, seed)
    est = oc_exact(X.points, k)
    print("n=12 seed", seed, est, "witness", est.witness)

# larger samples: greedy lower bound and aspect-ratio upper bound
X = sample_mixture(mix, 400, seed=7)
print("n=400:", oc_bracket(X.points, k))

# per-component aspect ratios give k^2 log2(asp), which grows like log n
rep = run_scaling(mix, k, [64, 128, 256, 512, 1024], range(10))
print(f"C0 = {rep.c0:.2f}, fraction within 2 k^2 (3 log2 n + C0): {rep.fraction_within:.2f}")
for n in rep.n_grid:
    vals = [r["aspect_oc_bound"] for r in rep.rows if r["n"] == n]
    print(n, round(sum(vals) / len(vals), 1), "log2 n =", round(math.log2(n), 1))
for r in rep.contrast:
    print("exponential series n =", r["n"], "OC =", r["oc_lower"])
