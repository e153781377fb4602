"""Why some arrival orders are expensive: geometric series force many centers."""

from nosub import (
    OnlineConfig,
    SolverSpec,
    exponential_adversary,
    hard_sequence_factor,
    lower_bound_centers,
    make_hard_sequence,
    oc_bracket,
    run_online,
    verify_alpha_k_sequence,
)

k = 2
# (2 alpha)^t with alpha = 2: every new point is far from everything before it
E = exponential_adversary(30, 2.0)
print("exponential series OC bracket:", oc_bracket(E.points, k))

# each point must be taken, or the cost explodes; the online algorithm takes them all
run = run_online(E.points, OnlineConfig(k, SolverSpec("exact-1d-dp"), seed=0))
print(f"centers taken on the series: {run.n_centers} of {E.n}")

# the hard instance for an alpha-approximate online algorithm
alpha = 1358 * k**3  # approximation factor of the online algorithm with an exact solver
H = make_hard_sequence(64, alpha, k)
factor = hard_sequence_factor(64, alpha)
print(f"hard sequence is a ({factor:.1f}, {k})-sequence:", verify_alpha_k_sequence(H.points, range(64), factor, k).accepted)
taken = [run_online(H.points, OnlineConfig(k, SolverSpec("exact-1d-dp"), seed=s)).n_centers for s in range(20)]
print("fraction taken over 20 seeds:", sum(taken) / (20 * 64))

# how many centers OC alone forces on a worst-case ordering
for n in (64, 1024, 2**16):
    print(n, lower_bound_centers(n, k, n, alpha))
