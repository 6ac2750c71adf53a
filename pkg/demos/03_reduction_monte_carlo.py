"""
From disjointness to collisions
===============================

Each player turns its set into one column of a large matrix. Common elements
become colliding rows; random fake rows guarantee a collision always exists.
A collision solver cannot tell real from fake, so we repeat five times.
"""

import numpy as np

from nihcoll.reduction import (
    DisjInstance,
    build_artifact,
    count_real_collisions,
    decide_disjointness,
    run_trials,
    success_bound,
)

rng = np.random.default_rng(0)
disj = DisjInstance(2, 2, [[1, 0], [1, 1]])  # element 0 is common
art = build_artifact(disj, m=2, rng=rng)
print("matrix rows:", art.tilde_m, "alphabet:", art.tilde_ell)
print("fake rows at:", sorted(art.fake_row_indices))
print("real pairs, pairs touching a fake row:", count_real_collisions(art.matrix, art.fake_row_indices))

decision = decide_disjointness(disj, 2, "scan", rng)
print("outcomes:", decision.outcomes, "->", "DISJOINT" if decision.disjoint else "NOT-DISJOINT")
print("bits:", decision.transcript.total_bits)

# frequencies against the worst-case bounds
for solver in ("scan", "adversarial"):
    records = run_trials(2, 2, solver, master_seed=1, trials=1000)
    per_copy = sum(r.real_detected for r in records) / (5 * len(records))
    success = np.mean([not r.verdict_disjoint for r in records])
    print(f"{solver:12s} per copy {per_copy:.3f} (>= {2/9:.3f})  success {success:.3f} (>= {success_bound():.3f})")

# disjoint inputs are never misjudged
records = run_trials(2, 2, "scan", master_seed=2, trials=500, inputs="disjoint")
print("disjoint inputs judged DISJOINT:", all(r.verdict_disjoint for r in records))
