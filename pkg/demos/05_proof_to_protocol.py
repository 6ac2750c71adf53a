"""
From a refutation to a protocol
===============================

A tree-like refutation of size S becomes a threshold decision tree of depth
about log_{3/2} S, and each threshold query becomes a short k-party exchange.
"""

from nihcoll.bphp import all_assignments
from nihcoll.proofsim import (
    VariablePartition,
    depth_bound,
    dt_to_protocol,
    eval_dt,
    finds_violated_axioms,
    proof_to_dt,
    random_refutation,
    trivial_dt,
)

for shape in ("random", "balanced", "chain"):
    proof = random_refutation(num_vars=6, num_leaves=40, rng=5, shape=shape)
    dt = proof_to_dt(proof)
    print(f"{shape:9s} S={proof.size} depth={dt.depth} bound={depth_bound(proof.size)}",
          "trivial depth:", trivial_dt(proof.system).depth,
          "correct:", finds_violated_axioms(dt, proof.system))

proto = dt_to_protocol(dt, proof.system, VariablePartition.even(6, 3))
x = all_assignments(6)[37]
run = proto.run(x)
print("assignment", x, "axiom", run.axiom, "tree says", eval_dt(dt, proof.system, x))
print("queries", run.queries, "bits per player", run.transcript.bits_per_player)
