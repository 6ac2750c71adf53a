"""
Bit pigeonhole and its search problem
=====================================

m rows of log n bits cannot all be distinct when m > n. Given any
assignment, the search problem asks for a clause it falsifies, which is the
same as naming two equal rows.
"""

import numpy as np

from nihcoll.bphp import (
    clause_pair,
    cnf_to_inequalities,
    collision_to_clause,
    generate_bphp,
    is_unsatisfiable,
    search_violated_clause,
    to_dimacs,
)
from nihcoll.collision import find_collision_oracle, search_bphp_to_coll

f = generate_bphp(4, 5)
print(to_dimacs(f).splitlines()[:4])
print("unsatisfiable:", is_unsatisfiable(f))
print("satisfiable with four pigeons:", not is_unsatisfiable(generate_bphp(4, 4)))

system = cnf_to_inequalities(f)
print("first inequality:", system.rows[0])

x = np.random.default_rng(3).integers(0, 2, size=f.num_vars)
idx = search_violated_clause(f, x)
print("assignment", x, "falsifies clause", idx, "=", clause_pair(idx, 4, 5))

# the same answer through the collision view, each row split between 2 players
inst = search_bphp_to_coll(x.reshape(5, 2), k=2)
pair = find_collision_oracle(inst)
print("collision", pair, "-> clause", collision_to_clause(4, 5, x, pair))
