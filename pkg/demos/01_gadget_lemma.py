"""
The gadget matrices
===================

Two 2^k x k bit matrices whose column-wise mixtures have distinct rows,
except for the all-ones mixture where every row appears exactly twice.
"""

from nihcoll.gadget import column_replacement_rank, gadget_matrices, mix, verify_gadget

k = 3
pair = gadget_matrices(k)
print("M0 =\n", pair.m0.to_array())
print("M1 =\n", pair.m1.to_array())

# mix(b) takes column i from M1 when b_i = 1, else from M0
for b in [(0, 0, 0), (1, 0, 1), (1, 1, 1)]:
    rows = mix(pair, b).to_array()
    print(b, "distinct rows:", len({tuple(r) for r in rows}), "of", len(rows))

# the reason: every mixture except all-ones is B times a full-rank matrix
for s in [(), (0,), (0, 2), (0, 1, 2)]:
    print("replace columns", s, "-> rank", column_replacement_rank(k, s))

# exhaustive check for a range of k
for k in range(1, 9):
    print(verify_gadget(k).as_dict())

