"""
Round-by-round collision finding
================================

k players, m > ell^k coordinates. Each player in turn keeps the largest
equal-valued slice of the live set; after k rounds two coordinates remain.
"""

from nihcoll.bounds import greedy_upper_bound
from nihcoll.collision import find_collision_oracle, greedy_protocol, random_instance

inst = random_instance(k=2, m=17, ell=4, seed=1)
print(inst.inputs)

run = greedy_protocol(inst)
print("live set sizes:", run.sizes)
for msg in run.transcript.messages:
    print(f"  player {msg.player} sends {msg.bits} bits ({msg.tag})")
print("collision:", run.pair, "total bits:", run.transcript.total_bits)
print("smallest collision by brute force:", find_collision_oracle(inst))

# cost as the universe grows, two and three players
for n in (16, 64, 256, 4096):
    print(n, greedy_upper_bound(n, 2), greedy_upper_bound(n, 3))
