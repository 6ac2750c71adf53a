import math
from itertools import product

import numpy as np
import pytest

from nihcoll.collision import (
    CollInstance,
    NoMonochromaticSubset,
    find_collision_oracle,
    greedy_protocol,
    is_guaranteed,
    random_instance,
    search_bphp_to_coll,
    subset_cost,
)


def ceil_log2_comb(a, b):
    # independent of bit tricks: smallest e with 2^e >= C(a, b)
    c, e = math.comb(a, b), 0
    while 2**e < c:
        e += 1
    return e


def test_random_instance_single_symbol():
    inst = random_instance(3, 7, 1, seed=5)
    assert not inst.inputs.any()


def test_random_instance_deterministic():
    assert random_instance(2, 9, 4, seed=11) == random_instance(2, 9, 4, seed=11)
    assert random_instance(2, 9, 4, seed=11) != random_instance(2, 9, 4, seed=12)


def test_random_instance_uniform():
    inst = random_instance(2, 5000, 2, seed=3)
    ones = int(inst.inputs.sum())
    sigma = math.sqrt(10_000 * 0.25)
    assert abs(ones - 5000) <= 5 * sigma


def test_instance_validation():
    with pytest.raises(ValueError):
        CollInstance(2, 3, 2, np.zeros((3, 2)))
    with pytest.raises(ValueError):
        CollInstance(1, 2, 2, [[0, 2]])


def test_oracle_examples():
    assert find_collision_oracle(CollInstance(2, 4, 3, np.ones((2, 4), dtype=int))) == (0, 1)
    assert find_collision_oracle(CollInstance(1, 3, 2, [[0, 1, 0]])) == (0, 2)


def test_oracle_none_on_injective_instance():
    # every column of a k x ell^k table of all symbol tuples is distinct
    for k, ell in [(1, 3), (2, 2), (2, 3), (3, 2)]:
        cols = list(product(range(ell), repeat=k))
        inst = CollInstance(k, len(cols), ell, np.array(cols).T)
        assert find_collision_oracle(inst) is None


def test_is_guaranteed():
    mk = lambda k, ell, m: CollInstance(k, m, ell, np.zeros((k, m), dtype=int))
    assert is_guaranteed(mk(2, 2, 5))
    assert not is_guaranteed(mk(2, 2, 4))
    assert is_guaranteed(mk(3, 4, 65))


def test_greedy_single_player():
    inst = CollInstance(1, 3, 2, [[1, 0, 1]])
    run = greedy_protocol(inst)
    assert run.pair == (0, 2)
    assert run.sizes == (3, 2)
    assert run.transcript.total_bits == ceil_log2_comb(3, 2)


def test_greedy_k2_ell2():
    inst = random_instance(2, 5, 2, seed=0)
    run = greedy_protocol(inst)
    assert run.sizes == (5, 3, 2)
    assert inst.collides(*run.pair)


def test_greedy_k2_ell4_bits():
    inst = random_instance(2, 17, 4, seed=7)
    run = greedy_protocol(inst)
    assert run.sizes == (17, 5, 2)
    assert run.transcript.total_bits == ceil_log2_comb(17, 5) + ceil_log2_comb(5, 2)
    assert run.transcript.bits_per_player == [ceil_log2_comb(17, 5), ceil_log2_comb(5, 2)]
    assert run.transcript.is_consistent()


def test_greedy_picks_lexicographically_smallest_subset():
    # values 1 at {1, 2, 4}, 0 at {0, 3}: both classes are >= ceil(5/2)=3? only value 1
    inst = CollInstance(1, 5, 2, [[0, 1, 1, 0, 1]])
    assert greedy_protocol(inst).sizes == (5, 3)
    inst = CollInstance(1, 4, 2, [[1, 0, 0, 1]])
    assert greedy_protocol(inst).pair == (0, 3)


def test_greedy_rejects_unguaranteed():
    inst = CollInstance(2, 4, 2, [[0, 0, 1, 1], [0, 1, 0, 1]])
    with pytest.raises(NoMonochromaticSubset):
        greedy_protocol(inst)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("ell", [2, 3, 5, 8])
def test_greedy_always_verifies(k, ell):
    m = ell**k + 1
    for seed in range(100 if k < 3 else 30):
        inst = random_instance(k, m, ell, seed)
        run = greedy_protocol(inst)
        assert inst.collides(*run.pair)
        assert find_collision_oracle(inst) is not None
        sizes = run.sizes
        assert all(sizes[p] == -(-sizes[p - 1] // ell) for p in range(1, k + 1))
        assert sizes[-1] == 2


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("ell", range(2, 9))
def test_greedy_first_round_dominates(k, ell):
    m = ell**k + 1
    run = greedy_protocol(random_instance(k, m, ell, seed=1))
    assert run.transcript.total_bits <= 2 * (m / ell) * math.log2(m)


def test_subset_cost():
    for a in range(1, 30):
        for b in range(0, a + 1):
            assert subset_cost(a, b) == ceil_log2_comb(a, b)


def test_search_bphp_to_coll_examples():
    assert search_bphp_to_coll([[1, 0]], 2).inputs[:, 0].tolist() == [1, 0]
    inst = search_bphp_to_coll([[1, 0, 1, 1]], 2)
    assert inst.inputs[:, 0].tolist() == [2, 3] and inst.ell == 4
    inst = search_bphp_to_coll([[0, 1, 1, 0], [1, 1, 0, 0], [0, 1, 1, 0]], 2)
    assert inst.collides(0, 2) and not inst.collides(0, 1)
    with pytest.raises(ValueError):
        search_bphp_to_coll([[1, 0, 1]], 2)


def test_search_bphp_to_coll_preserves_equality():
    # n = 4: two bits per row, k in {1, 2}; every assignment with m <= 6 rows is too
    # many to list for m = 6 (4^6 = 4096 is fine)
    for m in range(2, 7):
        for rows in product(range(4), repeat=m):
            bits = [[(r >> 1) & 1, r & 1] for r in rows]
            for k in (1, 2):
                inst = search_bphp_to_coll(bits, k)
                for i in range(m):
                    for j in range(i + 1, m):
                        assert inst.collides(i, j) == (rows[i] == rows[j])
