from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from nihcoll.gadget import f0_matrix, f1_matrix
from nihcoll.gf2 import Gf2Matrix, enumeration_matrix, hstack, mul, rank


def span_rank(rows):
    """Rank by enumerating the whole row span; independent of elimination."""
    rows = [tuple(r) for r in rows]
    span = set()
    for coeffs in product((0, 1), repeat=len(rows)):
        acc = tuple(sum(c * r[i] for c, r in zip(coeffs, rows)) % 2 for i in range(len(rows[0])))
        span.add(acc)
    return len(span).bit_length() - 1


def bit_matrices(max_rows=16, max_cols=16, rows=None, cols=None):
    r = st.just(rows) if rows is not None else st.integers(0, max_rows)
    c = st.just(cols) if cols is not None else st.integers(0, max_cols)
    return st.tuples(r, c).flatmap(lambda rc: arrays(np.uint8, rc, elements=st.integers(0, 1)))


def test_mul_identity_with_f0():
    f0 = f0_matrix(3)
    assert mul(Gf2Matrix.identity(3), f0) == f0


def test_mul_b2_f1():
    out = mul(enumeration_matrix(2), f1_matrix(2))
    assert out.row_strings() == ["00", "00", "11", "11"]


def test_mul_b2_f0():
    out = mul(enumeration_matrix(2), f0_matrix(2))
    assert out.row_strings() == ["00", "11", "10", "01"]


def test_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        mul(Gf2Matrix.zeros(2, 3), Gf2Matrix.zeros(2, 3))


def test_rank_examples():
    assert rank(Gf2Matrix.zeros(3, 3)) == 0
    for k in range(1, 11):
        assert rank(f0_matrix(k)) == k
    for k in range(2, 11):
        assert rank(f1_matrix(k)) == k - 1


def test_enumeration_matrix():
    assert enumeration_matrix(1).row_strings() == ["0", "1"]
    assert enumeration_matrix(2).row_strings() == ["00", "01", "10", "11"]
    assert enumeration_matrix(3).row_bits(5) == (1, 0, 1)
    assert enumeration_matrix(20).rows == 1 << 20
    for bad in (0, 21):
        with pytest.raises(ValueError):
            enumeration_matrix(bad)


def test_invariants_rejected():
    with pytest.raises(ValueError):
        Gf2Matrix(1, 2, (4,))  # bit outside the column range
    with pytest.raises(ValueError):
        Gf2Matrix(2, 2, (1,))
    with pytest.raises(ValueError):
        Gf2Matrix.from_rows([[0, 2]])


def test_text_roundtrip_and_format():
    a = Gf2Matrix.from_rows(["101", "011"])
    assert a.dumps() == "2 3\n101\n011\n"
    assert Gf2Matrix.loads(a.dumps()) == a
    empty = Gf2Matrix.zeros(2, 0)
    assert Gf2Matrix.loads(empty.dumps()) == empty


def test_hstack_and_access():
    a = Gf2Matrix.from_rows(["10", "01"])
    b = Gf2Matrix.from_rows(["1", "1"])
    c = hstack([a, b])
    assert c.row_strings() == ["101", "011"]
    assert c[1, 2] == 1 and c[0, 1] == 0
    assert c.column(2) == (1, 1)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(0, 16), st.integers(0, 16), st.integers(0, 16), st.integers(0, 16), st.data())
def test_mul_matches_integer_product_and_is_associative(p, q, r, s, data):
    a = data.draw(bit_matrices(rows=p, cols=q))
    b = data.draw(bit_matrices(rows=q, cols=r))
    c = data.draw(bit_matrices(rows=r, cols=s))
    A, B, C = (Gf2Matrix.from_rows(x.tolist(), cols=x.shape[1]) for x in (a, b, c))
    assert np.array_equal(mul(A, B).to_array(), (a.astype(int) @ b.astype(int)) % 2)
    assert mul(mul(A, B), C) == mul(A, mul(B, C))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(bit_matrices())
def test_rank_equals_transpose_rank(a):
    A = Gf2Matrix.from_rows(a.tolist(), cols=a.shape[1])
    assert rank(A) == rank(A.transpose())
    assert rank(A) <= min(A.rows, A.cols)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(bit_matrices(max_rows=9, max_cols=9).filter(lambda x: x.shape[0] > 0 and x.shape[1] > 0))
def test_rank_matches_span_enumeration(a):
    assert rank(Gf2Matrix.from_rows(a.tolist(), cols=a.shape[1])) == span_rank(a.tolist())


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12), st.data())
def test_rank_of_product_is_bounded(p, q, r, data):
    B = Gf2Matrix.from_array(data.draw(bit_matrices(rows=p, cols=q)))
    F = Gf2Matrix.from_array(data.draw(bit_matrices(rows=q, cols=r)))
    assert rank(mul(B, F)) <= min(rank(B), rank(F))
