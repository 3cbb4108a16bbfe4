"""GF(2) linear algebra: kernel powers, products, rank, serialization."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpolar.gf2 import (KERNEL, format_matrix, gf2_rank, kron_power, mat_mul,
                         mat_mul_f32, min_nonzero_row_weight, parse_matrix,
                         submatrix)


def _rank_oracle(m):
    """Rank by plain row reduction over a working copy."""
    a = np.array(m, dtype=np.uint8) % 2
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


def test_kron_power_base_cases():
    assert kron_power(0).tolist() == [[1]]
    assert np.array_equal(kron_power(1), KERNEL)
    expected2 = np.array([[1, 0, 0, 0],
                          [1, 1, 0, 0],
                          [1, 0, 1, 0],
                          [1, 1, 1, 1]], dtype=np.uint8)
    assert np.array_equal(kron_power(2), expected2)


@pytest.mark.parametrize("n", range(1, 7))
def test_kron_power_structure(n):
    g = kron_power(n)
    half = 1 << (n - 1)
    sub = kron_power(n - 1)
    assert np.array_equal(g[:half, :half], sub)
    assert np.array_equal(g[half:, half:], sub)
    assert not g[:half, half:].any()
    assert np.array_equal(g[half:, :half], sub)
    # lower triangular with unit diagonal, and involutory
    assert np.array_equal(g, np.tril(g))
    assert (np.diag(g) == 1).all()
    assert np.array_equal(mat_mul(g, g), np.eye(1 << n, dtype=np.uint8))


def test_kron_power_read_only():
    with pytest.raises(ValueError):
        kron_power(2)[0, 0] = 0
    with pytest.raises(ValueError):
        kron_power(-1)


@given(st.integers(0, 2**30 - 1), st.integers(0, 2**30 - 1))
@settings(max_examples=50)
def test_mat_mul_variants_agree(seed_a, seed_b):
    rng = np.random.default_rng(seed_a * 2**31 + seed_b)
    a = rng.integers(0, 2, size=(13, 17), dtype=np.uint8)
    b = rng.integers(0, 2, size=(17, 9), dtype=np.uint8)
    expected = np.zeros((13, 9), dtype=np.uint8)
    for i in range(13):
        for j in range(9):
            expected[i, j] = np.bitwise_xor.reduce(a[i] & b[:, j])
    assert np.array_equal(mat_mul(a, b), expected)
    assert np.array_equal(mat_mul_f32(a, b), expected)


def test_submatrix():
    m = np.arange(20, dtype=np.uint8).reshape(4, 5) % 2
    s = submatrix(m, [1, 3], [0, 2, 4])
    assert np.array_equal(s, m[np.ix_([1, 3], [0, 2, 4])])
    assert s.flags["C_CONTIGUOUS"]


def test_min_nonzero_row_weight():
    m = np.array([[0, 0, 0], [1, 1, 0], [1, 1, 1]], dtype=np.uint8)
    assert min_nonzero_row_weight(m) == 2
    with pytest.raises(ValueError):
        min_nonzero_row_weight(np.zeros((3, 3), dtype=np.uint8))


@given(st.integers(0, 2**30 - 1))
@settings(max_examples=50)
def test_gf2_rank_matches_row_reduction(seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 2, size=(rng.integers(1, 12), rng.integers(1, 12)),
                     dtype=np.uint8)
    assert gf2_rank(m) == _rank_oracle(m)


def test_gf2_rank_known_cases():
    assert gf2_rank(np.eye(5, dtype=np.uint8)) == 5
    assert gf2_rank(np.zeros((4, 4), dtype=np.uint8)) == 0
    assert gf2_rank(np.ones((3, 3), dtype=np.uint8)) == 1
    assert gf2_rank(kron_power(5)) == 32


@given(st.integers(0, 2**30 - 1))
@settings(max_examples=30)
def test_format_parse_round_trip(seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 2, size=(rng.integers(1, 9), rng.integers(1, 9)),
                     dtype=np.uint8)
    assert np.array_equal(parse_matrix(format_matrix(m)), m)


def test_parse_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_matrix("1 2\n0")
    with pytest.raises(ValueError):
        parse_matrix("1 2\n0x")
    with pytest.raises(ValueError):
        parse_matrix("2 2\n00")
