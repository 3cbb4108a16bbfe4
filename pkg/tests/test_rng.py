"""Counter-based streams: known answers, scalar/array agreement, balance."""
import numpy as np

from fcpolar.rng import (STREAM_CHANNEL, STREAM_COIN, _mix64, keyed,
                         keyed_array, keyed_bit, keyed_bit_array,
                         keyed_uniform, keyed_uniform_array)


def test_splitmix64_known_answers():
    # published finalizer outputs for seedings 0 and 1
    assert _mix64(0) == 0xE220A8397B1DCDAF
    assert _mix64(1) == 0x910A2DEC89025CC1


def test_keyed_is_pure():
    assert keyed(5, 1, 2, 3) == keyed(5, 1, 2, 3)
    assert keyed(5, 1, 2, 3) != keyed(6, 1, 2, 3)
    assert keyed(5, 1, 2, 3) != keyed(5, 1, 3, 2)


def test_array_matches_scalar():
    trials = np.arange(50, dtype=np.uint64)
    arr = keyed_array(9, STREAM_CHANNEL, trials, 17)
    for t in range(50):
        assert arr[t] == keyed(9, STREAM_CHANNEL, t, 17)
    bits = keyed_bit_array(9, STREAM_COIN, trials, 4, 0)
    for t in range(50):
        assert bits[t] == keyed_bit(9, STREAM_COIN, t, 4, 0)
    unif = keyed_uniform_array(9, STREAM_COIN, trials)
    for t in range(50):
        assert unif[t] == keyed_uniform(9, STREAM_COIN, t)


def test_broadcasting():
    rows = np.arange(6, dtype=np.uint64)[:, None]
    cols = np.arange(4, dtype=np.uint64)[None, :]
    grid = keyed_array(1, rows, cols)
    assert grid.shape == (6, 4)
    assert grid[2, 3] == keyed(1, 2, 3)


def test_streams_are_decoupled():
    trials = np.arange(1000, dtype=np.uint64)
    a = keyed_bit_array(0, STREAM_CHANNEL, trials)
    b = keyed_bit_array(0, STREAM_COIN, trials)
    assert not np.array_equal(a, b)


def test_bit_balance_and_uniform_range():
    trials = np.arange(20000, dtype=np.uint64)
    bits = keyed_bit_array(2, STREAM_COIN, trials)
    assert abs(bits.mean() - 0.5) < 0.02
    u = keyed_uniform_array(2, STREAM_CHANNEL, trials)
    assert np.all((0.0 <= u) & (u < 1.0))
    assert abs(u.mean() - 0.5) < 0.02
    # no collisions expected among a few thousand 64-bit values
    h = keyed_array(2, STREAM_CHANNEL, trials)
    assert len(np.unique(h)) == len(h)
