"""Density evolution: pushforward tables, polarization recursion, exactness."""
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fcpolar.codes import encode, input_word
from fcpolar.de import (channel_pmf, de_run, point_mass, psi_boxdot,
                        psi_boxplus)
from fcpolar.decoders import bp_scc_check, build_hypothesis, make_graph
from fcpolar.symbols import BOX_DOT, BOX_PLUS, ERASURE

pmf_strategy = st.lists(
    st.floats(min_value=0.0, max_value=1.0), min_size=4, max_size=4
).filter(lambda v: sum(v) > 0).map(lambda v: np.array(v) / sum(v))


@given(pmf_strategy, pmf_strategy)
def test_transfer_functions_preserve_mass(p1, p2):
    for out in (psi_boxplus(p1, p2), psi_boxdot(p1, p2, 0),
                psi_boxdot(p1, p2, 1)):
        assert np.all(out >= -1e-12)
        assert abs(out.sum() - 1.0) < 1e-9


def test_point_masses_reproduce_operator_tables():
    for a in range(4):
        for c in range(4):
            plus = psi_boxplus(point_mass(a), point_mass(c))
            table_plus = np.asarray(BOX_PLUS)
            table_dot = np.asarray(BOX_DOT)
            assert np.array_equal(plus, point_mass(table_plus[a, c]))
            for b in (0, 1):
                dot = psi_boxdot(point_mass(a), point_mass(c), b)
                expected = table_dot[table_plus[a, b], c]
                assert np.array_equal(dot, point_mass(expected))


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_channel_combines_match_closed_forms(p):
    ch = channel_pmf(p)
    plus = psi_boxplus(ch, ch)
    np.testing.assert_allclose(
        plus, [(1 - p) ** 2, 0.0, 2 * p - p * p, 0.0], atol=1e-12)
    dot = psi_boxdot(ch, ch, 0)
    np.testing.assert_allclose(dot, [1 - p * p, 0.0, p * p, 0.0], atol=1e-12)


def _polarized_erasure(p, i, n):
    eps = p
    for t in range(n - 1, -1, -1):
        eps = eps * eps if (i >> t) & 1 else 2 * eps - eps * eps
    return eps


@pytest.mark.parametrize("p", [0.1, 0.35, 0.5, 0.8])
def test_sc_per_bit_is_half_polarized_erasure(ex1, nr64, p):
    for spec in (ex1, nr64):
        per_bit, _ = de_run(spec, "sc", p)
        oracle = np.array([_polarized_erasure(p, i, spec.n) / 2
                           for i in spec.A])
        np.testing.assert_allclose(per_bit, oracle, atol=1e-12)


def _exact_wrong_pass(spec, p, use_fccn, i_max):
    """Enumerate every message and erasure pattern; average the wrong-
    hypothesis pass rate with a genie prefix. Tractable for N = 8."""
    out = []
    msgs = [np.array(m, dtype=np.uint8)
            for m in itertools.product((0, 1), repeat=spec.K)]
    patterns = list(itertools.product((0, 1), repeat=spec.N))
    for i in spec.A:
        total = 0.0
        for msg in msgs:
            u = input_word(spec, msg)
            x = encode(spec, msg)
            hyp = build_hypothesis(spec, u[:i], i, 1 - int(u[i]))
            for pat in patterns:
                w = 1.0
                for e in pat:
                    w *= p if e else (1 - p)
                y = np.where(np.array(pat, dtype=bool), ERASURE,
                             x).astype(np.uint8)
                g = make_graph(spec, y, hyp, use_fccn)
                rep = bp_scc_check(spec, g, hyp, i_max=i_max,
                                   use_fccn=use_fccn)
                total += w * rep.r
        out.append(0.5 * total / len(msgs))
    return np.array(out)


def test_scc_per_bit_exact_on_small_code(ex1):
    # the instant graph without FCCNs is a tree over independent channel
    # leaves, so the evolved leaf PMF is the true leaf distribution and
    # the per-bit formula is exact, not just asymptotic
    for p in (0.3, 0.5):
        per_bit, _ = de_run(ex1, "scc", p)
        oracle = _exact_wrong_pass(ex1, p, use_fccn=False, i_max=1)
        np.testing.assert_allclose(per_bit, oracle, atol=1e-12)


def test_fccn_de_direction_on_small_code(ex1):
    # folding the check message is approximate (neighbor snapshots are
    # reused, so correlated refutations compound): the evolved estimate
    # must not exceed the true rate here, and only bit 3 (the one with
    # an attached check) may move away from the plain-span value
    p = 0.5
    pb_scc, _ = de_run(ex1, "scc", p)
    pb_bp, _ = de_run(ex1, "bpscc1", p)
    oracle = _exact_wrong_pass(ex1, p, use_fccn=True, i_max=1)
    assert pb_bp[0] < oracle[0]
    np.testing.assert_allclose(pb_bp[1:], pb_scc[1:], atol=1e-12)
    np.testing.assert_allclose(oracle[1:], pb_scc[1:], atol=1e-12)


def test_frozen_scc_values_at_half(ex1):
    per_bit, bler = de_run(ex1, "scc", 0.5)
    np.testing.assert_allclose(
        per_bit, [0.142578125, 0.060546875, 0.001953125], atol=1e-15)
    expected = 1.0 - np.prod(1.0 - per_bit)
    assert abs(bler - expected) < 1e-15


@pytest.mark.parametrize("decoder", ["sc", "scc", "bpscc1"])
def test_endpoints(ex1, nr64, decoder):
    for spec in (ex1, nr64):
        pb0, b0 = de_run(spec, decoder, 0.0)
        assert np.all(pb0 == 0.0) and b0 == 0.0
        pb1, b1 = de_run(spec, decoder, 1.0)
        np.testing.assert_allclose(pb1, 0.5, atol=1e-12)
        np.testing.assert_allclose(b1, 1.0 - 2.0 ** (-spec.K), atol=1e-12)


@pytest.mark.parametrize("decoder", ["sc", "scc"])
def test_per_bit_monotone_in_p(ex1, decoder):
    grid = np.linspace(0.05, 0.95, 10)
    prev = None
    for p in grid:
        per_bit, _ = de_run(ex1, decoder, p)
        if prev is not None:
            assert np.all(per_bit >= prev - 1e-12)
        prev = per_bit


def test_span_and_fccn_only_help(nr64):
    for p in (0.35, 0.5):
        pb_sc, bler_sc = de_run(nr64, "sc", p)
        pb_scc, bler_scc = de_run(nr64, "scc", p)
        pb_bp, bler_bp = de_run(nr64, "bpscc1", p)
        assert np.all(pb_scc <= pb_sc + 1e-12)
        assert np.all(pb_bp <= pb_scc + 1e-12)
        assert bler_bp <= bler_scc <= bler_sc


def test_input_validation(ex1):
    with pytest.raises(ValueError):
        de_run(ex1, "sc", -0.1)
    with pytest.raises(ValueError):
        de_run(ex1, "sc", 1.5)
    with pytest.raises(ValueError):
        de_run(ex1, "scl", 0.5)
