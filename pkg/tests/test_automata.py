import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from hybridchaos.automata import (
    ca_decrypt_matrix, ca_encrypt_matrix, eca_step, phi, phi_inv, rules_from_chaos,
    wrapped_diagonals,
)
from hybridchaos.chaos import CASE_I, CASE_II

bits = st.lists(st.integers(0, 1), min_size=3, max_size=40)


def test_null_and_identity_rules():
    rng = np.random.default_rng(0)
    v = rng.integers(0, 2, 17)
    assert not eca_step(v, 0).any()
    assert np.array_equal(eca_step(v, 204), v)


def test_rule30_golden():
    v = [0, 1, 0, 1, 1, 1, 0]
    expected = [1, 1, 0, 1, 0, 0, 1]
    assert oracle.rule30_step(v) == expected
    assert eca_step(v, 30).tolist() == expected


@settings(max_examples=200, deadline=None)
@given(bits)
def test_rule30_matches_truth_table(v):
    assert eca_step(v, 30).tolist() == oracle.rule30_step(v)


@settings(max_examples=200, deadline=None)
@given(bits, st.integers(0, 255))
def test_eca_matches_rule_bits(v, rule):
    n = len(v)
    want = [(rule >> (4 * v[(i - 1) % n] + 2 * v[i] + v[(i + 1) % n])) & 1 for i in range(n)]
    assert eca_step(v, rule).tolist() == want


def test_eca_errors():
    with pytest.raises(ValueError):
        eca_step([0, 1], 30)
    with pytest.raises(ValueError):
        eca_step([0, 1, 1], 256)


def test_phi_examples():
    rng = np.random.default_rng(1)
    x, y = rng.integers(0, 2, (2, 9))
    a, b = phi(x, y, 0)
    assert np.array_equal(a, y) and np.array_equal(b, x)
    a, b = phi_inv(x, y, 0)
    assert np.array_equal(a, y) and np.array_equal(b, x)

    zero = [0] * 7
    y = [0, 1, 0, 1, 1, 1, 0]
    a, b = phi(zero, y, 30)
    assert a.tolist() == y
    assert b.tolist() == [1, 1, 0, 1, 0, 0, 1]
    a, b = phi_inv([0, 1, 0, 1, 1, 1, 0], [1, 1, 0, 1, 0, 0, 1], 30)
    assert a.tolist() == zero and b.tolist() == y


def test_phi_errors():
    with pytest.raises(ValueError):
        phi([0, 1, 0], [0, 1, 0, 1], 30)
    with pytest.raises(ValueError):
        phi([0, 1, 0], [0, 1, 1], 30, rep=0)


def test_phi_reversible_all_rules():
    rng = np.random.default_rng(2)
    for rule in range(256):
        for rep in range(1, 5):
            n = int(rng.integers(3, 33))
            x, y = rng.integers(0, 2, (2, n))
            a, b = phi_inv(*phi(x, y, rule, rep), rule, rep)
            assert np.array_equal(a, x) and np.array_equal(b, y), (rule, rep)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 40), st.integers(0, 255), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_phi_roundtrip_property(n, rule, rep, seed):
    x, y = np.random.default_rng(seed).integers(0, 2, (2, n))
    a, b = phi_inv(*phi(x, y, rule, rep), rule, rep)
    assert np.array_equal(a, x) and np.array_equal(b, y)


def test_rules_from_chaos_mapping():
    # golden rules follow from the oracle-checked psi golden in test_chaos:
    # two columns, rows concatenated, two-decimal truncation
    from test_chaos import PSI_I
    stream = [v for row in PSI_I for v in row[:2]]
    expected = [math.floor(v * 100) for v in stream]
    got = rules_from_chaos((0.3,) * 4, 0.5, 8, CASE_I)
    assert got.tolist() == expected == [2, 47, 28, 47, 9, 99, 53, 0]
    assert np.all((got >= 0) & (got <= 99))
    with pytest.raises(ValueError):
        rules_from_chaos((0.3,) * 4, 0.5, 0)


def test_rules_range_long():
    rules = rules_from_chaos((0.12, 0.34, 0.56, 0.78), 0.9, 4000, CASE_II)
    assert rules.min() >= 0 and rules.max() <= 99
    assert len(np.unique(rules)) > 90


def test_wrapped_diagonals_partition():
    s, c = 5, 6
    rows, cols = wrapped_diagonals(s, c)
    cover = np.zeros((s, c), dtype=int)
    for d in range(c):
        for i in range(s):
            cover[rows[i, d], cols[i, d]] += 1
            assert cols[i, d] == (i + d) % c
    assert np.all(cover == 1)


def test_ca_encrypt_shape_and_roundtrip_6x8():
    rng = np.random.default_rng(3)
    M = rng.integers(0, 2, (6, 8)).astype(np.uint8)
    E = ca_encrypt_matrix(M, (0.1, 0.2, 0.3, 0.4), 0.7)
    assert E.shape == M.shape
    assert set(np.unique(E)) <= {0, 1}
    assert np.array_equal(ca_decrypt_matrix(E, (0.1, 0.2, 0.3, 0.4), 0.7), M)


def test_ca_roundtrip_500():
    rng = np.random.default_rng(4)
    for _ in range(500):
        s = int(rng.integers(3, 20))
        c = 2 * int(rng.integers(1, 20))
        M = rng.integers(0, 2, (s, c)).astype(np.uint8)
        q = tuple(rng.random(4))
        r = float(rng.uniform(0.05, 1.2))
        E = ca_encrypt_matrix(M, q, r)
        assert np.array_equal(ca_decrypt_matrix(E, q, r), M)


def test_ca_matches_pairwise_phi():
    rng = np.random.default_rng(5)
    s, c = 7, 10
    M = rng.integers(0, 2, (s, c)).astype(np.uint8)
    rules = rng.integers(0, 256, c // 2)
    E = ca_encrypt_matrix(M, None, 0.5, rules=rules)
    rows, cols = wrapped_diagonals(s, c)
    for t in range(c // 2):
        X, Y = M[rows[:, 2 * t], cols[:, 2 * t]], M[rows[:, 2 * t + 1], cols[:, 2 * t + 1]]
        a, b = phi(X, Y, int(rules[t]))
        assert np.array_equal(E[rows[:, 2 * t], cols[:, 2 * t]], a)
        assert np.array_equal(E[rows[:, 2 * t + 1], cols[:, 2 * t + 1]], b)


def test_ca_matrix_errors():
    q = (0.1, 0.2, 0.3, 0.4)
    with pytest.raises(ValueError):
        ca_encrypt_matrix(np.zeros((2, 4)), q, 0.5)
    with pytest.raises(ValueError):
        ca_encrypt_matrix(np.zeros((4, 5)), q, 0.5)
    with pytest.raises(ValueError):
        ca_encrypt_matrix(np.full((4, 4), 2), q, 0.5)
