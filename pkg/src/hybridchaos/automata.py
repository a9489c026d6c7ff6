"""Elementary cellular automata and the second-order reversible variant used
for diffusion.

Cell i of the next generation is bit ``4*left + 2*centre + right`` of the
rule number, with periodic boundaries.  The reversible step maps a pair of
generations (x, y) to (y, eca_step(y) XOR x) and is undone by
(x', y') -> (eca_step(x') XOR y', x').
"""

from __future__ import annotations

import numpy as np

from .chaos import CASE_I, ChaosConfig, chi


def _check_rule(rule) -> np.ndarray:
    rule = np.asarray(rule, dtype=np.int64)
    if np.any((rule < 0) | (rule > 255)):
        raise ValueError("rule numbers must lie in 0..255")
    return rule


def _eca_columns(V: np.ndarray, rules: np.ndarray) -> np.ndarray:
    # V: (length, k) bit columns, each evolved under its own rule
    left = np.roll(V, 1, axis=0)
    right = np.roll(V, -1, axis=0)
    idx = (left << 2) | (V << 1) | right
    return ((rules[None, :] >> idx) & 1).astype(np.uint8)


def eca_step(v, rule: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.ndim != 1 or v.size < 3:
        raise ValueError("an elementary CA needs a 1-D vector of length >= 3")
    rules = _check_rule([rule])
    return _eca_columns(v[:, None], rules)[:, 0]


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.ndim != 1 or x.size < 3:
        raise ValueError("reversible CA inputs need length >= 3")
    return x, y


def phi(x, y, rule: int, rep: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """``rep`` steps of the second-order CA; x is the older generation."""
    x, y = _pair(x, y)
    if rep < 1:
        raise ValueError("rep must be >= 1")
    for _ in range(rep):
        x, y = y, eca_step(y, rule) ^ x
    return x, y


def phi_inv(x, y, rule: int, rep: int = 1) -> tuple[np.ndarray, np.ndarray]:
    x, y = _pair(x, y)
    if rep < 1:
        raise ValueError("rep must be >= 1")
    for _ in range(rep):
        x, y = eca_step(x, rule) ^ y, x
    return x, y


def rules_from_chaos(q, r: float, count: int, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    """Rule numbers from the two-decimal truncation of the chaotic stream.

    A truncated value 0.ab becomes rule ab, so rules lie in 0..99.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    # floor(v * 100) directly: floor(v*100)/100*100 can round down a unit
    return np.floor(chi(q, r, count, cfg) * 100.0).astype(np.int64) % 256


def wrapped_diagonals(s: int, c: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (rows, cols), each s x c; column d lists wrapped diagonal d."""
    i = np.arange(s)[:, None]
    d = np.arange(c)[None, :]
    return np.broadcast_to(i, (s, c)), (i + d) % c


def _check_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.uint8)
    if M.ndim != 2:
        raise ValueError("expected a 2-D bit matrix")
    s, c = M.shape
    if s < 3:
        raise ValueError(f"need at least 3 rows, got {s}")
    if c % 2:
        raise ValueError(f"need an even column count, got {c}")
    if M.size and M.max() > 1:
        raise ValueError("matrix entries must be 0/1")
    return M


def ca_encrypt_matrix(M, q, r: float, cfg: ChaosConfig = CASE_I, rules=None) -> np.ndarray:
    """Diagonal pair 2t, 2t+1 goes through one reversible step with rule t."""
    M = _check_matrix(M)
    s, c = M.shape
    if rules is None:
        rules = rules_from_chaos(q, r, c // 2, cfg)
    rules = _check_rule(rules)
    rows, cols = wrapped_diagonals(s, c)
    D = M[rows, cols]
    X, Y = D[:, 0::2].copy(), D[:, 1::2].copy()
    D[:, 0::2], D[:, 1::2] = Y, _eca_columns(Y.astype(np.int64), rules) ^ X
    out = np.empty_like(M)
    out[rows, cols] = D
    return out


def ca_decrypt_matrix(M, q, r: float, cfg: ChaosConfig = CASE_I, rules=None) -> np.ndarray:
    M = _check_matrix(M)
    s, c = M.shape
    if rules is None:
        rules = rules_from_chaos(q, r, c // 2, cfg)
    rules = _check_rule(rules)
    rows, cols = wrapped_diagonals(s, c)
    D = M[rows, cols]
    X, Y = D[:, 0::2].copy(), D[:, 1::2].copy()
    D[:, 0::2], D[:, 1::2] = _eca_columns(X.astype(np.int64), rules) ^ Y, X
    out = np.empty_like(M)
    out[rows, cols] = D
    return out
