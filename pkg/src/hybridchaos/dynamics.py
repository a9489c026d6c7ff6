"""Chaos diagnostics: Lyapunov spectrum, bifurcation scans, cobweb traces
and sequence histograms.  Every routine returns plain arrays/rows that the
CLI writes out as CSV."""

from __future__ import annotations

import warnings
from typing import Callable, Union

import numpy as np

from .chaos import GUARD_CONSTANT, ChaosConfig, branches, get_config, iterate, step

StateMap = Callable[[tuple, float], tuple]
System = Union[ChaosConfig, str, StateMap]


class LyapunovQualityWarning(UserWarning):
    pass


def _resolve(system: System) -> tuple[StateMap, Callable | None]:
    if callable(system) and not isinstance(system, ChaosConfig):
        return system, None
    cfg = get_config(system)
    return (lambda s, r: step(s, r, cfg)), (lambda s, r: branches(s, r, cfg))


def _wrapped_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # nearest-image difference on the unit torus
    d = a - b
    return d - np.round(d)


def jacobian(fmap: StateMap, s: np.ndarray, r: float, h: float = 1e-7,
             branch_of: Callable | None = None) -> np.ndarray:
    """Finite-difference Jacobian of ``fmap`` at ``s`` on the unit torus.

    Central differences by default; when ``branch_of`` reports that the
    stencil straddles a branch switch, the one-sided difference on the side
    that keeps the centre's branch is used instead.
    """
    s = np.asarray(s, dtype=float)
    dim = s.size
    f0 = np.asarray(fmap(tuple(s), r), dtype=float)
    b0 = branch_of(tuple(s), r) if branch_of is not None else None
    J = np.empty((dim, dim))
    for k in range(dim):
        sp = s.copy()
        sm = s.copy()
        sp[k] = (s[k] + h) % 1.0
        sm[k] = (s[k] - h) % 1.0
        fp = np.asarray(fmap(tuple(sp), r), dtype=float)
        fm = np.asarray(fmap(tuple(sm), r), dtype=float)
        if b0 is not None:
            same_p = branch_of(tuple(sp), r) == b0
            same_m = branch_of(tuple(sm), r) == b0
            if same_p and not same_m:
                J[:, k] = _wrapped_diff(fp, f0) / h
                continue
            if same_m and not same_p:
                J[:, k] = _wrapped_diff(f0, fm) / h
                continue
        J[:, k] = _wrapped_diff(fp, fm) / (2.0 * h)
    return J


def lyapunov_spectrum(system: System, r: float, gamma, n: int = 10_000,
                      h: float = 1e-7, transient: int = 1000,
                      return_guard_count: bool = False):
    """Lyapunov exponents by QR re-orthonormalisation every step.

    ``system`` is a preset name, a :class:`ChaosConfig`, or any callable
    ``(state, r) -> state`` on the unit torus (used for test maps).
    Exponents are returned sorted in descending order.
    """
    if n < 1000:
        raise ValueError("n must be >= 1000")
    fmap, branch_of = _resolve(system)
    s = tuple(float(v) for v in gamma)
    for _ in range(transient):
        s = tuple(fmap(s, r))
    dim = len(s)
    Q = np.eye(dim)
    total = np.zeros(dim)
    guarded = 0
    for _ in range(n):
        J = jacobian(fmap, np.array(s), r, h, branch_of)
        bad = ~np.isfinite(J)
        if bad.any():
            guarded += 1
            J[bad] = GUARD_CONSTANT
        Q, R = np.linalg.qr(J @ Q)
        d = np.abs(np.diag(R))
        if np.any(d == 0.0):
            guarded += 1
            d = np.where(d == 0.0, GUARD_CONSTANT, d)
        total += np.log(d)
        s = tuple(fmap(s, r))
    if guarded > 0.01 * n:
        warnings.warn(f"{guarded} of {n} Jacobians needed the non-finite guard",
                      LyapunovQualityWarning, stacklevel=2)
    lam = np.sort(total / n)[::-1]
    if return_guard_count:
        return lam, guarded
    return lam


def bifurcation_scan(system: System, gamma, r_lo: float, r_hi: float, r_steps: int,
                     transient: int = 1000, keep: int = 200) -> np.ndarray:
    """Rows of (r, component, value); component is 0..3 for x, y, z, w."""
    if not r_lo < r_hi:
        raise ValueError("need r_lo < r_hi")
    if transient < 1 or keep < 1 or r_steps < 1:
        raise ValueError("transient, keep and r_steps must be >= 1")
    cfg = get_config(system)
    rows = []
    for r in np.linspace(r_lo, r_hi, r_steps):
        seq = iterate(gamma, r, transient + keep, cfg)[:, transient:]
        for comp in range(4):
            block = np.empty((keep, 3))
            block[:, 0] = r
            block[:, 1] = comp
            block[:, 2] = seq[comp]
            rows.append(block)
    return np.vstack(rows)


def cobweb_trace(system: System, r: float, gamma, n: int) -> np.ndarray:
    """Consecutive pairs (x_i, x_{i+1}) for i = 1..n-1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    x = iterate(gamma, r, n, get_config(system))[0]
    return np.column_stack([x[:-1], x[1:]])


def sequence_histogram(values, bins: int = 100) -> np.ndarray:
    values = np.asarray(values, dtype=float).ravel()
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if values.size and (values.min() < 0.0 or values.max() >= 1.0 or not np.isfinite(values).all()):
        raise ValueError("values must lie in [0, 1)")
    idx = np.minimum((values * bins).astype(np.int64), bins - 1)
    return np.bincount(idx, minlength=bins)


def histogram_rows(values, bins: int = 100) -> np.ndarray:
    counts = sequence_histogram(values, bins)
    edges = np.arange(bins + 1) / bins
    return np.column_stack([edges[:-1], edges[1:], counts])


def has_short_cycle(values, max_period: int = 16) -> bool:
    v = np.asarray(values)
    return any(np.array_equal(v[p:], v[:-p]) for p in range(1, max_period + 1))


def doubling_map(s, r):
    """x -> 2x mod 1 in the first coordinate, identity elsewhere."""
    x = (2.0 * s[0]) % 1.0
    return (x, *s[1:])


def identity_map(s, r):
    return tuple(s)


__all__ = [
    "LyapunovQualityWarning", "jacobian", "lyapunov_spectrum", "bifurcation_scan",
    "cobweb_trace", "sequence_histogram", "histogram_rows", "has_short_cycle",
    "doubling_map", "identity_map",
]
