"""Four-dimensional hybrid chaotic system.

Each of the four "combination boxes" produces one component of the next
state as

    alpha * f(F(r, u)) + g(r, ...) + h((beta - r) * t / 2)   (mod 1)

where F is a Sin or Logistic base map, f an outer function, g a coupling
term over current (and already updated) components and h a tent-like arm
whose argument is ``t`` or ``1 - t`` depending on which side of 0.5 the
branch selector falls.  Boxes are evaluated in the order x, y, z, w.

All arithmetic is IEEE double precision through :mod:`math` (the platform
C libm).  Non-finite intermediates are repaired deterministically, see
:func:`_repair`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

GUARD_CONSTANT = 0.6180339887498949

_PI = math.pi
_MATH_ERRORS = (ValueError, OverflowError, ZeroDivisionError)


class ChaosState(NamedTuple):
    x: float
    y: float
    z: float
    w: float


def frac(v: float) -> float:
    """Fractional part wrapped into [0, 1), also for negative ``v``."""
    t = v % 1.0
    # -1e-20 % 1.0 rounds to exactly 1.0
    return 0.0 if t >= 1.0 else t


def _repair(partial: float) -> float:
    return frac(abs(partial) + GUARD_CONSTANT)


# --------------------------------------------------------------------------
# base maps

def logistic(r: float, u: float) -> float:
    return 4.0 * r * u * (1.0 - u)


def sine(r: float, u: float) -> float:
    return r * math.sin(_PI * u)


BASE_MAPS: dict[str, Callable[[float, float], float]] = {
    "logistic": logistic,
    "sin": sine,
}


def base_map(kind: str, r: float, u: float) -> float:
    return BASE_MAPS[kind](r, u)


# --------------------------------------------------------------------------
# function catalogs

def _cot(p: float) -> float:
    return 1.0 / math.tan(p)


def _coth(p: float) -> float:
    return 1.0 / math.tanh(p)


OUTER: dict[str, Callable[[float], float]] = {
    "id": lambda p: p,
    "sin(pi*p)": lambda p: math.sin(_PI * p),
    "cos": math.cos,
    "cosh": math.cosh,
    "cot": _cot,
    "exp(pi*p)": lambda p: math.exp(_PI * p),
    "cos(sin(pi*p))": lambda p: math.cos(math.sin(_PI * p)),
    "sin": math.sin,
}

ARMS: dict[str, Callable[[float], float]] = {
    "sin(2p)": lambda p: math.sin(2.0 * p),
    "4p": lambda p: 4.0 * p,
    "exp(2p)": lambda p: math.exp(2.0 * p),
    "cot(p)": _cot,
    "cot(4p)": lambda p: _cot(4.0 * p),
    "cos(20p)": lambda p: math.cos(20.0 * p),
    "cosh(2p)": lambda p: math.cosh(2.0 * p),
    "exp(4p)": lambda p: math.exp(4.0 * p),
    "coth(p)": _coth,
}

# Couplers take (r, x, y, z, w, x1, y1, z1): the current state followed by
# the components already updated in this iteration (unused slots are 0.0).
Coupler = Callable[[float, float, float, float, float, float, float, float], float]

COUPLERS: dict[str, Coupler] = {
    "zero": lambda r, x, y, z, w, x1, y1, z1: 0.0,
    # case i
    "i:x1": lambda r, x, y, z, w, x1, y1, z1: (
        15.0 * math.tanh(r * x + z) + math.sin(w + 12.0 * math.cos(r * x))),
    "i:x2": lambda r, x, y, z, w, x1, y1, z1: (
        -7.0 * r * y + math.exp(1.0 + 2.0 * w) + z + 7.0 * math.log(_PI * r * x)),
    "i:y1": lambda r, x, y, z, w, x1, y1, z1: 2.0 * math.tan(r * x + y + 2.0 * z + w),
    "i:y2": lambda r, x, y, z, w, x1, y1, z1: z + w + 14.0 * math.exp(20.0 * r * x),
    "i:z1": lambda r, x, y, z, w, x1, y1, z1: 2.0 * math.tan(r * x + y) + w + z,
    "i:z2": lambda r, x, y, z, w, x1, y1, z1: (
        14.0 * math.exp(20.0 * r * x + w) + math.sin(z)),
    "i:w1": lambda r, x, y, z, w, x1, y1, z1: 2.0 * math.tan(r * x + y + z) + w,
    "i:w2": lambda r, x, y, z, w, x1, y1, z1: 14.0 * math.exp(20.0 * r * x + w) + z,
    # case ii
    "ii:x1": lambda r, x, y, z, w, x1, y1, z1: (
        15.0 * math.tan(r * w + x + 2.0 * z) + math.sin(w) + 12.0 * math.cos(r * x)),
    "ii:x2": lambda r, x, y, z, w, x1, y1, z1: (
        7.0 * math.sin(r * y + w) - 7.0 * r * y + x + 2.0 * w + z - 1.0),
    "ii:y1": lambda r, x, y, z, w, x1, y1, z1: 14.0 * math.cos(20.0 * r * x + x1),
    # no published formula; provisional mean of the box-2 arguments
    "ii:y2": lambda r, x, y, z, w, x1, y1, z1: (r + x + x1 + y + z + w) / 6.0,
    "ii:z1": lambda r, x, y, z, w, x1, y1, z1: (
        math.tan(x1 + y1) + w * z + 2.0 * (r * x + y)),
    "ii:z2": lambda r, x, y, z, w, x1, y1, z1: (
        14.0 * (r * x + w) + y1 + math.sin(z)),
    "ii:w1": lambda r, x, y, z, w, x1, y1, z1: (
        14.0 * math.cos(20.0 * r * x + x1) + math.log(x + w)),
    "ii:w2": lambda r, x, y, z, w, x1, y1, z1: (
        14.0 * math.sinh(x + r * x1 + w) + z + math.sin(z1 + y1)),
}


# --------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class ChaosConfig:
    """Parameters of the four boxes.

    Every 8-tuple is ordered (x1, x2, y1, y2, z1, z2, w1, w2) where the
    digit is the branch (1: selector < 0.5, 2: selector >= 0.5).
    ``xi_next`` says, for the y, z and w boxes, whether the branch
    selector is the previous box's updated component (True) or its
    current one (False).
    """

    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    base_maps: tuple[str, ...]
    outer_maps: tuple[str, ...]
    couplers: tuple[str, ...]
    tent_arms: tuple[str, ...]
    xi_next: tuple[bool, bool, bool]
    name: str = "custom"

    def __post_init__(self) -> None:
        for field, catalog in (
            ("alphas", None),
            ("betas", None),
            ("base_maps", BASE_MAPS),
            ("outer_maps", OUTER),
            ("couplers", COUPLERS),
            ("tent_arms", ARMS),
        ):
            values = getattr(self, field)
            if len(values) != 8:
                raise ValueError(f"{field} needs 8 entries, got {len(values)}")
            if catalog is not None:
                unknown = [v for v in values if v not in catalog]
                if unknown:
                    raise ValueError(f"unknown {field} entries: {unknown}")
        if len(self.xi_next) != 3:
            raise ValueError("xi_next needs 3 entries")


CASE_I = ChaosConfig(
    name="case-i",
    alphas=(1, 16, 10, 20, 10, 20, 10, 20),
    betas=(6, 2, 50, 30, 50, 30, 50, 30),
    base_maps=("logistic", "sin", "sin", "sin", "logistic", "sin", "sin", "logistic"),
    outer_maps=("cosh", "cot", "id", "sin(pi*p)", "id", "exp(pi*p)", "id", "sin(pi*p)"),
    couplers=("i:x1", "i:x2", "i:y1", "i:y2", "i:z1", "i:z2", "i:w1", "i:w2"),
    tent_arms=("sin(2p)", "4p", "exp(2p)", "cot(p)", "exp(2p)", "cot(4p)", "exp(2p)", "cot(4p)"),
    xi_next=(False, False, False),
)

CASE_II = ChaosConfig(
    name="case-ii",
    alphas=(7, 12, 14, 14, 3, 15, 15, 10),
    betas=(69, 28, 68, 36, 33, 2, 5, 7),
    base_maps=("logistic", "sin", "sin", "logistic", "logistic", "logistic", "logistic", "logistic"),
    outer_maps=("cos", "id", "id", "id", "sin", "exp(pi*p)", "sin(pi*p)", "cos(sin(pi*p))"),
    couplers=("ii:x1", "ii:x2", "ii:y1", "ii:y2", "ii:z1", "ii:z2", "ii:w1", "ii:w2"),
    tent_arms=("sin(2p)", "4p", "exp(2p)", "4p", "cosh(2p)", "coth(p)", "exp(4p)", "coth(p)"),
    xi_next=(True, True, True),
)

PRESETS: dict[str, ChaosConfig] = {"case-i": CASE_I, "case-ii": CASE_II}


def get_config(name: str | ChaosConfig) -> ChaosConfig:
    if isinstance(name, ChaosConfig):
        return name
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown config {name!r}; choose from {sorted(PRESETS)}") from None


# --------------------------------------------------------------------------
# stepping

_Branch = tuple  # (alpha, f, F, g, h, beta)


@lru_cache(maxsize=None)
def _compile(cfg: ChaosConfig) -> tuple[tuple[_Branch, _Branch], ...]:
    boxes = []
    for b in range(4):
        pair = []
        for k in (2 * b, 2 * b + 1):
            pair.append((
                float(cfg.alphas[k]),
                OUTER[cfg.outer_maps[k]],
                BASE_MAPS[cfg.base_maps[k]],
                COUPLERS[cfg.couplers[k]],
                ARMS[cfg.tent_arms[k]],
                float(cfg.betas[k]),
            ))
        boxes.append(tuple(pair))
    return tuple(boxes)


def _box(branch: _Branch, r: float, u: float, sel: float, second: bool,
         x: float, y: float, z: float, w: float,
         x1: float, y1: float, z1: float) -> float:
    alpha, f, F, g, h, beta = branch
    partial = 0.0
    try:
        s = alpha * f(F(r, u))
    except _MATH_ERRORS:
        return _repair(partial)
    if not math.isfinite(s):
        return _repair(partial)
    partial = s
    try:
        s = s + g(r, x, y, z, w, x1, y1, z1)
    except _MATH_ERRORS:
        return _repair(partial)
    if not math.isfinite(s):
        return _repair(partial)
    partial = s
    try:
        t = (1.0 - sel) if second else sel
        s = s + h((beta - r) * t / 2.0)
    except _MATH_ERRORS:
        return _repair(partial)
    if not math.isfinite(s):
        return _repair(partial)
    return frac(s)


def _advance(x: float, y: float, z: float, w: float, r: float, boxes, xi_next) -> tuple[float, float, float, float]:
    bx, by, bz, bw = boxes
    second = w >= 0.5
    x1 = _box(bx[second], r, x, z, second, x, y, z, w, 0.0, 0.0, 0.0)

    sel = x1 if xi_next[0] else x
    second = sel >= 0.5
    y1 = _box(by[second], r, y, sel, second, x, y, z, w, x1, 0.0, 0.0)

    sel = y1 if xi_next[1] else y
    second = sel >= 0.5
    z1 = _box(bz[second], r, w, sel, second, x, y, z, w, x1, y1, 0.0)

    sel = z1 if xi_next[2] else z
    second = sel >= 0.5
    w1 = _box(bw[second], r, z, sel, second, x, y, z, w, x1, y1, z1)
    return x1, y1, z1, w1


def step(s, r: float, cfg: ChaosConfig = CASE_I) -> ChaosState:
    """One iteration of the hybrid system."""
    x, y, z, w = s
    return ChaosState(*_advance(float(x), float(y), float(z), float(w), float(r),
                                _compile(cfg), cfg.xi_next))


def branches(s, r: float, cfg: ChaosConfig = CASE_I) -> tuple[bool, bool, bool, bool]:
    """Which branch (True = second) each box takes when stepping from ``s``."""
    x, y, z, w = s
    nx = step(s, r, cfg)
    sel = (w,
           nx.x if cfg.xi_next[0] else x,
           nx.y if cfg.xi_next[1] else y,
           nx.z if cfg.xi_next[2] else z)
    return tuple(v >= 0.5 for v in sel)


# --------------------------------------------------------------------------
# sequences

@dataclass(frozen=True)
class ChaosSequence:
    samples: np.ndarray  # shape (4, n)
    r: float
    gamma: ChaosState

    @property
    def n(self) -> int:
        return self.samples.shape[1]


def iterate(gamma, r: float, n: int, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    """The 4 x n matrix of iterates 1..n (gamma itself excluded)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    boxes = _compile(cfg)
    xi = cfg.xi_next
    r = float(r)
    x, y, z, w = (float(v) for v in gamma)
    out = np.empty((n, 4))
    for i in range(n):
        x, y, z, w = _advance(x, y, z, w, r, boxes, xi)
        out[i] = (x, y, z, w)
    return out.T.copy()


def psi(gamma, r: float, n: int, cfg: ChaosConfig = CASE_I) -> ChaosSequence:
    return ChaosSequence(iterate(gamma, r, n, cfg), float(r), ChaosState(*map(float, gamma)))


def truncate_values(values, tau: int) -> np.ndarray:
    """Keep the first ``tau`` decimals (floor, not round)."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    scale = 10.0 ** tau
    return np.floor(np.asarray(values, dtype=float) * scale) / scale


def truncate(seq: ChaosSequence, tau: int) -> ChaosSequence:
    return ChaosSequence(truncate_values(seq.samples, tau), seq.r, seq.gamma)


def chi(q, r: float, j: int, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    """Row-wise flattening of psi with ceil(j/4) columns, cut to length j."""
    if j < 1:
        raise ValueError("j must be >= 1")
    cols = -(-j // 4)
    return iterate(q, r, cols, cfg).reshape(-1)[:j]
