"""Plaintext-dependent key derivation.

The key state q is obtained by running the chaotic system one step at a
time while feeding it the image pixels three at a time, so every pixel
influences q.
"""

from __future__ import annotations

import math
import secrets
from dataclasses import dataclass

import numpy as np

from .chaos import CASE_I, ChaosConfig, ChaosState, _advance, _compile, frac

R_MAX = 1.2
R0_MAX = 4.0


@dataclass(frozen=True)
class KeyMaterial:
    r: float
    r0: float
    q: ChaosState

    def __post_init__(self) -> None:
        if not (0.0 < self.r <= R_MAX):
            raise ValueError(f"r must lie in (0, {R_MAX}], got {self.r}")
        if not (0.0 <= self.r0 < R0_MAX):
            raise ValueError(f"r0 must lie in [0, {R0_MAX}), got {self.r0}")
        q = ChaosState(*(float(v) for v in self.q))
        if not all(0.0 <= v < 1.0 for v in q):
            raise ValueError(f"q components must lie in [0, 1), got {tuple(q)}")
        object.__setattr__(self, "q", q)


def draw_r0() -> float:
    """r0 = 4 * U[0, 1) from the OS entropy source."""
    return R0_MAX * (secrets.randbits(53) / float(1 << 53))


def _check_params(r: float, r0: float) -> None:
    if not (0.0 < r <= R_MAX):
        raise ValueError(f"r must lie in (0, {R_MAX}], got {r}")
    if not (0.0 <= r0 < R0_MAX):
        raise ValueError(f"r0 must lie in [0, {R0_MAX}), got {r0}")


def absorb_pixels(stream, r: float, cfg: ChaosConfig = CASE_I) -> ChaosState:
    """Fold a byte stream of length >= 4 into a chaotic state.

    The first four bytes seed the system; afterwards each triple of bytes
    (with the current state folded into the first slot) seeds one more
    step.  A trailing partial triple is zero-padded.
    """
    p = np.asarray(stream, dtype=np.int64).ravel()
    if p.size < 4:
        raise ValueError("need at least 4 pixels")
    v = (p / 256.0).tolist()
    boxes = _compile(cfg)
    xi = cfg.xi_next
    r = float(r)
    q = _advance(v[0], v[1], v[2], v[3], r, boxes, xi)
    rest = v[4:]
    tail = len(rest) % 3
    if tail:
        rest = rest + [0.0] * (3 - tail)
    for i in range(0, len(rest), 3):
        x0 = frac((q[1] + q[2] + q[3]) / 3.0 + q[0])
        q = _advance(x0, rest[i], rest[i + 1], rest[i + 2], r, boxes, xi)
    return ChaosState(*q)


def keygen_gray(image, r: float, r0: float, cfg: ChaosConfig = CASE_I) -> KeyMaterial:
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {image.shape}")
    if image.size < 16:
        raise ValueError("image needs at least 16 pixels for key generation")
    _check_params(r, r0)
    shift = math.floor(r0 * 1e3)
    # column-major flattening of the transpose, i.e. row-major order of I
    stream = np.roll(image.reshape(-1), shift)
    return KeyMaterial(float(r), float(r0), absorb_pixels(stream, r, cfg))


def keygen_color(image, r: float, r0: float, cfg: ChaosConfig = CASE_I) -> KeyMaterial:
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected an n x m x 3 image, got shape {image.shape}")
    n, m, _ = image.shape
    if n * m < 16:
        raise ValueError("each layer needs at least 16 pixels for key generation")
    _check_params(r, r0)
    side = np.concatenate([image[:, :, i] for i in range(3)], axis=1)
    # circshift of a matrix by a scalar moves whole rows
    side = np.roll(side, math.floor(r0 * 1e3), axis=0)
    a, b, c = (np.array(keygen_gray(side[:, i * m:(i + 1) * m], r, r0, cfg).q) for i in range(3))
    # written so that three equal keys average to exactly that key
    q = a + ((b - a) + (c - a)) / 3.0
    q = np.clip(q, 0.0, np.nextafter(1.0, 0.0))
    return KeyMaterial(float(r), float(r0), ChaosState(*q.tolist()))
