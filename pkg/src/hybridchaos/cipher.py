"""Image encryption pipeline.

Grayscale, for an n x m image and key (r, r0, q):

1. derive the key from the image (:mod:`.keygen`);
2. derive the row shifts v1, the column shifts v2 and the mask M from the
   chaotic stream started at q;
3. expand to bits, rotate each bit row by v1, stack the four column panels
   and rotate each stacked column by v2;
4. split into high and low nibbles; the odd rows of the high nibbles
   (a multiple of 3 of them) form the CA block;
5. diffuse the CA block along wrapped diagonals;
6. write it back, undo the bit rotations, then shuffle pixel positions
   with ``fcs``;
7. XOR with M and a cyclically shifted copy of M.

Colour images are first block-shuffled across their three layers and each
layer then goes through steps 2-7 with the shared colour key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automata import ca_decrypt_matrix, ca_encrypt_matrix
from .chaos import CASE_I, ChaosConfig, chi
from .keygen import KeyMaterial, keygen_color, keygen_gray
from .shifts import fcs, fcs_inv, std3, std3_inv

MIN_SIDE = 8


@dataclass(frozen=True)
class CipherContext:
    v1: np.ndarray   # length n, row bit-shifts
    v2: np.ndarray   # length 8m, column bit-shifts (first 2m used)
    M: np.ndarray    # n x m mask, entries 0..254
    Ms: np.ndarray   # M cyclically shifted
    key: KeyMaterial

    @property
    def shape(self) -> tuple[int, int]:
        return self.M.shape


def _check_gray(I) -> np.ndarray:
    I = np.asarray(I)
    if I.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {I.shape}")
    if I.dtype != np.uint8:
        if I.size and (I.min() < 0 or I.max() > 255):
            raise ValueError("pixel values must lie in 0..255")
        I = I.astype(np.uint8)
    n, m = I.shape
    if n < MIN_SIDE or m < MIN_SIDE:
        raise ValueError(f"image must be at least {MIN_SIDE} x {MIN_SIDE}, got {n} x {m}")
    if n % 2:
        raise ValueError(f"row count must be even, got {n}")
    return I


def mask_shift(key: KeyMaterial) -> tuple[int, int]:
    return math.floor(key.q.x * 1e2), math.floor(key.q.y * 1e2)


def derive_streams(key: KeyMaterial, n: int, m: int, cfg: ChaosConfig = CASE_I) -> CipherContext:
    if n < MIN_SIDE or m < MIN_SIDE:
        raise ValueError(f"need n, m >= {MIN_SIDE}")
    q, r, r0 = key.q, key.r, key.r0
    v1 = np.floor(chi(q, r, n, cfg) * 1e3).astype(np.int64)
    v2 = np.floor(chi(q, r0, 8 * m, cfg) * 1e3).astype(np.int64)
    flat = np.floor(chi(q, (r + r0) / 2.0, n * m, cfg) * 1e3).astype(np.int64)
    M = (flat.reshape((n, m), order="F") % 255).astype(np.uint8)
    Ms = np.roll(M, mask_shift(key), axis=(0, 1))
    return CipherContext(v1, v2, M, Ms, key)


# --------------------------------------------------------------------------
# step 3: bit-level rotations

def _roll_rows(B: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    L = B.shape[1]
    cols = (np.arange(L)[None, :] - shifts[:, None]) % L
    return np.take_along_axis(B, cols, axis=1)


def _stack_panels(B: np.ndarray) -> np.ndarray:
    n, w = B.shape
    return B.reshape(n, 4, w // 4).transpose(1, 0, 2).reshape(4 * n, w // 4)


def _unstack_panels(R: np.ndarray) -> np.ndarray:
    n4, w = R.shape
    n = n4 // 4
    return R.reshape(4, n, w).transpose(1, 0, 2).reshape(n, 4 * w)


def _shift_bits(bits: np.ndarray, ctx: CipherContext, sign: int) -> np.ndarray:
    n, w = bits.shape
    m = w // 8
    if ctx.shape != (n, m):
        raise ValueError(f"bit matrix {bits.shape} does not match context {ctx.shape}")
    v1 = ctx.v1 % w
    v2 = ctx.v2[:2 * m] % (4 * n)
    if sign > 0:
        B = _roll_rows(bits, v1)
        R = _roll_rows(_stack_panels(B).T, v2).T
        return _unstack_panels(R)
    R = _roll_rows(_stack_panels(bits).T, -v2).T
    return _roll_rows(_unstack_panels(R), -v1)


def to_bits(I: np.ndarray) -> np.ndarray:
    return np.unpackbits(np.asarray(I, dtype=np.uint8), axis=1)


def from_bits(B: np.ndarray) -> np.ndarray:
    return np.packbits(np.asarray(B, dtype=np.uint8), axis=1)


def bit_shuffle(I, ctx: CipherContext) -> np.ndarray:
    I = np.asarray(I, dtype=np.uint8)
    if I.shape != ctx.shape:
        raise ValueError(f"image {I.shape} does not match context {ctx.shape}")
    return _shift_bits(to_bits(I), ctx, +1)


def bit_unshuffle(B, ctx: CipherContext) -> np.ndarray:
    return from_bits(_shift_bits(np.asarray(B, dtype=np.uint8), ctx, -1))


# --------------------------------------------------------------------------
# step 4: nibble planes

def ca_rows(n: int) -> int:
    half = n // 2
    return half - half % 3


def nibble_split(B) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(high nibbles, low nibbles, CA block = odd rows 1, 3, .. of the high part)."""
    B = np.asarray(B, dtype=np.uint8)
    n, w = B.shape
    if n < MIN_SIDE:
        raise ValueError(f"need at least {MIN_SIDE} rows, got {n}")
    if w % 8:
        raise ValueError("bit row length must be a multiple of 8")
    slots = B.reshape(n, w // 8, 8)
    hi = slots[:, :, :4].reshape(n, w // 2)
    lo = slots[:, :, 4:].reshape(n, w // 2)
    s = ca_rows(n)
    return hi, lo, hi[0:2 * s:2].copy()


def nibble_merge(hi, lo) -> np.ndarray:
    hi = np.asarray(hi, dtype=np.uint8)
    lo = np.asarray(lo, dtype=np.uint8)
    n, h = hi.shape
    return np.concatenate([hi.reshape(n, h // 4, 4), lo.reshape(n, h // 4, 4)], axis=2).reshape(n, 2 * h)


# --------------------------------------------------------------------------
# step 6: position shuffle

def _v1_at(v1: np.ndarray, pos: int) -> int:
    # 1-based position, wrapped for images with fewer than 40 rows
    return int(v1[(pos - 1) % v1.size])


def position_shifts(v1: np.ndarray) -> tuple[int, int, int, int]:
    return _v1_at(v1, 10), -_v1_at(v1, 20), _v1_at(v1, 30), -_v1_at(v1, 40)


def _centre_square(shape: tuple[int, int]) -> tuple[slice, slice]:
    n, m = shape
    k = min(n, m)
    r0, c0 = (n - k) // 2, (m - k) // 2
    return slice(r0, r0 + k), slice(c0, c0 + k)


def position_shuffle(I5: np.ndarray, v1: np.ndarray) -> np.ndarray:
    shifts = position_shifts(v1)
    out = I5.copy()
    sq = _centre_square(I5.shape)
    out[sq] = fcs(I5[sq], *shifts)
    return out


def position_unshuffle(I6: np.ndarray, v1: np.ndarray) -> np.ndarray:
    shifts = position_shifts(v1)
    out = I6.copy()
    sq = _centre_square(I6.shape)
    out[sq] = fcs_inv(I6[sq], *shifts)
    return out


# --------------------------------------------------------------------------
# full grayscale pipeline

def diffuse(I, ctx: CipherContext, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    """Steps 3-6 up to (not including) the position shuffle: I -> I5."""
    B = bit_shuffle(I, ctx)
    hi, lo, block = nibble_split(B)
    s = block.shape[0]
    hi[0:2 * s:2] = ca_encrypt_matrix(block, ctx.key.q, ctx.key.r, cfg)
    return bit_unshuffle(nibble_merge(hi, lo), ctx)


def undiffuse(I5, ctx: CipherContext, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    B = bit_shuffle(I5, ctx)
    hi, lo, block = nibble_split(B)
    s = block.shape[0]
    hi[0:2 * s:2] = ca_decrypt_matrix(block, ctx.key.q, ctx.key.r, cfg)
    return bit_unshuffle(nibble_merge(hi, lo), ctx)


def encrypt_with_key(I, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    I = _check_gray(I)
    ctx = derive_streams(key, *I.shape, cfg=cfg)
    I6 = position_shuffle(diffuse(I, ctx, cfg), ctx.v1)
    return I6 ^ ctx.M ^ ctx.Ms


def decrypt_with_key(EI, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    EI = _check_gray(EI)
    ctx = derive_streams(key, *EI.shape, cfg=cfg)
    I5 = position_unshuffle(EI ^ ctx.M ^ ctx.Ms, ctx.v1)
    return undiffuse(I5, ctx, cfg)


def encrypt_gray(I, r: float, r0: float, cfg: ChaosConfig = CASE_I) -> tuple[np.ndarray, KeyMaterial]:
    I = _check_gray(I)
    key = keygen_gray(I, r, r0, cfg)
    return encrypt_with_key(I, key, cfg), key


def decrypt_gray(EI, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    return decrypt_with_key(EI, key, cfg)


# --------------------------------------------------------------------------
# colour

def blocks_per_side(n: int) -> int:
    """Blocks along one side for the layer-mixing shuffle (4, else 2, else 1)."""
    for k in (4, 2):
        if n % k == 0:
            return k
    return 1


def layer_permutation(key: KeyMaterial, n: int, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    count = 3 * blocks_per_side(n) ** 2
    return np.argsort(chi(key.q, key.r, count, cfg), kind="stable")


def _check_color(I) -> np.ndarray:
    I = np.asarray(I)
    if I.ndim != 3 or I.shape[2] != 3:
        raise ValueError(f"expected an n x m x 3 image, got shape {I.shape}")
    if I.shape[0] != I.shape[1]:
        raise ValueError(f"colour layers must be square, got {I.shape[0]} x {I.shape[1]}")
    _check_gray(I[:, :, 0])
    return I.astype(np.uint8, copy=False)


def encrypt_color_with_key(I, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    I = _check_color(I)
    P = layer_permutation(key, I.shape[0], cfg)
    layers = std3(I[:, :, 0], I[:, :, 1], I[:, :, 2], P)
    return np.stack([encrypt_with_key(L, key, cfg) for L in layers], axis=2)


def decrypt_color(EI, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    EI = _check_color(EI)
    layers = [decrypt_with_key(EI[:, :, i], key, cfg) for i in range(3)]
    P = layer_permutation(key, EI.shape[0], cfg)
    return np.stack(std3_inv(*layers, P), axis=2)


def encrypt_color(I, r: float, r0: float, cfg: ChaosConfig = CASE_I) -> tuple[np.ndarray, KeyMaterial]:
    I = _check_color(I)
    key = keygen_color(I, r, r0, cfg)
    return encrypt_color_with_key(I, key, cfg), key


def encrypt(I, r: float, r0: float, cfg: ChaosConfig = CASE_I) -> tuple[np.ndarray, KeyMaterial]:
    """Dispatch on the image rank (2-D gray, n x n x 3 colour)."""
    if np.ndim(I) == 3:
        return encrypt_color(I, r, r0, cfg)
    return encrypt_gray(I, r, r0, cfg)


def decrypt(EI, key: KeyMaterial, cfg: ChaosConfig = CASE_I) -> np.ndarray:
    if np.ndim(EI) == 3:
        return decrypt_color(EI, key, cfg)
    return decrypt_gray(EI, key, cfg)
