"""Security metrics for cipher images: adjacent-pixel correlation, Shannon
entropy, NPCR/UACI with the published critical values, and a small attack
harness (salt & pepper noise, cropping) reporting PSNR and NPCR of the
decrypted image against the original."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chaos import CASE_I, ChaosConfig
from .cipher import decrypt, encrypt, encrypt_with_key, encrypt_color_with_key
from .keygen import keygen_color, keygen_gray


class DegenerateImageError(ValueError):
    """Raised when a correlation is undefined because a sample is constant."""


DIRECTIONS = ("H", "V", "D1", "D2")

# (row offset, col offset) from a pixel to its neighbour.
# D1: lower-left -> top-right, D2: lower-right -> top-left.
_OFFSETS = {"H": (0, 1), "V": (1, 0), "D1": (-1, 1), "D2": (-1, -1)}


def _channel(I) -> np.ndarray:
    I = np.asarray(I)
    if I.ndim != 2:
        raise ValueError(f"expected a single channel, got shape {I.shape}")
    return I


def adjacent_pairs(I, direction: str) -> tuple[np.ndarray, np.ndarray]:
    """All adjacent pixel pairs in ``direction`` as two flat arrays."""
    I = _channel(I)
    try:
        dr, dc = _OFFSETS[direction]
    except KeyError:
        raise ValueError(f"direction must be one of {DIRECTIONS}") from None
    n, m = I.shape
    r0, r1 = max(0, -dr), n - max(0, dr)
    c0, c1 = max(0, -dc), m - max(0, dc)
    if r1 <= r0 or c1 <= c0:
        raise ValueError("image too small for this direction")
    a = I[r0:r1, c0:c1]
    b = I[r0 + dr:r1 + dr, c0 + dc:c1 + dc]
    return a.ravel(), b.ravel()


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(np.mean(dx * dx)))
    sy = math.sqrt(float(np.mean(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateImageError("zero variance: correlation undefined")
    c = float(np.mean(dx * dy)) / (sx * sy)
    return max(-1.0, min(1.0, c))


def adjacency_correlation(I, direction: str = "H", pairs: int | None = 4096, seed: int = 0) -> float:
    """Correlation of adjacent pixels.

    ``pairs`` random pairs are drawn (seeded); ``pairs=None`` uses every
    adjacent pair in the image.
    """
    a, b = adjacent_pairs(I, direction)
    if pairs is not None:
        if pairs < 2:
            raise ValueError("pairs must be >= 2")
        idx = np.random.default_rng(seed).integers(0, a.size, size=pairs)
        a, b = a[idx], b[idx]
    return pearson(a, b)


def shannon_entropy(I) -> float:
    I = np.asarray(I)
    if I.size == 0:
        raise ValueError("empty image")
    counts = np.bincount(I.astype(np.uint8).ravel(), minlength=256)
    p = counts[counts > 0] / I.size
    return float(max(0.0, -(p * np.log2(p)).sum()))


def _same_shape(C1, C2) -> tuple[np.ndarray, np.ndarray]:
    C1 = np.asarray(C1)
    C2 = np.asarray(C2)
    if C1.shape != C2.shape:
        raise ValueError(f"shape mismatch: {C1.shape} vs {C2.shape}")
    return C1, C2


def npcr(C1, C2) -> float:
    C1, C2 = _same_shape(C1, C2)
    return 100.0 * float(np.count_nonzero(C1 != C2)) / C1.size


def uaci(C1, C2) -> float:
    C1, C2 = _same_shape(C1, C2)
    diff = np.abs(C1.astype(np.int64) - C2.astype(np.int64))
    return 100.0 * float(diff.mean()) / 255.0


def psnr(I, J) -> float:
    I, J = _same_shape(I, J)
    mse = float(np.mean((I.astype(np.float64) - J.astype(np.float64)) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


# --------------------------------------------------------------------------
# differential gate

@dataclass(frozen=True)
class CriticalValues:
    npcr: float
    uaci_lo: float
    uaci_hi: float


# Critical NPCR / UACI values for 256x256 and 512x512 images at the
# significance levels 0.05, 0.01 and 0.001.
CRITICAL_VALUES: dict[tuple[int, int], dict[float, CriticalValues]] = {
    (256, 256): {
        0.05: CriticalValues(99.5693, 33.2824, 33.6447),
        0.01: CriticalValues(99.5527, 33.2255, 33.7016),
        0.001: CriticalValues(99.5341, 33.1594, 33.7677),
    },
    (512, 512): {
        0.05: CriticalValues(99.5893, 33.3730, 33.5541),
        0.01: CriticalValues(99.5810, 33.3445, 33.5826),
        0.001: CriticalValues(99.5717, 33.3115, 33.6156),
    },
}


def critical_values(shape, level: float) -> CriticalValues:
    key = tuple(shape[:2])
    if key not in CRITICAL_VALUES:
        sizes = ", ".join(f"{a}x{b}" for a, b in CRITICAL_VALUES)
        raise ValueError(f"no critical values for {key[0]}x{key[1]}; supported sizes: {sizes}")
    if level not in CRITICAL_VALUES[key]:
        raise ValueError(f"level must be one of {sorted(CRITICAL_VALUES[key])}")
    return CRITICAL_VALUES[key][level]


@dataclass
class TrialResult:
    pixel: tuple[int, ...]
    npcr: float
    uaci: float
    npcr_pass: bool
    uaci_pass: bool

    @property
    def passed(self) -> bool:
        return self.npcr_pass and self.uaci_pass


@dataclass
class GateReport:
    shape: tuple[int, ...]
    level: float
    critical: CriticalValues
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def passes(self) -> int:
        return sum(t.passed for t in self.trials)


def _encrypt_fresh(I, r, r0, cfg):
    if I.ndim == 3:
        key = keygen_color(I, r, r0, cfg)
        return encrypt_color_with_key(I, key, cfg)
    key = keygen_gray(I, r, r0, cfg)
    return encrypt_with_key(I, key, cfg)


def gate_trial(C1, C2, crit: CriticalValues, pixel=()) -> TrialResult:
    n, u = npcr(C1, C2), uaci(C1, C2)
    return TrialResult(tuple(pixel), n, u, n >= crit.npcr, crit.uaci_lo <= u <= crit.uaci_hi)


def differential_gate(I, r: float, r0: float, trials: int = 10, level: float = 0.05,
                      seed: int = 0, cfg: ChaosConfig = CASE_I) -> GateReport:
    """Flip the low bit of one random pixel per trial and compare cipher images.

    For colour images NPCR/UACI are taken over all three channels together.
    """
    I = np.asarray(I, dtype=np.uint8)
    crit = critical_values(I.shape, level)
    report = GateReport(I.shape, level, crit)
    C1 = _encrypt_fresh(I, r, r0, cfg)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        pos = tuple(int(rng.integers(0, d)) for d in I.shape)
        J = I.copy()
        J[pos] ^= 1
        C2 = _encrypt_fresh(J, r, r0, cfg)
        report.trials.append(gate_trial(C1, C2, crit, pos))
    return report


# --------------------------------------------------------------------------
# attacks

def salt_pepper(I, density: float, seed: int = 0) -> np.ndarray:
    """Set floor(density * N) distinct random pixels to 0 or 255.

    For colour images a "pixel" is one channel sample.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    I = np.asarray(I, dtype=np.uint8)
    out = I.copy()
    flat = out.reshape(-1)
    k = math.floor(density * flat.size)
    rng = np.random.default_rng(seed)
    idx = rng.choice(flat.size, size=k, replace=False)
    flat[idx] = np.where(rng.random(k) < 0.5, 0, 255).astype(np.uint8)
    return out


def crop(I, rect: tuple[int, int, int, int]) -> np.ndarray:
    """Zero the rectangle (row, col, height, width)."""
    I = np.asarray(I, dtype=np.uint8)
    r, c, h, w = rect
    n, m = I.shape[:2]
    if r < 0 or c < 0 or h < 0 or w < 0 or r + h > n or c + w > m:
        raise ValueError(f"rectangle {rect} outside a {n} x {m} image")
    out = I.copy()
    out[r:r + h, c:c + w] = 0
    return out


def crop_fraction(I, fraction: float) -> np.ndarray:
    """Zero a top-left rectangle covering about ``fraction`` of the area."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    n, m = np.shape(I)[:2]
    h = min(n, round(n * math.sqrt(fraction)))
    w = min(m, round(n * m * fraction / h)) if h else 0
    return crop(I, (0, 0, h, w))


@dataclass
class RobustnessReport:
    attack: str
    strength: float
    psnr: float
    npcr: float
    decrypted: np.ndarray = field(repr=False)

    @property
    def lossless(self) -> bool:
        return math.isinf(self.psnr)


def robustness_report(I, r: float, r0: float, attack: str, strength: float,
                      seed: int = 0, cfg: ChaosConfig = CASE_I) -> RobustnessReport:
    """Encrypt, damage the cipher image, decrypt and compare to ``I``.

    ``attack`` is ``"salt-pepper"`` (strength = density) or ``"crop"``
    (strength = fraction of the area zeroed).
    """
    I = np.asarray(I, dtype=np.uint8)
    C, key = encrypt(I, r, r0, cfg)
    if attack == "salt-pepper":
        damaged = salt_pepper(C, strength, seed)
    elif attack == "crop":
        damaged = crop_fraction(C, strength)
    else:
        raise ValueError(f"unknown attack {attack!r}; use 'salt-pepper' or 'crop'")
    D = decrypt(damaged, key, cfg)
    return RobustnessReport(attack, strength, psnr(I, D), npcr(I, D), D)
