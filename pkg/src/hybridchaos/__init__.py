"""Image encryption with a four-dimensional hybrid chaotic system and
reversible cellular automata, plus the diagnostics used to evaluate it."""

from .chaos import CASE_I, CASE_II, PRESETS, ChaosConfig, ChaosState, chi, get_config, psi, step
from .cipher import decrypt, decrypt_color, decrypt_gray, encrypt, encrypt_color, encrypt_gray
from .keygen import KeyMaterial, keygen_color, keygen_gray

__version__ = "0.1.0"

__all__ = [
    "CASE_I", "CASE_II", "PRESETS", "ChaosConfig", "ChaosState", "KeyMaterial",
    "chi", "psi", "step", "get_config",
    "encrypt", "decrypt", "encrypt_gray", "decrypt_gray", "encrypt_color", "decrypt_color",
    "keygen_gray", "keygen_color",
]
