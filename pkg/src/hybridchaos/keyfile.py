"""Line-oriented ``key = value`` key files.

Floats are written with 17 significant digits, which is enough for any
IEEE double to survive a write/read cycle unchanged.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .chaos import PRESETS, ChaosState
from .keygen import KeyMaterial

SCHEMA_VERSION = 1
_FIELDS = ("version", "config", "r", "r0", "x", "y", "z", "w", "height", "width", "channels")


class KeyFileError(ValueError):
    pass


@dataclass(frozen=True)
class KeyFile:
    key: KeyMaterial
    config: str
    height: int
    width: int
    channels: int = 1
    version: int = SCHEMA_VERSION

    @property
    def shape(self) -> tuple[int, ...]:
        if self.channels == 1:
            return (self.height, self.width)
        return (self.height, self.width, self.channels)


def _g17(v: float) -> str:
    return format(float(v), ".17g")


def dumps(kf: KeyFile) -> str:
    k = kf.key
    values = {
        "version": str(kf.version),
        "config": kf.config,
        "r": _g17(k.r),
        "r0": _g17(k.r0),
        "x": _g17(k.q.x),
        "y": _g17(k.q.y),
        "z": _g17(k.q.z),
        "w": _g17(k.q.w),
        "height": str(kf.height),
        "width": str(kf.width),
        "channels": str(kf.channels),
    }
    return "".join(f"{name} = {values[name]}\n" for name in _FIELDS)


def loads(text: str) -> KeyFile:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise KeyFileError(f"line {lineno}: expected 'key = value'")
        values[name.strip()] = value.strip()
    missing = [f for f in _FIELDS if f not in values]
    if missing:
        raise KeyFileError(f"missing key field(s): {', '.join(missing)}")
    try:
        version = int(values["version"])
        if version != SCHEMA_VERSION:
            raise KeyFileError(f"unsupported key file version {version}")
        config = values["config"]
        if config not in PRESETS:
            raise KeyFileError(f"unknown config {config!r}")
        q = ChaosState(*(float(values[c]) for c in "xyzw"))
        key = KeyMaterial(float(values["r"]), float(values["r0"]), q)
        kf = KeyFile(key, config, int(values["height"]), int(values["width"]),
                     int(values["channels"]), version)
    except KeyFileError:
        raise
    except ValueError as exc:
        raise KeyFileError(f"bad key field: {exc}") from None
    if kf.channels not in (1, 3) or kf.height <= 0 or kf.width <= 0:
        raise KeyFileError("bad image dimensions in key file")
    return kf


def write_keyfile(kf: KeyFile, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(kf))


def read_keyfile(path: str | os.PathLike) -> KeyFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
