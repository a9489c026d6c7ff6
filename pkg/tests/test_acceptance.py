"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the "acceptance criteria" section of the pytest summary.
"""

import math
import re
import struct
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest
from skimage import color, data, transform

from hybridchaos import cipher, metrics
from hybridchaos.chaos import CASE_I, CASE_II
from hybridchaos.dynamics import doubling_map, lyapunov_spectrum
from hybridchaos.keyfile import KeyFile, read_keyfile, write_keyfile
from hybridchaos.keygen import KeyMaterial

R, R0 = 0.7, 0.7
README = Path(__file__).resolve().parents[1] / "README.md"


def _gray(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[:, :, :3])
        return (img * 255).round().astype(np.uint8)
    return img


def _resize(img, n):
    out = transform.resize(img, (n, n) + img.shape[2:], anti_aliasing=True, preserve_range=True)
    return out.round().clip(0, 255).astype(np.uint8)


@lru_cache(maxsize=None)
def image_set(n):
    """Seven natural images and three random ones, all n x n gray."""
    natural = {
        "camera": data.camera(), "moon": data.moon(), "brick": data.brick(),
        "grass": data.grass(), "gravel": data.gravel(),
        "astronaut": _gray(data.astronaut()),
        "ihc": _gray(data.immunohistochemistry()),
    }
    imgs = {k: (v if v.shape[0] == n else _resize(v, n)) for k, v in natural.items()}
    rng = np.random.default_rng(n)
    for i in range(3):
        imgs[f"random{i}"] = rng.integers(0, 256, (n, n), dtype=np.uint8)
    return imgs


@lru_cache(maxsize=None)
def cipher_set(n):
    return {k: cipher.encrypt(v, R, R0)[0] for k, v in image_set(n).items()}


def color_image():
    return _resize(data.astronaut(), 256)


def test_criterion_1_roundtrip(criterion):
    rng = np.random.default_rng(1)
    cases = [("gray256", image_set(256)["camera"]), ("gray512", image_set(512)["camera"]),
             ("color256", color_image())]
    for i in range(100):
        if i % 4 == 3:
            k = 2 * int(rng.integers(4, 24))
            img = rng.integers(0, 256, (k, k, 3), dtype=np.uint8)
        else:
            img = rng.integers(0, 256, (2 * int(rng.integers(4, 40)), int(rng.integers(8, 80))),
                               dtype=np.uint8)
        cases.append((f"random{i}", img))
    failures, slowest = [], 0.0
    for name, img in cases:
        t0 = time.perf_counter()
        C, key = cipher.encrypt(img, R, float(rng.uniform(0, 4)), CASE_I)
        D = cipher.decrypt(C, key, CASE_I)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if not np.array_equal(D, img) or dt >= 10.0:
            failures.append(name)
    ok = not failures
    criterion(1, ok, f"{len(cases)} images bit-exact, slowest round trip {slowest:.2f}s (< 10s)"
              + (f"; failed: {failures}" if failures else ""))
    assert ok


def test_criterion_2_entropy(criterion):
    lows = {}
    ok = True
    for n, bound in ((256, 7.99), (512, 7.999)):
        ent = {k: metrics.shannon_entropy(C) for k, C in cipher_set(n).items()}
        lows[n] = min(ent.values())
        ok &= all(v >= bound for v in ent.values())
    criterion(2, ok, f"min entropy 256x256 = {lows[256]:.5f} (>= 7.99), "
                     f"512x512 = {lows[512]:.5f} (>= 7.999) over 10 images each")
    assert ok


def test_criterion_3_correlation(criterion):
    worst, where = 0.0, ""
    for n in (256, 512):
        for k, C in cipher_set(n).items():
            for d in metrics.DIRECTIONS:
                c = abs(metrics.adjacency_correlation(C, d, pairs=None))
                if c > worst:
                    worst, where = c, f"{k}@{n} {d}"
    ok = worst < 0.01
    criterion(3, ok, f"max |c| over 80 coefficients (all adjacent pairs) = {worst:.5f} ({where}) < 0.01")
    assert ok


def test_criterion_4_differential_gate(criterion):
    results = {}
    for n in (256, 512):
        rep = metrics.differential_gate(image_set(n)["camera"], R, R0, trials=10, level=0.05, seed=4)
        results[n] = rep
    ok = all(rep.passes >= 8 for rep in results.values())
    detail = ", ".join(
        f"{n}x{n}: {rep.passes}/10 (NPCR {np.mean([t.npcr for t in rep.trials]):.4f}, "
        f"UACI {np.mean([t.uaci for t in rep.trials]):.4f})"
        for n, rep in results.items())
    criterion(4, ok, detail)
    assert ok


def test_criterion_5_lyapunov(criterion):
    lam_d = lyapunov_spectrum(doubling_map, 0.5, (0.1234, 0.2, 0.3, 0.4), n=10_000)
    err = abs(lam_d[0] - math.log(2)) / math.log(2)
    spectra = {cfg.name: lyapunov_spectrum(cfg, 0.5, (0.3,) * 4, n=10_000) for cfg in (CASE_I, CASE_II)}
    ok = err < 0.01 and all(np.all(lam > 0) for lam in spectra.values())
    fmt = "; ".join(f"{k}: " + ", ".join(f"{v:.3f}" for v in lam) for k, lam in spectra.items())
    criterion(5, ok, f"doubling map {lam_d[0]:.6f} (rel err {err:.2e}); r=0.5, n=1e4 -> {fmt}")
    assert ok


def test_criterion_6_property_suites(criterion):
    import test_automata
    import test_chaos
    import test_keygen
    import test_shifts

    suites = [
        test_shifts.test_ults_bijective_1000,
        test_shifts.test_fcs_scs_bijective_1000,
        test_shifts.test_std3_bijective_1000,
        test_automata.test_phi_reversible_all_rules,
        test_automata.test_rule30_golden,
        test_automata.test_ca_roundtrip_500,
        test_chaos.test_truncate_examples,
        test_chaos.test_chi_layout,
        test_keygen.test_avalanche_20_flips,
    ]
    failed = []
    for fn in suites:
        try:
            fn()
        except AssertionError:
            failed.append(fn.__name__)
    ok = not failed
    criterion(6, ok, f"{len(suites) - len(failed)}/{len(suites)} property suites green"
              + (f"; failed: {failed}" if failed else ""))
    assert ok


def test_criterion_7_robustness(criterion):
    gray = image_set(256)["camera"]
    runs = [(gray, "salt-pepper", 0.1), (color_image(), "salt-pepper", 0.2)]
    runs += [(gray, "crop", f) for f in (0.07, 0.17, 0.23, 0.35)]
    parts, ok = [], True
    for img, kind, s in runs:
        try:
            rep = metrics.robustness_report(img, R, R0, kind, s, seed=7)
        except Exception as exc:  # any error fails the smoke test
            ok = False
            parts.append(f"{kind} {s}: {type(exc).__name__}")
            continue
        ok &= rep.decrypted.shape == img.shape and math.isfinite(rep.psnr)
        tag = "color" if img.ndim == 3 else "gray"
        parts.append(f"{kind} {s} {tag}: PSNR {rep.psnr:.2f} dB, NPCR {rep.npcr:.2f}%")
    criterion(7, ok, "; ".join(parts))
    assert ok


def test_criterion_8_keyspace_docs_and_keyfile(criterion, tmp_path):
    text = README.read_text(encoding="utf-8")
    # the arithmetic must be stated and must be right
    claims = ["10^15", "10^90", "2^298", "2^100"]
    docs_ok = all(c in text for c in claims) and bool(re.search(r"six", text, re.I))
    bits = 90 * math.log2(10)
    math_ok = 6 * 15 == 90 and math.floor(bits) == 298 and bits >= 100

    rng = np.random.default_rng(8)
    exact = True
    for i in range(200):
        q = tuple(float(v) for v in rng.random(4))
        key = KeyMaterial(float(rng.uniform(1e-9, 1.2)), float(rng.uniform(0, 4)), q)
        kf = KeyFile(key, "case-i" if i % 2 else "case-ii", 256, 256, 1 + 2 * (i % 2))
        path = tmp_path / f"{i}.key"
        write_keyfile(kf, path)
        back = read_keyfile(path)
        a = struct.pack("<6d", key.r, key.r0, *key.q)
        b = struct.pack("<6d", back.key.r, back.key.r0, *back.key.q)
        exact &= a == b and back == kf
    ok = docs_ok and math_ok and exact
    criterion(8, ok, f"README states six 10^15 components -> 10^90 = 2^{bits:.2f} >= 2^100 "
                     f"({'found' if docs_ok else 'MISSING'}); 200 key files bit-exact: {exact}")
    assert ok
