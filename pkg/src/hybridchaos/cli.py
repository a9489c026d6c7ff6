"""Command line interface.

Exit status: 0 success, 1 a metrics gate failed, 2 usage error,
3 unreadable/invalid image, 4 invalid key file, 5 invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import cipher, dynamics, metrics
from .chaos import PRESETS, get_config
from .keyfile import KeyFile, KeyFileError, dumps, read_keyfile, write_keyfile
from .keygen import draw_r0, keygen_color, keygen_gray
from .pnm import PNMError, read_pnm, write_pnm

EXIT_GATE = 1
EXIT_IMAGE = 3
EXIT_KEY = 4
EXIT_PARAM = 5


def _gamma(text: str) -> tuple[float, float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4 or not all(0.0 <= p < 1.0 for p in parts):
        raise argparse.ArgumentTypeError("gamma needs four comma-separated values in [0, 1)")
    return tuple(parts)


def _write_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if out:
        Path(out).write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(buf.getvalue())


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _r0(args) -> float:
    return args.r0 if args.r0 is not None else draw_r0()


def _key_for(image: np.ndarray, r: float, r0: float, cfg):
    if image.ndim == 3:
        return keygen_color(image, r, r0, cfg)
    return keygen_gray(image, r, r0, cfg)


# --------------------------------------------------------------------------

def cmd_encrypt(args) -> int:
    cfg = get_config(args.config)
    image = read_pnm(args.input)
    r0 = _r0(args)
    C, key = cipher.encrypt(image, args.r, r0, cfg)
    write_pnm(C, args.out)
    channels = 3 if image.ndim == 3 else 1
    write_keyfile(KeyFile(key, cfg.name, image.shape[0], image.shape[1], channels),
                  args.key or f"{args.out}.key")
    return 0


def cmd_decrypt(args) -> int:
    kf = read_keyfile(args.key)
    C = read_pnm(args.input)
    if C.shape != kf.shape:
        raise PNMError(f"cipher image shape {C.shape} does not match key file {kf.shape}")
    write_pnm(cipher.decrypt(C, kf.key, get_config(kf.config)), args.out)
    return 0


def cmd_keygen(args) -> int:
    cfg = get_config(args.config)
    image = read_pnm(args.input)
    key = _key_for(image, args.r, _r0(args), cfg)
    channels = 3 if image.ndim == 3 else 1
    kf = KeyFile(key, cfg.name, image.shape[0], image.shape[1], channels)
    if args.out:
        write_keyfile(kf, args.out)
    else:
        sys.stdout.write(dumps(kf))
    return 0


def cmd_lyapunov(args) -> int:
    rs = [args.r] if args.r_steps <= 1 else np.linspace(args.r_lo, args.r_hi, args.r_steps)
    rows = []
    for r in rs:
        lam = dynamics.lyapunov_spectrum(args.config, float(r), args.gamma, args.n)
        rows.append([_fmt(float(r))] + [_fmt(v) for v in lam])
    _write_csv(["r", "lam1", "lam2", "lam3", "lam4"], rows, args.out)
    return 0


def cmd_bifurcation(args) -> int:
    table = dynamics.bifurcation_scan(args.config, args.gamma, args.r_lo, args.r_hi,
                                      args.r_steps, args.transient, args.keep)
    rows = ([_fmt(r), int(c), _fmt(v)] for r, c, v in table)
    _write_csv(["r", "component", "value"], rows, args.out)
    return 0


def cmd_cobweb(args) -> int:
    pairs = dynamics.cobweb_trace(args.config, args.r, args.gamma, args.n)
    _write_csv(["x_i", "x_next"], ([_fmt(a), _fmt(b)] for a, b in pairs), args.out)
    return 0


def cmd_histogram(args) -> int:
    from .chaos import iterate
    values = iterate(args.gamma, args.r, args.n, get_config(args.config))[args.component]
    rows = ([_fmt(lo), _fmt(hi), int(c)] for lo, hi, c in dynamics.histogram_rows(values, args.bins))
    _write_csv(["bin_lo", "bin_hi", "count"], rows, args.out)
    return 0


def cmd_metrics(args) -> int:
    cfg = get_config(args.config)
    image = read_pnm(args.input)
    r0 = _r0(args)
    C, _ = cipher.encrypt(image, args.r, r0, cfg)
    layers = [C] if C.ndim == 2 else [C[:, :, i] for i in range(3)]
    rows = []
    for ch, L in enumerate(layers):
        rows.append(["entropy", ch, _fmt(metrics.shannon_entropy(L)), ""])
        for d in metrics.DIRECTIONS:
            try:
                c = metrics.adjacency_correlation(L, d, pairs=args.pairs, seed=args.seed)
            except metrics.DegenerateImageError:
                c = float("nan")
            rows.append([f"correlation_{d}", ch, _fmt(c), ""])
    status = 0
    if tuple(image.shape[:2]) in metrics.CRITICAL_VALUES and args.trials > 0:
        rep = metrics.differential_gate(image, args.r, r0, args.trials, args.level, args.seed, cfg)
        for i, t in enumerate(rep.trials):
            rows.append([f"npcr_trial{i}", "all", _fmt(t.npcr), "pass" if t.npcr_pass else "fail"])
            rows.append([f"uaci_trial{i}", "all", _fmt(t.uaci), "pass" if t.uaci_pass else "fail"])
        need = int(np.ceil(0.8 * args.trials))
        ok = rep.passes >= need
        rows.append(["gate_passes", "all", rep.passes, "pass" if ok else "fail"])
        status = 0 if ok else EXIT_GATE
    else:
        rows.append(["gate_passes", "all", "", "skipped (no critical values for this size)"])
    _write_csv(["metric", "channel", "value", "verdict"], rows, args.out)
    return status


def cmd_attack(args) -> int:
    cfg = get_config(args.config)
    image = read_pnm(args.input)
    rep = metrics.robustness_report(image, args.r, _r0(args), args.kind, args.strength,
                                    args.seed, cfg)
    if args.decrypted:
        write_pnm(rep.decrypted, args.decrypted)
    psnr = "inf" if rep.lossless else _fmt(rep.psnr)
    _write_csv(["attack", "strength", "psnr", "npcr"],
               [[rep.attack, _fmt(rep.strength), psnr, _fmt(rep.npcr)]], args.out)
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridchaos", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, r0=True):
        sp.add_argument("--config", choices=sorted(PRESETS), default="case-i")
        sp.add_argument("--r", type=float, default=0.7)
        if r0:
            sp.add_argument("--r0", type=float, default=None,
                            help="omit to draw r0 from the OS entropy source")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("encrypt", help="encrypt a P5/P6 image")
    sp.add_argument("input")
    common(sp)
    sp.add_argument("--key", default=None, help="key file path (default: <out>.key)")
    sp.set_defaults(func=cmd_encrypt, needs_out=True)

    sp = sub.add_parser("decrypt", help="decrypt with a key file")
    sp.add_argument("input")
    sp.add_argument("--key", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("keygen", help="derive the key for an image")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_keygen)

    def analysis(sp, n_default=None):
        common(sp, r0=False)
        sp.add_argument("--gamma", type=_gamma, default=(0.3, 0.3, 0.3, 0.3))
        if n_default is not None:
            sp.add_argument("--n", type=int, default=n_default)

    sp = sub.add_parser("analyze-lyapunov", help="Lyapunov spectrum CSV")
    analysis(sp, 10_000)
    sp.add_argument("--r-lo", type=float, default=0.1)
    sp.add_argument("--r-hi", type=float, default=1.2)
    sp.add_argument("--r-steps", type=int, default=1,
                    help="1 evaluates only --r; more scans [r-lo, r-hi]")
    sp.set_defaults(func=cmd_lyapunov)

    sp = sub.add_parser("analyze-bifurcation", help="bifurcation scan CSV")
    analysis(sp)
    sp.add_argument("--r-lo", type=float, default=0.01)
    sp.add_argument("--r-hi", type=float, default=1.2)
    sp.add_argument("--r-steps", type=int, default=120)
    sp.add_argument("--transient", type=int, default=1000)
    sp.add_argument("--keep", type=int, default=200)
    sp.set_defaults(func=cmd_bifurcation)

    sp = sub.add_parser("analyze-cobweb", help="cobweb pairs CSV")
    analysis(sp, 1000)
    sp.set_defaults(func=cmd_cobweb)

    sp = sub.add_parser("analyze-histogram", help="sequence histogram CSV")
    analysis(sp, 100_000)
    sp.add_argument("--component", type=int, choices=range(4), default=0)
    sp.add_argument("--bins", type=int, default=100)
    sp.set_defaults(func=cmd_histogram)

    sp = sub.add_parser("metrics", help="entropy, correlation and NPCR/UACI gate CSV")
    sp.add_argument("input")
    common(sp)
    sp.add_argument("--pairs", type=int, default=None,
                    help="random pairs per correlation (default: all adjacent pairs)")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--level", type=float, choices=(0.05, 0.01, 0.001), default=0.05)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("attack", help="noise/crop robustness report CSV")
    sp.add_argument("input")
    common(sp)
    sp.add_argument("--kind", choices=("salt-pepper", "crop"), required=True)
    sp.add_argument("--strength", type=float, required=True)
    sp.add_argument("--decrypted", default=None, help="write the decrypted image here")
    sp.set_defaults(func=cmd_attack)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "needs_out", False) and not args.out:
        parser.error("--out is required")
    try:
        return args.func(args)
    except PNMError as exc:
        print(f"error: image: {exc}", file=sys.stderr)
        return EXIT_IMAGE
    except KeyFileError as exc:
        print(f"error: key file: {exc}", file=sys.stderr)
        return EXIT_KEY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
