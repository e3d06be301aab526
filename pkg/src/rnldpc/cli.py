"""Command-line entry point: ``rnldpc simulate|encode|decode|expand|complexity``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import channel_sim
from .complexity import complexity_report
from .encoder import encode, format_vector, read_vectors
from .gdbf import gdbf_decode_batch
from .gdsu import DecoderParams, decode_batch
from .qc_code import BUILTIN_CODES, expand, load_base

log = logging.getLogger("rnldpc")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _amplitude(text):
    try:
        return channel_sim.Amplitude.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_code(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--code", choices=sorted(BUILTIN_CODES), help="built-in code")
    g.add_argument("--base", metavar="FILE", help="base-matrix file")


def _add_decoder_flags(p):
    p.add_argument("--max-iters", type=_positive, default=300, help="iteration cap I_max")
    p.add_argument("--beta", type=float, default=1.0, help="consensus weight beta")
    p.add_argument("--t", type=float, default=1.0, help="update step factor t")
    p.add_argument("--consensus", choices=("weighted", "literal"), default="weighted",
                   help="D_k with entry-sign weighting, or the unweighted sum")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rnldpc", description=__doc__,
                                 formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    ap.add_argument("-v", "--verbose", action="store_true", help="log one line per point to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("simulate", help="Monte Carlo FER/SER sweep, CSV output", formatter_class=fmt)
    _add_code(p)
    p.add_argument("--decoder", choices=("gdsu", "gdbf"), default="gdsu")
    p.add_argument("--alphas", type=_float_list, required=True, help="comma-separated error probabilities")
    p.add_argument("--frames", type=_positive, default=1000)
    _add_decoder_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--quantize-bits", type=int, default=0, help="fixed-point data bits p; 0 = floating point")
    p.add_argument("--quantize-scale", type=int, default=0, help="fractional bits of the fixed-point grid")
    p.add_argument("--amp-model", type=_amplitude, default=channel_sim.Amplitude(),
                   help="constant:A | uniform:LO:HI | gaussian:SIGMA")
    p.add_argument("--source", default=None,
                   help="zero | random:LO:HI (default: random:-1:1 for gdsu, zero for gdbf)")
    p.add_argument("--out", default="-", help="CSV path, - for stdout")

    for name, text in (("encode", "encode source frames"), ("decode", "decode received frames")):
        p = sub.add_parser(name, help=text, formatter_class=fmt)
        _add_code(p)
        p.add_argument("--variant", choices=("real", "binary"), default="real")
        p.add_argument("--in", dest="inp", default="-", help="symbol-vector file, - for stdin")
        p.add_argument("--out", default="-")
        if name == "decode":
            _add_decoder_flags(p)

    p = sub.add_parser("expand", help="write H as (row, col, sign) triples", formatter_class=fmt)
    _add_code(p)
    p.add_argument("--variant", choices=("real", "binary"), default="real")
    p.add_argument("--out", default="-")

    p = sub.add_parser("complexity", help="per-iteration operation counts", formatter_class=fmt)
    _add_code(p)
    p.add_argument("--variant", choices=("real", "binary"), default="real")
    return ap


@contextmanager
def _open(path, mode):
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="ascii", newline="") as fh:
            yield fh


def _params(args) -> DecoderParams:
    return DecoderParams(args.beta, args.t, args.max_iters,
                         sign_weighted_consensus=args.consensus == "weighted")


def _simulate(args):
    code = args.code or args.base
    cfg = channel_sim.SimConfig(
        code=code, decoder=args.decoder,
        channel=channel_sim.ChannelModel(args.alphas[0] if args.alphas else 0.0, args.amp_model),
        frames=args.frames, max_iters=args.max_iters, beta=args.beta, t=args.t, seed=args.seed,
        quantize_bits=args.quantize_bits, quantize_scale=args.quantize_scale,
        workers=args.workers, source=args.source, sign_weighted=args.consensus == "weighted")
    with _open(args.out, "w") as out:
        channel_sim.write_sweep(cfg, args.alphas, out)


def _encode(args):
    h = expand(load_base(args.code or args.base), args.variant)
    with _open(args.inp, "r") as fh:
        frames = read_vectors(fh)
    with _open(args.out, "w") as out:
        for s in frames:
            if args.variant == "binary":
                s = s.astype(np.uint8)
            elif np.all(s == np.round(s)):
                s = s.astype(np.int64)
            out.write(format_vector(encode(h, None, s)) + "\n")


def _decode(args):
    h = expand(load_base(args.code or args.base), args.variant)
    with _open(args.inp, "r") as fh:
        frames = read_vectors(fh)
    with _open(args.out, "w") as out:
        for y in frames:
            if args.variant == "binary":
                r = gdbf_decode_batch(y.astype(np.uint8)[None], h, args.max_iters)[0]
            else:
                r = decode_batch(y[None], h, _params(args))[0]
            out.write(format_vector(r.x_hat) + "\n")
            log.info("converged=%s iterations=%d", r.converged, r.iterations)


def _expand(args):
    h = expand(load_base(args.code or args.base), args.variant)
    with _open(args.out, "w") as out:
        for r, c, s in h.triples():
            out.write(f"{r} {c} {s}\n")


def _complexity(args):
    h = expand(load_base(args.code or args.base), args.variant)
    print(complexity_report(h, args.variant).format())


COMMANDS = {"simulate": _simulate, "encode": _encode, "decode": _decode,
            "expand": _expand, "complexity": _complexity}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError, OverflowError) as exc:
        print(f"rnldpc {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())
