"""Error injection and the Monte Carlo harness (FER / SER / average iterations).

Every frame draws from its own generator, seeded by ``(seed, stream, frame)``
through numpy's ``SeedSequence``. Frames are processed in fixed-size chunks
that do not depend on the worker count, and counters are integers merged by
addition, so results are bit-identical for any number of workers.
"""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from .encoder import encode
from .gdbf import gdbf_decode_batch
from .gdsu import DecoderParams, decode_batch, default_eps
from .qc_code import expand, load_base
from .quantize import FixedPointFormat, QuantizedVector, decode_fixed_batch, to_grid

log = logging.getLogger(__name__)

CSV_HEADER = ("decoder,code,z,alpha,frames,frame_errors,fer,fer_ci_lo,fer_ci_hi,symbol_errors,"
              "ser,undetected,avg_iterations,max_iters,beta,t,quantize_bits,amp_model,seed")
CHUNK = 500


@dataclass(frozen=True)
class Amplitude:
    """Error amplitude law: ``constant:A``, ``uniform:LO:HI`` or ``gaussian:SIGMA``.

    Constant and uniform magnitudes get an independent random sign.
    """

    kind: str = "uniform"
    params: tuple = (0.5, 8.0)

    def __post_init__(self):
        p = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", p)
        want = {"constant": 1, "uniform": 2, "gaussian": 1}
        if self.kind not in want:
            raise ValueError(f"unknown amplitude model {self.kind!r}")
        if len(p) != want[self.kind]:
            raise ValueError(f"{self.kind} takes {want[self.kind]} parameter(s)")
        if self.kind == "uniform" and not 0 < p[0] <= p[1]:
            raise ValueError("uniform amplitude needs 0 < lo <= hi")
        if self.kind != "uniform" and p[0] <= 0:
            raise ValueError(f"{self.kind} amplitude parameter must be positive")

    @classmethod
    def parse(cls, text: str) -> "Amplitude":
        kind, *vals = text.split(":")
        try:
            return cls(kind, tuple(float(v) for v in vals))
        except ValueError as exc:
            raise ValueError(f"bad amplitude model {text!r}: {exc}") from None

    def __str__(self):
        return ":".join([self.kind] + [f"{v:g}" for v in self.params])

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "gaussian":
            e = rng.normal(0.0, self.params[0], size)
        else:
            if self.kind == "constant":
                mag = np.full(size, self.params[0])
            else:
                mag = rng.uniform(self.params[0], self.params[1], size)
            e = mag * np.where(rng.random(size) < 0.5, -1.0, 1.0)
        while True:
            zero = e == 0
            if not zero.any():
                return e
            e[zero] = self.draw(rng, int(zero.sum()))


@dataclass(frozen=True)
class ChannelModel:
    alpha: float
    amplitude: Amplitude = Amplitude()
    domain: str = "real"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.domain not in ("binary", "real"):
            raise ValueError(f"unknown domain {self.domain!r}")


def inject_errors(x, ch: ChannelModel, rng: np.random.Generator, grid=None) -> np.ndarray:
    """Perturb each position independently with probability ``alpha``.

    Binary: bit flip. Real: add a nonzero amplitude error. ``grid`` maps the
    error amplitudes onto integer fixed-point units (zeros are redrawn).
    """
    x = np.asarray(x)
    hit = rng.random(x.shape[-1]) < ch.alpha
    if ch.domain == "binary":
        return np.bitwise_xor(x, hit.astype(x.dtype))
    count = int(hit.sum())
    e = ch.amplitude.draw(rng, count)
    if grid is not None:
        e = grid(e)
        while (e == 0).any():
            z = e == 0
            e[z] = grid(ch.amplitude.draw(rng, int(z.sum())))
    y = x.copy() if grid is not None else x.astype(np.float64)
    y[hit] += e
    return y


@dataclass(frozen=True)
class SimConfig:
    code: str
    decoder: str = "gdsu"
    channel: ChannelModel = ChannelModel(0.01)
    frames: int = 1000
    max_iters: int = 300
    beta: float = 1.0
    t: float = 1.0
    seed: int = 0
    quantize_bits: int = 0
    quantize_scale: int = 0
    workers: int = 1
    source: Optional[str] = None  # "zero" | "random:LO:HI"; None picks the domain default
    sign_weighted: bool = True
    stream: int = 0

    def __post_init__(self):
        if self.frames < 1:
            raise ValueError("frames must be >= 1")
        if self.decoder not in ("gdsu", "gdbf"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.quantize_bits and self.decoder != "gdsu":
            raise ValueError("fixed-point simulation is only defined for gdsu")
        if self.quantize_bits < 0 or (self.quantize_bits and self.quantize_bits < 2):
            raise ValueError("quantize_bits must be 0 or >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.source is None:
            object.__setattr__(self, "source", "zero" if self.decoder == "gdbf" else "random:-1:1")
        _source_range(self.source)
        domain = "binary" if self.decoder == "gdbf" else "real"
        if self.channel.domain != domain:
            object.__setattr__(self, "channel", replace(self.channel, domain=domain))

    @property
    def decoder_label(self) -> str:
        if self.decoder == "gdsu" and not self.sign_weighted:
            return "gdsu-literal"
        return self.decoder

    @property
    def amp_label(self) -> str:
        return "bitflip" if self.decoder == "gdbf" else str(self.channel.amplitude)

    def decoder_params(self) -> DecoderParams:
        return DecoderParams(self.beta, self.t, self.max_iters,
                             sign_weighted_consensus=self.sign_weighted)


def _source_range(source: str):
    if source == "zero":
        return None
    kind, *vals = source.split(":")
    if kind != "random" or len(vals) not in (0, 2):
        raise ValueError(f"bad source mode {source!r}; use zero or random:LO:HI")
    lo, hi = (float(v) for v in vals) if vals else (-1.0, 1.0)
    if lo > hi:
        raise ValueError("source range needs LO <= HI")
    return lo, hi


@dataclass
class SimStats:
    frames_run: int = 0
    frame_errors: int = 0
    symbol_errors: int = 0
    iterations_total: int = 0
    undetected_errors: int = 0
    n: int = field(default=0, compare=False)

    def __add__(self, other: "SimStats") -> "SimStats":
        return SimStats(self.frames_run + other.frames_run,
                        self.frame_errors + other.frame_errors,
                        self.symbol_errors + other.symbol_errors,
                        self.iterations_total + other.iterations_total,
                        self.undetected_errors + other.undetected_errors,
                        max(self.n, other.n))

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames_run if self.frames_run else 0.0

    @property
    def ser(self) -> float:
        total = self.frames_run * self.n
        return self.symbol_errors / total if total else 0.0

    @property
    def avg_iterations(self) -> float:
        return self.iterations_total / self.frames_run if self.frames_run else 0.0

    def fer_ci(self, confidence: float = 0.95) -> tuple:
        """Wilson score interval for the frame error rate."""
        if not self.frames_run:
            return 0.0, 1.0
        ci = binomtest(self.frame_errors, self.frames_run).proportion_ci(confidence, "wilson")
        return float(ci.low), float(ci.high)


@lru_cache(maxsize=None)
def _codes(code: str):
    base = load_base(code)
    return expand(base, "real"), expand(base, "binary")


def _frame_rng(seed: int, stream: int, frame: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, frame])


def _draw_frames(cfg: SimConfig, start: int, stop: int, h, fmt):
    """Source words and received words for frames ``[start, stop)``."""
    rng_range = _source_range(cfg.source)
    binary = cfg.decoder == "gdbf"
    grid = (lambda v: to_grid(v, fmt)) if fmt is not None else None
    sources, errs = [], []
    for f in range(start, stop):
        rng = _frame_rng(cfg.seed, cfg.stream, f)
        if rng_range is None:
            s = np.zeros(h.k, dtype=np.uint8 if binary else np.float64)
        elif binary:
            s = rng.integers(0, 2, h.k, dtype=np.uint8)
        else:
            s = rng.uniform(rng_range[0], rng_range[1], h.k)
        if fmt is not None:
            s = np.clip(to_grid(s, fmt), -fmt.data_max, fmt.data_max)
        sources.append((s, rng))
    S = np.stack([s for s, _ in sources])
    C = encode(h, None, S)
    Y = np.stack([inject_errors(c, cfg.channel, rng, grid) for c, (_, rng) in zip(C, sources)])
    return C, Y


def _run_chunk(args) -> SimStats:
    cfg, start, stop = args
    h_real, h_bin = _codes(cfg.code)
    if cfg.decoder == "gdbf":
        C, Y = _draw_frames(cfg, start, stop, h_bin, None)
        res = gdbf_decode_batch(Y, h_bin, cfg.max_iters)
        wrong = res.x_hat != C
    elif cfg.quantize_bits:
        fmt = FixedPointFormat.for_code(cfg.quantize_bits, h_real, cfg.quantize_scale)
        C, Y = _draw_frames(cfg, start, stop, h_real, fmt)
        res = decode_fixed_batch(QuantizedVector(Y, fmt, h_real.k), h_real, cfg.decoder_params())
        wrong = res.x_hat != C
    else:
        C, Y = _draw_frames(cfg, start, stop, h_real, None)
        res = decode_batch(Y, h_real, cfg.decoder_params())
        wrong = np.abs(res.x_hat - C) > default_eps(Y)[:, None]
    bad = wrong.any(axis=-1)
    return SimStats(frames_run=stop - start,
                    frame_errors=int(bad.sum()),
                    symbol_errors=int(wrong.sum()),
                    iterations_total=int(res.iterations.sum()),
                    undetected_errors=int((bad & res.converged).sum()),
                    n=h_real.n)


def _chunks(cfg: SimConfig):
    return [(cfg, a, min(a + CHUNK, cfg.frames)) for a in range(0, cfg.frames, CHUNK)]


def run_point(cfg: SimConfig, executor=None) -> SimStats:
    """Simulate ``cfg.frames`` frames at one channel point."""
    tasks = _chunks(cfg)
    if executor is not None:
        parts = list(executor.map(_run_chunk, tasks))
    elif cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(_run_chunk, tasks))
    else:
        parts = [_run_chunk(t) for t in tasks]
    total = SimStats()
    for p in parts:
        total = total + p
    return total


def sweep(cfg: SimConfig, alphas: Sequence[float]) -> Iterator[tuple]:
    """Yield ``(alpha, SimStats)`` per point as each finishes; point ``i`` uses stream ``i``."""
    alphas = list(alphas)
    if not alphas:
        return
    ex = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for i, a in enumerate(alphas):
            point = replace(cfg, channel=replace(cfg.channel, alpha=float(a)), stream=i)
            stats = run_point(point, ex)
            log.info("%s %s alpha=%g fer=%g avg_it=%g", point.decoder_label, cfg.code, a,
                     stats.fer, stats.avg_iterations)
            yield a, stats
    finally:
        if ex is not None:
            ex.shutdown()


def csv_row(cfg: SimConfig, alpha: float, stats: SimStats, z: int) -> list:
    lo, hi = stats.fer_ci()
    return [cfg.decoder_label, cfg.code, z, repr(float(alpha)), stats.frames_run,
            stats.frame_errors, repr(stats.fer), repr(lo), repr(hi), stats.symbol_errors,
            repr(stats.ser), stats.undetected_errors, repr(stats.avg_iterations), cfg.max_iters,
            repr(float(cfg.beta)), repr(float(cfg.t)), cfg.quantize_bits, cfg.amp_label, cfg.seed]


def write_sweep(cfg: SimConfig, alphas: Iterable[float], out) -> list:
    """Run a sweep, writing the CSV header and one flushed row per point."""
    w = csv.writer(out, lineterminator="\n")
    out.write(CSV_HEADER + "\n")
    out.flush()
    z = _codes(cfg.code)[0].z
    results = []
    for a, stats in sweep(cfg, alphas):
        w.writerow(csv_row(cfg, a, stats, z))
        out.flush()
        results.append((a, stats))
    return results
