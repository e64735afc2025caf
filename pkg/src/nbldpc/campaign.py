"""Seeded Monte-Carlo FER/SER campaigns with machine-readable output.

Frames draw from counter-style random streams keyed by (master seed, SNR
index, frame index), and frames are consumed in fixed-size batches, so a
campaign's numbers are bit-identical for any worker count.  Workers are
threads; the compiled decode kernel releases the GIL.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import __version__
from ._kernels import backend_name
from .channel import compute_llr, make_constellation, modulate, noise_sigma, transmit_awgn
from .code import ParityCheckMatrix, decompose, generator_rows, parse_alist_file
from .embed import EmbeddingKind, build_system
from .padmm import DecoderConfig, decode, per_iteration_op_counts


@dataclass
class CampaignConfig:
    code: ParityCheckMatrix | str
    q: int
    embedding: EmbeddingKind = EmbeddingKind.FLANAGAN
    modulation: str = "qpsk"
    snr_db: tuple = ()
    decoder: DecoderConfig = dc_field(default_factory=DecoderConfig)
    min_error_frames: int = 200
    max_frames: int = 1_000_000
    master_seed: int = 0
    workers: int = 1
    transmit: str = "zeros"  # or "random"
    batch_size: int = 256

    def __post_init__(self):
        if isinstance(self.embedding, str):
            self.embedding = (
                EmbeddingKind.FLANAGAN if self.embedding.lower() == "flanagan" else EmbeddingKind.CONSTANT_WEIGHT
            )
        self.snr_db = tuple(float(s) for s in self.snr_db)
        if not self.snr_db:
            raise ValueError("at least one SNR point is required")
        if self.min_error_frames < 1:
            raise ValueError("min_error_frames must be >= 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.transmit not in ("zeros", "random"):
            raise ValueError(f"transmit mode must be 'zeros' or 'random', got {self.transmit!r}")


@dataclass
class SnrPointResult:
    snr_db: float
    n: int
    frames: int
    frame_errors: int
    symbol_errors: int
    mean_iterations: float
    mean_decode_seconds: float
    converged_frames: int

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ser(self) -> float:
        return self.symbol_errors / (self.frames * self.n)


@dataclass
class CampaignResult:
    points: list
    mults_per_iteration: dict
    config: dict
    metadata: dict

    def to_csv(self, fh) -> None:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "snr_db",
                "frames",
                "frame_errors",
                "symbol_errors",
                "fer",
                "ser",
                "mean_iterations",
                "mean_decode_seconds",
                "converged_frames",
                "mults_per_iteration",
            ]
        )
        for pt in self.points:
            writer.writerow(
                [
                    pt.snr_db,
                    pt.frames,
                    pt.frame_errors,
                    pt.symbol_errors,
                    f"{pt.fer:.8g}",
                    f"{pt.ser:.8g}",
                    f"{pt.mean_iterations:.6g}",
                    f"{pt.mean_decode_seconds:.6g}",
                    pt.converged_frames,
                    self.mults_per_iteration["total"],
                ]
            )

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "metadata": self.metadata,
            "mults_per_iteration": self.mults_per_iteration,
            "points": [
                {
                    "snr_db": pt.snr_db,
                    "frames": pt.frames,
                    "frame_errors": pt.frame_errors,
                    "symbol_errors": pt.symbol_errors,
                    "fer": pt.fer,
                    "ser": pt.ser,
                    "mean_iterations": pt.mean_iterations,
                    "mean_decode_seconds": pt.mean_decode_seconds,
                    "converged_frames": pt.converged_frames,
                }
                for pt in self.points
            ],
        }
        return json.dumps(payload, indent=2)


def _load_code(cfg: CampaignConfig) -> ParityCheckMatrix:
    if isinstance(cfg.code, ParityCheckMatrix):
        mat = cfg.code
    else:
        mat = parse_alist_file(cfg.code, q=cfg.q)
    if mat.field.q != cfg.q:
        raise ValueError(f"code field GF(2^{mat.field.q}) does not match requested q={cfg.q}")
    return mat


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    mat = _load_code(cfg)
    code = decompose(mat)
    sys = build_system(code, cfg.embedding)
    con = make_constellation(cfg.modulation, q=cfg.q)
    basis = generator_rows(mat) if cfg.transmit == "random" else None
    gf = mat.field

    def one_frame(snr_idx: int, frame_idx: int):
        rng = np.random.default_rng((cfg.master_seed, snr_idx, frame_idx))
        if basis is not None and basis.shape[0] > 0:
            coeffs = rng.integers(0, gf.order, size=basis.shape[0])
            sent = np.zeros(mat.n, dtype=np.int64)
            for a, row in zip(coeffs, basis):
                if a:
                    sent ^= gf.mul_table[int(a), row]
        else:
            sent = np.zeros(mat.n, dtype=np.int64)
        snr = cfg.snr_db[snr_idx]
        rx = transmit_awgn(modulate(con, sent), snr, rng)
        llr = compute_llr(con, rx, cfg.embedding, noise_sigma(snr), num_aux=code.num_aux)
        t0 = time.perf_counter()
        res = decode(sys, cfg.decoder, llr)
        dt = time.perf_counter() - t0
        nerr = int(np.count_nonzero(res.symbols != sent))
        return nerr > 0, nerr, res.iterations, dt, res.converged

    points = []
    for snr_idx, snr in enumerate(cfg.snr_db):
        frames = 0
        frame_errors = 0
        symbol_errors = 0
        iter_sum = 0
        time_sum = 0.0
        converged = 0
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            while frames < cfg.max_frames and frame_errors < cfg.min_error_frames:
                batch = min(cfg.batch_size, cfg.max_frames - frames)
                idx = range(frames, frames + batch)
                results = list(pool.map(lambda f: one_frame(snr_idx, f), idx))
                for err, nerr, iters, dt, conv in results:
                    frame_errors += int(err)
                    symbol_errors += nerr
                    iter_sum += iters
                    time_sum += dt
                    converged += int(conv)
                frames += batch
        points.append(
            SnrPointResult(
                snr_db=snr,
                n=mat.n,
                frames=frames,
                frame_errors=frame_errors,
                symbol_errors=symbol_errors,
                mean_iterations=iter_sum / frames,
                mean_decode_seconds=time_sum / frames,
                converged_frames=converged,
            )
        )

    return CampaignResult(
        points=points,
        mults_per_iteration=per_iteration_op_counts(sys),
        config={
            "code": cfg.code if isinstance(cfg.code, str) else f"<in-memory {mat.m}x{mat.n}>",
            "q": cfg.q,
            "embedding": cfg.embedding.value,
            "modulation": cfg.modulation,
            "snr_db": list(cfg.snr_db),
            "decoder": {
                "mu": cfg.decoder.mu,
                "alpha": cfg.decoder.alpha,
                "rho": cfg.decoder.rho,
                "beta": cfg.decoder.beta,
                "t_max": cfg.decoder.t_max,
                "xi": cfg.decoder.xi,
            },
            "min_error_frames": cfg.min_error_frames,
            "max_frames": cfg.max_frames,
            "master_seed": cfg.master_seed,
            "workers": cfg.workers,
            "transmit": cfg.transmit,
            "batch_size": cfg.batch_size,
        },
        metadata={
            "package_version": __version__,
            "backend": backend_name(),
            "constellation_labeling": con.labeling,
            "n": mat.n,
            "m": mat.m,
            "num_aux": code.num_aux,
            "num_checks3": code.num_checks,
            "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        },
    )


def op_counter_report(code_or_system, cfg: CampaignConfig | None = None) -> dict:
    """Per-iteration multiplication counts split by update.

    Accepts a built constraint system, or a ParityCheckMatrix together with
    a CampaignConfig naming the embedding.
    """
    from .embed import ConstraintSystem

    if isinstance(code_or_system, ConstraintSystem):
        sys = code_or_system
    else:
        mat = code_or_system
        kind = cfg.embedding if cfg is not None else EmbeddingKind.FLANAGAN
        sys = build_system(decompose(mat), kind)
    return per_iteration_op_counts(sys)
