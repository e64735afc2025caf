"""Symbol modulation, AWGN, and per-symbol channel costs for the decoder.

One GF(2^q) symbol maps to one constellation point (q bits per channel use),
so the field order must match the modulation order.  Labeling is Gray for
QPSK and 16QAM and natural angular order for 8PSK; the choice is recorded in
campaign metadata since it shifts absolute error rates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import EmbeddingKind


@dataclass(frozen=True)
class Constellation:
    name: str
    q: int
    points: np.ndarray  # complex128, unit average energy, index = symbol
    labeling: str

    def __post_init__(self):
        if len(self.points) != 1 << self.q:
            raise ValueError("constellation size must be 2^q")


def _qpsk() -> Constellation:
    sym = np.arange(4)
    re = 1.0 - 2.0 * (sym & 1)
    im = 1.0 - 2.0 * ((sym >> 1) & 1)
    return Constellation("qpsk", 2, (re + 1j * im) / np.sqrt(2.0), "gray")


def _psk8() -> Constellation:
    sym = np.arange(8)
    return Constellation("8psk", 3, np.exp(2j * np.pi * sym / 8.0), "natural")


def _qam16() -> Constellation:
    # Per-axis Gray map of 2-bit labels to levels: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
    levels = np.array([-3.0, -1.0, 3.0, 1.0])
    sym = np.arange(16)
    re = levels[sym & 3]
    im = levels[(sym >> 2) & 3]
    return Constellation("16qam", 4, (re + 1j * im) / np.sqrt(10.0), "gray")


_BUILDERS = {"qpsk": _qpsk, "8psk": _psk8, "16qam": _qam16}


def make_constellation(name: str, q: int | None = None) -> Constellation:
    try:
        con = _BUILDERS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown constellation {name!r}; choose from {sorted(_BUILDERS)}") from None
    if q is not None and con.q != q:
        raise ValueError(f"constellation {name} carries {con.q} bits/symbol but the field has q={q}")
    return con


def modulate(constellation: Constellation, symbols) -> np.ndarray:
    s = np.asarray(symbols, dtype=np.int64)
    if np.any((s < 0) | (s >= len(constellation.points))):
        raise ValueError("symbol outside the constellation alphabet")
    return constellation.points[s]


def noise_sigma(es_n0_db: float) -> float:
    """Per-dimension noise standard deviation for a unit-energy constellation."""
    return float(np.sqrt(0.5 * 10.0 ** (-es_n0_db / 10.0)))


def transmit_awgn(samples: np.ndarray, es_n0_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add circular complex Gaussian noise; infinite Es/N0 passes through."""
    samples = np.asarray(samples, dtype=np.complex128)
    if np.isinf(es_n0_db):
        return samples.copy()
    sigma = noise_sigma(es_n0_db)
    noise = rng.standard_normal(samples.shape) + 1j * rng.standard_normal(samples.shape)
    return samples + sigma * noise


def nearest_symbols(constellation: Constellation, received: np.ndarray) -> np.ndarray:
    """Minimum-distance demapping (uncoded decision)."""
    r = np.asarray(received, dtype=np.complex128)
    d2 = np.abs(r[:, None] - constellation.points[None, :]) ** 2
    return d2.argmin(axis=1)


@dataclass(frozen=True)
class LLRVector:
    values: np.ndarray
    kind: EmbeddingKind


def compute_llr(
    constellation: Constellation,
    received: np.ndarray,
    kind: EmbeddingKind,
    sigma: float,
    num_aux: int = 0,
) -> LLRVector:
    """Per-(symbol, value) channel costs for the linear decoding objective.

    Flanagan entries are pairwise log-likelihood ratios against the zero
    symbol; constant-weight entries are negative log-likelihoods shifted by
    the per-symbol minimum (the shift is constant on each one-hot block, so
    it only offsets the objective).  Auxiliary blocks are appended as zeros.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    r = np.asarray(received, dtype=np.complex128)
    if not np.all(np.isfinite(r)):
        raise ValueError("received samples contain non-finite values")
    cost = np.abs(r[:, None] - constellation.points[None, :]) ** 2 / (2.0 * sigma**2)
    if kind is EmbeddingKind.FLANAGAN:
        vals = cost[:, 1:] - cost[:, :1]
    else:
        vals = cost - cost.min(axis=1, keepdims=True)
    block = kind.block_len(constellation.q)
    out = np.concatenate([vals.ravel(), np.zeros(num_aux * block)])
    return LLRVector(values=out, kind=kind)
