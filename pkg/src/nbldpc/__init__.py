"""Proximal-ADMM decoding toolkit for nonbinary LDPC codes over GF(2^q)."""

from ._kernels import backend_name
from .channel import Constellation, LLRVector, compute_llr, make_constellation, modulate, transmit_awgn
from .code import (
    AlistParseError,
    DecomposedCode,
    ParityCheckMatrix,
    ThreeVarCheck,
    decompose,
    parse_alist,
    parse_alist_file,
    symbol_degrees,
)
from .embed import BlockInverse, ConstraintSystem, EmbeddingKind, build_system, embed_word
from .gf import GaloisField, bits_of, gf_add, gf_mul, rotate_index
from .padmm import (
    DecodeResult,
    DecoderConfig,
    decode,
    hard_decision,
    per_iteration_op_counts,
    precompute,
    proximal_epsilon,
)

__version__ = "0.1.0"

__all__ = [
    "AlistParseError",
    "BlockInverse",
    "Constellation",
    "ConstraintSystem",
    "DecodeResult",
    "DecoderConfig",
    "DecomposedCode",
    "EmbeddingKind",
    "GaloisField",
    "LLRVector",
    "ParityCheckMatrix",
    "ThreeVarCheck",
    "backend_name",
    "bits_of",
    "build_system",
    "compute_llr",
    "decode",
    "decompose",
    "embed_word",
    "gf_add",
    "gf_mul",
    "hard_decision",
    "make_constellation",
    "modulate",
    "parse_alist",
    "parse_alist_file",
    "per_iteration_op_counts",
    "precompute",
    "proximal_epsilon",
    "rotate_index",
    "symbol_degrees",
    "transmit_awgn",
]
