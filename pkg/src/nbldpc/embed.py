"""Binary embeddings of GF(2^q) symbols and the implicit constraint system.

Each decomposed three-variable check contributes, for every nonempty subset
of the q bit positions, a group of four parity-polytope inequalities acting
on summed and rotated indicator bits.  Together with one row per extended
symbol limiting (or, for the constant-weight embedding, fixing) the block
sum, these rows form the linear system ``A v <= rhs`` that the decoder
enforces.  A is never materialized: every row has entries in {-1, 0, +1}, so
both matvecs reduce to gathers, additions and sign flips over per-check
support index lists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .code import DecomposedCode
from .gf import GaloisField

# Parity-polytope description of even-weight binary triples: POLY_LHS f <= POLY_RHS.
POLY_LHS = np.array(
    [[1, -1, -1],
     [-1, 1, -1],
     [-1, -1, 1],
     [1, 1, 1]],
    dtype=np.float64,
)
POLY_RHS = np.array([0.0, 0.0, 0.0, 2.0])


class EmbeddingKind(enum.Enum):
    """Symbol-to-indicator embedding flavor.

    FLANAGAN drops the zero slot (block length 2^q - 1, the zero symbol maps
    to an all-zeros block); CONSTANT_WEIGHT keeps it (block length 2^q, every
    symbol maps to a one-hot block).
    """

    FLANAGAN = "flanagan"
    CONSTANT_WEIGHT = "cw"

    def block_len(self, q: int) -> int:
        return (1 << q) - 1 if self is EmbeddingKind.FLANAGAN else (1 << q)


def embed_word(kind: EmbeddingKind, symbols, field: GaloisField) -> np.ndarray:
    """Concatenated per-symbol indicator blocks for a GF symbol vector."""
    c = np.asarray(symbols, dtype=np.int64)
    b = kind.block_len(field.q)
    out = np.zeros(c.size * b, dtype=np.float64)
    for i, s in enumerate(c):
        field.check(int(s))
        if kind is EmbeddingKind.FLANAGAN:
            if s != 0:
                out[i * b + int(s) - 1] = 1.0
        else:
            out[i * b + int(s)] = 1.0
    return out


def _support_table(field: GaloisField, kind: EmbeddingKind) -> np.ndarray:
    """Local block offsets hit by each (coefficient, bit-subset) row family.

    Entry [h, l] lists the offsets of slots sigma whose rotated image
    sigma*h has odd parity on the bit positions selected by the mask l.
    Exactly 2^(q-1) slots qualify for every h != 0, l != 0; the zero slot of
    the constant-weight layout is never in support.
    """
    q = field.q
    order = field.order
    half = order // 2
    shift = 0 if kind is EmbeddingKind.CONSTANT_WEIGHT else 1
    table = np.zeros((order, order, half), dtype=np.int32)
    for h in range(1, order):
        for l in range(1, order):
            offsets = [
                sigma - shift
                for sigma in range(1, order)
                if bin(field.mul_table[h, sigma] & l).count("1") % 2 == 1
            ]
            if len(offsets) != half:
                raise AssertionError("rotated bit-parity support must cover half the slots")
            table[h, l] = offsets
    return table


@dataclass
class BlockInverse:
    """Closed-form coefficients of the per-block inverse (AtA + eps I)^-1.

    Every diagonal block of AtA shares one structure per embedding: for the
    Flanagan layout the inverse has ``diag_coeff`` on the diagonal and
    ``off_coeff`` elsewhere; the constant-weight layout is bordered by a
    zero-slot row/column with its own ``corner_coeff`` / ``border_coeff``.
    """

    eps: float
    diag_coeff: np.ndarray       # theta, per extended symbol
    off_coeff: np.ndarray        # omega
    corner_coeff: np.ndarray | None = None  # varsigma (constant-weight only)
    border_coeff: np.ndarray | None = None  # kappa   (constant-weight only)

    def dense_block(self, i: int, block_len: int) -> np.ndarray:
        m = np.full((block_len, block_len), self.off_coeff[i])
        np.fill_diagonal(m, self.diag_coeff[i])
        if self.corner_coeff is not None:
            m[0, :] = self.border_coeff[i]
            m[:, 0] = self.border_coeff[i]
            m[0, 0] = self.corner_coeff[i]
        return m


class ConstraintSystem:
    """Implicit constraint operator ``A`` (rows in {-1, 0, 1}) and its bound.

    Row layout: for check t and bit-subset l (in increasing mask order), four
    parity-polytope rows; after all ``4 * (2^q - 1) * num_checks`` inequality
    rows come the per-symbol block-sum rows (inequalities ``<= 1`` for the
    Flanagan embedding, equalities ``= 1`` for constant-weight).

    Immutable after construction; matvecs are pure.
    """

    def __init__(self, code: DecomposedCode, kind: EmbeddingKind):
        self.code = code
        self.kind = kind
        self.field = code.field
        q = self.field.q
        self.q = q
        self.order = self.field.order
        self.block_len = kind.block_len(q)
        self.num_blocks = code.num_symbols
        self.N = self.num_blocks * self.block_len
        self.num_subset_rows = self.order - 1
        self.M_ineq = 4 * self.num_subset_rows * code.num_checks
        self.M = self.M_ineq + self.num_blocks
        self.sum_rows_are_equalities = kind is EmbeddingKind.CONSTANT_WEIGHT

        self.support = _support_table(self.field, kind)
        self.var_offsets = np.array(
            [[v * self.block_len for v in chk.vars] for chk in code.checks], dtype=np.int32
        ).reshape(code.num_checks, 3)
        self.coeffs = np.array([chk.coeffs for chk in code.checks], dtype=np.int32)

        rhs = np.empty(self.M, dtype=np.float64)
        rhs[: self.M_ineq] = np.tile(POLY_RHS, self.num_subset_rows * code.num_checks)
        rhs[self.M_ineq:] = 1.0
        rhs.setflags(write=False)
        self.rhs = rhs

        # Gather index for vectorized matvecs: one row of supports per
        # (check, subset, arm) triple.
        half = self.order // 2
        nc = code.num_checks
        gidx = np.empty((nc, self.num_subset_rows, 3, half), dtype=np.int64)
        for t in range(nc):
            for k in range(3):
                base = self.var_offsets[t, k]
                h = self.coeffs[t, k]
                gidx[t, :, k, :] = base + self.support[h, 1: self.order]
        self._gidx = gidx.reshape(nc * self.num_subset_rows, 3, half)
        self._inv_cache: dict[float, BlockInverse] = {}

    # -- matvecs ---------------------------------------------------------

    def apply_A(self, v: np.ndarray) -> np.ndarray:
        """Exact product A v, built from gathers and sign combinations only."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.N,):
            raise ValueError(f"expected vector of length {self.N}, got {v.shape}")
        arms = v[self._gidx].sum(axis=2)  # (rows_per_kind, 3)
        f1, f2, f3 = arms[:, 0], arms[:, 1], arms[:, 2]
        out = np.empty(self.M, dtype=np.float64)
        quad = out[: self.M_ineq].reshape(-1, 4)
        quad[:, 0] = f1 - f2 - f3
        quad[:, 1] = f2 - f1 - f3
        quad[:, 2] = f3 - f1 - f2
        quad[:, 3] = f1 + f2 + f3
        out[self.M_ineq:] = v.reshape(self.num_blocks, self.block_len).sum(axis=1)
        return out

    def apply_At(self, u: np.ndarray) -> np.ndarray:
        """Exact product A^T u (additions and sign flips only)."""
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.M,):
            raise ValueError(f"expected vector of length {self.M}, got {u.shape}")
        quad = u[: self.M_ineq].reshape(-1, 4)
        s = np.empty((quad.shape[0], 3), dtype=np.float64)
        s[:, 0] = quad[:, 0] - quad[:, 1] - quad[:, 2] + quad[:, 3]
        s[:, 1] = quad[:, 1] - quad[:, 0] - quad[:, 2] + quad[:, 3]
        s[:, 2] = quad[:, 2] - quad[:, 0] - quad[:, 1] + quad[:, 3]
        out = np.repeat(
            u[self.M_ineq:], self.block_len
        )  # block-sum rows contribute their value to every slot
        np.add.at(out, self._gidx, s[:, :, None])
        return out

    # -- closed-form block inverse ----------------------------------------

    def inverse_coefficients(self, eps: float) -> BlockInverse:
        """Per-block coefficients of (A_i^T A_i + eps I)^-1 from symbol degrees."""
        cached = self._inv_cache.get(eps)
        if cached is None:
            cached = block_inverse(self.kind, self.q, self.code.degrees, eps)
            self._inv_cache[eps] = cached
        return cached

    def min_eigenvalue_ata(self) -> float:
        """Smallest eigenvalue of A^T A, from the per-block structure.

        Diagnostic only (relates the quadratic-penalty weight to the
        convergence theory); configurations are never gated on it.
        """
        d_min = int(self.code.degrees.min())
        if self.kind is EmbeddingKind.FLANAGAN:
            return float(self.order * d_min)
        vals = []
        for d in np.unique(self.code.degrees):
            blk = self.dense_block_ata(int(d))
            vals.append(np.linalg.eigvalsh(blk).min())
        return float(min(vals))

    def dense_block_ata(self, degree: int) -> np.ndarray:
        """Dense A_i^T A_i for a symbol of the given degree (test/diagnostic)."""
        return dense_ata_block(self.kind, self.q, degree)


def block_inverse(kind: EmbeddingKind, q: int, degrees, eps: float) -> BlockInverse:
    """Closed-form coefficients of each (A_i^T A_i + eps I)^-1 block.

    Each block has constant diagonal and off-diagonal entries (bordered by
    the zero-slot row/column in the constant-weight layout), so its inverse
    shares that structure and the coefficients solve a small linear system;
    the diagonal-minus-off-diagonal gap is 1/(2^q d + eps) for both layouts.
    Requires eps > 0: the blocks can be singular otherwise.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = np.asarray(degrees, dtype=np.float64)
    two_q = float(1 << q)
    if kind is EmbeddingKind.FLANAGAN:
        denom = (two_q * d + eps) * ((2 * two_q * d + eps + 1) + (two_q * d + 1) * (two_q - 2))
        off = -(two_q * d + 1) / denom
        diag = off + 1.0 / (two_q * d + eps)
        return BlockInverse(eps=eps, diag_coeff=diag, off_coeff=off)
    shared = eps * eps + two_q * eps + two_q * two_q * d * (1 + eps)
    border = -1.0 / shared
    corner = (two_q * (two_q * d + 1) + eps - 1) / shared
    off = -(two_q * d * (1 + eps) + eps) / ((two_q * d + eps) * shared)
    diag = off + 1.0 / (two_q * d + eps)
    return BlockInverse(eps=eps, diag_coeff=diag, off_coeff=off, corner_coeff=corner, border_coeff=border)


def dense_ata_block(kind: EmbeddingKind, q: int, degree: int) -> np.ndarray:
    """Dense A_i^T A_i for one symbol of the given degree (oracle for the above)."""
    order = 1 << q
    b = kind.block_len(q)
    phi = np.full((order - 1, order - 1), order // 4, dtype=np.float64)
    np.fill_diagonal(phi, order // 2)
    blk = np.ones((b, b), dtype=np.float64)
    if kind is EmbeddingKind.FLANAGAN:
        blk += 4.0 * degree * phi
    else:
        blk[1:, 1:] += 4.0 * degree * phi
    return blk


def build_system(code: DecomposedCode, kind: EmbeddingKind) -> ConstraintSystem:
    return ConstraintSystem(code, kind)
