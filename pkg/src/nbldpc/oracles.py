"""Dense and brute-force references used by tests and acceptance runs only.

Everything here rebuilds structure from first principles (dense rotation and
bit-selection matrices, exhaustive enumeration) rather than reusing the
decoder's index lists, and sits behind size guards; none of it belongs on a
hot path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import DecomposedCode, ParityCheckMatrix, decompose, extended_word
from .embed import POLY_LHS, POLY_RHS, ConstraintSystem, EmbeddingKind, embed_word
from .gf import GaloisField
from .padmm import DecoderConfig, NumpyLoop, precompute


@dataclass(frozen=True)
class DenseSystem:
    A: np.ndarray
    rhs: np.ndarray


def dense_rotation(field: GaloisField, h: int, kind: EmbeddingKind) -> np.ndarray:
    """Permutation matrix moving indicator slot j to slot j*h, built densely."""
    if h == 0:
        raise ValueError("rotation is only defined for nonzero multipliers")
    order = field.order
    if kind is EmbeddingKind.FLANAGAN:
        d = np.zeros((order - 1, order - 1))
        for j in range(1, order):
            d[field.mul(h, j) - 1, j - 1] = 1.0
    else:
        d = np.zeros((order, order))
        d[0, 0] = 1.0
        for j in range(1, order):
            d[field.mul(h, j), j] = 1.0
    return d


def dense_bit_row(field: GaloisField, mask: int, kind: EmbeddingKind) -> np.ndarray:
    """GF(2)-summed bit-selection row over the indicator slots of one block."""
    order = field.order
    sigmas = range(1, order) if kind is EmbeddingKind.FLANAGAN else range(order)
    return np.array([bin(s & mask).count("1") % 2 for s in sigmas], dtype=np.float64)


def dense_constraint_matrix(sys: ConstraintSystem, max_n: int = 5000) -> DenseSystem:
    """Materialize A and its bound row by row from the defining products."""
    if sys.N > max_n:
        raise ValueError(f"dense oracle limited to N <= {max_n}, got {sys.N}")
    field = sys.field
    b = sys.block_len
    a = np.zeros((sys.M, sys.N))
    row = 0
    for chk in sys.code.checks:
        rot = [dense_rotation(field, h, sys.kind) for h in chk.coeffs]
        for mask in range(1, field.order):
            sel = dense_bit_row(field, mask, sys.kind)
            arms = np.zeros((3, 3 * b))
            for k in range(3):
                arms[k, k * b : (k + 1) * b] = sel @ rot[k]
            quad = POLY_LHS @ arms  # 4 x 3b
            for k, var in enumerate(chk.vars):
                a[row : row + 4, var * b : (var + 1) * b] = quad[:, k * b : (k + 1) * b]
            row += 4
    for i in range(sys.num_blocks):
        a[row + i, i * b : (i + 1) * b] = 1.0
    rhs = np.concatenate(
        [np.tile(POLY_RHS, sys.code.num_checks * (field.order - 1)), np.ones(sys.num_blocks)]
    )
    return DenseSystem(A=a, rhs=rhs)


def write_matrix_market(sys: ConstraintSystem, path) -> None:
    """Debug dump of the dense constraint matrix in matrix-market coordinates."""
    dense = dense_constraint_matrix(sys)
    rows, cols = np.nonzero(dense.A)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write("% bound vector appended as comment rows\n")
        fh.write(f"{dense.A.shape[0]} {dense.A.shape[1]} {len(rows)}\n")
        for r, c in zip(rows, cols):
            fh.write(f"{r + 1} {c + 1} {dense.A[r, c]:.0f}\n")
        for j, val in enumerate(dense.rhs):
            fh.write(f"% rhs {j + 1} {val:.0f}\n")


def _all_words(order: int, length: int) -> np.ndarray:
    """All symbol vectors of the given length, lexicographic, shape (order^length, length)."""
    total = order**length
    words = np.empty((total, length), dtype=np.int64)
    for pos in range(length):
        reps = order ** (length - pos - 1)
        words[:, pos] = np.tile(np.repeat(np.arange(order), reps), total // (reps * order))
    return words


def enumerate_codewords(mat: ParityCheckMatrix, guard: int = 1 << 20) -> np.ndarray:
    if mat.field.order**mat.n > guard:
        raise ValueError("codeword enumeration guard exceeded")
    words = _all_words(mat.field.order, mat.n)
    ok = ~np.any(mat.syndrome(words), axis=-1)
    return words[ok]


def ml_brute_force(mat: ParityCheckMatrix, llr, kind: EmbeddingKind) -> np.ndarray:
    """Exhaustive minimizer of the embedded linear cost over all codewords.

    Includes the forced auxiliary blocks so the objective matches the
    decoder's; ties resolve to the lexicographically smallest codeword.
    """
    values = np.asarray(getattr(llr, "values", llr), dtype=np.float64)
    code = decompose(mat)
    block = kind.block_len(mat.field.q)
    if values.shape != (code.num_symbols * block,):
        raise ValueError("cost vector length does not match the decomposed code")
    best_cost = np.inf
    best = None
    for cand in enumerate_codewords(mat):
        ext = extended_word(code, cand)
        cost = float(values @ embed_word(kind, ext, mat.field))
        if cost < best_cost - 1e-12:
            best_cost = cost
            best = cand
    return best


def check_decomposition_equivalence(mat: ParityCheckMatrix, guard: int = 1 << 22) -> dict:
    """Exhaustively compare the decomposed system's solutions with {c : Hc = 0}.

    Returns counts plus two flags: ``equivalent`` (projections agree) and
    ``one_to_one`` (each codeword extends to exactly one auxiliary fill).
    """
    code = decompose(mat)
    gf = mat.field
    total = gf.order**code.num_symbols
    if total > guard:
        raise ValueError("assignment enumeration guard exceeded")
    words = _all_words(gf.order, code.num_symbols)
    ok = np.ones(total, dtype=bool)
    for chk in code.checks:
        acc = gf.mul_table[chk.coeffs[0], words[:, chk.vars[0]]]
        acc = acc ^ gf.mul_table[chk.coeffs[1], words[:, chk.vars[1]]]
        acc = acc ^ gf.mul_table[chk.coeffs[2], words[:, chk.vars[2]]]
        ok &= acc == 0
    satisfying = words[ok]
    projected = np.unique(satisfying[:, : mat.n], axis=0)
    direct = enumerate_codewords(mat)
    equivalent = projected.shape == direct.shape and bool(np.all(projected == direct))
    return {
        "equivalent": equivalent,
        "one_to_one": satisfying.shape[0] == direct.shape[0],
        "codewords": int(direct.shape[0]),
        "satisfying_assignments": int(satisfying.shape[0]),
    }


def relative_shift(kind: EmbeddingKind, v: np.ndarray, shift, field: GaloisField) -> np.ndarray:
    """Per-block slot permutation by field addition of a shift word.

    Output slot sigma of block i reads input slot sigma + shift_i (GF
    addition, i.e. XOR of labels).  Norm preserving and self-inverse; only
    meaningful for the constant-weight layout, whose blocks carry all 2^q
    slots.
    """
    if kind is not EmbeddingKind.CONSTANT_WEIGHT:
        raise ValueError("relative shift is defined for constant-weight blocks only")
    order = field.order
    shift = np.asarray(shift, dtype=np.int64)
    v2 = np.asarray(v, dtype=np.float64).reshape(shift.size, order)
    idx = np.arange(order)[None, :] ^ shift[:, None]
    return v2[np.arange(shift.size)[:, None], idx].ravel()


def iterate_symmetry_report(
    sys: ConstraintSystem,
    cfg: DecoderConfig,
    llr,
    shift,
    tol: float = 1e-9,
) -> dict:
    """Observe whether iterates track a block-shifted cost vector.

    Runs the decoder on the cost vector and on its relative shift, comparing
    the shifted iterates each sweep.  Reports the first iteration where they
    part ways (``None`` if they never do) -- an observation, not an invariant
    of this splitting.
    """
    values = np.asarray(getattr(llr, "values", llr), dtype=np.float64)
    shifted = relative_shift(sys.kind, values, shift, sys.field)
    pre = precompute(sys, cfg)
    base = NumpyLoop(pre, values)
    other = NumpyLoop(pre, shifted)
    first = None
    max_dev = 0.0
    stop_a = stop_b = 0
    for it in range(cfg.t_max):
        ra = base.step()
        rb = other.step()
        dev = float(np.max(np.abs(relative_shift(sys.kind, base.v, shift, sys.field) - other.v)))
        max_dev = max(max_dev, dev)
        if dev > tol and first is None:
            first = it + 1
        stop_a = 1 if ra[0] <= cfg.xi or ra[1] <= cfg.xi else 0
        stop_b = 1 if rb[0] <= cfg.xi or rb[1] <= cfg.xi else 0
        if stop_a or stop_b:
            break
    return {
        "first_divergence": first,
        "iterations": base.iterations,
        "max_deviation": max_dev,
        "stopped_together": stop_a == stop_b,
    }


def feasible_samples(
    sys: ConstraintSystem,
    count: int,
    rng: np.random.Generator,
    codewords: np.ndarray | None = None,
    tol: float = 1e-9,
) -> np.ndarray:
    """Random feasible points of the relaxed polytope, exactly filtered.

    Candidates mix uniform box draws with convex combinations of embedded
    codewords (the polytope's known integral points); every candidate is
    kept only if it passes the box bound, A v <= rhs, and (constant-weight)
    the block-sum equalities.  Plain box rejection alone has vanishing
    acceptance beyond toy sizes, hence the mixture.
    """
    code = sys.code
    vertices = []
    if codewords is not None:
        for c in codewords:
            vertices.append(embed_word(sys.kind, extended_word(code, c), sys.field))
    out = []
    attempts = 0
    cw = sys.sum_rows_are_equalities
    while len(out) < count and attempts < 200 * count:
        attempts += 1
        if vertices and (rng.random() < 0.9 or cw):
            k = rng.integers(1, min(4, len(vertices)) + 1)
            picks = rng.integers(0, len(vertices), size=k)
            weights = rng.dirichlet(np.ones(k))
            cand = np.zeros(sys.N)
            for w, idx in zip(weights, picks):
                cand += w * vertices[idx]
            if not cw:
                cand *= rng.random()  # the Flanagan polytope is star-shaped about 0
        else:
            cand = rng.random(sys.N)
        if np.any(cand < -tol) or np.any(cand > 1 + tol):
            continue
        av = sys.apply_A(cand)
        if np.any(av > sys.rhs + tol):
            continue
        if cw and np.any(np.abs(av[sys.M_ineq :] - 1.0) > tol):
            continue
        out.append(cand)
    if len(out) < count:
        raise RuntimeError(f"could only sample {len(out)} of {count} feasible points")
    return np.array(out)
