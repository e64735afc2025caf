import itertools

import numpy as np
import pytest

from nbldpc.code import build_matrix, decompose, extended_word
from nbldpc.embed import (
    POLY_LHS,
    POLY_RHS,
    EmbeddingKind,
    block_inverse,
    build_system,
    dense_ata_block,
    embed_word,
)
from nbldpc.gf import GaloisField
from nbldpc.oracles import dense_constraint_matrix, enumerate_codewords

BOTH = [EmbeddingKind.FLANAGAN, EmbeddingKind.CONSTANT_WEIGHT]


def test_embed_examples(gf4):
    assert embed_word(EmbeddingKind.FLANAGAN, [0, 1, 2, 3], gf4).tolist() == [
        0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1,
    ]
    assert embed_word(EmbeddingKind.CONSTANT_WEIGHT, [0], gf4).tolist() == [1, 0, 0, 0]
    assert not embed_word(EmbeddingKind.FLANAGAN, [0, 0, 0], gf4).any()


def test_block_lengths(gf8):
    assert EmbeddingKind.FLANAGAN.block_len(3) == 7
    assert EmbeddingKind.CONSTANT_WEIGHT.block_len(3) == 8


@pytest.mark.parametrize("kind", BOTH)
def test_row_counts(tiny_code, kind):
    sys = build_system(tiny_code, kind)
    assert sys.M_ineq == 4 * 3 * tiny_code.num_checks
    assert sys.M == sys.M_ineq + tiny_code.num_symbols
    assert sys.N == tiny_code.num_symbols * kind.block_len(2)


@pytest.mark.parametrize("kind", BOTH)
def test_dense_entries_are_signs(tiny_code, kind):
    dense = dense_constraint_matrix(build_system(tiny_code, kind))
    assert set(np.unique(dense.A)) <= {-1.0, 0.0, 1.0}


def test_explicit_quad_block_unit_coefficients(gf4):
    # single check with all coefficients 1: the first bit-subset selects the
    # odd slots {1, 3}, so the mask over slots (1, 2, 3) is (1, 0, 1)
    mat = build_matrix(3, 1, [[(0, 1), (1, 1), (2, 1)]], gf4)
    sys = build_system(decompose(mat), EmbeddingKind.FLANAGAN)
    dense = dense_constraint_matrix(sys)
    m = [1.0, 0.0, 1.0]
    expected = np.array(
        [
            m + [-x for x in m] + [-x for x in m],
            [-x for x in m] + m + [-x for x in m],
            [-x for x in m] + [-x for x in m] + m,
            m + m + m,
        ]
    )
    assert np.array_equal(dense.A[:4], expected)


@pytest.mark.parametrize("kind", BOTH)
def test_apply_zero_vector(tiny_code, kind):
    sys = build_system(tiny_code, kind)
    out = sys.apply_A(np.zeros(sys.N))
    assert not out.any()
    assert np.all(sys.rhs >= 0)


@pytest.mark.parametrize("kind", BOTH)
def test_matvecs_match_dense(tiny_code, kind):
    sys = build_system(tiny_code, kind)
    dense = dense_constraint_matrix(sys)
    assert np.array_equal(dense.rhs, sys.rhs)
    rng = np.random.default_rng(2)
    for _ in range(100):
        v = rng.standard_normal(sys.N)
        assert np.allclose(sys.apply_A(v), dense.A @ v, atol=1e-12)
        u = rng.standard_normal(sys.M)
        assert np.allclose(sys.apply_At(u), dense.A.T @ u, atol=1e-12)


@pytest.mark.parametrize("q,n,m,dc", [(3, 12, 4, 6), (4, 10, 2, 5)])
@pytest.mark.parametrize("kind", BOTH)
def test_matvecs_match_dense_larger_fields(q, n, m, dc, kind):
    from util_codes import make_regular_code

    sys = build_system(decompose(make_regular_code(n, m, dc, q, seed=q * 10)), kind)
    dense = dense_constraint_matrix(sys)
    rng = np.random.default_rng(q)
    v = rng.standard_normal(sys.N)
    u = rng.standard_normal(sys.M)
    assert np.allclose(sys.apply_A(v), dense.A @ v, atol=1e-12)
    assert np.allclose(sys.apply_At(u), dense.A.T @ u, atol=1e-12)


def test_matvec_integer_exactness(tiny_code):
    # on integer inputs the gather/sign path is exact integer arithmetic
    sys = build_system(tiny_code, EmbeddingKind.FLANAGAN)
    dense = dense_constraint_matrix(sys)
    rng = np.random.default_rng(3)
    v = rng.integers(-5, 6, size=sys.N).astype(np.float64)
    assert np.array_equal(sys.apply_A(v), dense.A @ v)


@pytest.mark.parametrize("kind", BOTH)
def test_dimension_mismatch(tiny_code, kind):
    sys = build_system(tiny_code, kind)
    with pytest.raises(ValueError):
        sys.apply_A(np.zeros(sys.N + 1))
    with pytest.raises(ValueError):
        sys.apply_At(np.zeros(sys.M - 1))


@pytest.mark.parametrize("kind", BOTH)
def test_embedded_codewords_feasible(tiny_code, kind):
    sys = build_system(tiny_code, kind)
    for c in enumerate_codewords(tiny_code.base):
        ext = extended_word(tiny_code, c)
        v = embed_word(kind, ext, tiny_code.field)
        av = sys.apply_A(v)
        assert np.all(av <= sys.rhs + 1e-12)
        sums = av[sys.M_ineq :]
        if kind is EmbeddingKind.CONSTANT_WEIGHT:
            assert np.array_equal(sums, np.ones(tiny_code.num_symbols))
        else:
            assert np.array_equal(sums, (ext != 0).astype(float))


def test_poly_lhs_self_product():
    assert np.array_equal(POLY_LHS.T @ POLY_LHS, 4 * np.eye(3))


def test_parity_inequalities_iff_even_triple():
    # binary triples satisfy the four inequalities exactly when XOR-free
    for f in itertools.product([0, 1], repeat=3):
        ok = np.all(POLY_LHS @ np.array(f, dtype=float) <= POLY_RHS)
        assert ok == ((f[0] ^ f[1] ^ f[2]) == 0)


def test_flanagan_gram_matrix_structure(tiny_code):
    sys = build_system(tiny_code, EmbeddingKind.FLANAGAN)
    dense = dense_constraint_matrix(sys)
    gram = dense.A.T @ dense.A
    b = sys.block_len
    expected = np.zeros_like(gram)
    for i, d in enumerate(tiny_code.degrees):
        expected[i * b : (i + 1) * b, i * b : (i + 1) * b] = dense_ata_block(
            EmbeddingKind.FLANAGAN, 2, int(d)
        )
    assert np.array_equal(gram, expected)


def test_cw_gram_matrix_structure(two_check_code):
    sys = build_system(two_check_code, EmbeddingKind.CONSTANT_WEIGHT)
    dense = dense_constraint_matrix(sys)
    gram = dense.A.T @ dense.A
    b = sys.block_len
    for i, d in enumerate(two_check_code.degrees):
        blk = gram[i * b : (i + 1) * b, i * b : (i + 1) * b]
        assert np.array_equal(blk, dense_ata_block(EmbeddingKind.CONSTANT_WEIGHT, 2, int(d)))


@pytest.mark.parametrize("kind", BOTH)
def test_inverse_identity_spot(kind):
    inv = block_inverse(kind, 2, np.array([2]), 0.5)
    blk = dense_ata_block(kind, 2, 2) + 0.5 * np.eye(kind.block_len(2))
    ident = blk @ inv.dense_block(0, kind.block_len(2))
    assert np.max(np.abs(ident - np.eye(kind.block_len(2)))) < 1e-10


def test_flanagan_off_coefficient_negative():
    for q in (2, 3, 4):
        for d in range(1, 9):
            for eps in (0.5, 1.03, 2.0):
                inv = block_inverse(EmbeddingKind.FLANAGAN, q, np.array([d]), eps)
                assert inv.off_coeff[0] < 0


def test_inverse_rejects_nonpositive_eps(tiny_code):
    sys = build_system(tiny_code, EmbeddingKind.FLANAGAN)
    with pytest.raises(ValueError):
        sys.inverse_coefficients(0.0)
    with pytest.raises(ValueError):
        sys.inverse_coefficients(-1.0)


def test_inverse_cache_reused(tiny_code):
    sys = build_system(tiny_code, EmbeddingKind.FLANAGAN)
    assert sys.inverse_coefficients(1.0) is sys.inverse_coefficients(1.0)


def _pruned_binary_candidates(sys):
    """All binary vectors whose blocks pass the block-sum rows."""
    b = sys.block_len
    if sys.kind is EmbeddingKind.CONSTANT_WEIGHT:
        block_patterns = list(np.eye(b))
    else:
        block_patterns = [np.zeros(b)] + list(np.eye(b))
    for combo in itertools.product(block_patterns, repeat=sys.num_blocks):
        yield np.concatenate(combo)


@pytest.mark.parametrize("kind", BOTH)
def test_integrality_tightness_tiny(two_check_code, kind):
    # binary feasible vectors biject with embedded (codeword, auxiliary) pairs
    sys = build_system(two_check_code, kind)
    assert sys.N <= 18
    dense = dense_constraint_matrix(sys)
    feasible = set()
    for v in _pruned_binary_candidates(sys):
        av = dense.A @ v
        if np.all(av[: sys.M_ineq] <= dense.rhs[: sys.M_ineq] + 1e-9):
            if kind is EmbeddingKind.CONSTANT_WEIGHT and not np.all(av[sys.M_ineq :] == 1):
                continue
            if kind is EmbeddingKind.FLANAGAN and not np.all(av[sys.M_ineq :] <= 1):
                continue
            feasible.add(tuple(v.astype(int)))
    expected = {
        tuple(embed_word(kind, extended_word(two_check_code, c), two_check_code.field).astype(int))
        for c in enumerate_codewords(two_check_code.base)
    }
    assert feasible == expected


def test_min_eigenvalue_diagnostic(two_check_code):
    sysF = build_system(two_check_code, EmbeddingKind.FLANAGAN)
    dense = dense_constraint_matrix(sysF)
    lam = np.linalg.eigvalsh(dense.A.T @ dense.A).min()
    assert sysF.min_eigenvalue_ata() == pytest.approx(lam, abs=1e-8)
    sysC = build_system(two_check_code, EmbeddingKind.CONSTANT_WEIGHT)
    denseC = dense_constraint_matrix(sysC)
    lamC = np.linalg.eigvalsh(denseC.A.T @ denseC.A).min()
    assert sysC.min_eigenvalue_ata() == pytest.approx(lamC, abs=1e-8)


def test_embed_rejects_bad_symbol(gf4):
    with pytest.raises(ValueError):
        embed_word(EmbeddingKind.FLANAGAN, [4], gf4)
