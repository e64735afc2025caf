"""Parity-check matrices over GF(2^q) and their three-variable decomposition.

Every check of degree d >= 3 is chained into d-2 checks over exactly three
variables by introducing d-3 fresh auxiliary symbols: the first check takes
the first two code symbols, each middle check takes one code symbol and the
two neighbouring auxiliaries, and the last check takes the final two code
symbols.  Auxiliary coefficients are 1.  Symbols are consumed in increasing
column order and auxiliary indices are allocated row by row, so the
decomposition is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import GaloisField


class AlistParseError(ValueError):
    """Raised when a code file cannot be parsed into a valid parity-check matrix."""


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse parity-check matrix: per-row lists of (column, coefficient).

    Invariants: coefficients nonzero, column indices strictly increasing
    within a row, every row degree >= 3.  Columns are 0-based internally.
    """

    n: int
    m: int
    rows: tuple  # tuple of tuples of (col, coeff)
    field: GaloisField

    def row_degrees(self) -> np.ndarray:
        return np.array([len(r) for r in self.rows], dtype=np.int64)

    def dense(self) -> np.ndarray:
        h = np.zeros((self.m, self.n), dtype=np.int64)
        for j, row in enumerate(self.rows):
            for col, coeff in row:
                h[j, col] = coeff
        return h

    def syndrome(self, symbols) -> np.ndarray:
        """H c over GF(2^q) for a length-n symbol vector (or batch, last axis n)."""
        c = np.asarray(symbols, dtype=np.int64)
        out = np.zeros(c.shape[:-1] + (self.m,), dtype=np.int64)
        for j, row in enumerate(self.rows):
            acc = np.zeros(c.shape[:-1], dtype=np.int64)
            for col, coeff in row:
                acc ^= self.field.mul_table[coeff, c[..., col]]
            out[..., j] = acc
        return out


def build_matrix(n: int, m: int, rows, field: GaloisField) -> ParityCheckMatrix:
    """Validate and freeze row data into a ParityCheckMatrix."""
    if len(rows) != m:
        raise AlistParseError(f"expected {m} rows, got {len(rows)}")
    frozen = []
    for j, row in enumerate(rows):
        if len(row) < 3:
            raise AlistParseError(f"row {j + 1} has degree {len(row)} < 3")
        cols = [c for c, _ in row]
        if any(not 0 <= c < n for c in cols):
            raise AlistParseError(f"row {j + 1} has a column index outside 1..{n}")
        if len(set(cols)) != len(cols):
            raise AlistParseError(f"row {j + 1} repeats a column index")
        for c, v in row:
            if not 1 <= v < field.order:
                raise AlistParseError(
                    f"row {j + 1}, column {c + 1}: coefficient {v} outside 1..{field.order - 1}"
                )
        frozen.append(tuple(sorted(row)))
    return ParityCheckMatrix(n=n, m=m, rows=tuple(frozen), field=field)


def _int_lines(text: str):
    """Non-empty lines parsed into integer lists ('#' starts a comment)."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        toks = body.split()
        if not toks:
            continue
        try:
            out.append([int(t) for t in toks])
        except ValueError:
            raise AlistParseError(f"line {lineno}: malformed integer field in {body.strip()!r}") from None
    return out


def _next_line(lines, pos: int, what: str):
    if pos >= len(lines):
        raise AlistParseError(f"unexpected end of file while reading {what}")
    return lines[pos], pos + 1


def parse_alist(text: str, q: int | None = None, values: str | None = None) -> ParityCheckMatrix:
    """Parse an alist description of a parity-check matrix over GF(2^q).

    Two line-oriented layouts are accepted (see README for the grammar):

    * Nonbinary alist: header ``n m q``, then max column/row degrees, the
      per-column and per-row degree lists, and one line per row holding
      ``col val`` pairs with ``val`` in 1..2^q-1.
    * Standard binary alist (header ``n m``): the usual per-column and
      per-row index lines, zero-padded entries allowed.  ``q`` must then be
      given explicitly; entries are cast to the coefficient 1 in GF(2^q)
      unless ``values`` supplies one coefficient per row entry, in row
      order.
    """
    lines = _int_lines(text)
    header, pos = _next_line(lines, 0, "header")
    if len(header) not in (2, 3):
        raise AlistParseError(f"malformed header: expected 'n m [q]', got {header}")
    n, m = header[0], header[1]
    if n <= 0 or m <= 0:
        raise AlistParseError(f"malformed header: n={n}, m={m}")
    nonbinary = len(header) == 3
    if nonbinary:
        if q is not None and q != header[2]:
            raise AlistParseError(f"header declares q={header[2]} but q={q} was requested")
        q = header[2]
        if values is not None:
            raise AlistParseError("separate value file only applies to binary alist input")
    elif q is None:
        raise AlistParseError("binary alist input requires an explicit q")
    field = GaloisField(q)

    _, pos = _next_line(lines, pos, "max degrees")
    col_deg, pos = _next_line(lines, pos, "column degrees")
    row_deg, pos = _next_line(lines, pos, "row degrees")
    if len(col_deg) != n:
        raise AlistParseError(f"expected {n} column degrees, got {len(col_deg)}")
    if len(row_deg) != m:
        raise AlistParseError(f"expected {m} row degrees, got {len(row_deg)}")

    rows = []
    if nonbinary:
        for j in range(m):
            entry, pos = _next_line(lines, pos, f"row {j + 1} entries")
            if len(entry) != 2 * row_deg[j]:
                raise AlistParseError(
                    f"row {j + 1}: expected {row_deg[j]} (column, value) pairs, got {entry}"
                )
            row = []
            for k in range(row_deg[j]):
                col, val = entry[2 * k], entry[2 * k + 1]
                if not 1 <= col <= n:
                    raise AlistParseError(f"row {j + 1}: column index {col} out of range 1..{n}")
                if val == 0:
                    raise AlistParseError(f"row {j + 1}, column {col}: zero coefficient")
                row.append((col - 1, val))
            rows.append(row)
    else:
        for i in range(n):  # per-column row-index lines, validated and skipped
            block, pos = _next_line(lines, pos, f"column {i + 1} indices")
            live = [r for r in block if r != 0]
            if len(live) != col_deg[i]:
                raise AlistParseError(f"column {i + 1}: expected {col_deg[i]} row indices")
            if any(not 1 <= r <= m for r in live):
                raise AlistParseError(f"column {i + 1}: row index out of range")
        vals_iter = iter(values.split()) if values is not None else None
        for j in range(m):
            block, pos = _next_line(lines, pos, f"row {j + 1} indices")
            live = [c for c in block if c != 0]
            if len(live) != row_deg[j]:
                raise AlistParseError(f"row {j + 1}: expected {row_deg[j]} column indices")
            row = []
            for col in live:
                if not 1 <= col <= n:
                    raise AlistParseError(f"row {j + 1}: column index {col} out of range 1..{n}")
                if vals_iter is not None:
                    try:
                        val = int(next(vals_iter))
                    except StopIteration:
                        raise AlistParseError("value file has fewer entries than the alist") from None
                else:
                    val = 1
                if val == 0:
                    raise AlistParseError(f"row {j + 1}, column {col}: zero coefficient")
                row.append((col - 1, val))
            rows.append(row)
    mat = build_matrix(n, m, rows, field)
    _check_col_degrees(mat, col_deg)
    return mat


def _check_col_degrees(mat: ParityCheckMatrix, declared) -> None:
    actual = np.zeros(mat.n, dtype=np.int64)
    for row in mat.rows:
        for col, _ in row:
            actual[col] += 1
    if list(actual) != list(declared):
        raise AlistParseError("declared column degrees do not match row entries")


def parse_alist_file(path, q: int | None = None, values_path=None) -> ParityCheckMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    values = None
    if values_path is not None:
        with open(values_path, "r", encoding="utf-8") as fh:
            values = fh.read()
    return parse_alist(text, q=q, values=values)


@dataclass(frozen=True)
class ThreeVarCheck:
    """One decomposed check: h1*v1 + h2*v2 + h3*v3 = 0 over GF(2^q).

    Variable indices address the extended vector of length n + num_aux;
    indices >= n are auxiliary symbols (always with coefficient 1).
    """

    vars: tuple
    coeffs: tuple


@dataclass(frozen=True)
class DecomposedCode:
    base: ParityCheckMatrix
    checks: tuple  # of ThreeVarCheck
    num_aux: int
    degrees: np.ndarray = dc_field(repr=False)  # per extended symbol

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def num_symbols(self) -> int:
        return self.base.n + self.num_aux

    @property
    def num_checks(self) -> int:
        return len(self.checks)

    @property
    def field(self) -> GaloisField:
        return self.base.field


def decompose(mat: ParityCheckMatrix) -> DecomposedCode:
    """Chain every row into three-variable checks through fresh auxiliaries."""
    checks = []
    next_aux = mat.n
    for row in mat.rows:
        d = len(row)
        cols = [c for c, _ in row]
        coeffs = [v for _, v in row]
        if d == 3:
            checks.append(ThreeVarCheck(tuple(cols), tuple(coeffs)))
            continue
        aux = list(range(next_aux, next_aux + d - 3))
        next_aux += d - 3
        checks.append(ThreeVarCheck((cols[0], cols[1], aux[0]), (coeffs[0], coeffs[1], 1)))
        for t in range(1, d - 3):
            checks.append(ThreeVarCheck((aux[t - 1], cols[t + 1], aux[t]), (1, coeffs[t + 1], 1)))
        checks.append(ThreeVarCheck((aux[-1], cols[d - 2], cols[d - 1]), (1, coeffs[d - 2], coeffs[d - 1])))
    num_aux = next_aux - mat.n
    degrees = np.zeros(mat.n + num_aux, dtype=np.int64)
    for chk in checks:
        for v in chk.vars:
            degrees[v] += 1
    degrees.setflags(write=False)
    return DecomposedCode(base=mat, checks=tuple(checks), num_aux=num_aux, degrees=degrees)


def symbol_degrees(code: DecomposedCode) -> np.ndarray:
    """Incidence count of each extended symbol over the three-variable checks."""
    return code.degrees


def forced_auxiliaries(code: DecomposedCode, symbols) -> np.ndarray:
    """Auxiliary symbol values implied by a codeword (unique per codeword).

    Checks are emitted in chain order, so each auxiliary first appears as the
    last variable of some check and is determined there as the field sum of
    the other two terms (its own coefficient is 1).  Closing checks carry no
    new auxiliary and must already sum to zero; otherwise ``symbols`` is not
    a codeword and a ValueError is raised.
    """
    c = np.asarray(symbols, dtype=np.int64)
    if c.shape != (code.n,):
        raise ValueError(f"expected {code.n} symbols")
    gf = code.field
    ext = np.concatenate([c, np.zeros(code.num_aux, dtype=np.int64)])
    seen = np.zeros(code.num_aux, dtype=bool)
    for chk in code.checks:
        last = chk.vars[2]
        if last >= code.n and not seen[last - code.n]:
            acc = gf.mul_table[chk.coeffs[0], ext[chk.vars[0]]]
            acc ^= gf.mul_table[chk.coeffs[1], ext[chk.vars[1]]]
            ext[last] = acc
            seen[last - code.n] = True
        else:
            acc = 0
            for v, h in zip(chk.vars, chk.coeffs):
                acc ^= gf.mul_table[h, ext[v]]
            if acc != 0:
                raise ValueError("symbols do not satisfy the parity checks")
    return ext[code.n:]


def extended_word(code: DecomposedCode, symbols) -> np.ndarray:
    """Codeword followed by its forced auxiliary values."""
    c = np.asarray(symbols, dtype=np.int64)
    return np.concatenate([c, forced_auxiliaries(code, c)])


def generator_rows(mat: ParityCheckMatrix) -> np.ndarray:
    """Basis of the code's solution space via Gaussian elimination over GF(2^q).

    Returns an array of shape (k, n) whose rows span {c : Hc = 0}.
    """
    gf = mat.field
    h = mat.dense()
    m, n = h.shape
    pivots = []
    r = 0
    for col in range(n):
        sel = None
        for row in range(r, m):
            if h[row, col] != 0:
                sel = row
                break
        if sel is None:
            continue
        h[[r, sel]] = h[[sel, r]]
        inv = gf.inv(int(h[r, col]))
        h[r] = gf.mul_table[inv, h[r]]
        for row in range(m):
            if row != r and h[row, col] != 0:
                h[row] ^= gf.mul_table[int(h[row, col]), h[r]]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, col in enumerate(free):
        basis[k, col] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = h[i, col]  # pivot value solving row i; negation is identity
    return basis


def random_codeword(mat: ParityCheckMatrix, rng: np.random.Generator) -> np.ndarray:
    """Uniform random codeword sampled through the solution-space basis."""
    basis = generator_rows(mat)
    gf = mat.field
    coeffs = rng.integers(0, gf.order, size=basis.shape[0])
    c = np.zeros(mat.n, dtype=np.int64)
    for a, row in zip(coeffs, basis):
        if a:
            c ^= gf.mul_table[int(a), row]
    return c
