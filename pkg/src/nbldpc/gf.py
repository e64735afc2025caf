"""Arithmetic for Galois fields GF(2^q) of characteristic two.

Elements are plain integers in ``[0, 2^q - 1]``: bit ``i`` of the integer is
the coefficient of ``zeta^i`` in the polynomial representation, where ``zeta``
is the primitive element (the residue of ``x`` modulo the primitive
polynomial).  Addition is bitwise XOR; multiplication goes through log/exp
tables built once at field construction.
"""

from __future__ import annotations

import numpy as np

# Minimal-weight primitive polynomials, keyed by extension degree q.
# Bit pattern: x^4 + x + 1 -> 0b10011 = 19.
PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
}


class GaloisField:
    """GF(2^q) with eager exp/log tables.

    Parameters
    ----------
    q : int
        Extension degree, 2 <= q <= 8.  Binary fields (q=1) are rejected:
        the per-block closed-form inverse used by the decoder degenerates
        there, and the toolkit targets nonbinary codes only.

    Immutable after construction; safe to share across threads.
    """

    def __init__(self, q: int) -> None:
        if q < 2:
            raise ValueError(f"q must be >= 2 (nonbinary fields only), got {q}")
        if q not in PRIMITIVE_POLYS:
            raise ValueError(f"q={q} unsupported; expected 2 <= q <= 8")
        self.q = q
        self.order = 1 << q
        self.prim_poly = PRIMITIVE_POLYS[q]

        exp_table = np.zeros(self.order - 1, dtype=np.int64)
        log_table = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(self.order - 1):
            if x == 1 and i > 0:
                raise ValueError(f"polynomial {self.prim_poly:#x} is not primitive for q={q}")
            exp_table[i] = x
            log_table[x] = i
            x <<= 1
            if x & self.order:
                x ^= self.prim_poly
        if x != 1:
            raise ValueError(f"polynomial {self.prim_poly:#x} is not primitive for q={q}")
        self.exp_table = exp_table
        self.log_table = log_table
        self.exp_table.setflags(write=False)
        self.log_table.setflags(write=False)

        # mul_table[a, b] = a*b, used for vectorized lookups elsewhere.
        nz = np.arange(1, self.order)
        prod = self.exp_table[(self.log_table[nz][:, None] + self.log_table[nz][None, :]) % (self.order - 1)]
        table = np.zeros((self.order, self.order), dtype=np.int64)
        table[1:, 1:] = prod
        self.mul_table = table
        self.mul_table.setflags(write=False)

    def __repr__(self) -> str:
        return f"GaloisField(q={self.q})"

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of GF(2^{self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        """Field addition: bitwise XOR of coefficient vectors (self-inverse)."""
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        """Field multiplication via log/exp tables; zero absorbs."""
        self.check(a)
        self.check(b)
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.order - 1)])

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.exp_table[(-self.log_table[a]) % (self.order - 1)])

    def bits_of(self, a: int) -> np.ndarray:
        """Length-q binary coefficient vector of ``a``; bit i is the zeta^i coefficient.

        The zero element maps to the all-zeros vector.
        """
        self.check(a)
        return np.array([(a >> i) & 1 for i in range(self.q)], dtype=np.int64)

    def rotate_index(self, h: int, j: int) -> int:
        """Image of index ``j`` under multiplication by nonzero ``h``.

        Realizes the elementary rotation permutation on {1, ..., 2^q - 1}
        without materializing the permutation matrix: position j of an
        indicator block moves to position j*h.
        """
        if self.check(h) == 0:
            raise ValueError("rotation is only defined for nonzero multipliers")
        if not 1 <= j < self.order:
            raise ValueError(f"index {j} outside {{1, ..., {self.order - 1}}}")
        return self.mul(h, j)

    def rotation_permutation(self, h: int) -> np.ndarray:
        """Array p with p[j-1] = j*h for j = 1..2^q-1 (a bijection for h != 0)."""
        return np.array([self.rotate_index(h, j) for j in range(1, self.order)], dtype=np.int64)

    def bits_matrix(self) -> np.ndarray:
        """q-by-(2^q - 1) matrix whose column sigma-1 is bits_of(sigma)."""
        return np.stack([self.bits_of(s) for s in range(1, self.order)], axis=1)


def gf_add(field: GaloisField, a: int, b: int) -> int:
    return field.add(a, b)


def gf_mul(field: GaloisField, a: int, b: int) -> int:
    return field.mul(a, b)


def bits_of(field: GaloisField, a: int) -> np.ndarray:
    return field.bits_of(a)


def rotate_index(field: GaloisField, h: int, j: int) -> int:
    return field.rotate_index(h, j)
