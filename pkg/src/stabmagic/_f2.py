"""Small GF(2) linear-algebra helpers on ints (one row = one bitmask)."""

from __future__ import annotations


def reduce_row(r: int, basis: list[int]) -> int:
    """Reduce ``r`` against an echelon basis sorted by descending leading bit."""
    for b in basis:
        if r ^ b < r:
            r ^= b
    return r


def insert_row(r: int, basis: list[int]) -> int:
    """Reduce ``r`` and, if independent, insert it keeping the sort order.

    Returns the residue (0 when ``r`` was dependent).
    """
    r = reduce_row(r, basis)
    if r:
        basis.append(r)
        basis.sort(reverse=True)
    return r


def rank(rows: list[int]) -> int:
    basis: list[int] = []
    for r in rows:
        insert_row(r, basis)
    return len(basis)


def kernel_coefficient_masks(rows: list[int]) -> list[int]:
    """Basis of {c : xor of rows_i over set bits of c == 0}, c as a bitmask
    over row indices.

    Rows are augmented with identity coefficient bits below the value bits;
    elimination happens on the value part and drags the coefficients along.
    """
    g = len(rows)
    basis: list[int] = []
    kernel: list[int] = []
    coeff_mask = (1 << g) - 1
    for i in range(g):
        r = reduce_row((rows[i] << g) | (1 << i), basis)
        if r >> g:
            basis.append(r)
            basis.sort(reverse=True)
        else:
            kernel.append(r & coeff_mask)
    return kernel


def solve(rows: list[int], rhs: list[int]) -> int:
    """Any z (bitmask) with parity(rows_i & z) == rhs_i for all i.

    Raises ValueError when the system is inconsistent.
    """
    basis: list[int] = []
    for row, b in zip(rows, rhs):
        r = reduce_row((row << 1) | (b & 1), basis)
        if r >> 1:
            basis.append(r)
            basis.sort(reverse=True)
        elif r & 1:
            raise ValueError("inconsistent GF(2) system")
    z = 0
    # pivots ascending so each row sees the bits set by rows below it
    for b in sorted(basis):
        pivot = b.bit_length() - 2  # leading value-bit column
        if (((b >> 1) & z).bit_count() & 1) != (b & 1):
            z ^= 1 << pivot
    return z
