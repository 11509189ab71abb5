"""Algebraic normal form over GF(2).

A multilinear polynomial on n variables is stored as an integer mask
over monomials: bit S (a subset of [n] in the same little-endian
encoding as assignments) is the coefficient of prod_{i in S} x_i.
The value column and the coefficient column are exchanged by the
binary Moebius transform, which is an involution over GF(2).
"""

from __future__ import annotations

from .truthtable import TruthTable, popcount


def moebius(n: int, mask: int) -> int:
    """Binary Moebius transform of a 2^n bit column (self-inverse)."""
    bits = [(mask >> x) & 1 for x in range(1 << n)]
    step = 1
    while step < len(bits):
        for base in range(0, len(bits), step * 2):
            for j in range(base, base + step):
                bits[j + step] ^= bits[j]
        step *= 2
    out = 0
    for x, b in enumerate(bits):
        if b:
            out |= 1 << x
    return out


def anf_of(table: TruthTable) -> int:
    return moebius(table.n, table.mask)


def table_from_anf(n: int, anf: int) -> TruthTable:
    return TruthTable(n, moebius(n, anf))


def degree(table: TruthTable) -> int:
    """Degree of the (unique) multilinear polynomial computing the table; 0 for constants."""
    anf = anf_of(table)
    deg = 0
    s = anf
    while s:
        low = s & -s
        monomial = low.bit_length() - 1
        deg = max(deg, popcount(monomial))
        s ^= low
    return deg


def monomials(table: TruthTable) -> list[int]:
    """Monomial subsets present in the ANF, ascending by encoding."""
    anf = anf_of(table)
    return [m for m in range(1 << table.n) if (anf >> m) & 1]
