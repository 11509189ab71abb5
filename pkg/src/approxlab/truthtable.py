"""Truth tables over n <= 12 variables as immutable 2^n-bit vectors.

Assignments are encoded little-endian: the assignment (x_1, ..., x_n)
is the integer x = sum x_i * 2^(i-1), so x_1 is the least significant
bit.  Bit x of the table holds f(x).  The hex form used by the text
formats is just the bit vector printed as a hexadecimal integer, e.g.
``tt 2 6`` is XOR on two variables (ones at assignments 1 and 2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAX_VARS = 12


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class TruthTable:
    """A Boolean function {0,1}^n -> {0,1}, stored as the integer of its value column."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise ValueError(f"variable count {self.n} outside [0, {MAX_VARS}]")
        if not 0 <= self.mask <= full_mask(self.n):
            raise ValueError(f"mask {self.mask:#x} does not fit {self.n} variables")

    # -- constructors ------------------------------------------------

    @classmethod
    def const(cls, n: int, value: int) -> "TruthTable":
        return cls(n, full_mask(n) if value else 0)

    @classmethod
    def variable(cls, n: int, i: int) -> "TruthTable":
        """The projection x_i (1-indexed) as an n-variable table."""
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} outside [1, {n}]")
        mask = 0
        for x in range(1 << n):
            if (x >> (i - 1)) & 1:
                mask |= 1 << x
        return cls(n, mask)

    @classmethod
    def from_values(cls, values) -> "TruthTable":
        values = list(values)
        n = (len(values) - 1).bit_length()
        if len(values) != 1 << n:
            raise ValueError("value column length is not a power of two")
        mask = 0
        for x, v in enumerate(values):
            if v:
                mask |= 1 << x
        return cls(n, mask)

    @classmethod
    def from_callable(cls, n: int, fn) -> "TruthTable":
        mask = 0
        for x in range(1 << n):
            bits = tuple((x >> (i - 1)) & 1 for i in range(1, n + 1))
            if fn(*bits):
                mask |= 1 << x
        return cls(n, mask)

    # -- evaluation and views ----------------------------------------

    def __call__(self, x: int) -> int:
        return (self.mask >> x) & 1

    def ones(self):
        """Assignments where the function is 1, in increasing order."""
        return [x for x in range(1 << self.n) if (self.mask >> x) & 1]

    def zeros(self):
        return [x for x in range(1 << self.n) if not (self.mask >> x) & 1]

    def weight(self) -> int:
        return bin(self.mask).count("1")

    # -- pointwise algebra -------------------------------------------

    def _check_same(self, other: "TruthTable"):
        if self.n != other.n:
            raise ValueError(f"mixed variable counts {self.n} and {other.n}")

    def __and__(self, other: "TruthTable") -> "TruthTable":
        self._check_same(other)
        return TruthTable(self.n, self.mask & other.mask)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        self._check_same(other)
        return TruthTable(self.n, self.mask | other.mask)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        self._check_same(other)
        return TruthTable(self.n, self.mask ^ other.mask)

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.mask ^ full_mask(self.n))

    def minus(self, other: "TruthTable") -> "TruthTable":
        """Set difference of the one-sets: self AND NOT other."""
        self._check_same(other)
        return TruthTable(self.n, self.mask & ~other.mask & full_mask(self.n))

    def is_zero(self) -> bool:
        return self.mask == 0

    # -- structure ---------------------------------------------------

    def restrict(self, i: int, value: int) -> "TruthTable":
        """Fix x_i := value; result is a table on n-1 variables (higher indices shift down)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} outside [1, {self.n}]")
        values = []
        for x in range(1 << (self.n - 1)):
            low = x & ((1 << (i - 1)) - 1)
            high = x >> (i - 1)
            full = low | (value << (i - 1)) | (high << i)
            values.append((self.mask >> full) & 1)
        return TruthTable.from_values(values)

    def depends_on(self, i: int) -> bool:
        return self.restrict(i, 0) != self.restrict(i, 1)

    def essential_vars(self) -> tuple[int, ...]:
        """Indices i whose flip changes the function somewhere, ascending."""
        return tuple(i for i in range(1, self.n + 1) if self.depends_on(i))

    def project(self, vars_: tuple[int, ...]) -> "TruthTable":
        """View the function as a table over the ordered variable subset vars_.

        Requires that the function depends on no variable outside vars_.
        Position k of the result reads variable vars_[k-1] of self.
        """
        outside = [i for i in self.essential_vars() if i not in vars_]
        if outside:
            raise ValueError(f"function depends on {outside} outside {vars_}")
        m = len(vars_)
        values = []
        for y in range(1 << m):
            x = 0
            for k, i in enumerate(vars_):
                if (y >> k) & 1:
                    x |= 1 << (i - 1)
            values.append((self.mask >> x) & 1)
        return TruthTable.from_values(values)

    def lift(self, vars_: tuple[int, ...], n: int) -> "TruthTable":
        """Inverse of project: embed an m-variable table into n variables along vars_."""
        if len(vars_) != self.n:
            raise ValueError("variable list length does not match table arity")
        mask = 0
        for x in range(1 << n):
            y = 0
            for k, i in enumerate(vars_):
                if (x >> (i - 1)) & 1:
                    y |= 1 << k
            if (self.mask >> y) & 1:
                mask |= 1 << x
        return TruthTable(n, mask)

    # -- text form ---------------------------------------------------

    def hex(self) -> str:
        digits = max(1, (1 << self.n) // 4) if self.n >= 2 else 1
        return f"{self.mask:0{digits}x}"

    @classmethod
    def from_hex(cls, n: int, text: str) -> "TruthTable":
        return cls(n, int(text, 16))

    def __repr__(self):
        return f"TruthTable({self.n}, 0x{self.hex()})"


def all_tables(n: int):
    """Every function on n variables, ascending by mask."""
    for mask in range(1 << (1 << n)):
        yield TruthTable(n, mask)


def assignment_bits(n: int, x: int) -> tuple[int, ...]:
    return tuple((x >> (i - 1)) & 1 for i in range(1, n + 1))


def assignment_from_bits(bits) -> int:
    x = 0
    for k, b in enumerate(bits):
        if b:
            x |= 1 << k
    return x


def hamming_pairs(n: int):
    """All (x, y) pairs at Hamming distance 1, each once with x < y."""
    for x in range(1 << n):
        for i in range(n):
            y = x | (1 << i)
            if y != x:
                yield x, y


def popcount(v: int) -> int:
    return bin(v).count("1")


def subsets(iterable, r=None):
    items = list(iterable)
    if r is not None:
        return itertools.combinations(items, r)
    return itertools.chain.from_iterable(
        itertools.combinations(items, k) for k in range(len(items) + 1)
    )
