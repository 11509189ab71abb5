"""Circuits over {NOT, AND_a, OR_a, XOR_a} plus oracle gates.

A circuit is a topologically ordered gate list over n input variables.
Gate children point at earlier gates by index; the underlying graph
has no multi-edges, so the children of a single gate are distinct.
Size counts application gates (negations included); inputs and
constants are free.  Depth counts edges on the longest path from the
output down to an input or constant.

Oracle gates carry an explicit truth function and read their children
in order; they are the only non-commutative gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import MalformedCircuitError
from .truthtable import TruthTable, full_mask

MAX_ARITY = 16


@dataclass(frozen=True)
class Connective:
    name: str
    arity: int
    table: TruthTable
    commutative: bool = True

    def __post_init__(self):
        if self.table.n != self.arity:
            raise ValueError(f"{self.name}: semantics arity {self.table.n} != {self.arity}")

    def key(self) -> tuple[str, int]:
        return (self.name, self.arity)

    def __repr__(self):
        return f"{self.name}_{self.arity}"


def _conn_cache(fn):
    cache = {}

    def build(arity: int = None) -> Connective:
        key = arity
        if key not in cache:
            cache[key] = fn(arity)
        return cache[key]

    return build


@_conn_cache
def NOT(_=None) -> Connective:
    return Connective("NOT", 1, TruthTable(1, 0b01))


def _wide(name: str, fn):
    def make(arity: int = 2) -> Connective:
        if not 1 <= arity <= MAX_ARITY:
            raise ValueError(f"{name} arity {arity} outside [1, {MAX_ARITY}]")
        return Connective(name, arity, TruthTable.from_callable(arity, lambda *b: fn(b)))

    cache = {}

    def cached(arity: int = 2) -> Connective:
        if arity not in cache:
            cache[arity] = make(arity)
        return cache[arity]

    return cached


AND = _wide("AND", lambda b: all(b))
OR = _wide("OR", lambda b: any(b))
XOR = _wide("XOR", lambda b: sum(b) % 2)

CONNECTIVES = {"NOT": lambda a: NOT(), "AND": AND, "OR": OR, "XOR": XOR}


def connective(name: str, arity: int) -> Connective:
    if name not in CONNECTIVES:
        raise ValueError(f"unknown connective {name!r}")
    conn = CONNECTIVES[name](arity)
    if conn.arity != arity:
        raise ValueError(f"{name} does not take arity {arity}")
    return conn


def standard_basis() -> tuple[Connective, ...]:
    """The binary de-facto default: negation plus fan-in-two AND and OR."""
    return (NOT(), AND(2), OR(2))


@dataclass(frozen=True)
class Gate:
    kind: str  # input | const | op | oracle
    var: int = 0
    value: int = 0
    conn: Connective | None = None
    table: TruthTable | None = None
    children: tuple[int, ...] = ()

    def is_application(self) -> bool:
        return self.kind in ("op", "oracle")


def input_gate(i: int) -> Gate:
    return Gate("input", var=i)


def const_gate(value: int) -> Gate:
    return Gate("const", value=1 if value else 0)


def op_gate(conn: Connective, children) -> Gate:
    children = tuple(children)
    if conn.commutative:
        children = tuple(sorted(children))
    return Gate("op", conn=conn, children=children)


def oracle_gate(table: TruthTable, children) -> Gate:
    return Gate("oracle", table=table, children=tuple(children))


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not 0 <= self.output < len(self.gates):
            raise MalformedCircuitError(f"output index {self.output} out of range")
        for idx, g in enumerate(self.gates):
            if g.kind == "input":
                if not 1 <= g.var <= self.n:
                    raise MalformedCircuitError(f"g{idx}: input x{g.var} outside [1, {self.n}]")
            elif g.kind == "const":
                if g.value not in (0, 1):
                    raise MalformedCircuitError(f"g{idx}: constant {g.value}")
            elif g.kind in ("op", "oracle"):
                arity = g.conn.arity if g.kind == "op" else g.table.n
                if len(g.children) != arity:
                    raise MalformedCircuitError(
                        f"g{idx}: {len(g.children)} children for arity {arity}"
                    )
                if len(set(g.children)) != len(g.children):
                    raise MalformedCircuitError(f"g{idx}: repeated child (multi-edge)")
                for c in g.children:
                    if not 0 <= c < idx:
                        raise MalformedCircuitError(f"g{idx}: child g{c} not earlier in the list")
            else:
                raise MalformedCircuitError(f"g{idx}: unknown kind {g.kind!r}")

    @property
    def size(self) -> int:
        return sum(1 for g in self.gates if g.is_application())

    def gate_depths(self) -> list[int]:
        depths = []
        for g in self.gates:
            if g.is_application():
                depths.append(1 + max(depths[c] for c in g.children))
            else:
                depths.append(0)
        return depths

    @property
    def depth(self) -> int:
        return self.gate_depths()[self.output]

    def has_oracles(self) -> bool:
        return any(g.kind == "oracle" for g in self.gates)

    def used_vars(self) -> tuple[int, ...]:
        return tuple(sorted({g.var for g in self.gates if g.kind == "input"}))

    def reachable(self, root: int | None = None) -> set[int]:
        seen = set()
        stack = [self.output if root is None else root]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            stack.extend(self.gates[i].children)
        return seen


def apply_pointwise(sem: TruthTable, inputs: list[TruthTable]) -> TruthTable:
    """Compose a gate semantics with input functions on a shared variable set."""
    if len(inputs) != sem.n:
        raise ValueError(f"{len(inputs)} inputs for arity {sem.n}")
    if not inputs:
        return sem
    n = inputs[0].n
    out = 0
    for b in range(1 << sem.n):
        if not sem(b):
            continue
        acc = full_mask(n)
        for i, f in enumerate(inputs):
            acc &= f.mask if (b >> i) & 1 else (f.mask ^ full_mask(n))
            if not acc:
                break
        out |= acc
    return TruthTable(n, out)


def evaluate(circuit: Circuit, x: int) -> int:
    vals: list[int] = []
    for g in circuit.gates:
        if g.kind == "input":
            vals.append((x >> (g.var - 1)) & 1)
        elif g.kind == "const":
            vals.append(g.value)
        else:
            sem = g.conn.table if g.kind == "op" else g.table
            b = 0
            for i, c in enumerate(g.children):
                if vals[c]:
                    b |= 1 << i
            vals.append(sem(b))
    return vals[circuit.output]


def gate_tables(circuit: Circuit,
                leaf_tables: dict[int, TruthTable] | None = None) -> list[TruthTable]:
    """The function computed at every gate, in gate order.

    leaf_tables optionally substitutes arbitrary functions for the input
    variables (the composed semantics used when a formal circuit is read
    over member functions); all substituted tables share one ambient
    variable count, which then replaces circuit.n.
    """
    n = circuit.n
    if leaf_tables:
        n = next(iter(leaf_tables.values())).n
    tables: list[TruthTable] = []
    for g in circuit.gates:
        if g.kind == "input":
            if leaf_tables is not None and g.var in leaf_tables:
                tables.append(leaf_tables[g.var])
            else:
                tables.append(TruthTable.variable(n, g.var))
        elif g.kind == "const":
            tables.append(TruthTable.const(n, g.value))
        else:
            sem = g.conn.table if g.kind == "op" else g.table
            tables.append(apply_pointwise(sem, [tables[c] for c in g.children]))
    return tables


def truth_table(circuit: Circuit) -> TruthTable:
    return gate_tables(circuit)[circuit.output]


def subcircuit(circuit: Circuit, root: int) -> Circuit:
    """The circuit rooted at a gate, reindexed over the reachable gates."""
    keep = sorted(circuit.reachable(root))
    remap = {old: new for new, old in enumerate(keep)}
    gates = []
    for old in keep:
        g = circuit.gates[old]
        if g.children:
            g = replace(g, children=tuple(remap[c] for c in g.children))
        gates.append(g)
    return Circuit(circuit.n, tuple(gates), remap[root])


class CircuitBuilder:
    """Incremental gate-list construction.

    Inputs and constants are always shared.  Application gates are
    shared only when ``intern=True``; tree-shaped constructions (the
    branching circuits behind the distribution lemmas) keep duplicate
    structure as distinct vertices on purpose.
    """

    def __init__(self, n: int, intern: bool = False):
        self.n = n
        self.intern = intern
        self.gates: list[Gate] = []
        self._base: dict = {}
        self._apps: dict = {}

    def _add(self, gate: Gate) -> int:
        self.gates.append(gate)
        return len(self.gates) - 1

    def inp(self, i: int) -> int:
        key = ("input", i)
        if key not in self._base:
            self._base[key] = self._add(input_gate(i))
        return self._base[key]

    def const(self, value: int) -> int:
        key = ("const", 1 if value else 0)
        if key not in self._base:
            self._base[key] = self._add(const_gate(value))
        return self._base[key]

    def fresh_const(self, value: int) -> int:
        """A new constant vertex on every call.

        The branching trees keep one leaf per assignment so that the
        underlying graph is the same for every target function.
        """
        return self._add(const_gate(value))

    def op(self, conn: Connective, *children: int) -> int:
        gate = op_gate(conn, children)
        if self.intern:
            key = (conn.key(), gate.children)
            if key not in self._apps:
                self._apps[key] = self._add(gate)
            return self._apps[key]
        return self._add(gate)

    def oracle(self, table: TruthTable, *children: int) -> int:
        return self._add(oracle_gate(table, children))

    def neg(self, child: int) -> int:
        return self.op(NOT(), child)

    def literal(self, i: int, positive: bool) -> int:
        x = self.inp(i)
        return x if positive else self.neg(x)

    def _fold(self, conn2: Connective, empty_value: int, children) -> int:
        ordered = sorted(set(children))
        if not ordered:
            return self.const(empty_value)
        if len(ordered) == 1:
            return ordered[0]
        acc = ordered[0]
        for c in ordered[1:]:
            acc = self.op(conn2, acc, c)
        return acc

    def and_all(self, children) -> int:
        """Fan-in-two AND chain over distinct children (empty -> constant 1)."""
        return self._fold(AND(2), 1, children)

    def or_all(self, children) -> int:
        return self._fold(OR(2), 0, children)

    def _wide(self, conn_family, empty_value: int, children) -> int:
        ordered = sorted(set(children))
        if not ordered:
            return self.const(empty_value)
        if len(ordered) == 1:
            return ordered[0]
        return self.op(conn_family(len(ordered)), *ordered)

    def and_wide(self, children) -> int:
        """Single unbounded fan-in AND gate (empty -> constant 1)."""
        return self._wide(AND, 1, children)

    def or_wide(self, children) -> int:
        return self._wide(OR, 0, children)

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, tuple(self.gates), output)
