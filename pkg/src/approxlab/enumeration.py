"""Canonical circuit enumeration and the exact size oracle.

Enumerated circuits are emitted in a normal form that makes the
stream duplicate-free and deterministic:

* gates appear sorted by the key (depth, connective, child indices),
  strictly increasing, with commutative children stored sorted;
* no two gates share a connective and child set;
* every gate feeds the output (the unique deepest gate), so there is
  no dead structure;
* constants occur only as standalone size-0 circuits, never as gate
  children (a gate with a constant child collapses).

Every circuit over the basis is represented by exactly one normal
form of the same or smaller size, so the size oracle is unaffected.
Oracle gates never enter enumeration.
"""

from __future__ import annotations

import itertools
import math

from .budgets import charge
from .circuits import Circuit, Connective, Gate, const_gate, input_gate, op_gate
from .truthtable import TruthTable


def _basis_ranked(basis) -> list[Connective]:
    return sorted(basis, key=lambda c: (c.name, c.arity))


def estimate_enumeration(n: int, basis, max_size: int) -> int:
    """Upper estimate of the number of gate sequences explored."""
    total = 1.0
    for step in range(1, max_size + 1):
        pool = n + step - 1
        per_step = 0
        for conn in basis:
            per_step += math.comb(pool, conn.arity) if pool >= conn.arity else 0
        total *= max(per_step, 1)
        if total > 1e18:
            return 10**18
    return int(total)


def enumerate_circuits(n: int, basis, max_size: int, max_depth: int | None = None,
                       budget: int | None = None):
    """Yield every normal-form circuit with size <= max_size, size-lexicographically.

    Size-0 circuits come first (inputs x_1..x_n, then constants 0 and 1),
    then each larger size in canonical key order.
    """
    basis = _basis_ranked(basis)
    for conn in basis:
        if not conn.commutative:
            raise ValueError(f"non-commutative connective {conn} cannot be enumerated")
    charge(estimate_enumeration(n, basis, max_size), budget, "enumerate_circuits")

    for i in range(1, n + 1):
        yield Circuit(n, (input_gate(i),), 0)
    if max_depth is None or max_depth >= 0:
        yield Circuit(n, (const_gate(0),), 0)
        yield Circuit(n, (const_gate(1),), 0)

    for target in range(1, max_size + 1):
        yield from _emit_size(n, basis, target, max_depth)


def _emit_size(n: int, basis, target: int, max_depth: int | None):
    # draft entries: (rank, children, depth); pool index of draft j is n + j
    draft: list[tuple[int, tuple[int, ...], int]] = []

    def node_depth(idx: int) -> int:
        return 0 if idx < n else draft[idx - n][2]

    def candidates(last_key):
        pool = n + len(draft)
        out = []
        for rank, conn in enumerate(basis):
            if pool < conn.arity:
                continue
            for combo in itertools.combinations(range(pool), conn.arity):
                depth = 1 + max(node_depth(c) for c in combo)
                if max_depth is not None and depth > max_depth:
                    continue
                key = (depth, rank, combo)
                if last_key is None or key > last_key:
                    out.append(key)
        out.sort()
        return out

    def connected() -> bool:
        used = [False] * len(draft)
        used[-1] = True
        for j, (_, children, _) in enumerate(draft):
            for c in children:
                if c >= n:
                    used[c - n] = True
        return all(used)

    def finish() -> Circuit:
        used_inputs = sorted({c for (_, children, _) in draft for c in children if c < n})
        remap = {c: k for k, c in enumerate(used_inputs)}
        gates: list[Gate] = [input_gate(i + 1) for i in used_inputs]
        for j, (rank, children, _) in enumerate(draft):
            remap[n + j] = len(gates)
            gates.append(op_gate(basis[rank], tuple(remap[c] for c in children)))
        return Circuit(n, tuple(gates), len(gates) - 1)

    def extend(last_key):
        if len(draft) == target:
            if connected():
                yield finish()
            return
        for key in candidates(last_key):
            depth, rank, combo = key
            draft.append((rank, combo, depth))
            yield from extend(key)
            draft.pop()

    yield from extend(None)


def min_circuit_size(f: TruthTable, basis, cap: int, max_depth: int | None = None,
                     budget: int | None = None) -> int | None:
    """Least size of a basis circuit computing f, or None when it exceeds the cap.

    Monotone: growing the basis or the cap never increases the result.
    """
    from .circuits import truth_table

    for circuit in enumerate_circuits(f.n, basis, cap, max_depth, budget):
        if truth_table(circuit) == f:
            return circuit.size
    return None


def reachable_tables(n: int, basis, max_size: int, max_depth: int | None = None,
                     budget: int | None = None) -> dict[TruthTable, int]:
    """Map each reachable truth table to the least circuit size attaining it."""
    from .circuits import truth_table

    out: dict[TruthTable, int] = {}
    for circuit in enumerate_circuits(n, basis, max_size, max_depth, budget):
        table = truth_table(circuit)
        if table not in out:
            out[table] = circuit.size
    return out
