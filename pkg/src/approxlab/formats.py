"""Line-oriented text formats for tables, circuits, models and certificates.

Every emitter produces a canonical byte sequence: members in index order,
operation entries sorted by key, tuples in certificate order, no timestamps.
Parsers accept blank lines and ``#`` comments anywhere and report errors with
1-based line numbers.

Formats:

* truth table        ``tt <n> <hex>`` (hex of the little-endian value mask)
* circuit            ``g<i> = INPUT <k> | CONST <b> | <CONN>(<args>)`` lines,
                     oracle gates ``ORACLE[tt <m> <hex>](<args>)``, then a
                     final ``OUTPUT g<i>`` line
* model              ``model <n> [neg_exact] [relaxed_vars]`` header, then
                     ``member <id> tt <n> <hex>`` and
                     ``op <CONN> <arity> <ids...> -> <id>`` lines
* certificate        ``cert <sym|asym> g=<id> [depth=<d>]`` header, then
                     ``tuple [<+|->] <CONN> <arity> <ids...>`` lines and, for
                     depth certificates, ``witness g depth=<d> circuit=<file>``
                     and ``witness input <id> depth=<d> circuit=<file>`` lines
* semi-filter set    ``universe <n> <x...>`` then ``sf <u> <hex>`` lines
                     (hex over the 2^u subset indices of the universe)
* subset covers      ``pair <hexA> <hexB>`` or ``tuple <hex...>`` lines after
                     a ``universe`` header (hex over the u universe positions)
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .circuits import (
    Circuit,
    CircuitBuilder,
    Connective,
    Gate,
    connective,
)
from .distance import CertTuple, CoverCertificate, DepthCoverCertificate
from .errors import ParseError
from .models import ApproxModel
from .truthtable import TruthTable


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected {what}, got {token!r}", lineno) from None


# -- truth tables -----------------------------------------------------------


def emit_tt(table: TruthTable) -> str:
    return f"tt {table.n} {table.hex()}"


def parse_tt(text: str, lineno: int = 1) -> TruthTable:
    parts = text.split()
    if len(parts) != 3 or parts[0] != "tt":
        raise ParseError(f"expected 'tt <n> <hex>', got {text!r}", lineno)
    n = _int(parts[1], lineno, "variable count")
    try:
        return TruthTable.from_hex(n, parts[2])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


# -- circuits ---------------------------------------------------------------


def emit_circuit(circuit: Circuit) -> str:
    lines = []
    for i, gate in enumerate(circuit.gates):
        if gate.kind == "input":
            rhs = f"INPUT {gate.var}"
        elif gate.kind == "const":
            rhs = f"CONST {gate.value}"
        else:
            args = ", ".join(f"g{j}" for j in gate.children)
            if gate.kind == "oracle":
                rhs = f"ORACLE[{emit_tt(gate.table)}]({args})"
            else:
                rhs = f"{gate.conn.name}({args})"
        lines.append(f"g{i} = {rhs}")
    lines.append(f"OUTPUT g{circuit.output}")
    return "\n".join(lines) + "\n"


def _gate_ref(token: str, limit: int, lineno: int) -> int:
    if not token.startswith("g"):
        raise ParseError(f"expected gate reference, got {token!r}", lineno)
    idx = _int(token[1:], lineno, "gate index")
    if not 0 <= idx < limit:
        raise ParseError(f"gate g{idx} not yet defined", lineno)
    return idx


def _split_args(blob: str, lineno: int) -> list[str]:
    blob = blob.strip()
    if not blob:
        raise ParseError("application gate needs at least one argument", lineno)
    return [part.strip() for part in blob.split(",")]


def parse_circuit(text: str, n: int | None = None) -> Circuit:
    """Parse the gate-list format.

    ``n`` overrides the variable count; by default it is the largest INPUT
    index (emitters do not record unused trailing variables).
    """
    gates: list[Gate] = []
    output: int | None = None
    max_var = 0
    for lineno, line in _lines(text):
        if line.startswith("OUTPUT"):
            if output is not None:
                raise ParseError("duplicate OUTPUT line", lineno)
            token = line[len("OUTPUT"):].strip()
            output = _gate_ref(token, len(gates), lineno)
            continue
        if output is not None:
            raise ParseError("gate line after OUTPUT", lineno)
        lhs, sep, rhs = line.partition("=")
        if not sep:
            raise ParseError(f"expected 'g<i> = ...', got {line!r}", lineno)
        idx = _gate_ref(lhs.strip(), len(gates) + 1, lineno)
        if idx != len(gates):
            raise ParseError(
                f"gate g{idx} out of order (expected g{len(gates)})", lineno
            )
        rhs = rhs.strip()
        if rhs.startswith("INPUT"):
            var = _int(rhs[len("INPUT"):].strip(), lineno, "input index")
            if var < 1:
                raise ParseError("input indices are 1-based", lineno)
            max_var = max(max_var, var)
            gates.append(Gate(kind="input", var=var))
        elif rhs.startswith("CONST"):
            value = _int(rhs[len("CONST"):].strip(), lineno, "constant bit")
            if value not in (0, 1):
                raise ParseError(f"constant must be 0 or 1, got {value}", lineno)
            gates.append(Gate(kind="const", value=value))
        elif rhs.startswith("ORACLE["):
            body, sep, rest = rhs[len("ORACLE["):].partition("]")
            if not sep or not rest.startswith("(") or not rest.endswith(")"):
                raise ParseError(f"malformed oracle gate {rhs!r}", lineno)
            table = parse_tt(body.strip(), lineno)
            args = [
                _gate_ref(tok, len(gates), lineno)
                for tok in _split_args(rest[1:-1], lineno)
            ]
            if len(args) != table.n:
                raise ParseError(
                    f"oracle of {table.n} variables got {len(args)} arguments",
                    lineno,
                )
            gates.append(Gate(kind="oracle", table=table, children=tuple(args)))
        else:
            name, sep, rest = rhs.partition("(")
            if not sep or not rest.endswith(")"):
                raise ParseError(f"malformed gate {rhs!r}", lineno)
            args = [
                _gate_ref(tok, len(gates), lineno)
                for tok in _split_args(rest[:-1], lineno)
            ]
            try:
                conn = connective(name.strip(), len(args))
            except ValueError:
                raise ParseError(
                    f"unknown connective {name.strip()!r}/{len(args)}", lineno
                ) from None
            children = tuple(sorted(args)) if conn.commutative else tuple(args)
            gates.append(Gate(kind="op", conn=conn, children=children))
    if output is None:
        raise ParseError("missing OUTPUT line", len(text.splitlines()) or 1)
    if n is None:
        n = max_var
    elif n < max_var:
        raise ParseError(f"circuit uses x{max_var} but n={n}", 1)
    circuit = Circuit(n=n, gates=tuple(gates), output=output)
    circuit.validate()
    return circuit


# -- models -----------------------------------------------------------------


def emit_model(model: ApproxModel) -> str:
    flags = []
    if model.neg_exact:
        flags.append("neg_exact")
    if model.relaxed_vars:
        flags.append("relaxed_vars")
    lines = [" ".join(["model", str(model.n), *flags])]
    for i, member in enumerate(model.members):
        lines.append(f"member {i} {emit_tt(member)}")
    ops = model.ops()
    for key in sorted(ops):
        name, arity, ids = key
        ids_blob = " ".join(str(i) for i in ids)
        lines.append(f"op {name} {arity} {ids_blob} -> {ops[key]}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> ApproxModel:
    model: ApproxModel | None = None
    lineno0 = 1
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "model":
            if model is not None:
                raise ParseError("duplicate model header", lineno)
            if len(parts) < 2:
                raise ParseError("model header needs a variable count", lineno)
            n = _int(parts[1], lineno, "variable count")
            flags = set(parts[2:])
            unknown = flags - {"neg_exact", "relaxed_vars"}
            if unknown:
                raise ParseError(f"unknown model flags {sorted(unknown)}", lineno)
            model = ApproxModel(
                n,
                neg_exact="neg_exact" in flags,
                relaxed_vars="relaxed_vars" in flags,
                label="file",
            )
            lineno0 = lineno
        elif parts[0] == "member":
            if model is None:
                raise ParseError("member line before model header", lineno)
            if len(parts) != 5:
                raise ParseError("expected 'member <id> tt <n> <hex>'", lineno)
            idx = _int(parts[1], lineno, "member id")
            table = parse_tt(" ".join(parts[2:]), lineno)
            if table.n != model.n:
                raise ParseError(
                    f"member over {table.n} variables in a model over {model.n}",
                    lineno,
                )
            if idx != len(model.members):
                raise ParseError(
                    f"member {idx} out of order (expected {len(model.members)})",
                    lineno,
                )
            got = model.add_member(table)
            if got != idx:
                raise ParseError(f"duplicate member table {table.hex()}", lineno)
        elif parts[0] == "op":
            if model is None:
                raise ParseError("op line before model header", lineno)
            try:
                arrow = parts.index("->")
            except ValueError:
                raise ParseError("op line missing '->'", lineno) from None
            if arrow != len(parts) - 2:
                raise ParseError("expected single result after '->'", lineno)
            name = parts[1]
            arity = _int(parts[2], lineno, "arity")
            ids = [_int(tok, lineno, "member id") for tok in parts[3:arrow]]
            result = _int(parts[arrow + 1], lineno, "member id")
            if len(ids) != arity:
                raise ParseError(f"op lists {len(ids)} members, arity {arity}", lineno)
            try:
                conn = connective(name, arity)
            except ValueError:
                raise ParseError(f"unknown connective {name!r}/{arity}", lineno) from None
            limit = len(model.members)
            for i in [*ids, result]:
                if not 0 <= i < limit:
                    raise ParseError(f"member {i} not defined", lineno)
            model.set_op(conn, tuple(ids), result)
        else:
            raise ParseError(f"unknown model line {parts[0]!r}", lineno)
    if model is None:
        raise ParseError("missing model header", lineno0)
    return model


# -- certificates -----------------------------------------------------------


def _witness_name(which: str, member: int | None = None) -> str:
    return "witness_g.circ" if which == "g" else f"witness_m{member}.circ"


def emit_cert(
    cert: CoverCertificate | DepthCoverCertificate,
) -> tuple[str, dict[str, str]]:
    """Emit a certificate; depth witnesses become companion circuit files.

    Returns the certificate text and a mapping of companion file names to
    their contents (empty for plain certificates).
    """
    header = f"cert {cert.mode} g={cert.g}"
    files: dict[str, str] = {}
    witness_lines: list[str] = []
    if isinstance(cert, DepthCoverCertificate):
        header += f" depth={cert.depth}"
        name = _witness_name("g")
        files[name] = emit_circuit(cert.g_witness)
        witness_lines.append(
            f"witness g depth={cert.g_witness.depth} circuit={name}"
        )
        for member, circuit in cert.input_witnesses:
            name = _witness_name("input", member)
            files[name] = emit_circuit(circuit)
            witness_lines.append(
                f"witness input {member} depth={circuit.depth} circuit={name}"
            )
    lines = [header]
    for t in cert.tuples:
        ids = " ".join(str(i) for i in t.members)
        side = f"{t.side} " if t.side is not None else ""
        lines.append(f"tuple {side}{t.conn.name} {t.conn.arity} {ids}")
    lines.extend(witness_lines)
    return "\n".join(lines) + "\n", files


def parse_cert(
    text: str,
    load: Callable[[str], str] | None = None,
) -> CoverCertificate | DepthCoverCertificate:
    """Parse a certificate; ``load`` maps witness file names to their text."""
    mode: str | None = None
    g: int | None = None
    depth: int | None = None
    tuples: list[CertTuple] = []
    g_witness: Circuit | None = None
    input_witnesses: list[tuple[int, Circuit]] = []

    def load_witness(name: str, lineno: int) -> Circuit:
        if load is None:
            raise ParseError("certificate has witnesses but no loader given", lineno)
        try:
            blob = load(name)
        except OSError as exc:
            raise ParseError(f"cannot read witness {name!r}: {exc}", lineno) from None
        return parse_circuit(blob)

    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "cert":
            if mode is not None:
                raise ParseError("duplicate cert header", lineno)
            if len(parts) < 3 or parts[1] not in ("sym", "asym"):
                raise ParseError("expected 'cert <sym|asym> g=<id> [depth=<d>]'", lineno)
            mode = parts[1]
            for token in parts[2:]:
                key, sep, value = token.partition("=")
                if not sep or key not in ("g", "depth"):
                    raise ParseError(f"unknown cert field {token!r}", lineno)
                if key == "g":
                    g = _int(value, lineno, "member id")
                else:
                    depth = _int(value, lineno, "depth")
            if g is None:
                raise ParseError("cert header missing g=<id>", lineno)
        elif parts[0] == "tuple":
            if mode is None:
                raise ParseError("tuple line before cert header", lineno)
            rest = parts[1:]
            side = None
            if rest and rest[0] in ("+", "-"):
                side = rest[0]
                rest = rest[1:]
            if len(rest) < 2:
                raise ParseError("expected 'tuple [side] <CONN> <arity> <ids...>'", lineno)
            name = rest[0]
            arity = _int(rest[1], lineno, "arity")
            ids = [_int(tok, lineno, "member id") for tok in rest[2:]]
            if len(ids) != arity:
                raise ParseError(f"tuple lists {len(ids)} members, arity {arity}", lineno)
            try:
                conn = connective(name, arity)
            except ValueError:
                raise ParseError(f"unknown connective {name!r}/{arity}", lineno) from None
            if (side is None) != (mode == "sym"):
                raise ParseError(
                    f"{mode} certificate with {'untagged' if side is None else 'tagged'} tuple",
                    lineno,
                )
            tuples.append(CertTuple(conn=conn, members=tuple(ids), side=side))
        elif parts[0] == "witness":
            if mode is None:
                raise ParseError("witness line before cert header", lineno)
            fields = dict(
                tok.partition("=")[::2] for tok in parts[1:] if "=" in tok
            )
            if "circuit" not in fields or "depth" not in fields:
                raise ParseError("witness line needs depth= and circuit=", lineno)
            circuit = load_witness(fields["circuit"], lineno)
            stated = _int(fields["depth"], lineno, "depth")
            if circuit.depth != stated:
                raise ParseError(
                    f"witness {fields['circuit']!r} has depth {circuit.depth}, "
                    f"line says {stated}",
                    lineno,
                )
            if parts[1] == "g":
                if g_witness is not None:
                    raise ParseError("duplicate g witness", lineno)
                g_witness = circuit
            elif parts[1] == "input":
                member = _int(parts[2], lineno, "member id")
                input_witnesses.append((member, circuit))
            else:
                raise ParseError(f"unknown witness kind {parts[1]!r}", lineno)
        else:
            raise ParseError(f"unknown certificate line {parts[0]!r}", lineno)
    if mode is None or g is None:
        raise ParseError("missing cert header", 1)
    if depth is None and g_witness is None and not input_witnesses:
        return CoverCertificate(mode=mode, g=g, tuples=tuple(tuples))
    if depth is None:
        raise ParseError("witness lines require depth= in the cert header", 1)
    if g_witness is None:
        raise ParseError("depth certificate missing its g witness", 1)
    return DepthCoverCertificate(
        mode=mode,
        g=g,
        tuples=tuple(tuples),
        depth=depth,
        g_witness=g_witness,
        input_witnesses=tuple(input_witnesses),
    )


# -- semi-filter sets and subset covers -------------------------------------


def emit_universe(n: int, universe: Sequence[int]) -> str:
    return " ".join(["universe", str(n), *(str(x) for x in universe)])


def _subset_hex(mask: int, size: int) -> str:
    digits = max(1, (size + 3) // 4)
    return format(mask, f"0{digits}x")


def emit_semifilter_set(
    n: int, universe: Sequence[int], filters: Iterable[int]
) -> str:
    """Emit semi-filters as family masks over the 2^u subset indices."""
    u = len(universe)
    lines = [emit_universe(n, universe)]
    for mask in filters:
        lines.append(f"sf {u} {_subset_hex(mask, 1 << u)}")
    return "\n".join(lines) + "\n"


def parse_semifilter_set(text: str) -> tuple[int, tuple[int, ...], list[int]]:
    """Parse a semi-filter file into (n, universe, family masks)."""
    n: int | None = None
    universe: tuple[int, ...] = ()
    filters: list[int] = []
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "universe":
            if n is not None:
                raise ParseError("duplicate universe line", lineno)
            if len(parts) < 2:
                raise ParseError("universe line needs a variable count", lineno)
            n = _int(parts[1], lineno, "variable count")
            universe = tuple(_int(tok, lineno, "assignment") for tok in parts[2:])
            if list(universe) != sorted(set(universe)):
                raise ParseError("universe must be strictly increasing", lineno)
            if universe and not 0 <= universe[-1] < (1 << n):
                raise ParseError(f"assignment {universe[-1]} out of range", lineno)
        elif parts[0] == "sf":
            if n is None:
                raise ParseError("sf line before universe line", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'sf <u> <hex>'", lineno)
            u = _int(parts[1], lineno, "universe size")
            if u != len(universe):
                raise ParseError(
                    f"sf over {u} points, universe has {len(universe)}", lineno
                )
            try:
                mask = int(parts[2], 16)
            except ValueError:
                raise ParseError(f"bad hex {parts[2]!r}", lineno) from None
            if mask >= (1 << (1 << u)):
                raise ParseError("family mask wider than the subset lattice", lineno)
            filters.append(mask)
        else:
            raise ParseError(f"unknown semi-filter line {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing universe line", 1)
    return n, universe, filters


def emit_subset_cover(
    n: int,
    universe: Sequence[int],
    groups: Iterable[Sequence[int]],
) -> str:
    """Emit pair (or tuple) covers; masks are over universe positions."""
    u = len(universe)
    lines = [emit_universe(n, universe)]
    for group in groups:
        word = "pair" if len(group) == 2 else "tuple"
        blob = " ".join(_subset_hex(mask, u) for mask in group)
        lines.append(f"{word} {blob}")
    return "\n".join(lines) + "\n"


def parse_subset_cover(
    text: str,
) -> tuple[int, tuple[int, ...], list[tuple[int, ...]]]:
    n: int | None = None
    universe: tuple[int, ...] = ()
    groups: list[tuple[int, ...]] = []
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "universe":
            if n is not None:
                raise ParseError("duplicate universe line", lineno)
            n = _int(parts[1], lineno, "variable count")
            universe = tuple(_int(tok, lineno, "assignment") for tok in parts[2:])
        elif parts[0] in ("pair", "tuple"):
            if n is None:
                raise ParseError(f"{parts[0]} line before universe line", lineno)
            if parts[0] == "pair" and len(parts) != 3:
                raise ParseError("expected 'pair <hexA> <hexB>'", lineno)
            masks = []
            for tok in parts[1:]:
                try:
                    mask = int(tok, 16)
                except ValueError:
                    raise ParseError(f"bad hex {tok!r}", lineno) from None
                if mask >= (1 << len(universe)):
                    raise ParseError("subset mask wider than the universe", lineno)
                masks.append(mask)
            groups.append(tuple(masks))
        else:
            raise ParseError(f"unknown cover line {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing universe line", 1)
    return n, universe, groups
