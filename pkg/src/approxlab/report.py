"""Deterministic text reports: aligned columns, checks, key=value trailer.

Every experiment emits the same three-part shape.  A table carries the
per-instance numbers, a block of PASS/FAIL lines carries the verdicts,
and a trailer of ``key=value`` pairs carries the machine-readable
summary.  Rendering is a pure function of the report contents; there
are no timestamps, no hashes of memory addresses, and no floats beyond
the int-valued and infinite ones the distance module produces, so a
re-run with the same seeds yields byte-identical text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


def fmt(value) -> str:
    """Canonical cell text: exact rationals, hex tables, stable floats."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        if value == int(value):
            return str(int(value))
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(fmt(v) for v in value) if value else "-"
    hexer = getattr(value, "hex", None)
    if callable(hexer) and not isinstance(value, (bytes, str)):
        return hexer()
    return str(value)


@dataclass
class Report:
    """One experiment's output, ready to render.

    ``checks`` are the expected properties; the report passes iff all
    of them hold.  ``trailer`` keys keep insertion order.
    """

    title: str
    headers: tuple[str, ...] = ()
    rows: list[tuple] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    trailer: list[tuple[str, object]] = field(default_factory=list)

    def row(self, *cells) -> None:
        self.rows.append(cells)

    def check(self, label: str, ok: bool) -> bool:
        """Record one expected property; returns the verdict for chaining."""
        self.checks.append((label, bool(ok)))
        return bool(ok)

    def kv(self, key: str, value) -> None:
        self.trailer.append((key, value))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def render(self, machine: bool = False) -> str:
        return render(self, machine=machine)


def _table_lines(headers: tuple[str, ...], rows: list[tuple]) -> list[str]:
    grid = [tuple(fmt(c) for c in r) for r in rows]
    cols = len(headers)
    for r in grid:
        cols = max(cols, len(r))
    widths = [0] * cols
    for r in [headers, *grid]:
        for i, cell in enumerate(r):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for r in [headers, *grid] if headers else grid:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())
    if headers:
        lines.insert(1, "  ".join("-" * w for w in widths[: len(headers)]))
    return lines


def render(report: Report, machine: bool = False) -> str:
    """The full text, trailing newline included; trailer only under ``machine``."""
    trailer = [f"{k}={fmt(v)}" for k, v in report.trailer]
    trailer.append(f"status={'pass' if report.passed else 'fail'}")
    if machine:
        return "\n".join(trailer) + "\n"
    lines = [report.title, "=" * len(report.title)]
    if report.rows or report.headers:
        lines.append("")
        lines.extend(_table_lines(report.headers, report.rows))
    if report.checks:
        lines.append("")
        for label, ok in report.checks:
            lines.append(f"{'PASS' if ok else 'FAIL'}  {label}")
    lines.append("")
    lines.extend(trailer)
    return "\n".join(lines) + "\n"
