"""Matplotlib renderings of reports, written straight to files.

Figures are a convenience layer over the text reports: the ledger
curve of a localization run, the per-assignment lemma margins, and the
pass/fail strip of a preset.  Everything draws on an explicit Figure
with the Agg canvas, so no display and no pyplot global state is
involved.  Image bytes are not part of any determinism contract; the
text reports are the canonical output.
"""

from __future__ import annotations

import os

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .barrier import LemmaReport
from .localize import LocalizationReport

_PASS = "#2a7e43"
_FAIL = "#b03a2e"


def _new_axes(width: float = 6.4, height: float = 3.6):
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig, fig.add_subplot(111)


def _save(fig: Figure, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path


def ledger_figure(report: LocalizationReport, path: str) -> str:
    """Cumulative certificate size against the per-step budget line."""
    xs = list(range(1, len(report.steps) + 1))
    cumulative = [s.cumulative for s in report.steps]
    bound = [float(report.bound(s)) for s in report.steps]
    fig, ax = _new_axes()
    ax.step(xs, cumulative, where="post", color="#1f4e79", label="tuples emitted")
    ax.plot(xs, bound, color=_FAIL, linestyle="--", label="ledger bound")
    oracle_steps = [i for i, s in zip(xs, report.steps) if s.kind != "op"]
    if oracle_steps:
        ax.scatter(oracle_steps, [cumulative[i - 1] for i in oracle_steps],
                   color="#1f4e79", zorder=3, s=18, label="oracle gates")
    ax.set_xlabel("gate step")
    ax.set_ylabel("tuples")
    ax.set_title(f"localization ledger ({report.mode}, f={report.f.hex()})")
    ax.legend(loc="upper left", fontsize=8)
    return _save(fig, path)


def lemma_figure(report: LemmaReport, path: str) -> str:
    """Left-hand side next to the scaled delta mass, one bar per assignment."""
    xs = list(range(len(report.rows)))
    lhs = [float(r.lhs) for r in report.rows]
    rhs = [float(r.rhs) for r in report.rows]
    fig, ax = _new_axes()
    ax.bar([x - 0.2 for x in xs], lhs, width=0.4, color="#1f4e79", label="lhs")
    ax.bar([x + 0.2 for x in xs], rhs, width=0.4, color="#c78a1e",
           label="factor * delta mass")
    ax.set_xticks(xs)
    ax.set_xticklabels([format(r.x, "b").zfill(report.params.n) for r in report.rows],
                       fontsize=8)
    ax.set_xlabel("assignment")
    ax.set_title(f"distribution lemma margins (factor {report.factor})")
    ax.legend(fontsize=8)
    return _save(fig, path)


def checks_figure(title: str, checks: list[tuple[str, bool]], path: str) -> str:
    """Horizontal pass/fail strip, one row per expected property."""
    rows = len(checks) or 1
    fig, ax = _new_axes(height=max(1.6, 0.34 * rows + 0.9))
    for i, (label, ok) in enumerate(reversed(checks)):
        ax.barh(i, 1.0, color=_PASS if ok else _FAIL, height=0.72)
        ax.text(0.02, i, label, va="center", fontsize=8, color="white")
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_xticks([])
    ax.set_title(title)
    return _save(fig, path)


def figure_path(figdir: str, stem: str) -> str:
    """File name for a figure, creating the directory on the way."""
    os.makedirs(figdir, exist_ok=True)
    return os.path.join(figdir, f"{stem}.png")
