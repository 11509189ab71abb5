"""Command-line front end: one verb per library operation.

The CLI resolves arguments into library calls and prints the reports;
no computation happens here that the library cannot do on its own.
Output is text-first with a ``--machine`` flag for trailer-only form,
and a fixed seed yields byte-identical output.  Exit codes: 0 for
pass, 1 for a failed property, 2 for usage or parse errors, 3 when a
search-space estimate exceeds the budget.

Truth tables are given as ``N:HEX`` literals or files in the ``tt``
format; models as ``exact:N``, ``rs:N:T:SEED``, or a model file.
"""

from __future__ import annotations

import os
import sys

import click

from .barrier import (barrier_cover, barrier_cover_0proj, barrier_cover_depth,
                      positions_cover_check, verify_distr_lemma)
from .circuits import connective, standard_basis, truth_table
from .distance import rho_d_exact, rho_exact, verify_cover
from .enumeration import (enumerate_circuits, estimate_enumeration,
                          min_circuit_size, reachable_tables)
from .errors import ApproxLabError, ParseError, ResourceBudgetError
from .formats import (emit_cert, emit_circuit, emit_model, emit_semifilter_set,
                      emit_subset_cover, parse_cert, parse_circuit, parse_model,
                      parse_subset_cover, parse_tt)
from .fusion import (anticheckers, enumerate_dsemifilters,
                     enumerate_semifilters, extract_circuit,
                     extract_depth_circuit, fz_closure, rho_F0, rho_F0_d_t)
from .localize import (localize_0proj, localize_depth, localize_general,
                       localize_projective, oracle_stats)
from .models import check_0_projective, check_projective, gen_exact_model, gen_rs_model
from .presets import run_preset
from .report import Report
from .truthtable import TruthTable


def _load_table(spec: str) -> TruthTable:
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_tt(fh.read().strip())
    head, sep, tail = spec.partition(":")
    if sep and head.isdigit():
        try:
            return TruthTable.from_hex(int(head), tail)
        except ValueError as exc:
            raise click.UsageError(f"bad truth table literal {spec!r}: {exc}")
    raise click.UsageError(
        f"truth table {spec!r} is neither an N:HEX literal nor a file")


def _load_model(spec: str, budget: int | None = None):
    parts = spec.split(":")
    try:
        if parts[0] == "exact" and len(parts) == 2:
            return gen_exact_model(int(parts[1]), budget=budget)
        if parts[0] == "rs" and len(parts) == 4:
            return gen_rs_model(int(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise click.UsageError(f"bad model spec {spec!r}: {exc}")
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_model(fh.read())
    raise click.UsageError(
        f"model {spec!r} is neither exact:N, rs:N:T:SEED, nor a file")


def _load_circuit(path: str, n: int | None = None):
    with open(path) as fh:
        return parse_circuit(fh.read(), n=n)


def _parse_basis(text: str | None):
    if text is None:
        return standard_basis()
    conns = []
    for item in text.split(","):
        item = item.strip().upper()
        name = item.rstrip("0123456789")
        digits = item[len(name):]
        if not name:
            raise click.UsageError(f"bad connective {item!r}")
        arity = int(digits) if digits else (1 if name == "NOT" else 2)
        try:
            conns.append(connective(name, arity))
        except ValueError as exc:
            raise click.UsageError(str(exc))
    return tuple(conns)


def _write_cert(cert, out: str, model) -> str:
    """Write the certificate, witness companions, and the materialized model.

    Certificates reference members by index in the emitting model, and
    lazy models materialize composed members during the run, so a
    fresh model built from the same spec may not resolve the indices.
    The sibling ``.model`` file freezes the exact member list the
    certificate is relative to; verify against that file.
    """
    text, companions = emit_cert(cert)
    with open(out, "w") as fh:
        fh.write(text)
    outdir = os.path.dirname(os.path.abspath(out))
    for name, content in companions.items():
        with open(os.path.join(outdir, name), "w") as fh:
            fh.write(content)
    model_file = out + ".model"
    with open(model_file, "w") as fh:
        fh.write(emit_model(model))
    return model_file


def _emit_report(ctx, report: Report) -> int:
    click.echo(report.render(machine=ctx.obj["machine"]), nl=False)
    return 0 if report.passed else 1


@click.group()
@click.option("--machine", is_flag=True, help="Print only the key=value trailer.")
@click.option("--figdir", type=click.Path(file_okay=False), default=None,
              help="Render figures for report-producing verbs into this directory.")
@click.option("--threads", type=int, default=1, show_default=True,
              help="Search parallelism; never changes outputs.")
@click.pass_context
def cli(ctx, machine, figdir, threads):
    """Approximation-distance workbench."""
    if threads < 1:
        raise click.UsageError("threads must be positive")
    ctx.obj = {"machine": machine, "figdir": figdir, "threads": threads}


@cli.command("rho")
@click.option("--f", "f_spec", required=True, help="Target table (N:HEX or file).")
@click.option("--model", "model_spec", required=True)
@click.option("--mode", type=click.Choice(["sym", "asym"]), default="sym",
              show_default=True)
@click.option("--depth", type=int, default=None,
              help="Depth budget; routes to the depth-bounded distance.")
@click.option("--exact/--greedy", "exact", default=True,
              help="Exact minimum or greedy upper bound.")
@click.option("--size-cap", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def rho_cmd(ctx, f_spec, model_spec, mode, depth, exact, size_cap, budget):
    """Minimum certificate size for f against a model."""
    f = _load_table(f_spec)
    model = _load_model(model_spec, budget)
    if depth is not None:
        result = rho_d_exact(f, model, depth, mode=mode, budget=budget)
    else:
        result = rho_exact(f, model, mode=mode, size_cap=size_cap, budget=budget,
                           greedy_only=not exact)
    rep = Report(title=f"rho f={f.hex()} model={model.label}")
    rep.headers = ("value", "exact", "g", "tuples")
    rep.row(result.value, result.exact, result.g,
            len(result.cert.tuples) if result.cert else None)
    if result.note:
        rep.kv("note", result.note)
    rep.kv("value", result.value)
    rep.kv("exact", result.exact)
    return _emit_report(ctx, rep)


@cli.command("rho-d")
@click.option("--f", "f_spec", required=True)
@click.option("--model", "model_spec", required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--mode", type=click.Choice(["sym", "asym"]), default="sym",
              show_default=True)
@click.option("--budget", type=int, default=None)
@click.pass_context
def rho_d_cmd(ctx, f_spec, model_spec, d, mode, budget):
    """Depth-budgeted minimum certificate size."""
    f = _load_table(f_spec)
    model = _load_model(model_spec, budget)
    result = rho_d_exact(f, model, d, mode=mode, budget=budget)
    rep = Report(title=f"rho_d f={f.hex()} model={model.label} d={d}")
    rep.headers = ("value", "exact", "g")
    rep.row(result.value, result.exact, result.g)
    if result.note:
        rep.kv("note", result.note)
    rep.kv("value", result.value)
    return _emit_report(ctx, rep)


@cli.command("verify-cert")
@click.option("--f", "f_spec", required=True)
@click.option("--model", "model_spec", required=True)
@click.option("--cert", "cert_path", required=True, type=click.Path(exists=True))
@click.pass_context
def verify_cert_cmd(ctx, f_spec, model_spec, cert_path):
    """Check a certificate file against f and a model."""
    f = _load_table(f_spec)
    model = _load_model(model_spec)
    certdir = os.path.dirname(os.path.abspath(cert_path))
    with open(cert_path) as fh:
        text = fh.read()
    def load(name: str) -> str:
        with open(os.path.join(certdir, name)) as companion:
            return companion.read()
    cert = parse_cert(text, load=load)
    verdict = verify_cover(f, model, cert)
    rep = Report(title=f"verify-cert f={f.hex()} model={model.label}")
    rep.check("certificate covers every error of f against g", verdict.ok)
    if not verdict.ok:
        rep.kv("reason", verdict.reason)
    rep.kv("g", cert.g)
    rep.kv("tuples", len(cert.tuples))
    return _emit_report(ctx, rep)


@cli.group()
def barrier():
    """Branching distributions: lemma checks, covers, positions."""


@barrier.command("verify-lemma")
@click.option("--model", "model_spec", required=True)
@click.option("--f", "f_spec", required=True)
@click.option("--depth", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def verify_lemma_cmd(ctx, model_spec, f_spec, depth, budget):
    """Check the distribution inequality at every assignment."""
    f = _load_table(f_spec)
    model = _load_model(model_spec, budget)
    lr = verify_distr_lemma(model, f, depth=depth, budget=budget)
    rep = Report(title=f"verify-lemma f={f.hex()} model={model.label}")
    rep.headers = ("x", "lhs", "delta mass", "bound", "ok")
    for row in lr.rows:
        rep.row(format(row.x, "b").zfill(f.n), row.lhs, row.delta_mass, row.rhs, row.ok)
    rep.check("lhs <= factor * delta mass at every assignment", lr.passed)
    rep.kv("factor", lr.factor)
    rep.kv("max_ratio", lr.max_ratio)
    figdir = ctx.obj["figdir"]
    if figdir is not None:
        from .figures import figure_path, lemma_figure
        lemma_figure(lr, figure_path(figdir, f"lemma-{f.hex()}"))
    return _emit_report(ctx, rep)


@barrier.command("cover")
@click.option("--model", "model_spec", required=True)
@click.option("--f", "f_spec", required=True)
@click.option("--mode", type=click.Choice(["sym", "asym"]), default="sym",
              show_default=True, help="Flat cover mode.")
@click.option("--zero-proj", is_flag=True,
              help="Use the dead-variable walk for 0-projective models.")
@click.option("--depth", type=int, default=None,
              help="Depth budget; emits a witness-carrying certificate.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the certificate to this file.")
@click.option("--budget", type=int, default=None)
@click.pass_context
def barrier_cover_cmd(ctx, model_spec, f_spec, mode, zero_proj, depth, out, budget):
    """Build and verify a cover certificate from branching statistics."""
    f = _load_table(f_spec)
    model = _load_model(model_spec, budget)
    if depth is not None:
        cert, info = barrier_cover_depth(model, f, depth, budget=budget)
    elif zero_proj:
        cert, info = barrier_cover_0proj(model, f, budget=budget)
    else:
        cert, info = barrier_cover(model, f, mode=mode, budget=budget)
    verdict = verify_cover(f, model, cert)
    rep = Report(title=f"barrier cover f={f.hex()} model={model.label}")
    rep.headers = ("g", "tuples", "mode")
    rep.row(cert.g, len(cert.tuples), cert.mode)
    rep.check("certificate verifies", verdict.ok)
    rep.kv("size", len(cert.tuples))
    if out is not None:
        rep.kv("model_file", _write_cert(cert, out, model))
    return _emit_report(ctx, rep)


@barrier.command("positions")
@click.option("--model", "model_spec", required=True)
@click.option("--f", "f_spec", required=True)
@click.option("--g", "g_spec", required=True)
@click.option("--x", type=int, required=True)
@click.option("--budget", type=int, default=None)
@click.pass_context
def positions_cmd(ctx, model_spec, f_spec, g_spec, x, budget):
    """Locate an approximation error of the branching tree at one assignment."""
    f = _load_table(f_spec)
    g = _load_table(g_spec)
    model = _load_model(model_spec, budget)
    witness = positions_cover_check(model, f, g, x, budget=budget)
    rep = Report(title=f"positions f={f.hex()} g={g.hex()} x={x}")
    rep.headers = ("gate", "side", "true total", "approx", "value")
    rep.row(witness.position, witness.side, witness.total, witness.est,
            witness.approx_value)
    rep.check("error localized to a canonical position", True)
    rep.kv("position", witness.position)
    return _emit_report(ctx, rep)


@cli.group()
def fusion():
    """Semi-filter covers, closures, and circuit extraction."""


@fusion.command("enumerate")
@click.option("--f", "f_spec", required=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_enumerate_cmd(ctx, f_spec, out, budget):
    """All semi-filters over the zero-set of f with a one-set point."""
    f = _load_table(f_spec)
    fs = enumerate_semifilters(f, budget=budget)
    rep = Report(title=f"semi-filters of f={f.hex()}")
    rep.headers = ("universe", "filters", "points")
    rep.row(fs.universe, len(fs.filters), tuple(F.v() for F in fs.filters))
    if fs.note:
        rep.kv("note", fs.note)
    rep.kv("filters", len(fs.filters))
    if out is not None:
        with open(out, "w") as fh:
            fh.write(emit_semifilter_set(f.n, fs.universe,
                                         [F.bits for F in fs.filters]))
    return _emit_report(ctx, rep)


@fusion.command("cover")
@click.option("--f", "f_spec", required=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_cover_cmd(ctx, f_spec, out, budget):
    """Fewest pairs breaking every admissible semi-filter of f."""
    f = _load_table(f_spec)
    fr = rho_F0(f, enumerate_semifilters(f, budget=budget), budget=budget)
    rep = Report(title=f"fusion cover f={f.hex()}")
    rep.headers = ("rho_F0", "pairs")
    rep.row(fr.value, fr.cover.pairs if fr.cover.pairs else None)
    rep.kv("rho", fr.value)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(emit_subset_cover(f.n, fr.cover.universe, fr.cover.pairs))
    return _emit_report(ctx, rep)


@fusion.command("closure")
@click.option("--f", "f_spec", required=True)
@click.option("--z", type=int, required=True)
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_closure_cmd(ctx, f_spec, z, pairs_path, budget):
    """Close the literal sets of z under the pair rules and read the verdict."""
    f = _load_table(f_spec)
    with open(pairs_path) as fh:
        _, _, pairs = parse_subset_cover(fh.read())
    trace = fz_closure(pairs, f, z, budget=budget)
    rep = Report(title=f"closure f={f.hex()} z={z}")
    rep.headers = ("round", "accepted sets")
    for i, level in enumerate(trace.levels):
        rep.row(i, sum(level))
    rep.check("closure verdict equals f(z)", trace.verdict == f(z))
    rep.kv("verdict", trace.verdict)
    return _emit_report(ctx, rep)


@fusion.command("extract")
@click.option("--f", "f_spec", required=True)
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_extract_cmd(ctx, f_spec, pairs_path, out, budget):
    """Rebuild a circuit for f from a covering pair list."""
    f = _load_table(f_spec)
    with open(pairs_path) as fh:
        _, _, pairs = parse_subset_cover(fh.read())
    ex = extract_circuit(pairs, f, budget=budget)
    computes = truth_table(ex.circuit) == f
    rep = Report(title=f"extraction f={f.hex()}")
    rep.headers = ("size", "depth", "rounds", "computes f")
    rep.row(ex.size, ex.depth, ex.rounds, computes)
    rep.check("extracted circuit computes f", computes)
    rep.kv("size", ex.size)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(emit_circuit(ex.circuit))
    return _emit_report(ctx, rep)


@fusion.command("anticheckers")
@click.option("--f", "f_spec", required=True)
@click.option("--s", type=int, required=True)
@click.option("--budget", type=int, default=None)
@click.pass_context
def anticheckers_cmd(ctx, f_spec, s, budget):
    """A smallest set on which every circuit of size at most s errs."""
    f = _load_table(f_spec)
    points = anticheckers(f, s, budget=budget)
    rep = Report(title=f"anticheckers f={f.hex()} s={s}")
    rep.headers = ("points",)
    rep.row(points)
    rep.kv("points", points)
    return _emit_report(ctx, rep)


@fusion.command("dcover")
@click.option("--f", "f_spec", required=True)
@click.option("--d", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_dcover_cmd(ctx, f_spec, d, t, out, budget):
    """Fewest t-tuples breaking every (d-1)-step chain of f."""
    f = _load_table(f_spec)
    chains = enumerate_dsemifilters(f, d - 1, budget=budget)
    fr = rho_F0_d_t(f, chains, d, t, budget=budget)
    rep = Report(title=f"depth fusion cover f={f.hex()} d={d} t={t}")
    rep.headers = ("chains", "rho", "tuples")
    rep.row(len(chains), fr.value, fr.cover.tuples if fr.cover.tuples else None)
    rep.kv("rho", fr.value)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(emit_subset_cover(f.n, fr.cover.universe, fr.cover.tuples))
    return _emit_report(ctx, rep)


@fusion.command("dextract")
@click.option("--f", "f_spec", required=True)
@click.option("--d", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--tuples", "tuples_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def fusion_dextract_cmd(ctx, f_spec, d, t, tuples_path, out, budget):
    """Rebuild a bounded-depth circuit from a covering tuple list."""
    f = _load_table(f_spec)
    with open(tuples_path) as fh:
        _, _, tuples = parse_subset_cover(fh.read())
    ex = extract_depth_circuit(tuples, f, d, t, budget=budget)
    computes = truth_table(ex.circuit) == f
    rep = Report(title=f"depth extraction f={f.hex()} d={d} t={t}")
    rep.headers = ("size", "depth", "fan-in", "computes f")
    rep.row(ex.size, ex.depth, ex.fan_in, computes)
    rep.check("extracted circuit computes f", computes)
    rep.check(f"depth <= {ex.depth_bound}", ex.depth <= ex.depth_bound)
    rep.check(f"fan-in <= {ex.fan_in_bound}", ex.fan_in <= ex.fan_in_bound)
    rep.kv("depth", ex.depth)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(emit_circuit(ex.circuit))
    return _emit_report(ctx, rep)


@cli.command("localize")
@click.option("--model", "model_spec", required=True)
@click.option("--circuit", "circuit_path", required=True, type=click.Path(exists=True))
@click.option("--f", "f_spec", default=None,
              help="Target table; defaults to the circuit's own function.")
@click.option("--mode", type=click.Choice(["general", "0proj", "proj", "depth"]),
              default="general", show_default=True)
@click.option("--d", type=int, default=None, help="Depth budget for --mode depth.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the certificate to this file.")
@click.option("--budget", type=int, default=None)
@click.pass_context
def localize_cmd(ctx, model_spec, circuit_path, f_spec, mode, d, out, budget):
    """Walk an oracle circuit into a verified cover certificate."""
    model = _load_model(model_spec, budget)
    circuit = _load_circuit(circuit_path, n=model.n)
    f = _load_table(f_spec) if f_spec else truth_table(circuit)
    if mode == "depth":
        if d is None:
            raise click.UsageError("--mode depth requires --d")
        cert, info = localize_depth(model, circuit, f, d, budget=budget)
    elif mode == "0proj":
        cert, info = localize_0proj(model, circuit, f, budget=budget)
    elif mode == "proj":
        cert, info = localize_projective(model, circuit, f, budget=budget)
    else:
        cert, info = localize_general(model, circuit, f, budget=budget)
    count, max_arity = oracle_stats(circuit)
    verdict = verify_cover(f, model, cert)
    rep = Report(title=f"localize f={f.hex()} model={model.label} mode={mode}")
    rep.headers = ("gate", "kind", "added", "cumulative", "bound")
    for step in info.steps:
        rep.row(step.gate, step.kind, step.added, step.cumulative, info.bound(step))
    rep.check("emitted certificate verifies", verdict.ok)
    rep.check("ledger is complete and within bound", info.ledger_ok())
    rep.kv("oracles", count)
    rep.kv("max_arity", max_arity)
    rep.kv("size", cert.size)
    rep.kv("constant", info.constant)
    if out is not None:
        rep.kv("model_file", _write_cert(cert, out, model))
    figdir = ctx.obj["figdir"]
    if figdir is not None:
        from .figures import figure_path, ledger_figure
        ledger_figure(info, figure_path(figdir, f"ledger-{mode}-{f.hex()}"))
    return _emit_report(ctx, rep)


@cli.group()
def model():
    """Generate, validate, and classify approximation models."""


@model.command("gen")
@click.option("--spec", required=True, help="exact:N or rs:N:T:SEED.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def model_gen_cmd(ctx, spec, out, budget):
    """Generate a model and emit its materialized text form."""
    generated = _load_model(spec, budget)
    text = emit_model(generated)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(text)
    rep = Report(title=f"model {generated.label}")
    rep.headers = ("n", "members", "neg exact")
    rep.row(generated.n, len(generated.members), generated.neg_exact)
    rep.kv("label", generated.label)
    rep.kv("members", len(generated.members))
    return _emit_report(ctx, rep)


@model.command("validate")
@click.option("--model", "model_spec", required=True)
@click.pass_context
def model_validate_cmd(ctx, model_spec):
    """Run the model's structural self-checks."""
    checked = _load_model(model_spec)
    problems = checked.validate()
    rep = Report(title=f"validate {checked.label}")
    for problem in problems:
        rep.row(problem)
    rep.check("model satisfies its structural contract", not problems)
    rep.kv("problems", len(problems))
    return _emit_report(ctx, rep)


@model.command("check-proj")
@click.option("--model", "model_spec", required=True)
@click.option("--max-size", type=int, default=3, show_default=True,
              help="Circuit family size bound for the projectivity walks.")
@click.option("--budget", type=int, default=None)
@click.pass_context
def model_checkproj_cmd(ctx, model_spec, max_size, budget):
    """Projectivity classification over a small circuit family."""
    checked = _load_model(model_spec, budget)
    family = list(enumerate_circuits(checked.n, standard_basis(), max_size,
                                     budget=budget))
    zero = check_0_projective(checked, family)
    proj = check_projective(checked, family, tuple_budget=budget)
    rep = Report(title=f"projectivity of {checked.label}")
    rep.headers = ("property", "holds", "checked", "detail")
    rep.row("0-projective", zero.passed, zero.checked, zero.detail or None)
    rep.row("projective", proj.passed, proj.checked, proj.detail or None)
    rep.kv("zero_projective", zero.passed)
    rep.kv("projective", proj.passed)
    return _emit_report(ctx, rep)


@cli.group()
def circuits():
    """Circuit enumeration and minimum size."""


@circuits.command("enum")
@click.option("--n", type=int, required=True)
@click.option("--max-size", type=int, required=True)
@click.option("--max-depth", type=int, default=None)
@click.option("--basis", "basis_text", default=None,
              help="Comma list such as NOT,AND2,OR2.")
@click.option("--budget", type=int, default=None)
@click.pass_context
def circuits_enum_cmd(ctx, n, max_size, max_depth, basis_text, budget):
    """Count the normal-form circuits and their reachable tables."""
    basis = _parse_basis(basis_text)
    count = sum(1 for _ in enumerate_circuits(n, basis, max_size, max_depth,
                                              budget=budget))
    tables = reachable_tables(n, basis, max_size, budget=budget)
    rep = Report(title=f"circuits n={n} size<={max_size}")
    rep.headers = ("circuits", "tables", "estimate")
    rep.row(count, len(tables), estimate_enumeration(n, basis, max_size))
    rep.kv("circuits", count)
    rep.kv("tables", len(tables))
    return _emit_report(ctx, rep)


@circuits.command("minsize")
@click.option("--f", "f_spec", required=True)
@click.option("--cap", type=int, default=6, show_default=True)
@click.option("--max-depth", type=int, default=None)
@click.option("--basis", "basis_text", default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
def circuits_minsize_cmd(ctx, f_spec, cap, max_depth, basis_text, budget):
    """Least basis-circuit size computing f, within the cap."""
    f = _load_table(f_spec)
    basis = _parse_basis(basis_text)
    size = min_circuit_size(f, basis, cap, max_depth=max_depth, budget=budget)
    rep = Report(title=f"minsize f={f.hex()}")
    rep.headers = ("size", "cap")
    rep.row(size, cap)
    rep.check("a circuit within the cap computes f", size is not None)
    rep.kv("size", size)
    return _emit_report(ctx, rep)


@cli.group()
def preset():
    """Named experiments reproducing the acceptance criteria."""


@preset.command("run")
@click.argument("name")
@click.pass_context
def preset_run_cmd(ctx, name):
    """Run one preset and report its expected properties."""
    try:
        rep = run_preset(name, figdir=ctx.obj["figdir"], threads=ctx.obj["threads"])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    return _emit_report(ctx, rep)


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="approxlab", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except ResourceBudgetError as exc:
        click.echo(f"budget exceeded: {exc}", err=True)
        return 3
    except ApproxLabError as exc:
        click.echo(f"failed: {exc}", err=True)
        return 1
    return int(rv) if rv else 0


if __name__ == "__main__":
    sys.exit(main())
