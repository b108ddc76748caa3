"""Command-line front end: ``wfilt <command> <document> [options]``.

Exit status: 0 when the computation succeeds and every verdict holds, 1 when
a verdict fails, 2 when the input cannot be read or is invalid.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import checks
from .complexes import ComplexError
from .cubical import simple_r
from .descent import (
    ResolutionDatum,
    SpectralResult,
    filtration_bounds,
    singularity_ss,
    weight_compact,
    weight_general,
    weight_smooth,
)
from .filtered import FilteredComplex
from .linalg import ModulePresentation
from .serialize import Document, DocumentError, load, matrix_out
from .spectral import SpectralSequence, SSPage, abutment_filtration, stabilize

__all__ = ["main", "run", "render_text", "render_machine", "parse_report"]

REPORT_SCHEMA = 1
CHECKS = ("decalage", "simple-exchange", "mv", "gysin-acyclic", "e2-independence")


class UsageError(Exception):
    """Input that is well formed but unsuitable for the requested command."""


# ---------------------------------------------------------------------------
# report model


def _pres(m: ModulePresentation) -> dict:
    return {"free_rank": m.free_rank, "torsion": list(m.torsion)}


def _page_json(page: SSPage) -> dict:
    cells = [{"p": p, "q": q, **_pres(v)} for (p, q), v in page.nonzero_cells().items()]
    diffs = []
    for (p, q), M in sorted(page.d.items()):
        if page.cell(p, q).is_zero or M.is_zero() or page._reduced_zero((p, q), M):
            continue
        diffs.append({"p": p, "q": q, "matrix": matrix_out(M)})
    return {"r": page.r, "cells": cells, "differentials": diffs}


def _filtration_json(f) -> dict:
    return {
        "n": f.n,
        "total": _pres(f.total) if f.total is not None else None,
        "graded": [{"index": s, **_pres(g)} for s, g in f.nonzero_graded().items()],
    }


def _result_json(res: SpectralResult) -> dict:
    shown = sorted(r for r in res.pages if r <= max(2, res.r_stable or 2))
    return {
        "label": res.label,
        "rule": res.rule,
        "level": res.level,
        "r_stable": res.r_stable,
        "pages": [_page_json(res.pages[r]) for r in shown],
        "filtrations": [_filtration_json(res.filtrations[n]) for n in sorted(res.filtrations)],
    }


def _verdict(name: str, problems: list[str]) -> dict:
    return {"name": name, "passed": not problems, "details": list(problems)}


def _report(command: str, doc: Document, result: dict | None, verdicts: list, warnings: list) -> dict:
    code = 0 if all(v["passed"] for v in verdicts) else 1
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "document": doc.name,
        "kind": doc.kind,
        "ring": str(doc.ring),
        "result": result,
        "verdicts": verdicts,
        "warnings": list(warnings),
        "exit_code": code,
    }


# ---------------------------------------------------------------------------
# commands


def _expected_verdicts(res: SpectralResult, expected: dict | None) -> list:
    if not expected:
        return []
    problems = []
    for n in sorted(set(expected) | set(res.filtrations)):
        f = res.filtrations.get(n)
        got = f.total.free_rank if f is not None and f.total is not None else 0
        if got != expected.get(n, 0):
            problems.append(f"H^{n}: rank {got}, document expects {expected.get(n, 0)}")
    return [_verdict("expected_totals", problems)]


def _smooth_verdicts(res: SpectralResult) -> list:
    """Weights on ``H^n`` of a smooth space lie in ``[n, 2n]``."""
    problems = []
    for n, f in res.filtrations.items():
        for m in f.nonzero_graded():
            if not n <= m <= 2 * n:
                problems.append(f"H^{n}: weight {m} outside [{n}, {2 * n}]")
    return [_verdict("smooth_weights", problems)]


def _assembly_report(command: str, doc: Document, res: SpectralResult, extra: list = ()) -> dict:
    verdicts = [_verdict("bounds", filtration_bounds(res))] + _expected_verdicts(res, doc.expected) + list(extra)
    return _report(command, doc, _result_json(res), verdicts, res.warnings)


def cmd_singularity(doc: Document) -> dict:
    if doc.kind == "resolution":
        return _assembly_report("singularity", doc, singularity_ss(doc.payload))
    if doc.kind == "gysin":
        w = weight_smooth(doc.payload, doc.expected)
        ranks = {n: f.total.free_rank for n, f in w.filtrations.items() if f.total is not None}
        res = singularity_ss(ResolutionDatum.smooth(doc.ring, ranks))
        trivial = [f"H^{n}: L not concentrated in index {n}" for n, f in res.filtrations.items()
                   if any(m != n for m in f.nonzero_graded())]
        return _assembly_report("singularity", doc, res, [_verdict("trivial_on_smooth", trivial)])
    raise UsageError(f"singularity needs a resolution or gysin document, not {doc.kind}")


def cmd_weight(doc: Document) -> dict:
    if doc.kind == "gysin":
        res = weight_smooth(doc.payload, doc.expected)
        return _assembly_report("weight", doc, res, _smooth_verdicts(res))
    if doc.kind == "resolution":
        return _assembly_report("weight", doc, weight_compact(doc.payload))
    if doc.kind == "general_weight":
        return _assembly_report("weight", doc, weight_general(doc.payload, doc.expected))
    raise UsageError(f"weight needs a gysin, resolution or general_weight document, not {doc.kind}")


def _parse_r(text: str) -> range:
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise UsageError(f"--r expects an integer or a range a:b, got {text!r}") from None


def _filtered_of(doc: Document) -> FilteredComplex:
    if doc.kind == "filtered_complex":
        return doc.payload
    if doc.kind == "cubical":
        return simple_r(doc.payload, 1)
    raise UsageError(f"pages needs a filtered_complex or cubical document, not {doc.kind}")


def cmd_pages(doc: Document, rs: range) -> dict:
    FK = _filtered_of(doc)
    if rs.start < 0:
        raise UsageError("page index must be nonnegative")
    ss = SpectralSequence(FK)
    r_stable, stable = stabilize(FK, r_min=min(rs.start, 1), ss=ss)
    pages = [_page_json(ss.page(r)) for r in rs]
    filt = [_filtration_json(abutment_filtration(FK, n)) for n in FK.carrier.degrees()]
    result = {"label": "filtered", "rule": None, "level": "chain", "r_stable": r_stable,
              "pages": pages, "e_infinity": _page_json(stable[r_stable]), "filtrations": filt}
    return _report("pages", doc, result, [], [])


def cmd_verify(doc: Document, check: str, against: Document | None) -> dict:
    if check == "decalage":
        if doc.kind == "filtered_complex":
            problems = checks.decalage_shift(doc.payload, 1) + checks.decalage_shift(doc.payload, 2)
        elif doc.kind == "cubical":
            problems = checks.decalage_simple_exchange(doc.payload)
        else:
            raise UsageError("decalage checks need a filtered_complex or cubical document")
    elif check == "simple-exchange":
        if doc.kind != "cubical":
            raise UsageError("simple-exchange needs a cubical document")
        problems = (checks.decalage_simple_exchange(doc.payload)
                    + checks.page_simple_exchange(doc.payload, 0) + checks.page_simple_exchange(doc.payload, 1))
    elif check == "mv":
        if doc.kind != "square":
            raise UsageError("mv needs a square document")
        problems = checks.mayer_vietoris(doc.payload)
    elif check == "gysin-acyclic":
        if doc.kind != "general_weight":
            raise UsageError("gysin-acyclic needs a general_weight document with an augmentation")
        problems = checks.gysin_acyclic(doc.payload, doc.extra)
    else:
        if doc.kind != "resolution":
            raise UsageError("e2-independence needs a resolution document")
        if against is None:
            problems = checks.compact_coincidence(doc.payload)
            check = "compact-coincidence"
        else:
            if against.kind != "resolution":
                raise UsageError("--against must also be a resolution document")
            problems = checks.e2_independence(doc.payload, against.payload)
    return _report("verify", doc, None, [_verdict(check, problems)], [])


def cmd_report(doc: Document) -> dict:
    if doc.kind in ("filtered_complex", "cubical"):
        return cmd_pages(doc, range(0, 3))
    if doc.kind == "resolution":
        return cmd_singularity(doc)
    if doc.kind == "square":
        return cmd_verify(doc, "mv", None)
    return cmd_weight(doc)


# ---------------------------------------------------------------------------
# rendering


def _describe(cell: dict, ring: str) -> str:
    parts = []
    if cell["free_rank"]:
        parts.append(ring if cell["free_rank"] == 1 else f"{ring}^{cell['free_rank']}")
    parts += [f"Z/{d}" for d in cell["torsion"]]
    return " + ".join(parts) if parts else "0"


def _grid(page: dict, ring: str) -> list[str]:
    cells = {(c["p"], c["q"]): _describe(c, ring) for c in page["cells"]}
    if not cells:
        return ["    (all zero)"]
    ps = range(min(p for p, _ in cells), max(p for p, _ in cells) + 1)
    qs = range(max(q for _, q in cells), min(q for _, q in cells) - 1, -1)
    width = max(3, *(len(v) for v in cells.values()))
    head = "    q\\p " + " ".join(f"{p:>{width}}" for p in ps)
    lines = [head]
    for q in qs:
        lines.append(f"    {q:>3} " + " ".join(f"{cells.get((p, q), '.'):>{width}}" for p in ps))
    return lines


def render_text(report: dict) -> str:
    ring = report["ring"]
    out = [f"{report['command']}: {report['document'] or '(unnamed)'} [{report['kind']}] over {ring}"]
    res = report.get("result")
    if res:
        if res.get("level"):
            stable = f", stable from E_{res['r_stable']}" if res.get("r_stable") is not None else ""
            out.append(f"  {res['label']} spectral sequence, {res['level']} level{stable}")
        for page in res["pages"]:
            out.append(f"  E_{page['r']}:")
            out += _grid(page, ring)
            for d in page["differentials"]:
                out.append(f"    d_{page['r']} nonzero from ({d['p']},{d['q']})")
        if res.get("e_infinity"):
            out.append("  E_inf:")
            out += _grid(res["e_infinity"], ring)
        name = res.get("rule") or "induced"
        out.append(f"  filtration {name} on cohomology:")
        for f in res["filtrations"]:
            if not f["graded"]:
                continue
            parts = ", ".join(f"Gr_{g['index']} = {_describe(g, ring)}" for g in f["graded"])
            out.append(f"    H^{f['n']}: {parts}")
    for v in report["verdicts"]:
        out.append(f"  {v['name']}: {'pass' if v['passed'] else 'FAIL'}")
        out += [f"    {d}" for d in v["details"]]
    for w in report["warnings"]:
        out.append(f"  warning: {w}")
    return "\n".join(out) + "\n"


def render_machine(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def parse_report(text: str) -> dict:
    """``{verdict name: passed}`` from a machine report."""
    data = json.loads(text)
    if data.get("schema") != REPORT_SCHEMA:
        raise ValueError("not a machine report")
    return {v["name"]: v["passed"] for v in data["verdicts"]}


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wfilt", description="Weight and singularity filtrations from exact data.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        return p

    add("pages", "spectral pages of a filtered complex").add_argument("--r", default="1", help="page or range a:b")
    add("singularity", "singularity spectral sequence and filtration L")
    add("weight", "weight spectral sequence and filtration W")
    v = add("verify", "structural checks")
    v.add_argument("--check", required=True, choices=CHECKS)
    v.add_argument("--against", help="second resolution document for e2-independence")
    add("report", "default analysis for the document kind")
    return ap


def run(argv: list[str]) -> tuple[int, str, str]:
    """``(exit code, stdout text, stderr text)``."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return (2 if e.code else 0), "", ""
    try:
        doc = load(args.file)
        if args.command == "pages":
            report = cmd_pages(doc, _parse_r(args.r))
        elif args.command == "singularity":
            report = cmd_singularity(doc)
        elif args.command == "weight":
            report = cmd_weight(doc)
        elif args.command == "verify":
            report = cmd_verify(doc, args.check, load(args.against) if args.against else None)
        else:
            report = cmd_report(doc)
    except OSError as e:
        return 2, "", f"error: cannot read {e.filename}: {e.strerror}\n"
    except (DocumentError, ComplexError, UsageError) as e:
        return 2, "", f"error: {e}\n"
    render = render_machine if args.format == "machine" else render_text
    return report["exit_code"], render(report), ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
