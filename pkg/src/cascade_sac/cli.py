"""Command-line entry point.

Exit codes: 0 success, 1 findings or validation failures, 2 usage, I/O or
input-format errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import casefile
from .cascade import validate_cascade
from .evidence import link_report, load_registry, staleness_report
from .findings import canonical, has_errors
from .graph import CaseBuildError, validate_structure
from .quality import coverage_report, load_standard_map, quality_summary
from .render import RenderOptions, to_dot

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad invocation, unreadable file or malformed input table."""


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise UsageError(f"{path}: not valid UTF-8") from None


def _load_case(path: str):
    """Parsed case, or None after printing parse/build errors to stderr."""
    text = _read_text(path)
    try:
        return casefile.parse(text)
    except casefile.CasefileError as exc:
        for err in exc.errors:
            print(f"{path}:{err}", file=sys.stderr)
    except CaseBuildError as exc:
        for f in exc.findings:
            print(f"{path}: {f}", file=sys.stderr)
    return None


def _load_table(loader, path: str):
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return loader(path)
    except (ValueError, KeyError, csv.Error) as exc:
        raise UsageError(str(exc)) from None


def _write_rows(rows, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


# ------------------------------------------------------------------ commands

def cmd_validate(args) -> int:
    case = _load_case(args.case)
    if case is None:
        return EXIT_FINDINGS
    findings = validate_structure(case)
    if not has_errors(findings):
        findings = canonical(findings + validate_cascade(case))
    for f in findings:
        print(f"{args.case}: {f}", file=sys.stderr)
    if has_errors(findings):
        return EXIT_FINDINGS
    print(f"{args.case}: ok ({len(case.nodes)} nodes, {len(case.edges)} edges)")
    return EXIT_OK


def cmd_quality(args) -> int:
    case = _load_case(args.case)
    if case is None:
        return EXIT_FINDINGS
    report = quality_summary(case)
    _write(_dump_json(report.to_dict()) if args.json else report.to_text(), args.output)
    return EXIT_OK if report.ok else EXIT_FINDINGS


def cmd_render(args) -> int:
    case = _load_case(args.case)
    if case is None:
        return EXIT_FINDINGS
    # drafts are drawable: structural problems are reported but do not block rendering
    for f in validate_structure(case):
        print(f"{args.case}: {f}", file=sys.stderr)
    dot = to_dot(case, RenderOptions(show_blocks=args.blocks, rankdir=args.rankdir))
    _write(dot, args.output)
    return EXIT_OK


def cmd_coverage(args) -> int:
    entries = _load_table(load_standard_map, args.map)
    case = _load_case(args.case)
    if case is None:
        return EXIT_FINDINGS
    try:
        report = coverage_report(case, entries)
    except ValueError as exc:
        raise UsageError(f"{args.map}: {exc}") from None
    _write(_dump_json(report.to_dict()) if args.json else report.to_text(), args.output)
    if args.csv:
        rows = [["clause_id", "expected", "status", "nodes"]]
        rows += [[c.clause_id, c.expected.value, c.status.value, ",".join(c.nodes)] for c in report.clauses]
        _write_rows(rows, args.csv)
    if args.figure:
        from .plotting import plot_coverage

        plot_coverage(report, args.figure)
    return EXIT_OK if not report.findings else EXIT_FINDINGS


def _parse_date(value: str) -> dt.date:
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {value!r}") from None


def cmd_evidence_report(args) -> int:
    registry = _load_table(load_registry, args.registry)
    case = _load_case(args.case)
    if case is None:
        return EXIT_FINDINGS
    as_of = args.as_of or dt.date.today()
    findings = canonical(link_report(case, registry) + staleness_report(registry, as_of))
    if args.json:
        payload = {"as_of": as_of.isoformat(), "items": len(registry), "findings": [f.to_dict() for f in findings]}
        sys.stdout.write(_dump_json(payload))
    else:
        for f in findings:
            print(str(f))
        print(f"{len(registry)} evidence item(s), {len(findings)} finding(s) as of {as_of.isoformat()}")
    return EXIT_FINDINGS if findings else EXIT_OK


def _pipeline_config(args):
    from .reqclassify import ForestParams, PipelineConfig

    try:
        params = ForestParams(n_trees=args.trees, seed=args.seed)
        return PipelineConfig(params=params, max_terms=args.max_terms, k=args.k, n_jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_classify_train(args) -> int:
    from .reqclassify import load_dataset, model_to_json, train_pipeline

    records = _load_table(load_dataset, args.data)
    try:
        model, fs = train_pipeline(records, _pipeline_config(args))
    except ValueError as exc:
        raise UsageError(f"{args.data}: {exc}") from None
    _write(model_to_json(model, fs), args.out)
    print(f"trained {model.params.n_trees} trees on {len(records)} requirements, {len(fs)} terms -> {args.out}",
          file=sys.stderr)
    return EXIT_OK


def cmd_classify_eval(args) -> int:
    from .reqclassify import load_dataset, lopo_eval

    if not args.lopo:
        raise UsageError("classify eval: only --lopo evaluation is supported")
    records = _load_table(load_dataset, args.data)
    try:
        report = lopo_eval(records, _pipeline_config(args), sections=args.sections)
    except ValueError as exc:
        raise UsageError(f"{args.data}: {exc}") from None
    _write(report.to_json() if args.json else report.to_text(), args.output)
    if args.csv:
        rows = report.rows("requirements")
        if args.sections:
            rows = [["level"] + rows[0]] + [["requirements"] + r for r in rows[1:]]
            rows += [["sections"] + r for r in report.rows("sections")[1:]]
        _write_rows(rows, args.csv)
    if args.figure:
        from .plotting import plot_lopo

        plot_lopo(report, args.figure)
    return EXIT_OK


def cmd_classify_predict(args) -> int:
    from .reqclassify import load_dataset, model_from_json
    from .reqclassify.evaluate import predict_records

    try:
        model, fs = model_from_json(_read_text(args.model))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.model}: {exc}") from None
    records = _load_table(load_dataset, args.data)
    scores, predicted = predict_records(model, fs, records, args.threshold)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["project", "section", "req_id", "label", "score"])
    for r, s, p in zip(records, scores, predicted):
        writer.writerow([r.project, r.section, r.req_id, "sec" if p else "nonsec", f"{s:.4f}"])
    return EXIT_OK


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sac", description="CASCADE security assurance case toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="structure and CASCADE level checks")
    v.add_argument("case")
    v.set_defaults(func=cmd_validate)

    q = sub.add_parser("quality", help="all checks plus completeness/confidence metrics")
    q.add_argument("case")
    q.add_argument("--json", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_quality)

    r = sub.add_parser("render", help="GSN diagram as DOT")
    r.add_argument("case")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--blocks", action="store_true", help="cluster nodes by CASCADE block")
    r.add_argument("--rankdir", choices=("TB", "LR"), default="TB")
    r.set_defaults(func=cmd_render)

    c = sub.add_parser("coverage", help="standard clause coverage")
    c.add_argument("case")
    c.add_argument("--map", required=True, help="CSV with clause_id,title,expected")
    c.add_argument("--json", action="store_true")
    c.add_argument("-o", "--output")
    c.add_argument("--csv", help="also write the per-clause table as CSV")
    c.add_argument("--figure", help="also write a coverage figure (PNG/SVG/PDF by suffix)")
    c.set_defaults(func=cmd_coverage)

    e = sub.add_parser("evidence", help="evidence registry reports")
    esub = e.add_subparsers(dest="evidence_command", required=True, parser_class=_Parser)
    er = esub.add_parser("report", help="link and staleness report")
    er.add_argument("--registry", required=True)
    er.add_argument("--case", required=True)
    er.add_argument("--as-of", type=_parse_date, help="YYYY-MM-DD (default: today)")
    er.add_argument("--json", action="store_true")
    er.set_defaults(func=cmd_evidence_report)

    k = sub.add_parser("classify", help="security requirement classifier")
    ksub = k.add_subparsers(dest="classify_command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--data", required=True)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--trees", type=int, default=100)
        sp.add_argument("--max-terms", type=int, default=2000)
        sp.add_argument("--k", type=int, default=5, help="SMOTE neighbours")
        sp.add_argument("--jobs", type=int, default=1, help="threads for tree training")

    kt = ksub.add_parser("train")
    common(kt)
    kt.add_argument("--out", required=True)
    kt.set_defaults(func=cmd_classify_train)

    ke = ksub.add_parser("eval")
    common(ke)
    ke.add_argument("--lopo", action="store_true", help="leave-one-project-out")
    ke.add_argument("--sections", action="store_true", help="also score section-level predictions")
    ke.add_argument("--json", action="store_true")
    ke.add_argument("-o", "--output")
    ke.add_argument("--csv", help="also write the metrics table as CSV")
    ke.add_argument("--figure", help="also write a per-project metrics figure")
    ke.set_defaults(func=cmd_classify_eval)

    kp = ksub.add_parser("predict")
    kp.add_argument("--model", required=True)
    kp.add_argument("--data", required=True)
    kp.add_argument("--threshold", type=float, default=0.5)
    kp.set_defaults(func=cmd_classify_predict)
    return p


def run(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
