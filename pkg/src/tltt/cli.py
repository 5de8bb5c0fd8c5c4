"""Batch checker entry point: `tltt check [options] FILE...`.

Files are parsed and checked in order against one growing signature;
pragmas execute in place.  Exit codes: 0 everything checked and every
#fail failed as expected, 1 check errors, 2 usage or I/O trouble.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field as dc_field
from typing import Optional

from tltt import nbe
from tltt import syntax as S
from tltt import diagnostics as D
from tltt.diagnostics import CheckError, Diagnostic
from tltt.parser import parse_module
from tltt.printer import pretty_print
from tltt import typecheck as tc

EXPECTED_FAILURE = "ExpectedFailure"


@dataclass
class RunConfig:
    files: list[str]
    strong_mode: bool = False
    strict_proof_irrelevance: bool = False
    trace: bool = False
    output_format: str = "human"
    unfold_budget: Optional[int] = None


@dataclass(frozen=True)
class PragmaResult:
    path: str
    line: int
    col: int
    kind: str  # CHECK / INFER / NORMALIZE / CONV / FAIL
    text: str


@dataclass
class FileStatus:
    path: str
    decls: int = 0
    pragmas: int = 0
    errors: int = 0


@dataclass
class RunReport:
    files: list[FileStatus] = dc_field(default_factory=list)
    diagnostics: list[tuple[str, Diagnostic]] = dc_field(default_factory=list)
    pragma_results: list[PragmaResult] = dc_field(default_factory=list)
    checked: list[tc.CheckedDecl] = dc_field(default_factory=list)
    context: Optional[tc.Context] = None  # the final typing context, for tooling

    @property
    def error_count(self) -> int:
        return sum(1 for _, d in self.diagnostics if d.severity == "error")

    @property
    def ok(self) -> bool:
        return self.error_count == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


class _Runner:
    def __init__(self, config: RunConfig):
        self.config = config
        flags = tc.Flags(strong=config.strong_mode,
                         strict_pi=config.strict_proof_irrelevance,
                         trace=config.trace)
        self.ctx = tc.new_context(flags, budget=config.unfold_budget)
        self.report = RunReport(context=self.ctx)

    def trace(self, message: str) -> None:
        if self.config.trace:
            print(message, file=sys.stderr)

    def diag(self, path: str, d: Diagnostic) -> None:
        self.report.diagnostics.append((path, d))

    def reset_budget(self) -> None:
        if self.config.unfold_budget is not None:
            self.ctx.sig.budget[0] = self.config.unfold_budget

    def run_file(self, path: str, text: str) -> None:
        status = FileStatus(path)
        self.report.files.append(status)
        try:
            module = parse_module(text, path, known_names=self.ctx.sig.entries.keys())
        except CheckError as e:
            self.diag(path, e.diagnostic)
            status.errors += 1
            return
        for decl in module.decls:
            self.reset_budget()
            try:
                if isinstance(decl, S.Pragma):
                    status.pragmas += 1
                    self.run_pragma(path, decl)
                else:
                    self.trace(f"checking {decl.name}")
                    checked = tc.check_declaration(self.ctx, decl)
                    self.report.checked.append(checked)
                    status.decls += 1
            except CheckError as e:
                self.diag(path, e.diagnostic)
                status.errors += 1
            except nbe.EvalError as e:
                self.diag(path, Diagnostic(D.CONVERSION_FAILURE,
                                           f"evaluation failed: {e}", decl.span))
                status.errors += 1

    def _prepare(self, t: S.Term) -> S.Term:
        return tc.merge_strict_formers(t) if self.config.strong_mode else t

    def run_pragma(self, path: str, pragma: S.Pragma) -> None:
        ctx = self.ctx
        span = pragma.span
        line = span.line if span else 0
        col = span.col if span else 0

        def record(kind: str, text: str) -> None:
            self.report.pragma_results.append(
                PragmaResult(path, line, col, kind, text))

        if pragma.kind == S.CHECK:
            t, ty = (self._prepare(x) for x in pragma.payload)
            ty2, _ = tc.infer_universe(ctx, ty)
            tc.check(ctx, t, nbe.eval_in(ctx, ty2))
            record("CHECK", "ok")
        elif pragma.kind == S.INFER:
            t = self._prepare(pragma.payload[0])
            _, ty_v = tc.infer(ctx, t)
            record("INFER", pretty_print(nbe.quote(0, ty_v)))
        elif pragma.kind == S.NORMALIZE:
            t = self._prepare(pragma.payload[0])
            t2, _ = tc.infer(ctx, t)
            record("NORMALIZE", pretty_print(nbe.normalize(ctx, t2)))
        elif pragma.kind == S.CONV:
            a, b, ty = (self._prepare(x) for x in pragma.payload)
            ty2, _ = tc.infer_universe(ctx, ty)
            ty_v = nbe.eval_in(ctx, ty2)
            a2 = tc.check(ctx, a, ty_v)
            b2 = tc.check(ctx, b, ty_v)
            if not nbe.conv_in(ctx, nbe.eval_in(ctx, a2), nbe.eval_in(ctx, b2), ty_v):
                raise D.fail(D.CONVERSION_FAILURE,
                             "terms are not definitionally equal", span,
                             expected=ctx.show_term(a2), actual=ctx.show_term(b2))
            record("CONV", "ok")
        elif pragma.kind == S.FAIL:
            self.run_fail(path, pragma, record)
        else:
            raise D.fail(D.SYNTAX_ERROR, f"unknown pragma {pragma.kind}", span)

    def run_fail(self, path: str, pragma: S.Pragma, record) -> None:
        item = pragma.payload[0]
        expect = pragma.expect_code
        if isinstance(item, Diagnostic):
            observed: Optional[Diagnostic] = item
        else:
            observed = None
            try:
                if isinstance(item, S.Pragma):
                    self.run_pragma(path, item)
                    # drop the inner pragma's own result record
                    self.report.pragma_results.pop()
                else:
                    tc.check_declaration(self.ctx, item)
                    self.ctx.sig.entries.pop(item.name, None)
            except CheckError as e:
                observed = e.diagnostic
            except nbe.EvalError as e:
                observed = Diagnostic(D.CONVERSION_FAILURE,
                                      f"evaluation failed: {e}", pragma.span)
        if observed is None:
            raise D.fail(EXPECTED_FAILURE,
                         "item was expected to fail but succeeded", pragma.span)
        if expect is not None and observed.code != expect:
            raise D.fail(EXPECTED_FAILURE,
                         f"expected failure code {expect}, got {observed.code}: "
                         f"{observed.message}", pragma.span)
        record("FAIL", f"ok [{observed.code}]")


def run(config: RunConfig) -> RunReport:
    """Parse and check every file in order, sharing one growing signature."""
    runner = _Runner(config)
    for path in config.files:
        runner.trace(f"-- {path}")
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        runner.run_file(path, text)
    return runner.report


def emit_report(report: RunReport, output_format: str = "human") -> tuple[str, int]:
    """Render a report; returns the text and the process exit code."""
    lines: list[str] = []
    if output_format == "lines":
        for res in report.pragma_results:
            lines.append("\t".join((res.path, str(res.line), str(res.col),
                                    res.kind, _flat(res.text))))
        for path, d in report.diagnostics:
            span = d.span
            lines.append("\t".join((
                span.path if span else path,
                str(span.line if span else 0), str(span.col if span else 0),
                d.code, _flat(d.message))))
        return "\n".join(lines) + ("\n" if lines else ""), report.exit_code
    for res in report.pragma_results:
        lines.append(f"{res.path}:{res.line}:{res.col}: #{res.kind.lower()}: {res.text}")
    for path, d in report.diagnostics:
        lines.append(str(d) if d.span else f"{path}: error[{d.code}]: {d.message}")
    decls = sum(f.decls for f in report.files)
    pragmas = sum(f.pragmas for f in report.files)
    if report.ok:
        lines.append(f"OK: {decls} declarations, {pragmas} pragmas")
    else:
        lines.append(f"FAILED: {report.error_count} errors "
                     f"({decls} declarations, {pragmas} pragmas)")
    return "\n".join(lines) + "\n", report.exit_code


def _flat(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " | ")


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="tltt",
                                     description="two-level type theory checker")
    sub = parser.add_subparsers(dest="command", required=True)
    checker = sub.add_parser("check", help="type check files in order")
    checker.add_argument("files", nargs="+", metavar="FILE")
    checker.add_argument("--strong", action="store_true",
                         help="identify the strict naturals/sums/empty with the fibrant ones")
    checker.add_argument("--strict-proof-irrelevance", action="store_true",
                         help="make all strict equality proofs definitionally equal")
    checker.add_argument("--trace", action="store_true")
    checker.add_argument("--format", choices=("human", "lines"), default="human")
    checker.add_argument("--unfold-budget", type=int, default=None, metavar="N")
    args = parser.parse_args(argv)

    config = RunConfig(files=args.files, strong_mode=args.strong,
                       strict_proof_irrelevance=args.strict_proof_irrelevance,
                       trace=args.trace, output_format=args.format,
                       unfold_budget=args.unfold_budget)
    started = time.perf_counter()
    try:
        report = run(config)
    except OSError as e:
        print(f"tltt: {e}", file=sys.stderr)
        return 2
    text, code = emit_report(report, config.output_format)
    sys.stdout.write(text)
    if config.trace:
        print(f"-- finished in {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
