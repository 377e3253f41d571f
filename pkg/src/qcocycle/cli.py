"""Batch driver: ``qcocycle {spectrum,gram,growth,scan,verify} [options]``.

Every output embeds the resolved configuration and the library version and
contains no timestamps, so identical invocations give identical files.
Numbers are written as decimal strings carrying ``--digits`` significant
digits.

Exit codes: 0 pass, 2 numeric tolerance failure, 3 precision exhausted,
64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import mpmath

from . import __version__, cocycle, ladder, uq_irreps, verify
from .errors import DomainError, NumericalFailure, PrecisionExhausted
from .scalars import DEFAULT_DIGITS, ParamContext

EXIT_OK = 0
EXIT_TOLERANCE = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64

COLUMNS = {
    "spectrum": ("s", "i", "eigenvalue", "expected", "abs_error"),
    "gram": ("n", "closed_form", "recursion", "rel_error"),
    "growth": ("n", "G_closed", "G_numeric", "gap", "dP1", "x_max", "bound"),
    "scan": ("n", "G_closed", "G_numeric", "gap", "dP1", "x_max", "bound"),
    "verify": ("name", "ok", "detail"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=0.5, help="deformation parameter, 0 < q < 1")
    common.add_argument("--a", type=float, default=1.3, help="real parameter a (t = q^a - q^-a)")
    common.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="A-eigenvalue for gram (default: the discrete point q + 1/q)")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits (>= 30)")
    common.add_argument("--nmax", type=int, default=40, help="largest degree for growth and scan (<= 200)")
    common.add_argument("--window", type=int, default=10, help="ladder window radius")
    common.add_argument("--smax", default="3", help="largest spin for spectrum (half-integer)")
    common.add_argument("--eps", default="1e-8", help="offset from q + 1/q in the numeric growth limit")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for growth and scan")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = _Parser(prog="qcocycle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="spectra of sqrt(-1) B_t in spins 0..smax")
    sub.add_parser("gram", parents=[common], help="invariant form: closed form vs recursion")
    sub.add_parser("growth", parents=[common], help="cocycle growth rows for n <= nmax")
    sub.add_parser("scan", parents=[common], help="growth rows plus properness flags")
    sub.add_parser("verify", parents=[common], help="run every invariant check")
    return parser


def resolve(args):
    """Validate arguments and build the context and echoed config."""
    if args.nmax < 0 or args.nmax > cocycle.SCAN_LIMIT:
        raise UsageError(f"--nmax must lie in [0, {cocycle.SCAN_LIMIT}]")
    if args.window < 1:
        raise UsageError("--window must be at least 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        ctx = ParamContext(args.q, args.a, args.digits)
        eps = ctx.mp.mpf(args.eps)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if not 0 < eps < ctx.brace1:
        raise UsageError("--eps must lie in (0, q + 1/q)")
    config = {"command": args.command, **ctx.config()}
    config["lambda"] = "" if args.lam is None else repr(args.lam)
    config.update(nmax=args.nmax, window=args.window, smax=args.smax, eps=args.eps, version=__version__)
    return ctx, config


def _s(x, digits):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return mpmath.nstr(x, digits)


def cmd_spectrum(ctx, args):
    try:
        smax = uq_irreps.as_spin(args.smax)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    rows, ok = [], True
    tol = ctx.tolerance(8)
    for k in range(int(2 * smax) + 1):
        s = uq_irreps.as_spin(f"{k}/2")
        got = uq_irreps.ibt_spectrum(ctx, s)
        want = uq_irreps.expected_spectrum(ctx, s)
        # [x] increases with x, so ascending order runs over i = -s..s
        for j, (x, y) in enumerate(zip(got, want)):
            err = abs(x - y)
            ok &= err <= tol * max(1, abs(y))
            rows.append({"s": str(s), "i": str(j - s), "eigenvalue": x, "expected": y, "abs_error": err})
    return rows, None, ok


def cmd_gram(ctx, args):
    try:
        m = ladder.make_module(ctx, args.lam, None, args.window)
        form = ladder.gram_lambda(m)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    rec = ladder.gram_recursion(m)
    rows, worst = [], ctx.mp.zero
    for n in m.indices():
        closed = form.g[n]
        if ctx.mp.isinf(closed):
            err = None
        else:
            err = abs(rec[n] / closed - 1)
            worst = max(worst, err)
        rows.append({"n": str(n), "closed_form": closed, "recursion": rec[n], "rel_error": err})
    summary = {"g1": _s(form.g[1], ctx.digits), "max_rel_error": _s(worst, ctx.digits)}
    return rows, summary, worst <= ctx.tolerance(8)


def _growth_rows(ctx, rows):
    return [{**r.to_dict(ctx.digits), "n": str(r.n)} for r in rows]


def cmd_growth(ctx, args):
    rows = cocycle.growth_rows(ctx, args.nmax, args.eps, args.jobs)
    return _growth_rows(ctx, rows), None, True


def cmd_scan(ctx, args):
    if args.nmax < 5:
        raise UsageError("scan needs --nmax >= 5")
    report = cocycle.properness_scan(ctx, args.nmax, args.eps, args.jobs)
    summary = {
        "n0": report.n0,
        "sample": list(report.sample),
        "flags": report.flags,
        "trend_monotone": report.trend_monotone,
        "proper": report.proper,
    }
    return _growth_rows(ctx, report.rows), summary, report.proper


def cmd_verify(ctx, args):
    results = verify.run_checks(ctx, args.window)
    rows = [{"name": r.name, "ok": str(r.ok).lower(), "detail": r.detail} for r in results]
    failed = [r.name for r in results if not r.ok]
    for r in results:
        if not r.ok:
            print(f"FAIL {r.name}: {r.detail}", file=sys.stderr)
    return rows, {"passed": len(results) - len(failed), "failed": failed}, not failed


COMMANDS = {
    "spectrum": cmd_spectrum,
    "gram": cmd_gram,
    "growth": cmd_growth,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def render(payload, fmt):
    """Serialize ``{config, rows[, summary]}`` as JSON or CSV text."""
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(payload["config"]) + "\n")
    if "summary" in payload:
        buf.write("# summary: " + json.dumps(payload["summary"]) + "\n")
    columns = COLUMNS[payload["config"]["command"]]
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(payload["rows"])
    return buf.getvalue()


def parse_output(text):
    """Inverse of :func:`render` for either format."""
    if text.lstrip().startswith("{"):
        return json.loads(text)
    payload, body = {}, []
    for line in text.splitlines():
        if line.startswith("# config: "):
            payload["config"] = json.loads(line[len("# config: "):])
        elif line.startswith("# summary: "):
            payload["summary"] = json.loads(line[len("# summary: "):])
        else:
            body.append(line)
    payload["rows"] = list(csv.DictReader(body))
    return payload


def execute(args):
    """Run a parsed command and return ``(exit_code, output_text)``."""
    try:
        ctx, config = resolve(args)
        rows, summary, ok = COMMANDS[args.command](ctx, args)
    except UsageError as exc:
        print(f"qcocycle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except PrecisionExhausted as exc:
        hint = f" (needs about {exc.recommended_digits} working digits)" if exc.recommended_digits else ""
        print(f"qcocycle: precision exhausted: {exc}{hint}", file=sys.stderr)
        return EXIT_PRECISION, None
    except NumericalFailure as exc:
        print(f"qcocycle: numerical failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE, None

    payload = {
        "config": config,
        "rows": [{k: _s(v, ctx.digits) for k, v in row.items()} for row in rows],
    }
    if summary is not None:
        payload["summary"] = summary
    return (EXIT_OK if ok else EXIT_TOLERANCE), render(payload, args.format)


def run(argv=None):
    return execute(build_parser().parse_args(argv))


def main(argv=None):
    args = build_parser().parse_args(argv)
    code, text = execute(args)
    if text is not None:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
