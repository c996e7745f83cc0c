"""
Command-line front end.
src/sturmkit/cli.py

    sturmkit cf expand "(1+sqrt(5))/4" --periodic
    sturmkit decide flow "sqrt(2)" "3-sqrt(2)" --json
    sturmkit iet saf --perm 2,1 --lengths "sqrt(2)-1","2-sqrt(2)"
    sturmkit batch runs.ndjson

Exit codes: 0 YES (or plain success), 1 NO, 2 UNKNOWN, 3 library error,
64 usage error. run() only renders; it never writes files or prints.
"""

import argparse
import contextlib
import io
import json
import logging
import sys
import time

from lib.config_loader import get_setting

from . import cfrac, decide, denjoy, iet, moebius, sturmian
from .decision import Decision
from .errors import SturmkitError
from .realnum import RealValue
from .serialize import SCHEMA, dumps, envelope, error_envelope, to_json, value_from_json
from .sturmian import word_from_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _ParserExit(Exception):
    def __init__(self, status, message=""):
        super().__init__(message)
        self.status = status
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors never collide with UNKNOWN (2)."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        raise _ParserExit(status, message or "")


# ─────────────────────────────────────────────────────────────────────────────
# Argument helpers
# ─────────────────────────────────────────────────────────────────────────────

def _split_list(text):
    """Split a comma list at depth 0, so JSON numbers keep their commas."""
    items, depth, current = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    items.append("".join(current).strip())
    return [item for item in items if item]


def _value(args, text):
    return value_from_json(text, args.precision)


def _values(args, texts):
    return [_value(args, t) for t in texts]


def _ints(text):
    try:
        return [int(p) for p in _split_list(text)]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def _matrix(text):
    entries = _split_list(text)
    if len(entries) != 4:
        raise UsageError(f"a matrix needs 4 entries m11,m12,m21,m22, got {text!r}")
    try:
        return moebius.mat_from_rows([[entries[0], entries[1]], [entries[2], entries[3]]])
    except (ValueError, ZeroDivisionError) as e:
        if isinstance(e, SturmkitError):
            raise
        raise UsageError(f"matrix entries must be rationals, got {text!r}") from None


def _iet(args, perm, lengths):
    if perm is None or lengths is None:
        raise UsageError("an IET needs --perm and --lengths")
    return iet.new_iet(_ints(perm), _values(args, _split_list(lengths)))


def _denjoy(args, rho, reps):
    return denjoy.normalize(_value(args, rho), _values(args, reps or []))


# ─────────────────────────────────────────────────────────────────────────────
# Handlers: each returns the library result
# ─────────────────────────────────────────────────────────────────────────────

def _cf_expand(args):
    x = _value(args, args.x)
    if args.periodic:
        return cfrac.expand_periodic(x)
    return cfrac.expand_prefix(x, args.n)


def _cf_from(args):
    return cfrac.from_cf(cfrac.parse_cf_text(args.cf))


def _mat_apply(args):
    return moebius.apply(_matrix(args.matrix), _value(args, args.x))


def _mat_smith(args):
    U, m, V = moebius.smith_factor(_matrix(args.matrix))
    return {"U": U, "m": m, "V": V}


def _mat_stabilizer(args):
    return moebius.stabilizer_matrix(_value(args, args.x))


def _mat_pell(args):
    return moebius.pell_fundamental(args.delta, args.m)


def _sturmian_window(args):
    return sturmian.sturmian_window(sturmian.sturmian_params(_value(args, args.alpha)), args.i, args.j)


def _sturmian_factors(args):
    words = sturmian.factors(sturmian.sturmian_params(_value(args, args.alpha)), args.n)
    return sorted(words, key=lambda w: w.symbols)


def _sturmian_state(args):
    return sturmian.state_image(sturmian.sturmian_params(_value(args, args.alpha)))


def _denjoy_normalize(args):
    return _denjoy(args, args.rho, args.reps)


def _denjoy_power(args):
    return denjoy.power_params(_denjoy(args, args.rho, args.reps), args.m)


def _denjoy_2ai(args):
    return denjoy.two_ai_equivalent(_denjoy(args, args.rho1, args.reps1), _denjoy(args, args.rho2, args.reps2))


def _denjoy_flow(args):
    bound = args.bound or int(get_setting("search.denjoy_k_bound", 6))
    p0, p1 = _denjoy(args, args.rho1, args.reps1), _denjoy(args, args.rho2, args.reps2)
    return denjoy.flow_equivalent(p0, p1, bound)


def _denjoy_verify(args):
    M = _matrix(args.matrix)
    p0, p1 = _denjoy(args, args.rho1, args.reps1), _denjoy(args, args.rho2, args.reps2)
    if denjoy.verify_isogeny_certificate(p0, p1, M):
        return Decision.yes({"matrix": M})
    return Decision.no("certificate-rejected")


def _iet_eval(args):
    return iet.evaluate(_iet(args, args.perm, args.lengths), _value(args, args.x))


def _iet_orbit(args):
    return iet.orbit_word(_iet(args, args.perm, args.lengths), _value(args, args.x), args.n)


def _iet_keane(args):
    return iet.keane_check(_iet(args, args.perm, args.lengths), args.depth)


def _iet_rauzy(args):
    depth = args.depth or int(get_setting("search.rauzy_depth", 200))
    return iet.rauzy_path(_iet(args, args.perm, args.lengths), depth)


def _iet_induce(args):
    T = _iet(args, args.perm, args.lengths)
    return iet.induced_on_cylinder(T, word_from_text(args.word, T.d))


def _iet_minmodel(args):
    return iet.minimal_model(_iet(args, args.perm, args.lengths))


def _iet_saf(args):
    return iet.saf(_iet(args, args.perm, args.lengths))


def _iet_invariants(args):
    return iet.rational_invariants(_iet(args, args.perm, args.lengths), args.depth)


def _iet_conjugate(args):
    depth = args.depth or int(get_setting("search.rauzy_depth", 200))
    T1, T2 = _iet(args, args.perm, args.lengths), _iet(args, args.perm2, args.lengths2)
    return iet.ies_conjugate(T1, T2, depth)


def _iet_flow(args):
    depth = args.depth or int(get_setting("search.ies_word_depth", 3))
    T1, T2 = _iet(args, args.perm, args.lengths), _iet(args, args.perm2, args.lengths2)
    return iet.ies_flow_equivalent(T1, T2, depth)


def _decide_conjugate(args):
    return decide.sturmian_conjugate(*_values(args, [args.alpha, args.beta]))


def _decide_flow(args):
    return decide.sturmian_flow_equivalent(*_values(args, [args.alpha, args.beta]))


def _decide_eventual(args):
    return decide.sturmian_eventually_flow_equivalent(*_values(args, [args.alpha, args.beta]), args.n_max)


def _decide_isogeny(args):
    return decide.sturmian_isogenous(*_values(args, [args.alpha, args.beta]))


def _decide_selfmult(args):
    return decide.self_mult_equivalent(_value(args, args.alpha), args.m)


# ─────────────────────────────────────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────────────────────────────────────

def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser():
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the sturmkit/1 JSON envelope")
    common.add_argument("--precision", type=_positive, default=None,
                        help="starting digits for formal-basis enclosures")

    parser = _ArgumentParser(prog="sturmkit", description="Exact continued fractions and symbolic dynamics")
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=_ArgumentParser)
    groups.required = True

    def group(name, help_text):
        sub = groups.add_parser(name, help=help_text).add_subparsers(
            dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
        sub.required = True
        return sub

    def command(sub, name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    def iet_args(p, second=False):
        p.add_argument("--perm", required=True, help="1-based image positions, e.g. 2,1")
        p.add_argument("--lengths", required=True, help="comma-separated lengths")
        if second:
            p.add_argument("--perm2", required=True)
            p.add_argument("--lengths2", required=True)

    def denjoy_pair(p):
        p.add_argument("rho1")
        p.add_argument("rho2")
        p.add_argument("--reps1", nargs="*", default=[])
        p.add_argument("--reps2", nargs="*", default=[])

    # ── cf ──
    cf = group("cf", "continued fractions")
    p = command(cf, "expand", _cf_expand, "partial quotients of a number")
    p.add_argument("x")
    p.add_argument("--periodic", action="store_true", help="exact eventually periodic form")
    p.add_argument("-n", type=_positive, default=20, help="prefix length")
    p = command(cf, "from", _cf_from, "number from [c0; c1, (p1, ...)]")
    p.add_argument("cf")

    # ── mat ──
    mat = group("mat", "Möbius actions and Pell classes")
    p = command(mat, "apply", _mat_apply, "apply m11,m12,m21,m22 to x")
    p.add_argument("matrix")
    p.add_argument("x")
    p = command(mat, "smith", _mat_smith, "U·diag(m,1)·V factorization")
    p.add_argument("matrix")
    p = command(mat, "stabilizer", _mat_stabilizer, "primitive hyperbolic stabilizer")
    p.add_argument("x")
    p = command(mat, "pell", _mat_pell, "solution classes of x² − s²Δ = ±4m")
    p.add_argument("delta", type=int)
    p.add_argument("m", type=_positive, nargs="?", default=1)

    # ── sturmian ──
    st = group("sturmian", "Sturmian words")
    p = command(st, "window", _sturmian_window, "symbols x_n for i ≤ n < j")
    p.add_argument("alpha")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p = command(st, "factors", _sturmian_factors, "all factors of length n")
    p.add_argument("alpha")
    p.add_argument("n", type=_positive)
    p = command(st, "state", _sturmian_state, "state image ℤ + αℤ")
    p.add_argument("alpha")

    # ── denjoy ──
    dj = group("denjoy", "Denjoy systems")
    p = command(dj, "normalize", _denjoy_normalize, "canonical orbit representatives")
    p.add_argument("rho")
    p.add_argument("reps", nargs="*")
    p = command(dj, "power", _denjoy_power, "parameters of the m-th power")
    p.add_argument("rho")
    p.add_argument("m", type=int)
    p.add_argument("--reps", nargs="*", default=[])
    p = command(dj, "2ai", _denjoy_2ai, "2-AI equivalence")
    denjoy_pair(p)
    p = command(dj, "flow", _denjoy_flow, "bounded flow-equivalence search")
    denjoy_pair(p)
    p.add_argument("--bound", type=_positive, default=None)
    p = command(dj, "verify", _denjoy_verify, "check an isogeny certificate")
    denjoy_pair(p)
    p.add_argument("--matrix", required=True)

    # ── iet ──
    it = group("iet", "interval exchanges")
    p = command(it, "eval", _iet_eval, "T(x)")
    iet_args(p)
    p.add_argument("x")
    p = command(it, "orbit", _iet_orbit, "orbit word of length n")
    iet_args(p)
    p.add_argument("x")
    p.add_argument("n", type=_positive)
    p = command(it, "keane", _iet_keane, "Keane's condition")
    iet_args(p)
    p.add_argument("--depth", type=_positive, default=None)
    p = command(it, "rauzy", _iet_rauzy, "Rauzy–Veech path")
    iet_args(p)
    p.add_argument("--depth", type=_positive, default=None)
    p = command(it, "induce", _iet_induce, "first return to a cylinder")
    iet_args(p)
    p.add_argument("word")
    p = command(it, "minmodel", _iet_minmodel, "merge removable discontinuities")
    iet_args(p)
    p = command(it, "saf", _iet_saf, "SAF invariant")
    iet_args(p)
    p = command(it, "invariants", _iet_invariants, "projective ℚ-span and SAF")
    iet_args(p)
    p.add_argument("--depth", type=_positive, default=None)
    p = command(it, "conjugate", _iet_conjugate, "conjugacy of encodings")
    iet_args(p, second=True)
    p.add_argument("--depth", type=_positive, default=None)
    p = command(it, "flow", _iet_flow, "flow equivalence via cylinders")
    iet_args(p, second=True)
    p.add_argument("--depth", type=_positive, default=None)

    # ── decide ──
    dc = group("decide", "Sturmian decision suite")
    for name, handler, help_text in (
        ("conjugate", _decide_conjugate, "α = ±β mod ℤ"),
        ("flow", _decide_flow, "PGL₂(ℤ)-equivalence"),
        ("isogeny", _decide_isogeny, "PGL₂(ℚ)-equivalence"),
    ):
        p = command(dc, name, handler, help_text)
        p.add_argument("alpha")
        p.add_argument("beta")
    p = command(dc, "eventual-flow", _decide_eventual, "flow equivalence of all multiples")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--n-max", type=_positive, default=None)
    p = command(dc, "selfmult", _decide_selfmult, "α versus mα")
    p.add_argument("alpha")
    p.add_argument("m", type=_positive)

    # ── batch ──
    p = groups.add_parser("batch", parents=[common], help="NDJSON invocations, one result per line")
    p.add_argument("file", help="path or - for stdin")
    p.set_defaults(handler=None)
    return parser


# ─────────────────────────────────────────────────────────────────────────────
# Rendering
# ─────────────────────────────────────────────────────────────────────────────

def _render_text(result):
    if isinstance(result, Decision):
        lines = [result.verdict]
        if result.certificate:
            lines.append(f"certificate: {dumps(to_json(result.certificate))}")
        if result.obstruction:
            lines.append(f"obstruction: {result.obstruction}")
        if result.bound is not None:
            lines.append(f"bound: {result.bound}")
        if result.note:
            lines.append(f"note: {result.note}")
        return "\n".join(lines)
    if isinstance(result, list):
        if all(isinstance(r, int) for r in result):
            return " ".join(str(r) for r in result)
        return "\n".join(_render_text(r) for r in result)
    if isinstance(result, dict):
        return "\n".join(f"{key}: {_render_text(value)}" for key, value in result.items())
    if isinstance(result, (cfrac.ContinuedFraction, moebius.Mat2, sturmian.Word, RealValue)):
        return str(result)
    if isinstance(result, int):
        return str(result)
    return dumps(to_json(result))


def _command_name(args):
    return args.group if args.group == "batch" else f"{args.group} {args.command}"


def _exit_code(result):
    return result.exit_code if isinstance(result, Decision) else EXIT_OK


def _parse(argv):
    parser = build_parser()
    out = io.StringIO()
    try:
        with contextlib.redirect_stdout(out):
            return parser.parse_args(argv), None
    except _ParserExit as e:
        return None, (e.status, out.getvalue() + e.message)


def execute(argv):
    """Parse argv and run one library operation: (command, result, args)."""
    args, early = _parse(argv)
    if early is not None:
        raise _ParserExit(*early)
    if args.handler is None:
        raise UsageError("batch cannot be nested")
    return _command_name(args), args.handler(args), args


def run(argv, audit=None, stdin=None):
    """Run one invocation; returns (exit_code, rendered_output)."""
    started = time.monotonic()
    code, output = _run(list(argv), stdin, audit)
    if audit is not None:
        audit(argv, code, (time.monotonic() - started) * 1000)
    return code, output


def _run(argv, stdin, audit):
    json_mode = "--json" in argv
    try:
        args, early = _parse(argv)
    except UsageError as e:
        return EXIT_USAGE, str(e)
    if early is not None:
        return early[0], early[1].rstrip("\n")
    try:
        if args.handler is None:
            return _run_batch(args.file, stdin, audit)
        result = args.handler(args)
    except UsageError as e:
        return EXIT_USAGE, str(e)
    except SturmkitError as e:
        logger.info(f"[CLI] {_command_name(args)} failed: {e.code}: {e}")
        if json_mode:
            return EXIT_ERROR, dumps(error_envelope(e))
        return EXIT_ERROR, f"error: {e.code}: {e}"
    if json_mode:
        return _exit_code(result), dumps(envelope(_command_name(args), result))
    return _exit_code(result), _render_text(result)


def _run_line(index, line):
    record = {"schema": SCHEMA, "line": index}
    try:
        request = json.loads(line)
        argv = request["argv"] if isinstance(request, dict) else None
        if not isinstance(argv, list):
            raise UsageError("each line must be an object with an argv list")
        command, result, _ = execute([str(a) for a in argv])
        record.update(exit=_exit_code(result), command=command, result=to_json(result))
    except (UsageError, json.JSONDecodeError) as e:
        record.update(exit=EXIT_USAGE, error={"code": "usage", "message": str(e)})
    except _ParserExit as e:
        record.update(exit=EXIT_USAGE, error={"code": "usage", "message": e.message.strip()})
    except SturmkitError as e:
        record.update(exit=EXIT_ERROR, error=e.to_dict())
    return record


def _run_batch(path, stdin, audit):
    if path == "-":
        lines = (stdin or sys.stdin).read().splitlines()
    else:
        try:
            with open(path, "r", encoding="utf-8") as f:
                lines = f.read().splitlines()
        except OSError as e:
            return EXIT_USAGE, f"sturmkit batch: cannot read {path}: {e}"
    out = []
    for index, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        started = time.monotonic()
        record = _run_line(index, line)
        if audit is not None:
            audit(["batch", f"line={index}"], record["exit"], (time.monotonic() - started) * 1000)
        logger.debug(f"[Batch] line {index} exit={record['exit']}")
        out.append(dumps(record))
    logger.info(f"[Batch] {len(out)} invocations processed")
    return EXIT_OK, "\n".join(out)


def main(argv=None, audit=None):
    """Console entry point: print the rendered output and return the exit code."""
    argv = sys.argv[1:] if argv is None else argv
    code, output = run(argv, audit=audit)
    if output:
        stream = sys.stderr if code in (EXIT_ERROR, EXIT_USAGE) and not output.startswith("{") else sys.stdout
        print(output, file=stream)
    return code
