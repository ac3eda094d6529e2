"""Deterministic command-line surface.

One input file, explicit blocks, no environment configuration.  Exit
codes: 0 success, 1 validation failure, 2 parse error.  Machine mode
emits one "key = value" fact per line; human mode adds a title line.
"""

from __future__ import annotations

import argparse
import sys

from . import blocks as blk
from . import matrices as mx
from .display import display_lie, to_display, validate_display
from .isogeny import IsogenyError, make_module, order_string, validate_breuil_module
from .selftest import run_selftest
from .series import validate_frame
from .tframe import HypothesisError, nu, residual, solve_iso
from .window import DecompositionError, special_fiber


class JobSpec:
    """Parsed job: command, frame, windows, optional matrix, format flag."""

    def __init__(self, command, frame_block=None, windows=(), matrix=None, solve=None):
        self.command = command
        self.frame_block = frame_block
        self.windows = list(windows)
        self.matrix = matrix
        self.solve = solve


def _load(path, command):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    parsed = blk.parse_blocks(text)
    spec = JobSpec(command)
    for b in parsed:
        if b.name == "frame":
            if spec.frame_block is not None:
                raise blk.ParseError("duplicate [frame] block", b.line, 1)
            spec.frame_block = b
        elif b.name == "window":
            spec.windows.append(b)
        elif b.name == "matrix":
            if spec.matrix is not None:
                raise blk.ParseError("duplicate [matrix] block", b.line, 1)
            spec.matrix = b
        elif b.name == "solve":
            spec.solve = b
        else:
            raise blk.ParseError("unknown block [%s]" % b.name, b.line, 1)
    if spec.frame_block is None:
        raise blk.ParseError("missing [frame] block", 1, 1)
    return spec


def _require_windows(spec, count):
    if len(spec.windows) != count:
        raise blk.ParseError(
            "command %r needs exactly %d window block(s), found %d"
            % (spec.command, count, len(spec.windows)),
            1,
            1,
        )


class Emitter:
    def __init__(self, machine, command):
        self.lines = []
        if not machine:
            self.lines.append("windowalg %s" % command)

    def fact(self, key, value):
        self.lines.append("%s = %s" % (key, value))

    def matrix(self, name, M):
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                self.fact("%s[%d][%d]" % (name, i + 1, j + 1), x)

    def flush(self):
        sys.stdout.write("\n".join(self.lines) + "\n")


def cmd_validate(spec, out):
    errors = []
    frame = None
    frame_errors = []
    try:
        frame = blk.build_frame(spec.frame_block)
        frame_errors = validate_frame(frame)
    except blk.ParseError:
        raise
    for msg in frame_errors:
        out.fact("error", msg)
        errors.append(msg)
    out.fact("frame", "invalid" if frame_errors else "valid")
    if frame is not None and not frame_errors:
        for idx, wb in enumerate(spec.windows, start=1):
            try:
                blk.build_window(frame, wb)
                out.fact("window%d" % idx, "valid")
            except blk.ParseError:
                raise
            except (ValueError, DecompositionError) as err:
                out.fact("error", str(err))
                out.fact("window%d" % idx, "invalid")
                errors.append(str(err))
    return 1 if errors else 0


def cmd_special_fiber(spec, out):
    frame = blk.build_frame(spec.frame_block)
    _require_windows(spec, 1)
    w = blk.build_window(frame, spec.windows[0])
    fiber = special_fiber(w)
    out.fact("height", fiber.height)
    out.fact("dim", fiber.dim)
    out.fact("nilpotent", "true" if fiber.is_nilpotent else "false")
    for i, row in enumerate(fiber.A0):
        out.fact("A0.row%d" % (i + 1), ", ".join(str(x) for x in row))
    for i, row in enumerate(fiber.Phi0):
        out.fact("Phi0.row%d" % (i + 1), ", ".join(str(x) for x in row))
    return 0


def cmd_display(spec, out):
    frame = blk.build_frame(spec.frame_block)
    _require_windows(spec, 1)
    w = blk.build_window(frame, spec.windows[0])
    D = to_display(w)
    report = validate_display(D)
    out.fact("d", D.d)
    out.fact("c", D.c)
    out.fact("witt_length", D.witt_length)
    out.fact("lie_rank", display_lie(D))
    out.matrix("B", D.B)
    for msg in report:
        out.fact("error", msg)
    out.fact("display", "invalid" if report else "valid")
    return 1 if report else 0


def cmd_solve_iso(spec, out):
    frame = blk.build_frame(spec.frame_block)
    _require_windows(spec, 2)
    w1 = blk.build_window(frame, spec.windows[0])
    w2 = blk.build_window(frame, spec.windows[1])
    level = spec.solve.get_int("a", frame.a) if spec.solve else frame.a
    try:
        X = solve_iso(w1, w2, level)
    except HypothesisError as err:
        out.fact("error", str(err))
        return 1
    out.fact("level", level)
    out.matrix("X", X)
    res = residual(w1, w2, X, level)
    out.fact("residual", "0" if mx.is_zero(res) else "nonzero")
    return 0


def cmd_module(spec, out):
    frame = blk.build_frame(spec.frame_block)
    _require_windows(spec, 2)
    if spec.matrix is None:
        raise blk.ParseError("command 'module' needs a [matrix] block", 1, 1)
    source = blk.build_window(frame, spec.windows[0])
    target = blk.build_window(frame, spec.windows[1])
    U = blk.parse_matrix_rows(frame.at_level(target.level), spec.matrix)
    try:
        module = make_module(source, target, U)
    except IsogenyError as err:
        out.fact("error", str(err))
        return 1
    out.fact("m", module.m)
    out.fact("p_length", module.m)
    out.fact("order", order_string(module))
    report = validate_breuil_module(module)
    for msg in report:
        out.fact("error", msg)
    out.fact("module", "invalid" if report else "valid")
    return 1 if report else 0


def cmd_nu(spec, out):
    frame = blk.build_frame(spec.frame_block)
    out.fact("nu", nu(frame.a, frame.p))
    return 0


def cmd_selftest(out):
    ok = run_selftest(lambda name, good: out.fact(name.replace(" ", "_"), "ok" if good else "FAIL"))
    out.fact("selftest", "ok" if ok else "FAIL")
    return 0 if ok else 1


COMMANDS = {
    "validate": (cmd_validate, True),
    "special-fiber": (cmd_special_fiber, True),
    "display": (cmd_display, True),
    "solve-iso": (cmd_solve_iso, True),
    "module": (cmd_module, True),
    "nu": (cmd_nu, True),
    "selftest": (cmd_selftest, False),
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="windowalg",
        description="exact window algebra over truncated power-series frames",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", help="block-format input file")
    parser.add_argument(
        "--machine", action="store_true", help="key = value output only"
    )
    args = parser.parse_args(argv)
    handler, needs_input = COMMANDS[args.command]
    out = Emitter(args.machine, args.command)
    try:
        if needs_input:
            if args.input is None:
                parser.error("command %r needs an input file" % args.command)
            spec = _load(args.input, args.command)
            code = handler(spec, out)
        else:
            code = handler(out)
    except blk.ParseError as err:
        out.fact("parse_error", str(err))
        out.flush()
        return 2
    except (DecompositionError, IsogenyError, ValueError) as err:
        out.fact("error", str(err))
        out.flush()
        return 1
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
