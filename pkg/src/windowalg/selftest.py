"""Desk-scale invariant battery behind the selftest CLI command."""

from __future__ import annotations

import random

from . import matrices as mx
from .display import display_lie, to_display, validate_display
from .isogeny import make_module, p_length
from .rand import random_frame, random_series, random_window
from .series import Frame
from .tframe import nu, solve_iso
from .window import lie, triple_of, window_of
from .witt import WittVec, delta, ghost, tau, wadd, wmul


def _ring_axioms(report, rng):
    frame = Frame.make(3, 1, 2, 2, 5, 4, 2, {(0, 2): 1, (0, 0): 3})
    ok = True
    for _ in range(20):
        x = random_series(rng, frame)
        y = random_series(rng, frame)
        z = random_series(rng, frame)
        ok = ok and (x + y) == (y + x)
        ok = ok and (x * y) == (y * x)
        ok = ok and ((x + y) + z) == (x + (y + z))
        ok = ok and ((x * y) * z) == (x * (y * z))
        ok = ok and (x * (y + z)) == (x * y + x * z)
    report("series ring axioms", ok)
    return ok


def _ghost_equivalence(report, rng):
    ok = True
    for p in (3, 5):
        for length in (2, 3):
            for _ in range(10):
                x = WittVec("Z", [rng.randint(-9, 9) for _ in range(length)], p=p)
                y = WittVec("Z", [rng.randint(-9, 9) for _ in range(length)], p=p)
                gs = [a + b for a, b in zip(ghost(x), ghost(y))]
                gp = [a * b for a, b in zip(ghost(x), ghost(y))]
                ok = ok and ghost(wadd(x, y)) == gs
                ok = ok and ghost(wmul(x, y)) == gp
    report("witt ghost equivalence", ok)
    return ok


def _delta_section(report, rng):
    frame = Frame.make(3, 0, 1, 3, 5, 3, 3, {(1,): 1, (0,): 3})
    ok = True
    for _ in range(10):
        x = random_series(rng, frame)
        dv = delta(x)
        ghosts = ghost(dv)
        expect = x
        for n in range(frame.L):
            ok = ok and ghosts[n] == expect
            expect = expect.frobenius()
    report("delta ghost section", ok)
    return ok


def _tau_unit(report, rng):
    ok = True
    for _ in range(5):
        frame = random_frame(rng, a=2)
        ok = ok and tau(frame).is_unit()
    report("tau is a unit", ok)
    return ok


def _roundtrip(report, rng):
    frame = Frame.make(3, 0, 1, 2, 5, 3, 2, {(1,): 1, (0,): 3})
    ok = True
    for _ in range(10):
        w = random_window(rng, frame)
        ok = ok and window_of(frame, triple_of(w)) == w
    report("triple/window roundtrip", ok)
    return ok


def _display_functor(report, rng):
    frame = Frame.make(3, 0, 1, 2, 4, 3, 2, {(1,): 1, (0,): 6})
    ok = True
    for _ in range(5):
        w = random_window(rng, frame)
        D = to_display(w)
        ok = ok and not validate_display(D)
        ok = ok and display_lie(D) == lie(w)[0]
    report("display functor validity", ok)
    return ok


def _solver(report, rng):
    frame = Frame.make(3, 0, 1, 2, 5, 3, 2, {(1,): 1, (0,): 3})
    w1 = random_window(rng, frame, d=1, c=0)
    u = frame.u()
    z = random_series(rng, frame, umax=1)
    A2 = ((w1.A[0][0] * (frame.one() + u * z)),)
    from .window import make_window

    w2 = make_window(frame, 1, 0, (A2,))
    X = solve_iso(w1, w2, 2)
    ok = X[0][0].coeffs[0] == {(0,): 1}
    report("solver fixed point", ok)
    return ok


def _nu_check(report, rng):
    ok = nu(1, 3) == 1
    for a in range(1, 20):
        for p in (3, 5, 7):
            ok = ok and nu(p * a, p) >= a + 1
    report("nu inequality", ok)
    return ok


def _isogeny(report, rng):
    frame = Frame.make(3, 0, 1, 2, 5, 3, 2, {(1,): 1, (0,): 3})
    ok = True
    for _ in range(5):
        w = random_window(rng, frame, d=1, c=1)
        scalar = mx.mscal(mx.identity(2, frame.one()), frame.const(frame.p))
        mod = make_module(w, w, scalar)
        ok = ok and p_length(mod) == 2
    report("scalar isogeny length", ok)
    return ok


def run_selftest(emit):
    """Run every check; emit('name', ok) per check; returns overall bool."""
    rng = random.Random(20260809)
    results = []

    def report(name, ok):
        results.append(ok)
        emit(name, ok)

    for check in (
        _ring_axioms,
        _ghost_equivalence,
        _delta_section,
        _tau_unit,
        _roundtrip,
        _display_functor,
        _solver,
        _nu_check,
        _isogeny,
    ):
        check(report, rng)
    return all(results)
