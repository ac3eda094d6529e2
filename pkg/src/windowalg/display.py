"""The functor from windows to Dieudonne displays over R/p^aR.

A display is stored by its structural matrix B over the Witt vectors
of R/p^aR: B = kappa(A) with the c columns of the L-block multiplied
by the unit tau, so that the J-columns give F' and the L-columns give
F'_1 on the normal decomposition.
"""

from __future__ import annotations

from . import matrices as mx
from .witt import from_int, kappa, tau, wmul


class DDisplay:
    def __init__(self, frame, d, c, B, source=None):
        self.frame = frame
        self.d = d
        self.c = c
        self.B = mx.mat(B)
        self.source = source

    @property
    def level(self):
        return self.frame.a

    @property
    def witt_length(self):
        return self.frame.L

    def at_level(self, a):
        reduced = mx.mmap(
            self.B,
            lambda wv: type(wv)(
                "R", [comp.at_level(a) for comp in wv.comps], frame=self.frame.at_level(a)
            ),
        )
        src = self.source.at_level(a) if self.source is not None else None
        return DDisplay(self.frame.at_level(a), self.d, self.c, reduced, source=src)

    def __eq__(self, other):
        if not isinstance(other, DDisplay):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.d == other.d
            and self.c == other.c
            and mx.meq(self.B, other.B)
        )

    __hash__ = None

    def __repr__(self):
        return "DDisplay(level=%d, d=%d, c=%d, L=%d)" % (
            self.level,
            self.d,
            self.c,
            self.witt_length,
        )


def to_display(w):
    """B = kappa(A), with tau scaling the L-block columns (F'_1 = tau * F_1)."""
    frame = w.frame
    t = tau(frame)
    B = []
    for row in w.A:
        out = []
        for j, x in enumerate(row):
            kx = kappa(x)
            out.append(wmul(kx, t) if j >= w.d else kx)
        B.append(tuple(out))
    return DDisplay(frame, w.d, w.c, B, source=w)


def validate_display(D):
    """Report-style checks.

    Always: det(B) must be a unit (its zeroth ghost component a unit in
    R/p^aR).  When the display remembers its source window, the
    relation F' = p*F'_1 is verified on the L-block generators: p times
    the stored L-column must equal kappa of sigma(E) times the window
    column, and the J-columns must be plain kappa-images.
    """
    errors = []
    if not mx.det(D.B).is_unit():
        errors.append("det(B) is not a unit")
    w = D.source
    if w is None:
        return errors
    if w.frame != D.frame:
        errors.append("source window frame mismatch")
        return errors
    frame = D.frame
    sE = frame.E.frobenius()
    p_w = from_int(frame.p, frame.L, frame=frame, tag="R")
    for j in range(w.height):
        for i in range(w.height):
            if j < w.d:
                if D.B[i][j] != kappa(w.A[i][j]):
                    errors.append("J-column %d does not extend F" % (j + 1))
                    break
            else:
                lhs = wmul(p_w, D.B[i][j])
                rhs = kappa(sE * w.A[i][j])
                if lhs != rhs:
                    errors.append("L-column %d violates F' = p*F'_1" % (j + 1))
                    break
    return errors


def display_lie(D):
    """Lie rank of the display; matches the window-side cokernel rank."""
    return D.d
