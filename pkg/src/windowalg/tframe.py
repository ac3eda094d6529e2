"""Arithmetic in T_a = S[[v]]/(pv - u^e, v^a) and the unique-lifting solver.

Canonical form keeps the u-degree of every v-coefficient below e; any
u^e produced by multiplication is rewritten as p*v immediately.  In
this ring E = p(v + epsilon), so p and E differ by a unit, and sigma
acts on v by sigma(v) = p^(p-1) v^p.

The solver takes two window matrices that agree modulo u^e and returns
the unique X = I + vY over T_a with A2*C*X = sigma(X)*A1*C; Y is the
finite sum of iterates of the v-carrying operator Psi, so no
convergence detection is needed.
"""

from __future__ import annotations

from . import matrices as mx
from .series import FrameMismatchError, PrecisionError, SeriesElem, _Ring


class HypothesisError(ValueError):
    """The two windows do not agree modulo u^e."""


def _cring(frame, boost=0):
    key = ("T", boost)
    ring = frame._cache.get(key)
    if ring is None:
        ring = _Ring(frame.p, frame.r, frame.D, frame.e, frame.p ** (frame.N + boost))
        frame._cache[key] = ring
    return ring


def _absorb(ring, tbl, e, p):
    """Split a raw table into u^e-bands: band m carries a factor p^m."""
    out = {}
    for key, c in tbl.items():
        m, jr = divmod(key[-1], e)
        k2 = key[:-1] + (jr,)
        tgt = out.setdefault(m, {})
        tgt[k2] = tgt.get(k2, 0) + c * p**m
    return {m: ring.norm(t) for m, t in out.items()}


class TElem:
    """Element of T_a in canonical form: a v-coefficient vector."""

    __slots__ = ("frame", "level", "coeffs")

    def __init__(self, frame, level, coeffs):
        ring = _cring(frame)
        coeffs = list(coeffs) + [{}] * (level - len(coeffs))
        self.frame = frame
        self.level = level
        self.coeffs = tuple(ring.norm(t) for t in coeffs[:level])

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, frame, level, n):
        return cls(frame, level, [{(0,) * (frame.r + 1): n}])

    @classmethod
    def v(cls, frame, level, power=1):
        if power >= level:
            return cls(frame, level, [])
        coeffs = [{} for _ in range(power)] + [{(0,) * (frame.r + 1): 1}]
        return cls(frame, level, coeffs)

    @classmethod
    def embed(cls, x, level):
        """Canonical image of a series-ring element (u^e goes to p*v)."""
        if not isinstance(x, SeriesElem) or x.tag != "S":
            raise ValueError("embedding is defined on series-ring elements")
        frame = x.frame
        if frame.a < level:
            raise ValueError("series level too low for the requested v-level")
        ring = _cring(frame)
        out = [{} for _ in range(level)]
        for m, band in _absorb(ring, x.coeffs, frame.e, frame.p).items():
            if m < level:
                out[m] = band
        return cls(frame, level, out)

    def zero(self):
        return TElem(self.frame, self.level, [])

    def one(self):
        return TElem.const(self.frame, self.level, 1)

    # -- ring operations ----------------------------------------------------

    def _check(self, other):
        if self.frame != other.frame or self.level != other.level:
            raise FrameMismatchError("T-ring operands differ in frame or level")

    def __add__(self, other):
        if isinstance(other, int):
            other = TElem.const(self.frame, self.level, other)
        self._check(other)
        ring = _cring(self.frame)
        return TElem(
            self.frame,
            self.level,
            [ring.add(a, b) for a, b in zip(self.coeffs, other.coeffs)],
        )

    __radd__ = __add__

    def __neg__(self):
        ring = _cring(self.frame)
        return TElem(self.frame, self.level, [ring.neg(t) for t in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            ring = _cring(self.frame)
            return TElem(
                self.frame, self.level, [ring.scal(t, other) for t in self.coeffs]
            )
        self._check(other)
        frame = self.frame
        ring = _cring(frame)
        e, p, lvl = frame.e, frame.p, self.level
        acc = [{} for _ in range(lvl)]
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            for j, dj in enumerate(other.coeffs):
                if not dj or i + j >= lvl:
                    continue
                prod = ring.mul_raw(ci, dj)
                tgt = acc[i + j]
                for k, c in prod.items():
                    tgt[k] = tgt.get(k, 0) + c
        out = []
        carry = {}
        for k in range(lvl):
            cur = ring.add(acc[k], carry)
            lo = {key: c for key, c in cur.items() if key[-1] < e}
            hi = {key[:-1] + (key[-1] - e,): c for key, c in cur.items() if key[-1] >= e}
            out.append(lo)
            carry = ring.scal(hi, p)
        return TElem(frame, lvl, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TElem):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def is_zero(self):
        return all(not t for t in self.coeffs)

    def constant_term(self):
        if not self.coeffs:
            return 0
        return self.coeffs[0].get((0,) * (self.frame.r + 1), 0)

    def is_unit(self):
        return self.constant_term() % self.frame.p != 0

    def invert(self):
        c = self.constant_term()
        if c % self.frame.p == 0:
            raise ZeroDivisionError("not a unit in the T-ring")
        y = TElem.const(self.frame, self.level, pow(c, -1, self.frame.p**self.frame.N))
        one = self.one()
        for _ in range(64):
            err = one - self * y
            if err.is_zero():
                return y
            y = y + y * err
        raise PrecisionError("T-ring inversion did not terminate")

    def sigma(self):
        """sigma on coefficients plus v -> p^(p-1) v^p."""
        frame = self.frame
        ring = _cring(frame)
        p, e, lvl = frame.p, frame.e, self.level
        out = [{} for _ in range(lvl)]
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            mapped = {}
            for key, c in ci.items():
                k2 = tuple(a * p for a in key)
                if sum(k2[:-1]) > frame.D:
                    continue
                mapped[k2] = mapped.get(k2, 0) + c
            scale = p ** ((p - 1) * i)
            for m, band in _absorb(ring, ring.norm(mapped), e, p).items():
                vexp = p * i + m
                if vexp >= lvl:
                    continue
                tgt = out[vexp]
                for k, c in ring.scal(band, scale).items():
                    tgt[k] = tgt.get(k, 0) + c
        return TElem(frame, lvl, out)

    def series_preimage(self):
        """A series-ring preimage under the canonical embedding, or None.

        The v^i coefficient must be divisible by p^i; the preimage then
        replaces p^i v^i by u^(i*e).
        """
        frame = self.frame
        if frame.a < self.level:
            raise ValueError("series level too low to host a preimage")
        p = frame.p
        tbl = {}
        for i, ci in enumerate(self.coeffs):
            q = p**i
            for key, c in ci.items():
                if c % q:
                    return None
                tbl[key[:-1] + (key[-1] + i * frame.e,)] = c // q
        cand = frame.elem(tbl)
        if TElem.embed(cand, self.level) != self:
            return None
        return cand

    def __str__(self):
        from .blocks import render_table

        terms = []
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            body = render_table(ci, self.frame.r)
            if i == 0:
                terms.append(body)
            else:
                vpart = "v" if i == 1 else "v^%d" % i
                terms.append(vpart if body == "1" else "(%s)*%s" % (body, vpart))
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return "TElem(%s)" % self


def t_add(x, y):
    return x + y


def t_mul(x, y):
    return x * y


def t_sigma(x):
    return x.sigma()


def base_change_T(w, level=None):
    """Entry-wise canonical image of a window over T_level."""
    level = w.level if level is None else level
    A = mx.mmap(w.A, lambda x: TElem.embed(x, level))
    tw = TWindow(w.frame, level, w.d, w.c, A)
    if not mx.det(tw.A).is_unit():
        raise ValueError("base change lost invertibility; invalid window")
    return tw


class TWindow:
    def __init__(self, frame, level, d, c, A):
        self.frame = frame
        self.level = level
        self.d = d
        self.c = c
        self.A = mx.mat(A)

    @property
    def height(self):
        return self.d + self.c


def _c_matrix(frame, level, d, c):
    E = TElem.embed(frame.E, level)
    one = TElem.const(frame, level, 1)
    zero = TElem(frame, level, [])
    n = d + c
    return tuple(
        tuple((E if i < d else one) if i == j else zero for j in range(n))
        for i in range(n)
    )


def _pc_inverse(frame, level, d, c):
    """p*C^(-1) = blockdiag((v+eps)^(-1) I_d, p I_c); E = p(v+eps)."""
    veps = TElem.v(frame, level) + TElem.embed(frame.epsilon, level)
    vinv = veps.invert()
    pone = TElem.const(frame, level, frame.p)
    zero = TElem(frame, level, [])
    n = d + c
    return tuple(
        tuple((vinv if i < d else pone) if i == j else zero for j in range(n))
        for i in range(n)
    )


def solve_iso(w1, w2, level=None):
    """Unique X in GL(T_level) with A2*C*X = sigma(X)*A1*C and X = I mod v.

    Both windows must share the frame and shape, and their matrices
    must satisfy A2^(-1)*A1 = I + u^e*Z over the series ring.  The
    residual of the returned X is checked to vanish exactly.
    """
    if w1.frame != w2.frame:
        raise FrameMismatchError("windows over different frames")
    if (w1.d, w1.c) != (w2.d, w2.c):
        raise ValueError("windows of different shape")
    frame = w1.frame
    level = frame.a if level is None else level
    if level > frame.a:
        raise ValueError("v-level exceeds the frame truncation level")
    d, c = w1.d, w1.c
    n = d + c
    e = frame.e

    G = mx.mmul(mx.inv(w2.A), w1.A)
    ident_s = mx.identity(n, frame.one())
    Gm = mx.msub(G, ident_s)
    for row in Gm:
        for x in row:
            if any(k[-1] < e for k in x.coeffs):
                raise HypothesisError("A2^(-1)*A1 is not congruent to I modulo u^e")
    Z = mx.mmap(Gm, lambda x: frame.elem({k[:-1] + (k[-1] - e,): v for k, v in x.coeffs.items()}))

    emb = lambda M: mx.mmap(M, lambda x: TElem.embed(x, level))
    A1T, A2T, ZT = emb(w1.A), emb(w2.A), emb(Z)
    CT = _c_matrix(frame, level, d, c)
    pCinv = _pc_inverse(frame, level, d, c)
    A2T_inv = mx.inv(A2T)

    D = mx.mmul(pCinv, mx.mmul(ZT, CT))
    # v * u^(e(p-2)) = p^(p-2) * v^(p-1)
    s = TElem.v(frame, level, frame.p - 1) * (frame.p ** (frame.p - 2))

    def psi(Y):
        sig = mx.mmap(Y, lambda x: x.sigma())
        out = mx.mmul(pCinv, mx.mmul(A2T_inv, mx.mmul(sig, mx.mmul(A1T, CT))))
        return mx.mscal(out, s)

    zero_t = TElem(frame, level, [])
    Y = mx.zeros(n, n, zero_t)
    term = D
    for _ in range(level):
        Y = mx.madd(Y, term)
        term = psi(term)

    vx = TElem.v(frame, level)
    X = mx.madd(mx.identity(n, TElem.const(frame, level, 1)), mx.mscal(Y, vx))

    lhs = mx.mmul(A2T, mx.mmul(CT, X))
    rhs = mx.mmul(mx.mmap(X, lambda x: x.sigma()), mx.mmul(A1T, CT))
    if not mx.meq(lhs, rhs):
        raise PrecisionError("solver residual is nonzero")
    for i in range(n):
        for j in range(n):
            lead = X[i][j].coeffs[0]
            expect = {(0,) * (frame.r + 1): 1} if i == j else {}
            if lead != expect:
                raise PrecisionError("X is not congruent to I modulo v")
    return X


def residual(w1, w2, X, level):
    """A2*C*X - sigma(X)*A1*C over T_level (zero for solver output)."""
    frame = w1.frame
    emb = lambda M: mx.mmap(M, lambda x: TElem.embed(x, level))
    CT = _c_matrix(frame, level, w1.d, w1.c)
    lhs = mx.mmul(emb(w2.A), mx.mmul(CT, X))
    rhs = mx.mmul(mx.mmap(X, lambda x: x.sigma()), mx.mmul(emb(w1.A), CT))
    return mx.msub(lhs, rhs)


def _vp_factorial(n, p):
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def nu(a, p):
    """min over n >= a of ord_p(p^n / n!), scanned on a provably
    sufficient window (the summand grows at least linearly past it)."""
    if a < 1:
        raise ValueError("nu needs a >= 1")
    n_max = max(a, (p - 1) * (a + 2))
    return min(n - _vp_factorial(n, p) for n in range(a, n_max + 1))
