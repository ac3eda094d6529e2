"""Truncated p-typical Witt vectors over the series-frame rings.

Components live in the series ring "S", its E-quotient "R", or plain
integers "Z".  Sums and products are the values of the universal Witt
polynomials; they are computed by the exact ghost recursion on
canonical lifts at a boosted coefficient modulus (one extra p-digit per
Witt coordinate), which yields exactly the same values as substituting
into the cached symbolic polynomials while staying cheap for large
(p, L).  The symbolic table itself is available via witt_polys for
inspection and cross-checks.

delta is the ring section with ghost components sigma^n(x); kappa is
its composite with reduction mod E; tau is the unit with p*tau =
kappa(sigma(E)), realized exactly as the Verschiebung shift of
kappa(E) (component 0 of kappa(E) vanishes, and F(V(y)) = p*y).

The tau and polynomial-table caches are write-once: entries are
computed on first request and only read afterwards; call tau/witt_polys
once up front if several threads will share a frame.
"""

from __future__ import annotations

from .series import Frame, FrameMismatchError, PrecisionError, SeriesElem, _Ring


def _solve_ghost(ring, ghosts, p):
    """Components z with w_n(z) = ghosts[n]; divisions are exact."""
    comps = []
    pw = []
    for n, g in enumerate(ghosts):
        acc = dict(g)
        for i in range(n):
            pw[i] = ring.pow(pw[i], p)
            acc = ring.sub(acc, ring.scal(pw[i], p**i))
        comps.append(ring.div_exact_ppow(acc, n))
        pw.append(dict(comps[-1]))
    return comps


def _ghosts_of(ring, comps, length, p):
    """w_0 .. w_{length-1} of the component tables."""
    out = []
    pw = []
    for n in range(length):
        for i in range(n):
            pw[i] = ring.pow(pw[i], p)
        if n < len(comps):
            pw.append(dict(comps[n]))
        acc = ring.zero()
        for i in range(min(n + 1, len(pw))):
            acc = ring.add(acc, ring.scal(pw[i], p**i))
        out.append(acc)
    return out


class WittVec:
    """Length-L Witt vector; tag is "S", "R" or "Z"."""

    __slots__ = ("tag", "comps", "frame", "p", "pexp")

    def __init__(self, tag, comps, frame=None, p=None, pexp=None):
        self.tag = tag
        self.comps = tuple(comps)
        if tag in ("S", "R"):
            if frame is None:
                frame = self.comps[0].frame
            self.frame = frame
            self.p = frame.p
            self.pexp = None
        elif tag == "Z":
            if p is None:
                raise ValueError("Z-tagged Witt vectors need an explicit prime")
            self.frame = None
            self.p = p
            self.pexp = pexp
        else:
            raise ValueError("unknown Witt base tag %r" % tag)

    # -- plumbing -----------------------------------------------------------

    def __len__(self):
        return len(self.comps)

    def _compat(self, other):
        if (
            self.tag != other.tag
            or self.frame != other.frame
            or self.p != other.p
            or self.pexp != other.pexp
        ):
            raise FrameMismatchError("Witt operands over different base rings")
        if len(self.comps) != len(other.comps):
            raise FrameMismatchError("Witt operands of different lengths")

    def _nominal_exp(self):
        if self.tag == "S":
            return self.frame.N
        if self.tag == "R":
            return self.frame.rmod_exp()
        return self.pexp

    def _ring(self, boost=0):
        if self.tag in ("S", "R"):
            return self.frame.ring(self.tag, boost)
        exp = self.pexp
        pmod = None if exp is None else self.p ** (exp + boost)
        return _Ring(self.p, 0, 0, 1, pmod)

    def _tables(self):
        if self.tag == "Z":
            return [{(0,): c} if c else {} for c in self.comps]
        return [dict(c.coeffs) for c in self.comps]

    def _rewrap(self, tables, length=None):
        ring = self._ring()
        tables = [ring.norm(t) for t in tables]
        if self.tag == "Z":
            comps = [t.get((0,), 0) for t in tables]
            return WittVec("Z", comps, p=self.p, pexp=self.pexp)
        comps = [SeriesElem(self.frame, self.tag, t) for t in tables]
        return WittVec(self.tag, comps, frame=self.frame)

    def __eq__(self, other):
        if not isinstance(other, WittVec):
            return NotImplemented
        return (
            self.tag == other.tag
            and self.frame == other.frame
            and self.p == other.p
            and self.pexp == other.pexp
            and self.comps == other.comps
        )

    __hash__ = None

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.comps) + ")"

    def __repr__(self):
        return "WittVec%s" % self

    # -- ring interface (for the matrix helpers) ----------------------------

    def zero(self):
        return from_int(0, len(self.comps), like=self)

    def one(self):
        return from_int(1, len(self.comps), like=self)

    def __add__(self, other):
        return wadd(self, other)

    def __mul__(self, other):
        if isinstance(other, int):
            return wmul(self, from_int(other, len(self.comps), like=self))
        return wmul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        length = len(self.comps)
        boost = length - 1
        ring = self._ring(boost)
        ghosts = [ring.neg(g) for g in _ghosts_of(ring, self._tables(), length, self.p)]
        return self._rewrap(_solve_ghost(ring, ghosts, self.p))

    def __sub__(self, other):
        return wadd(self, -other)

    def is_zero(self):
        return all(not t for t in self._tables())

    def is_unit(self):
        """Units are detected on the zeroth ghost coordinate."""
        if self.tag == "Z":
            return self.comps[0] % self.p != 0
        return self.comps[0].is_unit()


def _binary(x, y, combine):
    x._compat(y)
    length = len(x.comps)
    boost = length - 1
    ring = x._ring(boost)
    gx = _ghosts_of(ring, x._tables(), length, x.p)
    gy = _ghosts_of(ring, y._tables(), length, x.p)
    ghosts = [combine(ring, a, b) for a, b in zip(gx, gy)]
    return x._rewrap(_solve_ghost(ring, ghosts, x.p))


def wadd(x, y):
    return _binary(x, y, lambda ring, a, b: ring.add(a, b))


def wmul(x, y):
    return _binary(x, y, lambda ring, a, b: ring.mul(a, b))


def wver(x):
    """Verschiebung: shift components right; ghost (0, p*w_0, p*w_1, ...)."""
    if x.tag == "Z":
        return WittVec("Z", (0,) + x.comps, p=x.p, pexp=x.pexp)
    zero = x.frame.zero(x.tag)
    return WittVec(x.tag, (zero,) + x.comps, frame=x.frame)


def wfrob(x):
    """Frobenius: ghost components (w_1, w_2, ...); output length L-1."""
    length = len(x.comps)
    if length < 2:
        raise ValueError("Frobenius needs length >= 2")
    boost = length - 1
    ring = x._ring(boost)
    ghosts = _ghosts_of(ring, x._tables(), length, x.p)[1:]
    out = _solve_ghost(ring, ghosts, x.p)
    return x._rewrap(out)


def ghost(x):
    """All ghost components w_n(x) in the component ring."""
    ring = x._ring()
    out = _ghosts_of(ring, x._tables(), len(x.comps), x.p)
    if x.tag == "Z":
        return [t.get((0,), 0) for t in out]
    return [SeriesElem(x.frame, x.tag, t) for t in out]


def from_int(n, length, like=None, frame=None, tag="S", p=None, pexp=None):
    """The image of the integer n in the Witt ring."""
    if like is not None:
        tag, frame, p, pexp = like.tag, like.frame, like.p, like.pexp
    if tag in ("S", "R"):
        p = frame.p
    tmp = WittVec(tag, [frame.zero(tag)] * length if tag != "Z" else [0] * length,
                  frame=frame, p=p, pexp=pexp)
    ring = tmp._ring(length - 1)
    ghosts = [ring.const(n)] * length
    return tmp._rewrap(_solve_ghost(ring, ghosts, p))


def delta(x, length=None):
    """Ring section of the series ring into its Witt vectors.

    The components solve w_n(delta(x)) = sigma^n(x); the recursion runs
    at precision N + length - 1 and the result is stamped at N.
    """
    if not isinstance(x, SeriesElem) or x.tag != "S":
        raise ValueError("delta is defined on series-ring elements")
    frame = x.frame
    length = frame.L if length is None else length
    ring = frame.ring("S", boost=length - 1)
    ghosts = [ring.norm(dict(x.coeffs))]
    for _ in range(length - 1):
        ghosts.append(ring.sigma(ghosts[-1]))
    comps = _solve_ghost(ring, ghosts, frame.p)
    stamp = frame.ring("S")
    return WittVec("S", [SeriesElem(frame, "S", stamp.norm(c)) for c in comps], frame=frame)


def kappa(x, length=None):
    """Component-wise reduction of delta(x) into W(R/p^aR)."""
    frame = x.frame
    length = frame.L if length is None else length
    dv = delta(x, length)
    return WittVec("R", [c.reduce_mod_E() for c in dv.comps], frame=frame)


_TAU_CACHE = {}


def tau(frame):
    """The unit with p*tau = kappa(sigma(E)).

    kappa(E) has zeroth component 0, so kappa(E) = V(y) and
    kappa(sigma(E)) = F(V(y)) = p*y: tau is the left shift of kappa(E)
    computed at Witt length L+1, which loses no precision.  The
    Frobenius identity is then verified at the stored modulus.
    """
    cached = _TAU_CACHE.get(frame)
    if cached is not None:
        return cached
    kv = kappa(frame.E, length=frame.L + 1)
    if not kv.comps[0].is_zero():
        raise PrecisionError("kappa(E) has nonzero zeroth component")
    t = WittVec("R", kv.comps[1:], frame=frame)
    lhs = wmul(from_int(frame.p, frame.L, like=t), t)
    rhs = kappa(frame.E.frobenius(), length=frame.L)
    if lhs != rhs:
        raise PrecisionError("p*tau failed to match kappa(sigma(E))")
    if not t.is_unit():
        raise PrecisionError("tau is not a unit; frame invariants violated")
    _TAU_CACHE[frame] = t
    return t


# -- universal polynomial table ----------------------------------------------


class WittPolyTable:
    """Symbolic universal addition/multiplication polynomials.

    Polynomials live over the integers in x_0..x_{L-1}, y_0..y_{L-1},
    keyed by exponent tuples of length 2L (plus a trailing unused slot).
    Sizes grow quickly with p and L; the table is meant for inspection
    and cross-checking at small parameters, while the arithmetic above
    evaluates the same polynomials by recursion.
    """

    def __init__(self, p, length):
        self.p = p
        self.length = length
        ring = _Ring(p, 2 * length, None, 1, None)
        self._ring = ring
        xs = []
        ys = []
        for i in range(length):
            key = [0] * (2 * length + 1)
            key[i] = 1
            xs.append({tuple(key): 1})
            key = [0] * (2 * length + 1)
            key[length + i] = 1
            ys.append({tuple(key): 1})
        gx = _ghosts_of(ring, xs, length, p)
        gy = _ghosts_of(ring, ys, length, p)
        self.sum_polys = tuple(
            _solve_ghost(ring, [ring.add(a, b) for a, b in zip(gx, gy)], p)
        )
        self.prod_polys = tuple(
            _solve_ghost(ring, [ring.mul(a, b) for a, b in zip(gx, gy)], p)
        )
        self.ghost_x = tuple(gx)

    def evaluate(self, poly, ring, xs, ys):
        """Substitute component tables for the symbolic variables."""
        acc = ring.zero()
        for key, coeff in poly.items():
            term = ring.const(coeff)
            for i, exp in enumerate(key[: 2 * self.length]):
                if not exp:
                    continue
                base = xs[i] if i < self.length else ys[i - self.length]
                term = ring.mul(term, ring.pow(base, exp))
            acc = ring.add(acc, term)
        return acc


_POLY_CACHE = {}


def witt_polys(p, length):
    """Cached universal Witt polynomial table for (p, length)."""
    key = (p, length)
    table = _POLY_CACHE.get(key)
    if table is None:
        table = WittPolyTable(p, length)
        _POLY_CACHE[key] = table
    return table
