"""Exact arithmetic in truncated power-series frames.

The ambient ring is a truncation of W(k)[[t_1..t_r, u]] for k = F_p:
coefficients live mod p^N, total t-degree is capped at D, and u-degree
at a*e.  That ring is tagged "S".  Reducing modulo the distinguished
u-monic polynomial E gives the quotient tagged "R", whose canonical
form has u-degree < e and coefficients mod p^min(a, N).

All three caps are honest ring quotients (the span of monomials beyond
a cap is an ideal), so every operation here is exact ring arithmetic.
The Frobenius lift sigma maps the cap ideal into itself and therefore
descends to the truncation; recovering the untruncated value of
sigma(x) additionally needs t-degree(x) <= D/p (the caller's budget).

Values are immutable after construction and all operations are pure,
so elements and frames are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

# Hard ceiling on a*e so level changes (lifting, rigidity at level a*p)
# cannot silently explode table sizes.
MAX_UCAP = 4096


class PrecisionError(ArithmeticError):
    """An exact division failed; divisibility was guaranteed by theory."""


class FrameMismatchError(ValueError):
    """Operands belong to different frames, levels or ring tags."""


def _zero_key(r):
    return (0,) * (r + 1)


class _Ring:
    """Raw table arithmetic for one truncated ring.

    Tables map monomial keys (alpha_1, .., alpha_r, j) to integer
    residues.  pmod is the coefficient modulus (None means exact
    integers).  When E_items is set the ring is the E-quotient: u-degree
    is kept below e by long division after every product.
    """

    __slots__ = ("p", "r", "tdeg", "ucap", "pmod", "e", "E_items")

    def __init__(self, p, r, tdeg, ucap, pmod, e=None, E_items=None):
        self.p = p
        self.r = r
        self.tdeg = tdeg
        self.ucap = ucap
        self.pmod = pmod
        self.e = e
        self.E_items = E_items

    # -- basic table plumbing ------------------------------------------

    def norm(self, tbl):
        if self.pmod is None:
            return {k: c for k, c in tbl.items() if c}
        m = self.pmod
        return {k: cm for k, c in tbl.items() if (cm := c % m)}

    def const(self, n):
        return self.norm({_zero_key(self.r): n})

    def zero(self):
        return {}

    def one(self):
        return self.const(1)

    def keep(self, key):
        if key[-1] >= self.ucap:
            return False
        return self.tdeg is None or sum(key[:-1]) <= self.tdeg

    def add(self, f, g):
        out = dict(f)
        for k, c in g.items():
            out[k] = out.get(k, 0) + c
        return self.norm(out)

    def neg(self, f):
        return self.norm({k: -c for k, c in f.items()})

    def sub(self, f, g):
        out = dict(f)
        for k, c in g.items():
            out[k] = out.get(k, 0) - c
        return self.norm(out)

    def scal(self, f, n):
        return self.norm({k: c * n for k, c in f.items()})

    def mul_raw(self, f, g):
        """Product with t/p caps applied but no u-cap and no E-reduction."""
        out = {}
        tdeg = self.tdeg
        for k1, c1 in f.items():
            for k2, c2 in g.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                if tdeg is not None and sum(key[:-1]) > tdeg:
                    continue
                out[key] = out.get(key, 0) + c1 * c2
        return self.norm(out)

    def mul(self, f, g):
        if self.E_items is None:
            out = {}
            tdeg = self.tdeg
            ucap = self.ucap
            for k1, c1 in f.items():
                for k2, c2 in g.items():
                    j = k1[-1] + k2[-1]
                    if j >= ucap:
                        continue
                    key = tuple(a + b for a, b in zip(k1[:-1], k2[:-1])) + (j,)
                    if tdeg is not None and sum(key[:-1]) > tdeg:
                        continue
                    out[key] = out.get(key, 0) + c1 * c2
            return self.norm(out)
        prod = self.mul_raw(f, g)
        _, rem = self.divmod_u_monic(prod, self.E_items, self.e)
        return rem

    def pow(self, f, n):
        result = self.one()
        base = f
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base) if n > 1 else base
            n >>= 1
        return result

    def sigma(self, f):
        """Frobenius lift: coefficients fixed, monomials raised to the p-th power."""
        out = {}
        for k, c in f.items():
            key = tuple(a * self.p for a in k)
            if not self.keep(key):
                continue
            out[key] = out.get(key, 0) + c
        return self.norm(out)

    def divmod_u_monic(self, f, E_items, e):
        """Long division by the u-monic polynomial E of u-degree e.

        Returns (q, rem) with f = q*E + rem inside the capped ring and
        u-degree(rem) < e.  Caps are applied to every intermediate
        product, which keeps the identity valid in the quotient.
        """
        rem = dict(f)
        q = {}
        tail = [(k, c) for k, c in E_items if k[-1] < e]
        tdeg = self.tdeg
        while True:
            j = -1
            for k in rem:
                if k[-1] >= e and k[-1] > j:
                    j = k[-1]
            if j < 0:
                break
            lead = [(k, c) for k, c in rem.items() if k[-1] == j]
            for k, c in lead:
                qk = k[:-1] + (j - e,)
                q[qk] = q.get(qk, 0) + c
                del rem[k]
                # subtract (c * monomial) * (E - u^e); only the t-cap
                # applies here, u-degrees keep shrinking on their own
                for ek, ec in tail:
                    key = tuple(a + b for a, b in zip(qk, ek))
                    if tdeg is not None and sum(key[:-1]) > tdeg:
                        continue
                    rem[key] = rem.get(key, 0) - c * ec
            rem = self.norm(rem)
        return self.norm(q), self.norm(rem)

    def const_term(self, f):
        return f.get(_zero_key(self.r), 0)

    def is_unit(self, f):
        return self.const_term(f) % self.p != 0

    def inv(self, f):
        """Newton inversion; the error 1 - x*y lives in the augmentation
        ideal, which is nilpotent under the degree caps."""
        if self.pmod is None:
            raise ValueError("inversion needs a finite coefficient modulus")
        c = self.const_term(f)
        if c % self.p == 0:
            raise ZeroDivisionError("not a unit: constant term divisible by p")
        y = self.const(pow(c, -1, self.pmod))
        for _ in range(64):
            err = self.sub(self.one(), self.mul(f, y))
            if not err:
                return y
            y = self.add(y, self.mul(y, err))
        raise PrecisionError("unit inversion did not terminate")

    def div_exact_ppow(self, f, k):
        """Divide by p^k; every coefficient must be divisible.

        With a finite modulus p^W the quotient is canonical mod p^(W-k);
        callers that chain divisions track the degraded precision.
        """
        if k == 0:
            return dict(f)
        q = self.p**k
        m = None if self.pmod is None else self.pmod // q
        out = {}
        for key, c in f.items():
            if c % q:
                raise PrecisionError("coefficient not divisible by p^%d" % k)
            cq = c // q if m is None else (c // q) % m
            if cq:
                out[key] = cq
        return out


@dataclass(frozen=True)
class Frame:
    """Global context for all arithmetic.

    p is an odd prime, r the number of t-variables, e the u-degree of E,
    a the truncation level (u^(a*e) = 0), N the p-adic precision, D the
    total t-degree cap and L the default Witt length.  E_items holds the
    full polynomial E as a sorted tuple of (monomial key, coefficient).
    """

    p: int
    r: int
    e: int
    a: int
    N: int
    D: int
    L: int
    E_items: tuple

    @classmethod
    def make(cls, p, r, e, a, N, D, L, E):
        """Build a frame; E is a polynomial string or a raw table."""
        if isinstance(E, str):
            from . import blocks

            tbl = blocks.parse_poly(E, r)
        else:
            tbl = dict(E)
        pmod = p**N
        items = tuple(sorted((k, c % pmod) for k, c in tbl.items() if c % pmod))
        return cls(p, r, e, a, N, D, L, items)

    def at_level(self, a):
        return replace(self, a=a)

    def same_base(self, other):
        return (
            self.p == other.p
            and self.r == other.r
            and self.e == other.e
            and self.N == other.N
            and self.D == other.D
            and self.L == other.L
            and self.E_items == other.E_items
        )

    # -- derived data ---------------------------------------------------

    @cached_property
    def _cache(self):
        return {}

    def rmod_exp(self):
        """Coefficient modulus exponent of R/p^aR in canonical form."""
        return min(self.a, self.N)

    def ring(self, tag, boost=0):
        key = (tag, boost)
        ring = self._cache.get(key)
        if ring is None:
            if tag == "S":
                ring = _Ring(self.p, self.r, self.D, self.a * self.e, self.p ** (self.N + boost))
            elif tag == "R":
                ring = _Ring(
                    self.p,
                    self.r,
                    self.D,
                    self.e,
                    self.p ** (self.rmod_exp() + boost),
                    e=self.e,
                    E_items=self.E_items,
                )
            else:
                raise ValueError("unknown ring tag %r" % tag)
            self._cache[key] = ring
        return ring

    def exact_ring(self, ucap=None):
        """Honest-p model: same monomial caps, exact integer coefficients."""
        key = ("X", ucap)
        ring = self._cache.get(key)
        if ring is None:
            ring = _Ring(self.p, self.r, self.D, self.a * self.e if ucap is None else ucap, None)
            self._cache[key] = ring
        return ring

    # -- element constructors --------------------------------------------

    def elem(self, table, tag="S"):
        ring = self.ring(tag)
        clipped = {k: c for k, c in table.items() if ring.keep(k)}
        return SeriesElem(self, tag, ring.norm(clipped))

    def const(self, n, tag="S"):
        return self.elem({_zero_key(self.r): n}, tag)

    def zero(self, tag="S"):
        return self.elem({}, tag)

    def one(self, tag="S"):
        return self.const(1, tag)

    def u(self, power=1):
        return self.elem({(0,) * self.r + (power,): 1})

    def t(self, i, power=1):
        if not 1 <= i <= self.r:
            raise ValueError("t index out of range")
        key = [0] * (self.r + 1)
        key[i - 1] = power
        return self.elem({tuple(key): 1})

    def series(self, text, tag="S"):
        from . import blocks

        return self.elem(blocks.parse_poly(text, self.r), tag)

    @cached_property
    def E(self):
        return self.elem(dict(self.E_items))

    def E_coeff(self, i):
        """The u-free coefficient a_i of E (0 <= i < e)."""
        tbl = {k[:-1] + (0,): c for k, c in self.E_items if k[-1] == i}
        return self.elem(tbl)

    @cached_property
    def epsilon(self):
        """(E - u^e)/p, a unit when the frame is valid."""
        ring = self.ring("S")
        tail = {k: c for k, c in self.E_items if k[-1] < self.e}
        return SeriesElem(self, "S", ring.div_exact_ppow(ring.norm(tail), 1))

    @cached_property
    def _e_div_corrector(self):
        """g with g*E = p^a exactly in the level-a ring.

        From p^a = (E - u^e)^a * eps^(-a) and u^(a*e) = 0 one gets
        g = eps^(-a) * sum_{k>=1} C(a,k) E^(k-1) (-u^e)^(a-k).
        """
        from math import comb

        ring = self.ring("S")
        E = dict(self.E_items)
        acc = ring.zero()
        for k in range(1, self.a + 1):
            term = ring.pow(E, k - 1)
            upart = {(0,) * self.r + (self.e * (self.a - k),): (-1) ** (self.a - k)}
            term = ring.mul(term, ring.norm(upart))
            acc = ring.add(acc, ring.scal(term, comb(self.a, k)))
        eps_inv = ring.inv(self.epsilon.coeffs)
        inv_pow = ring.pow(eps_inv, self.a)
        return ring.mul(acc, inv_pow)


class SeriesElem:
    """Element of the truncated series ring (tag "S") or its E-quotient (tag "R")."""

    __slots__ = ("frame", "tag", "coeffs")

    def __init__(self, frame, tag, coeffs):
        self.frame = frame
        self.tag = tag
        self.coeffs = coeffs

    def _ring(self):
        return self.frame.ring(self.tag)

    def _check(self, other):
        if not isinstance(other, SeriesElem):
            raise TypeError("expected a series element")
        if self.frame != other.frame or self.tag != other.tag:
            raise FrameMismatchError("operands live in different rings")

    def _wrap(self, tbl):
        return SeriesElem(self.frame, self.tag, tbl)

    # -- ring structure ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.frame.const(other, self.tag)
        self._check(other)
        return self._wrap(self._ring().add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self._ring().neg(self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.frame.const(other, self.tag)
        self._check(other)
        return self._wrap(self._ring().sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._wrap(self._ring().scal(self.coeffs, other))
        self._check(other)
        return self._wrap(self._ring().mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n):
        return self._wrap(self._ring().pow(self.coeffs, n))

    def __eq__(self, other):
        if not isinstance(other, SeriesElem):
            return NotImplemented
        return self.frame == other.frame and self.tag == other.tag and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self):
        return not self.coeffs

    def zero(self):
        return self.frame.zero(self.tag)

    def one(self):
        return self.frame.one(self.tag)

    def constant_term(self):
        return self._ring().const_term(self.coeffs)

    def u_degree(self):
        return max((k[-1] for k in self.coeffs), default=-1)

    def is_unit(self):
        return self._ring().is_unit(self.coeffs)

    def invert(self):
        return self._wrap(self._ring().inv(self.coeffs))

    # -- frame maps --------------------------------------------------------

    def frobenius(self):
        if self.tag != "S":
            raise ValueError("frobenius is defined on the series ring only")
        return self._wrap(self._ring().sigma(self.coeffs))

    def reduce_mod_E(self):
        """Canonical image in R/p^aR: u-degree < e, coefficients mod p^min(a,N)."""
        if self.tag != "S":
            return self
        ring = self._ring()
        _, rem = ring.divmod_u_monic(self.coeffs, self.frame.E_items, self.frame.e)
        return SeriesElem(self.frame, "R", self.frame.ring("R").norm(rem))

    def divide_by_E(self):
        """Return q with q*E == self in the level-a ring, or None.

        Divisibility by E in the truncated ring is exactly vanishing of
        reduce_mod_E; the polynomial remainder may be a nonzero multiple
        of p^a, which the corrector g (g*E = p^a) absorbs.
        """
        if self.tag != "S":
            raise ValueError("E-division acts on the series ring")
        f = self.frame
        ring = self._ring()
        q, rem = ring.divmod_u_monic(self.coeffs, f.E_items, f.e)
        rmod = f.p ** f.rmod_exp()
        if any(c % rmod for c in rem.values()):
            return None
        if rem:
            if f.a >= f.N:
                q = dict(q)
            else:
                s = ring.div_exact_ppow(rem, f.a)
                q = ring.add(q, ring.mul(f._e_div_corrector, s))
        out = self._wrap(ring.norm(q))
        if out * f.E != self:
            raise PrecisionError("E-division reconstruction failed")
        return out

    def divide_by_p(self, k=1):
        """Exact division by p^k (errors if any coefficient resists)."""
        return self._wrap(self._ring().div_exact_ppow(self.coeffs, k))

    def at_level(self, a):
        """Canonical image at a different truncation level.

        Raising the level reads the same table as an element of the
        larger ring (the canonical representative lift); lowering it
        truncates.
        """
        target = self.frame.at_level(a)
        return target.elem(self.coeffs, self.tag)

    def __str__(self):
        from . import blocks

        return blocks.render_table(self.coeffs, self.frame.r)

    def __repr__(self):
        return "SeriesElem(%s)" % self


def validate_frame(frame):
    """Check every frame invariant; returns a list of violation strings."""
    errors = []
    f = frame
    if f.p < 3:
        errors.append("p must be an odd prime >= 3")
    else:
        n, d = f.p, 2
        while d * d <= n:
            if n % d == 0:
                errors.append("p is not prime")
                break
            d += 1
    if f.r < 0:
        errors.append("r must be >= 0")
    if f.e < 1:
        errors.append("e must be >= 1")
    if f.a < 1:
        errors.append("a must be >= 1")
    if f.N < 1:
        errors.append("N must be >= 1")
    if f.L < 1:
        errors.append("L must be >= 1")
    if f.D < 0:
        errors.append("D must be >= 0")
    if f.a * f.e > MAX_UCAP:
        errors.append("a*e exceeds the configured u-cap")
    if errors:
        return errors

    lead = {k: c for k, c in f.E_items if k[-1] == f.e}
    if lead != {(0,) * f.r + (f.e,): 1}:
        errors.append("E is not monic of u-degree e")
    if any(k[-1] > f.e for k, _ in f.E_items):
        errors.append("E has u-degree above e")
    if any(sum(k[:-1]) > f.D for k, _ in f.E_items):
        errors.append("E has t-degree above D")
    for i in range(f.e):
        coeff = [c for k, c in f.E_items if k[-1] == i]
        if any(c % f.p for c in coeff):
            errors.append("a%d not divisible by p" % i)
    if errors:
        return errors

    a0 = f.E_coeff(0)
    a0_over_p = a0.divide_by_p()
    if not a0_over_p.is_unit():
        errors.append("a0/p is not a unit")
    if not f.epsilon.is_unit():
        errors.append("epsilon = (E - u^e)/p is not a unit")
    return errors
