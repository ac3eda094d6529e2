"""Breuil windows in normal matrix form.

A window at level a is (d, c, A) with A an invertible (d+c) x (d+c)
matrix over the level-a series ring; the structural map phi has matrix
A*C for C = blockdiag(E*I_d, I_c).  Raw phi-matrices are accepted at
the boundary and normal-decomposed immediately.
"""

from __future__ import annotations

from fractions import Fraction

from . import matrices as mx
from .series import MAX_UCAP, FrameMismatchError, PrecisionError


class DecompositionError(ValueError):
    """The cokernel of the supplied matrix is not free; no normal form."""


class Window:
    def __init__(self, frame, d, c, A):
        self.frame = frame
        self.d = d
        self.c = c
        self.A = mx.mat(A)

    @property
    def level(self):
        return self.frame.a

    @property
    def height(self):
        return self.d + self.c

    def C_matrix(self):
        E = self.frame.E
        one = self.frame.one()
        zero = self.frame.zero()
        n = self.height
        return tuple(
            tuple((E if i < self.d else one) if i == j else zero for j in range(n))
            for i in range(n)
        )

    def phi_matrix(self):
        return mx.mmul(self.A, self.C_matrix())

    def at_level(self, a):
        if a * self.frame.e > MAX_UCAP:
            raise ValueError("target level exceeds the configured u-cap")
        return Window(
            self.frame.at_level(a),
            self.d,
            self.c,
            mx.mmap(self.A, lambda x: x.at_level(a)),
        )

    def __eq__(self, other):
        if not isinstance(other, Window):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.d == other.d
            and self.c == other.c
            and mx.meq(self.A, other.A)
        )

    __hash__ = None

    def __repr__(self):
        return "Window(level=%d, d=%d, c=%d)" % (self.level, self.d, self.c)


def make_window(frame, d, c, A):
    A = mx.mat(A)
    n = d + c
    if d < 0 or c < 0 or n < 1:
        raise ValueError("window needs d, c >= 0 and d + c >= 1")
    if len(A) != n or any(len(row) != n for row in A):
        raise ValueError("matrix size does not match d + c")
    for row in A:
        for x in row:
            if x.frame != frame or x.tag != "S":
                raise FrameMismatchError("window entries must live in the frame's series ring")
    if not mx.det(A).is_unit():
        raise ValueError("det(A) is not a unit")
    return Window(frame, d, c, A)


def normal_decompose(frame, M):
    """Split a raw phi-matrix as M*U = A*C.

    Column-reduce over the frame's residue field: unit pivots mark
    L-type columns (leftmost column first, then lowest row); whatever
    remains must be divisible by E and forms the J-block.  Returns
    (d, c, A, U) with U invertible.
    """
    M = mx.mat(M)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("phi-matrix must be square")
    one = frame.one()
    zero = frame.zero()
    cols = [[M[i][j] for i in range(n)] for j in range(n)]
    ucols = [[one if i == j else zero for i in range(n)] for j in range(n)]
    remaining = list(range(n))
    used_rows = set()
    l_order = []
    while True:
        pivot = None
        for j in remaining:
            for i in range(n):
                if i not in used_rows and cols[j][i].is_unit():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        inv = cols[j][i].invert()
        for j2 in remaining:
            if j2 == j:
                continue
            lam = cols[j2][i] * inv
            cols[j2] = [a - lam * b for a, b in zip(cols[j2], cols[j])]
            ucols[j2] = [a - lam * b for a, b in zip(ucols[j2], ucols[j])]
        used_rows.add(i)
        l_order.append(j)
        remaining.remove(j)
    j_order = sorted(remaining)
    j_quotients = []
    for j in j_order:
        qcol = []
        for x in cols[j]:
            q = x.divide_by_E()
            if q is None:
                raise DecompositionError(
                    "cokernel not free: column neither unit-reducible nor E-divisible"
                )
            qcol.append(q)
        j_quotients.append(qcol)
    order = j_order + sorted(l_order)
    A = tuple(
        tuple(
            (j_quotients[k] if k < len(j_order) else cols[order[k]])[i]
            for k in range(n)
        )
        for i in range(n)
    )
    U = tuple(tuple(ucols[j][i] for j in order) for i in range(n))
    d, c = len(j_order), len(l_order)
    w = make_window(frame, d, c, A)
    if not mx.meq(mx.mmul(M, U), w.phi_matrix()):
        raise PrecisionError("normal decomposition failed to reproduce the input")
    return d, c, A, U


def window_from_phi(frame, M):
    d, c, A, U = normal_decompose(frame, M)
    return make_window(frame, d, c, A), U


class Triple:
    """Triple view of a window in its normal basis.

    F1_matrix is the matrix of the normal-basis isomorphism (the
    J-columns are the F-images, the L-columns the F1-images); F_matrix
    is the induced endomorphism of the ambient module, whose L-columns
    acquire a factor sigma(E).
    """

    def __init__(self, d, c, F_matrix, F1_matrix, basis_change):
        self.d = d
        self.c = c
        self.F_matrix = F_matrix
        self.F1_matrix = F1_matrix
        self.basis_change = basis_change


def _f_matrix_from(frame, d, c, A):
    sE = frame.E.frobenius()
    return tuple(
        tuple(x * sE if j >= d else x for j, x in enumerate(row)) for row in A
    )


def triple_of(w):
    ident = mx.identity(w.height, w.frame.one())
    return Triple(w.d, w.c, _f_matrix_from(w.frame, w.d, w.c, w.A), w.A, ident)


def window_of(frame, triple):
    A = mx.mat(triple.F1_matrix)
    expected = _f_matrix_from(frame, triple.d, triple.c, A)
    if not mx.meq(mx.mat(triple.F_matrix), expected):
        raise ValueError("triple data inconsistent: F does not match sigma(E)-scaled F1")
    return make_window(frame, triple.d, triple.c, A)


def lift_window(w):
    """Entry-wise canonical lift to level a+1."""
    return w.at_level(w.level + 1)


class WindowMorphism:
    """A matrix U over the common frame with M_phi2 * U = sigma(U) * M_phi1."""

    def __init__(self, source, target, U):
        if source.frame != target.frame:
            raise FrameMismatchError("morphism endpoints over different frames")
        self.source = source
        self.target = target
        self.U = mx.mat(U)
        if len(self.U) != target.height or any(len(r) != source.height for r in self.U):
            raise ValueError("morphism matrix has the wrong shape")

    def sigma_U(self):
        return mx.mmap(self.U, lambda x: x.frobenius())

    def holds(self):
        lhs = mx.mmul(self.target.phi_matrix(), self.U)
        rhs = mx.mmul(self.sigma_U(), self.source.phi_matrix())
        return mx.meq(lhs, rhs)


def check_morphism(m):
    return m.holds()


def check_rigidity(m):
    """Instance-level rigidity over a level-(a*p) frame.

    For a morphism over the level divisible by p, the statement is: if
    U vanishes modulo u^(a*e) (a = level/p) then U = 0.  Returns whether
    that implication held for this instance; vacuously true when U does
    not vanish at the sublevel.
    """
    level = m.source.level
    p = m.source.frame.p
    if level % p:
        raise ValueError("rigidity needs a level divisible by p")
    if not m.holds():
        raise ValueError("not a morphism")
    ae = (level // p) * m.source.frame.e
    vanishes = all(
        all(k[-1] >= ae for k in x.coeffs) for row in m.U for x in row
    )
    if not vanishes:
        return True
    return mx.is_zero(m.U)


def _monomials(r, tdeg, urange):
    def tparts(rleft, budget):
        if rleft == 0:
            yield ()
            return
        for head in range(budget + 1):
            for rest in tparts(rleft - 1, budget - head):
                yield (head,) + rest

    out = []
    for alpha in tparts(r, tdeg):
        for j in urange:
            out.append(alpha + (j,))
    return out


def vanishing_hom_dim(w1, w2, sub_a):
    """Exact-coefficient search for morphisms vanishing at the sublevel.

    Builds the linear system M2*U = sigma(U)*M1 over honest p-adic
    coefficients (the stored residues are taken as exact integers, so
    feed it windows with exactly known entries), restricted to U that
    vanish modulo u^(sub_a*e), and returns the dimension of its
    rational solution space.  Layer-by-layer in the residue field this
    is the morphism equation solved coefficient-wise.
    """
    frame = w1.frame
    if w2.frame != frame:
        raise FrameMismatchError("windows over different frames")
    n = w1.height
    e = frame.e
    ring = frame.exact_ring(ucap=frame.a * e)
    m1 = mx.mmap(w1.phi_matrix(), lambda x: dict(x.coeffs))
    m2 = mx.mmap(w2.phi_matrix(), lambda x: dict(x.coeffs))
    monos = _monomials(frame.r, frame.D, range(sub_a * e, frame.a * e))
    columns = []
    for i in range(n):
        for j in range(n):
            for key in monos:
                delta = {key: 1}
                sdelta = ring.sigma(delta)
                col = {}
                for row in range(n):
                    entry = ring.mul(m2[row][i], delta)
                    for k, cval in entry.items():
                        col[(row, j, k)] = col.get((row, j, k), 0) + cval
                for colj in range(n):
                    entry = ring.mul(sdelta, m1[j][colj])
                    for k, cval in entry.items():
                        col[(i, colj, k)] = col.get((i, colj, k), 0) - cval
                columns.append({k: v for k, v in col.items() if v})
    rank = 0
    pivots = {}
    for col in columns:
        vec = {k: Fraction(v) for k, v in col.items() if v}
        while vec:
            lead = min(vec)
            piv = pivots.get(lead)
            if piv is None:
                scale = vec[lead]
                pivots[lead] = {k2: v2 / scale for k2, v2 in vec.items()}
                rank += 1
                break
            factor = vec[lead]
            for k2, v2 in piv.items():
                nv = vec.get(k2, 0) - factor * v2
                if nv:
                    vec[k2] = nv
                else:
                    vec.pop(k2, None)
    return len(columns) - rank


def _int_inv_modp(M, p):
    n = len(M)
    aug = [[M[i][j] % p for j in range(n)] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError("matrix not invertible mod p")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [(x * inv) % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class SpecialFiber:
    def __init__(self, height, dim, A0, Phi0, is_nilpotent):
        self.height = height
        self.dim = dim
        self.A0 = A0
        self.Phi0 = Phi0
        self.is_nilpotent = is_nilpotent


def special_fiber(w):
    """Invariants of the window over the residue ring of (t, u).

    Phi0 is blockdiag(I_d, E*I_c) * A^(-1) with t and u sent to zero;
    nilpotence uses the V-operator surrogate N0 = blockdiag(0_d, I_c) *
    A0^(-1) mod p, iterated with entry-wise Frobenius twists for
    height many steps.
    """
    frame = w.frame
    n = w.height
    pmod = frame.p**frame.N
    A0 = [[x.constant_term() % pmod for x in row] for row in w.A]
    Ainv = mx.inv(w.A)
    E = frame.E
    scaled = tuple(
        tuple(x * E if i >= w.d else x for x in row) for i, row in enumerate(Ainv)
    )
    Phi0 = [[x.constant_term() % pmod for x in row] for row in scaled]
    p = frame.p
    A0inv = _int_inv_modp(A0, p)
    N0 = [[A0inv[i][j] % p if i >= w.d else 0 for j in range(n)] for i in range(n)]
    prod = [row[:] for row in N0]
    twisted = [row[:] for row in N0]
    for _ in range(n - 1):
        twisted = [[pow(x, p, p) for x in row] for row in twisted]
        prod = [
            [sum(prod[i][k] * twisted[k][j] for k in range(n)) % p for j in range(n)]
            for i in range(n)
        ]
    nilpotent = all(x == 0 for row in prod for x in row)
    return SpecialFiber(n, w.d, A0, Phi0, nilpotent)


def lie(w):
    """Rank and presentation of Coker(phi) over R/p^aR."""
    presentation = mx.mmap(w.phi_matrix(), lambda x: x.reduce_mod_E())
    return w.d, presentation
