"""Shared oracles and generators for the test suite.

Oracles here are written independently of the library internals:
schoolbook polynomial multiplication, exact univariate division, and
window base changes assembled from first principles.
"""

import random

from windowalg import Frame, make_window
from windowalg import matrices as mx
from windowalg.rand import random_maximal, random_series, random_unit


def frame313(**kw):
    args = dict(p=3, r=0, e=1, a=3, N=6, D=4, L=2, E="u + 3")
    args.update(kw)
    return Frame.make(**args)


def frame_e2(**kw):
    args = dict(p=3, r=1, e=2, a=2, N=5, D=4, L=2, E="u^2 + 3*t1*u + 3*(1 + t1)")
    args.update(kw)
    return Frame.make(**args)


def mul_oracle(frame, f, g):
    """Schoolbook product of raw tables, truncated by the frame caps."""
    out = {}
    for k1, c1 in f.items():
        for k2, c2 in g.items():
            key = tuple(a + b for a, b in zip(k1, k2))
            out[key] = out.get(key, 0) + c1 * c2
    out = {
        k: c
        for k, c in out.items()
        if sum(k[:-1]) <= frame.D and k[-1] < frame.a * frame.e
    }
    return frame.elem(out)


def divmod_oracle(tbl, E_tbl, e):
    """Exact integer long division by the u-monic E; no caps applied."""
    rem = dict(tbl)
    q = {}
    tail = {k: c for k, c in E_tbl.items() if k[-1] < e}
    while True:
        top = [k for k in rem if k[-1] >= e]
        if not top:
            break
        k = max(top, key=lambda kk: kk[-1])
        c = rem.pop(k)
        qk = k[:-1] + (k[-1] - e,)
        q[qk] = q.get(qk, 0) + c
        for ek, ec in tail.items():
            key = tuple(a + b for a, b in zip(qk, ek))
            rem[key] = rem.get(key, 0) - c * ec
        rem = {kk: cc for kk, cc in rem.items() if cc}
    return q, rem


def reduce_oracle(frame, x):
    """Independent reduction mod E into the R-ring."""
    _, rem = divmod_oracle(dict(x.coeffs), dict(frame.E_items), frame.e)
    return frame.elem(rem, "R")


def geometric_inverse_oracle(frame, m, terms=40):
    """(1 + m)^(-1) = 1 - m + m^2 - ... for m in the maximal ideal."""
    acc = frame.one()
    power = frame.one()
    for k in range(1, terms):
        power = power * m
        if power.is_zero():
            break
        acc = acc + power * ((-1) ** k)
    return acc


def conjugate_by_C(frame, d, M):
    """C * M * C^(-1) for C = blockdiag(E I_d, I_c); None when the
    lower-left block is not divisible by E."""
    E = frame.E
    out = []
    for i, row in enumerate(M):
        new = []
        for j, x in enumerate(row):
            if i < d and j >= d:
                new.append(x * E)
            elif i >= d and j < d:
                q = x.divide_by_E()
                if q is None:
                    return None
                new.append(q)
            else:
                new.append(x)
        out.append(tuple(new))
    return tuple(out)


def q_shape_matrix(rng, frame, d, c, terms=2):
    """Invertible matrix preserving the submodule E*J + L: lower-left
    block divisible by E, unit diagonal.  Entries above the diagonal
    may be units; the determinant stays a unit because every crossing
    product passes through the E-divisible block."""
    n = d + c
    E = frame.E
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(random_unit(rng, frame, terms, tmax=1))
            elif i >= d and j < d:
                row.append(random_maximal(rng, frame, terms, tmax=1) * E)
            elif i < d <= j:
                # units are safe here: a permutation crossing this block
                # must also cross the E-divisible one
                row.append(random_series(rng, frame, terms, tmax=1))
            else:
                row.append(random_maximal(rng, frame, terms, tmax=1))
        rows.append(tuple(row))
    return mx.mat(rows)


def upper_q_matrix(rng, frame, d, c, terms=2):
    """Q-preserving matrix with an exactly zero lower-left block, so
    conjugation by C never divides by E (no annihilator fuzz)."""
    n = d + c
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i >= d and j < d:
                row.append(frame.zero())
            else:
                row.append(random_series(rng, frame, terms, tmax=1))
        rows.append(tuple(row))
    return mx.mat(rows)


def sigma_mat(M):
    return mx.mmap(M, lambda x: x.frobenius())


def iso_target(frame, w, V):
    """Target window of the isomorphism V: solves A2 from the morphism
    equation M2*V = sigma(V)*M1, i.e. A2 = sigma(V)*A1*(C V^(-1) C^(-1))."""
    Vinv = mx.inv(V)
    conj = conjugate_by_C(frame, w.d, Vinv)
    if conj is None:
        return None
    A2 = mx.mmul(sigma_mat(V), mx.mmul(w.A, conj))
    return make_window(frame, w.d, w.c, A2)


def upper_window(rng, frame, d, c, pexp):
    """Window whose matrix is unit-upper-triangular modulo p^pexp, so a
    descending diagonal p-power isogeny stays integral."""
    n = d + c
    scale = frame.p ** max(pexp, 1)  # below-diagonal also in the maximal ideal
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(random_unit(rng, frame, 2, tmax=1))
            elif i < j:
                row.append(random_series(rng, frame, 2, tmax=1))
            else:
                row.append(random_series(rng, frame, 2, tmax=1) * scale)
        rows.append(tuple(row))
    return make_window(frame, d, c, rows)


def diag_p_isogeny(rng, frame, w, exps):
    """Isogeny with U = diag(p^k_i), k descending; target = U A U^(-1) C."""
    n = w.height
    assert list(exps) == sorted(exps, reverse=True)
    U = tuple(
        tuple(
            frame.const(frame.p ** exps[i]) if i == j else frame.zero()
            for j in range(n)
        )
        for i in range(n)
    )
    A2 = []
    for i in range(n):
        row = []
        for j in range(n):
            x = w.A[i][j]
            delta = exps[i] - exps[j]
            if delta >= 0:
                row.append(x * (frame.p**delta))
            else:
                row.append(x.divide_by_p(-delta))
        A2.append(tuple(row))
    target = make_window(frame, w.d, w.c, A2)
    return target, U


def random_isogeny(rng, frame, d, c, max_exp=1):
    """Random triangular isogeny built by solving for the target factor:
    a unit base change composed with a diagonal p-power step."""
    n = d + c
    exps = sorted((rng.randint(0, max_exp) for _ in range(n)), reverse=True)
    source = upper_window(rng, frame, d, c, max(exps) - min(exps))
    mid, U1 = diag_p_isogeny(rng, frame, source, exps)
    V = q_shape_matrix(rng, frame, d, c)
    target = iso_target(frame, mid, V)
    if target is None:
        return None
    U = mx.mmul(V, U1)
    return source, target, U, sum(exps)


def make_rng(seed):
    return random.Random(seed)
