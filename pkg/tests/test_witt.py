import pytest

from windowalg import (
    Frame,
    WittVec,
    delta,
    from_int,
    ghost,
    kappa,
    tau,
    wadd,
    wfrob,
    witt_polys,
    wmul,
    wver,
)
from windowalg.series import _Ring
from windowalg.rand import random_frame, random_series

from helpers import frame313, frame_e2, make_rng


def zvec(p, comps):
    return WittVec("Z", comps, p=p)


def test_universal_polys_small():
    tbl = witt_polys(3, 2)
    # S0 = x0 + y0, P0 = x0*y0
    assert tbl.sum_polys[0] == {(1, 0, 0, 0, 0): 1, (0, 0, 1, 0, 0): 1}
    assert tbl.prod_polys[0] == {(1, 0, 1, 0, 0): 1}
    # S1 = x1 + y1 - x0^2 y0 - x0 y0^2 (solves the ghost equation)
    assert tbl.sum_polys[1] == {
        (0, 1, 0, 0, 0): 1,
        (0, 0, 0, 1, 0): 1,
        (2, 0, 1, 0, 0): -1,
        (1, 0, 2, 0, 0): -1,
    }
    # ghost polynomials: w_0 = x0, w_1 = x0^3 + 3 x1
    assert tbl.ghost_x[0] == {(1, 0, 0, 0, 0): 1}
    assert tbl.ghost_x[1] == {(3, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0): 3}


@pytest.mark.parametrize("p,length", [(3, 2), (3, 3), (5, 2)])
def test_universal_polys_ghost_identity(p, length):
    # w_n(S_0..S_n) = w_n(x) + w_n(y) and likewise for products, as
    # exact integer polynomial identities
    tbl = witt_polys(p, length)
    ring = tbl._ring
    from windowalg.witt import _ghosts_of

    gs = _ghosts_of(ring, list(tbl.sum_polys), length, p)
    gp = _ghosts_of(ring, list(tbl.prod_polys), length, p)
    gx = _ghosts_of(
        ring,
        [{tuple(1 if k == i else 0 for k in range(2 * length + 1)): 1} for i in range(length)],
        length,
        p,
    )
    gy = _ghosts_of(
        ring,
        [
            {tuple(1 if k == length + i else 0 for k in range(2 * length + 1)): 1}
            for i in range(length)
        ],
        length,
        p,
    )
    for n in range(length):
        assert gs[n] == ring.add(gx[n], gy[n])
        assert gp[n] == ring.mul(gx[n], gy[n])


def test_arithmetic_matches_symbolic_table():
    # the recursion evaluates exactly the cached universal polynomials
    rng = make_rng(201)
    tbl = witt_polys(3, 3)
    ring = _Ring(3, 0, 0, 1, None)
    for _ in range(20):
        xs = [rng.randint(-9, 9) for _ in range(3)]
        ys = [rng.randint(-9, 9) for _ in range(3)]
        x, y = zvec(3, xs), zvec(3, ys)
        for n in range(3):
            expect = tbl.evaluate(
                tbl.sum_polys[n],
                ring,
                [{(0,): v} if v else {} for v in xs],
                [{(0,): v} if v else {} for v in ys],
            )
            assert wadd(x, y).comps[n] == expect.get((0,), 0)
            expect = tbl.evaluate(
                tbl.prod_polys[n],
                ring,
                [{(0,): v} if v else {} for v in xs],
                [{(0,): v} if v else {} for v in ys],
            )
            assert wmul(x, y).comps[n] == expect.get((0,), 0)


def test_wadd_example():
    x = zvec(3, [1, 0])
    assert wadd(x, x).comps == (2, -2)


def test_teichmueller_identity():
    rng = make_rng(202)
    for _ in range(10):
        x = zvec(3, [rng.randint(-9, 9) for _ in range(3)])
        one = zvec(3, [1, 0, 0])
        assert wmul(one, x) == x


def test_ver_frob_examples():
    x = zvec(3, [1, 0])
    assert wver(x).comps == (0, 1, 0)
    f = wfrob(zvec(3, [0, 1, 0]))
    assert ghost(f)[0] == 3
    assert f == wmul(from_int(3, 2, tag="Z", p=3), zvec(3, [1, 0]))


def test_fv_is_p_random():
    rng = make_rng(203)
    for p in (3, 5):
        for _ in range(15):
            x = zvec(p, [rng.randint(-9, 9) for _ in range(3)])
            assert wfrob(wver(x)) == wmul(from_int(p, 3, tag="Z", p=p), x)


def test_ver_ghost_structure():
    # ghost(V(x)) = (0, p*w_0(x), p*w_1(x), ...)
    rng = make_rng(211)
    for p in (3, 5):
        for _ in range(10):
            x = zvec(p, [rng.randint(-9, 9) for _ in range(3)])
            assert ghost(wver(x)) == [0] + [p * g for g in ghost(x)]


def test_frob_needs_length_two():
    with pytest.raises(ValueError):
        wfrob(zvec(3, [1]))


def test_ghost_examples():
    assert ghost(zvec(3, [3, -8])) == [3, 3]
    c = 4
    assert ghost(zvec(3, [c, 0, 0])) == [c, c**3, c**9]


def test_ghost_oracle_random_exact():
    rng = make_rng(204)
    for p in (3, 5):
        for length in (2, 3):
            for _ in range(25):
                x = zvec(p, [rng.randint(-9, 9) for _ in range(length)])
                y = zvec(p, [rng.randint(-9, 9) for _ in range(length)])
                gx, gy = ghost(x), ghost(y)
                assert ghost(wadd(x, y)) == [a + b for a, b in zip(gx, gy)]
                assert ghost(wmul(x, y)) == [a * b for a, b in zip(gx, gy)]


def test_delta_teichmueller():
    f = frame_e2()
    assert delta(f.u()).comps == (f.u(), f.zero())
    assert delta(f.t(1)).comps == (f.t(1), f.zero())


def test_delta_of_constant():
    f = frame313()
    dv = delta(f.const(3))
    assert dv.comps[0] == f.const(3)
    assert dv.comps[1] == f.const(-8)


def test_delta_is_ring_hom():
    rng = make_rng(205)
    for f in (frame313(L=3), frame_e2()):
        for _ in range(50):
            x = random_series(rng, f)
            y = random_series(rng, f)
            assert delta(x * y) == wmul(delta(x), delta(y))
            assert delta(x + y) == wadd(delta(x), delta(y))


def test_delta_ghost_is_sigma_power():
    rng = make_rng(206)
    for f in (frame313(L=3), frame_e2(L=3)):
        for _ in range(25):
            x = random_series(rng, f)
            gs = ghost(delta(x))
            expect = x
            for n in range(f.L):
                assert gs[n] == expect
                expect = expect.frobenius()


def test_kappa_examples():
    f = frame_e2()
    kv = kappa(f.u())
    assert kv.comps[0] == f.u().reduce_mod_E()
    assert kv.comps[1].is_zero()
    assert ghost(kappa(f.E))[0].is_zero()
    # p=3, e=1, E=u+3: sigma(E) reduces to u^3+3 at u=-3, i.e. -24
    f2 = frame313(a=4)
    kv2 = kappa(f2.E.frobenius())
    assert ghost(kv2)[0] == f2.const(-24, "R")


def test_kappa_intertwines_sigma_and_frobenius():
    rng = make_rng(207)
    for f in (frame313(L=3), frame_e2(L=3)):
        for _ in range(20):
            x = random_series(rng, f)
            lhs = kappa(x.frobenius())
            rhs = wfrob(kappa(x))
            assert lhs.comps[: f.L - 1] == rhs.comps


def test_tau_hand_values():
    f = frame313()
    t = tau(f)
    # w0(tau) = sigma(E)/p = -8 in R/p^min(a,N) = Z/27
    assert ghost(t)[0] == f.const(-8, "R")
    assert t.is_unit()
    # e = 2: (u^6+3)/3 = -8 modulo E = u^2+3
    f2 = Frame.make(3, 0, 2, 3, 6, 4, 2, "u^2 + 3")
    assert ghost(tau(f2))[0] == f2.const(-8, "R")
    # higher precision pins the value further
    f3 = frame313(a=5, N=8)
    assert ghost(tau(f3))[0] == f3.const(-8, "R")


def test_tau_division_identity():
    rng = make_rng(208)
    for _ in range(10):
        f = random_frame(rng)
        t = tau(f)
        assert t.is_unit()
        lhs = wmul(from_int(f.p, f.L, frame=f, tag="R"), t)
        assert lhs == kappa(f.E.frobenius())
        # w0(tau) * p equals the reduction of sigma(E)
        assert ghost(t)[0] * f.p == f.E.frobenius().reduce_mod_E()


def test_witt_ops_over_series_components():
    rng = make_rng(209)
    f = frame313(L=3)
    for _ in range(10):
        x = delta(random_series(rng, f))
        y = delta(random_series(rng, f))
        gx, gy = ghost(x), ghost(y)
        assert ghost(wadd(x, y)) == [a + b for a, b in zip(gx, gy)]
        assert ghost(wmul(x, y)) == [a * b for a, b in zip(gx, gy)]


def test_witt_ops_commute_with_reduction():
    # W(-) is functorial: component-wise reduction mod E intertwines
    # the operations over the series ring and over R/p^aR
    rng = make_rng(210)
    for f in (frame313(L=3), frame_e2()):
        for _ in range(10):
            x = delta(random_series(rng, f))
            y = delta(random_series(rng, f))
            xr = WittVec("R", [c.reduce_mod_E() for c in x.comps], frame=f)
            yr = WittVec("R", [c.reduce_mod_E() for c in y.comps], frame=f)
            for op in (wadd, wmul):
                over_s = op(x, y)
                reduced = WittVec("R", [c.reduce_mod_E() for c in over_s.comps], frame=f)
                assert reduced == op(xr, yr)


def test_length_and_base_mismatch():
    from windowalg import FrameMismatchError

    with pytest.raises(FrameMismatchError):
        wadd(zvec(3, [1, 0]), zvec(3, [1, 0, 0]))
    with pytest.raises(FrameMismatchError):
        wadd(zvec(3, [1, 0]), zvec(5, [1, 0]))


def test_delta_rejects_r_tag():
    f = frame313()
    with pytest.raises(ValueError):
        delta(f.one("R"))
