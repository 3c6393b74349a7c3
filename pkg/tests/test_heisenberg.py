import random
from fractions import Fraction

import pytest

from picard7.ring import AlgNum, KNum, TAU, zeta3_tower
from picard7.hermitian import GroupElt, HoroPoint, Mat, is_in_gamma
from picard7.heisenberg import (
    CuspElt,
    HeisPt,
    IDENTITY,
    Prism,
    R,
    T1,
    TTAU,
    TV,
    cusp_torsion_classes,
    cusp_torsion_report,
    _TRI,
    enumerate_cusp_overlaps,
    fm_feasible,
    polygon_vertices,
    heis_inv,
    heis_mul,
    overlap_witness,
    reduce_to_prism,
    s_coordinate,
    tau_coordinates,
    translation_matrix,
)


def rand_pt(rng):
    return HeisPt(
        KNum(Fraction(rng.randint(-12, 12), 4), Fraction(rng.randint(-12, 12), 4)),
        Fraction(rng.randint(-12, 12), 4),
    )


def test_generator_matrices():
    for c in (T1, TTAU, TV, R):
        g = c.to_matrix()
        assert is_in_gamma(g.mat)
        assert g.fixes_q_inf()
        assert CuspElt.from_matrix(g) == c
    assert R.to_matrix().mat == Mat([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    assert IDENTITY.to_matrix().is_identity()
    # T_1 = T(1, sqrt(7))
    assert T1.to_matrix().mat == translation_matrix(KNum(1), KNum(-1, 2))


def test_vertical_is_commutator():
    assert TTAU * T1 * TTAU.inverse() * T1.inverse() == TV


def test_heis_group_law():
    assert heis_mul(HeisPt(0, 0), HeisPt(TAU, Fraction(1, 2))) == HeisPt(TAU, Fraction(1, 2))
    assert heis_mul(HeisPt(1, 1), HeisPt(1, 1)) == HeisPt(2, 2)
    rng = random.Random(5)
    for _ in range(60):
        p, q, r = rand_pt(rng), rand_pt(rng), rand_pt(rng)
        assert heis_mul(heis_mul(p, q), r) == heis_mul(p, heis_mul(q, r))
        assert heis_mul(p, heis_inv(p)) == HeisPt(0, 0)
    # R conjugation flips the translation part, keeps the vertical part
    for _ in range(20):
        c = CuspElt(rng.randint(-3, 3), rng.randint(-3, 3), 0, rng.randint(-3, 3))
        conj = CuspElt.from_matrix(R.to_matrix() * c.to_matrix() * R.to_matrix())
        assert conj.w == -c.w
        assert conj.s0 == c.s0
        assert conj.eps == 0


def test_normal_form_roundtrip():
    rng = random.Random(9)
    for _ in range(80):
        c = CuspElt(rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(0, 1), rng.randint(-4, 4))
        assert CuspElt.from_matrix(c.to_matrix()) == c
        assert (c * c.inverse()) == IDENTITY
    # the normal form of a product matches the matrix product
    a, b = CuspElt(1, 2, 1, 0), CuspElt(-1, 0, 1, 3)
    assert (a * b).to_matrix() == a.to_matrix() * b.to_matrix()


def test_cusp_action_consistency():
    rng = random.Random(13)
    for _ in range(40):
        c = CuspElt(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(0, 1), rng.randint(-2, 2))
        p = rand_pt(rng)
        via_heis = c.act_heis(p)
        via_mat = HeisPt.from_horo(c.act_horo(p.to_horo()))
        assert via_heis == via_mat


def test_prism_membership():
    assert Prism.membership(TAU / 2, KNum(0)) == ("boundary", ("a=0", "s=0"))
    assert Prism.membership(KNum(Fraction(1, 4), Fraction(1, 4)), HeisPt(0, 1).ti)[0] == "interior"
    assert Prism.membership(TAU, HeisPt(0, Fraction(9, 7)).ti) == ("boundary", ("a=0", "a+b=1"))
    assert Prism.membership(KNum(2), KNum(0))[0] == "outside"
    assert Prism.membership(KNum(0), HeisPt(0, -1).ti)[0] == "outside"
    state, facets = Prism.membership(KNum(0), HeisPt(0, 2).ti)
    assert state == "boundary" and "s=2" in facets


def test_reduce_examples():
    c, p = reduce_to_prism(HeisPt(KNum(2, 3), 5))
    assert Prism.contains(p.z, p.ti)
    assert c.act_heis(HeisPt(KNum(2, 3), 5)) == p

    c, p = reduce_to_prism(HeisPt(TAU / 2, Fraction(1, 2)))
    assert c == IDENTITY and p == HeisPt(TAU / 2, Fraction(1, 2))

    c, p = reduce_to_prism(HeisPt(KNum(-1), -1))
    assert Prism.contains(p.z, p.ti)
    assert c.act_heis(HeisPt(KNum(-1), -1)) == p


def test_reduce_random_roundtrip():
    rng = random.Random(21)
    for _ in range(60):
        q = rand_pt(rng)
        c, p = reduce_to_prism(q)
        assert Prism.contains(p.z, p.ti)
        assert c.act_heis(q) == p
        # idempotence on the reduced representative
        c2, p2 = reduce_to_prism(p)
        assert p2 == p


def test_reduce_algebraic_point():
    # interior point with coordinates in K(zeta3), shifted out of the prism
    tw = zeta3_tower()
    h = HoroPoint.from_zsu(TAU / 2, Fraction(1, 2), 1)
    hl = HoroPoint(
        AlgNum.lift(tw, h.z), AlgNum.lift(tw, h.ti), AlgNum.lift(tw, KNum(1))
    )
    shifted = CuspElt(3, -2, 1, 1).act_horo(hl)
    c, red = reduce_to_prism(shifted)
    assert Prism.contains(red.z, red.ti)
    assert c.act_horo(shifted) == red
    # the reduced point is the original one (it was interior to P)
    assert (red.z - hl.z).is_zero() and (red.ti - hl.ti).is_zero()


def test_fm_feasible():
    # x <= 1, -x <= -2 infeasible; x <= 3, -x <= 0 feasible
    assert not fm_feasible([((1,), 1), ((-1,), -2)], 1)
    assert fm_feasible([((1,), 3), ((-1,), 0)], 1)
    assert fm_feasible([((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)], 2)


def test_cusp_overlaps():
    ov = enumerate_cusp_overlaps()
    assert IDENTITY in ov
    assert R in ov
    assert CuspElt(0, 1, 1, 0) in ov  # Ttau R
    # every overlap has an exact witness point
    for c in ov:
        assert overlap_witness(c) is not None
    # the torsion subset is exactly the five conjugates/products of R
    torsion = {c for c in ov if c.order() == 2}
    expected = {
        CuspElt.from_matrix(g.to_matrix())
        for g in (R, T1 * R * T1.inverse(), TTAU * R * TTAU.inverse(), TTAU * R, T1 * TTAU * R)
    }
    assert torsion == expected
    assert len(torsion) == 5


def test_cusp_overlaps_translate_range():
    # cross-check the translation parts in the alternate normal form
    # T1^j Ttau^k (T1 Ttau R)^eps Tv^l: -1 <= j, k, j+k <= 1 and -1 <= l <= 1
    flip = T1 * TTAU * R
    for c in enumerate_cusp_overlaps():
        j, k = c.m - c.eps, c.n - c.eps
        sign = -1 if c.eps else 1
        cons = list(_TRI)
        for (c1, c2), d in _TRI:
            cons.append(((c1 * sign, c2 * sign), d - Fraction(c1 * c.m + c2 * c.n)))
        degenerate = len(set(polygon_vertices(cons))) <= 2
        rest = (CuspElt(m=j) * CuspElt(n=k) * (flip if c.eps else IDENTITY)).inverse() * c
        assert (rest.m, rest.n, rest.eps) == (0, 0, 0)
        if not degenerate:
            assert -1 <= j <= 1 and -1 <= k <= 1 and -1 <= j + k <= 1
            assert -1 <= rest.l <= 1
        # triangles touching only in a vertex or edge can fall outside the
        # printed ranges (e.g. the half-turn R itself has j = k = -1)


def test_cusp_torsion():
    report = cusp_torsion_report()
    assert report["R"][0] == 2
    assert report["Ttau*R"][0] == 2
    assert report["T1*Ttau*R"][0] == 2
    # the T1 R family contains no torsion at all: its square is a nonzero
    # vertical translation for every vertical correction
    assert all(v is None for v in report["T1*R"].values())
    sq = (T1 * R) * (T1 * R)
    assert sq == TV

    classes = cusp_torsion_classes()
    assert len(classes) == 3
    assert all((g * g).is_identity() for g in classes)
