from fractions import Fraction

import pytest

from picard7.ring import AlgNum, ISQRT7, KNum, TAU, TAU_BAR
from picard7.hermitian import GroupElt, Mat, ProjPoint, sq_norm
from picard7.heisenberg import CuspElt, R, T1, TTAU, TV
from picard7.ford import GENERATORS, cygan_dist4, sphere_of, sqrt_ub
from picard7.torsion import (
    ClosureError,
    FiniteGroup,
    build_cycle_graph,
    classify_elliptic,
    dedup_isolated,
    enumerate_tjk,
    enumerate_torsion,
    make_reflection,
    projective_order,
    reflection_conjugacy,
    reflection_polar,
    stabilizer,
)

V1 = ProjPoint((-TAU_BAR, KNum(0), KNum(1)))


def _lift_point_mat(p: ProjPoint, m: Mat) -> Mat:
    tw = p.coords[0].tower
    return Mat([[AlgNum.lift(tw, x) for x in row] for row in m.rows])


def test_projective_order():
    t1m, rm = T1.to_matrix(), R.to_matrix()
    assert projective_order(rm) == 2
    assert projective_order(GENERATORS[1]) == 2
    assert projective_order(GENERATORS[1] * rm * t1m) == 7
    assert projective_order(GENERATORS[2]) == 7
    assert projective_order(t1m) is None
    assert projective_order(GroupElt.identity()) == 1


def test_infinite_order_sweep():
    # elements reported infinite stay away from +/-Id far past the bound 18
    for g in (T1.to_matrix(), TV.to_matrix(), GENERATORS[2] * T1.to_matrix()):
        assert projective_order(g) is None
        p = g
        for _ in range(126):
            assert not p.is_identity()
            p = p * g


def test_make_reflection():
    assert make_reflection((KNum(0), KNum(1), KNum(0))).mat == R.to_matrix().mat
    assert make_reflection((KNum(1), KNum(0), KNum(1))) == GENERATORS[1]
    r1 = make_reflection((KNum(1), KNum(1), TAU_BAR))
    assert projective_order(r1) == 2
    polar, norm = reflection_polar(r1)
    assert polar == ProjPoint((KNum(1), KNum(1), TAU_BAR)) and norm == 2
    with pytest.raises(ValueError):
        make_reflection((KNum(1), KNum(1), KNum(1)))  # <v,v> = 3


def test_classify_reflections():
    assert classify_elliptic(R.to_matrix(), 2) == (
        "reflection", ProjPoint((KNum(0), KNum(1), KNum(0))), 1,
    )
    assert classify_elliptic(GENERATORS[1], 2) == (
        "reflection", ProjPoint((KNum(1), KNum(0), KNum(1))), 2,
    )
    with pytest.raises(ValueError):
        classify_elliptic(R.to_matrix(), 3)


def test_classify_isolated_rational():
    t1m, rm = T1.to_matrix(), R.to_matrix()
    kind, pt, norm = classify_elliptic(GENERATORS[1] * rm, 2)
    assert (kind, pt, norm) == ("isolated", ProjPoint((KNum(-1), KNum(0), KNum(1))), -2)
    g4 = GENERATORS[1] * t1m.inverse() * rm * t1m
    kind, pt, norm = classify_elliptic(g4, 4)
    assert (kind, pt, norm) == ("isolated", ProjPoint((KNum(-1), KNum(-1), KNum(1))), -1)
    # the stored point is fixed exactly
    assert pt.apply(g4.mat) == pt


def test_classify_isolated_algebraic():
    g7 = GENERATORS[1] * R.to_matrix() * T1.to_matrix()
    kind, pt, norm = classify_elliptic(g7, 7)
    assert kind == "isolated" and norm is None
    assert not pt.rational
    assert sq_norm(pt.coords).real_sign() < 0
    lifted = _lift_point_mat(pt, g7.mat)
    assert ProjPoint(lifted.apply(pt.coords)) == pt


def test_tjk_basics():
    t11 = enumerate_tjk(1, 1)
    assert CuspElt() in t11
    assert CuspElt(m=1) in t11  # yields the class of the v1 stabilizer element
    with pytest.raises(ValueError):
        enumerate_tjk(1, 2)


@pytest.mark.parametrize("j,k", [(1, 1), (9, 14)])
def test_tjk_superset_against_larger_box(j, k):
    # the distance filter over an enlarged box finds nothing new
    sj, sk = sphere_of(j), sphere_of(k)
    rsum = sqrt_ub(sqrt_ub(sj.r4)) + sqrt_ub(sqrt_ub(sk.r4))
    bound = rsum**4
    ck = sk.center.to_horo()
    brute = set()
    for m in range(-10, 11):
        for n in range(-7, 8):
            for eps in (0, 1):
                for l in range(-10, 11):
                    alpha = CuspElt(m, n, eps, l)
                    d4 = cygan_dist4(alpha.act_heis(sj.center).to_horo(), ck)
                    if d4.rat() <= bound:
                        brute.add(alpha)
    assert brute == set(enumerate_tjk(j, k))


def test_reflection_conjugacy_known_pairs():
    t1m, rm = T1.to_matrix(), R.to_matrix()
    i = GENERATORS[1]
    ttau_r = (TTAU * R).to_matrix()
    t1_ttau_r = (T1 * TTAU * R).to_matrix()
    # the conjugator (T1 R)^2 T1^-1 = Tv T1^-1 is a cusp element and cannot
    # move Ttau R out of the cusp stabilizer; (T1 I)^2 T1^-1 does the job
    c1 = (t1m * i) ** 2 * t1m.inverse()
    assert c1 * ttau_r * c1.inverse() == i
    c2 = t1m * i * t1m.inverse() * i.inverse()
    assert c2 * ttau_r * c2.inverse() == t1_ttau_r
    # conjugating R by T1 I T1^-1 produces the reflection with the diagonal
    # entries i*sqrt(7), -1, -i*sqrt(7)
    c3 = t1m * i * t1m.inverse()
    lhs = GroupElt(Mat([[ISQRT7, 0, 4], [0, -1, 0], [2, 0, -ISQRT7]]))
    assert c3 * rm * c3.inverse() == lhs
    # the search finds witnesses of its own
    for a, b in ((ttau_r, i), (ttau_r, t1_ttau_r), (i, t1_ttau_r)):
        d = reflection_conjugacy(a, b)
        assert d is not None and d * a * d.inverse() == b
    # R vs I differ in polar norm: rejected without search
    assert reflection_conjugacy(rm, i) is None
    with pytest.raises(ValueError):
        reflection_conjugacy(rm, t1m * i)  # second argument not a reflection


def test_finite_group_closure():
    fg = FiniteGroup([R.to_matrix()])
    assert (fg.linear_order, fg.projective_order, fg.scalar_order) == (4, 2, 2)
    with pytest.raises(ClosureError):
        FiniteGroup([T1.to_matrix()], cap=50)


def test_v1_cycle_graph_and_stabilizer():
    graph = build_cycle_graph([V1])
    # the component is the triangle v1, v2 = TtauR(v1), v3 = T1R(v1); v3 lies
    # on the top face s = 2, so its Tv-translate on the bottom face shows up
    # as a fourth vertex of the closed prism
    assert len(graph.components()) == 1
    pts = {graph.vertices[i] for i in graph.components()[0]}
    v2 = ProjPoint((TTAU * R).to_matrix().apply(V1.coords))
    v3 = ProjPoint((T1 * R).to_matrix().apply(V1.coords))
    v3b = ProjPoint(TV.inverse().to_matrix().apply(v3.coords))
    assert pts == {V1, v2, v3, v3b}
    stab = stabilizer(V1, graph)
    assert stab.linear_order == 16
    assert stab.projective_order == 8
    assert stab.scalar_order == 2
    assert sorted(n for _, n in stab.reflections) == [1, 1, 2, 2]
    assert GroupElt(R.to_matrix().mat, check=False) in stab.elements
    assert GENERATORS[6] in stab.elements


def _classes_by(kind, order=None):
    return [
        c for c in enumerate_torsion()
        if c.kind == kind and (order is None or c.proj_order == order)
    ]


def test_reflection_classes():
    refl = _classes_by("reflection")
    assert len(refl) == 2
    assert sorted(c.polar_norm for c in refl) == [1, 2]
    for c in refl:
        assert c.proj_order == 2
        assert reflection_polar(c.rep)[0] == c.polar


def test_isolated_class_counts():
    assert [len(_classes_by("isolated", n)) for n in (2, 3, 4, 6, 7)] == [3, 3, 2, 1, 1]


def test_isolated_class_invariants():
    rows = {
        (c.proj_order, c.fp_norm, c.stab_order, c.one_lines, c.two_lines,
         tuple(c.two_line_orbits))
        for c in _classes_by("isolated")
    }
    assert rows == {
        (2, -1, 8, 2, 2, (2,)),
        (2, -2, 4, 1, 1, (1,)),
        (2, -2, 8, 0, 4, (2, 2)),
        (3, -3, 6, 0, 3, (3,)),
        (3, None, 6, 1, 0, ()),
        (4, -1, 8, 2, 2, (2,)),
        (4, -2, 8, 0, 4, (2, 2)),
        (6, None, 6, 1, 0, ()),
        (7, None, 7, 0, 0, ()),
    }
    # the order-4 norm -2 class has four 2-lines in two stabilizer orbits
    c4 = next(c for c in _classes_by("isolated", 4) if c.fp_norm == -2)
    assert c4.two_line_orbits == [2, 2]


def test_isolated_reps_fix_their_points():
    for c in _classes_by("isolated"):
        assert projective_order(c.rep) == c.proj_order
        if c.fixed.rational:
            assert c.fixed.apply(c.rep.mat) == c.fixed
        else:
            lifted = _lift_point_mat(c.fixed, c.rep.mat)
            assert ProjPoint(lifted.apply(c.fixed.coords)) == c.fixed


def test_stabilizer_linear_orders():
    c2 = next(c for c in _classes_by("isolated", 2) if c.fp_norm == -1)
    assert (c2.stab_linear_order, c2.stab_order) == (16, 8)
    c6 = _classes_by("isolated", 6)[0]
    assert (c6.stab_linear_order, c6.stab_order) == (12, 6)


def test_order6_vertex_five_loops():
    c6 = _classes_by("isolated", 6)[0]
    graph = build_cycle_graph([c6.fixed], extra_loops={c6.fixed: [c6.rep]})
    assert len(graph.vertices) == 1
    # five Ford side-pairing loops; the element itself coincides with one of
    # the side-pairing composites, so it adds no sixth edge
    assert len(graph.edges) == 5
    assert all(e.src == e.dst == 0 for e in graph.edges)
    stab = stabilizer(c6.fixed, graph)
    assert (stab.linear_order, stab.projective_order) == (12, 6)
    assert [n for _, n in stab.reflections] == [1]
    # the order-3 class with algebraic fixed point shares this vertex
    c3 = next(c for c in _classes_by("isolated", 3) if c.fp_norm is None)
    assert c3.fixed == c6.fixed


def test_order7_class_has_no_lines():
    c7 = _classes_by("isolated", 7)[0]
    assert (c7.one_lines, c7.two_lines) == (0, 0)
    assert c7.stab_order == 7


def test_dedup_merges_conjugate_copies():
    g = GENERATORS[1] * R.to_matrix()  # isolated order 2 at (-1, 0, 1)
    kind, fp, _ = classify_elliptic(g, 2)
    assert kind == "isolated"
    delta = (T1 * TTAU).to_matrix() * GENERATORS[6]
    g2 = delta * g * delta.inverse()
    fp2 = ProjPoint(delta.apply(fp.coords))
    classes, graph, _ = dedup_isolated([(g, 2, fp), (g2, 2, fp2)])
    assert len(classes) == 1


def test_dedup_merges_powers():
    # an order-4 element and its inverse fix the same point and merge into
    # one class through a power-conjugacy witness
    t1m, rm = T1.to_matrix(), R.to_matrix()
    g4 = GENERATORS[1] * t1m.inverse() * rm * t1m
    _, fp, _ = classify_elliptic(g4, 4)
    classes, _, _ = dedup_isolated([(g4, 4, fp), (g4.inverse(), 4, fp)])
    assert len(classes) == 1
    assert len(classes[0].members) == 2


def test_order3_norm3_classes_stay_distinct():
    pair = [c for c in _classes_by("isolated", 3) if c.fp_norm == -3]
    assert len(pair) == 2
    assert pair[0].fixed != pair[1].fixed
