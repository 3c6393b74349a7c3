"""Ford domain machinery: isometric spheres of the 14 pairing matrices.

The Ford domain F is the set of x with N(<x, q_inf>) <= N(<x, g q_inf>)
for every g not stabilizing q_inf; combined with the cone C_P over the
prism this gives the fundamental domain Omega = F cap C_P.  Membership is
always decided by that exact norm comparison; the Cygan-sphere radius
r^4 = 4 / N(a31) is carried only for the candidate enumeration estimates.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .ring import AlgNum, ISQRT7, KNum, ONE, TAU, TAU_BAR, ZERO, real_cmp, scalar
from .hermitian import (
    GroupElt,
    HoroPoint,
    Mat,
    ProjPoint,
    herm_inner,
    horo_coords,
    lift,
)
from .heisenberg import (
    CuspElt,
    HeisPt,
    Prism,
    reduce_to_prism,
    tau_coordinates,
    s_coordinate,
)


# ---------------------------------------------------------------------------
# the fourteen pairing matrices
# ---------------------------------------------------------------------------


def _g(rows, name):
    return GroupElt(Mat(rows), word=((name, 1),))


def _build_generators():
    a1 = _g([[0, 0, 1], [0, -1, 0], [1, 0, 0]], "A1")
    a2 = _g(
        [
            [KNum(2), -TAU, KNum(1, -3)],
            [TAU_BAR, ZERO, KNum(-2) - TAU],
            [-TAU, KNum(-1), KNum(-3) + TAU],
        ],
        "A2",
    )
    a6 = _g([[ISQRT7, 0, 4], [0, 1, 0], [2, 0, -ISQRT7]], "A6")
    a7 = _g([[-TAU_BAR, 1, 1], [TAU, 0, 1], [2, TAU_BAR, -TAU]], "A7")
    a8 = _g(
        [
            [KNum(1), KNum(2, -1), KNum(-2)],
            [KNum(-1, -1), KNum(-3), KNum(1, 1)],
            [KNum(-2), KNum(-2, 1), KNum(1)],
        ],
        "A8",
    )
    a9 = _g([[-1, 0, ISQRT7], [0, 1, 0], [ISQRT7, 0, 6]], "A9")
    a10 = _g([[-2, 0, ISQRT7], [0, 1, 0], [ISQRT7, 0, 3]], "A10")
    a12 = _g([[-4, 0, ISQRT7 * 3], [0, 1, 0], [ISQRT7, 0, 5]], "A12")

    def inv(g, name):
        return GroupElt(g.mat.inverse(), word=((name, 1),), check=False)

    table = {
        1: a1,
        2: a2,
        3: inv(a2, "A3"),
        4: GroupElt((a2.inverse() * a2.inverse()).mat, word=(("A4", 1),), check=False),
        6: a6,
        7: a7,
        8: a8,
        9: a9,
        10: a10,
        11: inv(a10, "A11"),
        12: a12,
        13: inv(a12, "A13"),
        14: inv(a9, "A14"),
    }
    table[5] = GroupElt(table[4].mat.inverse(), word=(("A5", 1),), check=False)
    return table


GENERATORS = _build_generators()

#: indices j, k with A_j A_k = +/- Id (used to pair candidate sets)
INVERSE_PAIRS = {
    j: next(k for k in GENERATORS if (GENERATORS[j] * GENERATORS[k]).is_identity())
    for j in GENERATORS
}


def generator_depths() -> dict:
    """Depth of each pairing matrix, read off its first column."""
    from .hermitian import depth

    return {j: int(depth(ProjPoint(g.first_column()))) for j, g in GENERATORS.items()}


class IsomSphere:
    """The isometric sphere of g: Cygan sphere about g(inf) with r^4 = 4/N(a31)."""

    __slots__ = ("elt", "center", "a31norm", "r4")

    def __init__(self, elt: GroupElt):
        a31 = elt.mat.rows[2][0]
        if a31.is_zero():
            raise ValueError("element stabilizes the point at infinity")
        h = horo_coords(elt.first_column())
        assert h.u.is_zero()
        object.__setattr__(self, "elt", elt)
        object.__setattr__(self, "center", HeisPt.from_horo(h))
        object.__setattr__(self, "a31norm", int(a31.norm()))
        object.__setattr__(self, "r4", Fraction(4, int(a31.norm())))

    def __setattr__(self, *args):
        raise AttributeError("IsomSphere is immutable")

    def __repr__(self):
        return f"IsomSphere(center={self.center!r}, r4={self.r4})"


def sphere_of(j: int) -> IsomSphere:
    return IsomSphere(GENERATORS[j])


# ---------------------------------------------------------------------------
# Cygan distance and sphere / Ford side tests
# ---------------------------------------------------------------------------


def cygan_dist4(p: HoroPoint, q: HoroPoint):
    """Fourth power of the extended Cygan distance, exact."""
    dz = p.z - q.z
    du = p.u - q.u
    if du.real_sign() < 0:
        du = -du
    first = dz.abs2() + du
    # i*(t - t' + 2 Im(z conj(z'))) = ti - ti' + z conj(z') - conj(z) z'
    cross = p.z * q.z.conj()
    qq = p.ti - q.ti + cross - cross.conj()
    return first * first + qq.abs2()


def _side_from_sign(sign: int) -> str:
    return "inside" if sign > 0 else ("boundary" if sign == 0 else "outside")


def ford_side(x, g: GroupElt) -> str:
    """Side of x w.r.t. the Ford inequality for g: N(<x,q_inf>) vs N(<x, g q_inf>).

    "inside" means the strict Ford inequality holds (x outside the open
    Cygan ball of g); x is a lifted vector or a ProjPoint.
    """
    if g.fixes_q_inf():
        raise ValueError("Ford side undefined for cusp elements")
    v = x.coords if isinstance(x, ProjPoint) else tuple(scalar(c) for c in x)
    own = v[2].abs2()
    other = herm_inner(v, g.first_column()).abs2()
    return _side_from_sign(real_cmp(other, own))


def sphere_membership(h: HoroPoint, sph: IsomSphere) -> str:
    """Same trichotomy as ford_side, via horospherical coordinates:
    compares the extended Cygan distance to the center against the radius."""
    d4 = cygan_dist4(h, sph.center.to_horo())
    return _side_from_sign(real_cmp(d4, sph.r4))


# ---------------------------------------------------------------------------
# conservative rational square-root bounds
# ---------------------------------------------------------------------------

_SQRT_DEN = 2**16


def sqrt_ub(q: Fraction) -> Fraction:
    """A rational upper bound for sqrt(q), q >= 0."""
    q = Fraction(q)
    assert q >= 0
    n = isqrt((q * _SQRT_DEN * _SQRT_DEN).__ceil__()) + 1
    ub = Fraction(n, _SQRT_DEN)
    assert ub * ub >= q
    return ub


def sqrt_lb(q: Fraction) -> Fraction:
    """A rational lower bound for sqrt(q), q >= 0."""
    q = Fraction(q)
    assert q >= 0
    n = isqrt((q * _SQRT_DEN * _SQRT_DEN).__floor__())
    lb = Fraction(n, _SQRT_DEN)
    assert lb * lb <= q
    return lb


# ---------------------------------------------------------------------------
# distance from a point to the triangle D (squared, exact)
# ---------------------------------------------------------------------------

_D_VERTS = (KNum(0), KNum(1), TAU)


def _seg_dist2(p: KNum, v0: KNum, v1: KNum) -> Fraction:
    """Squared Euclidean distance from p to the segment [v0, v1], rational."""
    d = v1 - v0
    w = p - v0
    denom = d.norm()
    t = (w * d.conj()).re / denom  # projection parameter, rational
    if t <= 0:
        return w.norm()
    if t >= 1:
        return (p - v1).norm()
    return w.norm() - t * t * denom


def dist2_to_triangle(p: KNum) -> Fraction:
    """Squared distance from p to D = hull{0, 1, tau} (0 if inside)."""
    a, b = Fraction(p.a), Fraction(p.b)
    if a >= 0 and b >= 0 and a + b <= 1:
        return Fraction(0)
    return min(
        _seg_dist2(p, _D_VERTS[0], _D_VERTS[1]),
        _seg_dist2(p, _D_VERTS[0], _D_VERTS[2]),
        _seg_dist2(p, _D_VERTS[1], _D_VERTS[2]),
    )


# ---------------------------------------------------------------------------
# candidate cusp translates: the sets E_j
# ---------------------------------------------------------------------------

_E_CACHE = {}
_MN_BOX = 5


def enumerate_cone_translates(j: int):
    """Finite superset of {alpha in the cusp group : alpha(I(A_j)) meets C_P}.

    A translate survives when (a) the disk of radius r about the translated
    center meets the triangle D (exact squared-distance test), and (b) the
    t-window of the translated sphere meets [0, 2 sqrt(7)] (conservative
    rational bounds).
    """
    if j in _E_CACHE:
        return _E_CACHE[j]
    sph = sphere_of(j)
    c = sph.center
    r4 = sph.r4
    r2_ub = sqrt_ub(r4)
    r_ub = sqrt_ub(r2_ub)
    out = []
    hit_box_edge = False
    for m in range(-_MN_BOX, _MN_BOX + 1):
        for n in range(-_MN_BOX, _MN_BOX + 1):
            for eps in (0, 1):
                shifted = CuspElt(m, n, eps, 0).act_heis(c)
                if dist2_to_triangle(shifted.z) * dist2_to_triangle(shifted.z) > r4:
                    continue
                if abs(m) == _MN_BOX or abs(n) == _MN_BOX:
                    hit_box_edge = True
                # |t - d'| <= r^2 + 2 r |z| with z over the disk; bound |z| by
                # |c'| + r where c' is the translated center
                zmax = sqrt_ub(Fraction(shifted.z.norm())) + r_ub
                halfwidth_s = (r2_ub + 2 * r_ub * zmax) / sqrt_lb(Fraction(7))
                # d' = (s0 + 2 l) sqrt(7): need s0 + 2l in [-hw, 2 + hw]
                s0 = shifted.s
                lmin = ((-halfwidth_s - s0) / 2).__ceil__()
                lmax = ((2 + halfwidth_s - s0) / 2).__floor__()
                for l in range(lmin, lmax + 1):
                    out.append(CuspElt(m, n, eps, l))
    assert not hit_box_edge, "candidate box too small"
    out = sorted(out, key=CuspElt.sort_key)
    _E_CACHE[j] = out
    return out


_CAND_CACHE = {}


def candidate_spheres(j: int):
    """Cached (alpha, alpha(A_j(inf))) pairs over the translate superset of j."""
    if j not in _CAND_CACHE:
        col = GENERATORS[j].first_column()
        _CAND_CACHE[j] = [
            (alpha, alpha.to_matrix().apply(col)) for alpha in enumerate_cone_translates(j)
        ]
    return _CAND_CACHE[j]


def spheres_containing(x):
    """All translated spheres alpha(I(A_j)) whose closed Cygan ball contains x.

    x is a HoroPoint or ProjPoint (negative or null, not q_inf).  Returns a
    list of (alpha: CuspElt, j, flag) with flag "boundary" or "interior"
    (of the ball), valid for x itself (the internal prism reduction is
    undone in the reported alpha).
    """
    if isinstance(x, ProjPoint):
        h = horo_coords(x.coords)
    else:
        h = x
    shift, h_red = reduce_to_prism(h)
    shift_inv = shift.inverse()
    v = tuple(scalar(c) for c in lift(h_red))
    own = v[2].abs2()
    # a translated sphere depends only on its center and radius (the coset
    # of alpha*A_j modulo right cusp multiplication), so dedup on those
    found = {}
    for j in sorted(GENERATORS):
        sph = sphere_of(j)
        for alpha, col in candidate_spheres(j):
            sign = real_cmp(herm_inner(v, col).abs2(), own)
            if sign > 0:
                continue
            center = alpha.act_heis(sph.center)
            key = (sph.r4, center)
            entry = (j, alpha.sort_key())
            if key not in found or entry < found[key][:2]:
                found[key] = (j, alpha.sort_key(), alpha, sign)
    return [
        (shift_inv * alpha, j, "boundary" if sign == 0 else "interior")
        for (j, _, alpha, sign) in sorted(found.values())
    ]


# ---------------------------------------------------------------------------
# reduction into Omega
# ---------------------------------------------------------------------------


class ReductionError(Exception):
    """Raised when domain reduction exceeds its iteration guard."""


DEFAULT_MAX_ITERS = 1000


def reduce_to_domain(x, max_iters: int = DEFAULT_MAX_ITERS):
    """Group element g and point g(x) in Omega (Ford domain cap cone over P).

    x is a negative ProjPoint or an interior HoroPoint; the return type
    matches.  Deterministic: among violated Ford inequalities, the one
    maximizing the exact violation ratio wins, ties broken by (j, cusp
    normal form).
    """
    as_proj = isinstance(x, ProjPoint)
    v = x.coords if as_proj else lift(x)
    assert herm_inner(v, v).real_sign() < 0, "reduction needs an interior point"
    total = GroupElt.identity()
    for _ in range(max_iters):
        h = horo_coords(v)
        shift, h = reduce_to_prism(h)
        v = lift(h)
        total = shift.to_matrix() * total
        own = scalar(v[2]).abs2()
        best = None
        for j in sorted(GENERATORS):
            for alpha, col in candidate_spheres(j):
                other = herm_inner(v, col).abs2()
                if real_cmp(other, own) >= 0:
                    continue
                if best is not None:
                    # the violation ratio own/other is largest when `other`
                    # is smallest (own is fixed within this sweep)
                    cmp = real_cmp(best[0], other)
                    if cmp < 0 or (cmp == 0 and (j, alpha.sort_key()) >= best[1]):
                        continue
                best = (other, (j, alpha.sort_key()), alpha)
        if best is None:
            return total, (ProjPoint(v) if as_proj else horo_coords(v))
        g = best[2].to_matrix() * GENERATORS[best[1][0]]
        gi = g.inverse()
        v = gi.apply(v)
        # the Ford quantity strictly decreases at each step
        assert real_cmp(scalar(v[2]).abs2(), own) < 0
        total = gi * total
    raise ReductionError(f"no Omega representative found in {max_iters} steps")


def in_omega(x) -> bool:
    """Exact membership of a point in Omega (closed)."""
    v = x.coords if isinstance(x, ProjPoint) else lift(x)
    h = horo_coords(v)
    if not Prism.contains(h.z, h.ti):
        return False
    v = tuple(scalar(c) for c in v)
    own = v[2].abs2()
    for j in sorted(GENERATORS):
        for _, col in candidate_spheres(j):
            if real_cmp(herm_inner(v, col).abs2(), own) < 0:
                return False
    return True
