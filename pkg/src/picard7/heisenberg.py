"""The cusp stabilizer: Heisenberg translations, the half-turn R, and the prism P.

Elements of the stabilizer of q_inf are (up to sign) T(w, t0) R^eps, where
T(w, t0) is the Heisenberg translation by (w, t0) and R is the half-turn
z -> -z.  Every such element has the unique normal form
T_1^m Ttau^n R^eps T_v^l with T_1 = T(1, sqrt(7)), Ttau = T(tau, 0) and
T_v = T(0, 2 sqrt(7)) = [Ttau, T_1].

The prism P = D x [0, 2 sqrt(7)], D = hull{0, 1, tau}, is a fundamental
domain for this action on the boundary minus q_inf.  Boundary coordinates
are (z, t) with t = s*sqrt(7), s rational for K-rational points; as
everywhere we carry ti = i*t instead of t.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .ring import AlgNum, ISQRT7, KNum, ONE, TAU, ZERO, scalar
from .hermitian import GroupElt, HoroPoint, Mat, horo_coords, lift


def translation_matrix(w, ti) -> Mat:
    """The Heisenberg translation T(w, t) as a matrix (ti = i*t)."""
    w, ti = scalar(w), scalar(ti)
    return Mat(
        [
            [scalar(1), -w.conj(), (-(w.abs2()) + ti) / 2],
            [scalar(0), scalar(1), w],
            [scalar(0), scalar(0), scalar(1)],
        ]
    )


R_MAT = Mat([[1, 0, 0], [0, -1, 0], [0, 0, 1]])


class HeisPt:
    """A K-rational boundary point (z, t) with t = s*sqrt(7), s rational."""

    __slots__ = ("z", "s")

    def __init__(self, z, s):
        object.__setattr__(self, "z", KNum.coerce(z))
        object.__setattr__(self, "s", Fraction(s))

    def __setattr__(self, *args):
        raise AttributeError("HeisPt is immutable")

    def __eq__(self, other):
        if not isinstance(other, HeisPt):
            return NotImplemented
        return self.z == other.z and self.s == other.s

    def __hash__(self):
        return hash((self.z, self.s))

    def __repr__(self):
        return f"HeisPt({self.z}, {self.s}*sqrt7)"

    @property
    def ti(self) -> KNum:
        return ISQRT7 * self.s

    def to_horo(self) -> HoroPoint:
        return HoroPoint(self.z, self.ti, ZERO)

    @staticmethod
    def from_horo(h: HoroPoint) -> "HeisPt":
        assert h.is_rational()
        return HeisPt(h.z, h.s)


def heis_mul(p: HeisPt, q: HeisPt) -> HeisPt:
    """Group law (z,t)*(z',t') = (z+z', t+t'+2 Im(z conj(z')))."""
    cross = 2 * (p.z * q.z.conj()).im_sqrt7
    return HeisPt(p.z + q.z, p.s + q.s + cross)


def heis_inv(p: HeisPt) -> HeisPt:
    return HeisPt(-p.z, -p.s)


class CuspElt:
    """Normal form T_1^m Ttau^n R^eps T_v^l of a cusp-stabilizer element."""

    __slots__ = ("m", "n", "eps", "l")

    def __init__(self, m=0, n=0, eps=0, l=0):
        assert eps in (0, 1)
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "eps", int(eps))
        object.__setattr__(self, "l", int(l))

    def __setattr__(self, *args):
        raise AttributeError("CuspElt is immutable")

    def __eq__(self, other):
        if not isinstance(other, CuspElt):
            return NotImplemented
        return (self.m, self.n, self.eps, self.l) == (other.m, other.n, other.eps, other.l)

    def __hash__(self):
        return hash((self.m, self.n, self.eps, self.l))

    def __repr__(self):
        return f"CuspElt(m={self.m}, n={self.n}, eps={self.eps}, l={self.l})"

    def sort_key(self):
        return (self.m, self.n, self.eps, self.l)

    # -- translation part ---------------------------------------------

    @property
    def w(self) -> KNum:
        """z-part of the underlying T(w, t0) R^eps."""
        return KNum(self.m, self.n)

    @property
    def s0(self) -> Fraction:
        """t0 as a multiple of sqrt(7)."""
        return Fraction(self.m - self.m * self.n + 2 * self.l)

    def to_matrix(self) -> GroupElt:
        m = translation_matrix(self.w, ISQRT7 * self.s0)
        if self.eps:
            m = m * R_MAT
        return GroupElt(m, word=self.word(), check=False)

    def word(self):
        out = []
        if self.m:
            out.append(("T1", self.m))
        if self.n:
            out.append(("Ttau", self.n))
        if self.eps:
            out.append(("R", 1))
        if self.l:
            out.append(("Tv", self.l))
        return tuple(out)

    @staticmethod
    def from_matrix(g: GroupElt) -> "CuspElt":
        """Decompose an element stabilizing q_inf into normal form."""
        mat = g.mat
        if not g.fixes_q_inf():
            raise ValueError("element does not stabilize the point at infinity")
        if not mat.rows[2][2].is_one():
            mat = -mat
        assert mat.rows[2][2].is_one() and mat.rows[0][0].is_one()
        d = mat.rows[1][1]
        eps = 0 if d.is_one() else 1
        w = mat.rows[1][2]
        assert w.is_integral()
        m, n = int(w.a), int(w.b)
        # entry (1,3) is (-|w|^2 + i t0)/2 with i t0 = s0 * (2 tau - 1)
        s0 = mat.rows[0][2].b  # = s0 (tau-coordinate of the entry)
        two_l = s0 - (m - m * n)
        assert two_l % 2 == 0, "cusp element outside the integral lattice"
        c = CuspElt(m, n, eps, two_l // 2)
        assert c.to_matrix() == g, "normal-form round trip failed"
        return c

    def inverse(self) -> "CuspElt":
        return CuspElt.from_matrix(self.to_matrix().inverse())

    def __mul__(self, other):
        if not isinstance(other, CuspElt):
            return NotImplemented
        return CuspElt.from_matrix(self.to_matrix() * other.to_matrix())

    # -- boundary action ----------------------------------------------

    def act_heis(self, p: HeisPt) -> HeisPt:
        sign = -1 if self.eps else 1
        return heis_mul(HeisPt(self.w, self.s0), HeisPt(p.z * sign, p.s))

    def act_horo(self, h: HoroPoint) -> HoroPoint:
        return horo_coords(self.to_matrix().apply(lift(h)))

    def order(self):
        """Projective order: 1, 2, or None for infinite."""
        if self.eps == 0:
            return 1 if (self.m, self.n, self.l) == (0, 0, 0) else None
        # (T(w, t0) R)^2 = T(0, 2 t0)
        return 2 if self.s0 == 0 else None


IDENTITY = CuspElt()
T1 = CuspElt(m=1)
TTAU = CuspElt(n=1)
TV = CuspElt(l=1)
R = CuspElt(eps=1)


# ---------------------------------------------------------------------------
# prism coordinates and membership
# ---------------------------------------------------------------------------


def tau_coordinates(z):
    """Real scalars (a, b) with z = a + b*tau; exact for KNum and AlgNum."""
    if isinstance(z, KNum):
        return KNum(z.a), KNum(z.b)
    # b = (z - conj z)/(2 tau - 1), a = z - b*tau
    isq = AlgNum.lift(z.tower, ISQRT7)
    b = (z - z.conj()) / isq
    a = z - b * AlgNum.lift(z.tower, TAU)
    assert a.is_real() and b.is_real()
    return a, b


def s_coordinate(ti):
    """The real scalar s with t = s*sqrt(7), from ti = i*t."""
    if isinstance(ti, KNum):
        assert 2 * ti.a + ti.b == 0
        return KNum(ti.b / 2)
    s = ti / AlgNum.lift(ti.tower, ISQRT7)
    assert s.is_real()
    return s


class Prism:
    """The region P = D x [0, 2 sqrt(7)], D the triangle with vertices 0, 1, tau.

    membership() classifies a boundary point and lists the facets it lies on;
    facet names: "b=0" ([0,1] side), "a=0" ([0,tau] side), "a+b=1" ([1,tau]
    side), "s=0" (bottom), "s=2" (top).
    """

    FACETS = ("a=0", "b=0", "a+b=1", "s=0", "s=2")

    @staticmethod
    def membership(z, ti):
        a, b = tau_coordinates(z)
        s = s_coordinate(ti)
        one = scalar(1) if isinstance(a, KNum) else AlgNum.lift(a.tower, ONE)
        checks = {
            "a=0": a.real_sign(),
            "b=0": b.real_sign(),
            "a+b=1": (one - a - b).real_sign(),
            "s=0": s.real_sign(),
            "s=2": (2 - s).real_sign() if isinstance(s, KNum) else (one + one - s).real_sign(),
        }
        if any(v < 0 for v in checks.values()):
            return "outside", ()
        facets = tuple(k for k, v in checks.items() if v == 0)
        return ("boundary" if facets else "interior"), facets

    @staticmethod
    def contains(z, ti) -> bool:
        return Prism.membership(z, ti)[0] != "outside"


def reduce_to_prism(point):
    """Cusp element gamma and image with gamma(point)'s (z, t) in P.

    Accepts a HeisPt or a HoroPoint (the latter may have algebraic
    coordinates); returns (CuspElt, reduced point of the same kind).
    Ties at facets resolve toward the closed lower faces a, b, s >= 0.
    """
    is_heis = isinstance(point, HeisPt)
    h = point.to_horo() if is_heis else point
    total = IDENTITY
    for _ in range(4):
        a, b = tau_coordinates(h.z)
        k, n = a.floor_real(), b.floor_real()
        if k or n:
            step = CuspElt(m=-k) * CuspElt(n=-n)
            h = step.act_horo(h)
            total = step * total
            a, b = tau_coordinates(h.z)
        one = scalar(1) if isinstance(a, KNum) else AlgNum.lift(a.tower, ONE)
        if (one - a - b).real_sign() < 0:
            step = T1 * TTAU * R  # z -> 1 + tau - z
            h = step.act_horo(h)
            total = step * total
            continue
        break
    else:
        raise AssertionError("prism reduction did not stabilize")
    s = s_coordinate(h.ti)
    half = s / 2 if isinstance(s, KNum) else s / AlgNum.lift(s.tower, KNum(2))
    lshift = half.floor_real()
    if lshift:
        step = CuspElt(l=-lshift)
        h = step.act_horo(h)
        total = step * total
    assert Prism.contains(h.z, h.ti)
    return total, (HeisPt.from_horo(h) if is_heis else h)


# ---------------------------------------------------------------------------
# exact linear feasibility (Fourier-Motzkin over Q)
# ---------------------------------------------------------------------------


def fm_feasible(constraints, nvars):
    """Feasibility of {sum c_i x_i <= d}: exact Fourier-Motzkin elimination."""
    cons = [([Fraction(c) for c in cs], Fraction(d)) for cs, d in constraints]
    for var in range(nvars - 1, -1, -1):
        lower, upper, rest = [], [], []
        for cs, d in cons:
            c = cs[var]
            if c > 0:
                upper.append(([x / c for x in cs[:var]], d / c))
            elif c < 0:
                lower.append(([x / -c for x in cs[:var]], d / -c))
            else:
                rest.append((cs[:var], d))
        for lo_cs, lo_d in lower:
            for up_cs, up_d in upper:
                # -x <= lo_d - lo_cs . y  and  x <= up_d - up_cs . y
                rest.append(([l + u for l, u in zip(lo_cs, up_cs)], lo_d + up_d))
        cons = rest
    return all(d >= 0 for _, d in cons)


def polygon_vertices(constraints):
    """Vertices of a 2D polytope {c . x <= d} (exact; assumes boundedness)."""
    verts = []
    for (c1, d1), (c2, d2) in combinations(constraints, 2):
        det = c1[0] * c2[1] - c1[1] * c2[0]
        if det == 0:
            continue
        x = (d1 * c2[1] - d2 * c1[1]) / det
        y = (c1[0] * d2 - c2[0] * d1) / det
        if all(c[0] * x + c[1] * y <= d for c, d in constraints):
            verts.append((x, y))
    return verts


# ---------------------------------------------------------------------------
# cusp elements overlapping the prism
# ---------------------------------------------------------------------------

# triangle D in (a, b): a >= 0, b >= 0, a + b <= 1
_TRI = [((-1, 0), Fraction(0)), ((0, -1), Fraction(0)), ((1, 1), Fraction(1))]


def _cross_coeffs(w: KNum):
    """Affine-linear coefficients (c0, ca, cb) of 2 Im(w conj(z))/sqrt(7) in z = a + b*tau."""
    f = lambda z: 2 * (w * z.conj()).im_sqrt7
    c0 = f(KNum(0))
    ca = f(KNum(1)) - c0
    cb = f(TAU) - c0
    return c0, ca, cb


def enumerate_cusp_overlaps():
    """All cusp elements gamma with gamma(P) meeting P, by exact feasibility.

    The vertical range of each candidate is derived from the exact extrema
    of the t-shift over the overlap polygon, never hardcoded.
    """
    out = []
    for m in range(-2, 3):
        for n in range(-2, 3):
            for eps in (0, 1):
                sign = -1 if eps else 1
                # image constraints on (a, b): a' = m + sign*a, b' = n + sign*b in D
                cons2 = list(_TRI)
                for (c1, c2), d in _TRI:
                    cons2.append(
                        ((c1 * sign, c2 * sign), d - Fraction(c1 * m + c2 * n))
                    )
                if not fm_feasible(cons2, 2):
                    continue
                verts = polygon_vertices(cons2)
                assert verts
                # s' = s + base + 2l + sign * cross(a, b)
                w = KNum(m, n)
                base = Fraction(m - m * n)
                c0, ca, cb = _cross_coeffs(w)
                shifts = [base + sign * (c0 + ca * x + cb * y) for x, y in verts]
                # s, s' in [0,2] requires s' - s = shift + 2l in [-2, 2]
                lo = min(-2 - sh for sh in shifts)
                hi = max(2 - sh for sh in shifts)
                lmin = math.ceil(lo / 2)
                lmax = math.floor(hi / 2)
                for l in range(lmin, lmax + 1):
                    # full feasibility in (a, b, s)
                    cons3 = [((ca_, cb_, 0), d) for (ca_, cb_), d in cons2]
                    cons3 += [((0, 0, -1), Fraction(0)), ((0, 0, 1), Fraction(2))]
                    sh0 = base + 2 * l + sign * c0
                    sa, sb = sign * ca, sign * cb
                    # 0 <= s' <= 2 with s' = s + sh0 + sa*a + sb*b
                    cons3.append(((-sa, -sb, -1), Fraction(sh0)))
                    cons3.append(((sa, sb, 1), Fraction(2) - sh0))
                    if fm_feasible(cons3, 3):
                        out.append(CuspElt(m, n, eps, l))
    return sorted(out, key=CuspElt.sort_key)


def overlap_witness(c: CuspElt):
    """An exact point of c(P) in P (barycenter of overlap vertices), or None."""
    sign = -1 if c.eps else 1
    cons2 = list(_TRI)
    for (c1, c2), d in _TRI:
        cons2.append(((c1 * sign, c2 * sign), d - Fraction(c1 * c.m + c2 * c.n)))
    verts = polygon_vertices(cons2)
    if not verts:
        return None
    ax = sum(v[0] for v in verts) / len(verts)
    bx = sum(v[1] for v in verts) / len(verts)
    c0, ca, cb = _cross_coeffs(c.w)
    shift = c.s0 + sign * (c0 + ca * ax + cb * bx)
    # pick s in [0,2] with s + shift in [0,2]
    lo = max(Fraction(0), -shift)
    hi = min(Fraction(2), 2 - shift)
    if lo > hi:
        return None
    s = (lo + hi) / 2
    p = HeisPt(KNum(ax, bx), s)
    q = c.act_heis(p)
    if not (Prism.contains(p.z, p.ti) and Prism.contains(q.z, q.ti)):
        return None
    return p


# ---------------------------------------------------------------------------
# cusp torsion
# ---------------------------------------------------------------------------


def cusp_torsion_report():
    """Order of T(w, t0) R for each coset family w in {0, 1, tau, 1+tau}, l-sweep.

    (T(w, t0) R)^2 = T(0, 2 t0), so the element is an involution exactly when
    t0 = 0.  Exactly three of the four families contain torsion: the family
    of T_1 R has t0 an odd multiple of sqrt(7) for every vertical correction.
    """
    report = {}
    for name, (m, n) in (("R", (0, 0)), ("T1*R", (1, 0)), ("Ttau*R", (0, 1)), ("T1*Ttau*R", (1, 1))):
        orders = {}
        for l in range(-2, 3):
            orders[l] = CuspElt(m, n, 1, l).order()
        report[name] = orders
    return report


def cusp_torsion_classes():
    """The involutions of the cusp stabilizer, one per normal-form family."""
    out = []
    for m, n in ((0, 0), (1, 0), (0, 1), (1, 1)):
        c = CuspElt(m, n, 1, 0)
        # the vertical part is forced: only l with t0 = 0 can give torsion
        if c.s0 % 2 == 0:
            c = CuspElt(m, n, 1, -(c.s0 // 2))
        if c.order() == 2:
            out.append(c.to_matrix())
    return out
