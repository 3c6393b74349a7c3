"""The Hermitian form J, matrices over K, projective points and horospherical coordinates.

Conventions: <v,w> = w* J v with J the antidiagonal form
[[0,0,1],[0,1,0],[1,0,0]].  The point at infinity is q_inf = (1,0,0);
boundary points (z,t) lift to ((-|z|^2+it)/2, z, 1), interior points
(z,t,u) to ((-|z|^2+it-u)/2, z, 1).

The imaginary coordinate t is never stored as a real number: we carry
ti = i*t, which lies in the coefficient field (for K-rational points
ti = s*(2*tau-1) with t = s*sqrt(7), s rational).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .ring import (
    AlgNum,
    KNum,
    ONE,
    ZERO,
    ISQRT7,
    TAU,
    format_knum,
    o_gcd_many,
    parse_knum,
    real_cmp,
    scalar,
    sign_normalize,
)


def conj_sc(x):
    return scalar(x).conj()


def herm_inner(v, w):
    """<v,w> = w* J v = conj(w1) v3 + conj(w2) v2 + conj(w3) v1."""
    v1, v2, v3 = (scalar(x) for x in v)
    w1, w2, w3 = (scalar(x) for x in w)
    return w1.conj() * v3 + w2.conj() * v2 + w3.conj() * v1


def sq_norm(v):
    """<v,v>, a real scalar."""
    return herm_inner(v, v)


Q_INF = (ONE, ZERO, ZERO)


class Mat:
    """A 3x3 matrix over K (or an AlgNum tower), immutable."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(scalar(x) for x in r) for r in rows)
        assert len(rows) == 3 and all(len(r) == 3 for r in rows)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *args):
        raise AttributeError("Mat is immutable")

    @staticmethod
    def identity() -> "Mat":
        return Mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @staticmethod
    def diag(a, b, c) -> "Mat":
        return Mat([[a, 0, 0], [0, b, 0], [0, 0, c]])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Mat(" + ", ".join(str(list(map(str, r))) for r in self.rows) + ")"

    def __mul__(self, other):
        if isinstance(other, Mat):
            return Mat(
                [
                    [
                        sum((self.rows[i][k] * other.rows[k][j] for k in range(3)), start=scalar(0))
                        for j in range(3)
                    ]
                    for i in range(3)
                ]
            )
        return NotImplemented

    def __neg__(self):
        return Mat([[-x for x in r] for r in self.rows])

    def apply(self, v):
        """Matrix times column vector."""
        v = tuple(scalar(x) for x in v)
        return tuple(
            sum((self.rows[i][k] * v[k] for k in range(3)), start=scalar(0)) for i in range(3)
        )

    def scale(self, c):
        c = scalar(c)
        return Mat([[x * c for x in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return Mat([[self.rows[j][i] for j in range(3)] for i in range(3)])

    def conj_transpose(self) -> "Mat":
        return Mat([[self.rows[j][i].conj() for j in range(3)] for i in range(3)])

    def trace(self):
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def det(self):
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def adjugate(self) -> "Mat":
        r = self.rows

        def c(i, j):
            rows = [r[k] for k in range(3) if k != i]
            cols = [(rows[0][l], rows[1][l]) for l in range(3) if l != j]
            minor = cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]
            return minor if (i + j) % 2 == 0 else -minor

        return Mat([[c(j, i) for j in range(3)] for i in range(3)])

    def inverse(self) -> "Mat":
        d = self.det()
        if scalar(d).is_zero():
            raise ZeroDivisionError("singular matrix")
        return self.adjugate().scale(scalar(1) / d)

    def charpoly(self):
        """Coefficients of det(x*I - M), low degree first: [c0, c1, c2, 1]."""
        t = self.trace()
        d = self.det()
        r = self.rows
        m2 = (
            (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            + (r[0][0] * r[2][2] - r[0][2] * r[2][0])
            + (r[0][0] * r[1][1] - r[0][1] * r[1][0])
        )
        return [-d, m2, -t, scalar(1)]

    def is_scalar(self) -> bool:
        r = self.rows
        off = all(r[i][j].is_zero() for i in range(3) for j in range(3) if i != j)
        return off and (r[0][0] - r[1][1]).is_zero() and (r[0][0] - r[2][2]).is_zero()

    def is_identity(self) -> bool:
        return self.is_scalar() and scalar(self.rows[0][0]).is_one()

    def is_pm_identity(self) -> bool:
        return self.is_scalar() and (self.rows[0][0].is_one() or (-self.rows[0][0]).is_one())


J = Mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def is_in_gamma(m: Mat) -> bool:
    """Membership in U(J, O_7): M* J M = J with all entries integral."""
    if not all(isinstance(x, KNum) and x.is_integral() for r in m.rows for x in r):
        return False
    return (m.conj_transpose() * J * m) == J


def rank(m: Mat) -> int:
    """Rank over the coefficient field (exact Gaussian elimination)."""
    rows = [list(r) for r in m.rows]
    rk = 0
    for col in range(3):
        piv = None
        for i in range(rk, 3):
            if not rows[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = scalar(1) / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for i in range(3):
            if i != rk and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def kernel_vector(m: Mat):
    """A nonzero kernel vector of a rank-2 matrix (exact), or None if rank is 3."""
    rows = [list(r) for r in m.rows]
    pivots = []
    rk = 0
    for col in range(3):
        piv = None
        for i in range(rk, 3):
            if not rows[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = scalar(1) / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for i in range(3):
            if i != rk and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        pivots.append(col)
        rk += 1
    if rk == 3:
        return None
    free = [c for c in range(3) if c not in pivots][0]
    v = [scalar(0)] * 3
    v[free] = scalar(1)
    for r, col in zip(range(rk), pivots):
        v[col] = -rows[r][free]
    return tuple(v)


def eigenspace_basis(m: Mat, lam):
    """Basis of ker(M - lam*I) (list of vectors, exact)."""
    shifted = Mat(
        [
            [m.rows[i][j] - (scalar(lam) if i == j else scalar(0)) for j in range(3)]
            for i in range(3)
        ]
    )
    rows = [list(r) for r in shifted.rows]
    pivots = []
    rk = 0
    for col in range(3):
        piv = None
        for i in range(rk, 3):
            if not rows[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = scalar(1) / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for i in range(3):
            if i != rk and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        pivots.append(col)
        rk += 1
    basis = []
    for free in (c for c in range(3) if c not in pivots):
        v = [scalar(0)] * 3
        v[free] = scalar(1)
        for r, col in zip(range(rk), pivots):
            v[col] = -rows[r][free]
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------


def primitive_rep(v):
    """Canonical primitive O_7^3 representative of a K-rational projective point."""
    v = tuple(KNum.coerce(x) for x in v)
    if all(x.is_zero() for x in v):
        raise ValueError("zero vector has no projective class")
    den = 1
    for x in v:
        den = _lcm(den, _lcm(x.a.denominator, x.b.denominator))
    w = tuple(x * den for x in v)
    g = o_gcd_many(w)
    w = tuple(x / g for x in w)
    assert all(x.is_integral() for x in w)
    lead = next(x for x in w if not x.is_zero())
    s = sign_normalize(lead)
    return tuple(x * s for x in w)


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


class ProjPoint:
    """A point of P^2(C): canonical primitive integral rep when K-rational,
    else a normalized tuple of AlgNum coordinates."""

    __slots__ = ("coords", "rational")

    def __init__(self, v):
        v = tuple(scalar(x) for x in v)
        if all(isinstance(x, KNum) for x in v):
            coords = primitive_rep(v)
            rational = True
        else:
            tower = next(x.tower for x in v if isinstance(x, AlgNum))
            v = tuple(x if isinstance(x, AlgNum) else AlgNum.lift(tower, x) for x in v)
            if all(x.in_k() for x in v):
                coords = primitive_rep(tuple(x.k_part() for x in v))
                rational = True
            else:
                lead = next(x for x in v if not x.is_zero())
                inv = lead.inverse()
                coords = tuple(x * inv for x in v)
                rational = False
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "rational", rational)

    def __setattr__(self, *args):
        raise AttributeError("ProjPoint is immutable")

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.rational != other.rational:
            return False
        if self.rational:
            return self.coords == other.coords
        if self.coords[0].tower != other.coords[0].tower:
            # distinct nontrivial towers: compare only if both sides are
            # secretly K-rational (handled above), otherwise treat as distinct
            return False
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ProjPoint({', '.join(str(c) for c in self.coords)})"

    def sq_norm(self):
        return sq_norm(self.coords)

    def sq_norm_sign(self) -> int:
        return self.sq_norm().real_sign()

    def is_null(self) -> bool:
        return self.sq_norm_sign() == 0

    def is_negative(self) -> bool:
        return self.sq_norm_sign() < 0

    def apply(self, m: Mat) -> "ProjPoint":
        return ProjPoint(m.apply(self.coords))


def depth(p: ProjPoint) -> Fraction:
    """Depth |v3|^2 of a K-rational null point (undefined at q_inf)."""
    if not p.rational:
        raise ValueError("depth is defined for K-rational points only")
    if not p.is_null():
        raise ValueError("depth is defined for null points only")
    v3 = p.coords[2]
    if v3.is_zero():
        raise ValueError("depth undefined at the point at infinity")
    return v3.norm()


def elements_of_norm(n: int):
    """All integral field elements of norm n, in lexicographic order."""
    from math import isqrt

    out = []
    # a^2 + ab + 2b^2 = n  <=>  (2a+b)^2 + 7b^2 = 4n
    bmax = isqrt(4 * n // 7)
    for b in range(-bmax, bmax + 1):
        rest = 4 * n - 7 * b * b
        s = isqrt(rest)
        if s * s != rest:
            continue
        for t in sorted({s, -s}):
            if (t - b) % 2 == 0:
                out.append(KNum((t - b) // 2, b))
    return sorted(out, key=lambda x: (x.a, x.b))


def _ext_gcd(a: int, b: int):
    """(g, x, y) with a x + b y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def depth_witness(d: int, box: int = 6):
    """A primitive integral null vector whose third coordinate has norm d.

    For a fixed third coordinate the trace pairing with integral first
    coordinates realizes exactly the multiples of g = gcd(tr v3, tr tau*v3),
    so a middle coordinate v2 completes to a null vector iff g divides N(v2);
    the first coordinate then comes from the extended Euclidean algorithm.
    Middle coordinates run over a box of the given radius.  A returned point
    is an exact certificate that depth d occurs; None means no certificate
    was found within the box.
    """
    mids = sorted(
        (KNum(a, b) for a in range(-box, box + 1) for b in range(-box, box + 1)),
        key=lambda x: (x.norm(), x.a, x.b),
    )
    for v3 in elements_of_norm(d):
        t0, t1 = int(v3.trace()), int((TAU * v3).trace())
        g, x, y = _ext_gcd(t0, t1)
        for v2 in mids:
            n2 = int(v2.norm())
            if n2 % g:
                continue
            q = -n2 // g
            # the solutions form a coset of the rank-1 kernel of the trace form
            for k in range(-box, box + 1):
                v1 = KNum(x * q + k * t1 // g, y * q - k * t0 // g).conj()
                v = (v1, v2, v3)
                if o_gcd_many(v).norm() != 1:
                    continue
                p = ProjPoint(v)
                assert p.sq_norm_sign() == 0 and depth(p) == d
                return p
    return None


def realizable_depths(max_depth: int, box: int = 6):
    """Depths up to max_depth certified by a primitive-null-vector witness."""
    return [d for d in range(1, max_depth + 1) if depth_witness(d, box) is not None]


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------


class GroupElt:
    """An element of PU(J, O_7): an integral matrix in U(J), sign-canonicalized.

    Of the pair {M, -M} we keep the one whose first nonzero entry (row-major)
    is positive in the lexicographic (a, b) ring order.  Equality and hashing
    act on the canonical representative, implementing projectivization.
    """

    __slots__ = ("mat", "word")

    def __init__(self, mat: Mat, word=None, check=True):
        if check and not is_in_gamma(mat):
            raise ValueError("matrix is not in U(J, O_7)")
        first = next(x for r in mat.rows for x in r if not x.is_zero())
        if not first.is_sign_positive():
            mat = -mat
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "word", word)

    def __setattr__(self, *args):
        raise AttributeError("GroupElt is immutable")

    @staticmethod
    def identity() -> "GroupElt":
        return GroupElt(Mat.identity(), word=(), check=False)

    def __eq__(self, other):
        if not isinstance(other, GroupElt):
            return NotImplemented
        return self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __repr__(self):
        w = f", word={self.word!r}" if self.word else ""
        return f"GroupElt({self.mat!r}{w})"

    def __mul__(self, other):
        if not isinstance(other, GroupElt):
            return NotImplemented
        word = None
        if self.word is not None and other.word is not None:
            word = tuple(self.word) + tuple(other.word)
        return GroupElt(self.mat * other.mat, word=word, check=False)

    def inverse(self) -> "GroupElt":
        word = None
        if self.word is not None:
            word = tuple(_invert_letter(x) for x in reversed(self.word))
        return GroupElt(self.mat.inverse(), word=word, check=False)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = GroupElt.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate_by(self, g: "GroupElt") -> "GroupElt":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def first_column(self):
        return tuple(self.mat.rows[i][0] for i in range(3))

    def is_identity(self) -> bool:
        return self.mat.is_pm_identity()

    def fixes_q_inf(self) -> bool:
        return self.mat.rows[1][0].is_zero() and self.mat.rows[2][0].is_zero()

    def apply(self, v):
        return self.mat.apply(v)


def _invert_letter(x):
    name, e = x
    return (name, -e)


def word_str(word) -> str:
    """Pretty form of a word: tuple of (name, exponent) pairs."""
    if word is None:
        return "?"
    if not word:
        return "1"
    parts = []
    for name, e in word:
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# horospherical coordinates
# ---------------------------------------------------------------------------


class HoroPoint:
    """Horospherical coordinates (z, t, u) with ti = i*t stored exactly.

    For K-rational points z and ti are KNum (ti = s*(2 tau - 1), t = s*sqrt(7))
    and u is a KNum rational; otherwise they are AlgNum in a common tower.
    """

    __slots__ = ("z", "ti", "u")

    def __init__(self, z, ti, u):
        z, ti, u = scalar(z), scalar(ti), scalar(u)
        assert (ti + ti.conj()).is_zero(), "ti must be purely imaginary"
        assert u.is_real()
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "ti", ti)
        object.__setattr__(self, "u", u)

    def __setattr__(self, *args):
        raise AttributeError("HoroPoint is immutable")

    @staticmethod
    def from_zsu(z, s, u=0) -> "HoroPoint":
        """K-rational constructor with t = s*sqrt(7)."""
        return HoroPoint(KNum.coerce(z), ISQRT7 * Fraction(s), KNum(Fraction(u)))

    @property
    def s(self) -> Fraction:
        """t as a multiple of sqrt(7) (K-rational points only)."""
        ti = self.ti
        if isinstance(ti, AlgNum):
            ti = ti.k_part()
        return ti.b / 2

    @property
    def u_rat(self) -> Fraction:
        u = self.u
        if isinstance(u, AlgNum):
            u = u.k_part()
        return u.rat()

    def is_rational(self) -> bool:
        return isinstance(self.z, KNum) and isinstance(self.ti, KNum) and isinstance(self.u, KNum)

    def __eq__(self, other):
        if not isinstance(other, HoroPoint):
            return NotImplemented
        return (
            (self.z - other.z).is_zero()
            and (self.ti - other.ti).is_zero()
            and (self.u - other.u).is_zero()
        )

    def __hash__(self):
        return hash((self.z, self.ti, self.u))

    def __repr__(self):
        return f"HoroPoint(z={self.z}, ti={self.ti}, u={self.u})"


def horo_coords(v) -> HoroPoint:
    """Horospherical coordinates of a vector with <v,v> <= 0 and v3 != 0."""
    v1, v2, v3 = (scalar(x) for x in v)
    if v3.is_zero():
        raise ValueError("point at infinity has no horospherical coordinates")
    z = v2 / v3
    w = (v1 / v3) * 2 + z.abs2()
    # w = it - u: ti is the anti-Hermitian part, u = -Re(w)
    two = scalar(2) if isinstance(w, KNum) else AlgNum.lift(w.tower, KNum(2))
    ti = (w - w.conj()) / two
    u = -(w + w.conj()) / two
    if u.real_sign() < 0:
        raise ValueError("vector has positive square norm")
    return HoroPoint(z, ti, u)


def lift(h: HoroPoint):
    """Homogeneous lift ((-|z|^2 + it - u)/2, z, 1)."""
    z, ti, u = h.z, h.ti, h.u
    two = scalar(2) if isinstance(z, KNum) else AlgNum.lift(z.tower, KNum(2))
    one = scalar(1) if isinstance(z, KNum) else AlgNum.lift(z.tower, ONE)
    return ((-(z.abs2()) + ti - u) / two, z, one)


def dist_invariant(p: ProjPoint, q: ProjPoint):
    """cosh^2(d/2) = |<v,w>|^2 / (<v,v> <w,w>), exact (negative points only)."""
    nv = p.sq_norm()
    nw = q.sq_norm()
    if nv.real_sign() >= 0 or nw.real_sign() >= 0:
        raise ValueError("dist_invariant requires negative points")
    inner = herm_inner(p.coords, q.coords)
    return inner.abs2() / (nv * nw)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def mat_to_json(m: Mat):
    return [[format_knum(x) for x in r] for r in m.rows]


def mat_from_json(data) -> Mat:
    if isinstance(data, str):
        data = json.loads(data)
    return Mat([[parse_knum(x) if isinstance(x, str) else KNum.coerce(x) for x in r] for r in data])


def vec_to_json(v):
    return [format_knum(KNum.coerce(x) if not isinstance(x, KNum) else x) for x in v]


def vec_from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    return tuple(parse_knum(x) if isinstance(x, str) else KNum.coerce(x) for x in data)
