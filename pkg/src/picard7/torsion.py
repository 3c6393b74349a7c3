"""Torsion in PU(2,1,O_7): conjugacy classes, cycle graphs and finite stabilizers.

An elliptic element either fixes a complex line pointwise (a reflection,
recognized by a repeated eigenvalue with an indefinite 2-dimensional
eigenspace) or has an isolated fixed point (the negative eigenvector).
Candidates come from the sweeps gamma = alpha * A_j over the finite sets
T_jk of cusp translates whose spheres can meet; isolated fixed points are
moved into Omega and organized into a graph whose edges are side-pairing
maps, so that conjugacy and stabilizers reduce to finite group computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ring import (
    AlgNum,
    KNum,
    ONE,
    poly_deriv,
    poly_divmod,
    poly_eval,
    poly_gcd,
    scalar,
    zeta3_tower,
    zeta7_tower,
)
from .hermitian import (
    GroupElt,
    Mat,
    ProjPoint,
    eigenspace_basis,
    herm_inner,
    horo_coords,
    lift,
    primitive_rep,
    sq_norm,
    word_str,
)
from .heisenberg import (
    CuspElt,
    Prism,
    R,
    T1,
    TTAU,
    cusp_torsion_classes,
    enumerate_cusp_overlaps,
    reduce_to_prism,
)
from .ford import (
    GENERATORS,
    INVERSE_PAIRS,
    cygan_dist4,
    reduce_to_domain,
    sphere_of,
    spheres_containing,
    sqrt_ub,
)


#: n with phi(n) <= 6; eigenvalues of a finite-order element have degree
#: at most 6 over Q, so the projective order never exceeds 18
MAX_PROJECTIVE_ORDER = 18


def projective_order(g: GroupElt):
    """Smallest n >= 1 with g^n = +/-Id, or None if no n <= 18 works."""
    p = g
    for n in range(1, MAX_PROJECTIVE_ORDER + 1):
        if p.is_identity():
            return n
        p = p * g
    return None


def _mat_key(m: Mat):
    return tuple((x.a, x.b) for row in m.rows for x in row)


def _elt_key(g: GroupElt):
    return _mat_key(g.mat)


def _lift_mat(tw, m: Mat) -> Mat:
    return Mat([[AlgNum.lift(tw, x) for x in row] for row in m.rows])


def _apply_elt(g: GroupElt, p: ProjPoint) -> ProjPoint:
    if p.rational:
        return ProjPoint(g.apply(p.coords))
    tw = p.coords[0].tower
    return ProjPoint(_lift_mat(tw, g.mat).apply(p.coords))


# ---------------------------------------------------------------------------
# reflections and the reflection/isolated dichotomy
# ---------------------------------------------------------------------------


def make_reflection(v) -> GroupElt:
    """The complex reflection R_v(x) = x - 2 <x,v>/<v,v> v, for <v,v> in {1,2}."""
    v = primitive_rep(v.coords if isinstance(v, ProjPoint) else v)
    nv = sq_norm(v).rat()
    if nv not in (1, 2):
        raise ValueError("polar norm not integral for this form")
    basis = (
        (ONE, KNum(0), KNum(0)),
        (KNum(0), ONE, KNum(0)),
        (KNum(0), KNum(0), ONE),
    )
    cols = []
    for j, e in enumerate(basis):
        c = herm_inner(e, v) * 2 / nv
        cols.append(tuple(e[i] - c * v[i] for i in range(3)))
    mat = Mat([[cols[j][i] for j in range(3)] for i in range(3)])
    return GroupElt(mat, word=(("R_" + "".join(str(x) for x in v), 1),))


def _repeated_eigenvalue(mat: Mat):
    """The repeated K-eigenvalue of mat, or None when the charpoly is squarefree."""
    p = mat.charpoly()
    g = poly_gcd(p, poly_deriv(p))
    if len(g) == 1:
        return None
    assert len(g) == 2, "finite-order element cannot be a non-scalar with triple eigenvalue"
    return -g[0] / g[1]


def reflection_polar(g: GroupElt):
    """(polar ProjPoint, polar norm) if g is a complex reflection, else None."""
    mat = g.mat
    lam = _repeated_eigenvalue(mat)
    if lam is None:
        return None
    space = eigenspace_basis(mat, lam)
    if len(space) != 2:
        return None
    e1, e2 = space
    gram_det = sq_norm(e1) * sq_norm(e2) - herm_inner(e1, e2).abs2()
    if gram_det.real_sign() >= 0:
        return None  # mirror candidate does not meet the ball
    mu = -mat.charpoly()[0] / (lam * lam)  # det / lam^2
    polar = ProjPoint(eigenspace_basis(mat, mu)[0])
    norm = int(sq_norm(polar.coords).rat())
    return polar, norm


def classify_elliptic(g: GroupElt, n: int):
    """("reflection", polar, <v,v>) or ("isolated", fixed point, <v,v> or None)."""
    if projective_order(g) != n:
        raise ValueError("stated order does not match the element")
    refl = reflection_polar(g)
    if refl is not None:
        return ("reflection",) + refl
    mat = g.mat
    lam = _repeated_eigenvalue(mat)
    if lam is not None:
        # repeated eigenspace is positive definite: the simple eigenvector
        # is the isolated fixed point
        mu = -mat.charpoly()[0] / (lam * lam)
        v = eigenspace_basis(mat, mu)[0]
        assert sq_norm(v).real_sign() < 0
        p = ProjPoint(v)
        return "isolated", p, int(sq_norm(p.coords).rat())
    # squarefree characteristic polynomial; K contains only the roots of
    # unity +/-1, so any K-rational eigenvector belongs to one of those
    p = mat.charpoly()
    for lam in (ONE, -ONE):
        if poly_eval(p, lam).is_zero():
            for v in eigenspace_basis(mat, lam):
                if sq_norm(v).real_sign() < 0:
                    pt = ProjPoint(v)
                    return "isolated", pt, int(sq_norm(pt.coords).rat())
    # fixed point outside K^3: eigenvalues are roots of unity of the
    # matrix order, found in the relevant cyclotomic tower
    m = n
    q = g.mat
    for _ in range(n - 1):
        q = q * g.mat
    if not q.is_identity():
        m = 2 * n
    if m % 7 == 0:
        tw = zeta7_tower()
        z = AlgNum.gen(tw)
        units = [z**k for k in range(7)]
        if m % 2 == 0:
            units += [-u for u in units]
    elif m % 3 == 0:
        tw = zeta3_tower()
        z6 = 1 + AlgNum.gen(tw)  # a primitive sixth root of unity
        units = [z6**k for k in range(6)]
    else:
        raise ValueError(f"unsupported eigenvalue field for matrix order {m}")
    lifted = _lift_mat(tw, mat)
    for lam in units:
        for v in eigenspace_basis(lifted, lam):
            if sq_norm(v).real_sign() < 0:
                return "isolated", ProjPoint(v), None
    raise ValueError("no negative eigenvector found for an elliptic element")


# ---------------------------------------------------------------------------
# candidate sweeps: the sets T_jk
# ---------------------------------------------------------------------------

_TJK_CACHE = {}
_TJK_M, _TJK_N, _TJK_L = 8, 5, 8


def enumerate_tjk(j: int, k: int):
    """Finite superset of {alpha cusp : alpha(I(A_j)) meets I(A_k)}.

    Requires A_j A_k = +/-Id.  Uses the necessary condition that the Cygan
    distance between the two centers is at most r_j + r_k, compared through
    exact fourth powers against a rational upper bound.
    """
    if INVERSE_PAIRS[j] != k:
        raise ValueError("T_jk is only enumerated for inverse pairs")
    if (j, k) in _TJK_CACHE:
        return _TJK_CACHE[(j, k)]
    sj, sk = sphere_of(j), sphere_of(k)
    rsum = sqrt_ub(sqrt_ub(sj.r4)) + sqrt_ub(sqrt_ub(sk.r4))
    bound = rsum**4
    ck = sk.center.to_horo()
    out = []
    hit_edge = False
    for m in range(-_TJK_M, _TJK_M + 1):
        for n in range(-_TJK_N, _TJK_N + 1):
            for eps in (0, 1):
                planar = CuspElt(m, n, eps, 0).act_heis(sj.center)
                dz2 = (planar.z - ck.z).abs2().rat()
                if dz2 * dz2 > bound:
                    continue
                for l in range(-_TJK_L, _TJK_L + 1):
                    alpha = CuspElt(m, n, eps, l)
                    d4 = cygan_dist4(alpha.act_heis(sj.center).to_horo(), ck)
                    if d4.rat() > bound:
                        continue
                    if abs(m) == _TJK_M or abs(n) == _TJK_N or abs(l) == _TJK_L:
                        hit_edge = True
                    out.append(alpha)
    assert not hit_edge, "T_jk candidate box too small"
    out = sorted(out, key=CuspElt.sort_key)
    _TJK_CACHE[(j, k)] = out
    return out


# ---------------------------------------------------------------------------
# conjugacy of reflections: orbit search on polar vectors
# ---------------------------------------------------------------------------


def _search_alphabet():
    t1, ttau = T1.to_matrix(), TTAU.to_matrix()
    return (
        t1,
        t1.inverse(),
        ttau,
        ttau.inverse(),
        R.to_matrix(),
        GENERATORS[1],
        GENERATORS[2],
        GENERATORS[3],
    )


def _orbit_ball(start: ProjPoint, depth: int):
    """{point: transporting element} for words of length <= depth."""
    gens = _search_alphabet()
    seen = {start: GroupElt.identity()}
    frontier = [start]
    for _ in range(depth):
        new = []
        for p in frontier:
            d = seen[p]
            for g in gens:
                q = _apply_elt(g, p)
                if q not in seen:
                    seen[q] = g * d
                    new.append(q)
        frontier = new
    return seen


def reflection_conjugacy(g1: GroupElt, g2: GroupElt, max_len: int = 8):
    """An exact conjugator with delta g1 delta^-1 = g2, or None.

    Conjugating a reflection transports its polar vector, so the search is a
    meet-in-the-middle orbit walk on the two polar points.
    """
    r1, r2 = reflection_polar(g1), reflection_polar(g2)
    if r1 is None or r2 is None:
        raise ValueError("both elements must be complex reflections")
    if projective_order(g1) != projective_order(g2) or r1[1] != r2[1]:
        return None
    half = (max_len + 1) // 2
    fwd = _orbit_ball(r1[0], half)
    bwd = _orbit_ball(r2[0], max_len - half)
    meet = [p for p in fwd if p in bwd]
    for p in sorted(meet, key=_vec_key):
        delta = bwd[p].inverse() * fwd[p]
        if delta * g1 * delta.inverse() == g2:
            return delta
    return None


# ---------------------------------------------------------------------------
# cycle graph of isolated fixed points in Omega
# ---------------------------------------------------------------------------


class ClosureError(Exception):
    """Raised when a group closure exceeds its cap."""


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    label: GroupElt


class CycleGraph:
    """Isolated fixed points in Omega, joined by side-pairing maps."""

    def __init__(self):
        self.vertices: list[ProjPoint] = []
        self.edges: list[Edge] = []

    def index_of(self, p: ProjPoint):
        for i, v in enumerate(self.vertices):
            if v == p:
                return i
        return None

    def add_vertex(self, p: ProjPoint) -> int:
        i = self.index_of(p)
        if i is None:
            self.vertices.append(p)
            i = len(self.vertices) - 1
        return i

    def components(self):
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.src), find(e.dst)
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps = {}
        for i in range(len(self.vertices)):
            comps.setdefault(find(i), []).append(i)
        return [comps[r] for r in sorted(comps)]


def _shift_into_prism(p: ProjPoint):
    """Cusp element c and c(p) with prism-reduced boundary coordinates."""
    h = horo_coords(p.coords)
    c, hr = reduce_to_prism(h)
    return c, ProjPoint(lift(hr))


def build_cycle_graph(points, extra_loops=None) -> CycleGraph:
    """Graph on the Omega-orbit closure of the given points.

    Edges: for every Ford sphere through a vertex, the side-pairing map
    (composed with the cusp shift bringing the image back to the prism);
    and every cusp overlap keeping the vertex inside the prism.
    """
    graph = CycleGraph()
    queue = [graph.add_vertex(p if isinstance(p, ProjPoint) else ProjPoint(p)) for p in points]
    overlaps = [c for c in enumerate_cusp_overlaps() if c != CuspElt()]
    seen_edges = set()
    done = set()
    while queue:
        i = queue.pop(0)
        if i in done:
            continue
        done.add(i)
        p = graph.vertices[i]
        labels = []
        for alpha, j, flag in spheres_containing(p):
            assert flag == "boundary", "graph vertices must lie in Omega"
            g = alpha.to_matrix() * GENERATORS[j]
            labels.append(g.inverse())
        for g in labels:
            img = _apply_elt(g, p)
            c, q = _shift_into_prism(img)
            full = c.to_matrix() * g
            k = graph.add_vertex(q)
            key = (i, k, full.mat)
            if key not in seen_edges:
                seen_edges.add(key)
                graph.edges.append(Edge(i, k, full))
            if k not in done:
                queue.append(k)
        h = horo_coords(p.coords)
        for c in overlaps:
            hq = c.act_horo(h)
            if not Prism.contains(hq.z, hq.ti):
                continue
            q = ProjPoint(lift(hq))
            k = graph.add_vertex(q)
            g = c.to_matrix()
            key = (i, k, g.mat)
            if key not in seen_edges:
                seen_edges.add(key)
                graph.edges.append(Edge(i, k, g))
            if k not in done:
                queue.append(k)
    if extra_loops:
        for p, elts in extra_loops.items():
            i = graph.index_of(p if isinstance(p, ProjPoint) else ProjPoint(p))
            if i is None:
                continue
            for g in elts:
                key = (i, i, g.mat)
                if key not in seen_edges:
                    seen_edges.add(key)
                    graph.edges.append(Edge(i, i, g))
    return graph


# ---------------------------------------------------------------------------
# finite stabilizers
# ---------------------------------------------------------------------------

DEFAULT_CLOSURE_CAP = 10000


class FiniteGroup:
    """Closure of a finite set of generators in U(J, O_7), with line data."""

    def __init__(self, gens, cap: int = DEFAULT_CLOSURE_CAP):
        # the linear group is the preimage in U(J, O_7) of the projective
        # stabilizer, so it is closed under sign
        mats = sorted({m for g in gens for m in (g.mat, -g.mat)}, key=_mat_key)
        elems = {Mat.identity(), -Mat.identity()}
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for g in mats:
                    prod = a * g
                    if prod not in elems:
                        if len(elems) >= cap:
                            raise ClosureError(f"group closure exceeded cap {cap}")
                        elems.add(prod)
                        new.append(prod)
            frontier = new
        self.matrices = frozenset(elems)
        self.linear_order = len(elems)
        self.scalar_order = sum(1 for m in elems if m.is_scalar())
        self.elements = frozenset(GroupElt(m, check=False) for m in elems)
        self.projective_order = len(self.elements)
        assert self.linear_order == self.projective_order * self.scalar_order
        self._analyze_reflections()

    def _analyze_reflections(self):
        polars = {}
        for g in self.elements:
            if g.is_identity():
                continue
            refl = reflection_polar(g)
            if refl is not None:
                polars[refl[0]] = refl[1]
        self.reflections = sorted(
            ((p, n) for p, n in polars.items()), key=lambda t: (t[1], _vec_key(t[0]))
        )
        self.one_lines = sum(1 for _, n in polars.items() if n == 1)
        self.two_lines = sum(1 for _, n in polars.items() if n == 2)
        self.two_line_orbits = self._orbit_sizes([p for p, n in polars.items() if n == 2])
        self.one_line_orbits = self._orbit_sizes([p for p, n in polars.items() if n == 1])

    def _orbit_sizes(self, points):
        remaining = list(points)
        sizes = []
        while remaining:
            orbit = {remaining[0]}
            frontier = [remaining[0]]
            while frontier:
                p = frontier.pop()
                for g in self.elements:
                    q = _apply_elt(g, p)
                    if q not in orbit:
                        orbit.add(q)
                        frontier.append(q)
            assert orbit <= set(remaining)
            sizes.append(len(orbit))
            remaining = [p for p in remaining if p not in orbit]
        return sorted(sizes)

    def __contains__(self, g: GroupElt):
        return g in self.elements

    def __repr__(self):
        return (
            f"FiniteGroup(linear={self.linear_order}, projective={self.projective_order}, "
            f"reflections={len(self.reflections)})"
        )


def _vec_key(p: ProjPoint):
    if p.rational:
        return tuple((x.a, x.b) for x in p.coords)
    return ()


def _spanning_transports(graph: CycleGraph, base: int):
    """BFS transports t[v] with t[v](base vertex) = vertex v."""
    order_edges = sorted(
        range(len(graph.edges)),
        key=lambda i: (graph.edges[i].src, graph.edges[i].dst, _elt_key(graph.edges[i].label)),
    )
    transports = {base: GroupElt.identity()}
    changed = True
    while changed:
        changed = False
        for i in order_edges:
            e = graph.edges[i]
            if e.src in transports and e.dst not in transports:
                transports[e.dst] = e.label * transports[e.src]
                changed = True
            if e.dst in transports and e.src not in transports:
                transports[e.src] = e.label.inverse() * transports[e.dst]
                changed = True
    return transports


def stabilizer(point, graph: CycleGraph, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteGroup:
    """Stabilizer of a graph vertex: image of the graph's fundamental group.

    Generators: for every edge u -> w in the vertex's component, the composite
    t_w^-1 * label * t_u, where t is a spanning-tree transport from the vertex.
    """
    p = point if isinstance(point, ProjPoint) else ProjPoint(point)
    base = graph.index_of(p)
    if base is None:
        raise ValueError("point is not a vertex of the graph")
    transports = _spanning_transports(graph, base)
    gens = []
    for e in graph.edges:
        if e.src not in transports:
            continue
        g = transports[e.dst].inverse() * e.label * transports[e.src]
        if not g.is_identity():
            gens.append(g)
    return FiniteGroup(gens, cap=cap)


# ---------------------------------------------------------------------------
# enumeration and deduplication of torsion classes
# ---------------------------------------------------------------------------


@dataclass
class TorsionClass:
    """A conjugacy class of torsion elements (reflections exactly; isolated
    classes up to powers, i.e. one class per fixed point orbit and order)."""

    rep: GroupElt
    proj_order: int
    kind: str  # "reflection" | "isolated"
    polar: ProjPoint = None
    polar_norm: int = None
    fixed: ProjPoint = None
    fp_norm: int = None
    stab_order: int = None
    stab_linear_order: int = None
    one_lines: int = None
    two_lines: int = None
    two_line_orbits: list = None
    members: list = field(default_factory=list)

    @property
    def word(self):
        return word_str(self.rep.word)


_REDUCE_CACHE = {}


def _reduced_fixed_point(fixed: ProjPoint):
    if fixed not in _REDUCE_CACHE:
        _REDUCE_CACHE[fixed] = reduce_to_domain(fixed)
    return _REDUCE_CACHE[fixed]


def _torsion_candidates():
    """All finite-order gamma = alpha A_j over the T_jk sweeps, plus cusp torsion."""
    found = {}
    for g in cusp_torsion_classes():
        found[g] = projective_order(g)
    for j in sorted(GENERATORS):
        k = INVERSE_PAIRS[j]
        for alpha in enumerate_tjk(j, k):
            g = alpha.to_matrix() * GENERATORS[j]
            if g in found:
                continue
            n = projective_order(g)
            if n is not None and n >= 2:
                found[g] = n
    return found


def dedup_isolated(cands):
    """Merge isolated candidates [(GroupElt, order, fixed point)] into classes.

    Builds the cycle graph on the reduced fixed points; candidates of equal
    order whose points lie in one component merge only when an exact witness
    conjugates one into a power of the other inside the common stabilizer.
    Returns (classes, graph, {base vertex index: FiniteGroup}).
    """
    at_vertex = {}  # vertex ProjPoint -> list of (element fixing it, order)
    order = []
    for g, n, fixed in cands:
        shift, y = _reduced_fixed_point(fixed)
        moved = shift * g * shift.inverse()
        for v in at_vertex:
            if v == y:
                y = v
                break
        else:
            at_vertex[y] = []
            order.append(y)
        if (moved, n) not in at_vertex[y]:
            at_vertex[y].append((moved, n))
    graph = build_cycle_graph(order, extra_loops={v: [g for g, _ in at_vertex[v]] for v in order})
    classes = []
    stabs = {}
    for comp in graph.components():
        base = comp[0]
        transports = _spanning_transports(graph, base)
        stab = stabilizer(graph.vertices[base], graph)
        stabs[base] = stab
        # everything fixing a vertex of this component, moved to the base
        carried = []
        for i in comp:
            v = graph.vertices[i]
            for g, n in at_vertex.get(v, []):
                t = transports[i]
                carried.append((t.inverse() * g * t, n))
        merged = []  # (rep, order, members)
        for g, n in carried:
            placed = False
            for rep, rn, members in merged:
                if rn != n:
                    continue
                if _power_conjugate_witness(rep, g, n, stab) is not None:
                    members.append(g)
                    placed = True
                    break
            if not placed:
                merged.append((g, n, [g]))
        basept = graph.vertices[base]
        fp_norm = int(sq_norm(basept.coords).rat()) if basept.rational else None
        for rep, n, members in merged:
            classes.append(
                TorsionClass(
                    rep=rep,
                    proj_order=n,
                    kind="isolated",
                    fixed=basept,
                    fp_norm=fp_norm,
                    stab_order=stab.projective_order,
                    stab_linear_order=stab.linear_order,
                    one_lines=stab.one_lines,
                    two_lines=stab.two_lines,
                    two_line_orbits=stab.two_line_orbits,
                    members=members,
                )
            )
    classes.sort(key=lambda c: (c.proj_order, c.fp_norm is None, -(c.fp_norm or 0)))
    return classes, graph, stabs


def _power_conjugate_witness(rep: GroupElt, g: GroupElt, n: int, stab: FiniteGroup):
    """s, k with s rep^k s^-1 = g (k coprime to n, s in the stabilizer), or None."""
    powers = []
    p = rep
    for k in range(1, n + 1):
        if _gcd(k, n) == 1:
            powers.append((k, p))
        p = p * rep
    for s in sorted(stab.elements, key=_elt_key):
        si = s.inverse()
        for k, p in powers:
            if s * p * si == g:
                return s, k
    return None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=1)
def enumerate_torsion():
    """All torsion classes: reflections first, then isolated classes.

    Reflection classes merge on an exact conjugator transporting one polar
    vector to the other; isolated classes merge through the cycle graph.
    """
    cands = _torsion_candidates()
    reflections = []
    isolated = []
    for g, n in sorted(cands.items(), key=lambda t: (len(t[0].word or ()), _elt_key(t[0]))):
        kind, pt, norm = classify_elliptic(g, n)
        if kind == "reflection":
            reflections.append((g, n, pt, norm))
        else:
            isolated.append((g, n, pt))
    refl_classes = []
    for g, n, polar, norm in reflections:
        placed = False
        for cls in refl_classes:
            if cls.proj_order == n and cls.polar_norm == norm:
                if reflection_conjugacy(cls.rep, g) is not None:
                    cls.members.append(g)
                    placed = True
                    break
        if not placed:
            refl_classes.append(
                TorsionClass(
                    rep=g, proj_order=n, kind="reflection", polar=polar, polar_norm=norm,
                    members=[g],
                )
            )
    refl_classes.sort(key=lambda c: (c.proj_order, c.polar_norm))
    iso_classes, _, _ = dedup_isolated(isolated)
    return refl_classes + iso_classes
