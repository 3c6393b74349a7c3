"""Reduction maps to matrix groups over prime fields and torsion certificates."""

from functools import lru_cache

from picard7.hermitian import GroupElt, Mat
from picard7.heisenberg import R, T1, TV
from picard7.torsion import ClosureError, enumerate_torsion, projective_order


class ResidueMap:
    """Entry-wise reduction of integral matrices modulo a prime ideal.

    The quotient is F_7 for the ideal generated by i*sqrt(7) (tau maps to 4,
    the inverse of 2) and F_2 for the ideal generated by tau (tau maps to 0).
    """

    def __init__(self, ideal: str):
        if ideal == "isqrt7":
            self.p, self.tau = 7, 4
        elif ideal == "tau":
            self.p, self.tau = 2, 0
        else:
            raise ValueError("unknown ideal tag: %r" % (ideal,))
        self.ideal = ideal
        assert (self.tau * self.tau - self.tau + 2) % self.p == 0

    def scalar(self, x) -> int:
        if x.a.denominator != 1 or x.b.denominator != 1:
            raise ValueError("entry is not integral")
        return (int(x.a) + int(x.b) * self.tau) % self.p

    def __call__(self, m):
        if isinstance(m, GroupElt):
            m = m.mat
        return tuple(tuple(self.scalar(x) for x in row) for row in m.rows)

    def identity(self):
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def mul(self, x, y):
        p = self.p
        return tuple(
            tuple(sum(x[i][k] * y[k][j] for k in range(3)) % p for j in range(3))
            for i in range(3)
        )

    def is_scalar(self, x) -> bool:
        return (
            x[0][1] == x[0][2] == x[1][0] == x[1][2] == x[2][0] == x[2][1] == 0
            and x[0][0] == x[1][1] == x[2][2]
        )


class FpMatGroup:
    """Closure of a generating set of matrices over a prime field."""

    def __init__(self, gens, rm: ResidueMap, cap: int = 100000):
        self.rm = rm
        self.gens = [rm(g) if not isinstance(g, tuple) else g for g in gens]
        elements = {rm.identity()}
        frontier = list(elements)
        while frontier:
            new = []
            for x in frontier:
                for g in self.gens:
                    y = rm.mul(x, g)
                    if y not in elements:
                        if len(elements) >= cap:
                            raise ClosureError("group closure exceeded cap")
                        elements.add(y)
                        new.append(y)
            frontier = new
        self.elements = frozenset(elements)
        self.order = len(elements)
        self.scalars = sorted(x for x in elements if rm.is_scalar(x))
        self.projective_order = self.order // len(self.scalars)

    def center(self):
        gens = self.gens
        rm = self.rm
        return sorted(
            x for x in self.elements if all(rm.mul(x, g) == rm.mul(g, x) for g in gens)
        )

    def element_order(self, x) -> int:
        rm = self.rm
        y, k = x, 1
        while y != rm.identity():
            y = rm.mul(y, x)
            k += 1
        return k

    def projective_element_order(self, x) -> int:
        rm = self.rm
        y, k = x, 1
        while not rm.is_scalar(y):
            y = rm.mul(y, x)
            k += 1
        return k

    def __contains__(self, x):
        return x in self.elements


@lru_cache(maxsize=4)
def image_group(ideal: str) -> FpMatGroup:
    """The image of the lattice generators under reduction.

    Built from the printed generator matrices rather than their sign-canonical
    forms, so the image order counts the matrix group they actually generate.
    """
    from picard7.presentation import A_MAT, B_MAT

    rm = ResidueMap(ideal)
    return FpMatGroup([A_MAT, B_MAT], rm)


def torsion_free_certificate(ideal: str, classes=None) -> dict:
    """Per-class order preservation plus the cusp check for the kernel.

    The kernel is torsion-free iff every torsion class keeps its projective
    order in the image, and has no cusp torsion iff the images of T1 R times
    the powers of Tv stay away from the scalars.
    """
    rm = ResidueMap(ideal)
    grp = image_group(ideal)
    if classes is None:
        classes = enumerate_torsion()
    rows = []
    for cls in classes:
        img = rm(cls.rep)
        neg = rm(-cls.rep.mat)
        row = {
            "word": cls.word,
            "order": cls.proj_order,
            "image_order": grp.element_order(img),
            "neg_image_order": grp.element_order(neg),
            "projective_image_order": grp.projective_element_order(img),
        }
        row["ok"] = row["projective_image_order"] == cls.proj_order
        rows.append(row)
    t1r = (T1 * R).to_matrix()
    tv = TV.to_matrix()
    # every vertical translation reduces trivially mod isqrt7, so the image
    # order of tv can be 1; the four products are still checked separately
    cusp = {"tv_image_order": grp.element_order(rm(tv)), "products_nontrivial": []}
    g = t1r
    for k in range(max(4, cusp["tv_image_order"])):
        cusp["products_nontrivial"].append(not rm.is_scalar(rm(g)))
        g = g * tv
    report = {
        "ideal": ideal,
        "image_order": grp.order,
        "projective_image_order": grp.projective_order,
        "center_order": len(grp.center()),
        "classes": rows,
        "cusp": cusp,
        "torsion_free": all(r["ok"] for r in rows),
        "cusp_torsion_free": all(cusp["products_nontrivial"]),
    }
    return report
