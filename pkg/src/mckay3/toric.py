"""Rank-3 lattices, simplicial fans and toric smoothness/crepancy checks.

Everything is exact: vectors are tuples of ``Fraction`` in the coordinates of
the standard lattice Z^3, and a refined lattice N is given by a basis of
rational rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import Degenerate, UnknownCase

__all__ = [
    "RefinedLattice",
    "Fan",
    "FanReport",
    "TORIC_CASES",
    "EXPECTED_TORIC",
    "primitive_on_ray",
    "cone_index",
    "check_fan",
    "fan_volume",
    "builtin_toric_case",
    "standard_lattice",
    "half_lattice",
    "half_integral_sum_lattice",
]

Vector = tuple[Fraction, Fraction, Fraction]


def _vec(v: Iterable) -> Vector:
    out = tuple(Fraction(x) for x in v)
    if len(out) != 3:
        raise ValueError(f"expected a 3-vector, got {len(out)} entries")
    return out


def _det3(a: Sequence, b: Sequence, c: Sequence) -> Fraction:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _solve_row(v: Vector, basis: Sequence[Vector]) -> Vector:
    """Coordinates x with sum_i x_i * basis[i] = v, by Cramer's rule."""
    d = _det3(*basis)
    if d == 0:
        raise Degenerate("basis is singular")
    cols = [[basis[i][j] for i in range(3)] for j in range(3)]  # transpose
    out = []
    for k in range(3):
        m = [list(r) for r in cols]
        for j in range(3):
            m[j][k] = v[j]
        out.append(_det3(*m) / d)
    return tuple(out)


def _hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Nonzero rows of the row-style Hermite normal form of an integer matrix."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    out = []
    for col in range(ncols):
        pivots = [r for r in rows if r[col] != 0]
        if not pivots:
            continue
        rest = [r for r in rows if r[col] == 0]
        # Euclid on the column until one row holds the gcd
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            p = pivots[0]
            nxt = [p]
            for r in pivots[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                (nxt if r[col] != 0 else rest).append(r)
            pivots = nxt
        p = pivots[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        rows = rest
    for i, p in enumerate(out):
        col = next(j for j, x in enumerate(p) if x != 0)
        for r in out[:i]:
            q = r[col] // p[col]
            r[:] = [x - q * y for x, y in zip(r, p)]
    return out


@dataclass(frozen=True)
class RefinedLattice:
    """A full-rank lattice N in Q^3, stored as a basis of rows."""

    generators: tuple[Vector, Vector, Vector]
    name: str = ""

    def __post_init__(self):
        gens = tuple(_vec(r) for r in self.generators)
        if len(gens) != 3:
            raise ValueError("a rank-3 lattice needs exactly three basis rows")
        if _det3(*gens) == 0:
            raise Degenerate("lattice basis is linearly dependent")
        object.__setattr__(self, "generators", gens)

    rank = 3

    @property
    def covolume(self) -> Fraction:
        return abs(_det3(*self.generators))

    @classmethod
    def from_generators(cls, vectors: Iterable[Iterable], name: str = "") -> "RefinedLattice":
        """Lattice spanned by any finite set of rational vectors of full rank."""
        vecs = [_vec(v) for v in vectors]
        den = math.lcm(*(x.denominator for v in vecs for x in v))
        ints = [[int(x * den) for x in v] for v in vecs]
        hnf = _hermite_rows(ints)
        if len(hnf) != 3:
            raise Degenerate("generators do not span a rank-3 lattice")
        return cls(tuple(tuple(Fraction(x, den) for x in r) for r in hnf), name)

    def coordinates(self, v: Iterable) -> Vector:
        return _solve_row(_vec(v), self.generators)

    def contains(self, v: Iterable) -> bool:
        return all(x.denominator == 1 for x in self.coordinates(v))

    def contains_standard(self) -> bool:
        """Whether Z^3 is a sublattice of N."""
        return all(self.contains(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def index_over_standard(self) -> int:
        """[N : Z^3], defined when N contains Z^3."""
        if not self.contains_standard():
            raise ValueError("lattice does not contain Z^3")
        inv = 1 / self.covolume
        assert inv.denominator == 1
        return int(inv)

    def is_sl_type(self) -> bool:
        """Whether every lattice point has integral coordinate sum."""
        return all(sum(r).denominator == 1 for r in self.generators)

    def __str__(self):
        return self.name or f"lattice{self.generators}"


def standard_lattice() -> RefinedLattice:
    return RefinedLattice(((1, 0, 0), (0, 1, 0), (0, 0, 1)), "Z^3")


def half_lattice() -> RefinedLattice:
    h = Fraction(1, 2)
    return RefinedLattice(((h, 0, 0), (0, h, 0), (0, 0, h)), "(Z/2)^3")


def half_integral_sum_lattice() -> RefinedLattice:
    """Half-integral points whose coordinate sum is an integer."""
    h = Fraction(1, 2)
    return RefinedLattice(((h, h, 0), (h, 0, h), (0, h, h)), "(Z/2)^3 with integral sum")


def primitive_on_ray(v: Iterable, N: RefinedLattice) -> Vector:
    """The first nonzero point of N on the ray through v."""
    v = _vec(v)
    if not any(v):
        raise Degenerate("zero vector spans no ray")
    coords = N.coordinates(v)
    den = math.lcm(*(x.denominator for x in coords))
    ints = [int(x * den) for x in coords]
    g = math.gcd(*ints)
    prim = [Fraction(x, g) for x in ints]
    return tuple(sum(prim[i] * N.generators[i][j] for i in range(3)) for j in range(3))


def cone_index(rays: Sequence[Iterable], N: RefinedLattice) -> int:
    """Index of the sublattice spanned by the primitive ray generators; 1 iff smooth."""
    if len(rays) != 3:
        raise Degenerate("cone_index expects three rays")
    prims = [primitive_on_ray(r, N) for r in rays]
    d = abs(_det3(*prims))
    if d == 0:
        raise Degenerate("cone rays are linearly dependent")
    idx = d / N.covolume
    assert idx.denominator == 1, "primitive generators lie in N"
    return int(idx)


# -- fans ----------------------------------------------------------------------


def _projector(rays: Sequence[Vector]):
    """Map rays to points of an affine plane in 2D, or raise if impossible.

    Needs a linear form positive on every ray; the all-ones form covers every
    case shipped here, the ray sum is tried as a fallback.
    """
    for form in ((1, 1, 1), tuple(sum(r[j] for r in rays) for j in range(3))):
        if all(sum(f * x for f, x in zip(form, r)) > 0 for r in rays):
            break
    else:
        raise Degenerate("fan rays do not lie in an open half-space")
    # drop a coordinate along which the form is nonzero
    drop = next(j for j in range(3) if form[j] != 0)
    keep = [j for j in range(3) if j != drop]

    def project(r: Vector) -> tuple[Fraction, Fraction]:
        s = sum(f * x for f, x in zip(form, r))
        return (r[keep[0]] / s, r[keep[1]] / s)

    return project


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _clip(poly: list, tri: list) -> list:
    """Sutherland-Hodgman clip of a convex polygon against a closed triangle."""
    if _cross(*tri) < 0:
        tri = [tri[0], tri[2], tri[1]]
    for k in range(3):
        a, b = tri[k], tri[(k + 1) % 3]
        out = []
        for i, p in enumerate(poly):
            q = poly[(i + 1) % len(poly)]
            sp, sq = _cross(a, b, p), _cross(a, b, q)
            if sp >= 0:
                out.append(p)
            if (sp > 0 > sq) or (sp < 0 < sq):
                t = sp / (sp - sq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        poly = out
        if not poly:
            break
    return poly


def _in_hull(p, pts: list) -> bool:
    """Membership of p in the convex hull of at most two points."""
    if not pts:
        return False
    if len(pts) == 1:
        return p == pts[0]
    a, b = pts
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


@dataclass(frozen=True)
class Fan:
    """A pure 3-dimensional simplicial fan given by rays and maximal cones."""

    rays: tuple[Vector, ...]
    max_cones: tuple[tuple[int, int, int], ...]
    name: str = ""

    def __post_init__(self):
        rays = tuple(_vec(r) for r in self.rays)
        cones = tuple(tuple(int(i) for i in c) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        self._validate()

    def _validate(self):
        for c in self.max_cones:
            if len(c) != 3 or len(set(c)) != 3:
                raise Degenerate(f"cone {c} must list three distinct rays")
            if any(not 0 <= i < len(self.rays) for i in c):
                raise Degenerate(f"cone {c} refers to a missing ray")
            if _det3(*(self.rays[i] for i in c)) == 0:
                raise Degenerate(f"cone {c} is not simplicial")
        if len({frozenset(c) for c in self.max_cones}) != len(self.max_cones):
            raise Degenerate("repeated maximal cone")
        project = _projector(self.rays)
        pts = [project(r) for r in self.rays]
        for c1, c2 in combinations(self.max_cones, 2):
            inter = _clip([pts[i] for i in c1], [pts[i] for i in c2])
            shared = sorted(set(c1) & set(c2))
            if not all(_in_hull(p, [pts[i] for i in shared]) for p in inter):
                raise Degenerate(f"cones {c1} and {c2} do not meet in a common face")

    def cone_rays(self, cone: Sequence[int]) -> list[Vector]:
        return [self.rays[i] for i in cone]


@dataclass
class FanReport:
    smooth: bool
    crepant: Optional[bool]
    cone_indices: list[int]
    singular_cones: list[tuple[int, int, int]]
    primitive_rays: list[Vector] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "smooth": self.smooth,
            "crepant": "n/a" if self.crepant is None else self.crepant,
            "cone_indices": list(self.cone_indices),
            "singular_cones": [list(c) for c in self.singular_cones],
            "primitive_rays": [[str(x) for x in r] for r in self.primitive_rays],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FanReport":
        crepant = data["crepant"]
        return cls(
            smooth=data["smooth"],
            crepant=None if crepant == "n/a" else crepant,
            cone_indices=list(data["cone_indices"]),
            singular_cones=[tuple(c) for c in data["singular_cones"]],
            primitive_rays=[tuple(Fraction(x) for x in r) for r in data.get("primitive_rays", [])],
        )


def check_fan(fan: Fan, N: RefinedLattice) -> FanReport:
    """Smoothness of every chart, and crepancy when N is of SL type.

    Crepancy asks that each primitive ray sits on the plane a + b + c = 1; it
    is reported as None for lattices with non-integral coordinate sums.
    """
    indices = [cone_index(fan.cone_rays(c), N) for c in fan.max_cones]
    singular = [c for c, k in zip(fan.max_cones, indices) if k != 1]
    prims = [primitive_on_ray(r, N) for r in fan.rays]
    crepant = all(sum(p) == 1 for p in prims) if N.is_sl_type() else None
    return FanReport(not singular, crepant, indices, singular, prims)


def fan_volume(fan: Fan, N: RefinedLattice) -> Fraction:
    """Sum over maximal cones of the normalized volume of conv(0, rays) in N."""
    return sum((abs(_det3(*fan.cone_rays(c))) / N.covolume for c in fan.max_cones), Fraction(0))


# -- built-in cases ------------------------------------------------------------

_H = Fraction(1, 2)
# e1, e2, e3, m12, m23, m13 with m_ij the midpoint of e_i and e_j
_JUNIOR_RAYS = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (_H, _H, 0),
    (0, _H, _H),
    (_H, 0, _H),
)
E1, E2, E3, M12, M23, M13 = range(6)

# Triangulation with edges m12-m23, m23-m13 and e1-m23.
_CROSSED = ((E1, M12, M23), (M12, E2, M23), (E1, M23, M13), (M13, M23, E3))
# Three corner triangles plus the central one.
_MEDIAL = ((E1, M12, M13), (M12, E2, M23), (M13, M23, E3), (M12, M23, M13))


def _tetra_lattice() -> RefinedLattice:
    return RefinedLattice.from_generators(
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (_H, _H, 0), (0, _H, _H)],
        "Z^3 + (1/2)(1,1,0) + (1/2)(0,1,1)",
    )


def _cases():
    crossed = Fan(_JUNIOR_RAYS, _CROSSED, "crossed")
    medial = Fan(_JUNIOR_RAYS, _MEDIAL, "medial")
    return {
        "YK_tetra": (medial, _tetra_lattice),
        "YH_z2cubed": (crossed, half_integral_sum_lattice),
        "Y_z2cubed": (crossed, half_lattice),
        "HHilb_z2cubed": (medial, half_integral_sum_lattice),
        "HHilbQuot_z2cubed": (medial, half_lattice),
    }


TORIC_CASES = ("HHilbQuot_z2cubed", "HHilb_z2cubed", "YH_z2cubed", "YK_tetra", "Y_z2cubed")

# Expected (smooth, crepant, sorted cone indices) per case.
EXPECTED_TORIC = {
    "YK_tetra": (True, True, (1, 1, 1, 1)),
    "YH_z2cubed": (True, True, (1, 1, 1, 1)),
    "Y_z2cubed": (True, None, (1, 1, 1, 1)),
    "HHilb_z2cubed": (True, True, (1, 1, 1, 1)),
    "HHilbQuot_z2cubed": (False, None, (1, 1, 1, 2)),
}


def builtin_toric_case(name: str) -> tuple[Fan, RefinedLattice]:
    cases = _cases()
    if name not in cases:
        raise UnknownCase(f"unknown toric case {name!r}; expected one of {', '.join(TORIC_CASES)}")
    fan, lattice = cases[name]
    return fan, lattice()
