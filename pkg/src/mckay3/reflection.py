"""Reflection data for finite matrix groups and the catalog of built-in families.

Covers pseudoreflections, reflection hyperplanes and their orbits (the
irreducible components of the discriminant), Molien series, degrees of basic
invariants, and identification of a group against the rank <= 3 catalog of
real reflection groups.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BadParameter, DegreeRecoveryFailed, InternalMismatch, NotReflectionGroup, UnknownFamily
from .exactnum import CycNumber, _lcm, reduce_exponent_vector
from .matgroup import FiniteMatrixGroup, SquareMatrix, class_eigen_exponents

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "ReflectionReport",
    "builtin_generators",
    "builtin_group",
    "catalog_signature",
    "classify",
    "discriminant_components",
    "invariant_degrees",
    "is_reflection_group",
    "molien_series",
    "parse_family",
    "pseudoreflections",
    "reflection_class_count",
    "reflection_report",
]

FAMILIES = (
    "Z2",
    "Z2xZ2",
    "Z2cubed",
    "DihedralRank2",
    "Dihedral",
    "DihedralxZ2",
    "Tetrahedral",
    "Octahedral",
    "Icosahedral",
)
DIHEDRAL_FAMILIES = ("DihedralRank2", "Dihedral", "DihedralxZ2")

# family -> (default rank, allowed ranks)
_RANKS = {
    "Z2": (3, (1, 2, 3)),
    "Z2xZ2": (3, (2, 3)),
    "Z2cubed": (3, (3,)),
    "DihedralRank2": (2, (2,)),
    "Dihedral": (3, (3,)),
    "DihedralxZ2": (3, (3,)),
    "Tetrahedral": (3, (3,)),
    "Octahedral": (3, (3,)),
    "Icosahedral": (3, (3,)),
}


@dataclass(frozen=True, order=True)
class FamilySpec:
    """A member of the catalog: a family label, dihedral parameter n and rank."""

    family: str
    n: Optional[int] = None
    rank: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.family in DIHEDRAL_FAMILIES:
            if self.n is None or self.n < 3:
                raise BadParameter(f"{self.family} needs n >= 3, got {self.n}")
        elif self.n is not None:
            raise BadParameter(f"{self.family} takes no parameter n")
        default, allowed = _RANKS[self.family]
        if self.rank is None:
            object.__setattr__(self, "rank", default)
        elif self.rank not in allowed:
            raise BadParameter(f"{self.family} exists in rank {allowed}, not {self.rank}")

    @property
    def label(self) -> str:
        s = self.family if self.n is None else f"{self.family}({self.n})"
        if self.rank != _RANKS[self.family][0]:
            s += f"[rank {self.rank}]"
        return s

    def __str__(self):
        return self.label

    def to_json(self) -> dict:
        out = {"family": self.family, "rank": self.rank}
        if self.n is not None:
            out["n"] = self.n
        return out


_LABEL_RE = re.compile(r"^\s*([A-Za-z0-9]+)\s*(?:\(\s*(\d+)\s*\))?\s*(?:\[\s*rank\s*(\d)\s*\])?\s*$")


def parse_family(text: str, n: Optional[int] = None, rank: Optional[int] = None) -> FamilySpec:
    """Parse labels like ``Octahedral``, ``dihedralxz2(5)`` or ``Z2xZ2[rank 2]``."""
    m = _LABEL_RE.match(text)
    if not m:
        raise UnknownFamily(f"cannot parse family label {text!r}")
    name, n_txt, rank_txt = m.groups()
    by_lower = {f.lower(): f for f in FAMILIES}
    if name.lower() not in by_lower:
        raise UnknownFamily(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    if n_txt is not None:
        if n is not None and n != int(n_txt):
            raise BadParameter(f"conflicting values of n in {text!r}")
        n = int(n_txt)
    if rank_txt is not None:
        rank = int(rank_txt)
    return FamilySpec(by_lower[name.lower()], n, rank)


# -- built-in generators -----------------------------------------------------


def _golden_ratio() -> CycNumber:
    z = CycNumber.zeta(5)
    return -(z**2 + z**3)


def _icosahedral_rotation() -> SquareMatrix:
    """Rotation by 2 pi / 5 about the vertex axis (0, 1, phi), by Rodrigues' formula.

    With v = (0, 1, phi): sin(72 deg)/|v| = 1/2, cos(72 deg) = (phi - 1)/2 and
    |v|^2 = phi + 2, so every entry lies in Q(sqrt 5) inside Q(zeta_5).
    """
    phi = _golden_ratio()
    v = [CycNumber.rational(0), CycNumber.rational(1), phi]
    cos = (phi - 1) / 2
    half = Fraction(1, 2)
    t = (1 - cos) / (phi + 2)
    cross = [
        [0, -v[2], v[1]],
        [v[2], 0, -v[0]],
        [-v[1], v[0], 0],
    ]
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            entry = t * v[i] * v[j] + cross[i][j] * half
            if i == j:
                entry = entry + cos
            row.append(entry)
        rows.append(row)
    return SquareMatrix(rows)


def _perm(images: Sequence[int]) -> SquareMatrix:
    """Permutation matrix sending e_j to e_images[j]."""
    n = len(images)
    return SquareMatrix([[1 if images[j] == i else 0 for j in range(n)] for i in range(n)])


def builtin_generators(spec: FamilySpec) -> list[SquareMatrix]:
    fam, n, r = spec.family, spec.n, spec.rank
    if fam == "Z2":
        return [SquareMatrix.diag(-1, *([1] * (r - 1)))]
    if fam == "Z2xZ2":
        pad = [1] * (r - 2)
        return [SquareMatrix.diag(-1, 1, *pad), SquareMatrix.diag(1, -1, *pad)]
    if fam == "Z2cubed":
        return [SquareMatrix.diag(-1, 1, 1), SquareMatrix.diag(1, -1, 1), SquareMatrix.diag(1, 1, -1)]
    if fam in DIHEDRAL_FAMILIES:
        z, zi = CycNumber.zeta(n), CycNumber.zeta(n, -1)
        if fam == "DihedralRank2":
            return [SquareMatrix.diag(z, zi), _perm([1, 0])]
        gens = [SquareMatrix.diag(z, zi, 1), _perm([1, 0, 2])]
        if fam == "DihedralxZ2":
            gens.append(SquareMatrix.diag(1, 1, -1))
        return gens
    # alpha swaps the first two coordinates, gamma permutes them cyclically
    alpha = _perm([1, 0, 2])
    gamma = _perm([1, 2, 0])
    if fam == "Tetrahedral":
        return [SquareMatrix.diag(1, -1, -1), SquareMatrix.diag(-1, 1, -1), gamma, alpha]
    if fam == "Octahedral":
        return [alpha, gamma, SquareMatrix.diag(-1, 1, 1)]
    if fam == "Icosahedral":
        return [_icosahedral_rotation(), gamma, SquareMatrix.diag(-1, -1, -1)]
    raise UnknownFamily(fam)  # pragma: no cover


def builtin_group(spec: FamilySpec) -> FiniteMatrixGroup:
    from .matgroup import close_group

    return close_group(builtin_generators(spec), rank=spec.rank)


# -- pseudoreflections and hyperplanes --------------------------------------------


def pseudoreflections(G: FiniteMatrixGroup) -> list[int]:
    def compute():
        out = []
        for c in G.classes:
            if c.fixed_dim == G.rank - 1:
                out.extend(c.member_indices)
        return sorted(out)

    return list(G.memo("pseudoreflections", compute))


def reflection_class_count(G: FiniteMatrixGroup) -> int:
    return sum(1 for c in G.classes if c.fixed_dim == G.rank - 1)


def is_reflection_group(G: FiniteMatrixGroup) -> bool:
    """Whether G is generated by its pseudoreflections; the trivial group counts."""
    if G.order == 1:
        return True
    return G.memo("is_reflection_group", lambda: len(G.closure_of(pseudoreflections(G))) == G.order)


def _canonical_form(vec: Sequence[CycNumber], conductor: int) -> tuple:
    lead = next(v for v in vec if not v.is_zero())
    inv = lead.inverse()
    return tuple((v * inv).promote(conductor).raw for v in vec)


def _hyperplane(G: FiniteMatrixGroup, i: int) -> tuple:
    """Canonical linear form cutting out the fixed hyperplane of element i.

    Every row of g - I is a multiple of that form; the first nonzero row is
    scaled so that its first nonzero entry is 1.
    """
    g = G.elements[i]
    diff = g - SquareMatrix.identity(G.rank)
    row = next(r for r in diff.rows if any(not v.is_zero() for v in r))
    return _canonical_form(row, G.conductor)


def _act_on_form(form: tuple, h: SquareMatrix, conductor: int) -> tuple:
    """alpha -> alpha . h^-1, the induced action on linear forms."""
    vec = [CycNumber._raw(N, num, den) for N, num, den in form]
    n = len(vec)
    image = []
    for j in range(n):
        acc = CycNumber.rational(0, conductor)
        for k in range(n):
            if not vec[k].is_zero() and not h.rows[k][j].is_zero():
                acc = acc + vec[k] * h.rows[k][j]
        image.append(acc)
    return _canonical_form(image, conductor)


def discriminant_components(G: FiniteMatrixGroup) -> tuple[int, list[int]]:
    """Number of hyperplane orbits and, per orbit, the pointwise stabiliser order m_i."""
    if not is_reflection_group(G):
        raise NotReflectionGroup("discriminant components need a reflection group")
    count, mults = G.memo("discriminant", lambda: _discriminant(G))
    return count, list(mults)


def _discriminant(G: FiniteMatrixGroup) -> tuple[int, list[int]]:
    planes: dict[tuple, int] = {}
    for i in pseudoreflections(G):
        key = _hyperplane(G, i)
        planes[key] = planes.get(key, 0) + 1
    gen_invs = [G.elements[G.inverse(s)] for s in G.generator_indices]
    seen: set = set()
    mults = []
    for plane in planes:
        if plane in seen:
            continue
        orbit = [plane]
        seen.add(plane)
        k = 0
        while k < len(orbit):
            cur = orbit[k]
            k += 1
            for hinv in gen_invs:
                img = _act_on_form(cur, hinv, G.conductor)
                if img not in seen:
                    if img not in planes:
                        raise InternalMismatch("hyperplane orbit left the set of reflection hyperplanes")
                    seen.add(img)
                    orbit.append(img)
        # pointwise stabiliser: identity plus the reflections fixing this plane
        mults.append(planes[plane] + 1)
    return len(mults), mults


# -- invariant theory ----------------------------------------------------------


def molien_series(G: FiniteMatrixGroup, precision: Optional[int] = None) -> list[Fraction]:
    """Coefficients of (1/|G|) sum_g 1/det(I - t g) up to t^precision.

    Each 1/det(I - t g) is a product of geometric series in zeta_L^a t over the
    eigenvalues of g.  Terms are accumulated as integer vectors indexed by
    exponents mod L (L the group exponent) and reduced modulo Phi_L at the end;
    every coefficient of the sum must come out rational.
    """
    if precision is None:
        precision = 2 * G.order
    if precision < 1:
        raise ValueError("precision must be positive")
    return list(G.memo(("molien", precision), lambda: _molien(G, precision)))


def _molien(G: FiniteMatrixGroup, precision: int) -> list[Fraction]:
    data = class_eigen_exponents(G)
    L = _lcm(*(r for r, _ in data))
    total = np.zeros((precision + 1, L), dtype=object)
    for (r, exps), cls in zip(data, G.classes):
        series = np.zeros((precision + 1, L), dtype=np.int64)
        series[0, 0] = 1
        for a in exps:
            shift = a * (L // r)
            for k in range(1, precision + 1):
                series[k] += np.roll(series[k - 1], shift)
        total += series.astype(object) * cls.size
    values = reduce_exponent_vector(total, L)
    out = []
    for k, v in enumerate(values):
        if not v.is_rational():
            raise InternalMismatch(f"Molien coefficient of t^{k} is not rational")
        out.append(v.to_rational() / G.order)
    return out


def invariant_degrees(G: FiniteMatrixGroup, precision: Optional[int] = None) -> tuple[int, ...]:
    """Degrees of basic invariants recovered greedily from the Molien series."""
    if not is_reflection_group(G):
        raise NotReflectionGroup("invariant degrees need a reflection group")
    series = molien_series(G, precision)
    residual = list(series)
    degrees = []
    for _ in range(G.rank):
        d = next((k for k in range(1, len(residual)) if residual[k] > 0), None)
        if d is None:
            raise DegreeRecoveryFailed("ran out of precision before finding all degrees")
        degrees.append(d)
        residual = [residual[k] - (residual[k - d] if k >= d else 0) for k in range(len(residual))]
    if residual[0] != 1 or any(residual[1:]):
        raise DegreeRecoveryFailed(f"Molien series is not 1/prod(1 - t^d) for d in {degrees}")
    if math.prod(degrees) != G.order:
        raise DegreeRecoveryFailed(f"product of degrees {degrees} is not |G| = {G.order}")
    if sum(d - 1 for d in degrees) != len(pseudoreflections(G)):
        raise DegreeRecoveryFailed(f"degrees {degrees} do not match the reflection count")
    return tuple(sorted(degrees))


# -- catalog -------------------------------------------------------------------


def catalog_signature(spec: FamilySpec) -> tuple:
    """(rank, order, reflections, discriminant components, degrees) from closed formulas."""
    fam, n, r = spec.family, spec.n, spec.rank
    if fam == "Z2":
        return (r, 2, 1, 1, (1,) * (r - 1) + (2,))
    if fam == "Z2xZ2":
        return (r, 4, 2, 2, (1,) * (r - 2) + (2, 2))
    if fam == "Z2cubed":
        return (3, 8, 3, 3, (2, 2, 2))
    if fam in DIHEDRAL_FAMILIES:
        comps = 1 if n % 2 else 2
        if fam == "DihedralRank2":
            return (2, 2 * n, n, comps, tuple(sorted((2, n))))
        if fam == "Dihedral":
            return (3, 2 * n, n, comps, tuple(sorted((1, 2, n))))
        return (3, 4 * n, n + 1, comps + 1, tuple(sorted((2, 2, n))))
    return {
        "Tetrahedral": (3, 24, 6, 1, (2, 3, 4)),
        "Octahedral": (3, 48, 9, 2, (2, 4, 6)),
        "Icosahedral": (3, 120, 15, 1, (2, 6, 10)),
    }[fam]


def _candidates(rank: int, order: int) -> list[FamilySpec]:
    out = []
    for fam in FAMILIES:
        if rank not in _RANKS[fam][1]:
            continue
        if fam in DIHEDRAL_FAMILIES:
            k = 4 if fam == "DihedralxZ2" else 2
            if order % k == 0 and order // k >= 3:
                out.append(FamilySpec(fam, order // k, rank))
        else:
            out.append(FamilySpec(fam, None, rank))
    return out


def classify(G: FiniteMatrixGroup) -> Optional[FamilySpec]:
    """The catalog entry matching G's invariants, or None if unrecognized."""
    if G.order == 1 or not is_reflection_group(G):
        return None
    sig = (
        G.rank,
        G.order,
        len(pseudoreflections(G)),
        discriminant_components(G)[0],
        invariant_degrees(G),
    )
    for spec in _candidates(G.rank, G.order):
        if catalog_signature(spec) == sig:
            return spec
    return None


@dataclass
class ReflectionReport:
    group_order: int
    reflection_count: int
    reflection_class_count: int
    discriminant_component_count: int
    hyperplane_multiplicities: list[int]
    invariant_degrees: tuple[int, ...]
    is_reflection_group: bool
    family: Optional[FamilySpec] = None

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "reflection_count": self.reflection_count,
            "reflection_class_count": self.reflection_class_count,
            "discriminant_component_count": self.discriminant_component_count,
            "hyperplane_multiplicities": list(self.hyperplane_multiplicities),
            "invariant_degrees": list(self.invariant_degrees),
            "is_reflection_group": self.is_reflection_group,
            "family": self.family.label if self.family else "unrecognized",
        }


def reflection_report(G: FiniteMatrixGroup) -> ReflectionReport:
    refl = is_reflection_group(G)
    comps, mults = discriminant_components(G) if refl else (0, [])
    return ReflectionReport(
        group_order=G.order,
        reflection_count=len(pseudoreflections(G)),
        reflection_class_count=reflection_class_count(G),
        discriminant_component_count=comps,
        hyperplane_multiplicities=mults,
        invariant_degrees=invariant_degrees(G) if refl else (),
        is_reflection_group=refl,
        family=classify(G),
    )
