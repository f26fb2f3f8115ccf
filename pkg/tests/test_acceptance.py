"""Acceptance gate: one test per criterion, every check exact.

Each criterion collects its failed checks; the test passes only when none
fail.  A PASS/FAIL line per criterion is printed in the terminal summary, or
directly when this file is run as a script.
"""

import math
import random
from fractions import Fraction

import pytest

from conftest import DIHEDRAL_N, all_specs, spec_group
from mckay3.exactnum import CycNumber, cyclotomic_polynomial, divisors, euler_phi
from mckay3.matgroup import _fixed_dim_by_rank, _multiplicities_from_charpoly, age, fixed_dim_profile, junior_class_count, sl_part
from mckay3.reflection import (
    FamilySpec,
    discriminant_components,
    invariant_degrees,
    pseudoreflections,
    reflection_class_count,
)
from mckay3.sodcalc import predict_from_group, run_pipeline
from mckay3.toric import builtin_toric_case, check_fan, half_integral_sum_lattice, half_lattice

RESULTS = {}


def G(family, n=None, rank=None):
    return spec_group(FamilySpec(family, n, rank))


class Checks:
    def __init__(self):
        self.failures = []
        self.count = 0

    def eq(self, label, got, expected):
        self.count += 1
        if got != expected:
            self.failures.append(f"{label}: got {got!r}, expected {expected!r}")


def criterion_1():
    c = Checks()
    c.eq("Z2cubed order", G("Z2cubed").order, 8)
    for fam, order, sl in (("Tetrahedral", 24, 12), ("Octahedral", 48, 24), ("Icosahedral", 120, 60)):
        c.eq(f"{fam} order", G(fam).order, order)
        c.eq(f"{fam} SL order", sl_part(G(fam)).order, sl)
    for n in DIHEDRAL_N:
        c.eq(f"DihedralxZ2({n}) order", G("DihedralxZ2", n).order, 4 * n)
    return c


def criterion_2():
    c = Checks()
    expected = {
        "Tetrahedral": (1, 2, 1, 1),
        "Octahedral": (3, 4, 2, 1),
        "Icosahedral": (4, 4, 1, 1),
        "Z2cubed": (1, 3, 3, 1),
    }
    for fam, profile in expected.items():
        c.eq(f"{fam} profile", fixed_dim_profile(G(fam)), profile)
    for n in DIHEDRAL_N:
        want = ((n - 1) // 2, (n + 1) // 2, 2, 1) if n % 2 else (n // 2, (n + 4) // 2, 3, 1)
        c.eq(f"DihedralxZ2({n}) profile", fixed_dim_profile(G("DihedralxZ2", n)), want)
    return c


def criterion_3():
    c = Checks()
    for spec in all_specs():
        grp = spec_group(spec)
        constructed = run_pipeline(spec)
        c.eq(f"{spec} construction vs prediction", constructed, predict_from_group(grp))
        c.eq(f"{spec} total vs class count", constructed.total, len(grp.classes))
    return c


def criterion_4():
    c = Checks()
    fixed = {
        "Z2cubed": (3, 3, 3),
        "Tetrahedral": (6, 1, 1),
        "Octahedral": (9, 2, 2),
        "Icosahedral": (15, 1, 1),
    }
    for fam, want in fixed.items():
        grp = G(fam)
        got = (len(pseudoreflections(grp)), reflection_class_count(grp), discriminant_components(grp)[0])
        c.eq(f"{fam} reflections/classes/components", got, want)
    for n in DIHEDRAL_N:
        grp = G("DihedralxZ2", n)
        parity = 2 if n % 2 else 3
        got = (len(pseudoreflections(grp)), reflection_class_count(grp), discriminant_components(grp)[0])
        c.eq(f"DihedralxZ2({n}) reflections/classes/components", got, (n + 1, parity, parity))
    return c


def criterion_5():
    c = Checks()
    for spec in all_specs():
        grp = spec_group(spec)
        d = invariant_degrees(grp)
        c.eq(f"{spec} product of degrees", math.prod(d), grp.order)
        c.eq(f"{spec} sum of (d - 1)", sum(x - 1 for x in d), len(pseudoreflections(grp)))
    c.eq("Tetrahedral degrees", sorted(invariant_degrees(G("Tetrahedral"))), [2, 3, 4])
    return c


def criterion_6():
    c = Checks()
    crossed, n_h = builtin_toric_case("YH_z2cubed")
    c.eq("crossed fan lattice is the integral-sum half lattice", n_h, half_integral_sum_lattice())
    c.eq("crossed fan smooth in integral-sum half lattice", check_fan(crossed, n_h).smooth, True)
    c.eq("crossed fan smooth in half lattice", check_fan(crossed, half_lattice()).smooth, True)
    medial, n_k = builtin_toric_case("YK_tetra")
    c.eq("medial fan smooth in tetrahedral lattice", check_fan(medial, n_k).smooth, True)
    rep = check_fan(medial, half_lattice())
    c.eq("medial fan in half lattice: index-2 cones", sorted(rep.cone_indices), [1, 1, 1, 2])
    tetra = check_fan(medial, n_k)
    c.eq("tetrahedral fan cone count", len(medial.max_cones), 4)
    c.eq("tetrahedral fan smooth and crepant", (tetra.smooth, tetra.crepant), (True, True))
    return c


def _random_cyc(rng):
    N = rng.choice((1, 3, 4, 5, 8, 12))
    return CycNumber(N, [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(euler_phi(N))])


def criterion_7():
    c = Checks()
    for spec in all_specs():
        grp = spec_group(spec)
        for i, g in enumerate(grp.elements):
            by_rank = _fixed_dim_by_rank(g)
            by_trace = _multiplicities_from_charpoly(g.charpoly(), grp.rank, grp.element_order(i))[0]
            c.eq(f"{spec} element {i} fixed_dim methods", by_rank, by_trace)
        if spec.rank == 3:
            H = sl_part(grp)
            for i, h in enumerate(H.elements):
                a = age(h, H.element_order(i))
                c.eq(f"{spec} SL element {i} age", a, Fraction(0) if i == 0 else Fraction(1))
    c.eq("junior classes of octahedral rotations", junior_class_count(sl_part(G("Octahedral"))), 4)
    c.eq("junior classes of icosahedral rotations", junior_class_count(sl_part(G("Icosahedral"))), 4)
    rng = random.Random(20261015)
    for _ in range(200):
        a, b, d = _random_cyc(rng), _random_cyc(rng), _random_cyc(rng)
        c.eq("associativity", (a * b) * d, a * (b * d))
        c.eq("distributivity", a * (b + d), a * b + a * d)
        c.eq("commutativity", a + b, b + a)
        if not a.is_zero():
            c.eq("inverse", a * a.inverse(), CycNumber.rational(1))
    for N in range(1, 61):
        prod = [1]
        for d in divisors(N):
            phi = cyclotomic_polynomial(d)
            out = [0] * (len(prod) + len(phi) - 1)
            for i, x in enumerate(prod):
                for j, y in enumerate(phi):
                    out[i + j] += x * y
            prod = out
        c.eq(f"cyclotomic product for N={N}", prod, [-1] + [0] * (N - 1) + [1])
    return c


CRITERIA = [
    (1, "group orders and SL-part orders", criterion_1),
    (2, "fixed-dimension profiles", criterion_2),
    (3, "SOD construction equals class prediction", criterion_3),
    (4, "reflection counts, classes and discriminant components", criterion_4),
    (5, "Shephard-Todd degree identities", criterion_5),
    (6, "toric smoothness and crepancy", criterion_6),
    (7, "property suites", criterion_7),
]


def _line(number, title, checks):
    status = "PASS" if not checks.failures else "FAIL"
    line = f"criterion {number}: {status}  {title} ({checks.count - len(checks.failures)}/{checks.count} checks)"
    return "\n".join([line] + [f"    {f}" for f in checks.failures[:10]])


@pytest.mark.parametrize("number,title,run", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, run):
    checks = run()
    RESULTS[number] = _line(number, title, checks)
    print(RESULTS[number])
    assert not checks.failures, RESULTS[number]


if __name__ == "__main__":
    for number, title, run in CRITERIA:
        print(_line(number, title, run()))
