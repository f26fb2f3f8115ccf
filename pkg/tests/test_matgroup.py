import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import DIHEDRAL_N, RANK3_FIXED, all_specs, spec_group, to_complex
from mckay3.errors import InternalMismatch, NotSL, OrderExceeded, Singular
from mckay3.exactnum import CycNumber
from mckay3.matgroup import (
    SquareMatrix,
    _fixed_dim_by_rank,
    _multiplicities_from_charpoly,
    age,
    close_group,
    conjugacy_classes,
    eigen_multiplicities,
    fixed_dim,
    fixed_dim_profile,
    junior_class_count,
    sl_part,
)
from mckay3.reflection import FamilySpec, builtin_generators

I3 = SquareMatrix.identity(3)


def brute_force_classes(G):
    """Conjugation orbits under every element, as a set of frozensets."""
    seen, out = set(), set()
    for i in range(G.order):
        if i in seen:
            continue
        orbit = frozenset(G.mul(G.mul(h, i), G.inverse(h)) for h in range(G.order))
        seen |= orbit
        out.add(orbit)
    return out


def numeric_fixed_dim(g):
    m = to_complex(g) - np.eye(g.rank)
    return g.rank - np.linalg.matrix_rank(m, tol=1e-8)


def numeric_age(g):
    total = 0.0
    for lam in np.linalg.eigvals(to_complex(g)):
        f = (cmath.phase(lam) / (2 * cmath.pi)) % 1.0
        # an eigenvalue 1 may come back at angle just below 2 pi
        total += 0.0 if f > 1 - 1e-9 else f
    assert abs(total - round(total)) < 1e-9
    return round(total)


class TestSquareMatrix:
    def test_products_and_inverse(self):
        z = CycNumber.zeta(5)
        g = SquareMatrix([[z, 1, 0], [0, 1, 0], [0, 0, -1]])
        assert g @ g.inverse() == I3
        assert g.det() == -z

    def test_charpoly_of_diagonal(self):
        g = SquareMatrix.diag(2, 3, 5)
        assert g.charpoly() == (10, 31, 30)  # e1, e2, e3

    def test_order(self):
        assert SquareMatrix.diag(CycNumber.zeta(6), 1, -1).order() == 6

    def test_rank(self):
        assert SquareMatrix([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).matrix_rank() == 2


class TestClosure:
    def test_sign_diagonals(self):
        G = close_group([SquareMatrix.diag(-1, 1, 1), SquareMatrix.diag(1, -1, 1), SquareMatrix.diag(1, 1, -1)])
        assert G.order == 8

    def test_tetrahedral(self, group):
        assert group("Tetrahedral").order == 24

    def test_empty_generators(self):
        G = close_group([], rank=3)
        assert G.order == 1 and G.elements[0] == I3

    def test_identity_first(self, group):
        assert group("Octahedral").elements[0] == I3

    def test_singular(self):
        with pytest.raises(Singular):
            close_group([SquareMatrix.diag(1, 0, 1)])

    def test_infinite(self):
        with pytest.raises(OrderExceeded):
            close_group([SquareMatrix.diag(2, 1, 1)], max_order=50)

    def test_max_order_boundary(self):
        gens = builtin_generators(FamilySpec("Octahedral"))
        assert close_group(gens, max_order=48).order == 48
        with pytest.raises(OrderExceeded):
            close_group(gens, max_order=47)

    @pytest.mark.parametrize("family", RANK3_FIXED)
    def test_closed_under_products(self, group, family):
        G = group(family)
        rng = random.Random(7)
        for _ in range(200):
            i, j = rng.randrange(G.order), rng.randrange(G.order)
            assert G.elements[i] @ G.elements[j] == G.elements[G.mul(i, j)]
            assert G.elements[G.mul(i, G.inverse(i))] == I3


class TestClasses:
    @pytest.mark.parametrize("family,count", [("Octahedral", 10), ("Z2cubed", 8), ("Icosahedral", 10)])
    def test_class_counts(self, group, family, count):
        assert len(conjugacy_classes(group(family))) == count

    @pytest.mark.parametrize("spec", all_specs(), ids=str)
    def test_class_equation(self, spec):
        G = spec_group(spec)
        sizes = [c.size for c in G.classes]
        assert sum(sizes) == G.order
        assert all(G.order % s == 0 for s in sizes)

    @pytest.mark.parametrize(
        "spec",
        [FamilySpec(f) for f in RANK3_FIXED] + [FamilySpec("DihedralxZ2", n) for n in (5, 6, 12)],
        ids=str,
    )
    def test_match_brute_force(self, spec):
        G = spec_group(spec)
        assert {frozenset(c.member_indices) for c in G.classes} == brute_force_classes(G)

    @pytest.mark.parametrize("family", ["Tetrahedral", "Octahedral", "Icosahedral"])
    def test_independent_of_generator_order(self, family):
        gens = builtin_generators(FamilySpec(family))
        G1 = close_group(gens)
        G2 = close_group(list(reversed(gens)))

        def partition(G):
            return {frozenset(G.elements[i].key() for i in c.member_indices) for c in G.classes}

        assert partition(G1) == partition(G2)

    @pytest.mark.parametrize("family", RANK3_FIXED)
    def test_class_data_constant_on_class(self, group, family):
        G = group(family)
        for c in G.classes:
            dims = {numeric_fixed_dim(G.elements[i]) for i in c.member_indices}
            assert dims == {c.fixed_dim}
            assert all(G.element_order(i) == c.element_order for i in c.member_indices)


class TestFixedDim:
    def test_simple(self):
        assert fixed_dim(I3) == 3
        assert fixed_dim(-I3) == 0
        assert fixed_dim(SquareMatrix.diag(-1, -1, 1)) == 1

    @pytest.mark.parametrize("spec", all_specs(), ids=str)
    def test_two_methods_agree_on_every_element(self, spec):
        G = spec_group(spec)
        for i, g in enumerate(G.elements):
            by_rank = _fixed_dim_by_rank(g)
            by_trace = _multiplicities_from_charpoly(g.charpoly(), G.rank, G.element_order(i))[0]
            assert by_rank == by_trace

    @pytest.mark.parametrize("family", RANK3_FIXED)
    def test_against_numeric_oracle(self, group, family):
        G = group(family)
        for g in G.elements:
            assert fixed_dim(g) == numeric_fixed_dim(g)

    def test_trace_average_by_explicit_powers(self, group):
        # (1/r) sum tr(g^k) with actual matrix powers, no Newton identities
        G = group("Icosahedral")
        for c in G.classes:
            g = G.elements[c.representative_index]
            r = c.element_order
            total = sum((g**k).trace() for k in range(r))
            assert total / r == c.fixed_dim

    def test_mismatch_is_detected(self):
        # multiplicities of a wrong order cannot be integral
        g = SquareMatrix.diag(CycNumber.zeta(3), 1, 1)
        with pytest.raises(InternalMismatch):
            _multiplicities_from_charpoly(g.charpoly(), 3, 2)


class TestProfiles:
    @pytest.mark.parametrize(
        "family,profile",
        [
            ("Tetrahedral", (1, 2, 1, 1)),
            ("Octahedral", (3, 4, 2, 1)),
            ("Icosahedral", (4, 4, 1, 1)),
            ("Z2cubed", (1, 3, 3, 1)),
        ],
    )
    def test_fixed_families(self, group, family, profile):
        assert fixed_dim_profile(group(family)) == profile

    @pytest.mark.parametrize("n", DIHEDRAL_N)
    def test_dihedral_times_z2(self, group, n):
        if n % 2:
            expected = ((n - 1) // 2, (n + 1) // 2, 2, 1)
        else:
            expected = (n // 2, (n + 4) // 2, 3, 1)
        assert fixed_dim_profile(group("DihedralxZ2", n)) == expected

    @pytest.mark.parametrize("spec", all_specs(), ids=str)
    def test_sums_to_class_count(self, spec):
        G = spec_group(spec)
        assert sum(fixed_dim_profile(G)) == len(G.classes)


class TestSLPart:
    @pytest.mark.parametrize("family,order", [("Tetrahedral", 12), ("Octahedral", 24), ("Icosahedral", 60)])
    def test_orders(self, group, family, order):
        assert sl_part(group(family)).order == order

    def test_already_sl(self, group):
        H = sl_part(group("Octahedral"))
        assert sl_part(H) is H

    @pytest.mark.parametrize("spec", [s for s in all_specs() if s.rank == 3], ids=str)
    def test_ages_of_rotations(self, spec):
        H = sl_part(spec_group(spec))
        for i, g in enumerate(H.elements):
            a = age(g, H.element_order(i))
            assert a in (0, 1)
            assert (a == 0) == (i == 0)

    @pytest.mark.parametrize("spec", [s for s in all_specs() if s.rank == 3 and (s.n or 0) <= 12], ids=str)
    def test_exponent_pairing(self, spec):
        H = sl_part(spec_group(spec))
        for i, g in enumerate(H.elements):
            j = H.inverse(i)
            assert age(g) + age(H.elements[j]) == 3 - fixed_dim(g)

    @pytest.mark.parametrize("family", RANK3_FIXED)
    def test_age_against_numeric_oracle(self, group, family):
        H = sl_part(group(family))
        for g in H.elements:
            assert age(g) == numeric_age(g)


class TestAge:
    def test_identity(self):
        assert age(I3) == 0

    def test_half_turn(self):
        assert age(SquareMatrix.diag(-1, -1, 1)) == 1

    def test_senior_element(self):
        z = CycNumber.zeta(3)
        assert age(SquareMatrix.diag(z**2, z**2, z**2)) == 2

    def test_not_sl(self):
        with pytest.raises(NotSL):
            age(SquareMatrix.diag(-1, 1, 1))

    def test_multiplicities(self):
        z = CycNumber.zeta(6)
        assert eigen_multiplicities(SquareMatrix.diag(z, z, -1)) == [0, 2, 0, 1, 0, 0]

    def test_exponents_give_fraction(self):
        z = CycNumber.zeta(7)
        assert age(SquareMatrix.diag(z, z**2, z**4)) == Fraction(1)


class TestJunior:
    @pytest.mark.parametrize("family,count", [("Tetrahedral", 3), ("Octahedral", 4), ("Icosahedral", 4)])
    def test_counts(self, group, family, count):
        assert junior_class_count(sl_part(group(family))) == count

    def test_requires_sl(self, group):
        with pytest.raises(NotSL):
            junior_class_count(group("Octahedral"))
