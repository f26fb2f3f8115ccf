import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mckay3.errors import Degenerate, UnknownCase
from mckay3.toric import (
    EXPECTED_TORIC,
    TORIC_CASES,
    Fan,
    FanReport,
    RefinedLattice,
    builtin_toric_case,
    check_fan,
    cone_index,
    fan_volume,
    half_integral_sum_lattice,
    half_lattice,
    primitive_on_ray,
    standard_lattice,
)

H = Fraction(1, 2)
E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
M12, M23, M13 = (H, H, 0), (0, H, H), (H, 0, H)


class TestLattices:
    def test_covolumes(self):
        assert standard_lattice().covolume == 1
        assert half_lattice().covolume == Fraction(1, 8)
        assert half_integral_sum_lattice().covolume == Fraction(1, 4)

    def test_membership(self):
        N = half_integral_sum_lattice()
        assert N.contains(M12)
        assert not N.contains((H, 0, 0))
        assert N.contains_standard()
        assert N.index_over_standard() == 4

    def test_from_generators_agrees(self):
        # Z^3 + (1/2)(1,1,0) + (1/2)(0,1,1) is the integral-sum half lattice
        N = RefinedLattice.from_generators([E1, E2, E3, M12, M23])
        ref = half_integral_sum_lattice()
        assert N.covolume == ref.covolume
        assert all(ref.contains(g) for g in N.generators)

    def test_from_generators_redundant(self):
        N = RefinedLattice.from_generators([(2, 0, 0), (0, 3, 0), (0, 0, 1), (4, 3, 0), (6, 0, 0)])
        assert N.covolume == 6

    def test_degenerate(self):
        with pytest.raises(Degenerate):
            RefinedLattice(((1, 0, 0), (0, 1, 0), (1, 1, 0)))
        with pytest.raises(Degenerate):
            RefinedLattice.from_generators([E1, E2])

    def test_sl_type(self):
        assert half_integral_sum_lattice().is_sl_type()
        assert standard_lattice().is_sl_type()
        assert not half_lattice().is_sl_type()


class TestPrimitive:
    def test_standard(self):
        assert primitive_on_ray(E1, standard_lattice()) == (1, 0, 0)

    def test_half_lattice(self):
        assert primitive_on_ray(E1, half_lattice()) == (H, 0, 0)

    def test_integral_sum(self):
        assert primitive_on_ray(M12, half_integral_sum_lattice()) == (H, H, 0)
        assert primitive_on_ray((3, 3, 0), half_integral_sum_lattice()) == (H, H, 0)

    def test_zero(self):
        with pytest.raises(Degenerate):
            primitive_on_ray((0, 0, 0), standard_lattice())


class TestConeIndex:
    def test_standard_chart(self):
        assert cone_index([E1, E2, E3], standard_lattice()) == 1

    def test_central_cone(self):
        assert cone_index([M12, M23, M13], half_lattice()) == 2
        assert cone_index([M12, M23, M13], half_integral_sum_lattice()) == 1

    def test_dependent(self):
        with pytest.raises(Degenerate):
            cone_index([E1, E2, (1, 1, 0)], standard_lattice())

    @pytest.mark.parametrize("lattice", [standard_lattice(), half_lattice(), half_integral_sum_lattice()], ids=str)
    def test_permutation_invariance(self, lattice):
        rays = [(1, 0, 0), (1, 2, 0), (3, 1, 5)]
        values = {cone_index(list(p), lattice) for p in itertools.permutations(rays)}
        assert len(values) == 1

    @given(st.lists(st.tuples(*[st.integers(-4, 4)] * 3), min_size=3, max_size=3), st.permutations(range(3)))
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariance_random(self, rays, perm):
        try:
            base = cone_index(rays, half_lattice())
        except Degenerate:
            return
        assert cone_index([rays[i] for i in perm], half_lattice()) == base


class TestFan:
    def test_overlapping_cones_rejected(self):
        with pytest.raises(Degenerate):
            Fan([E1, E2, E3, (1, 1, 1)], [(0, 1, 2), (0, 1, 3)])

    def test_nested_cones_rejected(self):
        # (e3, m12, e1) lies inside (e1, e2, e3)
        with pytest.raises(Degenerate):
            Fan([E1, E2, E3, M12], [(0, 1, 2), (2, 3, 0)])

    def test_crossing_cones_rejected(self):
        # (e1, m23, e3) and (e2, m13, e3) share only e3 but their edges cross
        with pytest.raises(Degenerate):
            Fan([E1, E2, E3, M23, M13], [(0, 3, 2), (1, 4, 2)])

    def test_star_subdivision_accepted(self):
        Fan([E1, E2, E3, (1, 1, 1)], [(0, 1, 3), (1, 2, 3), (0, 2, 3)])

    def test_not_simplicial(self):
        with pytest.raises(Degenerate):
            Fan([E1, E2, (1, 1, 0)], [(0, 1, 2)])


class TestCheckFan:
    def test_crossed_in_integral_sum_lattice(self):
        fan, N = builtin_toric_case("YH_z2cubed")
        rep = check_fan(fan, N)
        assert rep.smooth and rep.crepant is True

    def test_crossed_in_half_lattice(self):
        fan, N = builtin_toric_case("Y_z2cubed")
        rep = check_fan(fan, N)
        assert rep.smooth and rep.crepant is None

    def test_medial_in_half_lattice(self):
        fan, N = builtin_toric_case("HHilbQuot_z2cubed")
        rep = check_fan(fan, N)
        assert not rep.smooth
        assert sorted(rep.cone_indices) == [1, 1, 1, 2]
        assert rep.singular_cones == [(3, 4, 5)]

    def test_tetra(self):
        fan, N = builtin_toric_case("YK_tetra")
        rep = check_fan(fan, N)
        assert len(fan.max_cones) == 4
        assert rep.smooth and rep.crepant is True

    @pytest.mark.parametrize("case", TORIC_CASES)
    def test_expected_outcomes(self, case):
        rep = check_fan(*builtin_toric_case(case))
        smooth, crepant, indices = EXPECTED_TORIC[case]
        assert (rep.smooth, rep.crepant, tuple(sorted(rep.cone_indices))) == (smooth, crepant, indices)

    def test_unknown_case(self):
        with pytest.raises(UnknownCase):
            builtin_toric_case("Y_octa")

    @pytest.mark.parametrize("case", TORIC_CASES)
    def test_report_json_round_trip(self, case):
        rep = check_fan(*builtin_toric_case(case))
        data = json.loads(json.dumps(rep.to_json()))
        assert FanReport.from_json(data) == rep


class TestVolume:
    @pytest.mark.parametrize("lattice", [standard_lattice(), half_lattice(), half_integral_sum_lattice()], ids=str)
    def test_retriangulation_preserves_volume(self, lattice):
        crossed, _ = builtin_toric_case("YH_z2cubed")
        medial, _ = builtin_toric_case("HHilb_z2cubed")
        assert fan_volume(crossed, lattice) == fan_volume(medial, lattice)
        # both triangulate the simplex spanned by e1, e2, e3
        assert fan_volume(crossed, lattice) == 1 / lattice.covolume

    def test_smooth_means_index_one(self):
        for case in TORIC_CASES:
            rep = check_fan(*builtin_toric_case(case))
            assert rep.smooth == all(k == 1 for k in rep.cone_indices)
