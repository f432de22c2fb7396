import math
import random

import pytest

from exhausters.errors import DimensionMismatchError
from exhausters.geometry import (
    ANGLE_TOL,
    TOL,
    TWO_PI,
    ArcSet,
    LinearConstraint,
    Polytope,
    Sense,
    arcset_subset,
    cone_arcs,
    conjugate_membership,
    contains_origin,
    hull_contains,
    linear_feasibility,
    sample_unit_directions,
    support_value,
    unit_direction,
)

from helpers import C1, C3, random_polytope


class TestSupportValue:
    def test_max_over_segment(self):
        assert support_value(C3, (1, 0), "max") == pytest.approx(1.0)

    def test_min_over_segment(self):
        assert support_value(C1, (1, 0), "min") == pytest.approx(-1.0)

    def test_zero_direction(self):
        assert support_value(C1, (0, 0), "max") == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            support_value(C1, (1, 0, 0), "max")


class TestContainsOrigin:
    def test_segment_off_origin(self):
        assert not contains_origin(C1)

    def test_segment_through_origin(self):
        seg = Polytope.from_vertices([(1, 1), (-1, -1)])
        assert contains_origin(seg)

    def test_triangle_brute_force_cross_check(self):
        # Independent oracle: dense grid over the weight simplex.
        tri = Polytope.from_vertices([(1, 0), (0, 1), (-1, -1)])
        best = math.inf
        steps = 60
        for i in range(steps + 1):
            for j in range(steps + 1 - i):
                l1, l2 = i / steps, j / steps
                l3 = 1.0 - l1 - l2
                x = l1 * 1 + l2 * 0 + l3 * (-1)
                y = l1 * 0 + l2 * 1 + l3 * (-1)
                best = min(best, math.hypot(x, y))
        assert best < 1e-6  # the grid finds the origin, so the hull has it
        assert contains_origin(tri)

    def test_vertex_on_origin(self):
        assert contains_origin(Polytope.from_vertices([(0, 0), (2, 1)]))


class TestConjugateMembership:
    def test_inside(self):
        assert conjugate_membership(C3, (1, 0))

    def test_outside(self):
        assert not conjugate_membership(C3, (-1, 0))

    def test_boundary_vertex(self):
        assert conjugate_membership(C1, (0, 1))

    def test_matches_support_min(self):
        rng = random.Random(7)
        for _ in range(200):
            poly = random_polytope(rng)
            g = (rng.uniform(-2, 2), rng.uniform(-2, 2))
            expected = support_value(poly, g, "min") >= -TOL
            assert conjugate_membership(poly, g) == expected


class TestLinearFeasibility:
    def test_single_strict(self):
        res = linear_feasibility([LinearConstraint((1, 0), Sense.LE_MINUS_ONE)], 2)
        assert res.feasible
        assert res.witness == (-1.0, 0.0)

    def test_contradictory_strict(self):
        res = linear_feasibility([
            LinearConstraint((1, 0), Sense.LE_MINUS_ONE),
            LinearConstraint((-1, 0), Sense.LE_MINUS_ONE),
        ], 2)
        assert not res.feasible
        assert res.witness is None

    def test_mixed_system(self):
        cons = [
            LinearConstraint((1, 1), Sense.LE_ZERO),
            LinearConstraint((1, -1), Sense.LE_ZERO),
            LinearConstraint((0, 1), Sense.GE_ONE),
        ]
        res = linear_feasibility(cons, 2)
        assert res.feasible
        assert all(c.satisfied_by(res.witness) for c in cons)
        assert res.witness == (-1.0, 1.0)

    def test_empty_system(self):
        assert linear_feasibility([], 3).feasible

    def test_witnesses_resubstitute_on_random_systems(self):
        rng = random.Random(11)
        senses = list(Sense)
        for _ in range(300):
            dim = rng.choice([2, 3])
            cons = [
                LinearConstraint(
                    tuple(float(rng.randint(-3, 3)) for _ in range(dim)),
                    rng.choice(senses))
                for _ in range(rng.randint(1, 5))
            ]
            res = linear_feasibility(cons, dim)
            if res.feasible:
                for c in cons:
                    assert c.satisfied_by(res.witness, TOL)
                    # strict rows carry a near-unit margin
                    if c.sense is Sense.LE_MINUS_ONE:
                        assert c.value(res.witness) <= -1.0 + TOL
                    if c.sense is Sense.GE_ONE:
                        assert c.value(res.witness) >= 1.0 - TOL

    def test_deterministic_repeat(self):
        cons = [
            LinearConstraint((2, -1), Sense.GE_ZERO),
            LinearConstraint((1, 3), Sense.GE_ONE),
        ]
        first = linear_feasibility(cons, 2)
        second = linear_feasibility(cons, 2)
        assert first == second


class TestArcs:
    def test_dual_cone_arc(self):
        arcs = cone_arcs(C3, "all_geq")
        assert arcs.measure() == pytest.approx(math.pi / 2, abs=1e-9)
        for theta in (0.0, math.pi / 4, -math.pi / 4):
            assert arcs.contains(theta)
        for theta in (math.pi / 4 + 0.01, -math.pi / 4 - 0.01, math.pi):
            assert not arcs.contains(theta)

    def test_negative_dual_is_reflection(self):
        pos = cone_arcs(C3, "all_geq")
        neg = cone_arcs(C3, "all_leq")
        for k in range(360):
            theta = TWO_PI * k / 360
            assert pos.contains(theta) == neg.contains(theta + math.pi)

    def test_complement_predicate_arc(self):
        arcs = cone_arcs(C1, "any_leq")
        assert arcs.measure() == pytest.approx(3 * math.pi / 2, abs=1e-9)
        assert arcs.contains(math.pi / 4)      # boundary angle included
        assert not arcs.contains(math.pi / 2)  # interior of the open gap
        assert arcs.contains(0.0)
        assert arcs.contains(math.pi)

    def test_arc_membership_matches_predicates(self):
        # Exact carrier consistency: arcs agree with direct vertex-sign
        # evaluation on a dense random sample of angles.
        rng = random.Random(3)
        modes = {
            "all_geq": lambda p, g: support_value(p, g, "min") >= -TOL,
            "all_leq": lambda p, g: support_value(p, g, "max") <= TOL,
            "any_leq": lambda p, g: support_value(p, g, "min") <= TOL,
            "any_geq": lambda p, g: support_value(p, g, "max") >= -TOL,
        }
        for _ in range(25):
            poly = random_polytope(rng)
            arcs = {mode: cone_arcs(poly, mode) for mode in modes}
            for _ in range(40):
                theta = rng.uniform(0.0, TWO_PI)
                g = unit_direction(theta)
                for mode, predicate in modes.items():
                    assert arcs[mode].contains(theta) == predicate(poly, g), \
                        f"{mode} disagrees at {theta} on {poly.vertices}"

    def test_zero_vertex_means_no_restriction(self):
        poly = Polytope.from_vertices([(0, 0)])
        for mode in ("all_geq", "all_leq", "any_leq", "any_geq"):
            assert cone_arcs(poly, mode).measure() == pytest.approx(TWO_PI)

    def test_point_arc_from_opposite_vertices(self):
        poly = Polytope.from_vertices([(1, 0), (-1, 0)])
        arcs = cone_arcs(poly, "all_geq")
        assert arcs.contains(math.pi / 2)
        assert arcs.contains(3 * math.pi / 2)
        assert arcs.measure() == pytest.approx(0.0, abs=1e-9)

    def test_requires_plane(self):
        with pytest.raises(DimensionMismatchError):
            cone_arcs(Polytope.from_vertices([(1, 0, 0)]), "all_geq")


class TestArcsetSubset:
    def test_full_cover(self):
        held, witness = arcset_subset(ArcSet.normalize([(0, math.pi)]), ArcSet.full())
        assert held and witness is None

    def test_half_cover_witness(self):
        held, witness = arcset_subset(
            ArcSet.normalize([(0, math.pi)]),
            ArcSet.normalize([(0, math.pi / 2)]))
        assert not held
        assert witness == pytest.approx(3 * math.pi / 4)

    def test_reflexive(self):
        arcs = ArcSet.normalize([(-math.pi / 4, math.pi / 4),
                                 (3 * math.pi / 4, 5 * math.pi / 4)])
        held, _ = arcset_subset(arcs, arcs)
        assert held

    def test_wraparound_gap_midpoint(self):
        # Uncovered region straddles angle zero; the witness is its true
        # midpoint, not an artifact of the cut at zero.
        lhs = ArcSet.normalize([(-math.pi / 4, math.pi / 4)])
        rhs = ArcSet.empty()
        held, witness = arcset_subset(lhs, rhs)
        assert not held
        assert witness == pytest.approx(0.0, abs=1e-9)

    def test_witness_is_uncovered(self):
        rng = random.Random(23)
        for _ in range(100):
            raw_a = [(rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI)) for _ in range(2)]
            raw_b = [(rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI)) for _ in range(2)]
            a = ArcSet.normalize([(s, s + abs(e - s) % TWO_PI) for s, e in raw_a])
            b = ArcSet.normalize([(s, s + abs(e - s) % TWO_PI) for s, e in raw_b])
            held, witness = arcset_subset(a, b)
            if not held:
                assert a.contains(witness, 1e-7)
                assert not b.contains(witness, ANGLE_TOL)


class TestArcSetAlgebra:
    def test_union_idempotent(self):
        arcs = ArcSet.normalize([(0.5, 1.5), (3.0, 4.0)])
        assert arcs.union(arcs).arcs == arcs.arcs

    def test_intersect_with_full(self):
        arcs = ArcSet.normalize([(0.5, 1.5)])
        result = arcs.intersect(ArcSet.full())
        assert result.measure() == pytest.approx(1.0)

    def test_boundary_identification_at_zero(self):
        left = ArcSet.normalize([(5.0, TWO_PI)])
        right = ArcSet.normalize([(0.0, 1.0)])
        meet = left.intersect(right)
        assert meet.contains(0.0)
        assert meet.measure() == pytest.approx(0.0, abs=1e-9)


class TestInvariants:
    def test_positive_homogeneity_of_support(self):
        rng = random.Random(5)
        for _ in range(200):
            poly = random_polytope(rng)
            g = (rng.uniform(-3, 3), rng.uniform(-3, 3))
            lam = rng.uniform(0.01, 10.0)
            for mode in ("max", "min"):
                scaled = support_value(poly, tuple(lam * c for c in g), mode)
                assert scaled == pytest.approx(lam * support_value(poly, g, mode),
                                               rel=1e-9, abs=1e-9)

    def test_origin_membership_bounds_supports(self):
        rng = random.Random(9)
        found = 0
        for _ in range(200):
            poly = random_polytope(rng)
            if not contains_origin(poly):
                continue
            found += 1
            for _ in range(20):
                g = (rng.uniform(-3, 3), rng.uniform(-3, 3))
                assert support_value(poly, g, "min") <= TOL
                assert support_value(poly, g, "max") >= -TOL
        assert found > 10

    def test_hull_contains_midpoints(self):
        rng = random.Random(13)
        for _ in range(100):
            poly = random_polytope(rng, max_vertices=4)
            a = rng.choice(poly.vertices)
            b = rng.choice(poly.vertices)
            t = rng.random()
            mid = tuple(t * x + (1 - t) * y for x, y in zip(a, b))
            assert hull_contains(poly, mid)

    def test_sample_unit_directions_deterministic(self):
        assert sample_unit_directions(3, 50, seed=4) == \
            sample_unit_directions(3, 50, seed=4)
        for g in sample_unit_directions(3, 50, seed=4):
            assert math.hypot(*g) == pytest.approx(1.0)
