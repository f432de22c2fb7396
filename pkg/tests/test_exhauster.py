import random

import pytest

from exhausters.deriv import (
    Leaf,
    MaxNode,
    MinNode,
    directional_derivative_tree,
    eval_minmax,
)
from exhausters.errors import CapExceededError, DimensionMismatchError
from exhausters.exhauster import (
    Exhauster,
    eval_exhauster,
    exhauster_from_tree,
    normalize,
    polytope_families_equal,
    polytopes_equal,
    reduce_exhauster,
)
from exhausters.geometry import Polytope, sample_unit_directions

from helpers import (
    C1,
    C2,
    C3,
    C4,
    circle_directions,
    constraint_tree,
    objective_tree,
    random_expr,
    random_point,
)

L1, L2, L3, L4 = Leaf((1.0, 1.0)), Leaf((1.0, -1.0)), Leaf((-1.0, 1.0)), Leaf((-1.0, -1.0))


class TestNormalize:
    def test_cnf_of_min_of_maxes_is_verbatim(self):
        tree = MinNode((MaxNode((L1, L2)), MaxNode((L3, L4))))
        clauses = normalize(tree, "cnf")
        assert clauses == [((1.0, 1.0), (1.0, -1.0)), ((-1.0, 1.0), (-1.0, -1.0))]

    def test_dnf_distributes(self):
        tree = MinNode((MaxNode((L1, L2)), MaxNode((L3, L4))))
        clauses = normalize(tree, "dnf")
        assert clauses == [
            ((1.0, 1.0), (-1.0, 1.0)),
            ((1.0, 1.0), (-1.0, -1.0)),
            ((1.0, -1.0), (-1.0, 1.0)),
            ((1.0, -1.0), (-1.0, -1.0)),
        ]
        # Distribution preserves the function pointwise.
        rng = random.Random(1)
        for _ in range(100):
            g = (rng.uniform(-2, 2), rng.uniform(-2, 2))
            expected = eval_minmax(tree, g)
            via_dnf = max(min(sum(a * b for a, b in zip(form, g)) for form in clause)
                          for clause in clauses)
            assert via_dnf == pytest.approx(expected, abs=1e-12)

    def test_leaf_single_clause(self):
        assert normalize(Leaf((2.0, 0.0)), "cnf") == [((2.0, 0.0),)]
        assert normalize(Leaf((2.0, 0.0)), "dnf") == [((2.0, 0.0),)]

    def test_clause_cap(self):
        wide = MaxNode(tuple(MinNode((L1, L2, L3)) for _ in range(10)))
        with pytest.raises(CapExceededError):
            normalize(wide, "cnf", clause_cap=100)

    def test_bad_target(self):
        with pytest.raises(ValueError):
            normalize(L1, "nnf")


class TestConstruction:
    def test_constraint_upper_family(self):
        family = exhauster_from_tree(constraint_tree(), "upper")
        assert polytope_families_equal(family.sets, (C4, C3))

    def test_objective_upper_family_reduces_to_reference(self):
        family = reduce_exhauster(exhauster_from_tree(objective_tree(), "upper"))
        assert polytope_families_equal(family.sets, (C1, C2))

    def test_objective_lower_family(self):
        family = reduce_exhauster(exhauster_from_tree(objective_tree(), "lower"))
        assert polytope_families_equal(family.sets, (C3, C4))

    def test_leaf_gives_single_singleton(self):
        family = exhauster_from_tree(Leaf((2.0, -1.0)), "upper")
        assert len(family.sets) == 1
        assert family.sets[0].vertices == ((2.0, -1.0),)


class TestEvaluation:
    def test_upper_family_value(self):
        family = Exhauster("upper", 2, (C1, C2))
        assert eval_exhauster(family, (1, 0)) == pytest.approx(1.0)

    def test_constraint_upper_value(self):
        family = Exhauster("upper", 2, (C3, C4))
        assert eval_exhauster(family, (0, 1)) == pytest.approx(1.0)

    def test_zero_direction(self):
        family = Exhauster("lower", 2, (C3, C4))
        assert eval_exhauster(family, (0, 0)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            eval_exhauster(Exhauster("upper", 2, (C1,)), (1, 0, 0))


class TestPolytopeEquality:
    def test_permutation(self):
        assert polytopes_equal(
            Polytope.from_vertices([(1, 1), (1, -1)]),
            Polytope.from_vertices([(1, -1), (1, 1)]))

    def test_redundant_midpoint(self):
        assert polytopes_equal(
            Polytope.from_vertices([(1, 1), (1, -1)]),
            Polytope.from_vertices([(1, 1), (1, 0), (1, -1)]))

    def test_disjoint_segments(self):
        assert not polytopes_equal(C1, C2)

    def test_family_multiset_semantics(self):
        assert polytope_families_equal((C1, C2), (C2, C1))
        assert not polytope_families_equal((C1, C1), (C1, C2))
        assert not polytope_families_equal((C1,), (C1, C1))


class TestReduction:
    def test_duplicate_dropped(self):
        family = Exhauster("upper", 2, (C1, C1))
        reduced = reduce_exhauster(family)
        assert polytope_families_equal(reduced.sets, (C1,))

    def test_singleton_untouched(self):
        family = Exhauster("upper", 2, (C1,))
        assert reduce_exhauster(family).sets == family.sets

    def test_lower_family_from_objective_dnf(self):
        raw = exhauster_from_tree(objective_tree(), "lower")
        assert len(raw.sets) == 2  # lower form is already tight here
        reduced = reduce_exhauster(raw)
        assert polytope_families_equal(reduced.sets, (C3, C4))

    def test_constraint_lower_family_drops_diagonals(self):
        raw = exhauster_from_tree(constraint_tree(), "lower")
        assert len(raw.sets) == 4
        reduced = reduce_exhauster(raw)
        assert polytope_families_equal(reduced.sets, (C1, C2))

    def test_reduction_preserves_values_on_fresh_sample(self):
        rng = random.Random(17)
        for _ in range(10):
            expr = random_expr(rng)
            x = random_point(rng)
            tree = directional_derivative_tree(expr, x)
            for kind in ("upper", "lower"):
                family = exhauster_from_tree(tree, kind)
                reduced = reduce_exhauster(family, samples=240, seed=1)
                for g in sample_unit_directions(2, 97, seed=99):
                    assert eval_exhauster(reduced, g) == pytest.approx(
                        eval_exhauster(family, g), abs=1e-9)


class TestRepresentationFidelity:
    def test_families_match_tree_pointwise(self):
        rng = random.Random(19)
        for _ in range(15):
            expr = random_expr(rng)
            x = random_point(rng)
            tree = directional_derivative_tree(expr, x)
            upper = exhauster_from_tree(tree, "upper")
            lower = exhauster_from_tree(tree, "lower")
            for g in circle_directions(90):
                reference = eval_minmax(tree, g)
                assert eval_exhauster(upper, g) == pytest.approx(reference, abs=1e-9)
                assert eval_exhauster(lower, g) == pytest.approx(reference, abs=1e-9)

    def test_reference_families_agree_with_trees(self):
        for tree in (objective_tree(), constraint_tree()):
            upper = exhauster_from_tree(tree, "upper")
            lower = exhauster_from_tree(tree, "lower")
            for g in circle_directions(360):
                assert eval_exhauster(upper, g) == pytest.approx(
                    eval_exhauster(lower, g), abs=1e-9)
                assert eval_exhauster(upper, g) == pytest.approx(
                    eval_minmax(tree, g), abs=1e-9)


class TestJson:
    def test_round_trip(self):
        family = Exhauster("upper", 2, (C1, C2))
        data = family.to_json()
        assert data == {"kind": "upper", "dim": 2,
                        "sets": [[[1.0, 1.0], [-1.0, 1.0]],
                                 [[1.0, -1.0], [-1.0, -1.0]]]}
        again = Exhauster.from_json(data)
        assert again == family

    def test_rejects_bad_kind(self):
        with pytest.raises(ValueError):
            Exhauster("sideways", 2, (C1,))

    def test_rejects_missing_keys(self):
        with pytest.raises(ValueError):
            Exhauster.from_json({"kind": "upper", "dim": 2})
