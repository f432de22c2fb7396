"""Families of polytopes representing a piecewise-linear positively
homogeneous function.

An upper family evaluates as the minimum over its sets of the maximal
vertex product; a lower family as the maximum of the minimal products. Both
come out of the same min/max tree by lattice distributivity, so they agree
pointwise with the tree and with each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .deriv import Leaf, MaxNode, MinMaxTree, MinNode, tree_dim
from .errors import CapExceededError, DimensionMismatchError
from .geometry import (
    DEFAULT_PIVOT_CAP,
    TOL,
    LinearConstraint,
    Polytope,
    Sense,
    Vector,
    hull_contains,
    linear_feasibility,
    sample_unit_directions,
    support_value,
)

DEFAULT_CLAUSE_CAP = 10_000
KINDS = ("upper", "lower")


@dataclass(frozen=True)
class Exhauster:
    """Tagged family of polytopes; ``upper`` is min-of-max, ``lower`` is
    max-of-min."""

    kind: str
    dim: int
    sets: tuple[Polytope, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "sets", tuple(self.sets))
        if not self.sets:
            raise ValueError("a family needs at least one set")
        for s in self.sets:
            if s.dim != self.dim:
                raise DimensionMismatchError(
                    f"set of dimension {s.dim} in a family of dimension {self.dim}")

    @classmethod
    def from_json(cls, data) -> "Exhauster":
        if not isinstance(data, dict):
            raise ValueError("family must be an object")
        for key in ("kind", "dim", "sets"):
            if key not in data:
                raise ValueError(f"family is missing {key!r}")
        sets = tuple(Polytope.from_json(s) for s in data["sets"])
        return cls(str(data["kind"]), int(data["dim"]), sets)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "sets": [s.to_json() for s in self.sets],
        }


def normalize(tree: MinMaxTree, target: str, *,
              clause_cap: int = DEFAULT_CLAUSE_CAP) -> list[tuple[Vector, ...]]:
    """Flatten a min/max tree into clause form by lattice distributivity.

    target 'cnf': clauses are max-groups and the tree equals their minimum;
    target 'dnf': clauses are min-groups and the tree equals their maximum.
    Pointwise equality is exact; only the representation changes. Clause
    count is capped because distribution multiplies.
    """
    if target not in ("cnf", "dnf"):
        raise ValueError(f"target must be 'cnf' or 'dnf', got {target!r}")
    concat_node = MinNode if target == "cnf" else MaxNode

    def flatten(node: MinMaxTree) -> list[tuple[Vector, ...]]:
        if isinstance(node, Leaf):
            return [(node.form,)]
        if isinstance(node, concat_node):
            clauses: list[tuple[Vector, ...]] = []
            for child in node.children:
                clauses.extend(flatten(child))
                if len(clauses) > clause_cap:
                    raise CapExceededError(
                        f"clause count exceeded {clause_cap}")
            return clauses
        acc: list[tuple[Vector, ...]] = [()]
        for child in node.children:
            child_clauses = flatten(child)
            if len(acc) * len(child_clauses) > clause_cap:
                raise CapExceededError(f"clause count exceeded {clause_cap}")
            acc = [a + c for a in acc for c in child_clauses]
        return acc

    return flatten(tree)


def exhauster_from_tree(tree: MinMaxTree, kind: str, *,
                        clause_cap: int = DEFAULT_CLAUSE_CAP) -> Exhauster:
    """Build the family of the requested kind from a min/max tree.

    Each clause of the matching normal form becomes one polytope whose
    vertices are the clause's linear forms verbatim; redundant vertices are
    left alone (hull equality, not list equality, is the notion of sameness
    downstream).
    """
    target = "cnf" if kind == "upper" else "dnf"
    clauses = normalize(tree, target, clause_cap=clause_cap)
    dim = tree_dim(tree)
    sets = tuple(Polytope(dim, clause) for clause in clauses)
    return Exhauster(kind, dim, sets)


def eval_exhauster(family: Exhauster, g: Sequence[float]) -> float:
    if len(g) != family.dim:
        raise DimensionMismatchError(
            f"direction of length {len(g)} against dimension {family.dim}")
    if family.kind == "upper":
        return min(support_value(s, g, "max") for s in family.sets)
    return max(support_value(s, g, "min") for s in family.sets)


def polytopes_equal(a: Polytope, b: Polytope, tol: float = TOL) -> bool:
    """Hull equality: every vertex of each polytope lies in the hull of the
    other."""
    if a.dim != b.dim:
        return False
    return all(hull_contains(b, v, tol=tol) for v in a.vertices) and \
        all(hull_contains(a, v, tol=tol) for v in b.vertices)


def polytope_families_equal(a: Iterable[Polytope], b: Iterable[Polytope],
                            tol: float = TOL) -> bool:
    """Multiset equality of two polytope families under hull equality."""
    remaining = list(b)
    for pa in a:
        for i, pb in enumerate(remaining):
            if polytopes_equal(pa, pb, tol):
                remaining.pop(i)
                break
        else:
            return False
    return not remaining


def reduce_exhauster(family: Exhauster, samples: int | None = None, seed: int = 0, *,
                     max_combinations: int = 1_000_000,
                     max_pivots: int = DEFAULT_PIVOT_CAP) -> Exhauster:
    """Drop family members that never decide the min (resp. max) value.

    Sampling proposes a candidate; a feasibility search must then certify
    that no direction strictly prefers the candidate over every remaining
    set. Only certified candidates are removed, so evaluation is preserved
    pointwise, not just on the sample. Candidates whose certification would
    need more than ``max_combinations`` vertex selections are kept.
    """
    if samples is None:
        samples = 720 if family.dim == 2 else 10 * family.dim * family.dim
    if samples < 1:
        raise ValueError("need at least one sample direction")
    directions = sample_unit_directions(family.dim, samples, seed)
    work = list(family.sets)
    pos = 0
    while len(work) > 1 and pos < len(work):
        candidate = work[pos]
        rest = work[:pos] + work[pos + 1:]
        if _redundant_on_samples(candidate, rest, family.kind, directions) and \
                _certified_redundant(candidate, rest, family.kind,
                                     max_combinations, max_pivots):
            work.pop(pos)
        else:
            pos += 1
    return Exhauster(family.kind, family.dim, tuple(work))


def _redundant_on_samples(candidate: Polytope, rest: list[Polytope], kind: str,
                          directions: list[Vector]) -> bool:
    for g in directions:
        if kind == "upper":
            if min(support_value(s, g, "max") for s in rest) > \
                    support_value(candidate, g, "max") + TOL:
                return False
        else:
            if max(support_value(s, g, "min") for s in rest) < \
                    support_value(candidate, g, "min") - TOL:
                return False
    return True


def _certified_redundant(candidate: Polytope, rest: list[Polytope], kind: str,
                         max_combinations: int, max_pivots: int) -> bool:
    """Certify that no direction strictly prefers the candidate.

    For an upper family the candidate matters somewhere only if a direction
    makes every remaining set's max-support strictly larger than the
    candidate's, i.e. some vertex choice w per remaining set satisfies
    ``<w - v, g> > 0`` for all candidate vertices v. Enumerate the vertex
    choices and feed each system to the deterministic solver; if every one
    is infeasible the candidate is redundant. Lower families are the
    mirrored statement.
    """
    total = 1
    for s in rest:
        total *= len(s.vertices)
        if total > max_combinations:
            return False
    sense = Sense.GE_ONE if kind == "upper" else Sense.LE_MINUS_ONE
    ranges = [range(len(s.vertices)) for s in rest]
    for choice in product(*ranges):
        constraints = []
        for s, j in zip(rest, choice):
            w = s.vertices[j]
            for v in candidate.vertices:
                normal = tuple(wi - vi for wi, vi in zip(w, v))
                constraints.append(LinearConstraint(normal, sense))
        if linear_feasibility(constraints, candidate.dim,
                              max_pivots=max_pivots).feasible:
            return False
    return True
