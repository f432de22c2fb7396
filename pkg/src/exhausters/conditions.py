"""Necessary optimality condition checkers.

Each constrained condition is an inclusion between two cone regions: the
region where the constraint's directional derivative is nonpositive must
lie inside the region where the objective's derivative has the sign an
extremum requires. Regions are unions or intersections of four primitive
vertex-sign predicates over the family members. Inclusions are decided
exactly, either on the circle by angular-arc algebra (plane only) or in any
dimension by enumerating vertex choices and certifying every branch with
the deterministic feasibility solver. A sampled oracle that works straight
from the derivative trees cross-checks each verdict but never claims an
exact "holds".
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from enum import Enum
from itertools import product
from typing import Iterable, Optional, Sequence, Union

from .deriv import MinMaxTree, eval_minmax, tree_dim, tree_leaves
from .errors import DimensionMismatchError, ExhausterKindError
from .exhauster import Exhauster
from .geometry import (
    ANGLE_TOL,
    DEFAULT_PIVOT_CAP,
    TOL,
    TWO_PI,
    ArcSet,
    LinearConstraint,
    Polytope,
    Sense,
    Vector,
    arcset_subset,
    as_vector,
    cone_arcs,
    contains_origin,
    linear_feasibility,
    sample_unit_directions,
    support_value,
    unit_direction,
)

DEFAULT_COMBINATION_CAP = 1_000_000
ORACLE_MARGIN = 1e-6


class AtomKind(str, Enum):
    """Primitive direction predicates over one polytope C.

    The operational semantics, on a direction g and the vertices v of C:

    ``K_PLUS``          every <v, g> >= 0   (the dual cone of cone{C})
    ``NEG_K_PLUS``      every <v, g> <= 0   (its negative)
    ``NOT_K_PLUS``      some  <v, g> <= 0   (closed complement of the dual)
    ``NOT_NEG_K_PLUS``  some  <v, g> >= 0

    When C contains the origin the two complement-style predicates hold for
    every direction while the closed set-complement they normally encode
    degenerates; the predicates stay the decidable ground truth and the
    checkers emit a note naming such sets.
    """

    K_PLUS = "kplus"
    NEG_K_PLUS = "neg_kplus"
    NOT_K_PLUS = "not_kplus"
    NOT_NEG_K_PLUS = "not_neg_kplus"


@dataclass(frozen=True)
class RegionAtom:
    kind: AtomKind
    polytope: Polytope

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", AtomKind(self.kind))


@dataclass(frozen=True)
class RegionExpr:
    """Union or intersection of region atoms (one atom per family set)."""

    combinator: str
    atoms: tuple[RegionAtom, ...]

    def __post_init__(self) -> None:
        if self.combinator not in ("intersection", "union"):
            raise ValueError(f"bad combinator {self.combinator!r}")
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise ValueError("a region needs at least one atom")
        dims = {a.polytope.dim for a in self.atoms}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixed dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.atoms[0].polytope.dim


class ConditionID(str, Enum):
    """Constrained ids read SENSE_FKIND_UKIND: which family of the
    objective f and of the constraint u the condition is phrased in.
    Unconstrained ids read UNC_SENSE_FKIND."""

    MIN_UPPER_LOWER = "MIN_UPPER_LOWER"
    MIN_UPPER_UPPER = "MIN_UPPER_UPPER"
    MIN_LOWER_LOWER = "MIN_LOWER_LOWER"
    MIN_LOWER_UPPER = "MIN_LOWER_UPPER"
    MAX_LOWER_LOWER = "MAX_LOWER_LOWER"
    MAX_LOWER_UPPER = "MAX_LOWER_UPPER"
    MAX_UPPER_LOWER = "MAX_UPPER_LOWER"
    MAX_UPPER_UPPER = "MAX_UPPER_UPPER"
    UNC_MIN_UPPER = "UNC_MIN_UPPER"
    UNC_MIN_LOWER = "UNC_MIN_LOWER"
    UNC_MAX_LOWER = "UNC_MAX_LOWER"
    UNC_MAX_UPPER = "UNC_MAX_UPPER"


CONSTRAINED_IDS = tuple(cid for cid in ConditionID if not cid.value.startswith("UNC"))
UNCONSTRAINED_IDS = tuple(cid for cid in ConditionID if cid.value.startswith("UNC"))

CONDITION_READINGS = {
    ConditionID.MIN_UPPER_LOWER: "minimum: objective's upper family (proper) with constraint's lower family",
    ConditionID.MIN_UPPER_UPPER: "minimum: objective's upper family (proper) with constraint's upper family",
    ConditionID.MIN_LOWER_LOWER: "minimum: objective's lower family (adjoint) with constraint's lower family",
    ConditionID.MIN_LOWER_UPPER: "minimum: objective's lower family (adjoint) with constraint's upper family",
    ConditionID.MAX_LOWER_LOWER: "maximum: objective's lower family (proper) with constraint's lower family",
    ConditionID.MAX_LOWER_UPPER: "maximum: objective's lower family (proper) with constraint's upper family",
    ConditionID.MAX_UPPER_LOWER: "maximum: objective's upper family (adjoint) with constraint's lower family",
    ConditionID.MAX_UPPER_UPPER: "maximum: objective's upper family (adjoint) with constraint's upper family",
    ConditionID.UNC_MIN_UPPER: "unconstrained minimum: origin in every set of the upper family",
    ConditionID.UNC_MIN_LOWER: "unconstrained minimum: dual cones of the lower family cover all directions",
    ConditionID.UNC_MAX_LOWER: "unconstrained maximum: origin in every set of the lower family",
    ConditionID.UNC_MAX_UPPER: "unconstrained maximum: negative dual cones of the upper family cover all directions",
}


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.

    ``violated`` always carries a re-checkable witness direction. Sampled
    methods never report a plain ``holds``; their positive outcome is
    ``inconclusive`` so that exactness claims stay confined to the exact2d
    and lp_enumeration methods.
    """

    status: str
    witness: Optional[Vector]
    certificate: str
    method: str
    condition: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "status": self.status,
            "method": self.method,
            "witness": list(self.witness) if self.witness is not None else None,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class ConstrainedCondition:
    cid: ConditionID
    lhs: RegionExpr
    rhs: RegionExpr


@dataclass(frozen=True)
class UnconstrainedCondition:
    cid: ConditionID
    family: Exhauster


# ---------------------------------------------------------------------------
# Atom and region evaluation
# ---------------------------------------------------------------------------

def atom_membership(atom: RegionAtom, g: Sequence[float], tol: float = TOL) -> bool:
    """Evaluate the atom's vertex-sign predicate at a direction.

    ``tol`` loosens the comparison; pass a negative value to demand the
    predicate with a strict margin instead.
    """
    if atom.kind is AtomKind.NOT_K_PLUS:
        return support_value(atom.polytope, g, "min") <= tol
    if atom.kind is AtomKind.NOT_NEG_K_PLUS:
        return support_value(atom.polytope, g, "max") >= -tol
    if atom.kind is AtomKind.K_PLUS:
        return support_value(atom.polytope, g, "min") >= -tol
    return support_value(atom.polytope, g, "max") <= tol


def region_membership(expr: RegionExpr, g: Sequence[float], tol: float = TOL) -> bool:
    if expr.combinator == "intersection":
        return all(atom_membership(a, g, tol) for a in expr.atoms)
    return any(atom_membership(a, g, tol) for a in expr.atoms)


_ARC_MODE = {
    AtomKind.K_PLUS: "all_geq",
    AtomKind.NEG_K_PLUS: "all_leq",
    AtomKind.NOT_K_PLUS: "any_leq",
    AtomKind.NOT_NEG_K_PLUS: "any_geq",
}


def arcs_from_atom(atom: RegionAtom) -> ArcSet:
    """Exact trace of the atom's predicate on the unit circle (plane only)."""
    return cone_arcs(atom.polytope, _ARC_MODE[atom.kind])


def region_arcs(expr: RegionExpr) -> ArcSet:
    acc: Optional[ArcSet] = None
    for atom in expr.atoms:
        arcs = arcs_from_atom(atom)
        if acc is None:
            acc = arcs
        elif expr.combinator == "intersection":
            acc = acc.intersect(arcs)
        else:
            acc = acc.union(arcs)
    assert acc is not None
    return acc


# ---------------------------------------------------------------------------
# Condition catalog
# ---------------------------------------------------------------------------

def _constrained_sides(sense: str, f_kind: str, u_kind: str,
                       ef: Exhauster, eu: Exhauster) -> tuple[RegionExpr, RegionExpr]:
    # Left side: operational form of "constraint derivative <= 0" in terms
    # of u's family. Right side: the sign region the extremum forces on the
    # objective derivative, in terms of f's family.
    if u_kind == "lower":
        lhs = RegionExpr("intersection",
                         tuple(RegionAtom(AtomKind.NOT_K_PLUS, c) for c in eu.sets))
    else:
        lhs = RegionExpr("union",
                         tuple(RegionAtom(AtomKind.NEG_K_PLUS, c) for c in eu.sets))
    if sense == "min" and f_kind == "upper":
        rhs = RegionExpr("intersection",
                         tuple(RegionAtom(AtomKind.NOT_NEG_K_PLUS, c) for c in ef.sets))
    elif sense == "min":
        rhs = RegionExpr("union",
                         tuple(RegionAtom(AtomKind.K_PLUS, c) for c in ef.sets))
    elif f_kind == "lower":
        rhs = RegionExpr("intersection",
                         tuple(RegionAtom(AtomKind.NOT_K_PLUS, c) for c in ef.sets))
    else:
        rhs = RegionExpr("union",
                         tuple(RegionAtom(AtomKind.NEG_K_PLUS, c) for c in ef.sets))
    return lhs, rhs


def build_condition(cid: ConditionID, ef: Exhauster,
                    eu: Optional[Exhauster] = None
                    ) -> Union[ConstrainedCondition, UnconstrainedCondition]:
    """Materialize the two region expressions (or the unconstrained
    descriptor) for one condition id, validating family kinds."""
    cid = ConditionID(cid)
    parts = cid.value.split("_")
    if parts[0] == "UNC":
        _, sense, f_kind = parts
        required = f_kind.lower()
        if ef.kind != required:
            raise ExhausterKindError(
                f"{cid.value} needs an {required} family for the objective, got {ef.kind}")
        return UnconstrainedCondition(cid, ef)
    sense, f_kind, u_kind = parts[0].lower(), parts[1].lower(), parts[2].lower()
    if eu is None:
        raise ExhausterKindError(f"{cid.value} needs a constraint family")
    if ef.kind != f_kind:
        raise ExhausterKindError(
            f"{cid.value} needs an {f_kind} family for the objective, got {ef.kind}")
    if eu.kind != u_kind:
        raise ExhausterKindError(
            f"{cid.value} needs a {u_kind} family for the constraint, got {eu.kind}")
    if ef.dim != eu.dim:
        raise DimensionMismatchError(
            f"objective family dimension {ef.dim} vs constraint {eu.dim}")
    lhs, rhs = _constrained_sides(sense, f_kind, u_kind, ef, eu)
    return ConstrainedCondition(cid, lhs, rhs)


# ---------------------------------------------------------------------------
# Inclusion decision
# ---------------------------------------------------------------------------

def _degeneracy_notes(lhs: RegionExpr, rhs: RegionExpr) -> str:
    notes = []
    for label, expr in (("lhs", lhs), ("rhs", rhs)):
        for i, atom in enumerate(expr.atoms):
            if atom.kind in (AtomKind.NOT_K_PLUS, AtomKind.NOT_NEG_K_PLUS) \
                    and contains_origin(atom.polytope):
                notes.append(
                    f"degenerate {label} atom {i}: set contains the origin, "
                    "predicate covers every direction")
    return ("; " + "; ".join(notes)) if notes else ""


def _atom_member_options(atom: RegionAtom) -> list[list[LinearConstraint]]:
    verts = atom.polytope.vertices
    if atom.kind is AtomKind.NOT_K_PLUS:
        return [[LinearConstraint(v, Sense.LE_ZERO)] for v in verts]
    if atom.kind is AtomKind.NOT_NEG_K_PLUS:
        return [[LinearConstraint(v, Sense.GE_ZERO)] for v in verts]
    if atom.kind is AtomKind.K_PLUS:
        return [[LinearConstraint(v, Sense.GE_ZERO) for v in verts]]
    return [[LinearConstraint(v, Sense.LE_ZERO) for v in verts]]


def _atom_negation_options(atom: RegionAtom) -> list[list[LinearConstraint]]:
    # Complements are open; the unit margin realizes "strict" losslessly.
    verts = atom.polytope.vertices
    if atom.kind is AtomKind.NOT_K_PLUS:
        return [[LinearConstraint(v, Sense.GE_ONE) for v in verts]]
    if atom.kind is AtomKind.NOT_NEG_K_PLUS:
        return [[LinearConstraint(v, Sense.LE_MINUS_ONE) for v in verts]]
    if atom.kind is AtomKind.K_PLUS:
        return [[LinearConstraint(v, Sense.LE_MINUS_ONE)] for v in verts]
    return [[LinearConstraint(v, Sense.GE_ONE)] for v in verts]


def _branch_options(expr: RegionExpr, negate: bool) -> tuple[list[list[list[LinearConstraint]]], bool]:
    options = [
        _atom_negation_options(a) if negate else _atom_member_options(a)
        for a in expr.atoms
    ]
    conjunctive = (expr.combinator == "intersection") != negate
    return options, conjunctive


def _branch_count(expr: RegionExpr, negate: bool) -> int:
    options, conjunctive = _branch_options(expr, negate)
    if conjunctive:
        total = 1
        for opts in options:
            total *= len(opts)
        return total
    return sum(len(opts) for opts in options)


def _branches(expr: RegionExpr, negate: bool) -> Iterable[list[LinearConstraint]]:
    """Constraint systems whose union of solution sets is the region (or
    its complement). Enumeration is lexicographic over (set index, vertex
    index), so the first feasible branch is deterministic."""
    options, conjunctive = _branch_options(expr, negate)
    if conjunctive:
        for combo in product(*options):
            yield [c for part in combo for c in part]
    else:
        for atom_options in options:
            for part in atom_options:
                yield list(part)


def inclusion_check(lhs: RegionExpr, rhs: RegionExpr, *, method: str = "auto",
                    tol: float = TOL,
                    max_combinations: int = DEFAULT_COMBINATION_CAP,
                    max_pivots: int = DEFAULT_PIVOT_CAP) -> Verdict:
    """Decide whether every direction of ``lhs`` belongs to ``rhs``.

    exact2d intersects/unions the atoms' circle arcs and tests arc
    coverage; lp_enumeration searches for a direction in lhs minus rhs by
    enumerating vertex choices, each branch decided by the feasibility
    solver. Both are exact; in the plane they must agree.
    """
    if lhs.dim != rhs.dim:
        raise DimensionMismatchError(
            f"lhs dimension {lhs.dim} vs rhs dimension {rhs.dim}")
    if method == "auto":
        method = "exact2d" if lhs.dim == 2 else "lp_enumeration"
    notes = _degeneracy_notes(lhs, rhs)
    if method == "exact2d":
        if lhs.dim != 2:
            raise DimensionMismatchError("exact2d needs plane regions")
        left = region_arcs(lhs)
        right = region_arcs(rhs)
        holds, angle = arcset_subset(left, right, ANGLE_TOL)
        if holds:
            return Verdict(
                "holds", None,
                f"{len(left.arcs)} lhs arcs covered by {len(right.arcs)} rhs arcs" + notes,
                "exact2d")
        witness = unit_direction(angle)
        return Verdict(
            "violated", witness,
            f"uncovered angle {angle:.12g} rad" + notes, "exact2d")
    if method != "lp_enumeration":
        raise ValueError(f"unknown method {method!r}")
    count = _branch_count(lhs, False) * _branch_count(rhs, True)
    if count > max_combinations:
        return Verdict(
            "inconclusive", None,
            f"enumeration needs {count} combinations, above the cap of {max_combinations}" + notes,
            "lp_enumeration")
    for lhs_cons in _branches(lhs, False):
        for rhs_cons in _branches(rhs, True):
            result = linear_feasibility(lhs_cons + rhs_cons, lhs.dim,
                                        max_pivots=max_pivots)
            if result.feasible:
                return Verdict(
                    "violated", result.witness,
                    "feasible vertex selection: witness lies in lhs with rhs "
                    "violated at unit margin" + notes, "lp_enumeration")
    return Verdict(
        "holds", None,
        f"all {count} vertex-selection systems infeasible" + notes,
        "lp_enumeration")


# ---------------------------------------------------------------------------
# Unconstrained conditions
# ---------------------------------------------------------------------------

def check_unconstrained(cid: ConditionID, family: Exhauster, *, tol: float = TOL,
                        max_combinations: int = DEFAULT_COMBINATION_CAP,
                        max_pivots: int = DEFAULT_PIVOT_CAP) -> Verdict:
    """Decide one of the four unconstrained conditions exactly.

    The origin-membership form checks every set by convex-combination
    feasibility and, on failure, produces a strictly separating direction
    as the witness. The covering form searches for a direction outside
    every set's cone by enumerating one vertex per set at unit margin.
    """
    built = build_condition(cid, family)
    cid = built.cid
    sets = family.sets
    if cid in (ConditionID.UNC_MIN_UPPER, ConditionID.UNC_MAX_LOWER):
        for i, c in enumerate(sets):
            if not contains_origin(c, tol=tol):
                sep = linear_feasibility(
                    [LinearConstraint(v, Sense.GE_ONE) for v in c.vertices],
                    family.dim, max_pivots=max_pivots)
                if not sep.feasible:  # hull separation must produce a direction
                    raise ArithmeticError(
                        "origin reported outside the hull but no separating "
                        "direction was found")
                return Verdict(
                    "violated", sep.witness,
                    f"origin lies outside set {i}; witness is a strictly "
                    "separating direction", "lp_enumeration")
        return Verdict("holds", None,
                       f"origin belongs to all {len(sets)} sets", "lp_enumeration")
    # Covering form: the family's cones must leave no direction behind.
    sense = Sense.LE_MINUS_ONE if cid is ConditionID.UNC_MIN_LOWER else Sense.GE_ONE
    total = 1
    for c in sets:
        total *= len(c.vertices)
    if total > max_combinations:
        return Verdict(
            "inconclusive", None,
            f"enumeration needs {total} combinations, above the cap of {max_combinations}",
            "lp_enumeration")
    for choice in product(*[range(len(c.vertices)) for c in sets]):
        constraints = [
            LinearConstraint(c.vertices[j], sense)
            for c, j in zip(sets, choice)
        ]
        result = linear_feasibility(constraints, family.dim, max_pivots=max_pivots)
        if result.feasible:
            side = "negative" if sense is Sense.LE_MINUS_ONE else "positive"
            return Verdict(
                "violated", result.witness,
                f"direction with a strictly {side} vertex in every set: "
                "covering fails", "lp_enumeration")
    return Verdict("holds", None,
                   f"all {total} vertex selections infeasible: cones cover "
                   "every direction", "lp_enumeration")


def evaluate_condition(cid: ConditionID, ef: Exhauster,
                       eu: Optional[Exhauster] = None, *, method: str = "auto",
                       tol: float = TOL,
                       max_combinations: int = DEFAULT_COMBINATION_CAP,
                       max_pivots: int = DEFAULT_PIVOT_CAP) -> Verdict:
    """Build and run one condition, labelling the verdict with its id."""
    built = build_condition(cid, ef, eu)
    if isinstance(built, ConstrainedCondition):
        verdict = inclusion_check(built.lhs, built.rhs, method=method, tol=tol,
                                  max_combinations=max_combinations,
                                  max_pivots=max_pivots)
    else:
        verdict = check_unconstrained(built.cid, built.family, tol=tol,
                                      max_combinations=max_combinations,
                                      max_pivots=max_pivots)
    return replace(verdict, condition=ConditionID(cid).value)


# ---------------------------------------------------------------------------
# Regularity of the constraint at the point
# ---------------------------------------------------------------------------

def regularity_check(u_tree: MinMaxTree, *, tol: float = TOL,
                     samples: int = 1000, seed: int = 0) -> Verdict:
    """Does the strict-descent cone of the constraint close up to its
    nonpositive cone?

    In the plane this is decided exactly on the circle: the derivative's
    zero directions must all be limits of strictly negative directions. The
    circle is cut at the roots of every leaf form; on each open sector the
    derivative keeps one sign (or vanishes identically), so sector midpoints
    and cut angles carry the whole decision. Higher dimensions fall back to
    a sampled search that never claims an exact "holds".
    """
    leaves = list(tree_leaves(u_tree))
    dim = len(leaves[0])
    if dim == 2:
        return _regularity_exact_2d(u_tree, leaves, tol)
    return _regularity_sampled(u_tree, dim, tol, samples, seed)


def _regularity_exact_2d(u_tree: MinMaxTree, leaves: list[Vector],
                         tol: float) -> Verdict:
    cuts: set[float] = set()
    for form in leaves:
        if abs(form[0]) <= tol and abs(form[1]) <= tol:
            continue
        phi = math.atan2(form[1], form[0])
        for theta in (phi + 0.5 * math.pi, phi - 0.5 * math.pi):
            t = math.fmod(theta, TWO_PI)
            cuts.add(t + TWO_PI if t < 0 else t)
    if not cuts:
        return Verdict(
            "violated", (1.0, 0.0),
            "derivative vanishes identically: zero directions are nowhere "
            "limits of strictly negative ones", "exact2d")
    angles = sorted(cuts)
    merged = [angles[0]]
    for t in angles[1:]:
        if t - merged[-1] > ANGLE_TOL:
            merged.append(t)
    if len(merged) > 1 and merged[0] + TWO_PI - merged[-1] <= ANGLE_TOL:
        merged.pop()
    r = len(merged)
    sector_sign = []
    for i in range(r):
        a = merged[i]
        b = merged[(i + 1) % r] + (TWO_PI if i == r - 1 else 0.0)
        value = eval_minmax(u_tree, unit_direction(0.5 * (a + b)))
        sector_sign.append(-1 if value < -tol else (1 if value > tol else 0))
    for i in range(r):
        if sector_sign[i] == 0:
            a = merged[i]
            b = merged[(i + 1) % r] + (TWO_PI if i == r - 1 else 0.0)
            witness = unit_direction(0.5 * (a + b))
            return Verdict(
                "violated", witness,
                "a whole sector of zero directions has no strictly negative "
                "neighbours", "exact2d")
    for i, theta in enumerate(merged):
        if abs(eval_minmax(u_tree, unit_direction(theta))) <= tol:
            if sector_sign[i - 1] != -1 and sector_sign[i] != -1:
                return Verdict(
                    "violated", unit_direction(theta),
                    f"zero direction at angle {theta:.12g} rad borders no "
                    "negative sector", "exact2d")
    return Verdict(
        "holds", None,
        f"every zero direction borders a negative sector ({r} cut angles)",
        "exact2d")


def _axis_directions(dim: int) -> list[Vector]:
    dirs = []
    for i in range(dim):
        for sign in (1.0, -1.0):
            dirs.append(tuple(sign if j == i else 0.0 for j in range(dim)))
    return dirs


def _nearby_negative(u_tree: MinMaxTree, g: Vector, tol: float,
                     rng: random.Random) -> bool:
    dim = len(g)
    basis = []
    for i in range(dim):
        t = [1.0 if j == i else 0.0 for j in range(dim)]
        proj = sum(t[j] * g[j] for j in range(dim))
        t = [t[j] - proj * g[j] for j in range(dim)]
        norm = math.sqrt(sum(c * c for c in t))
        if norm > 1e-9:
            basis.append(tuple(c / norm for c in t))
    for k in range(1, 7):
        radius = 10.0 ** (-k)
        candidates = []
        for t in basis:
            for sign in (1.0, -1.0):
                candidates.append(tuple(gi + sign * radius * ti
                                        for gi, ti in zip(g, t)))
        for _ in range(4):
            mix = [rng.gauss(0.0, 1.0) for _ in basis]
            candidates.append(tuple(
                gi + radius * sum(m * t[j] for m, t in zip(mix, basis))
                for j, gi in enumerate(g)))
        for cand in candidates:
            norm = math.sqrt(sum(c * c for c in cand))
            if norm < 1e-9:
                continue
            unit = tuple(c / norm for c in cand)
            if eval_minmax(u_tree, unit) < -tol:
                return True
    return False


def _regularity_sampled(u_tree: MinMaxTree, dim: int, tol: float,
                        samples: int, seed: int) -> Verdict:
    rng = random.Random(seed)
    directions = _axis_directions(dim) + sample_unit_directions(dim, samples, seed)
    for g in directions:
        if abs(eval_minmax(u_tree, g)) <= tol:
            if not _nearby_negative(u_tree, g, tol, rng):
                return Verdict(
                    "violated", g,
                    "zero direction with no strictly negative direction found "
                    "nearby", "sampled")
    return Verdict(
        "inconclusive", None,
        f"no defective zero direction among {len(directions)} samples",
        "sampled")


# ---------------------------------------------------------------------------
# Sampled cross-check straight from the derivative trees
# ---------------------------------------------------------------------------

def necessary_condition_oracle(f_tree: MinMaxTree, u_tree: MinMaxTree, sense: str,
                               samples: int = 720, seed: int = 0, *,
                               tol: float = TOL, margin: float = ORACLE_MARGIN,
                               extra_directions: Sequence[Sequence[float]] = ()
                               ) -> Verdict:
    """Search sampled directions for one that is admissible for the
    constraint yet has the wrong objective-derivative sign.

    This bypasses families and regions entirely, so it cross-checks every
    constrained verdict. Pass a candidate witness through
    ``extra_directions`` to have it examined first. A clean pass is only
    ever ``inconclusive``.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    if samples < 1:
        raise ValueError("need at least one sample")
    dim = tree_dim(f_tree)
    if tree_dim(u_tree) != dim:
        raise DimensionMismatchError("objective and constraint trees disagree "
                                     "on dimension")
    directions: list[Vector] = []
    for d in extra_directions:
        vec = as_vector(d)
        norm = math.sqrt(sum(c * c for c in vec))
        if norm > 1e-12:
            directions.append(tuple(c / norm for c in vec))
    directions.extend(sample_unit_directions(dim, samples, seed))
    for g in directions:
        hu = eval_minmax(u_tree, g)
        if hu <= tol:
            hf = eval_minmax(f_tree, g)
            if (sense == "min" and hf < -margin) or (sense == "max" and hf > margin):
                return Verdict(
                    "violated", g,
                    f"admissible direction with objective derivative {hf:.6g} "
                    f"(constraint derivative {hu:.6g})", "sampled")
    return Verdict(
        "inconclusive", None,
        f"no violating direction among {len(directions)} samples", "sampled")
