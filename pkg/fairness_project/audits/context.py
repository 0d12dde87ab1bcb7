"""
Feature context: when adding one feature helps or harms accuracy-driven fairness.

A feature f together with a distribution P is *generic* when there are sets
C1, C2, C3 and values y1 != y2, y3 such that

    (1) P(C1) > P(C2)
    (2) C1 ⊆ f⁻¹(y1), C2 ⊆ f⁻¹(y2)
    (3) C1 ⊆ t⁻¹(l1), C2 ⊆ X_{G1,l2}
    (4) C3 ⊆ f⁻¹(y3)
    (5) P(t⁻¹(l1) ∩ C3) ≥ P(t⁻¹(l2) ∩ C3)
    (6) P(C3 ∩ X_{G2,l2}) / P(X_{G2,l2}) ≥ P((C2 ∪ C3) ∩ X_{G1,l2}) / P(X_{G1,l2})

with l2 = 1 − l1 and G2 the other group. From such a witness two representations
are built over one synthetic feature: F merges C1 ∪ C2 into one cell and splits
everything else by label; F' additionally keeps C3 as one cell. Adding f lowers
U_acc on F and raises it on F'. Both strict inequalities additionally need
P(C2) > 0, a strict majority in (5) and pairwise disjoint sets, which the search
below always provides.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .audit import Objective, run_objective
from .conf import audit_settings
from .domain import ZERO, Feature, FeatureSet, Group, Quadrant, QUADRANTS, quadrant_mass, ratio
from .exceptions import (
    BoundExceededError, InputError, InternalInvariantError, PreconditionError,
)
from .metrics import Notion

logger = logging.getLogger(__name__)

SEARCH_ORDER = ((1, Group.A), (1, Group.D), (0, Group.A), (0, Group.D))
SCHEDULE = {
    'C1': Fraction(1, 5),
    'C2': Fraction(1, 10),
    'C3 ∩ t=1': Fraction(3, 10),
    'C3 ∩ X_{D,0}': Fraction(1, 5),
    'C4': Fraction(1, 5),
}
CONTEXT_ALPHA = Fraction(1, 2)


@dataclass(frozen=True)
class NonCommitting:
    result: bool
    values: tuple = None


@dataclass(frozen=True)
class Anonymity:
    result: bool
    violation: tuple = None


def is_non_committing(f, domain, task):
    """Two values each meeting all four quadrants (set-level, weights ignored), in first-appearance order."""
    labels = domain.labels(task)
    hits = {}
    for i in domain.ids:
        hits.setdefault(f.value_of(i), set()).add(Quadrant(domain.group_of(i), labels[i]))
    full = [value for value, quadrants in hits.items() if len(quadrants) == len(QUADRANTS)]
    if len(full) < 2:
        return NonCommitting(False)
    return NonCommitting(True, (full[0], full[1]))


def is_k_anonymous(f, domain, task, k):
    """Every (value, group, label) combination has no instance or at least ``k``."""
    if k < 1:
        raise PreconditionError('k >= 1', f"k must be positive, got {k}")
    labels = domain.labels(task)
    counts = {}
    for i in domain.ids:
        key = (f.value_of(i), domain.group_of(i).value, labels[i])
        counts[key] = counts.get(key, 0) + 1
    for key, count in counts.items():
        if count < k:
            return Anonymity(False, key)
    return Anonymity(True)


@dataclass(frozen=True)
class GenericWitness:
    c1: tuple
    c2: tuple
    c3: tuple
    y1: str
    y2: str
    y3: str
    l1: int
    g1: Group

    @property
    def l2(self):
        return 1 - self.l1

    @property
    def g2(self):
        return self.g1.other


@dataclass(frozen=True)
class WitnessCheck:
    conditions: dict
    extras: dict

    @property
    def generic(self):
        return all(self.conditions.values())

    @property
    def non_degenerate(self):
        return self.generic and all(self.extras.values())


def verify_generic_witness(f, domain, task, witness):
    """Re-check the six conditions and the non-degeneracy extras, exactly."""
    labels = domain.labels(task)
    w = witness
    c1, c2, c3 = set(w.c1), set(w.c2), set(w.c3)
    l1_c3 = domain.mass(i for i in c3 if labels[i] == w.l1)
    l2_c3 = domain.mass(i for i in c3 if labels[i] == w.l2)

    def in_quadrant(i, group, label):
        return domain.group_of(i) is group and labels[i] == label

    lhs = ratio(
        domain.mass(i for i in c3 if in_quadrant(i, w.g2, w.l2)),
        quadrant_mass(domain, task, Quadrant(w.g2, w.l2)),
    ).value
    rhs = ratio(
        domain.mass(i for i in c2 | c3 if in_quadrant(i, w.g1, w.l2)),
        quadrant_mass(domain, task, Quadrant(w.g1, w.l2)),
    ).value
    conditions = {
        1: domain.mass(c1) > domain.mass(c2),
        2: w.y1 != w.y2
            and all(f.value_of(i) == w.y1 for i in c1)
            and all(f.value_of(i) == w.y2 for i in c2),
        3: all(labels[i] == w.l1 for i in c1) and all(in_quadrant(i, w.g1, w.l2) for i in c2),
        4: all(f.value_of(i) == w.y3 for i in c3),
        5: l1_c3 >= l2_c3,
        6: lhs >= rhs,
    }
    extras = {
        'c2-positive': domain.mass(c2) > 0,
        'strict-majority': l1_c3 > l2_c3,
        'disjoint': not (c1 & c2 or c1 & c3 or c2 & c3),
    }
    return WitnessCheck(conditions, extras)


def _subsets(pool):
    for size in range(1, len(pool) + 1):
        yield from combinations(pool, size)


def generic_witness(f, domain, task, bound=None):
    """
    First non-degenerate witness in canonical order, or None.

    (l1, G1) runs over (1,A), (1,D), (0,A), (0,D) and y1, y2, y3 over the sorted
    values. C2 is the lightest positive-mass instance of f⁻¹(y2) ∩ X_{G1,l2}; C1 the
    first subset (smallest first) of positive-mass l1-instances of f⁻¹(y1) outweighing
    it; C3 every remaining l1-instance of f⁻¹(y3) plus the first subset of its
    (G2,l2)-instances that satisfies (6) while keeping the strict majority in (5).

    This is a targeted search, not an enumeration of every (l1, G1, y, C1, C2, C3).
    It is complete only for non-degenerate witnesses: None means no witness with
    P(C2) > 0, a strict majority in (5) and disjoint sets exists. A domain can
    still admit degenerate witnesses that satisfy the six conditions alone.
    """
    bound = audit_settings.GENERIC_SEARCH_BOUND if bound is None else bound
    if len(domain) > bound:
        logger.warning("generic witness search refused for %d instances", len(domain))
        raise BoundExceededError('generic search bound', bound, len(domain))

    labels = domain.labels(task)
    values = sorted({f.value_of(i) for i in domain.ids})

    def lightest_first(ids):
        return sorted(
            (i for i in ids if domain.weight(i) > 0),
            key=lambda i: (domain.weight(i), domain.position(i)),
        )

    def select(value, group, label):
        return [
            i for i in domain.ids
            if f.value_of(i) == value and labels[i] == label
            and (group is None or domain.group_of(i) is group)
        ]

    for l1, g1 in SEARCH_ORDER:
        l2, g2 = 1 - l1, g1.other
        total_1 = quadrant_mass(domain, task, Quadrant(g1, l2))
        total_2 = quadrant_mass(domain, task, Quadrant(g2, l2))
        if total_1 == 0 or total_2 == 0:
            continue
        for y1 in values:
            for y2 in values:
                if y1 == y2:
                    continue
                pool_2 = lightest_first(select(y2, g1, l2))
                if not pool_2:
                    continue
                c2 = (pool_2[0],)
                mass_2 = domain.weight(pool_2[0])
                candidates_1 = [
                    c1 for c1 in _subsets(lightest_first(select(y1, None, l1)))
                    if domain.mass(c1) > mass_2
                ]
                need = total_2 * mass_2 / total_1
                for y3 in values:
                    for c1 in candidates_1:
                        c3 = _complete_c3(domain, select, lightest_first, y3, c1, l1, g2, l2, need)
                        if c3 is not None:
                            witness = GenericWitness(
                                _ordered(domain, c1), c2, _ordered(domain, c3), y1, y2, y3, l1, g1,
                            )
                            check = verify_generic_witness(f, domain, task, witness)
                            if not check.non_degenerate:
                                raise InternalInvariantError(
                                    "search produced a witness that does not re-verify",
                                    detail={'conditions': check.conditions, 'extras': check.extras},
                                )
                            return witness
                        if y3 != y1:
                            # C1 cannot change the choice of C3 here
                            break
    return None


def _complete_c3(domain, select, lightest_first, y3, c1, l1, g2, l2, need):
    base = [i for i in select(y3, None, l1) if i not in c1]
    majority = domain.mass(base)
    if majority == 0:
        return None
    for extra in _subsets(lightest_first(select(y3, g2, l2))):
        mass = domain.mass(extra)
        if need <= mass < majority:
            return base + list(extra)
    return None


def _ordered(domain, ids):
    return tuple(sorted(set(ids), key=domain.position))


def construct_generic_distribution(f, domain, task):
    """
    Weights making (f, P) generic, with the witness they were built around.

    With (y1, y2) the non-committing values: B = f⁻¹(y2) ∩ X_{A,0} splits into C2 (its
    first instance) and C4 (the rest); C1 is the first instance of f⁻¹(y1) ∩ X_{A,1};
    C3 = f⁻¹(y1) \\ C1. Masses 1/5, 1/10, 3/10 (on C3 ∩ t=1), 1/5 (on C3 ∩ X_{D,0})
    and 1/5 are spread uniformly; everything else gets 0.
    """
    committing = is_non_committing(f, domain, task)
    if not committing.result:
        raise PreconditionError('non-committing', f"feature {f.name!r} is not non-committing")
    anonymity = is_k_anonymous(f, domain, task, 2)
    if not anonymity.result:
        raise PreconditionError(
            '2-anonymous', f"feature {f.name!r} is not 2-anonymous: {anonymity.violation} is a singleton",
        )
    y1, y2 = committing.values
    labels = domain.labels(task)

    def members(value, group=None, label=None):
        return [
            i for i in domain.ids
            if f.value_of(i) == value
            and (group is None or domain.group_of(i) is group)
            and (label is None or labels[i] == label)
        ]

    b = members(y2, Group.A, 0)
    head = members(y1, Group.A, 1)
    if len(b) < 2 or not head:
        raise InternalInvariantError("cannot carve C1, C2 and C4 from a non-committing 2-anonymous feature")
    c2, c4 = b[:1], b[1:]
    c1 = head[:1]
    c3 = [i for i in members(y1) if i not in c1]
    c3_positive = [i for i in c3 if labels[i] == 1]
    c3_d0 = [i for i in c3 if domain.group_of(i) is Group.D and labels[i] == 0]

    weights = {i: ZERO for i in domain.ids}
    for chosen, key in ((c1, 'C1'), (c2, 'C2'), (c3_positive, 'C3 ∩ t=1'),
                        (c3_d0, 'C3 ∩ X_{D,0}'), (c4, 'C4')):
        for i in chosen:
            weights[i] = SCHEDULE[key] / len(chosen)

    witness = GenericWitness(tuple(c1), tuple(c2), tuple(c3), y1, y2, y1, 1, Group.A)
    check = verify_generic_witness(f, domain.with_weights(weights), task, witness)
    if not check.non_degenerate:
        raise InternalInvariantError(
            "constructed distribution is not generic",
            detail={'conditions': check.conditions, 'extras': check.extras},
        )
    logger.info("generic distribution for %r built on values (%s, %s)", f.name, y1, y2)
    return weights, witness


def condition_six_sides(domain, task, witness):
    """(left, right) of condition (6) under the domain's weights."""
    labels = domain.labels(task)
    w = witness

    def side(ids, group):
        selected = [i for i in ids if domain.group_of(i) is group and labels[i] == w.l2]
        return ratio(domain.mass(selected), quadrant_mass(domain, task, Quadrant(group, w.l2))).value

    return side(w.c3, w.g2), side(set(w.c2) | set(w.c3), w.g1)


# -- context pairs ---------------------------------------------------------------

@dataclass(frozen=True)
class ContextPair:
    """F' (``fs_increasing``) and F (``fs_decreasing``) with U_acc^{1/2} of all four representations."""

    fs_increasing: FeatureSet
    fs_decreasing: FeatureSet
    feature: Feature
    weights: dict = field(compare=False)
    witness: GenericWitness = None
    values: dict = field(default_factory=dict)

    @property
    def increases(self):
        return self.values['increasing_with'] > self.values['increasing_without']

    @property
    def decreases(self):
        return self.values['decreasing_with'] < self.values['decreasing_without']


def _context_feature(domain, task, name, merged, kept=()):
    labels = domain.labels(task)
    merged, kept = set(merged), set(kept)
    values = {}
    for i in domain.ids:
        if i in merged:
            values[i] = 'merged'
        elif i in kept:
            values[i] = 'kept'
        else:
            values[i] = f"label-{labels[i]}"
    return Feature(name, values)


def construct_context_featuresets(f, domain, task, weights=None, witness=None):
    """Build F and F' around a generic witness and audit all four representations at α = 1/2."""
    if weights is not None:
        domain = domain.with_weights(weights)
    if witness is None:
        raise PreconditionError('generic witness', "a generic witness is required")
    if not verify_generic_witness(f, domain, task, witness).non_degenerate:
        raise PreconditionError('generic witness', "the witness is not generic under these weights")
    reserved = {'context-decreasing', 'context-increasing'}
    if f.name in reserved:
        raise InputError(f"feature name {f.name!r} is reserved for the context features")

    merged = set(witness.c1) | set(witness.c2)
    decreasing = FeatureSet((_context_feature(domain, task, 'context-decreasing', merged),))
    increasing = FeatureSet((_context_feature(domain, task, 'context-increasing', merged, witness.c3),))

    def audit(fs):
        return run_objective(domain, task, fs, Objective.ACCURACY, Notion.EO, alpha=CONTEXT_ALPHA).value

    values = {
        'increasing_without': audit(increasing),
        'increasing_with': audit(increasing.with_feature(f)),
        'decreasing_without': audit(decreasing),
        'decreasing_with': audit(decreasing.with_feature(f)),
    }
    pair = ContextPair(increasing, decreasing, f, dict(domain.weights), witness, values)
    if not (pair.increases and pair.decreases):
        raise InternalInvariantError("context pair does not move unfairness both ways", detail=values)
    return pair


def build_context_pair(f, domain, task):
    """
    Use the domain's own weights when a generic witness exists under them,
    otherwise construct the generic distribution first.
    """
    witness = None
    if len(domain) <= audit_settings.GENERIC_SEARCH_BOUND:
        witness = generic_witness(f, domain, task)
    if witness is not None:
        return construct_context_featuresets(f, domain, task, None, witness)
    weights, witness = construct_generic_distribution(f, domain, task)
    return construct_context_featuresets(f, domain, task, weights, witness)


# -- deletion effect ---------------------------------------------------------------

@dataclass(frozen=True)
class DeletionEffect:
    objective: Objective
    notion: Notion
    value_without: object
    value_with: object
    direction: str


def deletion_effect(domain, task, fs, f, objective, notion=Notion.EO, alpha=None,
                    epsilon=None, eta=None):
    """Compare one objective on F and on F ∪ {f}."""
    objective = Objective(objective)
    if objective is Objective.FRONTIER:
        raise InputError("deletion effect is defined for adversarial, accuracy and enabling")
    if not isinstance(fs, FeatureSet):
        fs = domain.feature_set(list(fs))
    if isinstance(f, str):
        f = domain.feature(f)
    kwargs = dict(notion=notion, alpha=alpha, epsilon=epsilon, eta=eta)
    without = run_objective(domain, task, fs, objective, **kwargs).value
    with_f = run_objective(domain, task, fs.with_feature(f), objective, **kwargs).value
    if with_f == without:
        direction = 'neutral'
    elif with_f > without:
        direction = 'increase'
    else:
        direction = 'decrease'
    return DeletionEffect(objective, Notion(notion), without, with_f, direction)
