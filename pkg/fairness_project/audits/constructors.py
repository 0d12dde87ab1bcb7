"""
Constructive counterparts of the impossibility results: adversarial marginals
against DP and EO, the mutual-EO audit, the multi-task certificate and the PRP
feasibility test.

Targets here are plain labelings (id -> 0/1) over the whole instance set, not
classifiers over a partition, because the constructions quantify over every
function on X. Constructed weights are uniform inside each chosen set and 0
elsewhere; zero-weight instances stay in the domain.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .audit import adversarial_unfairness
from .domain import ZERO, Classifier, Group, is_label_homogeneous, resolve_partition
from .exceptions import InputError, InternalInvariantError, PreconditionError
from .metrics import (
    Notion, dp_for_labelings, eo_for_labelings, positive_rate, prp_for_labelings,
    require_both_groups, success_rates,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class ConstructionCase(str, Enum):
    DP_SPLIT = 'dp-split'
    EO_CASE1 = 'eo-case1'
    EO_CASE2 = 'eo-case2'
    EO_CASE3 = 'eo-case3'


@dataclass(frozen=True)
class AdversarialMarginal:
    weights: Mapping
    target_unfairness: Fraction
    notion: Notion
    construction_case: ConstructionCase
    achieved: Fraction
    chosen_sets: tuple = ()
    flags: tuple = ()


def _uniform_halves(domain, first, second):
    """Mass ½ spread uniformly over each of two disjoint nonempty sets, 0 elsewhere."""
    weights = {i: ZERO for i in domain.ids}
    for chosen in (first, second):
        for i in chosen:
            weights[i] = HALF / len(chosen)
    return weights


def _require_non_constant(labels, ids, name):
    if len({labels[i] for i in ids}) < 2:
        raise PreconditionError(f"{name} non-constant", f"{name} is constant on the instance set")


def _require_groups_nonempty(domain):
    for group in Group:
        if not domain.members(group):
            raise PreconditionError('both groups nonempty', f"group {group.value} has no instances")


def _labels_of(domain, target, name):
    """A task name or an id -> label mapping, checked for totality."""
    if isinstance(target, str):
        return domain.labels(target)
    missing = [i for i in domain.ids if i not in target]
    if missing:
        raise InputError(f"{name} has no label for {missing}")
    return {i: int(target[i]) for i in domain.ids}


def dp_adversarial_marginal(domain, h):
    """
    Weights under which ``h`` has DP unfairness 1: mass ½ on {x∈A: h=y1} and ½ on
    {x∈D: h=y2} for the first workable (y1, y2) in (1, 0), (0, 1).
    """
    h = _labels_of(domain, h, 'h')
    _require_groups_nonempty(domain)
    _require_non_constant(h, domain.ids, 'h')

    for y1, y2 in ((1, 0), (0, 1)):
        side_a = [i for i in domain.members(Group.A) if h[i] == y1]
        side_d = [i for i in domain.members(Group.D) if h[i] == y2]
        if side_a and side_d:
            break
    else:
        raise InternalInvariantError("no (y1, y2) orientation for a non-constant h")

    weights = _uniform_halves(domain, side_a, side_d)
    achieved = dp_for_labelings(domain.with_weights(weights), h).value
    if achieved != 1:
        raise InternalInvariantError(f"dp marginal reaches {achieved}, expected 1")
    logger.info("dp marginal: y1=%d on A, y2=%d on D", y1, y2)
    return AdversarialMarginal(
        weights, Fraction(1), Notion.DP, ConstructionCase.DP_SPLIT, achieved,
        chosen_sets=(tuple(side_a), tuple(side_d)),
    )


def eo_adversarial_marginal(domain, f, h):
    """
    Weights under which ``h`` has EO unfairness at least ½ with ground truth ``f``.

    B1 and B2 are the misclassified and the correctly classified instances sharing
    one ground-truth label, B3 the rest. Case 1 puts ½ on B1∩A and ½ on B2∩D, case 2
    mirrors the groups, case 3 puts ½ on the group missing B1∪B2 (inside B3) and ½
    on B1.
    """
    f = _labels_of(domain, f, 'f')
    h = _labels_of(domain, h, 'h')
    _require_groups_nonempty(domain)
    _require_non_constant(f, domain.ids, 'f')
    _require_non_constant(h, domain.ids, 'h')
    if all(h[i] == f[i] for i in domain.ids):
        raise PreconditionError('h != f', "h equals the ground truth")
    if all(h[i] != f[i] for i in domain.ids):
        raise PreconditionError('h != 1-f', "h is the complement of the ground truth")

    def region(truth, prediction):
        return {i for i in domain.ids if f[i] == truth and h[i] == prediction}

    if region(1, 0) and region(1, 1):
        b1, b2 = region(1, 0), region(1, 1)
    else:
        b1, b2 = region(0, 1), region(0, 0)
    if not (b1 and b2):
        raise InternalInvariantError("fewer than three of the four f/h regions are nonempty")
    b3 = set(domain.ids) - b1 - b2

    def within(group, ids):
        return [i for i in domain.members(group) if i in ids]

    if within(Group.A, b1) and within(Group.D, b2):
        case, chosen = ConstructionCase.EO_CASE1, (within(Group.A, b1), within(Group.D, b2))
    elif within(Group.D, b1) and within(Group.A, b2):
        case, chosen = ConstructionCase.EO_CASE2, (within(Group.A, b2), within(Group.D, b1))
    else:
        empty_group = next(
            (g for g in Group if not within(g, b1) and not within(g, b2)), None
        )
        if empty_group is None or not within(empty_group, b3):
            raise InternalInvariantError("no construction case applies")
        case = ConstructionCase.EO_CASE3
        chosen = (within(empty_group, b3), within(empty_group.other, b1))

    flags = tuple(
        f"h-constant-on-{group.value}"
        for group in Group
        if len({h[i] for i in domain.members(group)}) == 1
    )
    weights = _uniform_halves(domain, *chosen)
    achieved = eo_for_labelings(domain.with_weights(weights), f, h).value
    if achieved < HALF:
        raise InternalInvariantError(f"eo marginal ({case.value}) reaches only {achieved}")
    logger.info("eo marginal built with %s%s", case.value, f" flags={flags}" if flags else '')
    return AdversarialMarginal(
        weights, HALF, Notion.EO, case, achieved,
        chosen_sets=tuple(tuple(c) for c in chosen), flags=flags,
    )


def dp_corollary_witness(domain, fs):
    """
    For a representation with at least two cells: the first non-constant expressible
    classifier (cell 0 labeled 1, the rest 0) and a marginal making it DP-unfair with value 1.
    """
    partition = resolve_partition(domain, fs)
    if len(partition) < 2:
        raise PreconditionError('at least two cells', "a single-cell representation only expresses constants")
    h = Classifier.from_mask(1, len(partition))
    return h, dp_adversarial_marginal(domain, h.predictions(partition))


# -- mutual equalized odds -----------------------------------------------------

@dataclass(frozen=True)
class MutualEOReport:
    eo_f_given_g: Fraction
    eo_g_given_f: Fraction
    pos_rate_f_a: Fraction
    pos_rate_f_d: Fraction
    pos_rate_g_a: Fraction
    pos_rate_g_d: Fraction
    disagreement_mass: Fraction
    agreement_mass: Fraction

    @property
    def lemma_applies(self):
        """Mutual EO fairness with f and g neither equal nor complementary almost surely."""
        return (
            self.eo_f_given_g == 0 and self.eo_g_given_f == 0
            and self.disagreement_mass > 0 and self.agreement_mass > 0
        )

    @property
    def positive_rates_equal(self):
        return self.pos_rate_f_a == self.pos_rate_f_d and self.pos_rate_g_a == self.pos_rate_g_d

    @property
    def holds(self):
        return not self.lemma_applies or self.positive_rates_equal


def mutual_eo_audit(domain, f, g):
    """EO of f against g and of g against f, with per-group positive rates of both."""
    require_both_groups(domain, 'mutual equalized odds')
    f = _labels_of(domain, f, 'f')
    g = _labels_of(domain, g, 'g')
    disagreement = domain.mass(i for i in domain.ids if f[i] != g[i])
    return MutualEOReport(
        eo_f_given_g=eo_for_labelings(domain, g, f).value,
        eo_g_given_f=eo_for_labelings(domain, f, g).value,
        pos_rate_f_a=positive_rate(domain, f, Group.A).value,
        pos_rate_f_d=positive_rate(domain, f, Group.D).value,
        pos_rate_g_a=positive_rate(domain, g, Group.A).value,
        pos_rate_g_d=positive_rate(domain, g, Group.D).value,
        disagreement_mass=disagreement,
        agreement_mass=1 - disagreement,
    )


# -- multi-task certificate ----------------------------------------------------

@dataclass(frozen=True)
class MultitaskCertificate:
    adv_fair_task1: bool
    adv_fair_task2: bool
    perfect_accuracy_both: bool
    tasks_differ_on_support: bool
    equal_success_rates_1: bool
    equal_success_rates_2: bool
    tasks_complementary: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def all_criteria(self):
        return self.adv_fair_task1 and self.adv_fair_task2 and self.perfect_accuracy_both

    @property
    def theorem_applies(self):
        return (
            self.tasks_differ_on_support
            and not self.tasks_complementary
            and not (self.equal_success_rates_1 and self.equal_success_rates_2)
        )

    @property
    def holds(self):
        return not (self.theorem_applies and self.all_criteria)


def multitask_certificate(domain, fs, task1, task2, weights2=None):
    """
    Evaluate the three criteria of the multi-task impossibility for one shared
    marginal. ``weights2`` may be passed to assert the second task lives on the same
    marginal.
    """
    if weights2 is not None and {i: Fraction(w) for i, w in weights2.items()} != dict(domain.weights):
        raise PreconditionError('tasks share one marginal', "task2 is defined on a different weight vector")
    partition = resolve_partition(domain, fs)
    labels1, labels2 = domain.labels(task1), domain.labels(task2)
    support = domain.support()
    rates1 = success_rates(domain, labels1)
    rates2 = success_rates(domain, labels2)
    differing = [i for i in support if labels1[i] != labels2[i]]

    certificate = MultitaskCertificate(
        adv_fair_task1=adversarial_unfairness(domain, task1, partition, Notion.EO).value == 0,
        adv_fair_task2=adversarial_unfairness(domain, task2, partition, Notion.EO).value == 0,
        perfect_accuracy_both=all(
            is_label_homogeneous(domain, task, cell)
            for task in (task1, task2) for cell in partition
        ),
        tasks_differ_on_support=bool(differing),
        equal_success_rates_1=rates1.equal,
        equal_success_rates_2=rates2.equal,
        tasks_complementary=bool(support) and len(differing) == len(support),
        details={
            'success_rates_1': (rates1.rate_a, rates1.rate_d),
            'success_rates_2': (rates2.rate_a, rates2.rate_d),
            'cells': len(partition),
        },
    )
    if not certificate.holds:
        raise InternalInvariantError(
            "all three criteria hold for differing tasks without equal success rates",
            detail={'partition': partition.cells},
        )
    return certificate


# -- predictive rate parity ------------------------------------------------------

@dataclass(frozen=True)
class PrpFeasibility:
    feasible: bool
    rate_a: Fraction
    rate_d: Fraction
    all_one_fair: bool


def prp_feasibility(domain, task):
    """
    False means no representation is adversarially PRP-fair: the all-one classifier
    is expressible everywhere and is PRP-unfair.
    """
    rates = success_rates(domain, domain.labels(task))
    all_one = prp_for_labelings(domain, domain.labels(task), {i: 1 for i in domain.ids})
    return PrpFeasibility(rates.equal, rates.rate_a, rates.rate_d, all_one.fair)
