"""
Quantified checks of the package's invariants.

Each property runs either exhaustively over small domains or over seeded random
trials, stops at the first counterexample in its enumeration order, and returns a
``VerificationResult``; a failure is a result, never an exception.
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from sympy.utilities.iterables import multiset_partitions

from .audit import (
    Objective, accuracy_driven_unfairness, adversarial_unfairness,
    adversarial_unfairness_oracle, fairness_enabling,
)
from .constructors import (
    dp_adversarial_marginal, eo_adversarial_marginal, multitask_certificate,
    mutual_eo_audit, prp_feasibility,
)
from .context import (
    construct_context_featuresets, construct_generic_distribution, verify_generic_witness,
)
from .domain import (
    Domain, Feature, Group, Instance, induce_cells, partition_feature, partition_from_cells,
)
from .exceptions import FairnessAuditError, InputError, InternalInvariantError
from .generator import child_seed, generic_domain, random_domain, random_labeling
from .metrics import Notion, success_rates

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 1000


@dataclass
class VerificationResult:
    property: str
    passed: bool = True
    checks: int = 0
    excluded: int = 0
    seed: int = None
    trials: int = None
    max_size: int = None
    counterexample: dict = None
    details: dict = field(default_factory=dict)

    def fail(self, reason, domain=None, **extra):
        self.passed = False
        self.counterexample = {'reason': reason, **extra}
        if domain is not None:
            self.counterexample['domain'] = domain.to_document()
        logger.info("%s: counterexample after %d checks: %s", self.property, self.checks, reason)

    def tick(self):
        self.checks += 1
        if self.checks % PROGRESS_EVERY == 0:
            logger.debug("%s: %d checks", self.property, self.checks)


def _group_assignments(n):
    for groups in product((Group.A, Group.D), repeat=n):
        if len(set(groups)) == 2:
            yield groups


def _compositions(total, parts):
    """Positive integer tuples of length ``parts`` summing to ``total``."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _weight_grid(grid, parts):
    """(denominator, numerators) for every positive weight vector with denominator <= grid."""
    for denominator in range(1, grid + 1):
        for numerators in _compositions(denominator, parts):
            yield denominator, numerators


def _domain(groups, weights, tasks=None, features=None):
    ids = [f"x{k}" for k in range(1, len(groups) + 1)]
    return Domain(
        tuple(Instance(i, g) for i, g in zip(ids, groups)),
        tasks or {},
        dict(zip(ids, weights)),
        features or {},
    )


def _random_fs(rng, domain):
    names = [name for name in domain.features if rng.random() < 0.5]
    return domain.feature_set(names)


def _extra_feature(rng, domain, alphabet=2):
    return Feature('g', {i: f"w{rng.randrange(alphabet)}" for i in domain.ids})


# -- exhaustive properties ---------------------------------------------------------

def verify_lemma_mutual_eo(max_size=5, grid=6, **_):
    """
    Mutual EO fairness with disagreement (and agreement) forces equal positive rates.

    Weights run over every positive grid k/d with d = 1 .. ``grid``; a weight vector
    reachable from several denominators is checked once per denominator.
    """
    result = VerificationResult(
        'lemma-mutual-eo', max_size=max_size, details={'grid': grid, 'denominators': list(range(1, grid + 1))},
    )
    for n in range(2, max_size + 1):
        for denominator, numerators in _weight_grid(grid, n):
            weights = [Fraction(k, denominator) for k in numerators]
            for groups in _group_assignments(n):
                domain = _domain(groups, weights)
                ids = domain.ids
                for f_bits, g_bits in product(product((0, 1), repeat=n), repeat=2):
                    f, g = dict(zip(ids, f_bits)), dict(zip(ids, g_bits))
                    report = mutual_eo_audit(domain, f, g)
                    result.tick()
                    if report.eo_f_given_g == 0 and report.eo_g_given_f == 0 \
                            and report.disagreement_mass > 0 and report.agreement_mass == 0:
                        result.excluded += 1
                    if not report.holds:
                        result.fail('unequal positive rates under mutual EO fairness',
                                    domain.with_task('f', f).with_task('g', g))
                        return result
    return result


def verify_theorem_multitask(max_size=6, **_):
    """
    No representation is adversarially EO-fair for two differing tasks with perfect
    accuracy on both unless both tasks have equal success rates.

    Perfect accuracy needs both tasks constant on cells, so only cell-constant task
    pairs are enumerated; adversarial fairness and success rates are cached per
    cell labeling.
    """
    result = VerificationResult('theorem-multitask', max_size=max_size)
    for n in range(2, max_size + 1):
        weights = [Fraction(1, n)] * n
        for groups in _group_assignments(n):
            base = _domain(groups, weights)
            for blocks in multiset_partitions(list(base.ids)):
                partition = partition_from_cells(base, blocks)
                summary = {}
                for cell_labels in product((0, 1), repeat=len(partition)):
                    labels = {i: label for cell, label in zip(partition.cells, cell_labels) for i in cell}
                    domain = base.with_task('t', labels)
                    summary[cell_labels] = (
                        adversarial_unfairness(domain, 't', partition, Notion.EO).value == 0,
                        success_rates(domain, labels).equal,
                        labels,
                    )
                for first, second in product(summary, repeat=2):
                    fair_1, equal_1, labels_1 = summary[first]
                    fair_2, equal_2, labels_2 = summary[second]
                    result.tick()
                    if first == second or (equal_1 and equal_2):
                        continue
                    if all(a != b for a, b in zip(first, second)):
                        result.excluded += 1
                        continue
                    if fair_1 and fair_2:
                        domain = base.with_task('t1', labels_1).with_task('t2', labels_2)
                        try:
                            multitask_certificate(domain, partition, 't1', 't2')
                        except InternalInvariantError as exc:
                            result.fail(str(exc), domain, cells=[list(c) for c in partition])
                            return result
    return result


# -- seeded properties ---------------------------------------------------------------

def _seeded(name, trials, seed, max_size):
    return VerificationResult(name, trials=trials, seed=seed, max_size=max_size), random.Random(seed)


def verify_oracle_equivalence(trials=1000, seed=0, max_size=10, **_):
    result, rng = _seeded('oracle-equivalence', trials, seed, max_size)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), max_instances=max_size, features=3, alphabet=3)
        fs = _random_fs(rng, domain)
        for notion in (Notion.EO, Notion.DP):
            fast = adversarial_unfairness(domain, 't', fs, notion).value
            oracle = adversarial_unfairness_oracle(domain, 't', fs, notion).value
            result.tick()
            if fast != oracle:
                result.fail(f"{notion.value}: optimizer {fast} != oracle {oracle}", domain,
                            features=list(fs.names))
                return result
    return result


def verify_monotonicity_adv(trials=1000, seed=0, max_size=10, **_):
    result, rng = _seeded('monotonicity-adv', trials, seed, max_size)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), max_instances=max_size, features=3, alphabet=3)
        fs = _random_fs(rng, domain)
        f = _extra_feature(rng, domain, alphabet=3)
        for notion in (Notion.EO, Notion.DP):
            without = adversarial_unfairness(domain, 't', fs, notion).value
            with_f = adversarial_unfairness(domain, 't', fs.with_feature(f), notion).value
            result.tick()
            if with_f < without:
                result.fail(f"{notion.value}: {without} -> {with_f}", domain.with_features([f]),
                            features=list(fs.names), added=f.name)
                return result
    return result


def _random_rational(rng, denominator=4):
    return Fraction(rng.randint(0, denominator), denominator)


def verify_monotonicity_enabling(trials=1000, seed=0, max_size=10, **_):
    result, rng = _seeded('monotonicity-enabling', trials, seed, max_size)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), max_instances=max_size, features=3, alphabet=3)
        fs = _random_fs(rng, domain)
        f = _extra_feature(rng, domain, alphabet=3)
        epsilon, eta = _random_rational(rng), _random_rational(rng)
        alpha = Fraction(rng.randint(1, 3), 4)
        for notion in (Notion.EO, Notion.DP):
            without = fairness_enabling(domain, 't', fs, epsilon, eta, alpha, notion).value
            with_f = fairness_enabling(domain, 't', fs.with_feature(f), epsilon, eta, alpha, notion).value
            result.tick()
            if without and not with_f:
                result.fail(f"{notion.value}: enabling lost at eps={epsilon}, eta={eta}, alpha={alpha}",
                            domain.with_features([f]), features=list(fs.names), added=f.name)
                return result
    return result


def verify_prp_equivalence(trials=500, seed=0, max_size=10, **_):
    result, rng = _seeded('prp-equivalence', trials, seed, max_size)
    for _trial in range(trials):
        trial_rng = random.Random(child_seed(rng))
        domain = random_domain(trial_rng, max_instances=max_size, features=0,
                               weight_style=trial_rng.choice(('uniform', 'random')))
        feasibility = prp_feasibility(domain, 't')
        result.tick()
        if feasibility.feasible != feasibility.all_one_fair:
            result.fail('success-rate equality disagrees with the all-one classifier', domain)
            return result
    return result


def verify_claim_dp_marginal(trials=1000, seed=0, max_size=12, **_):
    result, rng = _seeded('claim-dp-marginal', trials, seed, max_size)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), max_instances=max_size, features=0)
        h = random_labeling(rng, domain.ids)
        if len(set(h.values())) < 2:
            h[domain.ids[0]] = 1 - h[domain.ids[0]]
        try:
            marginal = dp_adversarial_marginal(domain, h)
        except FairnessAuditError as exc:
            result.fail(f"construction failed: {exc}", domain.with_task('h', h))
            return result
        result.tick()
        if marginal.achieved != 1:
            result.fail(f"achieved {marginal.achieved}", domain.with_task('h', h))
            return result
    return result


def _eo_pair(rng, ids):
    """Random (f, h) with f and h non-constant, h != f and h != 1 - f."""
    while True:
        f, h = random_labeling(rng, ids), random_labeling(rng, ids)
        if len(set(f.values())) < 2 or len(set(h.values())) < 2:
            continue
        agree = sum(f[i] == h[i] for i in ids)
        if 0 < agree < len(ids):
            return f, h


def verify_claim_eo_marginal(trials=1000, seed=0, max_size=12, **_):
    result, rng = _seeded('claim-eo-marginal', trials, seed, max_size)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), min_instances=3,
                               max_instances=max(3, max_size), features=0)
        f, h = _eo_pair(rng, domain.ids)
        try:
            marginal = eo_adversarial_marginal(domain, f, h)
        except FairnessAuditError as exc:
            result.fail(f"construction failed: {exc}", domain.with_task('f', f).with_task('h', h))
            return result
        result.tick()
        result.details.setdefault('cases', {})
        cases = result.details['cases']
        cases[marginal.construction_case.value] = cases.get(marginal.construction_case.value, 0) + 1
        if marginal.achieved < Fraction(1, 2):
            result.fail(f"achieved {marginal.achieved}", domain.with_task('f', f).with_task('h', h))
            return result
    return result


def verify_generic_construction(trials=200, seed=0, max_size=16, **_):
    result, rng = _seeded('generic-construction', trials, seed, max_size)
    quadrant_size = max(4, max_size // 4)
    for _trial in range(trials):
        domain = generic_domain(random.Random(child_seed(rng)), quadrant_size=quadrant_size,
                                extra_values=rng.randint(0, 1))
        f = domain.feature('f')
        try:
            weights, witness = construct_generic_distribution(f, domain, 't')
            check = verify_generic_witness(f, domain.with_weights(weights), 't', witness)
            pair = construct_context_featuresets(f, domain, 't', weights, witness)
        except FairnessAuditError as exc:
            result.fail(f"construction failed: {exc}", domain)
            return result
        result.tick()
        if not (check.non_degenerate and pair.increases and pair.decreases):
            result.fail('construction does not satisfy its guarantees', domain.with_weights(weights))
            return result
    return result


def verify_neutral_extension(trials=200, seed=0, max_size=10, **_):
    """A feature that leaves the cells unchanged leaves every audit value unchanged."""
    result, rng = _seeded('neutral-extension', trials, seed, max_size)
    alpha = Fraction(1, 2)
    for _trial in range(trials):
        domain = random_domain(random.Random(child_seed(rng)), max_instances=max_size, features=3, alphabet=3)
        fs = _random_fs(rng, domain)
        f = partition_feature(domain, induce_cells(domain, fs), 'cells')
        extended = fs.with_feature(f)
        epsilon, eta = _random_rational(rng), _random_rational(rng)
        pairs = [
            (adversarial_unfairness(domain, 't', fs, Notion.EO).value,
             adversarial_unfairness(domain, 't', extended, Notion.EO).value),
            (accuracy_driven_unfairness(domain, 't', fs, alpha).value,
             accuracy_driven_unfairness(domain, 't', extended, alpha).value),
            (fairness_enabling(domain, 't', fs, epsilon, eta, alpha).value,
             fairness_enabling(domain, 't', extended, epsilon, eta, alpha).value),
        ]
        result.tick()
        for objective, (without, with_f) in zip(
                (Objective.ADVERSARIAL, Objective.ACCURACY, Objective.ENABLING), pairs):
            if without != with_f:
                result.fail(f"{objective.value}: {without} != {with_f}", domain.with_features([f]),
                            features=list(fs.names))
                return result
    return result


PROPERTIES = {
    'lemma-mutual-eo': verify_lemma_mutual_eo,
    'theorem-multitask': verify_theorem_multitask,
    'monotonicity-adv': verify_monotonicity_adv,
    'monotonicity-enabling': verify_monotonicity_enabling,
    'oracle-equivalence': verify_oracle_equivalence,
    'prp-equivalence': verify_prp_equivalence,
    'claim-dp-marginal': verify_claim_dp_marginal,
    'claim-eo-marginal': verify_claim_eo_marginal,
    'generic-construction': verify_generic_construction,
    'neutral-extension': verify_neutral_extension,
}

EXHAUSTIVE = ('lemma-mutual-eo', 'theorem-multitask')


def run_property(name, trials=None, seed=0, max_size=None, grid=6):
    try:
        check = PROPERTIES[name]
    except KeyError:
        raise InputError(f"unknown property {name!r}; choose one of {sorted(PROPERTIES)}") from None
    if trials is not None and trials < 1:
        raise InputError("trials must be at least 1")
    kwargs = {'seed': seed, 'grid': grid}
    if trials is not None:
        kwargs['trials'] = trials
    if max_size is not None:
        kwargs['max_size'] = max_size
    result = check(**kwargs)
    logger.info("%s: %s after %d checks", name, 'pass' if result.passed else 'FAIL', result.checks)
    return result
