"""
Auditing a representation under the three agent objectives.

``LabelingSpace`` precomputes, per cell, how labeling that cell 1 moves each
quantity of interest. All of them are affine in the labeling:

    EO(mask)   = ½|k − Σ u_C| + ½|Σ v_C|     (sums over cells labeled 1)
    DP(mask)   = |Σ δ_C|
    Loss(mask) = α·P(t=1) + Σ ((1−α)·P(C∩t=0) − α·P(C∩t=1))

The exact optimizers work on these closed forms. Exhaustive scans (oracle,
enabling, frontier, PRP) scale the per-cell terms to integers over a common
denominator and walk the labelings in Gray-code order, so each step is one
add or subtract per term.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product

from .conf import BAYES_RULES, audit_settings
from .domain import ZERO, Classifier, Group, resolve_partition, score
from .exceptions import BoundExceededError, InputError, InternalInvariantError
from .metrics import Notion, check_alpha, require_both_groups, unfairness, weighted_loss

logger = logging.getLogger(__name__)


class Objective(str, Enum):
    ADVERSARIAL = 'adversarial'
    ACCURACY = 'accuracy'
    ENABLING = 'enabling'
    FRONTIER = 'frontier'


@dataclass(frozen=True)
class AuditResult:
    """``value`` is a Fraction, or a bool for fairness-enabling and adversarial PRP."""

    objective: Objective
    notion: Notion
    value: object
    witnesses: tuple = ()
    partition: object = None
    alpha: Fraction = None
    epsilon: Fraction = None
    eta: Fraction = None
    details: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class FrontierPoint:
    loss: Fraction
    unfairness: Fraction
    classifier: Classifier


@dataclass(frozen=True)
class ScaledObjective:
    """Integer per-cell terms; ``evaluate(sums)`` over ``denominator`` is the exact value."""

    vectors: tuple
    evaluate: object
    denominator: int

    def exact(self, scaled):
        return Fraction(scaled, self.denominator)


def _scale(*vectors):
    denominator = math.lcm(*(Fraction(x).denominator for vec in vectors for x in vec), 1)
    return denominator, tuple(
        tuple(int(Fraction(x) * denominator) for x in vec) for vec in vectors
    )


def gray_walk(vectors, size, start=0, stop=None):
    """
    Yield (mask, sums) for Gray-code positions start..stop-1, where ``sums[j]`` is
    the sum of ``vectors[j][c]`` over cells c labeled 1 in ``mask``.
    """
    stop = (1 << size) if stop is None else stop
    if start >= stop:
        return
    mask = start ^ (start >> 1)
    sums = [sum(vec[c] for c in range(size) if mask >> c & 1) for vec in vectors]
    yield mask, tuple(sums)
    for position in range(start + 1, stop):
        bit = (position & -position).bit_length() - 1
        mask ^= 1 << bit
        sign = 1 if mask >> bit & 1 else -1
        for j, vec in enumerate(vectors):
            sums[j] += sign * vec[bit]
        yield mask, tuple(sums)


def labeling_ranges(size, chunks):
    """Split the 2^size Gray positions into ``chunks`` contiguous ranges."""
    total = 1 << size
    chunks = max(1, min(chunks, total))
    step = -(-total // chunks)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


class LabelingSpace:
    """All 2^|cells| classifiers over one partition, with affine per-cell terms."""

    def __init__(self, domain, task, partition):
        self.domain = domain
        self.task = task
        self.partition = partition
        self.size = len(partition)
        self.cell_mass = [domain.mass(cell) for cell in partition]

        if task is not None:
            labels = domain.labels(task)
            quadrant_totals = {}
            per_cell = []
            for cell in partition:
                masses = {}
                for group in Group:
                    for label in (0, 1):
                        masses[(group, label)] = domain.mass(
                            i for i in cell if domain.group_of(i) is group and labels[i] == label
                        )
                per_cell.append(masses)
            for key in per_cell[0]:
                quadrant_totals[key] = sum((m[key] for m in per_cell), ZERO)
            self.quadrant_cell_mass = per_cell
            self.quadrant_totals = quadrant_totals

            def share(masses, key):
                total = quadrant_totals[key]
                return masses[key] / total if total else ZERO

            self.u = tuple(share(m, (Group.A, 1)) - share(m, (Group.D, 1)) for m in per_cell)
            self.v = tuple(share(m, (Group.A, 0)) - share(m, (Group.D, 0)) for m in per_cell)
            self.k = int(quadrant_totals[(Group.A, 1)] > 0) - int(quadrant_totals[(Group.D, 1)] > 0)
            self.positive_mass = tuple(m[(Group.A, 1)] + m[(Group.D, 1)] for m in per_cell)
            self.negative_mass = tuple(m[(Group.A, 0)] + m[(Group.D, 0)] for m in per_cell)

        mass_a = domain.group_mass(Group.A)
        mass_d = domain.group_mass(Group.D)
        if mass_a and mass_d:
            self.delta = tuple(
                domain.mass(i for i in cell if domain.group_of(i) is Group.A) / mass_a
                - domain.mass(i for i in cell if domain.group_of(i) is Group.D) / mass_d
                for cell in partition
            )
        else:
            self.delta = None

    def check_bound(self, bound=None):
        bound = audit_settings.CELL_BOUND if bound is None else bound
        if self.size > bound:
            logger.warning("enumeration over %d cells refused (bound %d)", self.size, bound)
            raise BoundExceededError('cell bound', bound, self.size)

    def _require_task(self):
        if self.task is None:
            raise InputError("this computation needs a task")

    def _require_groups(self):
        if self.delta is None:
            require_both_groups(self.domain, 'demographic parity')

    # -- exact values ------------------------------------------------------

    def _selected(self, vector, mask):
        return sum((vector[c] for c in range(self.size) if mask >> c & 1), ZERO)

    def eo_value(self, mask):
        self._require_task()
        return (abs(self.k - self._selected(self.u, mask)) + abs(self._selected(self.v, mask))) / 2

    def dp_value(self, mask):
        self._require_groups()
        return abs(self._selected(self.delta, mask))

    def unfairness_value(self, mask, notion):
        if Notion(notion) is Notion.EO:
            return self.eo_value(mask)
        if Notion(notion) is Notion.DP:
            return self.dp_value(mask)
        raise InputError("prp has no unfairness value; use adversarial_prp")

    def loss_terms(self, alpha):
        self._require_task()
        alpha = check_alpha(alpha)
        base = alpha * sum(self.positive_mass, ZERO)
        deltas = tuple(
            (1 - alpha) * n - alpha * p for p, n in zip(self.positive_mass, self.negative_mass)
        )
        return base, deltas

    def loss_value(self, mask, alpha):
        base, deltas = self.loss_terms(alpha)
        return base + self._selected(deltas, mask)

    def min_loss(self, alpha):
        base, deltas = self.loss_terms(alpha)
        return base + sum((d for d in deltas if d < 0), ZERO)

    # -- integer-scaled objectives ----------------------------------------

    def unfairness_objective(self, notion):
        notion = Notion(notion)
        if notion is Notion.EO:
            self._require_task()
            denominator, (u, v) = _scale(self.u, self.v)
            offset = self.k * denominator
            return ScaledObjective(
                (u, v), lambda s: abs(offset - s[0]) + abs(s[1]), 2 * denominator
            )
        if notion is Notion.DP:
            self._require_groups()
            denominator, (delta,) = _scale(self.delta)
            return ScaledObjective((delta,), lambda s: abs(s[0]), denominator)
        raise InputError("prp has no unfairness value; use adversarial_prp")

    def loss_objective(self, alpha):
        base, deltas = self.loss_terms(alpha)
        denominator, (scaled, (offset,)) = _scale(deltas, (base,))
        return ScaledObjective((scaled,), lambda s: offset + s[0], denominator)

    def scan(self, objectives, start=0, stop=None):
        """Yield (mask, [scaled value per objective]) over a Gray-position range."""
        vectors = [vec for obj in objectives for vec in obj.vectors]
        widths = [len(obj.vectors) for obj in objectives]
        for mask, sums in gray_walk(vectors, self.size, start, stop):
            values = []
            offset = 0
            for obj, width in zip(objectives, widths):
                values.append(obj.evaluate(sums[offset:offset + width]))
                offset += width
            yield mask, values

    def classifier(self, mask):
        return Classifier.from_mask(mask, self.size)


def _space(domain, task, fs):
    return LabelingSpace(domain, task, resolve_partition(domain, fs))


def _check_witness(space, h, notion, value):
    """Recompute a witness's unfairness from scratch through the metrics module."""
    actual = unfairness(h, space.domain, space.task, space.partition, notion).value
    if actual != value:
        raise InternalInvariantError(
            f"witness {h.labels} attains {actual}, reported {value}"
        )


def _fairness_notion(notion):
    notion = Notion(notion)
    if notion is Notion.PRP:
        raise InputError("prp is audited with adversarial_prp (adversarial objective only)")
    return notion


# -- adversarial ---------------------------------------------------------------

def adversarial_unfairness(domain, task, fs, notion):
    """Exact U_adv over all classifiers on the cells of ``fs``, without enumeration."""
    notion = _fairness_notion(notion)
    space = _space(domain, task, fs)

    if notion is Notion.DP:
        space._require_groups()
        positive = sum((d for d in space.delta if d > 0), ZERO)
        negative = -sum((d for d in space.delta if d < 0), ZERO)
        positive_mask = sum(1 << c for c, d in enumerate(space.delta) if d > 0)
        negative_mask = sum(1 << c for c, d in enumerate(space.delta) if d < 0)
        if positive > negative:
            value, mask = positive, positive_mask
        elif negative > positive:
            value, mask = negative, negative_mask
        else:
            value, mask = positive, min(positive_mask, negative_mask)
    else:
        best = None
        for s1, s2 in product((1, -1), repeat=2):
            mask = sum(
                1 << c for c in range(space.size) if -s1 * space.u[c] + s2 * space.v[c] > 0
            )
            candidate = (space.eo_value(mask), -mask)
            if best is None or candidate > best:
                best = candidate
        value, mask = best[0], -best[1]

    witness = space.classifier(mask)
    _check_witness(space, witness, notion, value)
    logger.debug("adversarial %s over %d cells: %s", notion.value, space.size, value)
    return AuditResult(Objective.ADVERSARIAL, notion, value, (witness,), space.partition)


def adversarial_unfairness_oracle(domain, task, fs, notion, cell_bound=None, chunks=1):
    """
    Brute force: every labeling is evaluated. Ties go to the smallest mask.

    ``chunks`` splits the labeling range; the combined result does not depend on it.
    """
    notion = _fairness_notion(notion)
    space = _space(domain, task, fs)
    space.check_bound(cell_bound)
    objective = space.unfairness_objective(notion)

    best = None
    for start, stop in labeling_ranges(space.size, chunks):
        local = None
        for mask, (scaled,) in space.scan([objective], start, stop):
            if local is None or (scaled, -mask) > local:
                local = (scaled, -mask)
        if best is None or local > best:
            best = local

    value = objective.exact(best[0])
    witness = space.classifier(-best[1])
    _check_witness(space, witness, notion, value)
    return AuditResult(
        Objective.ADVERSARIAL, notion, value, (witness,), space.partition,
        details={'method': 'oracle', 'labelings': 1 << space.size},
    )


def adversarial_prp(domain, task, fs, cell_bound=None):
    """
    Whether every expressible classifier is PRP-fair. The value is True when no
    PRP-unfair classifier exists; otherwise the smallest-mask unfair one is the witness.
    """
    require_both_groups(domain, 'adversarial predictive rate parity')
    space = _space(domain, task, fs)
    space.check_bound(cell_bound)

    columns = [
        tuple(m[(group, 1)] for m in space.quadrant_cell_mass) for group in Group
    ] + [
        tuple(m[(group, 1)] + m[(group, 0)] for m in space.quadrant_cell_mass) for group in Group
    ]
    _, scaled = _scale(*columns)
    totals = [sum(col) for col in scaled]

    def fair(pos_a, pos_d, tot_a, tot_d):
        if tot_a == 0 or tot_d == 0:
            return True
        return pos_a * tot_d == pos_d * tot_a

    unfair_mask = None
    for mask, sums in gray_walk(scaled, space.size):
        pos_a, pos_d, tot_a, tot_d = sums
        rest = [t - s for t, s in zip(totals, sums)]
        if not (fair(pos_a, pos_d, tot_a, tot_d) and fair(*rest)):
            if unfair_mask is None or mask < unfair_mask:
                unfair_mask = mask

    witnesses = ()
    if unfair_mask is not None:
        witnesses = (space.classifier(unfair_mask),)
        if unfairness(witnesses[0], domain, task, space.partition, Notion.PRP).fair:
            raise InternalInvariantError(f"PRP witness {unfair_mask} is fair")
    return AuditResult(
        Objective.ADVERSARIAL, Notion.PRP, unfair_mask is None, witnesses, space.partition,
    )


# -- accuracy-driven -----------------------------------------------------------

def _bayes_choices(domain, task, partition, alpha, rule, pin_zero_mass):
    choices = []
    for cell in partition:
        if domain.mass(cell) == 0:
            choices.append((0,) if pin_zero_mass or rule == 'threshold' else (0, 1))
            continue
        s = score(domain, task, cell).value
        if rule == 'threshold':
            choices.append((1,) if s > alpha else (0,))
            continue
        cost_one = (1 - alpha) * (1 - s)
        cost_zero = alpha * s
        if cost_one < cost_zero:
            choices.append((1,))
        elif cost_one > cost_zero:
            choices.append((0,))
        else:
            choices.append((0, 1))
    return choices


def bayes_optimal_set(domain, task, fs, alpha, rule=None, pin_zero_mass=None, cap=None):
    """
    Every minimizer of L_P^α over the cells of ``fs``, in mask order.

    ``rule='loss'`` derives labels from the exact per-cell loss (ties and zero-mass
    cells take both labels). ``rule='threshold'`` applies 1 iff s(C) > α literally
    and yields a single classifier.
    """
    alpha = check_alpha(alpha)
    rule = rule or audit_settings.BAYES_RULE
    if rule not in BAYES_RULES:
        raise InputError(f"unknown Bayes rule {rule!r}; choose one of {BAYES_RULES}")
    pin_zero_mass = audit_settings.PIN_ZERO_MASS_CELLS if pin_zero_mass is None else pin_zero_mass
    cap = audit_settings.MINIMIZER_CAP if cap is None else cap

    partition = resolve_partition(domain, fs)
    choices = _bayes_choices(domain, task, partition, alpha, rule, pin_zero_mass)
    count = math.prod(len(c) for c in choices)
    if count > cap:
        logger.warning("minimizer set of size %d exceeds cap %d", count, cap)
        raise BoundExceededError('minimizer cap', cap, count)

    fixed = sum(1 << c for c, options in enumerate(choices) if options == (1,))
    free = [c for c, options in enumerate(choices) if len(options) == 2]
    minimizers = []
    for subset in range(1 << len(free)):
        mask = fixed | sum(1 << c for n, c in enumerate(free) if subset >> n & 1)
        minimizers.append(Classifier.from_mask(mask, len(partition)))
    return minimizers


def accuracy_driven_unfairness(domain, task, fs, alpha, notion=Notion.EO, rule=None,
                               pin_zero_mass=None, cap=None):
    notion = _fairness_notion(notion)
    alpha = check_alpha(alpha)
    rule = rule or audit_settings.BAYES_RULE
    space = _space(domain, task, fs)
    minimizers = bayes_optimal_set(domain, task, space.partition, alpha, rule, pin_zero_mass, cap)

    value, witness = None, None
    for h in minimizers:
        candidate = space.unfairness_value(h.mask, notion)
        if value is None or candidate > value:
            value, witness = candidate, h

    loss = weighted_loss(witness, domain, task, space.partition, alpha)
    if rule == 'loss' and loss != space.min_loss(alpha):
        raise InternalInvariantError(f"witness loss {loss} is not the minimum {space.min_loss(alpha)}")
    _check_witness(space, witness, notion, value)
    return AuditResult(
        Objective.ACCURACY, notion, value, (witness,), space.partition, alpha=alpha,
        details={'minimizers': len(minimizers), 'rule': rule, 'loss': loss},
    )


# -- fairness-enabling ---------------------------------------------------------

def fairness_enabling(domain, task, fs, epsilon, eta, alpha, notion=Notion.EO, cell_bound=None):
    """Is there an h over ``fs`` with L_P^α(h) ≤ ε and U(h) ≤ η? Witness is the smallest such mask."""
    notion = _fairness_notion(notion)
    epsilon, eta, alpha = Fraction(epsilon), Fraction(eta), check_alpha(alpha)
    space = _space(domain, task, fs)
    space.check_bound(cell_bound)
    loss = space.loss_objective(alpha)
    unfair = space.unfairness_objective(notion)
    loss_cap = math.floor(epsilon * loss.denominator)
    unfair_cap = math.floor(eta * unfair.denominator)

    found = None
    for mask, (scaled_loss, scaled_unfair) in space.scan([loss, unfair]):
        if scaled_loss <= loss_cap and scaled_unfair <= unfair_cap:
            if found is None or mask < found:
                found = mask

    witnesses = () if found is None else (space.classifier(found),)
    return AuditResult(
        Objective.ENABLING, notion, found is not None, witnesses, space.partition,
        alpha=alpha, epsilon=epsilon, eta=eta,
    )


def frontier(domain, task, fs, alpha, notion=Notion.EO, cell_bound=None):
    """Pareto-minimal (loss, unfairness) points, loss ascending; each point keeps its smallest mask."""
    notion = _fairness_notion(notion)
    alpha = check_alpha(alpha)
    space = _space(domain, task, fs)
    space.check_bound(cell_bound)
    loss = space.loss_objective(alpha)
    unfair = space.unfairness_objective(notion)

    best_per_loss = {}
    for mask, (scaled_loss, scaled_unfair) in space.scan([loss, unfair]):
        key = (scaled_unfair, mask)
        if scaled_loss not in best_per_loss or key < best_per_loss[scaled_loss]:
            best_per_loss[scaled_loss] = key

    points = []
    lowest = None
    for scaled_loss in sorted(best_per_loss):
        scaled_unfair, mask = best_per_loss[scaled_loss]
        if lowest is None or scaled_unfair < lowest:
            lowest = scaled_unfair
            points.append(FrontierPoint(
                loss.exact(scaled_loss), unfair.exact(scaled_unfair), space.classifier(mask),
            ))
    return points


def run_objective(domain, task, fs, objective, notion=Notion.EO, alpha=None, epsilon=None,
                  eta=None, cell_bound=None, rule=None):
    """Dispatch one audit; used by deletion comparisons and the command layer."""
    objective = Objective(objective)
    notion = Notion(notion)
    if notion is Notion.PRP:
        if objective is not Objective.ADVERSARIAL:
            raise InputError("prp supports the adversarial objective only")
        return adversarial_prp(domain, task, fs, cell_bound)
    if objective is Objective.ADVERSARIAL:
        return adversarial_unfairness(domain, task, fs, notion)
    if alpha is None:
        raise InputError(f"objective {objective.value} needs --alpha")
    if objective is Objective.ACCURACY:
        return accuracy_driven_unfairness(domain, task, fs, alpha, notion, rule=rule)
    if objective is Objective.ENABLING:
        if epsilon is None or eta is None:
            raise InputError("objective enabling needs --epsilon and --eta")
        return fairness_enabling(domain, task, fs, epsilon, eta, alpha, notion, cell_bound)
    raise InputError("the frontier is a list of points; call frontier()")
