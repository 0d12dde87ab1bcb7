"""
Classifier-level fairness and loss quantities.

Every public function takes a classifier ``h`` over the cells of ``fs`` (a
FeatureSet, a CellPartition or a list of feature names). The ``*_for_labelings``
helpers work directly on id -> label maps and are what the constructors use,
since their targets are arbitrary functions on X.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .domain import ZERO, Group, Rate, ratio, resolve_partition
from .exceptions import PreconditionError

logger = logging.getLogger(__name__)


class Notion(str, Enum):
    DP = 'dp'
    EO = 'eo'
    PRP = 'prp'


@dataclass(frozen=True)
class GroupRates:
    fpr_a: Rate
    fpr_d: Rate
    fnr_a: Rate
    fnr_d: Rate

    @property
    def eo_value(self):
        # equals the value for 1 - h only when all four quadrants have positive mass
        return (
            abs(self.fnr_a.value - self.fnr_d.value)
            + abs(self.fpr_a.value - self.fpr_d.value)
        ) / 2


@dataclass(frozen=True)
class UnfairnessReport:
    """
    ``value`` is the unfairness for DP and EO; for PRP it is 0 (fair) or 1 (unfair)
    and ``conditional_rates`` maps (prediction, group) to P(t=1 | h=prediction, group).
    """

    notion: Notion
    value: Fraction
    rates: GroupRates = None
    positive_rates: tuple = None
    conditional_rates: dict = field(default=None, compare=False)
    witness: object = None

    @property
    def fair(self):
        return self.value == 0


@dataclass(frozen=True)
class SuccessRates:
    equal: bool
    rate_a: Fraction
    rate_d: Fraction


def check_alpha(alpha):
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise PreconditionError('0 < alpha < 1', f"alpha must lie strictly between 0 and 1, got {alpha}")
    return alpha


def require_both_groups(domain, operation):
    for group in Group:
        if domain.group_mass(group) == 0:
            logger.warning("%s: group %s has zero mass", operation, group.value)
            raise PreconditionError(
                'both groups have positive mass',
                f"{operation} is undefined: group {group.value} has zero mass",
            )


# -- labeling-level computations ------------------------------------------

def _error_rate(domain, truth, predictions, group, label):
    """P(h != label | X_{group,label}); vacuous when the quadrant has zero mass."""
    quadrant = [i for i in domain.members(group) if truth[i] == label]
    wrong = [i for i in quadrant if predictions[i] != label]
    return ratio(domain.mass(wrong), domain.mass(quadrant))


def rates_for_labelings(domain, truth, predictions):
    return GroupRates(
        fpr_a=_error_rate(domain, truth, predictions, Group.A, 0),
        fpr_d=_error_rate(domain, truth, predictions, Group.D, 0),
        fnr_a=_error_rate(domain, truth, predictions, Group.A, 1),
        fnr_d=_error_rate(domain, truth, predictions, Group.D, 1),
    )


def eo_for_labelings(domain, truth, predictions):
    rates = rates_for_labelings(domain, truth, predictions)
    return UnfairnessReport(Notion.EO, rates.eo_value, rates=rates)


def positive_rate(domain, predictions, group):
    members = domain.members(group)
    return ratio(domain.mass(i for i in members if predictions[i] == 1), domain.mass(members))


def dp_for_labelings(domain, predictions):
    require_both_groups(domain, 'demographic parity')
    rate_a = positive_rate(domain, predictions, Group.A).value
    rate_d = positive_rate(domain, predictions, Group.D).value
    return UnfairnessReport(Notion.DP, abs(rate_a - rate_d), positive_rates=(rate_a, rate_d))


def prp_for_labelings(domain, truth, predictions):
    conditional = {}
    fair = True
    for prediction in (0, 1):
        rates = {}
        for group in Group:
            selected = [i for i in domain.members(group) if predictions[i] == prediction]
            rate = ratio(domain.mass(i for i in selected if truth[i] == 1), domain.mass(selected))
            conditional[(prediction, group.value)] = rate
            rates[group] = rate
        # a prediction value with zero mass in either group constrains nothing
        if not rates[Group.A].vacuous and not rates[Group.D].vacuous:
            fair = fair and rates[Group.A].value == rates[Group.D].value
    return UnfairnessReport(
        Notion.PRP, ZERO if fair else Fraction(1), conditional_rates=conditional
    )


def loss_for_labelings(domain, truth, predictions, alpha):
    alpha = check_alpha(alpha)
    false_negative = domain.mass(i for i in domain.ids if truth[i] == 1 and predictions[i] == 0)
    false_positive = domain.mass(i for i in domain.ids if truth[i] == 0 and predictions[i] == 1)
    return alpha * false_negative + (1 - alpha) * false_positive


# -- classifier-level operations --------------------------------------------

def _predictions(h, domain, fs):
    return h.predictions(resolve_partition(domain, fs))


def group_rates(h, domain, task, fs):
    return rates_for_labelings(domain, domain.labels(task), _predictions(h, domain, fs))


def eo_unfairness(h, domain, task, fs):
    report = eo_for_labelings(domain, domain.labels(task), _predictions(h, domain, fs))
    return UnfairnessReport(Notion.EO, report.value, rates=report.rates, witness=h)


def dp_unfairness(h, domain, fs):
    report = dp_for_labelings(domain, _predictions(h, domain, fs))
    return UnfairnessReport(Notion.DP, report.value, positive_rates=report.positive_rates, witness=h)


def prp_is_fair(h, domain, task, fs):
    report = prp_for_labelings(domain, domain.labels(task), _predictions(h, domain, fs))
    return UnfairnessReport(
        Notion.PRP, report.value, conditional_rates=report.conditional_rates, witness=h
    )


def unfairness(h, domain, task, fs, notion):
    notion = Notion(notion)
    if notion is Notion.EO:
        return eo_unfairness(h, domain, task, fs)
    if notion is Notion.DP:
        return dp_unfairness(h, domain, fs)
    return prp_is_fair(h, domain, task, fs)


def weighted_loss(h, domain, task, fs, alpha):
    """L_P^α(h) = α·P(h=0, t=1) + (1−α)·P(h=1, t=0)."""
    return loss_for_labelings(domain, domain.labels(task), _predictions(h, domain, fs), alpha)


def success_rates(domain, labels):
    require_both_groups(domain, 'equal success rates')
    rate_a = positive_rate(domain, labels, Group.A).value
    rate_d = positive_rate(domain, labels, Group.D).value
    return SuccessRates(rate_a == rate_d, rate_a, rate_d)


def equal_success_rates(domain, task):
    return success_rates(domain, domain.labels(task))
