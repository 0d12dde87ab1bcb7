"""
Seeded random domains.

Everything random in the package flows from a ``random.Random`` seeded
explicitly; the same parameters always produce the same document.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from .domain import Domain, Feature, Group, Instance, format_rational, parse_domain
from .exceptions import InputError

logger = logging.getLogger(__name__)

WEIGHT_STYLES = ('uniform', 'random')
SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 0
    min_instances: int = 8
    max_instances: int = 8
    min_features: int = 2
    max_features: int = 2
    alphabet: int = 2
    weight_style: str = 'uniform'
    max_denominator: int = 24
    positive_weights: bool = True
    task: str = 't'

    def validate(self):
        problems = []
        if not 0 <= self.seed < SEED_LIMIT:
            problems.append("seed must be a 64-bit unsigned integer")
        if self.min_instances < 2 or self.min_instances > self.max_instances:
            problems.append("instance range must satisfy 2 <= min <= max")
        if self.min_features < 0 or self.min_features > self.max_features:
            problems.append("feature range must satisfy 0 <= min <= max")
        if self.alphabet < 1:
            problems.append("alphabet must have at least one value")
        if self.weight_style not in WEIGHT_STYLES:
            problems.append(f"weight style must be one of {WEIGHT_STYLES}")
        if self.weight_style == 'random' and self.positive_weights and self.max_denominator < self.max_instances:
            problems.append("max denominator must be at least the instance count for positive weights")
        if problems:
            raise InputError("infeasible generator parameters", detail=problems)
        return self


def child_seed(rng):
    """A derived seed for one sub-task, so trials stay independent of each other's draws."""
    return rng.randrange(SEED_LIMIT)


def random_groups(rng, n):
    groups = [rng.choice((Group.A, Group.D)) for _ in range(n)]
    if len(set(groups)) == 1:
        flip = rng.randrange(n)
        groups[flip] = groups[flip].other
    return groups


def random_labeling(rng, ids):
    return {i: rng.randint(0, 1) for i in ids}


def random_weights(rng, n, style, max_denominator, positive=True):
    if style == 'uniform':
        return [Fraction(1, n)] * n
    low = 1 if positive else 0
    remaining = max_denominator
    parts = []
    for slot in range(n - 1):
        high = remaining - low * (n - 1 - slot)
        high = min(high, max(low, 2 * max_denominator // n))
        part = rng.randint(low, max(low, high))
        parts.append(part)
        remaining -= part
    # the last instance absorbs the residue
    parts.append(remaining)
    return [Fraction(part, max_denominator) for part in parts]


def gen_document(params):
    """A validated input document for ``params``."""
    params.validate()
    rng = random.Random(params.seed)
    n = rng.randint(params.min_instances, params.max_instances)
    ids = [f"x{k}" for k in range(1, n + 1)]
    groups = random_groups(rng, n)
    weights = random_weights(rng, n, params.weight_style, params.max_denominator, params.positive_weights)
    labels = random_labeling(rng, ids)
    features = {}
    for k in range(1, rng.randint(params.min_features, params.max_features) + 1):
        features[f"f{k}"] = {i: f"v{rng.randrange(params.alphabet)}" for i in ids}
    document = {
        'instances': [
            {'id': i, 'group': g.value, 'weight': format_rational(w)}
            for i, g, w in zip(ids, groups, weights)
        ],
        'tasks': {params.task: labels},
        'features': features,
    }
    logger.debug("generated %d instances, %d features from seed %d", n, len(features), params.seed)
    return document


def gen_instance(params):
    """Generate and validate; the returned document always parses."""
    document = gen_document(params)
    parse_domain(document)
    return document


def random_domain(rng, min_instances=2, max_instances=8, features=2, alphabet=2,
                  weight_style='random', max_denominator=24, positive_weights=True):
    """A Domain drawn from ``rng``, for property checks that build many instances."""
    n = rng.randint(min_instances, max_instances)
    ids = [f"x{k}" for k in range(1, n + 1)]
    groups = random_groups(rng, n)
    weights = random_weights(rng, n, weight_style, max(max_denominator, n), positive_weights)
    domain_features = {
        f"f{k}": Feature(f"f{k}", {i: f"v{rng.randrange(alphabet)}" for i in ids})
        for k in range(1, features + 1)
    }
    return Domain(
        tuple(Instance(i, g) for i, g in zip(ids, groups)),
        {'t': random_labeling(rng, ids)},
        dict(zip(ids, weights)),
        domain_features,
    )


def generic_domain(rng, quadrant_size=4, extra_values=0):
    """
    A domain whose feature ``f`` is non-committing and 2-anonymous for task ``t``.

    Each quadrant gets ``quadrant_size`` (>= 4) instances; two of them take value
    "a", two take "b", the rest are split over "a", "b" and up to ``extra_values``
    further values in pairs so that no (value, group, label) count is 1.
    """
    if quadrant_size < 4:
        raise InputError("quadrants need at least four instances")
    instances, labels, values = [], {}, {}
    counter = 0
    alphabet = ['a', 'b'] + [f"c{k}" for k in range(extra_values)]
    for group in Group:
        for label in (1, 0):
            block = []
            for _ in range(quadrant_size):
                counter += 1
                block.append(f"x{counter}")
            rng.shuffle(block)
            assigned = ['a', 'a', 'b', 'b']
            rest = quadrant_size - 4
            while rest >= 2:
                value = rng.choice(alphabet)
                assigned += [value, value]
                rest -= 2
            if rest:
                assigned.append(rng.choice(('a', 'b')))
            for i, value in zip(block, assigned):
                instances.append(Instance(i, group))
                labels[i] = label
                values[i] = value
    instances.sort(key=lambda inst: int(inst.id[1:]))
    n = len(instances)
    return Domain(
        tuple(instances),
        {'t': labels},
        {inst.id: Fraction(1, n) for inst in instances},
        {'f': Feature('f', values)},
    )
