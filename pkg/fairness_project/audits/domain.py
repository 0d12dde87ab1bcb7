"""
Finite probabilistic domains.

A ``Domain`` is a finite instance set split into groups A and D, one or more
deterministic labelings ("tasks"), an exact probability weight per instance and
any number of finite-valued features. Features induce a ``CellPartition``; a
``Classifier`` is a labeling of those cells.

All arithmetic uses ``fractions.Fraction``. Instances of weight 0 stay in the
domain: they take part in set-level checks (non-committing, k-anonymity) but
never in probabilities.
"""
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .conf import audit_settings
from .exceptions import InputError, PreconditionError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)
LABELS = (0, 1)


class Group(str, Enum):
    A = 'A'
    D = 'D'

    @property
    def other(self):
        return Group.D if self is Group.A else Group.A


@dataclass(frozen=True)
class Quadrant:
    """X_{g,l}: instances of group ``group`` with ground-truth label ``label``."""

    group: Group
    label: int

    def __str__(self):
        return f"({self.group.value},{self.label})"


QUADRANTS = (
    Quadrant(Group.A, 1),
    Quadrant(Group.A, 0),
    Quadrant(Group.D, 1),
    Quadrant(Group.D, 0),
)


@dataclass(frozen=True)
class Rate:
    """An exact rate; ``vacuous`` is set when the conditioning event has zero mass (value is then 0)."""

    value: Fraction
    vacuous: bool = False


def ratio(numerator, denominator):
    if denominator == 0:
        return Rate(ZERO, vacuous=True)
    return Rate(Fraction(numerator) / denominator)


@dataclass(frozen=True)
class Instance:
    id: str
    group: Group


@dataclass(frozen=True)
class Feature:
    name: str
    values: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, 'values', MappingProxyType(dict(self.values)))

    def value_of(self, instance_id):
        try:
            return self.values[instance_id]
        except KeyError:
            raise InputError(
                f"feature {self.name!r} has no value for instance {instance_id!r}"
            ) from None

    def image(self, ids):
        """Distinct values over ``ids`` in first-appearance order."""
        return tuple(dict.fromkeys(self.value_of(i) for i in ids))

    def preimage(self, value):
        return frozenset(i for i, v in self.values.items() if v == value)

    def renamed(self, name):
        return Feature(name, self.values)


@dataclass(frozen=True)
class FeatureSet:
    features: tuple = ()

    def __post_init__(self):
        features = tuple(self.features)
        names = [f.name for f in features]
        if len(names) != len(set(names)):
            raise InputError(f"duplicate feature names in feature set: {names}")
        object.__setattr__(self, 'features', features)

    def __iter__(self):
        return iter(self.features)

    def __len__(self):
        return len(self.features)

    @property
    def names(self):
        return tuple(f.name for f in self.features)

    def with_feature(self, feature):
        """F ∪ {f}. Re-adding a feature already present returns the same set."""
        for existing in self.features:
            if existing.name == feature.name:
                if existing.values != feature.values:
                    raise InputError(f"a different feature named {feature.name!r} is already in the set")
                return self
        return FeatureSet(self.features + (feature,))


@dataclass(frozen=True)
class CellPartition:
    """
    Cells as tuples of instance ids.

    Cells are ordered by their first member in domain order, and members inside a
    cell keep domain order, so every witness derived from a partition is
    deterministic. "Smallest member id" always means earliest position in the
    input document, never string order of the ids: x10 sorts after x9 when the
    document lists it after x9.
    """

    cells: tuple

    def __post_init__(self):
        cells = tuple(tuple(cell) for cell in self.cells)
        object.__setattr__(self, 'cells', cells)
        object.__setattr__(
            self, '_index', {i: n for n, cell in enumerate(cells) for i in cell}
        )

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def cell_of(self, instance_id):
        return self._index[instance_id]

    def as_sets(self):
        return [frozenset(cell) for cell in self.cells]

    def refines(self, coarser):
        """True if every cell lies inside exactly one cell of ``coarser``."""
        return all(
            len({coarser.cell_of(i) for i in cell}) == 1 for cell in self.cells
        )


@dataclass(frozen=True)
class Classifier:
    """
    A labeling of cells, one label per cell in canonical cell order.

    ``mask`` encodes the labeling as Σ label_i·2^i; smaller masks come first
    whenever several optimal labelings exist.
    """

    labels: tuple

    def __post_init__(self):
        labels = tuple(int(label) for label in self.labels)
        if any(label not in LABELS for label in labels):
            raise InputError(f"classifier labels must be 0 or 1, got {labels}")
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_mask(cls, mask, size):
        return cls(tuple((mask >> i) & 1 for i in range(size)))

    @classmethod
    def constant(cls, label, size):
        return cls((label,) * size)

    @property
    def mask(self):
        return sum(label << i for i, label in enumerate(self.labels))

    def __len__(self):
        return len(self.labels)

    def flipped(self):
        return Classifier(tuple(1 - label for label in self.labels))

    def predictions(self, partition):
        if len(partition) != len(self.labels):
            raise InputError(
                f"classifier has {len(self.labels)} labels but the partition has {len(partition)} cells"
            )
        return {i: label for cell, label in zip(partition.cells, self.labels) for i in cell}

    def positive_cells(self, partition):
        return [cell for cell, label in zip(partition.cells, self.labels) if label == 1]


@dataclass(frozen=True)
class Domain:
    """X with its groups, tasks (id -> label), weights (id -> Fraction) and features."""

    instances: tuple
    tasks: Mapping
    weights: Mapping
    features: Mapping = field(default_factory=dict)
    annotations: Mapping = field(default_factory=dict)

    def __post_init__(self):
        instances = tuple(self.instances)
        ids = [inst.id for inst in instances]
        if len(ids) != len(set(ids)):
            raise InputError("duplicate instance ids")
        if not ids:
            raise InputError("a domain needs at least one instance")
        weights = {i: Fraction(self.weights[i]) if i in self.weights else None for i in ids}
        missing = [i for i, w in weights.items() if w is None]
        if missing:
            raise InputError(f"instances without weight: {missing}")
        if any(w < 0 for w in weights.values()):
            raise InputError("weights must be nonnegative")
        total = sum(weights.values(), ZERO)
        if total != ONE:
            raise InputError(f"weights sum to {total}, expected 1")
        tasks = {}
        for name, labels in self.tasks.items():
            unlabeled = [i for i in ids if i not in labels]
            if unlabeled:
                raise InputError(f"task {name!r} has no label for {unlabeled}")
            if any(labels[i] not in LABELS for i in ids):
                raise InputError(f"task {name!r} has labels outside {{0, 1}}")
            tasks[name] = MappingProxyType({i: int(labels[i]) for i in ids})
        features = {}
        for name, feature in self.features.items():
            if not isinstance(feature, Feature):
                feature = Feature(name, feature)
            for i in ids:
                feature.value_of(i)
            features[name] = feature

        object.__setattr__(self, 'instances', instances)
        object.__setattr__(self, 'weights', MappingProxyType(weights))
        object.__setattr__(self, 'tasks', MappingProxyType(tasks))
        object.__setattr__(self, 'features', MappingProxyType(features))
        object.__setattr__(self, 'annotations', MappingProxyType(dict(self.annotations)))
        object.__setattr__(self, '_groups', {inst.id: inst.group for inst in instances})
        object.__setattr__(self, '_position', {inst.id: n for n, inst in enumerate(instances)})

    # -- structure -------------------------------------------------------

    @property
    def ids(self):
        return tuple(inst.id for inst in self.instances)

    def __len__(self):
        return len(self.instances)

    def group_of(self, instance_id):
        return self._groups[instance_id]

    def position(self, instance_id):
        return self._position[instance_id]

    def members(self, group):
        return tuple(i for i in self.ids if self._groups[i] is group)

    def labels(self, task):
        try:
            return self.tasks[task]
        except KeyError:
            raise InputError(f"unknown task {task!r}; known: {sorted(self.tasks)}") from None

    def quadrant_members(self, task, quadrant):
        labels = self.labels(task)
        return tuple(
            i for i in self.ids
            if self._groups[i] is quadrant.group and labels[i] == quadrant.label
        )

    def feature(self, name):
        try:
            return self.features[name]
        except KeyError:
            raise InputError(f"unknown feature {name!r}; known: {sorted(self.features)}") from None

    def feature_set(self, names):
        return FeatureSet(tuple(self.feature(name) for name in names))

    # -- measure ---------------------------------------------------------

    def weight(self, instance_id):
        return self.weights[instance_id]

    def mass(self, ids):
        return sum((self.weights[i] for i in ids), ZERO)

    def group_mass(self, group):
        return self.mass(self.members(group))

    def support(self):
        return tuple(i for i in self.ids if self.weights[i] > 0)

    # -- derived domains -------------------------------------------------

    def with_weights(self, weights):
        return Domain(self.instances, self.tasks, weights, self.features, self.annotations)

    def with_task(self, name, labels):
        tasks = dict(self.tasks)
        tasks[name] = labels
        return Domain(self.instances, tasks, self.weights, self.features, self.annotations)

    def with_features(self, features):
        merged = dict(self.features)
        for feature in features:
            merged[feature.name] = feature
        return Domain(self.instances, self.tasks, self.weights, merged, self.annotations)

    def to_document(self):
        """The input-format document for this domain (weights as "p/q" strings)."""
        return {
            'instances': [
                {'id': inst.id, 'group': inst.group.value, 'weight': format_rational(self.weights[inst.id])}
                for inst in self.instances
            ],
            'tasks': {name: dict(labels) for name, labels in self.tasks.items()},
            'features': {name: dict(feature.values) for name, feature in self.features.items()},
        }


def format_rational(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# -- operations ----------------------------------------------------------

def parse_domain(document):
    """Validate an input document and build a Domain (weights parsed exactly)."""
    from .serializers import DomainDocumentSerializer

    serializer = DomainDocumentSerializer(data=document)
    if not serializer.is_valid():
        logger.warning("rejected domain document: %s", serializer.errors)
        raise InputError("invalid domain document", detail=serializer.errors)
    return serializer.save()


def fixture_path(name):
    return Path(audit_settings.DATA_DIR) / f"{name}.json"


def load_domain(source):
    """Load a domain from a file path or from a shipped fixture name (fix-12, fix-8a, fix-8b)."""
    path = Path(source)
    if not path.exists():
        path = fixture_path(source)
    if not path.exists():
        raise InputError(f"no such document or fixture: {source!r}")
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return parse_domain(document)


def available_fixtures():
    return sorted(p.stem for p in Path(audit_settings.DATA_DIR).glob('*.json'))


def induce_cells(domain, fs):
    """Partition the instances by their joint feature values."""
    cells = {}
    for i in domain.ids:
        key = tuple(feature.value_of(i) for feature in fs)
        cells.setdefault(key, []).append(i)
    return CellPartition(tuple(cells.values()))


def partition_from_cells(domain, cells):
    """A CellPartition from explicit cells; they must be disjoint, nonempty and cover the domain."""
    seen = set()
    normalized = []
    for cell in cells:
        unknown = set(cell) - set(domain.ids)
        cell = [i for i in domain.ids if i in set(cell)]
        if unknown or not cell:
            raise InputError(f"cell {sorted(cell)} is empty or has unknown ids")
        if seen & set(cell):
            raise InputError(f"cells overlap on {sorted(seen & set(cell))}")
        seen |= set(cell)
        normalized.append(cell)
    uncovered = [i for i in domain.ids if i not in seen]
    if uncovered:
        raise InputError(f"cells do not cover {uncovered}")
    normalized.sort(key=lambda cell: domain.position(cell[0]))
    return CellPartition(tuple(normalized))


def partition_feature(domain, partition, name):
    """A synthetic feature whose value is the cell index, inducing exactly ``partition``."""
    return Feature(name, {i: f"c{partition.cell_of(i)}" for i in domain.ids})


def resolve_partition(domain, fs):
    """Accept a FeatureSet, a CellPartition or an iterable of feature names."""
    if isinstance(fs, CellPartition):
        return fs
    if not isinstance(fs, FeatureSet):
        fs = domain.feature_set(list(fs))
    return induce_cells(domain, fs)


def quadrant_mass(domain, task, quadrant):
    return domain.mass(domain.quadrant_members(task, quadrant))


def score(domain, task, cell):
    """s_t^P(C): P-weighted fraction of label-1 instances in ``cell``; vacuous (0) on zero mass."""
    cell = tuple(cell)
    if not cell:
        raise PreconditionError('cell nonempty')
    unknown = [i for i in cell if i not in domain.weights]
    if unknown:
        raise InputError(f"unknown instance ids {unknown}")
    labels = domain.labels(task)
    positives = domain.mass(i for i in cell if labels[i] == 1)
    return ratio(positives, domain.mass(cell))


def is_label_homogeneous(domain, task, cell):
    """No positive-mass disagreement inside ``cell`` under ``task``."""
    labels = domain.labels(task)
    return len({labels[i] for i in cell if domain.weight(i) > 0}) <= 1


def complement_labels(labels):
    return {i: 1 - label for i, label in labels.items()}


def ids_where(labels, value, ids: Iterable = None):
    ids = labels.keys() if ids is None else ids
    return tuple(i for i in ids if labels[i] == value)
