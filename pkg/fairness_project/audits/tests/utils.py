from fractions import Fraction

from audits.domain import Domain, Feature, Group, Instance, load_domain


def make_domain(rows, features=None, task='t'):
    """
    rows: (id, group, label, weight) tuples; weight may be a "p/q" string.
    features: {name: {id: value}}.
    """
    return Domain(
        tuple(Instance(i, Group(g)) for i, g, _, _ in rows),
        {task: {i: label for i, _, label, _ in rows}},
        {i: Fraction(w) for i, _, _, w in rows},
        {name: Feature(name, values) for name, values in (features or {}).items()},
    )


class FixtureMixin:
    """Loads the shipped fixtures once per test class."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.fix12 = load_domain('fix-12')
        cls.fix8a = load_domain('fix-8a')
        cls.fix8b = load_domain('fix-8b')
