from fractions import Fraction

from django.test import SimpleTestCase

from audits.domain import (
    CellPartition, Classifier, Feature, FeatureSet, Group, Quadrant, QUADRANTS,
    available_fixtures, induce_cells, load_domain, parse_domain, partition_feature,
    partition_from_cells, quadrant_mass, resolve_partition, score,
)
from audits.exceptions import InputError, PreconditionError

from .utils import FixtureMixin, make_domain


def document(weights, groups=None):
    ids = [f"x{k}" for k in range(1, len(weights) + 1)]
    groups = groups or ['A', 'D'] * len(ids)
    return {
        'instances': [
            {'id': i, 'group': g, 'weight': w} for i, g, w in zip(ids, groups, weights)
        ],
        'tasks': {'t': {i: k % 2 for k, i in enumerate(ids)}},
        'features': {'f': {i: 'v' for i in ids}},
    }


class ParseDomainTests(FixtureMixin, SimpleTestCase):
    def test_fixture_has_twelve_uniform_instances(self):
        self.assertEqual(len(self.fix12), 12)
        self.assertEqual(set(self.fix12.weights.values()), {Fraction(1, 12)})
        self.assertEqual(self.fix12.group_of('x4'), Group.D)

    def test_single_instance_document(self):
        domain = parse_domain(document(['1/1']))
        self.assertEqual(domain.ids, ('x1',))
        self.assertEqual(domain.weight('x1'), 1)

    def test_weights_must_sum_to_one(self):
        with self.assertRaises(InputError) as ctx:
            parse_domain(document(['1/12'] * 11))
        self.assertIn('instances', ctx.exception.detail)

    def test_float_weights_are_rejected(self):
        with self.assertRaises(InputError):
            parse_domain(document([0.5, 0.5]))

    def test_integer_and_padded_rationals_are_accepted(self):
        domain = parse_domain(document(['0', ' 1 / 1 ']))
        self.assertEqual(domain.weight('x2'), 1)

    def test_duplicate_ids(self):
        doc = document(['1/2', '1/2'])
        doc['instances'][1]['id'] = 'x1'
        with self.assertRaises(InputError):
            parse_domain(doc)

    def test_missing_label(self):
        doc = document(['1/2', '1/2'])
        del doc['tasks']['t']['x2']
        with self.assertRaises(InputError) as ctx:
            parse_domain(doc)
        self.assertIn('tasks', ctx.exception.detail)

    def test_unknown_id_in_feature(self):
        doc = document(['1/2', '1/2'])
        doc['features']['f']['x9'] = 'v'
        with self.assertRaises(InputError):
            parse_domain(doc)

    def test_negative_weight(self):
        with self.assertRaises(InputError):
            parse_domain(document(['-1/2', '3/2']))

    def test_unknown_group(self):
        with self.assertRaises(InputError):
            parse_domain(document(['1/2', '1/2'], groups=['A', 'B']))

    def test_document_round_trip(self):
        again = parse_domain(self.fix8a.to_document())
        self.assertEqual(again.to_document(), self.fix8a.to_document())

    def test_unknown_source(self):
        with self.assertRaises(InputError):
            load_domain('no-such-fixture')

    def test_fixtures_are_listed(self):
        self.assertEqual(available_fixtures(), ['fix-12', 'fix-8a', 'fix-8b'])

    def test_unknown_task_and_feature(self):
        with self.assertRaises(InputError):
            self.fix8a.labels('nope')
        with self.assertRaises(InputError):
            self.fix8a.feature_set(['f1', 'nope'])


class CellPartitionTests(FixtureMixin, SimpleTestCase):
    def test_fix8a_cells(self):
        partition = induce_cells(self.fix8a, self.fix8a.feature_set(['f1', 'f2']))
        self.assertEqual(
            partition.cells,
            (('x1', 'x5'), ('x2', 'x6'), ('x3', 'x7'), ('x4', 'x8')),
        )

    def test_empty_feature_set_is_one_cell(self):
        partition = induce_cells(self.fix8a, FeatureSet())
        self.assertEqual(partition.cells, (self.fix8a.ids,))

    def test_fix12_preimage_cells_match_annotation(self):
        partition = resolve_partition(self.fix12, ['f1', 'f2', 'f3'])
        expected = self.fix12.annotations['preimage_cells']['F']
        self.assertEqual(sorted(map(sorted, partition.as_sets())), sorted(map(sorted, expected)))

    def test_reconciled_cells_match_printed_f_prime_values(self):
        partition = resolve_partition(self.fix12, ['rp1', 'rp2'])
        self.assertEqual(
            partition.cells,
            (('x1', 'x5', 'x7'), ('x2', 'x3', 'x4', 'x6'), ('x8', 'x12'), ('x9', 'x10', 'x11')),
        )

    def test_adding_a_feature_refines(self):
        coarse = resolve_partition(self.fix12, ['r1', 'r2'])
        fine = resolve_partition(self.fix12, ['r1', 'r2', 'f'])
        self.assertTrue(fine.refines(coarse))
        self.assertFalse(coarse.refines(fine))

    def test_feature_order_and_value_names_do_not_matter(self):
        one = resolve_partition(self.fix12, ['f1', 'f2', 'f3'])
        two = resolve_partition(self.fix12, ['f3', 'f1', 'f2'])
        renamed = Feature('g', {i: f"value-{v}" for i, v in self.fix12.feature('f1').values.items()})
        three = induce_cells(
            self.fix12, FeatureSet((renamed, self.fix12.feature('f2'), self.fix12.feature('f3')))
        )
        self.assertEqual(one, two)
        self.assertEqual(one, three)

    def test_constant_feature_leaves_cells_alone(self):
        constant = Feature('c', {i: 'same' for i in self.fix12.ids})
        fs = self.fix12.feature_set(['r1', 'r2'])
        self.assertEqual(induce_cells(self.fix12, fs), induce_cells(self.fix12, fs.with_feature(constant)))

    def test_partition_feature_reproduces_cells(self):
        partition = resolve_partition(self.fix12, ['f1', 'f2', 'f3'])
        f = partition_feature(self.fix12, partition, 'cells')
        self.assertEqual(induce_cells(self.fix12, FeatureSet((f,))), partition)

    def test_explicit_cells_are_validated(self):
        with self.assertRaises(InputError):
            partition_from_cells(self.fix8a, [['x1', 'x2'], ['x2', 'x3']])
        with self.assertRaises(InputError):
            partition_from_cells(self.fix8a, [['x1', 'x9']])
        with self.assertRaises(InputError):
            partition_from_cells(self.fix8a, [['x1']])

    def test_explicit_cells_are_put_in_canonical_order(self):
        partition = partition_from_cells(
            self.fix8a, [['x8', 'x4'], ['x2', 'x3', 'x5', 'x6', 'x7'], ['x1']],
        )
        self.assertEqual(partition.cells[0], ('x1',))
        self.assertEqual(partition.cells[2], ('x4', 'x8'))

    def test_cells_follow_document_order_not_id_strings(self):
        domain = make_domain(
            [('x9', 'A', 1, '1/3'), ('x10', 'D', 0, '1/3'), ('x2', 'A', 0, '1/3')],
            features={'f': {'x9': 'a', 'x10': 'b', 'x2': 'a'}},
        )
        self.assertEqual(resolve_partition(domain, ['f']).cells, (('x9', 'x2'), ('x10',)))
        explicit = partition_from_cells(domain, [['x10'], ['x2', 'x9']])
        self.assertEqual(explicit.cells, (('x9', 'x2'), ('x10',)))

    def test_with_feature_refuses_conflicting_name(self):
        fs = self.fix8a.feature_set(['f1'])
        self.assertIs(fs.with_feature(self.fix8a.feature('f1')), fs)
        with self.assertRaises(InputError):
            fs.with_feature(self.fix8a.feature('f2').renamed('f1'))


class QuadrantAndScoreTests(FixtureMixin, SimpleTestCase):
    def test_quadrant_masses(self):
        self.assertEqual(quadrant_mass(self.fix8a, 't', Quadrant(Group.A, 1)), Fraction(2, 8))
        self.assertEqual(quadrant_mass(self.fix12, 't', Quadrant(Group.D, 0)), Fraction(3, 12))

    def test_quadrant_masses_sum_to_one(self):
        for domain in (self.fix12, self.fix8a, self.fix8b):
            self.assertEqual(sum(quadrant_mass(domain, 't', q) for q in QUADRANTS), 1)

    def test_scores(self):
        self.assertEqual(score(self.fix8a, 't', ['x1', 'x5']).value, Fraction(1, 2))
        self.assertEqual(score(self.fix12, 't', ['x4', 'x6', 'x7']).value, Fraction(2, 3))
        self.assertEqual(score(self.fix12, 't', ['x1', 'x2']).value, 1)

    def test_zero_mass_cell_is_vacuous(self):
        domain = make_domain([('x1', 'A', 1, 1), ('x2', 'D', 1, 0)])
        rate = score(domain, 't', ['x2'])
        self.assertTrue(rate.vacuous)
        self.assertEqual(rate.value, 0)

    def test_empty_cell(self):
        with self.assertRaises(PreconditionError) as ctx:
            score(self.fix8a, 't', [])
        self.assertEqual(ctx.exception.condition, 'cell nonempty')


class ClassifierTests(SimpleTestCase):
    def test_mask_round_trip(self):
        h = Classifier.from_mask(5, 4)
        self.assertEqual(h.labels, (1, 0, 1, 0))
        self.assertEqual(h.mask, 5)
        self.assertEqual(h.flipped().mask, 10)

    def test_predictions_need_matching_partition(self):
        partition = CellPartition((('x1', 'x2'), ('x3',)))
        self.assertEqual(Classifier((0, 1)).predictions(partition), {'x1': 0, 'x2': 0, 'x3': 1})
        with self.assertRaises(InputError):
            Classifier((1,)).predictions(partition)

    def test_labels_are_binary(self):
        with self.assertRaises(InputError):
            Classifier((0, 2))
