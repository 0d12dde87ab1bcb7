from fractions import Fraction

from django.test import SimpleTestCase

from audits.constructors import (
    ConstructionCase, dp_adversarial_marginal, dp_corollary_witness, eo_adversarial_marginal,
    multitask_certificate, mutual_eo_audit, prp_feasibility,
)
from audits.domain import Classifier, partition_from_cells, resolve_partition
from audits.exceptions import PreconditionError
from audits.metrics import Notion, dp_for_labelings, eo_for_labelings

from .utils import FixtureMixin, make_domain


def labels_from(feature):
    return {i: int(v) for i, v in feature.values.items()}


class DpMarginalTests(FixtureMixin, SimpleTestCase):
    def test_group_split_classifier(self):
        partition = resolve_partition(self.fix8a, ['f1', 'f2'])
        h = Classifier.from_mask(3, 4).predictions(partition)
        marginal = dp_adversarial_marginal(self.fix8a, h)
        self.assertEqual(marginal.achieved, 1)
        self.assertEqual(marginal.construction_case, ConstructionCase.DP_SPLIT)
        self.assertEqual(sum(marginal.weights.values()), 1)
        self.assertEqual(dp_for_labelings(self.fix8a.with_weights(marginal.weights), h).value, 1)

    def test_task_name_as_target(self):
        marginal = dp_adversarial_marginal(self.fix12, 't')
        self.assertEqual(marginal.achieved, 1)
        # (y1, y2) = (1, 0): label-1 instances of A against label-0 instances of D
        self.assertEqual(marginal.chosen_sets, (('x1', 'x2', 'x3'), ('x10', 'x11', 'x12')))
        self.assertEqual(marginal.weights['x1'], Fraction(1, 6))
        self.assertEqual(marginal.weights['x4'], 0)

    def test_constant_classifier(self):
        with self.assertRaises(PreconditionError) as ctx:
            dp_adversarial_marginal(self.fix8a, {i: 1 for i in self.fix8a.ids})
        self.assertEqual(ctx.exception.condition, 'h non-constant')

    def test_corollary_on_representation(self):
        h, marginal = dp_corollary_witness(self.fix8a, ['f1'])
        self.assertEqual(h.mask, 1)
        self.assertEqual(marginal.achieved, 1)

    def test_corollary_needs_two_cells(self):
        with self.assertRaises(PreconditionError) as ctx:
            dp_corollary_witness(self.fix8a, [])
        self.assertEqual(ctx.exception.condition, 'at least two cells')


class EoMarginalTests(FixtureMixin, SimpleTestCase):
    def test_case_one(self):
        h = labels_from(self.fix8a.feature('f1'))
        marginal = eo_adversarial_marginal(self.fix8a, 't', h)
        self.assertEqual(marginal.construction_case, ConstructionCase.EO_CASE1)
        self.assertEqual(marginal.chosen_sets, (('x2',), ('x3',)))
        self.assertEqual(marginal.achieved, Fraction(1, 2))
        self.assertEqual(marginal.notion, Notion.EO)

    def test_case_two(self):
        # misses only in D, hits only in A
        domain = make_domain([
            ('x1', 'A', 1, '1/4'), ('x2', 'D', 1, '1/4'), ('x3', 'A', 0, '1/4'), ('x4', 'D', 0, '1/4'),
        ])
        h = {'x1': 1, 'x2': 0, 'x3': 0, 'x4': 0}
        marginal = eo_adversarial_marginal(domain, 't', h)
        self.assertEqual(marginal.construction_case, ConstructionCase.EO_CASE2)
        self.assertGreaterEqual(marginal.achieved, Fraction(1, 2))

    def test_case_three_and_flags(self):
        # every positive instance is in A, so D only meets B3
        domain = make_domain([
            ('x1', 'A', 1, '1/4'), ('x2', 'A', 1, '1/4'), ('x3', 'D', 0, '1/4'), ('x4', 'A', 0, '1/4'),
        ])
        h = {'x1': 1, 'x2': 0, 'x3': 0, 'x4': 0}
        marginal = eo_adversarial_marginal(domain, 't', h)
        self.assertEqual(marginal.construction_case, ConstructionCase.EO_CASE3)
        self.assertIn('h-constant-on-D', marginal.flags)
        truth = domain.labels('t')
        self.assertEqual(
            eo_for_labelings(domain.with_weights(marginal.weights), truth, h).value, marginal.achieved,
        )
        self.assertGreaterEqual(marginal.achieved, Fraction(1, 2))

    def test_preconditions(self):
        truth = dict(self.fix8a.labels('t'))
        cases = (
            (truth, 'h != f'),
            ({i: 1 - v for i, v in truth.items()}, 'h != 1-f'),
            ({i: 0 for i in truth}, 'h non-constant'),
        )
        for h, condition in cases:
            with self.assertRaises(PreconditionError) as ctx:
                eo_adversarial_marginal(self.fix8a, 't', h)
            self.assertEqual(ctx.exception.condition, condition)

    def test_constant_ground_truth(self):
        domain = make_domain([('x1', 'A', 1, '1/2'), ('x2', 'D', 1, '1/2')])
        with self.assertRaises(PreconditionError) as ctx:
            eo_adversarial_marginal(domain, 't', {'x1': 1, 'x2': 0})
        self.assertEqual(ctx.exception.condition, 'f non-constant')


class MutualEqualizedOddsTests(FixtureMixin, SimpleTestCase):
    def test_identical_labelings(self):
        f = dict(self.fix12.labels('t'))
        report = mutual_eo_audit(self.fix12, f, f)
        self.assertEqual(report.disagreement_mass, 0)
        self.assertFalse(report.lemma_applies)
        self.assertTrue(report.holds)

    def test_complementary_labelings_are_outside_the_lemma(self):
        domain = make_domain([
            ('x1', 'A', 1, '1/2'), ('x2', 'A', 0, '1/6'), ('x3', 'D', 1, '1/6'), ('x4', 'D', 0, '1/6'),
        ])
        f = dict(domain.labels('t'))
        g = {i: 1 - v for i, v in f.items()}
        report = mutual_eo_audit(domain, f, g)
        self.assertEqual((report.eo_f_given_g, report.eo_g_given_f), (0, 0))
        self.assertEqual(report.agreement_mass, 0)
        self.assertFalse(report.positive_rates_equal)
        self.assertTrue(report.holds)

    def test_fixture_features(self):
        f = labels_from(self.fix8a.feature('f1'))
        g = labels_from(self.fix8a.feature('f2'))
        report = mutual_eo_audit(self.fix8a, f, g)
        self.assertEqual(report.disagreement_mass, Fraction(1, 2))
        self.assertTrue(report.holds)


class MultitaskCertificateTests(FixtureMixin, SimpleTestCase):
    def setUp(self):
        labels = dict(self.fix8a.labels('t'))
        other = dict(labels, x1=0, x5=1)
        self.domain = self.fix8a.with_task('t2', other)

    def test_certificate_holds(self):
        certificate = multitask_certificate(self.domain, ['f1', 'f2'], 't', 't2')
        self.assertTrue(certificate.tasks_differ_on_support)
        self.assertFalse(certificate.tasks_complementary)
        self.assertTrue(certificate.holds)
        self.assertFalse(certificate.all_criteria)

    def test_homogeneous_cells_but_unfair(self):
        partition = [['x1', 'x2'], ['x3', 'x4'], ['x5', 'x6'], ['x7', 'x8']]
        certificate = multitask_certificate(
            self.fix8a.with_task('t2', dict(self.fix8a.labels('t'))),
            partition_from_cells(self.fix8a, partition), 't', 't2',
        )
        self.assertTrue(certificate.perfect_accuracy_both)
        self.assertFalse(certificate.adv_fair_task1)
        self.assertFalse(certificate.tasks_differ_on_support)

    def test_second_marginal_must_match(self):
        weights = {i: Fraction(1, 8) for i in self.domain.ids}
        multitask_certificate(self.domain, ['f1'], 't', 't2', weights2=weights)
        weights['x1'], weights['x2'] = Fraction(1, 4), Fraction(0)
        with self.assertRaises(PreconditionError):
            multitask_certificate(self.domain, ['f1'], 't', 't2', weights2=weights)


class PrpFeasibilityTests(FixtureMixin, SimpleTestCase):
    def test_equal_success_rates(self):
        feasibility = prp_feasibility(self.fix12, 't')
        self.assertTrue(feasibility.feasible)
        self.assertTrue(feasibility.all_one_fair)

    def test_unequal_success_rates(self):
        domain = make_domain([
            ('x1', 'A', 1, '1/4'), ('x2', 'A', 1, '1/4'), ('x3', 'D', 1, '1/4'), ('x4', 'D', 0, '1/4'),
        ])
        feasibility = prp_feasibility(domain, 't')
        self.assertFalse(feasibility.feasible)
        self.assertFalse(feasibility.all_one_fair)
        self.assertEqual((feasibility.rate_a, feasibility.rate_d), (1, Fraction(1, 2)))
