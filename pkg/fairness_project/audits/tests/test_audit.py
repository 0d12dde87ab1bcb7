import random
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from audits.audit import (
    LabelingSpace, Objective, accuracy_driven_unfairness, adversarial_prp,
    adversarial_unfairness, adversarial_unfairness_oracle, bayes_optimal_set,
    fairness_enabling, frontier, gray_walk, labeling_ranges, run_objective,
)
from audits.domain import resolve_partition
from audits.exceptions import BoundExceededError, InputError
from audits.generator import child_seed, random_domain
from audits.metrics import Notion

from .utils import FixtureMixin, make_domain

HALF = Fraction(1, 2)


class AdversarialTests(FixtureMixin, SimpleTestCase):
    def test_fix8a_values(self):
        for names, expected in ((['f1'], 0), (['f2'], 0), (['f1', 'f2'], 1)):
            result = adversarial_unfairness(self.fix8a, 't', names, Notion.EO)
            self.assertEqual(result.value, expected, names)

    def test_fix8a_witness(self):
        result = adversarial_unfairness(self.fix8a, 't', ['f1', 'f2'], Notion.EO)
        self.assertEqual(result.witnesses[0].mask, 3)
        oracle = adversarial_unfairness_oracle(self.fix8a, 't', ['f1', 'f2'], Notion.EO)
        self.assertEqual(oracle.value, 1)
        self.assertEqual(oracle.witnesses[0].mask, 3)

    def test_single_cell_dp(self):
        result = adversarial_unfairness(self.fix12, 't', [], Notion.DP)
        self.assertEqual(result.value, 0)

    def test_dp_matches_oracle_on_fixtures(self):
        for domain, names in ((self.fix12, ['r1', 'r2', 'f']), (self.fix8a, ['f1', 'f2']),
                              (self.fix12, ['f1', 'f2', 'f3'])):
            for notion in (Notion.DP, Notion.EO):
                fast = adversarial_unfairness(domain, 't', names, notion).value
                slow = adversarial_unfairness_oracle(domain, 't', names, notion).value
                self.assertEqual(fast, slow, (names, notion))

    def test_oracle_chunks_do_not_change_result(self):
        single = adversarial_unfairness_oracle(self.fix12, 't', ['f1', 'f2', 'f3'], Notion.EO)
        split = adversarial_unfairness_oracle(self.fix12, 't', ['f1', 'f2', 'f3'], Notion.EO, chunks=5)
        self.assertEqual(single, split)

    def test_cell_bound(self):
        with self.assertRaises(BoundExceededError) as ctx:
            adversarial_unfairness_oracle(self.fix8a, 't', ['f1', 'f2'], Notion.EO, cell_bound=3)
        self.assertEqual(ctx.exception.limit, 3)
        self.assertEqual(ctx.exception.actual, 4)

    @override_settings(FAIRNESS_AUDIT={'CELL_BOUND': 2})
    def test_cell_bound_from_settings(self):
        with self.assertRaises(BoundExceededError):
            adversarial_unfairness_oracle(self.fix8a, 't', ['f1', 'f2'], Notion.DP)

    def test_prp_needs_its_own_audit(self):
        with self.assertRaises(InputError):
            adversarial_unfairness(self.fix8a, 't', ['f1'], Notion.PRP)


class AdversarialPrpTests(FixtureMixin, SimpleTestCase):
    def test_every_classifier_fair(self):
        result = adversarial_prp(self.fix8a, 't', ['f1', 'f2'])
        self.assertIs(result.value, True)
        self.assertEqual(result.witnesses, ())

    def test_smallest_unfair_witness(self):
        result = adversarial_prp(self.fix12, 't', ['r1', 'r2'])
        self.assertIs(result.value, False)
        self.assertEqual(result.witnesses[0].mask, 1)


class AccuracyDrivenTests(FixtureMixin, SimpleTestCase):
    def test_fix12_values(self):
        cases = (
            (['r1', 'r2', 'f'], Fraction(1, 3)),
            (['r1', 'r2'], 0),
            (['rp1', 'rp2', 'f'], 0),
            (['rp1', 'rp2'], Fraction(1, 6)),
        )
        for names, expected in cases:
            result = accuracy_driven_unfairness(self.fix12, 't', names, HALF)
            self.assertEqual(result.value, expected, names)

    def test_fix12_values_from_printed_preimages(self):
        recomputed = self.fix12.annotations['recomputed_from_printed_preimages']
        for key, expected in recomputed.items():
            result = accuracy_driven_unfairness(self.fix12, 't', key.split(','), HALF)
            self.assertEqual(result.value, Fraction(expected), key)

    def test_ties_keep_every_minimizer(self):
        printed = bayes_optimal_set(self.fix12, 't', ['fp1', 'fp2'], HALF)
        self.assertEqual([h.mask for h in printed], list(range(8)))
        reconciled = bayes_optimal_set(self.fix12, 't', ['rp1', 'rp2'], HALF)
        self.assertEqual([h.mask for h in reconciled], [3])

    def test_threshold_rule(self):
        minimizers = bayes_optimal_set(self.fix12, 't', ['fp1', 'fp2'], HALF, rule='threshold')
        self.assertEqual([h.mask for h in minimizers], [0])

    def test_minimizer_cap(self):
        with self.assertRaises(BoundExceededError):
            bayes_optimal_set(self.fix12, 't', ['fp1', 'fp2'], HALF, cap=4)

    def test_zero_mass_cells(self):
        domain = make_domain(
            [('x1', 'A', 1, '1/2'), ('x2', 'D', 0, '1/2'), ('x3', 'A', 0, 0)],
            features={'f': {'x1': 'a', 'x2': 'b', 'x3': 'c'}},
        )
        self.assertEqual(len(bayes_optimal_set(domain, 't', ['f'], HALF)), 2)
        pinned = bayes_optimal_set(domain, 't', ['f'], HALF, pin_zero_mass=True)
        self.assertEqual([h.mask for h in pinned], [1])

    def test_witness_minimizes_loss(self):
        result = accuracy_driven_unfairness(self.fix12, 't', ['r1', 'r2', 'f'], HALF)
        self.assertEqual(result.details['loss'], LabelingSpace(
            self.fix12, 't', resolve_partition(self.fix12, ['r1', 'r2', 'f'])).min_loss(HALF))


class EnablingTests(FixtureMixin, SimpleTestCase):
    def test_fix8b_pair_enables_for_every_alpha(self):
        for alpha in (Fraction(1, 4), HALF, Fraction(3, 4)):
            result = fairness_enabling(self.fix8b, 't', ['f1', 'f2'], 0, 0, alpha)
            self.assertIs(result.value, True)
            cells = result.witnesses[0].positive_cells(result.partition)
            self.assertEqual(sorted(i for cell in cells for i in cell), ['x1', 'x2', 'x3', 'x4'])

    def test_fix8b_singletons(self):
        for name in ('f1', 'f2'):
            space = LabelingSpace(self.fix8b, 't', resolve_partition(self.fix8b, [name]))
            self.assertEqual(space.min_loss(HALF), Fraction(1, 4))
        result = fairness_enabling(self.fix8b, 't', ['f1'], Fraction(1, 5), HALF, HALF)
        self.assertIs(result.value, False)
        self.assertEqual(result.witnesses, ())

    def test_loose_thresholds_pick_smallest_mask(self):
        result = fairness_enabling(self.fix8b, 't', ['f1', 'f2'], 1, 1, HALF)
        self.assertEqual(result.witnesses[0].mask, 0)


class FrontierTests(FixtureMixin, SimpleTestCase):
    def test_fix8a_single_point(self):
        points = frontier(self.fix8a, 't', ['f1', 'f2'], HALF)
        self.assertEqual(len(points), 1)
        self.assertEqual((points[0].loss, points[0].unfairness), (Fraction(1, 4), 0))
        self.assertEqual(points[0].classifier.mask, 0)

    def test_points_are_pareto_ordered(self):
        points = frontier(self.fix12, 't', ['f1', 'f2', 'f3'], HALF)
        losses = [p.loss for p in points]
        unfair = [p.unfairness for p in points]
        self.assertEqual(losses, sorted(losses))
        self.assertEqual(unfair, sorted(unfair, reverse=True))
        self.assertEqual(len(set(unfair)), len(unfair))


class EnumerationTests(SimpleTestCase):
    def test_gray_walk_visits_every_mask_once(self):
        vectors = [(1, 2, 4, 8)]
        seen = dict(gray_walk(vectors, 4))
        self.assertEqual(sorted(seen), list(range(16)))
        for mask, (total,) in seen.items():
            self.assertEqual(total, mask)

    def test_ranges_cover_positions(self):
        ranges = labeling_ranges(5, 3)
        self.assertEqual(ranges[0][0], 0)
        self.assertEqual(ranges[-1][1], 32)
        for (_, stop), (start, _) in zip(ranges, ranges[1:]):
            self.assertEqual(stop, start)


class RunObjectiveTests(FixtureMixin, SimpleTestCase):
    def test_missing_parameters(self):
        with self.assertRaises(InputError):
            run_objective(self.fix8b, 't', ['f1'], Objective.ACCURACY)
        with self.assertRaises(InputError):
            run_objective(self.fix8b, 't', ['f1'], Objective.ENABLING, alpha=HALF)

    def test_prp_is_adversarial_only(self):
        with self.assertRaises(InputError):
            run_objective(self.fix8b, 't', ['f1'], Objective.ACCURACY, Notion.PRP, alpha=HALF)
        result = run_objective(self.fix8b, 't', ['f1'], Objective.ADVERSARIAL, Notion.PRP)
        self.assertEqual(result.notion, Notion.PRP)


class RandomDomainOptimalityTests(SimpleTestCase):
    """Exact optimizers against full enumeration of every classifier over the cells."""

    alphas = (Fraction(1, 4), HALF, Fraction(2, 3))

    def spaces(self, seed, count=80):
        rng = random.Random(seed)
        for n in range(count):
            domain = random_domain(random.Random(child_seed(rng)), max_instances=7, features=2, alphabet=3)
            names = [name for name in domain.features if rng.random() < 0.5]
            space = LabelingSpace(domain, 't', resolve_partition(domain, names))
            yield space, names, self.alphas[n % len(self.alphas)]

    def test_bayes_set_is_exactly_the_loss_minimizers(self):
        for space, names, alpha in self.spaces(seed=4):
            losses = {mask: space.loss_value(mask, alpha) for mask in range(1 << space.size)}
            lowest = min(losses.values())
            minimizers = bayes_optimal_set(space.domain, 't', names, alpha)
            self.assertEqual(
                {h.mask for h in minimizers},
                {mask for mask, loss in losses.items() if loss == lowest},
            )

    def test_frontier_points_are_not_dominated(self):
        for space, names, alpha in self.spaces(seed=5):
            for notion in (Notion.EO, Notion.DP):
                points = frontier(space.domain, 't', names, alpha, notion)
                pairs = [
                    (space.loss_value(mask, alpha), space.unfairness_value(mask, notion))
                    for mask in range(1 << space.size)
                ]
                for point in points:
                    self.assertEqual(
                        (space.loss_value(point.classifier.mask, alpha),
                         space.unfairness_value(point.classifier.mask, notion)),
                        (point.loss, point.unfairness),
                    )
                    for loss, unfair in pairs:
                        dominates = loss <= point.loss and unfair <= point.unfairness \
                            and (loss, unfair) != (point.loss, point.unfairness)
                        self.assertFalse(dominates, (notion, point, loss, unfair))
