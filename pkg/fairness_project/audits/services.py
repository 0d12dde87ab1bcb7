"""
Command-level entry points shared by the management commands and the API.

Each function takes already-parsed arguments, returns ``(report, exit_status)``
and leaves output and persistence to the caller.
"""
import logging

from .audit import (
    Objective, adversarial_unfairness_oracle, frontier, run_objective,
)
from .constructors import (
    dp_adversarial_marginal, dp_corollary_witness, eo_adversarial_marginal,
)
from .context import (
    build_context_pair, condition_six_sides, construct_generic_distribution,
    deletion_effect, generic_witness, verify_generic_witness,
)
from .conf import audit_settings
from .domain import Classifier, resolve_partition
from .exceptions import VERIFICATION_FAILED_EXIT_CODE, InputError
from .generator import gen_instance
from .metrics import Notion
from .models import AuditRun
from .reports import (
    audit_result_json, build_report, classifier_json, exact, frontier_json, jsonable,
    weights_json,
)
from .serializers import RationalField
from .verify import run_property

logger = logging.getLogger(__name__)

CONSTRUCTION_KINDS = ('dp-marginal', 'eo-marginal', 'generic-pair', 'context-pair')


def _echo(args):
    """Normalized, JSON-ready command arguments (rationals as "p/q")."""
    field = RationalField()
    echoed = {}
    for key, value in sorted(args.items()):
        if value is None:
            continue
        if key in ('alpha', 'epsilon', 'eta'):
            value = field.to_representation(value)
        echoed[key] = value
    return echoed


def audit(domain, args):
    """
    ``args``: input, features, task, notion, objective, alpha, epsilon, eta,
    cell_bound, add_feature, oracle, rule.
    """
    fs = domain.feature_set(args.get('features') or [])
    task = args.get('task', 't')
    notion = Notion(args.get('notion', 'eo'))
    objective = Objective(args.get('objective', 'adversarial'))
    params = {key: args.get(key) for key in ('alpha', 'epsilon', 'eta')}

    if args.get('add_feature'):
        effect = deletion_effect(domain, task, fs, args['add_feature'], objective, notion, **params)
        results = {
            'deletion_effect': {
                'objective': effect.objective.value,
                'notion': effect.notion.value,
                'features': list(fs.names),
                'added': args['add_feature'],
                'value_without': exact(effect.value_without),
                'value_with': exact(effect.value_with),
                'direction': effect.direction,
            }
        }
    elif objective is Objective.FRONTIER:
        if params['alpha'] is None:
            raise InputError("objective frontier needs --alpha")
        partition = resolve_partition(domain, fs)
        points = frontier(domain, task, partition, params['alpha'], notion, args.get('cell_bound'))
        results = {
            'frontier': frontier_json(points, partition),
            'cells': jsonable(partition),
            'alpha': exact(params['alpha']),
        }
    elif args.get('oracle'):
        if objective is not Objective.ADVERSARIAL:
            raise InputError("--oracle applies to the adversarial objective")
        results = {'audit': audit_result_json(
            adversarial_unfairness_oracle(domain, task, fs, notion, args.get('cell_bound'))
        )}
    else:
        result = run_objective(
            domain, task, fs, objective, notion, cell_bound=args.get('cell_bound'),
            rule=args.get('rule'), **params,
        )
        results = {'audit': audit_result_json(result)}

    report = build_report('audit', _echo(args), domain.to_document(), results, domain.annotations)
    return report, 0


def _hypothesis(domain, args):
    """The target labeling: a task of the document (--hypothesis) or a cell mask over --features."""
    if args.get('hypothesis'):
        return dict(domain.labels(args['hypothesis'])), None
    if args.get('mask') is not None:
        partition = resolve_partition(domain, args.get('features') or [])
        if not 0 <= args['mask'] < (1 << len(partition)):
            raise InputError(f"mask {args['mask']} out of range for {len(partition)} cells")
        h = Classifier.from_mask(args['mask'], len(partition))
        return h.predictions(partition), classifier_json(h, partition)
    return None, None


def _marginal_json(marginal):
    return {
        'notion': marginal.notion.value,
        'construction_case': marginal.construction_case.value,
        'target_unfairness': exact(marginal.target_unfairness),
        'achieved': exact(marginal.achieved),
        'weights': weights_json(marginal.weights),
        'chosen_sets': [list(s) for s in marginal.chosen_sets],
        'flags': list(marginal.flags),
    }


def _witness_json(witness):
    return {
        'C1': list(witness.c1), 'C2': list(witness.c2), 'C3': list(witness.c3),
        'y1': witness.y1, 'y2': witness.y2, 'y3': witness.y3,
        'l1': witness.l1, 'G1': witness.g1.value,
    }


def construct(kind, domain, args):
    """``kind`` is one of dp-marginal, eo-marginal, generic-pair, context-pair."""
    task = args.get('task', 't')
    results = {'kind': kind}

    if kind == 'dp-marginal':
        h, classifier = _hypothesis(domain, args)
        if h is None:
            if not args.get('features'):
                raise InputError("dp-marginal needs --hypothesis, --mask or --features")
            partition = resolve_partition(domain, args['features'])
            target, marginal = dp_corollary_witness(domain, partition)
            classifier = classifier_json(target, partition)
        else:
            marginal = dp_adversarial_marginal(domain, h)
        results.update(_marginal_json(marginal), classifier=classifier)

    elif kind == 'eo-marginal':
        h, classifier = _hypothesis(domain, args)
        if h is None:
            raise InputError("eo-marginal needs --hypothesis or --mask")
        marginal = eo_adversarial_marginal(domain, task, h)
        results.update(_marginal_json(marginal), classifier=classifier, ground_truth=task)

    elif kind == 'generic-pair':
        f = domain.feature(_require(args, 'feature'))
        weights, witness = construct_generic_distribution(f, domain, task)
        weighted = domain.with_weights(weights)
        check = verify_generic_witness(f, weighted, task, witness)
        left, right = condition_six_sides(weighted, task, witness)
        found = None
        if len(domain) <= audit_settings.GENERIC_SEARCH_BOUND:
            found = generic_witness(f, weighted, task)
        results.update(
            feature=f.name,
            weights=weights_json(weights),
            witness=_witness_json(witness),
            conditions={str(k): v for k, v in check.conditions.items()},
            extras=check.extras,
            condition_six={'left': exact(left), 'right': exact(right)},
            search=_witness_json(found) if found else None,
        )

    elif kind == 'context-pair':
        f = domain.feature(_require(args, 'feature'))
        pair = build_context_pair(f, domain, task)
        results.update(
            feature=f.name,
            weights=weights_json(pair.weights),
            witness=_witness_json(pair.witness),
            fs_increasing={
                'cells': jsonable(resolve_partition(domain, pair.fs_increasing)),
                'without': exact(pair.values['increasing_without']),
                'with': exact(pair.values['increasing_with']),
            },
            fs_decreasing={
                'cells': jsonable(resolve_partition(domain, pair.fs_decreasing)),
                'without': exact(pair.values['decreasing_without']),
                'with': exact(pair.values['decreasing_with']),
            },
            increases=pair.increases,
            decreases=pair.decreases,
        )
    else:
        raise InputError(f"unknown construction {kind!r}; choose one of {CONSTRUCTION_KINDS}")

    args = dict(args, kind=kind)
    report = build_report('construct', _echo(args), domain.to_document(), results, domain.annotations)
    return report, 0


def _require(args, key):
    if not args.get(key):
        raise InputError(f"--{key.replace('_', '-')} is required here")
    return args[key]


def verify(prop, args):
    result = run_property(
        prop, trials=args.get('trials'), seed=args.get('seed', 0),
        max_size=args.get('max_size'), grid=args.get('grid', 6),
    )
    results = {
        'property': result.property,
        'passed': result.passed,
        'checks': result.checks,
        'excluded': result.excluded,
        'seed': result.seed,
        'trials': result.trials,
        'max_size': result.max_size,
        'counterexample': jsonable(result.counterexample),
        'details': jsonable(result.details),
    }
    args = dict(args, property=prop)
    report = build_report('verify', _echo(args), None, results)
    return report, 0 if result.passed else VERIFICATION_FAILED_EXIT_CODE


def record(report, command, exit_status):
    """Persist one run; subject and digest are filled in by the pre_save signal."""
    run = AuditRun.objects.create(command=command, exit_status=exit_status, report=report)
    logger.info("recorded %s run %s", command, run.run_id)
    return run


def generate(params):
    """``params`` is a GeneratorParams; the report carries the document under ``results.document``."""
    document = gen_instance(params)
    args = {
        'seed': params.seed,
        'instances': [params.min_instances, params.max_instances],
        'features': [params.min_features, params.max_features],
        'alphabet': params.alphabet,
        'weights': params.weight_style,
        'max_denominator': params.max_denominator,
    }
    report = build_report('gen_instance', args, document, {'document': document})
    return report, 0
