from audits import services
from audits.exceptions import InputError
from audits.generator import WEIGHT_STYLES, GeneratorParams
from audits.management.base import AuditCommand


class Command(AuditCommand):
    help = "Generate a seeded random domain document."
    command_name = 'gen_instance'

    def add_command_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--min-instances', type=int, default=8)
        parser.add_argument('--max-instances', type=int)
        parser.add_argument('--min-features', type=int, default=2)
        parser.add_argument('--max-features', type=int)
        parser.add_argument('--alphabet', type=int, default=2)
        parser.add_argument('--weights', choices=WEIGHT_STYLES, default='uniform')
        parser.add_argument('--max-denominator', type=int, default=24)
        parser.add_argument('--document-only', action='store_true',
                            help="Print the bare document (for --input) instead of a report.")

    def run(self, options):
        params = GeneratorParams(
            seed=options['seed'],
            min_instances=options['min_instances'],
            max_instances=options['max_instances'] or options['min_instances'],
            min_features=options['min_features'],
            max_features=options['max_features'] if options['max_features'] is not None else options['min_features'],
            alphabet=options['alphabet'],
            weight_style=options['weights'],
            max_denominator=options['max_denominator'],
        )
        report, status = services.generate(params)
        if options['document_only']:
            if options['record']:
                raise InputError("--document-only output cannot be recorded")
            options['format'] = 'json'
            return report['results']['document'], status
        return report, status
