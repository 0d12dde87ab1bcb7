from audits import services
from audits.audit import Objective
from audits.conf import BAYES_RULES
from audits.domain import load_domain
from audits.management.base import AuditCommand, comma_list
from audits.metrics import Notion


class Command(AuditCommand):
    help = "Audit a representation of a domain document for unfairness."
    command_name = 'audit'

    def add_command_arguments(self, parser):
        parser.add_argument('--input', required=True, help="Document path or fixture name (fix-12, fix-8a, fix-8b).")
        parser.add_argument('--features', type=comma_list, default=[], help="Comma-separated feature names.")
        parser.add_argument('--task', default='t')
        parser.add_argument('--notion', choices=[n.value for n in Notion], default=Notion.EO.value)
        parser.add_argument('--objective', choices=[o.value for o in Objective], default=Objective.ADVERSARIAL.value)
        parser.add_argument('--alpha')
        parser.add_argument('--epsilon')
        parser.add_argument('--eta')
        parser.add_argument('--cell-bound', type=int)
        parser.add_argument('--add-feature', help="Report the effect of adding this feature.")
        parser.add_argument('--oracle', action='store_true', help="Use brute-force enumeration.")
        parser.add_argument('--rule', choices=BAYES_RULES)

    def run(self, options):
        self.rationals(options, 'alpha', 'epsilon', 'eta')
        domain = load_domain(options['input'])
        keys = ('input', 'features', 'task', 'notion', 'objective', 'alpha', 'epsilon', 'eta',
                'cell_bound', 'add_feature', 'oracle', 'rule')
        args = {key: options.get(key) for key in keys}
        if not args['oracle']:
            args.pop('oracle')
        return services.audit(domain, args)
