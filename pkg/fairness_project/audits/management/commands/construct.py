from audits import services
from audits.domain import load_domain
from audits.management.base import AuditCommand, comma_list


class Command(AuditCommand):
    help = "Build an impossibility or context certificate and report it with its post-checks."
    command_name = 'construct'

    def add_command_arguments(self, parser):
        parser.add_argument('kind', choices=services.CONSTRUCTION_KINDS)
        parser.add_argument('--input', required=True, help="Document path or fixture name.")
        parser.add_argument('--task', default='t', help="Ground-truth task (f for eo-marginal).")
        parser.add_argument('--feature', help="Feature for generic-pair and context-pair.")
        parser.add_argument('--hypothesis', help="A task of the document used as the classifier h.")
        parser.add_argument('--features', type=comma_list, default=[])
        parser.add_argument('--mask', type=int, help="Classifier over --features as a cell mask.")

    def run(self, options):
        domain = load_domain(options['input'])
        keys = ('input', 'task', 'feature', 'hypothesis', 'features', 'mask')
        args = {key: options.get(key) for key in keys}
        return services.construct(options['kind'], domain, args)
