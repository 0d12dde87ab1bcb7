from audits import services
from audits.management.base import AuditCommand
from audits.verify import PROPERTIES


class Command(AuditCommand):
    help = "Check one property exhaustively or over seeded random trials. Exits 5 on a counterexample."
    command_name = 'verify'

    def add_command_arguments(self, parser):
        parser.add_argument('property', choices=sorted(PROPERTIES))
        parser.add_argument('--trials', type=int)
        parser.add_argument('--max-size', type=int)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--grid', type=int, default=6, help="lemma-mutual-eo sweeps weight denominators 1 .. grid.")

    def run(self, options):
        args = {key: options.get(key) for key in ('trials', 'max_size', 'seed', 'grid')}
        return services.verify(options['property'], args)
