"""
Shared plumbing for the audit management commands.

Subclasses implement ``run(options)`` returning ``(report, exit_status)``.
The base class writes the report (text or JSON) to stdout or ``--output``,
optionally records it, and turns audit errors into exit codes.
"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from audits import services
from audits.exceptions import FairnessAuditError, InputError
from audits.reports import render_text, to_json
from audits.serializers import parse_rational

logger = logging.getLogger('audits.commands')


def comma_list(value):
    return [name.strip() for name in value.split(',') if name.strip()]


class AuditCommand(BaseCommand):
    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--format', choices=('text', 'json'), default='text')
        parser.add_argument('--output', help="Write the report to this file instead of stdout.")
        parser.add_argument('--record', action='store_true', help="Store the run as an AuditRun.")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, options):
        raise NotImplementedError

    def rationals(self, options, *names):
        """Parse "p/q" flags in place; done here so a bad value exits with the input-error code."""
        for name in names:
            if options.get(name) is not None:
                options[name] = parse_rational(options[name])

    def handle(self, *args, **options):
        try:
            report, exit_status = self.run(options)
        except FairnessAuditError as exc:
            logger.warning("%s failed: %s", self.command_name, exc.message)
            message = exc.message if exc.detail is None else f"{exc.message}: {exc.detail}"
            raise CommandError(message, returncode=exc.exit_code) from exc

        rendered = to_json(report) if options['format'] == 'json' else render_text(report)
        if options.get('output'):
            try:
                Path(options['output']).write_text(rendered + '\n', encoding='utf-8')
            except OSError as exc:
                raise CommandError(f"cannot write {options['output']}: {exc}",
                                   returncode=InputError.exit_code) from exc
        else:
            self.stdout.write(rendered)

        if options.get('record'):
            services.record(report, self.command_name, exit_status)
        if exit_status:
            raise CommandError(f"{self.command_name}: check failed", returncode=exit_status)
