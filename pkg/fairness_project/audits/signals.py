from django.db.models.signals import pre_save
from django.dispatch import receiver

from .models import AuditRun


def subject_of(report):
    """What a run was about: notion/objective, construction kind or property name."""
    command = report.get('command', {})
    args = command.get('args', {})
    name = command.get('name')
    if name == 'audit':
        if args.get('add_feature'):
            return f"{args.get('notion', 'eo')}/deletion/{args['add_feature']}"
        return f"{args.get('notion', 'eo')}/{args.get('objective', 'adversarial')}"
    if name == 'construct':
        return args.get('kind', '')
    if name == 'verify':
        return args.get('property', '')
    if name == 'gen_instance':
        return f"seed {args.get('seed')}"
    return ''


@receiver(pre_save, sender=AuditRun)
def fill_run_index(sender, instance: AuditRun, **kwargs):
    """Copy the lookup fields out of the report before every save."""
    report = instance.report or {}
    if not instance.subject:
        instance.subject = subject_of(report)[:100]
    if not instance.inputs_digest:
        instance.inputs_digest = report.get('inputs_digest', '')
