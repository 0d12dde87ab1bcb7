from uuid import uuid4

from django.db import models


class TimestampedModel(models.Model):
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        abstract = True


class AuditRun(TimestampedModel):
    """
    A recorded command run: the machine report plus what is needed to find it again.
    Subject and digest are filled from the report by a pre_save signal.
    """

    COMMANDS = [
        ('audit', 'Audit'),
        ('construct', 'Construct'),
        ('verify', 'Verify'),
        ('gen_instance', 'Generate instance'),
    ]

    run_id = models.UUIDField(primary_key=True, default=uuid4, editable=False)
    command = models.CharField(max_length=20, choices=COMMANDS)
    # notion/objective for audits, the kind for constructions, the property for verifications
    subject = models.CharField(max_length=100, blank=True, db_index=True)
    inputs_digest = models.CharField(max_length=71, blank=True, db_index=True)
    exit_status = models.PositiveSmallIntegerField(default=0)
    report = models.JSONField(default=dict)

    class Meta:
        ordering = ['-created_at']

    @property
    def succeeded(self):
        return self.exit_status == 0

    def __str__(self):
        return f"{self.command} {self.subject} ({self.exit_status}) at {self.created_at}"
