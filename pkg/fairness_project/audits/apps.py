# audits/apps.py
from django.apps import AppConfig


class AuditsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'audits'
    verbose_name = 'Fairness audits'

    def ready(self):
        # import signals to register them
        import audits.signals  # noqa
