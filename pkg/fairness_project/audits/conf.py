"""Access to the ``FAIRNESS_AUDIT`` settings dict with defaults.

    from audits.conf import audit_settings
    audit_settings.CELL_BOUND
"""
from pathlib import Path

from django.conf import settings

DEFAULTS = {
    'CELL_BOUND': 22,
    'MINIMIZER_CAP': 2 ** 16,
    'GENERIC_SEARCH_BOUND': 16,
    'PIN_ZERO_MASS_CELLS': False,
    'BAYES_RULE': 'loss',
    'DATA_DIR': Path(__file__).resolve().parent / 'domains',
    'REPORT_SCHEMA_VERSION': '1',
    'DECIMAL_PLACES': 6,
}

BAYES_RULES = ('loss', 'threshold')


class AuditSettings:
    """Reads settings lazily so ``override_settings`` works in tests."""

    def __getattr__(self, name):
        if name not in DEFAULTS:
            raise AttributeError(f"Invalid FAIRNESS_AUDIT setting: {name!r}")
        user_settings = getattr(settings, 'FAIRNESS_AUDIT', {})
        return user_settings.get(name, DEFAULTS[name])


audit_settings = AuditSettings()
