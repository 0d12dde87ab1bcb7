#!/usr/bin/env python
"""Entry point for the fairness audit commands (audit, construct, verify, gen_instance)."""
import os
import sys


def main():
    """Dispatch to a management command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fairness_project.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages listed in "
            "requirements.txt into the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
