"""
WSGI entry point serving the audit API (``/api/``).

It exposes the WSGI callable as a module-level variable named ``application``.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fairness_project.settings')

application = get_wsgi_application()
