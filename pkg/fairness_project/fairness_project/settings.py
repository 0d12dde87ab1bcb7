"""
Django settings for fairness_project.

The audit engine itself is configured through ``FAIRNESS_AUDIT`` at the bottom
of this file; everything above it is the usual project wiring for the
management commands, the recorded-runs database and the HTTP API.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'FAIRNESS_AUDIT_SECRET_KEY',
    'django-insecure-local-audit-key-change-me',
)

DEBUG = os.environ.get('FAIRNESS_AUDIT_DEBUG', '0') == '1'

ALLOWED_HOSTS = ['localhost', '127.0.0.1', 'testserver']


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'django_filters',
    'audits',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'fairness_project.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'fairness_project.wsgi.application'


# Database
# Recorded audit runs only; the audit engine never touches the database.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (admin only)

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# The API is a local batch tool: no authentication, JSON only.
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_FILTER_BACKENDS': [
        'django_filters.rest_framework.DjangoFilterBackend',
    ],
    'UNAUTHENTICATED_USER': None,
}


# Logging: reports own stdout, so every handler writes to stderr.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'audits': {
            'handlers': ['console'],
            'level': os.environ.get('FAIRNESS_AUDIT_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


# Audit engine configuration, read through audits.conf.audit_settings.

FAIRNESS_AUDIT = {
    'CELL_BOUND': 22,
    'MINIMIZER_CAP': 2 ** 16,
    'GENERIC_SEARCH_BOUND': 16,
    'PIN_ZERO_MASS_CELLS': False,
    'BAYES_RULE': 'loss',
    'DATA_DIR': BASE_DIR / 'audits' / 'domains',
    'REPORT_SCHEMA_VERSION': '1',
    'DECIMAL_PLACES': 6,
}
