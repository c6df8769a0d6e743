"""
Django settings for the resinfo project.

Only the pieces the command-line tools need are configured: no database,
no middleware, no templates.
"""
from pathlib import Path
from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='resinfo-insecure-dev-key')

DEBUG = config('DEBUG', default=False, cast=bool)

INSTALLED_APPS = [
    'rest_framework',
    'resolution',
]

DATABASES = {}

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Numerical knobs
RESINFO_THREADS = config('RESINFO_THREADS', default=0, cast=int)
RESINFO_LDP_TOLERANCE = config('RESINFO_LDP_TOLERANCE', default=0.05, cast=float)
RESINFO_BRUTE_FORCE_RESTARTS = config('RESINFO_BRUTE_FORCE_RESTARTS', default=10, cast=int)
RESINFO_MC_CHUNK = config('RESINFO_MC_CHUNK', default=1024, cast=int)


# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': config('RESINFO_LOG_LEVEL', default='WARNING'),
    },
}
