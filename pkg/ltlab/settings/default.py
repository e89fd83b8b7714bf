import os


LTLAB_WORKERS = 1

# Box [-L, L] and spacing used when no grid is given.
LTLAB_HALF_WIDTH = 20.0
LTLAB_SPACING = 0.01
# Matrix potentials use a coarser default mesh to bound dense-solver cost.
LTLAB_MATRIX_SPACING = 0.02
LTLAB_EPS_CUT = 1e-6

LTLAB_ENABLE_DISK_CACHE = False
LTLAB_CACHE_DIR = '/tmp/ltlab-cache'
# Entries kept per in-memory cache (spectra, search evaluations); oldest go first.
LTLAB_MEMORY_CACHE_ITEMS = 256

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'loggers': {
        'ltlab': {
            'level': os.getenv('LOG_LEVEL', 'INFO').upper(),
            'handlers': ['console'],
            'propagate': False,
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'level': 'DEBUG',
            'stream': 'ext://sys.stderr',
            'formatter': 'ltlab_formatter',
        },
    },
    'formatters': {
        'ltlab_formatter': {
            '()': 'ltlab.log.LtlabFormatter',
            'format': '%(asctime)s %(message)s',
        },
    }
}
