import os

SCHEMA_VERSION = 1
VERSION = '0.1'

# grids up to this size get full homology, windowed theta decisions go further
DEFAULT_FULL_HOMOLOGY_MAX_N = 8
DEFAULT_WINDOW_MAX_N = 10

# handle reduction is guaranteed to terminate, this only guards against runaway inputs
MAX_HANDLE_STEPS = 2_000_000

# a priori multiplicity bound for the bounded domain searches on fixtures
MAX_FIXTURE_REGIONS = 40

CACHE_ENV_VAR = 'BRAIDHFK_CACHE_DIR'
DEFAULT_CACHE_DIR = os.path.join(os.path.expanduser('~'), '.cache', 'braidhfk')

PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(os.path.dirname(PACKAGE_DIR), 'data')
CORPORA_DIR = os.path.join(DATA_DIR, 'corpora')
FIXTURES_DIR = os.path.join(DATA_DIR, 'fixtures')

# excluded from byte-identity comparisons of reports
VOLATILE_REPORT_FIELDS = ('wall_time_ms',)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_RESOURCE_ERROR = 2
EXIT_THEOREM_SHADOW = 3
