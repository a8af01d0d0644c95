# This file makes the 'knots' directory a Python package.

from . import alexander
