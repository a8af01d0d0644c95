# This file makes the 'cli' directory a Python package.

from . import handlers
from . import routes
