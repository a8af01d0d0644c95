# This file makes the 'algebra' directory a Python package.

from . import gf2_chain
from . import persistence
from . import ip_module
from . import triangle
