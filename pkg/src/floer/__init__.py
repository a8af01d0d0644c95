# This file makes the 'floer' directory a Python package.

from . import cobordism
from . import filtered_floer
from . import certificates
