from ctp.utils import config
from ctp.structure import *
from ctp.qe import *
from ctp.oracle import *
from ctp.api import *

from ctp._version import get_version as _get_version
__version__ = _get_version()
