from ctp.api.pathexpr import *
from ctp.api.cli import *
