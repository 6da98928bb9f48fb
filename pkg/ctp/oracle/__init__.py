from ctp.oracle.finite_model import *
from ctp.oracle.adversary import *
