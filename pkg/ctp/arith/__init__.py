from ctp.arith.residue import *
from ctp.arith.ladder import *
