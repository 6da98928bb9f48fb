from ctp.logic.formula import *
from ctp.logic.parser import *
from ctp.logic.normalform import *
from ctp.logic.linalg import *
from ctp.logic.reduce import *
from ctp.logic.lattice import *
