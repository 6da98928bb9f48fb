from ctp.structure.base_structure import *
from ctp.structure.zp_additive import *
from ctp.structure.zp_units import *
from ctp.structure.zhat import *
from ctp.structure.reals import *
from ctp.structure.factory import *
