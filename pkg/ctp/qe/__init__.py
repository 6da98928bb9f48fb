from ctp.qe.residue_clopen import *
from ctp.qe.eliminate import *
from ctp.qe.product_translate import *
from ctp.qe.decide import *
from ctp.qe.skolem import *
