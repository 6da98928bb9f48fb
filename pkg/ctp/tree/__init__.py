from ctp.tree.path import *
from ctp.tree.base_tree import *
from ctp.tree.clopen import *
from ctp.tree.product import *
from ctp.tree.transport import *
