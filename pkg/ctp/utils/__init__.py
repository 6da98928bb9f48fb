from ctp.utils.config import config
from ctp.utils.errors import *
from ctp.utils.datastruct import *
