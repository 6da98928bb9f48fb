from typing import Callable, TypeVar, Any, Mapping
import functools
import sys
import threading
from ctp.utils.config import config

T = TypeVar('T')
K = TypeVar('K')

def memoize_method(fcn: Callable[[Any], T]) -> Callable[[Any], T]:
    # alternative for lru_cache for memoizing a method without any arguments
    # lru_cache keeps a reference to self and never releases the object

    cachename = "__cch_" + fcn.__name__

    @functools.wraps(fcn)
    def new_fcn(self) -> T:
        if cachename in self.__dict__:
            return self.__dict__[cachename]
        else:
            res = fcn(self)
            self.__dict__[cachename] = res
            return res

    return new_fcn

def get_option(name: str, s: K, options: Mapping[K, T]) -> T:
    # get the value from dictionary of options, if not found, then raise an error
    if s in options:
        return options[s]
    else:
        raise ValueError(f"Unknown {name}: {s}. The available options are: {str(list(options.keys()))}")

def natural_key(name: str):
    # sorting key that puts "c2" before "c10"
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1)

class _Logger(object):
    def __init__(self):
        self._lock = threading.Lock()

    def log(self, s: str, vlevel: int = 0):
        """
        Print the string ``s`` to stderr if the verbosity level exceeds ``vlevel``.
        """
        if config.VERBOSE > vlevel:
            with self._lock:
                print(s, file=sys.stderr)

logger = _Logger()
