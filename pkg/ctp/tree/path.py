from __future__ import annotations
from dataclasses import dataclass
import threading
from typing import Callable, Dict, Optional, Sequence, Tuple, Union
from ctp.utils.config import config
from ctp.utils.datastruct import Label, Witness, Unknown, SemiDecision

__all__ = ["Path", "NeedMoreInput", "PrefixFunctional", "unary", "apart_semidecide"]

class Path(object):
    """
    A lazily evaluated infinite branch of a presentation tree, queried level
    by level (levels start at 1).

    Arguments
    ---------
    * fcn: Callable[[int], Label]
        Total function returning the label at the given level. It may query
        lower levels of this path through ``self.label``.
    * presentation: str
        Identifier of the presentation the path belongs to.
    """
    def __init__(self, fcn: Callable[[int], Label], presentation: str):
        self._fcn = fcn
        self.presentation = presentation
        self._labels: Dict[int, Label] = {}
        self._lock = threading.RLock()

    def label(self, level: int) -> Label:
        assert level >= 1, f"Levels start at 1, got {level}"
        with self._lock:
            if level not in self._labels:
                self._labels[level] = self._fcn(level)
            return self._labels[level]

    def prefix(self, n: int) -> Tuple[Label, ...]:
        # labels at levels 1..n
        return tuple(self.label(l) for l in range(1, n + 1))

    def __getitem__(self, level: int) -> Label:
        return self.label(level)

    def __repr__(self) -> str:
        return f"Path({self.presentation}, {list(self.prefix(4))}...)"

@dataclass(frozen=True)
class NeedMoreInput:
    # the evaluator needs input prefixes of at least this depth
    depth: int

EvalResult = Union[Tuple[Label, int], NeedMoreInput]
Evaluator = Callable[[Sequence[Tuple[Label, ...]], int], EvalResult]

class PrefixFunctional(object):
    """
    A Turing-functional style operation on paths: given finite prefixes of
    its inputs and a target level, the evaluator returns either the output
    label at that level together with the input depth it used, or
    ``NeedMoreInput(depth)``.

    Arguments
    ---------
    * evaluator: Evaluator
        ``evaluator(prefixes, level)`` where ``prefixes[i]`` is a prefix of the
        i-th input.
    * arity: int
        Number of input paths.
    * presentation: str
        Identifier of the presentation of the output paths.
    * name: str
        Name of the operation symbol, used in messages only.
    * make_path: Callable
        Constructor of the output paths, ``make_path(fcn, presentation)``.
    """
    def __init__(self, evaluator: Evaluator, arity: int, presentation: str, name: str = "",
                 make_path: Callable[[Callable[[int], Label], str], Path] = Path):
        self.evaluator = evaluator
        self.arity = arity
        self.presentation = presentation
        self.name = name
        self.make_path = make_path

    def evaluate(self, prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
        assert len(prefixes) == self.arity
        return self.evaluator(prefixes, level)

    def __call__(self, *paths: Path) -> Path:
        assert len(paths) == self.arity, \
            f"{self.name} takes {self.arity} paths, got {len(paths)}"

        def fcn(level: int) -> Label:
            depth = level
            while True:
                res = self.evaluate([p.prefix(depth) for p in paths], level)
                if not isinstance(res, NeedMoreInput):
                    return res[0]
                assert res.depth > depth, \
                    f"{self.name} asked for depth {res.depth} after receiving {depth}"
                depth = res.depth

        return self.make_path(fcn, self.presentation)

    def __repr__(self) -> str:
        return f"PrefixFunctional({self.name}, arity={self.arity})"

def unary(fcn: Callable[[Label, int], Label], presentation: str, name: str = "",
          shift: int = 0) -> PrefixFunctional:
    # functional whose output at level l is fcn(input label at l + shift, l)
    def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
        use = level + shift
        if len(prefixes[0]) < use:
            return NeedMoreInput(use)
        return fcn(prefixes[0][use - 1], level), use
    return PrefixFunctional(evaluator, 1, presentation, name)

def apart_semidecide(x: Path, y: Path, fuel: Optional[int] = None) -> SemiDecision:
    """
    Search for the least level ``<= fuel`` where ``x`` and ``y`` differ.
    """
    fuel = config.DEFAULT_FUEL if fuel is None else fuel
    for level in range(1, fuel + 1):
        if x.label(level) != y.label(level):
            return Witness(level)
    return Unknown(fuel)
