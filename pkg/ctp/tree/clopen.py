from __future__ import annotations
from dataclasses import dataclass, field
import itertools
from typing import Sequence, Tuple
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path
from ctp.utils.config import config
from ctp.utils.datastruct import Label
from ctp.utils.errors import ArityMismatch, TooLarge

__all__ = ["ClopenSet", "clopen_membership", "full_space", "complement"]

@dataclass(frozen=True)
class ClopenSet:
    """
    Finite union of basic clopen sets of n-tuples of paths.

    Attributes
    ----------
    * arity: int
        Number of path coordinates.
    * constraints: Tuple[Tuple[int, Tuple[Label, ...]], ...]
        Entries ``(level, labels)``: a tuple is in the entry if its i-th path
        carries ``labels[i]`` at ``level``. Level 0 is the root and matches
        every tuple. Entries are kept sorted.
    """
    arity: int
    constraints: Tuple[Tuple[int, Tuple[Label, ...]], ...] = field(default=())

    def __post_init__(self):
        for (level, labels) in self.constraints:
            assert len(labels) == self.arity, f"Entry {labels} does not have arity {self.arity}"
            assert level >= 0
        object.__setattr__(self, "constraints", tuple(sorted(set(self.constraints))))

    @property
    def max_level(self) -> int:
        return max((level for (level, _) in self.constraints), default=0)

def full_space(arity: int) -> ClopenSet:
    return ClopenSet(arity, ((0, (0,) * arity),))

def clopen_membership(s: ClopenSet, paths: Sequence[Path]) -> bool:
    if len(paths) != s.arity:
        raise ArityMismatch(f"The clopen set has arity {s.arity}, got {len(paths)} paths")
    for (level, labels) in s.constraints:
        if level == 0 or all(p.label(level) == lab for (p, lab) in zip(paths, labels)):
            return True
    return False

def complement(s: ClopenSet, presentation: TreePresentation) -> ClopenSet:
    """
    The clopen set of tuples not in ``s``, as entries at the deepest level of
    ``s``. The presentation must be coherent.
    """
    assert presentation.coherent, "Complements need single-level constraints"
    level = s.max_level
    if level == 0:
        # s is empty or the whole space
        return ClopenSet(s.arity) if s.constraints else full_space(s.arity)

    labels = list(presentation.labels_at(level))
    if len(labels) ** s.arity > config.CLOPEN_BUDGET:
        raise TooLarge(f"Complementing needs {len(labels)}^{s.arity} label tuples")

    def matches(tup: Tuple[Label, ...]) -> bool:
        for (lvl, labs) in s.constraints:
            if lvl == 0:
                return True
            if all(presentation.restrict(t, level, lvl) == lab for (t, lab) in zip(tup, labs)):
                return True
        return False

    entries = [(level, tup) for tup in itertools.product(labels, repeat=s.arity)
               if not matches(tup)]
    return ClopenSet(s.arity, tuple(entries))
