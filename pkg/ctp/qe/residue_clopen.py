from __future__ import annotations
from dataclasses import dataclass
import itertools
import math
from typing import Dict, List, Sequence, Tuple
import numpy as np
from ctp.logic.formula import Formula, Term, TOP, BOTTOM
from ctp.tree.clopen import ClopenSet
from ctp.utils.config import config
from ctp.utils.errors import TooLarge
from ctp.utils.misc import natural_key

__all__ = ["ClopenLeaf", "make_leaf", "simplify_leaf", "leaf_holds", "to_clopen_set",
           "mixed_radix", "check_budget"]

@dataclass(frozen=True)
class ClopenLeaf(Formula):
    """
    The clopen condition ``(T_1 mod m_1, ..., T_k mod m_k) in members`` on
    integer combinations ``T_i`` of the parameters. It carries its complete
    decision data: the residues of the parameters modulo the ``m_i`` decide
    it.

    Attributes
    ----------
    * coords: Tuple[Term, ...]
        The combinations ``T_i``.
    * moduli: Tuple[int, ...]
        The moduli ``m_i``, normalized for the structure.
    * members: Tuple[Tuple[int, ...], ...]
        The accepted residue tuples, sorted.
    """
    coords: Tuple[Term, ...]
    moduli: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        assert len(self.coords) == len(self.moduli)
        object.__setattr__(self, "members", tuple(sorted(set(tuple(int(r) for r in m)
                                                             for m in self.members))))

    @property
    def variables(self) -> Tuple[str, ...]:
        names = set(k for t in self.coords for k in t.variables)
        return tuple(sorted(names, key=natural_key))

    @property
    def grid_size(self) -> int:
        return math.prod(self.moduli)

    def negated(self) -> Formula:
        check_budget(self.grid_size, "complementing a clopen leaf")
        members = set(self.members)
        rest = [r for r in itertools.product(*[range(m) for m in self.moduli]) if r not in members]
        return simplify_leaf(ClopenLeaf(self.coords, self.moduli, tuple(rest)))

    def rename(self, old: str, new: str) -> ClopenLeaf:
        coords = tuple(rename_free_term(t, old, new) for t in self.coords)
        return ClopenLeaf(coords, self.moduli, self.members)

    def __str__(self) -> str:
        coords = ", ".join(f"{t} mod {m}" for (t, m) in zip(self.coords, self.moduli))
        members = ", ".join("(" + ",".join(str(r) for r in mem) + ")" for mem in self.members)
        return f"[({coords}) in {{{members}}}]"

def rename_free_term(t: Term, old: str, new: str) -> Term:
    return Term(tuple((new if k == old else k, c) for (k, c) in t.coeffs), t.flavor)

def check_budget(size: int, what: str):
    if size > config.CLOPEN_BUDGET:
        raise TooLarge(f"{what} needs {size} residue tuples, over the budget of "
                       f"{config.CLOPEN_BUDGET}")

def mixed_radix(moduli: Sequence[int]) -> np.ndarray:
    # strides of the row-major code of a residue tuple
    strides = np.ones(len(moduli), dtype=np.int64)
    for i in range(len(moduli) - 2, -1, -1):
        strides[i] = strides[i + 1] * moduli[i + 1]
    return strides

def make_leaf(coords: Sequence[Term], moduli: Sequence[int],
              members: Sequence[Sequence[int]]) -> Formula:
    return simplify_leaf(ClopenLeaf(tuple(coords), tuple(moduli),
                                    tuple(tuple(m) for m in members)))

def simplify_leaf(leaf: ClopenLeaf) -> Formula:
    """
    Drop the trivial coordinates (modulus 1, or identically zero) and merge
    repeated ones. Returns TOP or BOTTOM when nothing is left to decide.
    """
    coords = list(leaf.coords)
    moduli = list(leaf.moduli)
    members = [list(m) for m in leaf.members]
    keep: List[int] = []
    seen: Dict[Tuple[Term, int], int] = {}
    for i in range(len(coords)):
        if moduli[i] == 1:
            continue
        if coords[i].is_zero:
            members = [m for m in members if m[i] == 0]
            continue
        key = (coords[i], moduli[i])
        if key in seen:
            j = seen[key]
            members = [m for m in members if m[i] == m[j]]
            continue
        seen[key] = i
        keep.append(i)
    new_members = set(tuple(m[i] for i in keep) for m in members)
    if len(new_members) == 0:
        return BOTTOM
    new_moduli = tuple(moduli[i] for i in keep)
    if len(new_members) == math.prod(new_moduli):
        return TOP
    return ClopenLeaf(tuple(coords[i] for i in keep), new_moduli, tuple(new_members))

def leaf_holds(leaf: ClopenLeaf, residues: Sequence[int]) -> bool:
    # residues[i] is coords[i] mod moduli[i]
    return tuple(int(r) % m for (r, m) in zip(residues, leaf.moduli)) in set(leaf.members)

def to_clopen_set(leaf: ClopenLeaf, names: Sequence[str], p: int) -> ClopenSet:
    """
    The leaf over Z_p^+ as a clopen set of parameter tuples, with entries at
    the level ``e`` of the largest modulus ``p^e``.
    """
    n = len(names)
    M = max(leaf.moduli, default=1)
    e = 0
    while p ** e < M:
        e += 1
    assert p ** e == M, f"{M} is not a power of {p}"
    check_budget(M ** n, "converting a clopen leaf")
    grid = np.indices((M,) * n).reshape(n, -1).T if n > 0 else np.zeros((1, 0), dtype=np.int64)
    codes = np.zeros(grid.shape[0], dtype=np.int64)
    strides = mixed_radix(leaf.moduli)
    for (i, (t, m)) in enumerate(zip(leaf.coords, leaf.moduli)):
        coeffs = np.asarray([t.coefficient(k) % m for k in names], dtype=np.int64)
        codes += ((grid @ coeffs) % m) * strides[i]
    member_codes = np.asarray([sum(int(r) * int(s) for (r, s) in zip(mem, strides))
                               for mem in leaf.members], dtype=np.int64)
    ok = np.isin(codes, member_codes)
    entries = tuple((e, tuple(int(r) for r in row)) for row in grid[ok])
    return ClopenSet(n, entries)
