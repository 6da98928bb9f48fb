from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Dict, List, Sequence, Tuple
import numpy as np
from ctp.logic.formula import (Formula, Term, Atom, RingAtom, Not, And, Or, Exists, ForAll,
                               TOP, conjoin, disjoin, free_variables)
from ctp.logic.normalform import to_nnf, dnf_clauses
from ctp.logic.reduce import reduce_literals
from ctp.qe.residue_clopen import ClopenLeaf, make_leaf, mixed_radix, check_budget
from ctp.structure.base_structure import BaseStructure
from ctp.utils.errors import UnsupportedFormula
from ctp.utils.misc import logger

__all__ = ["eliminate", "eliminate_exists", "eliminate_clause"]

def eliminate(f: Formula, structure: BaseStructure) -> Formula:
    """
    Quantifier-free equivalent of ``f`` over the torsion-free structure: a
    Boolean combination of equations and clopen residue conditions on the
    free symbols of ``f``. The quantifiers are removed innermost first,
    ``ALL G. phi`` being treated as ``~EX G. ~phi``.

    Arguments
    ---------
    * f: Formula
        An additive formula.
    * structure: BaseStructure
        The structure the formula is read in. Its moduli and coefficient
        splitting shape the residue conditions.

    Returns
    -------
    * Formula
        The equivalent quantifier-free formula in negation normal form.
    """
    return to_nnf(_eliminate(f, structure))

def _eliminate(f: Formula, structure: BaseStructure) -> Formula:
    if isinstance(f, Exists):
        return eliminate_exists(f.var, to_nnf(_eliminate(f.body, structure)), structure)
    if isinstance(f, ForAll):
        body = to_nnf(Not(_eliminate(f.body, structure)))
        return to_nnf(Not(eliminate_exists(f.var, body, structure)))
    if isinstance(f, Not):
        return to_nnf(Not(_eliminate(f.body, structure)))
    if isinstance(f, And):
        return conjoin(_eliminate(a, structure) for a in f.args)
    if isinstance(f, Or):
        return disjoin(_eliminate(a, structure) for a in f.args)
    if isinstance(f, Atom):
        if f.flavor != "additive":
            raise UnsupportedFormula(f"Quantifier elimination reads additive atoms, got {f}")
        return f
    if isinstance(f, RingAtom):
        raise UnsupportedFormula(f"{f} is not in the language of groups")
    return f

def eliminate_exists(var: str, body: Formula, structure: BaseStructure) -> Formula:
    """
    Quantifier-free equivalent of ``EX var. body`` for a quantifier-free
    ``body``, clause by clause of its disjunctive normal form.
    """
    if var not in free_variables(body):
        return body
    clauses = dnf_clauses(body)
    logger.log(f"Eliminating {var} from {len(clauses)} clause(s)", vlevel=2)
    return disjoin(eliminate_clause(var, clause, structure) for clause in clauses)

def eliminate_clause(var: str, clause: Sequence[Formula], structure: BaseStructure) -> Formula:
    """
    Quantifier-free equivalent of ``EX var`` applied to a conjunction of
    literals: equations, inequations and clopen residue conditions.
    """
    outside: List[Formula] = []
    lits: List[Formula] = []
    leaves: List[ClopenLeaf] = []
    for lit in clause:
        if var not in free_variables(lit):
            outside.append(lit)
        elif isinstance(lit, ClopenLeaf):
            leaves.append(lit)
        else:
            lits.append(lit)

    removables, red = reduce_literals([var], lits)
    if len(red.equations) > 0:
        b, _, t = red.equations[0]
        cond = _project_with_equation(var, b, t, leaves, structure)
    elif len(leaves) > 0:
        # the remaining inequations exclude single points of a set without
        # isolated points
        cond = _project_free(var, leaves, structure)
    else:
        cond = TOP
    return conjoin(outside + removables + [cond])

@dataclass
class _Coordinates:
    # the parameter terms of the eliminated leaves, shared when equal
    terms: List[Term]
    moduli: List[int]
    index: Dict[Tuple[Term, int], int]

    @staticmethod
    def empty() -> _Coordinates:
        return _Coordinates([], [], {})

    def add(self, t: Term, m: int) -> int:
        key = (t, m)
        if key not in self.index:
            self.index[key] = len(self.terms)
            self.terms.append(t)
            self.moduli.append(m)
        return self.index[key]

def _split_leaves(var: str, leaves: Sequence[ClopenLeaf], coords: _Coordinates):
    # per leaf: (coefficient of var mod m, parameter coordinate index, m) per coordinate
    split = []
    for leaf in leaves:
        parts = []
        for (t, m) in zip(leaf.coords, leaf.moduli):
            parts.append((t.coefficient(var) % m, coords.add(t.without(var), m), m))
        split.append((leaf, parts))
    return split

def _var_modulus(split, structure: BaseStructure) -> int:
    M = 1
    for (_, parts) in split:
        for (c, _, m) in parts:
            if c != 0:
                M = math.lcm(M, m)
    return structure.normalize_modulus(M)

def _leaves_mask(split, rho: np.ndarray, g: np.ndarray) -> np.ndarray:
    # rho: (ncoords, nrho) parameter residues, g: (ng,) residues of var
    mask = np.ones((rho.shape[1], g.shape[0]), dtype=bool)
    for (leaf, parts) in split:
        strides = mixed_radix(leaf.moduli)
        code = np.zeros_like(mask, dtype=np.int64)
        for ((c, idx, m), s) in zip(parts, strides):
            code += ((c * g[None, :] + rho[idx][:, None]) % m) * s
        members = np.asarray([sum(int(r) * int(s) for (r, s) in zip(mem, strides))
                              for mem in leaf.members], dtype=np.int64)
        mask &= np.isin(code, members)
    return mask

def _grid(moduli: Sequence[int]) -> np.ndarray:
    return np.indices(tuple(moduli), dtype=np.int64).reshape(len(moduli), -1)

def _project_free(var: str, leaves: Sequence[ClopenLeaf], structure: BaseStructure) -> Formula:
    coords = _Coordinates.empty()
    split = _split_leaves(var, leaves, coords)
    M = _var_modulus(split, structure)
    check_budget(math.prod(coords.moduli) * M, f"eliminating {var}")
    rho = _grid(coords.moduli)
    mask = _leaves_mask(split, rho, np.arange(M, dtype=np.int64))
    members = rho[:, mask.any(axis=1)].T
    return make_leaf(coords.terms, coords.moduli, members.tolist())

def _project_with_equation(var: str, b: int, t: Term, leaves: Sequence[ClopenLeaf],
                           structure: BaseStructure) -> Formula:
    # b var = t is solvable iff t = 0 mod d, and then var mod M is read from t mod d M
    d, u = structure.split_coefficient(b)
    if len(leaves) == 0:
        return make_leaf([t], [structure.normalize_modulus(d)], [(0,)])
    coords = _Coordinates.empty()
    split = _split_leaves(var, leaves, coords)
    M = _var_modulus(split, structure)
    dM = structure.normalize_modulus(d * M)
    check_budget(math.prod(coords.moduli) * dM, f"eliminating {var}")
    uinv = structure.unit_inverse(u, M) if M > 1 else 0
    tau = np.arange(dM, dtype=np.int64)
    g = (uinv * (tau // d)) % M
    rho = _grid(coords.moduli)
    mask = _leaves_mask(split, rho, g) & (tau % d == 0)[None, :]
    (ir, it) = np.nonzero(mask)
    members = np.concatenate([tau[it][None, :], rho[:, ir]], axis=0).T
    return make_leaf([t] + coords.terms, [dM] + coords.moduli, members.tolist())
