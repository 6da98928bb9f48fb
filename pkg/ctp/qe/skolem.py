from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple
from ctp.logic.formula import Formula, Atom, Not, And, Or, Exists, ForAll
from ctp.logic.lattice import RelationLattice
from ctp.logic.normalform import to_nnf, to_prenex, prenex_split, dnf_clauses
from ctp.logic.reduce import reduce_literals, linear_form
from ctp.qe.decide import DecisionContext, evaluate_combination
from ctp.qe.eliminate import eliminate, eliminate_clause
from ctp.qe.residue_clopen import ClopenLeaf, check_budget, leaf_holds
from ctp.structure.base_structure import BaseStructure
from ctp.tree.path import Path
from ctp.utils.errors import DisjunctionPresent, UnsupportedStructure
from ctp.utils.misc import logger

__all__ = ["SkolemWitness", "skolem"]

@dataclass(frozen=True, eq=False)
class SkolemWitness:
    """
    Witnesses of the leading existential variables of a formula.

    Attributes
    ----------
    * variables: Tuple[str, ...]
        The leading existential variables, outermost first.
    * paths: Tuple[Path, ...]
        One path per variable. They satisfy the matrix whenever the formula
        holds at the parameters.
    * applicable: bool
        False when the formula was found false: the paths are then the
        default zero paths and satisfy nothing.
    """
    variables: Tuple[str, ...]
    paths: Tuple[Path, ...]
    applicable: bool = True

def _has_disjunction(f: Formula) -> bool:
    if isinstance(f, Or):
        return True
    if isinstance(f, And):
        return any(_has_disjunction(a) for a in f.args)
    if isinstance(f, (Exists, ForAll)):
        return _has_disjunction(f.body)
    return False

def skolem(ctx: DecisionContext, f: Formula) -> SkolemWitness:
    """
    Compute witnesses for the leading existential block of ``f``.
    The variables are handled one at a time, each witness becoming a
    parameter of the next step:

    * the rest of the formula is eliminated down to a quantifier-free
      combination in the variable, and a clause true at the parameters is
      chosen from its disjunctive normal form,
    * an equation ``b G = T`` of the clause fixes ``G`` through the solver,
    * otherwise ``G`` is a residue satisfying the clopen conditions, moved by
      a multiple of their modulus away from the points excluded by the
      inequations and by every other equation on ``G``.

    Arguments
    ---------
    * ctx: DecisionContext
        Context over a torsion-free structure (Z_p^+ or Zhat).
    * f: Formula
        A formula whose matrix has no disjunction.

    Returns
    -------
    * SkolemWitness
        The witnesses, not applicable if the formula is false.
    """
    structure = ctx.structure
    if not isinstance(structure, BaseStructure):
        raise UnsupportedStructure(f"Witnesses are computed over Z_p^+ and Zhat, got {structure!r}")
    prefix, matrix = prenex_split(to_prenex(f))
    if _has_disjunction(to_nnf(matrix)):
        raise DisjunctionPresent("Witnesses of formulas with disjunctions are not computable")

    lead: List[str] = []
    for (kind, var) in prefix:
        if kind is not Exists:
            break
        lead.append(var)
    rest = matrix
    for (kind, var) in reversed(prefix[len(lead):]):
        rest = kind(var, rest)

    params: Dict[str, Any] = dict(ctx.params)
    lattice = ctx.lattice
    paths: List[Path] = []
    for (j, var) in enumerate(lead):
        inner = rest
        for w in reversed(lead[j + 1:]):
            inner = Exists(w, inner)
        step = DecisionContext(structure, dict(params), lattice, ctx.fuel)
        psi = eliminate(inner, structure)
        found = _witness(var, psi, step)
        if found is None:
            logger.log(f"skolem: no witness for {var}, the formula is false", vlevel=0)
            zeros = [structure.from_integer(0) for _ in lead[j:]]
            return SkolemWitness(tuple(lead), tuple(paths + zeros), applicable=False)
        g, relation = found
        logger.log(f"skolem: {var} = {list(g.prefix(4))}...", vlevel=1)
        params[var] = g
        lattice = _extend_lattice(lattice, var, relation)
        paths.append(g)
    return SkolemWitness(tuple(lead), tuple(paths))

def _extend_lattice(L: RelationLattice, var: str, relation: Optional[Sequence[int]]) \
        -> RelationLattice:
    # the new symbol only takes part in the relation of its defining equation
    basis = [list(v) + [0] for v in L.basis]
    if relation is not None:
        basis.append(list(relation))
    return RelationLattice(L.names + (var,), basis, L.flavor, L.complete)

def _witness(var: str, psi: Formula, ctx: DecisionContext) \
        -> Optional[Tuple[Path, Optional[List[int]]]]:
    structure = ctx.structure
    assert isinstance(structure, BaseStructure)
    clause = next((c for c in dnf_clauses(psi)
                   if evaluate_combination(eliminate_clause(var, c, structure), ctx)), None)
    if clause is None:
        return None
    leaves = [lit for lit in clause if isinstance(lit, ClopenLeaf) and var in lit.variables]
    lits = [lit for lit in clause if not isinstance(lit, ClopenLeaf)]
    _, red = reduce_literals([var], lits)

    if len(red.equations) > 0:
        b, _, t = red.equations[0]
        coeffs = [c for (_, c) in t.coeffs]
        g = structure.solve(coeffs, b, [ctx.params[k] for (k, _) in t.coeffs])
        if g is None:
            return None
        tc = t.as_dict()
        return g, [-tc.get(k, 0) for k in ctx.lattice.names] + [b]

    g0 = _residue_witness(var, leaves, ctx)
    if g0 is None:
        return None
    r, M = g0
    forbidden = [(c[0], s) for (c, s) in red.inequations]
    for atom in _atoms(psi):
        a, t = linear_form(atom, [var])
        if a[0] != 0:
            forbidden.append((a[0], t))
    one = structure.from_integer(1)
    shifted = [(c * M, structure.combination([1, -c * r], [ctx.term_path(s), one]))
               for (c, s) in forbidden]
    h = structure.avoid(shifted)
    return structure.combination([r, M], [one, h]), None

def _residue_witness(var: str, leaves: Sequence[ClopenLeaf], ctx: DecisionContext) \
        -> Optional[Tuple[int, int]]:
    # least residue g mod M satisfying the clopen conditions on var
    structure = ctx.structure
    assert isinstance(structure, BaseStructure)
    M = 1
    for leaf in leaves:
        for (t, m) in zip(leaf.coords, leaf.moduli):
            if t.coefficient(var) % m != 0:
                M = math.lcm(M, m)
    M = structure.normalize_modulus(M)
    check_budget(M, f"searching a witness of {var}")

    def holds(leaf: ClopenLeaf, g: int) -> bool:
        residues = [(t.coefficient(var) * g
                     + sum(c * ctx.residue(k, m) for (k, c) in t.without(var).coeffs)) % m
                    for (t, m) in zip(leaf.coords, leaf.moduli)]
        return leaf_holds(leaf, residues)

    g = next((g for g in range(M) if all(holds(leaf, g) for leaf in leaves)), None)
    return None if g is None else (g, M)

def _atoms(f: Formula) -> List[Atom]:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, Not):
        return _atoms(f.body)
    if isinstance(f, (And, Or)):
        return [a for arg in f.args for a in _atoms(arg)]
    return []
