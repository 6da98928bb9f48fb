from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union
from ctp.logic.formula import (Formula, Term, Atom, RingAtom, Not, And, Or, Exists, ForAll, Top,
                               Bottom, free_variables)
from ctp.logic.lattice import RelationLattice, lattice_entails, free_part_lattice
from ctp.oracle.finite_model import evaluate_cyclic
from ctp.qe.eliminate import eliminate
from ctp.qe.product_translate import FactorLeaf, product_translate
from ctp.qe.residue_clopen import ClopenLeaf, leaf_holds
from ctp.structure.base_structure import BaseStructure
from ctp.structure.zhat import ZhatStructure
from ctp.structure.zp_additive import ZpAdditiveStructure
from ctp.structure.zp_units import UnitPadic, iso_backward, torsion_order
from ctp.tree.path import Path, apart_semidecide
from ctp.tree.product import project
from ctp.utils.config import config
from ctp.utils.datastruct import Witness
from ctp.utils.errors import (ArityMismatch, FuelExhausted, SignatureMismatch, UnsupportedFormula,
                              UnsupportedStructure)
from ctp.utils.misc import logger, natural_key

__all__ = ["UnitGroup", "FiniteProduct", "DecisionContext", "tree_decide", "decide_zhat",
           "decide_units", "decide_product", "evaluate_combination", "decide_literal"]

@dataclass(frozen=True)
class UnitGroup:
    """
    The multiplicative group Z_p^x, decided through its splitting into the
    torsion Z/(p-1) (Z/2 for p = 2) and the free part Z_p^+.
    """
    p: int

    @property
    def name(self) -> str:
        return "zpx"

@dataclass(frozen=True)
class FiniteProduct:
    """
    The direct product of finitely many torsion-free structures, the
    parameters being product paths with one coordinate per factor.
    """
    factors: Tuple[BaseStructure, ...]

    @property
    def name(self) -> str:
        return "prod"

Domain = Union[BaseStructure, UnitGroup, FiniteProduct]
Diagram = Union[RelationLattice, Tuple[RelationLattice, ...]]

@dataclass(frozen=True, eq=False)
class DecisionContext:
    """
    Everything a decision reads besides the formula: the structure, the
    parameter paths and the positive atomic diagram of the parameters.

    Attributes
    ----------
    * structure: Domain
        The structure the formulas are read in.
    * params: Mapping[str, Any]
        Parameter symbol to its path (a ``UnitPadic`` or a unit label path
        for ``UnitGroup``).
    * diagram: RelationLattice or Tuple[RelationLattice, ...]
        The relations of the parameters, one lattice per factor for a
        ``FiniteProduct``. Its symbols must be the parameter symbols.
    * fuel: Optional[int]
        Level budget of the apartness searches of free-form diagrams,
        ``config.DEFAULT_FUEL`` if None.
    """
    structure: Domain
    params: Mapping[str, Any]
    diagram: Diagram
    fuel: Optional[int] = None
    _residues: Dict[Tuple[str, int], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        lattices = self.diagram if isinstance(self.diagram, tuple) else (self.diagram,)
        if isinstance(self.structure, FiniteProduct) and len(lattices) != len(self.structure.factors):
            raise ArityMismatch(f"{len(self.structure.factors)} factors need as many diagrams, "
                                f"got {len(lattices)}")
        for L in lattices:
            if set(L.names) != set(self.params):
                raise ArityMismatch(f"The diagram is over {sorted(L.names, key=natural_key)}, "
                                    f"the parameters are {self.names}")

    @property
    def names(self) -> List[str]:
        return sorted(self.params, key=natural_key)

    @property
    def lattice(self) -> RelationLattice:
        assert isinstance(self.diagram, RelationLattice)
        return self.diagram

    def residue(self, name: str, m: int) -> int:
        # residue of a parameter of a torsion-free structure, cached per modulus
        key = (name, m)
        if key not in self._residues:
            assert isinstance(self.structure, BaseStructure)
            self._residues[key] = self.structure.residue(self.params[name], m)
        return self._residues[key]

    def term_path(self, t: Term) -> Path:
        assert isinstance(self.structure, BaseStructure)
        if t.is_zero:
            return self.structure.from_integer(0)
        return self.structure.combination([c for (_, c) in t.coeffs],
                                          [self.params[k] for (k, _) in t.coeffs])

def _check_free(ctx: DecisionContext, f: Formula):
    extra = sorted(set(free_variables(f)) - set(ctx.params), key=natural_key)
    if len(extra) > 0:
        raise ArityMismatch(f"The free symbol(s) {extra} are not parameters")

def tree_decide(ctx: DecisionContext, f: Formula) -> bool:
    """
    Decide ``f`` at the parameters of ``ctx`` from their paths and their
    diagram.

    Arguments
    ---------
    * ctx: DecisionContext
        The structure, parameters and diagram.
    * f: Formula
        A formula whose free symbols are parameters, additive for the
        torsion-free structures and products, multiplicative for units.

    Returns
    -------
    * bool
        The truth of ``f``. Positive literals are decided by entailment from
        the diagram, negative ones by non-entailment when the diagram is
        complete and by an apartness search otherwise.
    """
    _check_free(ctx, f)
    structure = ctx.structure
    if isinstance(structure, UnitGroup):
        return decide_units(ctx, f)
    if isinstance(structure, FiniteProduct):
        return decide_product(ctx, f)
    if isinstance(structure, ZhatStructure):
        return decide_zhat(ctx, f)
    if isinstance(structure, BaseStructure):
        return _decide_torsion_free(ctx, f)
    raise UnsupportedStructure(f"No decision procedure for {structure!r}")

def _decide_torsion_free(ctx: DecisionContext, f: Formula) -> bool:
    assert isinstance(ctx.structure, BaseStructure)
    qf = eliminate(f, ctx.structure)
    logger.log(f"{ctx.structure.name}: quantifier-free form {qf}", vlevel=1)
    return evaluate_combination(qf, ctx)

def decide_zhat(ctx: DecisionContext, f: Formula) -> bool:
    """
    Decide ``f`` over the profinite integers. Coefficients of the unknowns
    only matter at the finitely many primes dividing them, which the
    residue conditions of the elimination pick up through CRT.
    """
    if not isinstance(ctx.structure, ZhatStructure):
        raise UnsupportedStructure(f"decide_zhat needs Zhat, got {ctx.structure!r}")
    _check_free(ctx, f)
    return _decide_torsion_free(ctx, f)

def evaluate_tree(f: Formula, leaf: Callable[[Formula], bool]) -> bool:
    # Boolean structure evaluated here, the leaves by ``leaf``
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate_tree(f.body, leaf)
    if isinstance(f, And):
        return all(evaluate_tree(a, leaf) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate_tree(a, leaf) for a in f.args)
    if isinstance(f, (Exists, ForAll)):
        raise UnsupportedFormula(f"Quantified subformula {f} in a quantifier-free combination")
    return leaf(f)

def evaluate_combination(f: Formula, ctx: DecisionContext) -> bool:
    """
    Truth of a quantifier-free combination of equations and clopen residue
    conditions at the parameters of a torsion-free structure.
    """
    def leaf(g: Formula) -> bool:
        if isinstance(g, ClopenLeaf):
            residues = [sum(c * ctx.residue(k, m) for (k, c) in t.coeffs) % m
                        for (t, m) in zip(g.coords, g.moduli)]
            return leaf_holds(g, residues)
        if isinstance(g, Atom):
            return decide_literal(ctx, g)
        raise UnsupportedFormula(f"Cannot decide the leaf {g!r}")
    return evaluate_tree(f, leaf)

def decide_literal(ctx: DecisionContext, atom: Atom) -> bool:
    """
    Truth of the parameter equation ``atom``: entailed relations hold, the
    others fail under a complete diagram and are refuted by searching a
    level where both sides differ otherwise.
    """
    if atom.form().is_zero:
        return True
    L = ctx.lattice
    if lattice_entails(L, atom):
        return True
    if L.complete:
        return False
    assert isinstance(ctx.structure, BaseStructure)
    fuel = config.DEFAULT_FUEL if ctx.fuel is None else ctx.fuel
    res = apart_semidecide(ctx.term_path(atom.form()), ctx.structure.from_integer(0), fuel)
    logger.log(f"Free-form literal {atom}: {res}", vlevel=1)
    if isinstance(res, Witness):
        return False
    raise FuelExhausted(f"Neither the diagram nor {fuel} levels of the parameters decide {atom}",
                        fuel)

############### units ###############
def _as_unit(x: Any, p: int) -> UnitPadic:
    if isinstance(x, UnitPadic):
        if x.p != p:
            raise SignatureMismatch(f"A unit of Z_{x.p} among the parameters of Z_{p}^x")
        return x
    return iso_backward(x, p)

def _to_additive(f: Formula) -> Formula:
    # multiplicative atoms as additive ones on the exponent vectors
    if isinstance(f, Atom):
        if f.flavor != "multiplicative":
            raise SignatureMismatch(f"{f} is not an atom of the multiplicative group")
        return Atom(f.lhs.with_flavor("additive"), f.rhs.with_flavor("additive"))
    if isinstance(f, Not):
        return Not(_to_additive(f.body))
    if isinstance(f, And):
        return And(tuple(_to_additive(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_to_additive(a) for a in f.args))
    if isinstance(f, (Exists, ForAll)):
        return type(f)(f.var, _to_additive(f.body))
    if isinstance(f, RingAtom):
        raise UnsupportedFormula(f"{f} is not in the language of groups")
    return f

def decide_units(ctx: DecisionContext, f: Formula) -> bool:
    """
    Decide a multiplicative formula over Z_p^x. The formula is split over
    Z/k x Z_p^+ (``k`` the torsion order): the torsion factor is decided by
    exhaustion on the torsion parts, the free factor by ``tree_decide`` on
    the free parts with the relations ``{a : k a in L}`` of the diagram ``L``.
    """
    structure = ctx.structure
    if not isinstance(structure, UnitGroup):
        raise UnsupportedStructure(f"decide_units needs Z_p^x, got {structure!r}")
    _check_free(ctx, f)
    L = ctx.lattice
    if L.flavor != "multiplicative":
        raise SignatureMismatch("The diagram of units must be multiplicative")
    p = structure.p
    k = torsion_order(p)
    units = {name: _as_unit(x, p) for (name, x) in ctx.params.items()}
    torsion = {name: u.x for (name, u) in units.items()}
    free_ctx = DecisionContext(ZpAdditiveStructure(p), {name: u.y for (name, u) in units.items()},
                               free_part_lattice(L, k), ctx.fuel)
    translated = product_translate(_to_additive(f), 2)
    logger.log(f"zpx: split into {translated}", vlevel=1)

    def leaf(g: Formula) -> bool:
        assert isinstance(g, FactorLeaf), f"{g} is not a factor leaf"
        if g.index == 0:
            return evaluate_cyclic(g.formula, k, torsion)
        return tree_decide(free_ctx, g.formula)
    return evaluate_tree(translated, leaf)

############### finite products ###############
def decide_product(ctx: DecisionContext, f: Formula) -> bool:
    """
    Decide an additive formula over a finite product through its
    translation into formulas about the factors, each decided at the
    coordinates of the parameters with the diagram of that factor.
    """
    structure = ctx.structure
    if not isinstance(structure, FiniteProduct):
        raise UnsupportedStructure(f"decide_product needs a finite product, got {structure!r}")
    _check_free(ctx, f)
    assert isinstance(ctx.diagram, tuple)
    factor_ctxs = [DecisionContext(s, {name: project(x, i) for (name, x) in ctx.params.items()},
                                   ctx.diagram[i], ctx.fuel)
                   for (i, s) in enumerate(structure.factors)]
    translated = product_translate(f, len(structure.factors))
    logger.log(f"prod: split into {translated}", vlevel=1)

    def leaf(g: Formula) -> bool:
        assert isinstance(g, FactorLeaf), f"{g} is not a factor leaf"
        return tree_decide(factor_ctxs[g.index], g.formula)
    return evaluate_tree(translated, leaf)
