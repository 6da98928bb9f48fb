from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, List, Union
from ctp.logic.formula import (Formula, Atom, RingAtom, Not, And, Or, Exists, ForAll, Top, Bottom,
                               conjoin, disjoin, free_variables, is_quantifier_free)
from ctp.logic.normalform import to_nnf, dnf_clauses
from ctp.utils.errors import UnsupportedFormula

__all__ = ["FactorLeaf", "AllFactors", "SomeFactor", "product_translate"]

@dataclass(frozen=True)
class FactorLeaf(Formula):
    """
    The formula ``formula`` read in the factor ``index`` of a finite product,
    at the ``index``-th coordinates of the parameters.
    """
    index: int
    formula: Formula

    @property
    def variables(self):
        return tuple(free_variables(self.formula))

    def negated(self) -> FactorLeaf:
        return FactorLeaf(self.index, to_nnf(Not(self.formula)))

    def __str__(self) -> str:
        return f"[{self.index}: {self.formula}]"

@dataclass(frozen=True)
class AllFactors(Formula):
    # ``formula`` holds in every factor of an infinite product
    formula: Formula

    @property
    def variables(self):
        return tuple(free_variables(self.formula))

    def negated(self) -> SomeFactor:
        return SomeFactor(to_nnf(Not(self.formula)))

    def __str__(self) -> str:
        return f"[all i: {self.formula}]"

@dataclass(frozen=True)
class SomeFactor(Formula):
    # ``formula`` holds in at least one factor of an infinite product
    formula: Formula

    @property
    def variables(self):
        return tuple(free_variables(self.formula))

    def negated(self) -> AllFactors:
        return AllFactors(to_nnf(Not(self.formula)))

    def __str__(self) -> str:
        return f"[some i: {self.formula}]"

def product_translate(f: Formula, factors: Union[int, str]) -> Formula:
    """
    Rewrite a formula about a direct product of abelian groups into a Boolean
    combination of formulas about the factors, none of them with more
    quantifiers than ``f``. Equations hold in a product exactly when they hold
    in every factor, and an existential over a conjunction of per-factor
    conditions splits into one existential per factor.

    Arguments
    ---------
    * f: Formula
        An additive formula in the language of abelian groups.
    * factors: int or str
        The number of factors, or ``"infinite"`` for a product of infinitely
        many groups. In the infinite case only quantifier-free formulas and a
        single existential over a conjunction of equations with at most one
        inequation are translated.

    Returns
    -------
    * Formula
        In negation normal form, with ``FactorLeaf`` leaves for a finite
        product and ``AllFactors``/``SomeFactor`` leaves for an infinite one.
    """
    if factors == "infinite":
        return _translate_infinite(to_nnf(f))
    if not isinstance(factors, int) or factors < 1:
        raise ValueError(f"Unknown number of factors: {factors}")
    return to_nnf(_translate_finite(f, factors))

def _check_leaf(f: Formula):
    if isinstance(f, RingAtom):
        raise UnsupportedFormula(f"{f} is not in the language of groups")

def _translate_finite(f: Formula, k: int) -> Formula:
    if isinstance(f, Atom):
        return conjoin(FactorLeaf(i, f) for i in range(k))
    if isinstance(f, Not):
        return to_nnf(Not(_translate_finite(f.body, k)))
    if isinstance(f, And):
        return conjoin(_translate_finite(a, k) for a in f.args)
    if isinstance(f, Or):
        return disjoin(_translate_finite(a, k) for a in f.args)
    if isinstance(f, Exists):
        return _exists_finite(f.var, to_nnf(_translate_finite(f.body, k)))
    if isinstance(f, ForAll):
        body = to_nnf(Not(_translate_finite(f.body, k)))
        return to_nnf(Not(_exists_finite(f.var, body)))
    if isinstance(f, (Top, Bottom)):
        return f
    _check_leaf(f)
    raise UnsupportedFormula(f"Cannot translate {f!r} to the factors")

def _exists_finite(var: str, body: Formula) -> Formula:
    res: List[Formula] = []
    for clause in dnf_clauses(body):
        per_factor: Dict[int, List[Formula]] = {}
        for leaf in clause:
            assert isinstance(leaf, FactorLeaf), f"{leaf} is not a factor leaf"
            per_factor.setdefault(leaf.index, []).append(leaf.formula)
        res.append(conjoin(FactorLeaf(i, Exists(var, conjoin(fs)))
                           for (i, fs) in sorted(per_factor.items())))
    return disjoin(res)

def _translate_infinite(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return AllFactors(f)
    if isinstance(f, Not):
        assert isinstance(f.body, Atom), f"{f} is not in negation normal form"
        return SomeFactor(f)
    if isinstance(f, And):
        return conjoin(_translate_infinite(a) for a in f.args)
    if isinstance(f, Or):
        return disjoin(_translate_infinite(a) for a in f.args)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Exists):
        return _exists_infinite(f)
    if isinstance(f, ForAll):
        raise UnsupportedFormula("Universal quantifiers over an infinite product are not translated")
    _check_leaf(f)
    raise UnsupportedFormula(f"Cannot translate {f!r} to the factors")

def _exists_infinite(f: Exists) -> Formula:
    clauses = dnf_clauses(f.body) if is_quantifier_free(f.body) else None
    if clauses is None or len(clauses) != 1:
        raise UnsupportedFormula("Only a single existential over one conjunction is translated "
                                 "over an infinite product")
    clause = clauses[0]
    eqs = [lit for lit in clause if isinstance(lit, Atom)]
    ineqs = [lit for lit in clause if isinstance(lit, Not) and isinstance(lit.body, Atom)]
    if len(eqs) + len(ineqs) != len(clause) or len(ineqs) > 1:
        raise UnsupportedFormula("An existential over an infinite product may have at most "
                                 "one inequation")
    every = AllFactors(Exists(f.var, conjoin(eqs)))
    if len(ineqs) == 0:
        return every
    return conjoin([every, SomeFactor(Exists(f.var, conjoin(eqs + ineqs)))])
