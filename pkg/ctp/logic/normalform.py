from __future__ import annotations
from typing import List, Sequence, Set, Tuple
from ctp.logic.formula import (Formula, Not, And, Or, Exists, ForAll, Top, Bottom, TOP, BOTTOM,
                               conjoin, disjoin, free_variables, bound_variables, fresh_name,
                               rename_free, is_quantifier_free)
from ctp.utils.config import config
from ctp.utils.errors import TooLarge

__all__ = ["to_nnf", "to_prenex", "to_dnf", "to_cnf", "dnf_clauses", "cnf_clauses",
           "prenex_split", "is_literal"]

Clause = List[Formula]

def is_literal(f: Formula) -> bool:
    # leaves and negated leaves
    if isinstance(f, Not):
        return not isinstance(f.body, (Not, And, Or, Exists, ForAll, Top, Bottom))
    return not isinstance(f, (And, Or, Exists, ForAll))

def to_nnf(f: Formula) -> Formula:
    """
    Push the negations down to the leaves. Leaves providing a ``negated``
    method (complementable conditions) absorb their negation.
    """
    return _nnf(f, False)

def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Not):
        return _nnf(f.body, not neg)
    if isinstance(f, (And, Or)):
        args = [_nnf(a, neg) for a in f.args]
        flip = isinstance(f, And) == neg
        return disjoin(args) if flip else conjoin(args)
    if isinstance(f, Exists):
        return ForAll(f.var, _nnf(f.body, True)) if neg else Exists(f.var, _nnf(f.body, False))
    if isinstance(f, ForAll):
        return Exists(f.var, _nnf(f.body, True)) if neg else ForAll(f.var, _nnf(f.body, False))
    if isinstance(f, Top):
        return BOTTOM if neg else TOP
    if isinstance(f, Bottom):
        return TOP if neg else BOTTOM
    if neg:
        negated = getattr(f, "negated", None)
        return negated() if negated is not None else Not(f)
    return f

############### prenex ###############
Prefix = List[Tuple[type, str]]

def prenex_split(f: Formula) -> Tuple[Prefix, Formula]:
    # the quantifier prefix (outermost first) and the matrix of a prenex formula
    prefix: Prefix = []
    while isinstance(f, (Exists, ForAll)):
        prefix.append((type(f), f.var))
        f = f.body
    return prefix, f

def _wrap_prefix(prefix: Prefix, matrix: Formula) -> Formula:
    for (kind, var) in reversed(prefix):
        matrix = kind(var, matrix)
    return matrix

def to_prenex(f: Formula) -> Formula:
    """
    Equivalent formula with all the quantifiers in front. Bound variables
    clashing with free variables or with other bound variables are renamed
    to ``<name>_<k>``. Quantifier-free input is returned unchanged.
    """
    if is_quantifier_free(f):
        return f
    prefix, matrix = _prenex(to_nnf(f), set(free_variables(f)) | set(bound_variables(f)))
    return _wrap_prefix(prefix, matrix)

def _prenex(f: Formula, taken: Set[str]) -> Tuple[Prefix, Formula]:
    if isinstance(f, (Exists, ForAll)):
        prefix, matrix = _prenex(f.body, taken)
        return [(type(f), f.var)] + prefix, matrix
    if not isinstance(f, (And, Or)):
        return [], f

    parts = [_prenex(a, taken) for a in f.args]
    prefix: Prefix = []
    matrices = []
    used: Set[str] = set()
    for (i, (pre, mat)) in enumerate(parts):
        others_free: Set[str] = set()
        for (j, (opre, omat)) in enumerate(parts):
            if j != i:
                others_free |= set(free_variables(_wrap_prefix(opre, omat)))
        for (kind, var) in pre:
            new = var
            if var in used or var in others_free:
                new = fresh_name(var, taken | used | others_free)
                taken.add(new)
                mat = rename_free(mat, var, new)
            used.add(new)
            prefix.append((kind, new))
        matrices.append(mat)
    return prefix, (conjoin(matrices) if isinstance(f, And) else disjoin(matrices))

############### clause forms ###############
def dnf_clauses(f: Formula) -> List[Clause]:
    """
    The clauses (lists of literals) of a disjunctive normal form of the
    quantifier-free formula ``f``. ``[]`` is false and ``[[]]`` is true.
    """
    assert is_quantifier_free(f), "Clause forms need a quantifier-free formula"
    return _simplify_clauses(_dnf(to_nnf(f)))

def _dnf(f: Formula) -> List[Clause]:
    if isinstance(f, Or):
        return [c for a in f.args for c in _dnf(a)]
    if isinstance(f, And):
        res: List[Clause] = [[]]
        for a in f.args:
            sub = _dnf(a)
            if len(res) * len(sub) > config.CLOPEN_BUDGET:
                raise TooLarge(f"The disjunctive normal form exceeds {config.CLOPEN_BUDGET} clauses")
            res = [c + d for c in res for d in sub]
        return res
    if isinstance(f, Top):
        return [[]]
    if isinstance(f, Bottom):
        return []
    return [[f]]

def _simplify_clauses(clauses: Sequence[Clause]) -> List[Clause]:
    res: List[Clause] = []
    for clause in clauses:
        lits: Clause = []
        for lit in clause:
            if lit not in lits:
                lits.append(lit)
        if any(Not(lit) in lits for lit in lits):
            continue
        if len(lits) == 0:
            return [[]]
        if lits not in res:
            res.append(lits)
    return res

def cnf_clauses(f: Formula) -> List[Clause]:
    # dual of dnf_clauses: [] is true and [[]] is false
    return [[to_nnf(Not(lit)) for lit in clause] for clause in dnf_clauses(Not(f))]

def to_dnf(f: Formula) -> Formula:
    """
    Disjunction of conjunctions of literals equivalent to the quantifier-free
    formula ``f``.
    """
    return disjoin(conjoin(c) for c in dnf_clauses(f))

def to_cnf(f: Formula) -> Formula:
    return conjoin(disjoin(c) for c in cnf_clauses(f))
