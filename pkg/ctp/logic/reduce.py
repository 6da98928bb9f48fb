from __future__ import annotations
from dataclasses import dataclass
import math
from typing import List, Sequence, Tuple
from ctp.logic.formula import (Formula, Term, Atom, Not, And, Exists, TOP, BOTTOM, conjoin)
from ctp.utils.errors import NotConjunctive

__all__ = ["ReducedExistential", "reduce_conjunctive", "reduce_literals", "linear_form",
           "atom_from_form", "split_existential", "column_echelon"]

def column_echelon(A: Sequence[Sequence[int]], ncols: int = 0) \
        -> Tuple[List[List[int]], List[List[int]], List[Tuple[int, int]]]:
    """
    Column echelon form of an integer matrix by unimodular column operations,
    keeping the transform. The pivots drive the reduction of the equations.

    Arguments
    ---------
    * A: Sequence[Sequence[int]]
        The ``m x n`` matrix as a list of rows.
    * ncols: int
        The number of columns, only used when ``A`` has no rows.

    Returns
    -------
    * E: List[List[int]]
        ``E = A U``. Column ``j < r`` has its first nonzero entry at row
        ``pivots[j][0]``, strictly increasing in ``j``, and the columns from
        ``r = len(pivots)`` on are zero.
    * U: List[List[int]]
        The unimodular ``n x n`` transform.
    * pivots: List[Tuple[int, int]]
        The pairs ``(row, column)`` of the pivot entries.
    """
    m = len(A)
    n = len(A[0]) if m > 0 else ncols
    E = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots: List[Tuple[int, int]] = []

    def colop(dst: int, src: int, q: int):
        # column dst -= q * column src
        for row in E:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    def swap(a: int, b: int):
        for row in E:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    c = 0
    for i in range(m):
        if c >= n:
            break
        while True:
            nonzero = [k for k in range(c, n) if E[i][k] != 0]
            if len(nonzero) <= 1:
                break
            piv = min(nonzero, key=lambda k: abs(E[i][k]))
            for k in nonzero:
                if k != piv:
                    colop(k, piv, E[i][k] // E[i][piv])
        nonzero = [k for k in range(c, n) if E[i][k] != 0]
        if len(nonzero) == 1:
            swap(c, nonzero[0])
            pivots.append((i, c))
            c += 1
    return E, U, pivots

def linear_form(atom: Atom, variables: Sequence[str]) -> Tuple[List[int], Term]:
    """
    Write the atom as ``a . G = T`` with ``G`` the given variables: returns
    the coefficient vector ``a`` and the term ``T`` in the other symbols.
    """
    form = atom.form()
    coeffs = form.as_dict()
    a = [coeffs.get(v, 0) for v in variables]
    rest = Term(tuple((k, -c) for (k, c) in form.coeffs if k not in variables), form.flavor)
    return a, rest

def atom_from_form(form: Term) -> Atom:
    """
    The atom ``form = 0`` printed with positive coefficients on both sides and
    a positive leading coefficient, e.g. ``F1 = 2*F2`` for ``2*F2 - F1``.
    """
    if not form.is_zero and form.coeffs[0][1] < 0:
        form = -form
    pos = Term(tuple((k, c) for (k, c) in form.coeffs if c > 0), form.flavor)
    neg = Term(tuple((k, -c) for (k, c) in form.coeffs if c < 0), form.flavor)
    return Atom(pos, neg)

def _scaled_symbol(name: str, b: int, flavor: str) -> Term:
    return Term(((name, b),), flavor)

@dataclass(frozen=True)
class ReducedExistential:
    """
    A reduced conjunctive existential formula ``EX H_1 ... EX H_k. eqs & ineqs``:
    every bound variable occurs in at most one equation, every equation
    ``b H = T`` mentions a single bound variable, and the bound variables of
    the equations do not occur in the inequations.

    Attributes
    ----------
    * variables: Tuple[str, ...]
        The bound variables ``H``, named after the original ones.
    * equations: Tuple[Tuple[int, str, Term], ...]
        Triples ``(b, H, T)`` for ``b H = T`` with ``b > 0`` and ``T`` free of
        bound variables.
    * inequations: Tuple[Tuple[Tuple[int, ...], Term], ...]
        Pairs ``(c, S)`` for ``c . H != S``.
    * transform: Tuple[Tuple[int, ...], ...]
        The unimodular matrix ``U`` with ``G = U H``, ``G`` the original bound
        variables.
    """
    variables: Tuple[str, ...]
    equations: Tuple[Tuple[int, str, Term], ...]
    inequations: Tuple[Tuple[Tuple[int, ...], Term], ...]
    transform: Tuple[Tuple[int, ...], ...]

    def inequation_term(self, c: Sequence[int]) -> Term:
        return Term(tuple(zip(self.variables, c)), self.flavor)

    @property
    def flavor(self) -> str:
        for (_, _, t) in self.equations:
            return t.flavor
        for (_, s) in self.inequations:
            return s.flavor
        return "additive"

    def to_formula(self) -> Formula:
        lits: List[Formula] = []
        for (b, h, t) in self.equations:
            lits.append(Atom(t, _scaled_symbol(h, b, t.flavor)))
        for (c, s) in self.inequations:
            lits.append(Not(Atom(s, self.inequation_term(c))))
        res = conjoin(lits)
        for v in reversed(self.variables):
            res = Exists(v, res)
        return res

def split_existential(f: Formula) -> Tuple[List[str], List[Formula]]:
    # the bound variables and the literals of EX G_1 ... EX G_k. l_1 & ... & l_m
    variables = []
    while isinstance(f, Exists):
        variables.append(f.var)
        f = f.body
    lits = list(f.args) if isinstance(f, And) else ([] if f == TOP else [f])
    for lit in lits:
        body = lit.body if isinstance(lit, Not) else lit
        if not isinstance(body, Atom):
            raise NotConjunctive(f"{lit} is not a literal of a conjunctive existential formula")
    return variables, lits

def reduce_conjunctive(f: Formula) -> Tuple[List[Formula], ReducedExistential]:
    """
    Bring a conjunctive existential formula into reduced form.

    Arguments
    ---------
    * f: Formula
        ``EX G_1 ... EX G_k. l_1 & ... & l_m`` with every ``l_i`` an equation or
        an inequation.

    Returns
    -------
    * removables: List[Formula]
        Literals free of bound variables.
    * reduced: ReducedExistential
        The reduced formula. Over torsion-free abelian groups ``f`` is
        equivalent to the conjunction of the removables and ``reduced``.
    """
    variables, lits = split_existential(f)
    return reduce_literals(variables, lits)

def reduce_literals(variables: Sequence[str], lits: Sequence[Formula]) \
        -> Tuple[List[Formula], ReducedExistential]:
    variables = list(variables)
    k = len(variables)
    removables: List[Formula] = []
    rows: List[List[int]] = []
    rhs: List[Term] = []
    ineqs: List[Tuple[List[int], Term]] = []
    for lit in lits:
        negated = isinstance(lit, Not)
        atom = lit.body if isinstance(lit, Not) else lit
        if not isinstance(atom, Atom):
            raise NotConjunctive(f"{lit} is not an equation or an inequation")
        a, t = linear_form(atom, variables)
        if all(x == 0 for x in a):
            removables.append(lit)
        elif negated:
            ineqs.append((a, t))
        else:
            rows.append(a)
            rhs.append(t)

    E, U, pivots = column_echelon(rows, k)

    # clear the pivot columns outside their rows, R_i <- alpha R_i - beta R_(r_j)
    for (rj, j) in pivots:
        for i in range(len(E)):
            if i == rj or E[i][j] == 0:
                continue
            g = math.gcd(E[rj][j], E[i][j])
            alpha, beta = E[rj][j] // g, E[i][j] // g
            E[i] = [alpha * x - beta * y for (x, y) in zip(E[i], E[rj])]
            rhs[i] = rhs[i].scale(alpha) - rhs[rj].scale(beta)

    equations: List[Tuple[int, str, Term]] = []
    for i in range(len(E)):
        if any(x != 0 for x in E[i]):
            continue
        # 0 = T
        if not rhs[i].is_zero:
            removables.append(atom_from_form(rhs[i]))
    for (rj, j) in pivots:
        b, t = E[rj][j], rhs[rj]
        if b < 0:
            b, t = -b, -t
        equations.append((b, variables[j], t))

    inequations: List[Tuple[Tuple[int, ...], Term]] = []
    for (a, s) in ineqs:
        # a . G = a . U H
        gamma = [sum(a[r] * U[r][c] for r in range(k)) for c in range(k)]
        for (b, h, t) in equations:
            j = variables.index(h)
            if gamma[j] == 0:
                continue
            s = s.scale(b) - t.scale(gamma[j])
            gamma = [b * x for x in gamma]
            gamma[j] = 0
        if all(x == 0 for x in gamma):
            if s.is_zero:
                removables.append(BOTTOM)
            else:
                removables.append(Not(atom_from_form(s)))
        else:
            inequations.append((tuple(gamma), s))

    reduced = ReducedExistential(tuple(variables), tuple(equations), tuple(inequations),
                                 tuple(tuple(row) for row in U))
    return removables, reduced
