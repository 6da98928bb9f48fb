from fractions import Fraction
from typing import Mapping, Sequence, Tuple
from hypothesis import strategies as st
from ctp.logic.formula import (Formula, Term, Atom, Not, And, Or, Exists, ForAll, Top, Bottom,
                               TOP, BOTTOM)
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path

__all__ = ["assert_coherent", "assert_valid_prefix", "assert_same_prefix", "primes",
           "small_ints", "p_units", "rationals_for", "coefficient_lists", "rational_residue",
           "linear_terms", "additive_formulas", "conjunctive_existentials", "brute_force_truth"]

SMALL_PRIMES = [2, 3, 5, 7]

# strategies
primes = st.sampled_from(SMALL_PRIMES)
small_ints = st.integers(min_value=-20, max_value=20)
coefficient_lists = st.lists(small_ints, min_size=1, max_size=3)

def p_units(p: int):
    # integers not divisible by p
    return st.integers(min_value=-500, max_value=500).filter(lambda z: z % p != 0)

def rationals_for(p: int):
    # rationals with a denominator invertible in Z_p
    return st.builds(Fraction, st.integers(min_value=-200, max_value=200), p_units(p)) \
        .filter(lambda q: q.denominator % p != 0)

# assertion helpers
def assert_coherent(path: Path, p: int, n: int):
    """
    Assert the labels of ``path`` up to level ``n`` are residues modulo
    ``p^l`` restricting to each other.
    """
    prev = 0
    for l in range(1, n + 1):
        k = path.label(l)
        assert isinstance(k, int), f"Label {k!r} at level {l} is not an integer"
        assert 0 <= k < p ** l, f"Label {k} at level {l} is not reduced modulo {p}^{l}"
        assert k % p ** (l - 1) == prev, f"Label {k} at level {l} does not restrict to {prev}"
        prev = k

def assert_valid_prefix(path: Path, presentation: TreePresentation, n: int):
    prefix = path.prefix(n)
    assert presentation.is_valid(prefix), f"{prefix} is not a node of {presentation.name}"

def assert_same_prefix(x: Path, y: Path, n: int):
    assert x.prefix(n) == y.prefix(n), f"{x.prefix(n)} != {y.prefix(n)}"

def rational_residue(q: Fraction, m: int) -> int:
    # q mod m for a denominator invertible modulo m
    return q.numerator * pow(q.denominator, -1, m) % m

# formula strategies
def linear_terms(names: Sequence[str], bound: int = 3):
    return st.lists(st.tuples(st.sampled_from(list(names)), st.integers(-bound, bound)),
                    max_size=3).map(lambda cs: Term(tuple(cs)))

def additive_formulas(params: Sequence[str] = (), variables: Sequence[str] = ("F", "G"),
                      depth: int = 3):
    """
    Strategy of additive formulas whose free symbols are among ``params``,
    binding the names in ``variables`` (each at most once on every branch).
    Without parameters it draws sentences starting with a quantifier.
    """
    if len(params) == 0:
        return _quantified((), tuple(variables), depth)
    return _formulas(tuple(params), tuple(variables), depth)

def _formulas(scope: Tuple[str, ...], pool: Tuple[str, ...], depth: int):
    if len(scope) > 0:
        leaf = st.builds(Atom, linear_terms(scope), linear_terms(scope))
    else:
        leaf = st.sampled_from([TOP, BOTTOM])
    if depth == 0:
        return leaf
    sub = _formulas(scope, pool, depth - 1)
    options = [leaf, sub.map(Not), st.tuples(sub, sub).map(And), st.tuples(sub, sub).map(Or)]
    if len(pool) > 0:
        options.append(_quantified(scope, pool, depth))
    return st.one_of(options)

def _quantified(scope: Tuple[str, ...], pool: Tuple[str, ...], depth: int):
    var = pool[0]
    body = _formulas(scope + (var,), pool[1:], depth - 1)
    return st.tuples(st.sampled_from([Exists, ForAll]), body).map(lambda qb: qb[0](var, qb[1]))

def conjunctive_existentials(params: Sequence[str] = ("F", "c"),
                             variables: Sequence[str] = ("G", "H")):
    """
    Strategy of ``EX G. EX H. l_1 & ... & l_m`` with up to two equations
    whose unknowns have coefficients in {-1, 0, 1}, so that every multiplier
    of the reduction is a unit modulo 3, and up to two inequations.
    """
    params = list(params)
    variables = list(variables)

    def literal(unknown_bound: int, negated: bool):
        unknowns = st.lists(st.integers(-unknown_bound, unknown_bound), min_size=len(variables),
                            max_size=len(variables))
        atom = st.builds(lambda a, lhs, rhs: Atom(lhs + Term(tuple(zip(variables, a))), rhs),
                         unknowns, linear_terms(params, 4), linear_terms(params, 4))
        return atom.map(Not) if negated else atom

    lits = st.tuples(st.lists(literal(1, False), max_size=2),
                     st.lists(literal(3, True), max_size=2)).map(lambda t: t[0] + t[1])
    lits = lits.filter(lambda ls: len(ls) > 0)

    def build(ls):
        f: Formula = And(tuple(ls))
        for v in reversed(variables):
            f = Exists(v, f)
        return f
    return lits.map(build)

# oracle
def brute_force_truth(f: Formula, modulus: int, env: Mapping[str, int]) -> bool:
    """
    Truth of ``f`` in Z/modulus Z by direct recursion on the formula, with
    every quantifier enumerated.
    """
    if isinstance(f, Atom):
        return sum(c * env[k] for (k, c) in f.form().coeffs) % modulus == 0
    if isinstance(f, Not):
        return not brute_force_truth(f.body, modulus, env)
    if isinstance(f, And):
        return all(brute_force_truth(a, modulus, env) for a in f.args)
    if isinstance(f, Or):
        return any(brute_force_truth(a, modulus, env) for a in f.args)
    if isinstance(f, Exists):
        return any(brute_force_truth(f.body, modulus, {**env, f.var: x}) for x in range(modulus))
    if isinstance(f, ForAll):
        return all(brute_force_truth(f.body, modulus, {**env, f.var: x}) for x in range(modulus))
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    raise TypeError(f"Cannot evaluate {f!r}")
