from __future__ import annotations
from dataclasses import dataclass
import functools
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union
import numpy as np
from ctp.arith.residue import mod_inv, p_valuation
from ctp.structure.base_structure import BaseStructure
from ctp.tree.base_tree import TreePresentation
from ctp.tree.clopen import ClopenSet, full_space
from ctp.tree.path import Path, PrefixFunctional, NeedMoreInput, EvalResult, apart_semidecide
from ctp.utils.config import config
from ctp.utils.datastruct import Label, SemiDecision
from ctp.utils.errors import ArityMismatch, DenominatorNotUnit, PrimeMismatch, TooLarge, ZeroRhs

__all__ = ["PadicAdditivePresentation", "DigitPresentation", "PadicInt", "LinearEquation",
           "NoSolution", "Unique", "AllSolutions", "SolveOutcome",
           "get_presentation", "get_digit_presentation",
           "from_integer", "from_rational", "from_digits", "add", "neg", "sub", "scalar_mul",
           "linear_combination", "digits_to_coherent", "coherent_to_digits",
           "solver_functional", "solve_linear", "clopen_of_equation", "ZpAdditiveStructure"]

class PadicInt(Path):
    """
    Element of Z_p as the path of its coherent residues: the label at level
    ``n`` is ``k_n`` with ``0 <= k_n < p^n`` and ``k_(n+1) == k_n mod p^n``.
    """
    def __init__(self, p: int, fcn: Callable[[int], Label]):
        super().__init__(fcn, get_presentation(p).name)
        self.p = p

    def __add__(self, other: PadicInt) -> PadicInt:
        return add(self, other)

    def __neg__(self) -> PadicInt:
        return neg(self)

    def __sub__(self, other: PadicInt) -> PadicInt:
        return sub(self, other)

    def __rmul__(self, c: int) -> PadicInt:
        return scalar_mul(c, self)

class PadicAdditivePresentation(TreePresentation):
    """
    The tree T_p^+ of coherent residue sequences, with addition, negation
    and zero computed level by level.
    """
    def __init__(self, p: int):
        self.p = p
        self._functionals = {
            "add": self._levelwise(lambda ks, m: (ks[0] + ks[1]) % m, 2, "add"),
            "neg": self._levelwise(lambda ks, m: (-ks[0]) % m, 1, "neg"),
            "zero": self._levelwise(lambda ks, m: 0, 0, "zero"),
        }

    @property
    def name(self) -> str:
        return f"T{self.p}+"

    @property
    def functionals(self) -> Dict[str, PrefixFunctional]:
        return self._functionals

    @property
    def coherent(self) -> bool:
        return True

    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        p = self.p
        prev = 0
        for (n, k) in enumerate(node, 1):
            if not (isinstance(k, int) and 0 <= k < p ** n and k % p ** (n - 1) == prev):
                return False
            prev = k
        return True

    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        n = len(node)
        k = node[-1] if n > 0 else 0
        return [k + j * self.p ** n for j in range(self.p)]

    def labels_at(self, level: int) -> Iterable[Label]:
        return range(self.p ** level)

    def restrict(self, label: Label, level: int, to_level: int) -> Label:
        assert isinstance(label, int)
        return label % self.p ** to_level

    def perturb(self, path: Path, level: int) -> Path:
        # adding p^level keeps the labels below level + 1
        p = self.p
        return PadicInt(p, lambda n: (path.label(n) + p ** level) % p ** n)

    def _levelwise(self, op: Callable[[Sequence[int], int], int], arity: int, name: str) \
            -> PrefixFunctional:
        p = self.p

        def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            if any(len(pref) < level for pref in prefixes):
                return NeedMoreInput(level)
            return op([pref[level - 1] for pref in prefixes], p ** level), (level if arity else 0)

        return PrefixFunctional(evaluator, arity, self.name, name,
                                make_path=lambda fcn, _: PadicInt(p, fcn))

class DigitPresentation(TreePresentation):
    """
    The tree T_p of base-p digit sequences ``(j_0, j_1, ...)`` with addition
    by carries.
    """
    def __init__(self, p: int):
        self.p = p

        def add_eval(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            if any(len(pref) < level for pref in prefixes):
                return NeedMoreInput(level)
            total = sum(_digits_value(pref[:level], p) for pref in prefixes)
            return (total // p ** (level - 1)) % p, level

        def neg_eval(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            if len(prefixes[0]) < level:
                return NeedMoreInput(level)
            total = (-_digits_value(prefixes[0][:level], p)) % p ** level
            return total // p ** (level - 1), level

        self._functionals = {
            "add": PrefixFunctional(add_eval, 2, self.name, "add"),
            "neg": PrefixFunctional(neg_eval, 1, self.name, "neg"),
            "zero": PrefixFunctional(lambda prefixes, level: (0, 0), 0, self.name, "zero"),
        }

    @property
    def name(self) -> str:
        return f"T{self.p}"

    @property
    def functionals(self) -> Dict[str, PrefixFunctional]:
        return self._functionals

    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        return all(isinstance(j, int) and 0 <= j < self.p for j in node)

    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        return range(self.p)

def _digits_value(digits: Sequence[Label], p: int) -> int:
    return sum(int(j) * p ** i for (i, j) in enumerate(digits))  # type: ignore

@functools.lru_cache(maxsize=None)
def get_presentation(p: int) -> PadicAdditivePresentation:
    return PadicAdditivePresentation(p)

@functools.lru_cache(maxsize=None)
def get_digit_presentation(p: int) -> DigitPresentation:
    return DigitPresentation(p)

############### constructors ###############
def from_integer(p: int, z: int) -> PadicInt:
    return PadicInt(p, lambda n: z % p ** n)

def from_rational(p: int, num: int, den: int = 1) -> PadicInt:
    q = Fraction(num, den)
    if q.denominator % p == 0:
        raise DenominatorNotUnit(f"{den} is not a unit in Z_{p}")
    return PadicInt(p, lambda n: q.numerator * mod_inv(q.denominator, p ** n).value % p ** n)

def from_digits(p: int, digit: Callable[[int], int]) -> PadicInt:
    # digit(i) is the coefficient of p^i
    return PadicInt(p, lambda n: sum(digit(i) * p ** i for i in range(n)))

############### group operations ###############
def _common_prime(xs: Sequence[PadicInt]) -> int:
    primes = set(x.p for x in xs)
    if len(primes) != 1:
        raise PrimeMismatch(f"Operands over different primes: {sorted(primes)}")
    return primes.pop()

def add(x: PadicInt, y: PadicInt) -> PadicInt:
    p = _common_prime([x, y])
    return get_presentation(p).functionals["add"](x, y)  # type: ignore

def neg(x: PadicInt) -> PadicInt:
    return get_presentation(x.p).functionals["neg"](x)  # type: ignore

def sub(x: PadicInt, y: PadicInt) -> PadicInt:
    return add(x, neg(y))

def scalar_mul(c: int, x: PadicInt) -> PadicInt:
    p = x.p
    return PadicInt(p, lambda n: c * x.label(n) % p ** n)

def linear_combination(coeffs: Sequence[int], xs: Sequence[PadicInt], p: Optional[int] = None) \
        -> PadicInt:
    # sum_i coeffs[i] * xs[i], evaluated levelwise
    if len(coeffs) != len(xs):
        raise ArityMismatch(f"{len(coeffs)} coefficients for {len(xs)} elements")
    if len(xs) > 0:
        p = _common_prime(xs)
    assert p is not None, "The prime must be given for an empty combination"
    pp = p
    return PadicInt(pp, lambda n: sum(a * x.label(n) for (a, x) in zip(coeffs, xs)) % pp ** n)

############### digit isomorphism ###############
def digits_to_coherent(p: int) -> PrefixFunctional:
    def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
        if len(prefixes[0]) < level:
            return NeedMoreInput(level)
        return _digits_value(prefixes[0][:level], p), level
    return PrefixFunctional(evaluator, 1, get_presentation(p).name, "digits_to_coherent",
                            make_path=lambda fcn, _: PadicInt(p, fcn))

def coherent_to_digits(p: int) -> PrefixFunctional:
    def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
        if len(prefixes[0]) < level:
            return NeedMoreInput(level)
        k = int(prefixes[0][level - 1])  # type: ignore
        kprev = int(prefixes[0][level - 2]) if level > 1 else 0  # type: ignore
        return (k - kprev) // p ** (level - 1), level
    return PrefixFunctional(evaluator, 1, get_digit_presentation(p).name, "coherent_to_digits")

############### linear equations ###############
@dataclass(frozen=True)
class LinearEquation:
    """
    The equation ``sum_i coeffs[i] * F_i = b * G`` in the unknown ``G``.
    """
    coeffs: Tuple[int, ...]
    b: int

    def normalized(self) -> LinearEquation:
        # same solutions with b >= 0
        if self.b < 0:
            return LinearEquation(tuple(-a for a in self.coeffs), -self.b)
        return self

@dataclass(frozen=True)
class NoSolution:
    pass

@dataclass(frozen=True, eq=False)
class Unique:
    solution: PadicInt

@dataclass(frozen=True, eq=False)
class AllSolutions:
    """
    Outcome of an equation with ``b = 0``: every ``G`` is a solution provided
    the left hand side ``lhs`` is zero, which can only be refuted.
    """
    lhs: PadicInt
    witness: PadicInt

    def refute(self, fuel: Optional[int] = None) -> SemiDecision:
        # a Witness means lhs != 0 and the equation has no solution
        return apart_semidecide(self.lhs, from_integer(self.lhs.p, 0), fuel)

SolveOutcome = Union[NoSolution, Unique, AllSolutions]

def solver_functional(eq: LinearEquation, p: int) -> PrefixFunctional:
    """
    The functional computing the solution of ``eq`` (``b != 0``) from the
    parameters: ``g(n) = c * F(n + e) / p^e mod p^n`` where ``e`` is the
    valuation of ``b`` and ``c`` inverts ``b / p^e`` modulo ``p^n``. The label
    of the solution at level ``n`` uses the parameters up to level ``n + e``.
    """
    eq = eq.normalized()
    if eq.b == 0:
        raise ZeroRhs("The equation has no unique solution when b = 0")
    e = p_valuation(eq.b, p)
    pe = p ** e
    unit = eq.b // pe

    def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
        use = level + e
        if any(len(pref) < use for pref in prefixes):
            return NeedMoreInput(use)
        fval = sum(a * int(pref[use - 1]) for (a, pref) in zip(eq.coeffs, prefixes)) % p ** use  # type: ignore
        assert fval % pe == 0, f"F({use}) = {fval} is not divisible by {pe}, the equation is unsolvable"
        m = p ** level
        return mod_inv(unit, m).value * (fval // pe) % m, use

    return PrefixFunctional(evaluator, len(eq.coeffs), get_presentation(p).name, "solve",
                            make_path=lambda fcn, _: PadicInt(p, fcn))

def solve_linear(eq: LinearEquation, f: Sequence[PadicInt], p: Optional[int] = None) -> SolveOutcome:
    """
    Solve ``sum_i a_i * f_i = b * G`` in Z_p.

    Arguments
    ---------
    * eq: LinearEquation
        The equation.
    * f: Sequence[PadicInt]
        The parameters, one per coefficient.
    * p: Optional[int]
        The prime, only needed if there are no parameters.

    Returns
    -------
    * SolveOutcome
        ``NoSolution`` if ``p^e`` does not divide ``F(e)``, ``Unique(g)``
        otherwise when ``b != 0``, ``AllSolutions`` (conditional on the left
        hand side being 0) when ``b = 0``.
    """
    if len(f) != len(eq.coeffs):
        raise ArityMismatch(f"The equation has {len(eq.coeffs)} parameters, got {len(f)}")
    if len(f) > 0:
        fp = _common_prime(f)
        if p is not None and p != fp:
            raise PrimeMismatch(f"Parameters over Z_{fp} for an equation over Z_{p}")
        p = fp
    assert p is not None, "The prime must be given for an equation without parameters"
    eq = eq.normalized()
    lhs = linear_combination(eq.coeffs, f, p)
    if eq.b == 0:
        return AllSolutions(lhs, from_integer(p, 0))
    e = p_valuation(eq.b, p)
    if e > 0 and lhs.label(e) % p ** e != 0:
        return NoSolution()
    return Unique(solver_functional(eq, p)(*f))  # type: ignore

def clopen_of_equation(eq: LinearEquation, p: int) -> ClopenSet:
    """
    The parameter tuples for which ``eq`` is solvable: the residue tuples
    ``r`` at level ``e`` with ``p^e | sum_i a_i * r_i``.
    """
    eq = eq.normalized()
    if eq.b == 0:
        raise ZeroRhs("Solvability with b = 0 is not a clopen condition")
    n = len(eq.coeffs)
    e = p_valuation(eq.b, p)
    if e == 0 or n == 0:
        return full_space(n)
    pe = p ** e
    if pe ** n > config.CLOPEN_BUDGET:
        raise TooLarge(f"The solvability set has {pe}^{n} candidate label tuples")
    grid = np.indices((pe,) * n).reshape(n, -1).T
    # reduced coefficients keep the products inside int64
    coeffs = np.asarray([a % pe for a in eq.coeffs], dtype=np.int64)
    mask = (grid @ coeffs) % pe == 0
    entries = tuple((e, tuple(int(r) for r in row)) for row in grid[mask])
    return ClopenSet(n, entries)

############### structure ###############
class ZpAdditiveStructure(BaseStructure):
    """
    Z_p^+ presented by T_p^+.
    """
    def __init__(self, p: int):
        self.p = p

    @property
    def name(self) -> str:
        return "zp+"

    @property
    def presentation(self) -> TreePresentation:
        return get_presentation(self.p)

    @property
    def tower_prime(self) -> int:
        return self.p

    def from_integer(self, z: int) -> Path:
        return from_integer(self.p, z)

    def from_rational(self, num: int, den: int) -> Path:
        return from_rational(self.p, num, den)

    def as_element(self, x: Path) -> PadicInt:
        # plain paths of T_p^+, e.g. the coordinates of a product
        if isinstance(x, PadicInt):
            if x.p != self.p:
                raise PrimeMismatch(f"A Z_{x.p} element in Z_{self.p}")
            return x
        return PadicInt(self.p, x.label)

    def combination(self, coeffs: Sequence[int], paths: Sequence[Path]) -> Path:
        return linear_combination(coeffs, [self.as_element(x) for x in paths], self.p)

    def split_coefficient(self, b: int) -> Tuple[int, int]:
        pe = self.p ** p_valuation(b, self.p)
        return pe, b // pe

    def normalize_modulus(self, m: int) -> int:
        return self.p ** p_valuation(m, self.p)

    def residue(self, x: Path, m: int) -> int:
        n = p_valuation(m, self.p)
        return int(x.label(n)) if n > 0 else 0  # type: ignore

    def solve(self, coeffs: Sequence[int], b: int, paths: Sequence[Path]) -> Optional[Path]:
        res = solve_linear(LinearEquation(tuple(coeffs), b), [self.as_element(x) for x in paths],
                           p=self.p)
        return res.solution if isinstance(res, Unique) else None
