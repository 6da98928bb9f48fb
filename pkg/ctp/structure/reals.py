from __future__ import annotations
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
import functools
import itertools
import math
import threading
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import sympy
from ctp.logic.formula import (Formula, RingAtom, Not, And, Or, Exists, ForAll, Top, Bottom)
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path, PrefixFunctional, NeedMoreInput, EvalResult
from ctp.utils.config import config
from ctp.utils.datastruct import Label, Unknown
from ctp.utils.errors import ArityMismatch, FuelExhausted, LabelUnavailable, UnsupportedFormula
from ctp.utils.misc import logger, memoize_method

__all__ = ["FastCauchyReal", "RealPresentation", "get_real_presentation", "Apart",
           "real_from_rational", "real_from_decimal", "real_add", "real_neg", "real_sub",
           "real_mul", "real_pow", "newton_sqrt", "equiv_semidecide", "evaluate_polynomial",
           "PolynomialDiagram", "derive_polynomial_diagram", "Sign", "SignResult",
           "sign_decide", "decide_qf_real"]

RationalLike = Union[int, Fraction]

class FastCauchyReal(Path):
    """
    A real number as a fast-converging Cauchy sequence of rationals: the label
    ``q_n`` at level ``n`` satisfies ``|q_n - q_k| <= 2^-n`` for ``n < k``, so
    that ``|q_n - x| <= 2^-n`` for the limit ``x``.
    """
    def __init__(self, fcn):
        super().__init__(fcn, get_real_presentation().name)

    def approx(self, n: int) -> Fraction:
        return Fraction(self.label(n))  # type: ignore

    def __add__(self, other: FastCauchyReal) -> FastCauchyReal:
        return real_add(self, other)

    def __neg__(self) -> FastCauchyReal:
        return real_neg(self)

    def __sub__(self, other: FastCauchyReal) -> FastCauchyReal:
        return real_sub(self, other)

    def __mul__(self, other: FastCauchyReal) -> FastCauchyReal:
        return real_mul(self, other)

def _ceil_abs(q: Fraction) -> int:
    return -((-abs(q.numerator)) // q.denominator)

class RealPresentation(TreePresentation):
    """
    The tree T_R of fast-converging rational sequences. It presents the reals
    up to the equivalence ``x ~ y`` iff ``|x_n - y_n| <= 2 / 2^n`` for all
    ``n``, which the functionals respect.
    """
    def __init__(self):
        def make(fcn, _):
            return FastCauchyReal(fcn)

        def add_eval(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            use = level + 2
            if any(len(pref) < use for pref in prefixes):
                return NeedMoreInput(use)
            return Fraction(prefixes[0][use - 1]) + Fraction(prefixes[1][use - 1]), use  # type: ignore

        def neg_eval(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            if len(prefixes[0]) < level:
                return NeedMoreInput(level)
            return -Fraction(prefixes[0][level - 1]), level  # type: ignore

        def mul_eval(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            if any(len(pref) < 1 for pref in prefixes):
                return NeedMoreInput(1)
            bound = sum(_ceil_abs(Fraction(pref[0])) for pref in prefixes) + 2  # type: ignore
            use = level + 2 + bound.bit_length()
            if any(len(pref) < use for pref in prefixes):
                return NeedMoreInput(use)
            return Fraction(prefixes[0][use - 1]) * Fraction(prefixes[1][use - 1]), use  # type: ignore

        self._functionals = {
            "add": PrefixFunctional(add_eval, 2, self.name, "add", make_path=make),
            "neg": PrefixFunctional(neg_eval, 1, self.name, "neg", make_path=make),
            "mul": PrefixFunctional(mul_eval, 2, self.name, "mul", make_path=make),
            "zero": PrefixFunctional(lambda prefixes, level: (Fraction(0), 0), 0, self.name,
                                     "zero", make_path=make),
            "one": PrefixFunctional(lambda prefixes, level: (Fraction(1), 0), 0, self.name,
                                    "one", make_path=make),
        }

    @property
    def name(self) -> str:
        return "TR"

    @property
    def functionals(self) -> Dict[str, PrefixFunctional]:
        return self._functionals

    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        if not all(isinstance(q, (int, Fraction)) for q in node):
            return False
        return all(abs(Fraction(node[j]) - Fraction(node[k])) <= Fraction(1, 2 ** (j + 1))  # type: ignore
                   for j in range(len(node)) for k in range(j + 1, len(node)))

    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        # the rationals by increasing denominator, those keeping the node valid
        if len(node) > 0:
            yield Fraction(node[-1])  # type: ignore
        for d in itertools.count(1):
            for num in range(-d * d, d * d + 1):
                q = Fraction(num, d)
                if q.denominator == d and self.is_valid(tuple(node) + (q,)):
                    yield q

    def perturb(self, path: Path, level: int) -> Path:
        return FastCauchyReal(super().perturb(path, level).label)

@functools.lru_cache(maxsize=None)
def get_real_presentation() -> RealPresentation:
    return RealPresentation()

############### constructors and arithmetic ###############
def real_from_rational(q: RationalLike) -> FastCauchyReal:
    q = Fraction(q)
    return FastCauchyReal(lambda n: q)

def real_from_decimal(text: str) -> FastCauchyReal:
    """
    The real whose decimal expansion starts with ``text`` (e.g. the contents
    of a digits file). Levels needing more digits than available raise
    LabelUnavailable.
    """
    text = "".join(text.split())
    neg = text.startswith("-")
    body = text.lstrip("+-")
    ipart, _, fpart = body.partition(".")
    if not (ipart + fpart).isdigit():
        raise ValueError(f"{text[:20]!r} is not a decimal expansion")

    def fcn(n: int) -> Fraction:
        # truncating after d digits errs by at most 10^-d <= 2^-n
        d = 0
        while 10 ** d < 2 ** n:
            d += 1
        if d > len(fpart):
            raise LabelUnavailable(f"Level {n} needs {d} decimals, only {len(fpart)} given")
        q = Fraction(int(ipart or "0")) + Fraction(int(fpart[:d] or "0"), 10 ** d)
        return -q if neg else q

    return FastCauchyReal(fcn)

def real_add(x: Path, y: Path) -> FastCauchyReal:
    return get_real_presentation().functionals["add"](x, y)  # type: ignore

def real_neg(x: Path) -> FastCauchyReal:
    return get_real_presentation().functionals["neg"](x)  # type: ignore

def real_sub(x: Path, y: Path) -> FastCauchyReal:
    return real_add(x, real_neg(y))

def real_mul(x: Path, y: Path) -> FastCauchyReal:
    return get_real_presentation().functionals["mul"](x, y)  # type: ignore

def real_pow(x: Path, e: int) -> FastCauchyReal:
    assert e >= 0, "Only nonnegative powers of reals are available"
    res: Path = real_from_rational(1)
    for _ in range(e):
        res = real_mul(res, x)
    return res  # type: ignore

def newton_sqrt(k: int) -> FastCauchyReal:
    """
    The square root of the nonnegative integer ``k`` by Newton iterations
    from above, starting at ``s + 1/2`` (or ``s + 1``) with ``s = isqrt(k)``.
    The label at level ``n`` is the first iterate ``x`` with
    ``(x^2 - k) / (x + s) <= 2^-(n+1)``, which bounds ``x - sqrt(k)``.
    """
    if k < 0:
        raise ValueError(f"newton_sqrt needs a nonnegative integer, got {k}")
    s = math.isqrt(k)
    if s * s == k:
        return real_from_rational(s)
    half = Fraction(2 * s + 1, 2)
    iterates = [half if half * half >= k else Fraction(s + 1)]
    lock = threading.Lock()

    def fcn(n: int) -> Fraction:
        tol = Fraction(1, 2 ** (n + 1))
        with lock:
            i = 0
            while True:
                if i == len(iterates):
                    x = iterates[-1]
                    iterates.append((x + k / x) / 2)
                x = iterates[i]
                if (x * x - k) / (x + s) <= tol:
                    return x
                i += 1

    return FastCauchyReal(fcn)

############### semidecisions ###############
@dataclass(frozen=True)
class Apart:
    """
    The two reals differ: ``|x_n - y_n| > 2 / 2^n`` at ``level`` and ``sign``
    is the sign of ``x - y``.
    """
    level: int
    sign: int

def equiv_semidecide(x: Path, y: Path, fuel: Optional[int] = None) -> Union[Apart, Unknown]:
    fuel = config.DEFAULT_FUEL if fuel is None else fuel
    for n in range(1, fuel + 1):
        d = Fraction(x.label(n)) - Fraction(y.label(n))  # type: ignore
        if abs(d) > Fraction(2, 2 ** n):
            return Apart(n, 1 if d > 0 else -1)
    return Unknown(fuel)

def evaluate_polynomial(h: sympy.Expr, values: Mapping[str, Path]) -> FastCauchyReal:
    """
    The real value of the polynomial ``h`` (rational coefficients) at the
    given reals, built from the presentation's functionals.
    """
    h = sympy.expand(h)
    names = sorted(str(s) for s in h.free_symbols)
    missing = [k for k in names if k not in values]
    if len(missing) > 0:
        raise ArityMismatch(f"No value given for {missing[0]}")
    if len(names) == 0:
        return real_from_rational(Fraction(str(sympy.Rational(h))))
    poly = sympy.Poly(h, *[sympy.Symbol(k) for k in names])
    res: Path = real_from_rational(0)
    for (powers, coeff) in poly.terms():
        term: Path = real_from_rational(Fraction(str(sympy.Rational(coeff))))
        for (k, e) in zip(names, powers):
            if e > 0:
                term = real_mul(term, real_pow(values[k], e))
        res = real_add(res, term)
    return res  # type: ignore

############### diagrams ###############
class PolynomialDiagram(object):
    """
    Positive atomic diagram of a tuple of reals: the ideal of the rational
    polynomials vanishing at it, given by generators.

    Arguments
    ---------
    * names: Sequence[str]
        The parameter symbols.
    * generators: Sequence[sympy.Expr]
        Generators of the ideal.
    * complete: bool
        True if the generators span every polynomial relation.
    """
    def __init__(self, names: Sequence[str], generators: Sequence[sympy.Expr] = (),
                 complete: bool = True):
        self.names = tuple(names)
        self.generators = tuple(sympy.expand(g) for g in generators)
        self.complete = complete

    @memoize_method
    def _basis(self):
        return sympy.groebner(list(self.generators), *[sympy.Symbol(k) for k in self.names],
                              order="lex")

    def contains(self, h: sympy.Expr) -> bool:
        h = sympy.expand(h)
        unknown = [str(s) for s in h.free_symbols if str(s) not in self.names]
        if len(unknown) > 0:
            raise ArityMismatch(f"The diagram has no parameter {unknown[0]}")
        if h == 0:
            return True
        if len(self.generators) == 0 or len(self.names) == 0:
            return False
        return bool(self._basis().contains(h))

def _squarefree_split(k: int) -> Tuple[int, Dict[int, int]]:
    # k = m^2 * prod(primes), returns m and the primes with odd exponent
    m = 1
    odd: Dict[int, int] = {}
    for (q, e) in sympy.factorint(k).items():
        m *= int(q) ** (e // 2)
        if e % 2 == 1:
            odd[int(q)] = 1
    return m, odd

def derive_polynomial_diagram(values: Mapping[str, Tuple[str, RationalLike]]) -> PolynomialDiagram:
    """
    The complete diagram of parameters given symbolically, ``("rat", q)`` or
    ``("sqrt", k)``. Square roots are written over the square roots of the
    primes, whose relations are only ``z_q^2 = q``, and the auxiliary
    symbols are eliminated.
    """
    names = sorted(values)
    gens: List[sympy.Expr] = []
    aux: Dict[int, sympy.Symbol] = {}
    for name in names:
        kind, v = values[name]
        c = sympy.Symbol(name)
        if kind == "rat":
            q = Fraction(v)
            gens.append(q.denominator * c - q.numerator)
        elif kind == "sqrt":
            m, odd = _squarefree_split(int(v))
            if int(v) == 0:
                gens.append(c)
                continue
            prod = sympy.Integer(m)
            for q in sorted(odd):
                if q not in aux:
                    aux[q] = sympy.Symbol(f"_z{q}")
                prod = prod * aux[q]
            gens.append(c - prod)
        else:
            raise ValueError(f"Unknown parameter kind {kind}")
    if len(aux) == 0:
        return PolynomialDiagram(names, gens)
    gens += [aux[q] ** 2 - q for q in sorted(aux)]
    zs = [aux[q] for q in sorted(aux)]
    basis = sympy.groebner(gens, *zs, *[sympy.Symbol(k) for k in names], order="lex")
    elim = [g for g in basis.exprs if not (g.free_symbols & set(zs))]
    return PolynomialDiagram(names, elim)

############### sign decision ###############
class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

@dataclass(frozen=True)
class SignResult:
    """
    Attributes
    ----------
    * sign: Sign
        The sign of ``h`` at the parameters.
    * level: int
        The level whose approximation certified a nonzero sign, 0 for ZERO.
    * certificate: str
        The diagram atom or the bound that decided it.
    """
    sign: Sign
    level: int
    certificate: str

def sign_decide(h: sympy.Expr, values: Mapping[str, Path], diagram: PolynomialDiagram,
                fuel: Optional[int] = None) -> SignResult:
    """
    The sign of the polynomial ``h`` at the parameters. Zero is certified by
    the diagram, a nonzero sign by an approximation ``a_n`` of ``h`` with
    ``|a_n| > 2^-n``.

    Arguments
    ---------
    * h: sympy.Expr
        The polynomial in the parameter symbols.
    * values: Mapping[str, Path]
        The reals.
    * diagram: PolynomialDiagram
        The polynomial relations of the reals.
    * fuel: Optional[int]
        The last level looked at when the diagram is not complete.

    Returns
    -------
    * SignResult
        The sign with its certificate. Raises FuelExhausted if no level up to
        the cap (``config.SIGN_MAX_LEVEL`` for a complete diagram) settles it.
    """
    h = sympy.expand(h)
    if diagram.contains(h):
        return SignResult(Sign.ZERO, 0, f"0 = {h}")
    cap = config.SIGN_MAX_LEVEL if diagram.complete else \
        (config.DEFAULT_FUEL if fuel is None else fuel)
    value = evaluate_polynomial(h, values)
    for n in range(1, cap + 1):
        a = value.approx(n)
        eps = Fraction(1, 2 ** n)
        if a > eps:
            logger.log(f"sign of {h}: positive at level {n}", vlevel=1)
            return SignResult(Sign.POSITIVE, n, f"h_{n} = {a} > 2^-{n}")
        if a < -eps:
            logger.log(f"sign of {h}: negative at level {n}", vlevel=1)
            return SignResult(Sign.NEGATIVE, n, f"h_{n} = {a} < -2^-{n}")
    raise FuelExhausted(f"The sign of {h} is not settled up to level {cap}", cap)

def decide_qf_real(f: Formula, values: Mapping[str, Path], diagram: PolynomialDiagram,
                   fuel: Optional[int] = None) -> bool:
    """
    Truth of a quantifier-free ring formula at the given reals, every atom
    being reduced to the sign of ``lhs - rhs``.
    """
    if isinstance(f, RingAtom):
        res = sign_decide(f.lhs - f.rhs, values, diagram, fuel)
        if f.rel == "=":
            return res.sign == Sign.ZERO
        return res.sign == Sign.NEGATIVE
    if isinstance(f, Not):
        return not decide_qf_real(f.body, values, diagram, fuel)
    if isinstance(f, And):
        return all(decide_qf_real(a, values, diagram, fuel) for a in f.args)
    if isinstance(f, Or):
        return any(decide_qf_real(a, values, diagram, fuel) for a in f.args)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, (Exists, ForAll)):
        raise UnsupportedFormula("Only quantifier-free formulas are decided over the reals")
    raise UnsupportedFormula(f"{f} is not a ring formula")
