from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
import math
import re
from typing import Any, List, Mapping, Sequence, Tuple, Union
import sympy
from sympy import isprime
from ctp.logic.formula import Atom
from ctp.logic.lattice import RelationLattice, load_diagram
from ctp.logic.linalg import integer_kernel, lattice_basis
from ctp.logic.parser import parse
from ctp.logic.reduce import linear_form
from ctp.qe.decide import Domain, Diagram, FiniteProduct, UnitGroup
from ctp.structure.base_structure import BaseStructure
from ctp.structure.factory import get_structure
from ctp.structure.reals import (PolynomialDiagram, derive_polynomial_diagram, newton_sqrt,
                                 real_from_decimal, real_from_rational)
from ctp.structure.zhat import ZhatStructure, override
from ctp.structure.zp_additive import PadicInt, ZpAdditiveStructure
from ctp.structure.zp_units import UnitLabelPath, UnitPadic, iso_forward, torsion_order
from ctp.tree.path import Path
from ctp.tree.product import product_finite, project, splice
from ctp.utils.errors import (DenominatorNotUnit, FormulaSyntaxError, NotAUnit,
                              PathExprTypeError)
from ctp.utils.misc import get_option, natural_key

__all__ = ["RealField", "ParsedPath", "get_domain", "formula_flavor", "parse_path_expr",
           "derive_diagram", "load_parameter_diagram"]

@dataclass(frozen=True)
class RealField:
    # the reals, decided atom by atom through signs
    @property
    def name(self) -> str:
        return "real"

AnyDomain = Union[Domain, RealField]
# exact value of a constructive parameter: a rational, ("sqrt", k) for a real
# square root, None when nothing is known beyond its labels
Exact = Union[Fraction, Tuple[str, int], None]

@dataclass(frozen=True, eq=False)
class ParsedPath:
    """
    A parameter given by a path expression.

    Attributes
    ----------
    * path: Path
        The element, a path of the presentation of the domain.
    * exact: Fraction, Tuple[str, int] or None
        What is known of the element symbolically, used to derive the
        relations between the parameters.
    """
    path: Path
    exact: Exact = None

def get_domain(name: str, primes: Sequence[int] = ()) -> AnyDomain:
    """
    The domain named on the command line.

    Arguments
    ---------
    * name: str
        ``"zp+"``, ``"zpx"``, ``"zhat"``, ``"prod"`` or ``"real"``.
    * primes: Sequence[int]
        The prime of ``zp+`` and ``zpx``, the primes of the factors
        ``Z_p^+`` of ``prod``.
    """
    def one_prime() -> int:
        if len(primes) != 1:
            raise ValueError(f"The structure {name} needs exactly one prime, got {list(primes)}")
        return primes[0]

    constructors = {
        "zp+": lambda: get_structure("zp+", one_prime()),
        "zhat": lambda: get_structure("zhat"),
        "zpx": lambda: UnitGroup(_checked_prime(one_prime())),
        "prod": lambda: FiniteProduct(tuple(get_structure("zp+", q) for q in primes))
        if len(primes) > 0 else _no_factor(),
        "real": RealField,
    }
    return get_option("structure", name, constructors)()

def _checked_prime(p: int) -> int:
    if not isprime(p):
        raise ValueError(f"zpx needs a prime, got {p}")
    return p

def _no_factor():
    raise ValueError("A product needs at least one prime")

def formula_flavor(domain: AnyDomain) -> str:
    if isinstance(domain, UnitGroup):
        return "multiplicative"
    if isinstance(domain, RealField):
        return "ring"
    return "additive"

############### syntax ###############
_HEAD = re.compile(r"\s*([a-z_]+)\s*\(", re.ASCII)

@dataclass(frozen=True)
class _Call:
    name: str
    groups: Tuple[Tuple[str, ...], ...]  # the ";"-separated groups of ","-separated arguments
    offset: int

def _split_top(text: str, sep: str, offset: int) -> List[Tuple[str, int]]:
    # split at the separators outside parentheses, keeping the offsets
    parts = []
    depth = 0
    start = 0
    for (i, ch) in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormulaSyntaxError(offset + i, "unbalanced ')'")
        elif ch == sep and depth == 0:
            parts.append((text[start:i], offset + start))
            start = i + 1
    if depth != 0:
        raise FormulaSyntaxError(offset + len(text), "missing ')'")
    parts.append((text[start:], offset + start))
    return parts

def _parse_call(text: str, offset: int = 0) -> _Call:
    m = _HEAD.match(text)
    stripped = text.rstrip()
    if m is None or not stripped.endswith(")"):
        raise FormulaSyntaxError(offset, f"expected name(arguments), got {text.strip()!r}")
    inner = stripped[m.end():-1]
    inner_offset = offset + m.end()
    groups = []
    for (group, goff) in _split_top(inner, ";", inner_offset):
        args = tuple(a.strip() for (a, _) in _split_top(group, ",", goff))
        groups.append(() if args == ("",) else args)
    return _Call(m.group(1), tuple(groups), inner_offset)

def _int_arg(s: str, offset: int) -> int:
    try:
        return int(s)
    except ValueError:
        raise FormulaSyntaxError(offset, f"{s!r} is not an integer")

def _expect_args(call: _Call, shape: Sequence[int]):
    got = [len(g) for g in call.groups]
    if got != list(shape):
        raise FormulaSyntaxError(call.offset, f"{call.name} takes the arguments "
                                 f"{_shape_text(shape)}, got {_shape_text(got)}")

def _shape_text(shape: Sequence[int]) -> str:
    return "; ".join(str(n) for n in shape)

############### evaluation ###############
def parse_path_expr(text: str, domain: AnyDomain) -> ParsedPath:
    """
    Evaluate a path expression in a domain.

    * ``int(z)`` and ``rat(a, b)``: integers and rationals, the denominator a
      unit of the domain,
    * ``solve(EQ; e1, ..., ek)``: the unique ``G`` solving the equation
      ``EQ`` in ``G``, its other symbols taking the values ``e1, ..., ek``
      in natural order,
    * ``unit(p; x, e)``: the unit of Z_p^x with torsion part ``x`` and free
      part the Z_p^+ expression ``e``,
    * ``override(q, c; e)``: the profinite integer ``e`` with its ``q``
      coordinate replaced by the Z_q^+ expression ``c``,
    * ``newton_sqrt(k)`` and ``file(path)``: a real square root and a real
      read from a file of decimals.

    Arguments
    ---------
    * text: str
        The expression.
    * domain: AnyDomain
        The domain of the value, from ``get_domain``.

    Returns
    -------
    * ParsedPath
        The path with its exact value when there is one. Raises
        ``PathExprTypeError`` if the expression does not denote an element
        of the domain.
    """
    return _evaluate(_parse_call(text), domain)

def _evaluate(call: _Call, domain: AnyDomain) -> ParsedPath:
    forms = {
        "int": _eval_int,
        "rat": _eval_rat,
        "solve": _eval_solve,
        "unit": _eval_unit,
        "override": _eval_override,
        "newton_sqrt": _eval_sqrt,
        "file": _eval_file,
    }
    if call.name not in forms:
        raise FormulaSyntaxError(call.offset, f"unknown path expression {call.name}, "
                                 f"the available ones are {list(forms)}")
    return forms[call.name](call, domain)

def _mismatch(call: _Call, domain: AnyDomain) -> PathExprTypeError:
    return PathExprTypeError(f"{call.name}(...) is not an element of {domain.name}")

def _rational(q: Fraction, domain: AnyDomain) -> Path:
    if isinstance(domain, BaseStructure):
        return domain.from_rational(q.numerator, q.denominator)
    if isinstance(domain, UnitGroup):
        p = domain.p
        if q.numerator % p == 0 or q.denominator % p == 0:
            raise NotAUnit(f"{q} is not a unit of Z_{p}")
        return UnitLabelPath(p, lambda n: q.numerator * pow(q.denominator, -1, p ** n) % p ** n)
    if isinstance(domain, FiniteProduct):
        product = product_finite([s.presentation for s in domain.factors])
        return splice([_rational(q, s) for s in domain.factors], product)
    return real_from_rational(q)

def _from_exact(q: Fraction, call: _Call, domain: AnyDomain) -> ParsedPath:
    try:
        return ParsedPath(_rational(q, domain), q)
    except (DenominatorNotUnit, NotAUnit) as e:
        raise PathExprTypeError(f"{call.name}(...) in {domain.name}: {e}")

def _eval_int(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [1])
    return _from_exact(Fraction(_int_arg(call.groups[0][0], call.offset)), call, domain)

def _eval_rat(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [2])
    a, b = (_int_arg(s, call.offset) for s in call.groups[0])
    if b == 0:
        raise FormulaSyntaxError(call.offset, "zero denominator")
    return _from_exact(Fraction(a, b), call, domain)

def _eval_solve(call: _Call, domain: AnyDomain) -> ParsedPath:
    if len(call.groups) not in (1, 2) or len(call.groups[0]) != 1:
        raise FormulaSyntaxError(call.offset, "solve takes an equation and its parameters")
    if not isinstance(domain, (BaseStructure, FiniteProduct)):
        raise _mismatch(call, domain)
    eq = parse(call.groups[0][0], "additive")
    if not isinstance(eq, Atom):
        raise FormulaSyntaxError(call.offset, f"{call.groups[0][0]!r} is not an equation")
    a, t = linear_form(eq, ["G"])
    b = a[0]
    if b == 0:
        raise PathExprTypeError(f"The equation {eq} does not determine G")
    names = sorted(t.variables, key=natural_key)
    exprs = call.groups[1] if len(call.groups) == 2 else ()
    if len(exprs) != len(names):
        raise PathExprTypeError(f"The equation has the parameters {names}, got {len(exprs)} values")
    values = [_evaluate(_parse_call(e), domain) for e in exprs]
    coeffs = [t.coefficient(k) for k in names]

    if isinstance(domain, FiniteProduct):
        product = product_finite([s.presentation for s in domain.factors])
        sols = [s.solve(coeffs, b, [project(v.path, i) for v in values])
                for (i, s) in enumerate(domain.factors)]
        res = None if any(g is None for g in sols) else splice(sols, product)  # type: ignore
    else:
        res = domain.solve(coeffs, b, [v.path for v in values])
    if res is None:
        raise PathExprTypeError(f"The equation {eq} has no solution in {domain.name}")
    exact: Exact = None
    if all(isinstance(v.exact, Fraction) for v in values):
        exact = sum((c * v.exact for (c, v) in zip(coeffs, values)), Fraction(0)) / b  # type: ignore
    return ParsedPath(res, exact)

def _eval_unit(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [1, 2])
    if not isinstance(domain, UnitGroup):
        raise _mismatch(call, domain)
    p = _int_arg(call.groups[0][0], call.offset)
    if p != domain.p:
        raise PathExprTypeError(f"A unit of Z_{p} is not an element of Z_{domain.p}^x")
    x = _int_arg(call.groups[1][0], call.offset)
    if not 0 <= x < torsion_order(p):
        raise PathExprTypeError(f"The torsion part {x} is not in [0, {torsion_order(p)})")
    y = _evaluate(_parse_call(call.groups[1][1]), ZpAdditiveStructure(p)).path
    assert isinstance(y, PadicInt)
    return ParsedPath(iso_forward(UnitPadic(p, x, y)))

def _eval_override(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [2, 1])
    if not isinstance(domain, ZhatStructure):
        raise _mismatch(call, domain)
    q = _int_arg(call.groups[0][0], call.offset)
    try:
        coord_domain = get_structure("zp+", q)
    except ValueError as e:
        raise PathExprTypeError(str(e))
    coord = _evaluate(_parse_call(call.groups[0][1]), coord_domain)
    base = _evaluate(_parse_call(call.groups[1][0]), domain)
    assert isinstance(coord.path, PadicInt)
    return ParsedPath(override(base.path, q, coord.path))

def _eval_sqrt(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [1])
    if not isinstance(domain, RealField):
        raise _mismatch(call, domain)
    k = _int_arg(call.groups[0][0], call.offset)
    if k < 0:
        raise PathExprTypeError(f"newton_sqrt needs a nonnegative integer, got {k}")
    return ParsedPath(newton_sqrt(k), ("sqrt", k))

def _eval_file(call: _Call, domain: AnyDomain) -> ParsedPath:
    _expect_args(call, [1])
    if not isinstance(domain, RealField):
        raise _mismatch(call, domain)
    with open(call.groups[0][0], "r") as f:
        text = f.read()
    return ParsedPath(real_from_decimal(text))

############### diagrams ###############
def derive_diagram(domain: AnyDomain, params: Mapping[str, ParsedPath]) \
        -> Union[Diagram, PolynomialDiagram]:
    """
    The complete diagram of parameters with exact values: the integer
    relations of rationals for the groups (multiplicative ones for units)
    and the polynomial ideal for the reals. Raises ``PathExprTypeError``
    if some parameter has no exact value, a diagram must then be given.
    """
    names = sorted(params, key=natural_key)
    unknown = [k for k in names if params[k].exact is None]
    if len(unknown) > 0:
        raise PathExprTypeError(f"No diagram can be derived for the parameter(s) {unknown}, "
                                f"give one with --diagram")
    if isinstance(domain, RealField):
        return derive_polynomial_diagram({k: _real_value(params[k].exact) for k in names})
    qs = [params[k].exact for k in names]
    assert all(isinstance(q, Fraction) for q in qs)
    if isinstance(domain, UnitGroup):
        return RelationLattice(names, _multiplicative_relations(qs), "multiplicative")  # type: ignore
    L = RelationLattice(names, _additive_relations(qs), "additive")  # type: ignore
    if isinstance(domain, FiniteProduct):
        return tuple(L for _ in domain.factors)
    return L

def _real_value(exact: Exact) -> Tuple[str, Any]:
    if isinstance(exact, Fraction):
        return ("rat", exact)
    assert exact is not None
    return exact

def _additive_relations(qs: Sequence[Fraction]) -> List[List[int]]:
    # the integer vectors v with sum_i v_i q_i = 0
    n = len(qs)
    if n == 0:
        return []
    den = math.lcm(*[q.denominator for q in qs])
    return integer_kernel([[int(q * den) for q in qs]], n)

def _multiplicative_relations(qs: Sequence[Fraction]) -> List[List[int]]:
    # the integer vectors v with prod_i q_i^(v_i) = 1: equal exponents at every
    # prime and an even number of negative factors, the last column being the
    # slack of the parity condition
    n = len(qs)
    if n == 0:
        return []
    primes = sorted({int(l) for q in qs
                     for l in sympy.primefactors(abs(q.numerator) * q.denominator)})
    rows = [[sympy.multiplicity(l, abs(q.numerator)) - sympy.multiplicity(l, q.denominator)
             for q in qs] + [0] for l in primes]
    rows.append([1 if q < 0 else 0 for q in qs] + [-2])
    kernel = integer_kernel(rows, n + 1)
    return lattice_basis([v[:n] for v in kernel], n)

def load_parameter_diagram(domain: AnyDomain, source: Union[str, Sequence[str]],
                           names: Sequence[str]) -> Union[Diagram, PolynomialDiagram]:
    """
    Read the diagram of the parameters from a file. For the groups this is
    the format of ``load_diagram``, shared by the factors of a product. For
    the reals every line is a generator of the ideal of the polynomial
    relations, complete when the first line is ``ideal-basis``.
    """
    if isinstance(domain, RealField):
        if isinstance(source, str):
            with open(source, "r") as f:
                lines = f.read().splitlines()
        else:
            lines = list(source)
        lines = [s.strip() for s in lines]
        lines = [s for s in lines if s and not s.startswith("#")]
        complete = len(lines) > 0 and lines[0] == "ideal-basis"
        gens = [sympy.sympify(s) for s in (lines[1:] if complete else lines)]
        return PolynomialDiagram(sorted(names, key=natural_key), gens, complete)
    L = load_diagram(source, names, formula_flavor(domain))
    if isinstance(domain, FiniteProduct):
        return tuple(L for _ in domain.factors)
    return L
