from __future__ import annotations
from dataclasses import dataclass, field
import itertools
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple
import sympy
from ctp.utils.misc import natural_key

__all__ = ["Term", "Formula", "Atom", "RingAtom", "Not", "And", "Or", "Exists", "ForAll",
           "Top", "Bottom", "TOP", "BOTTOM", "free_variables", "bound_variables",
           "rename_free", "fresh_name", "to_text", "is_quantifier_free", "conjoin", "disjoin",
           "negate"]

FLAVORS = ("additive", "multiplicative", "ring")

@dataclass(frozen=True)
class Term:
    """
    Integer combination of symbols of an abelian group: ``sum_i a_i x_i`` in
    the additive flavor, ``prod_i x_i^(a_i)`` in the multiplicative one.

    Attributes
    ----------
    * coeffs: Tuple[Tuple[str, int], ...]
        Pairs ``(symbol, coefficient)`` with nonzero coefficients, sorted in
        natural symbol order.
    * flavor: str
        ``"additive"`` or ``"multiplicative"``.
    """
    coeffs: Tuple[Tuple[str, int], ...] = ()
    flavor: str = "additive"

    def __post_init__(self):
        assert self.flavor in ("additive", "multiplicative"), f"Unknown term flavor {self.flavor}"
        merged: Dict[str, int] = {}
        for (name, c) in self.coeffs:
            merged[name] = merged.get(name, 0) + c
        items = tuple(sorted(((k, v) for (k, v) in merged.items() if v != 0),
                             key=lambda kv: natural_key(kv[0])))
        object.__setattr__(self, "coeffs", items)

    @staticmethod
    def of(mapping: Mapping[str, int], flavor: str = "additive") -> Term:
        return Term(tuple(mapping.items()), flavor)

    @staticmethod
    def symbol(name: str, flavor: str = "additive") -> Term:
        return Term(((name, 1),), flavor)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for (name, _) in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, name: str) -> int:
        return dict(self.coeffs).get(name, 0)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.coeffs)

    def without(self, name: str) -> Term:
        return Term(tuple((k, v) for (k, v) in self.coeffs if k != name), self.flavor)

    def with_flavor(self, flavor: str) -> Term:
        return Term(self.coeffs, flavor)

    def __add__(self, other: Term) -> Term:
        assert self.flavor == other.flavor
        return Term(self.coeffs + other.coeffs, self.flavor)

    def __neg__(self) -> Term:
        return self.scale(-1)

    def __sub__(self, other: Term) -> Term:
        return self + (-other)

    def scale(self, c: int) -> Term:
        return Term(tuple((k, c * v) for (k, v) in self.coeffs), self.flavor)

    def evaluate(self, values: Mapping[str, int], modulus: int) -> int:
        return sum(c * values[name] for (name, c) in self.coeffs) % modulus

    def __str__(self) -> str:
        if self.flavor == "multiplicative":
            if self.is_zero:
                return "1"
            return "*".join(name if c == 1 else f"{name}^{c}" for (name, c) in self.coeffs)

        if self.is_zero:
            return "0"
        s = ""
        for (i, (name, c)) in enumerate(self.coeffs):
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            if i == 0:
                s = body if c > 0 else "-" + body
            else:
                s += (" + " if c > 0 else " - ") + body
        return s

############### formulas ###############
class Formula(object):
    """
    Base class of the first-order formula nodes. Nodes are immutable and
    compare structurally.
    """
    def __str__(self) -> str:
        return to_text(self)

@dataclass(frozen=True)
class Atom(Formula):
    """
    The equation ``lhs = rhs`` between two group terms.
    """
    lhs: Term
    rhs: Term

    def __post_init__(self):
        assert self.lhs.flavor == self.rhs.flavor, "Both sides of an atom must share the flavor"

    @property
    def flavor(self) -> str:
        return self.lhs.flavor

    def form(self) -> Term:
        # the single term equal to the identity exactly when the atom holds
        return self.lhs - self.rhs

    __str__ = Formula.__str__

@dataclass(frozen=True)
class RingAtom(Formula):
    """
    The relation ``lhs rel rhs`` between two integer polynomials in the
    parameters, ``rel`` being ``"="`` or ``"<"``.
    """
    lhs: sympy.Expr
    rhs: sympy.Expr
    rel: str = "="

    def __post_init__(self):
        assert self.rel in ("=", "<"), f"Unknown ring relation {self.rel}"

    __str__ = Formula.__str__

@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    __str__ = Formula.__str__

@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]
    __str__ = Formula.__str__

@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]
    __str__ = Formula.__str__

@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula
    __str__ = Formula.__str__

@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula
    __str__ = Formula.__str__

@dataclass(frozen=True)
class Top(Formula):
    __str__ = Formula.__str__

@dataclass(frozen=True)
class Bottom(Formula):
    __str__ = Formula.__str__

TOP = Top()
BOTTOM = Bottom()

def conjoin(args: Iterable[Formula]) -> Formula:
    # conjunction with the trivial cases folded
    items = [a for a in args if a != TOP]
    if any(a == BOTTOM for a in items):
        return BOTTOM
    if len(items) == 0:
        return TOP
    if len(items) == 1:
        return items[0]
    return And(tuple(items))

def disjoin(args: Iterable[Formula]) -> Formula:
    items = [a for a in args if a != BOTTOM]
    if any(a == TOP for a in items):
        return TOP
    if len(items) == 0:
        return BOTTOM
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))

def negate(f: Formula) -> Formula:
    if f == TOP:
        return BOTTOM
    if f == BOTTOM:
        return TOP
    if isinstance(f, Not):
        return f.body
    return Not(f)

############### variables ###############
def _leaf_variables(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Atom):
        return frozenset(f.lhs.variables + f.rhs.variables)
    if isinstance(f, RingAtom):
        return frozenset(str(s) for s in (f.lhs - f.rhs).free_symbols)
    # leaves of other layers (e.g. residue conditions) expose their variables
    return frozenset(getattr(f, "variables", ()))

def free_variables(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        return frozenset().union(*[free_variables(a) for a in f.args])
    if isinstance(f, (Exists, ForAll)):
        return free_variables(f.body) - {f.var}
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    return _leaf_variables(f)

def bound_variables(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Not):
        return bound_variables(f.body)
    if isinstance(f, (And, Or)):
        return frozenset().union(*[bound_variables(a) for a in f.args])
    if isinstance(f, (Exists, ForAll)):
        return bound_variables(f.body) | {f.var}
    return frozenset()

def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, ForAll)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    return True

def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    for k in itertools.count(1):
        name = f"{base}_{k}"
        if name not in taken:
            return name
    assert False

def _rename_term(t: Term, old: str, new: str) -> Term:
    return Term(tuple((new if k == old else k, v) for (k, v) in t.coeffs), t.flavor)

def rename_free(f: Formula, old: str, new: str) -> Formula:
    """
    Replace the free occurrences of the symbol ``old`` by ``new``. ``new``
    must not be captured by a quantifier of ``f``.
    """
    if isinstance(f, Atom):
        return Atom(_rename_term(f.lhs, old, new), _rename_term(f.rhs, old, new))
    if isinstance(f, RingAtom):
        sub = {sympy.Symbol(old): sympy.Symbol(new)}
        return RingAtom(f.lhs.subs(sub), f.rhs.subs(sub), f.rel)
    if isinstance(f, Not):
        return Not(rename_free(f.body, old, new))
    if isinstance(f, And):
        return And(tuple(rename_free(a, old, new) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(rename_free(a, old, new) for a in f.args))
    if isinstance(f, (Exists, ForAll)):
        if f.var == old:
            return f
        assert f.var != new, f"Renaming {old} to {new} would be captured"
        return type(f)(f.var, rename_free(f.body, old, new))
    renamer = getattr(f, "rename", None)
    if renamer is not None:
        return renamer(old, new)
    return f

############### printer ###############
def _ring_text(e: sympy.Expr) -> str:
    return str(e).replace("**", "^")

def to_text(f: Formula) -> str:
    """
    Print the formula in the grammar read by ``ctp.logic.parser.parse``.
    """
    if isinstance(f, Atom):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, RingAtom):
        return f"{_ring_text(f.lhs)} {f.rel} {_ring_text(f.rhs)}"
    if isinstance(f, Top):
        return "TRUE"
    if isinstance(f, Bottom):
        return "FALSE"
    if isinstance(f, Not):
        if isinstance(f.body, Atom):
            return f"{f.body.lhs} != {f.body.rhs}"
        if isinstance(f.body, RingAtom) and f.body.rel == "=":
            return f"{_ring_text(f.body.lhs)} != {_ring_text(f.body.rhs)}"
        return f"~{_wrap(f.body, (And, Or, Exists, ForAll, Not))}"
    if isinstance(f, And):
        return " & ".join(_wrap(a, (And, Or, Exists, ForAll)) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, (Or, Exists, ForAll)) for a in f.args)
    if isinstance(f, Exists):
        return f"EX {f.var}. {to_text(f.body)}"
    if isinstance(f, ForAll):
        return f"ALL {f.var}. {to_text(f.body)}"
    # leaves of other layers print themselves
    if type(f).__str__ is not Formula.__str__:
        return str(f)
    return repr(f)

def _wrap(f: Formula, kinds: Tuple[type, ...]) -> str:
    s = to_text(f)
    if isinstance(f, kinds) or (isinstance(f, Not) and not isinstance(f.body, (Atom, RingAtom))
                                and Not in kinds):
        return f"({s})"
    return s
