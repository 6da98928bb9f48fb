from __future__ import annotations
import re
from typing import Callable, List, Optional, Tuple
import sympy
from ctp.logic.formula import (Formula, Term, Atom, RingAtom, Not, And, Or, Exists, ForAll,
                               TOP, BOTTOM)
from ctp.utils.errors import FormulaSyntaxError
from ctp.utils.misc import get_option

__all__ = ["parse", "parse_term", "Token", "tokenize"]

KEYWORDS = ("ALL", "EX", "TRUE", "FALSE")

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|[=<&|~().*^+\-,;])
""", re.VERBOSE)

class Token(object):
    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.pos})"

def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            if kind == "name" and m.group() in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens

class _Parser(object):
    # recursive descent over the token list, one instance per input text
    def __init__(self, text: str, flavor: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.flavor = flavor
        self.read_term: Callable[[], object] = get_option("flavor", flavor, {
            "additive": self._additive_term,
            "multiplicative": self._multiplicative_term,
            "ring": self._ring_expr,
        })

    ############### token helpers ###############
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("op", "kw") and tok.text == text

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise FormulaSyntaxError(tok.pos, f"{message}, found {found}")

    ############### formulas ###############
    def formula(self) -> Formula:
        if self.at("ALL") or self.at("EX"):
            quant = self.advance().text
            tok = self.peek()
            if tok.kind != "name":
                self.fail("expected a variable name")
            self.advance()
            self.expect(".")
            body = self.formula()
            return ForAll(tok.text, body) if quant == "ALL" else Exists(tok.text, body)
        return self.disjunction()

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.at("|"):
            self.advance()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.at("&"):
            self.advance()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if self.at("ALL") or self.at("EX"):
            return self.formula()
        if self.at("TRUE"):
            self.advance()
            return TOP
        if self.at("FALSE"):
            self.advance()
            return BOTTOM
        if self.at("("):
            # a parenthesized formula, or in the ring flavor possibly the
            # start of a parenthesized term
            start = self.pos
            try:
                self.advance()
                res = self.formula()
                self.expect(")")
                if not self._continues_term():
                    return res
            except FormulaSyntaxError:
                if self.flavor != "ring":
                    raise
            self.pos = start
        return self.atom()

    def _continues_term(self) -> bool:
        return any(self.at(op) for op in ("=", "!=", "<", "+", "-", "*", "^"))

    def atom(self) -> Formula:
        lhs = self.read_term()
        for rel in ("=", "!=", "<"):
            if self.at(rel):
                if rel == "<" and self.flavor != "ring":
                    self.fail("'<' is only available for ring formulas")
                self.advance()
                rhs = self.read_term()
                if self.flavor == "ring":
                    res: Formula = RingAtom(lhs, rhs, "<" if rel == "<" else "=")  # type: ignore
                else:
                    res = Atom(lhs, rhs)  # type: ignore
                return Not(res) if rel == "!=" else res
        self.fail("expected a relation")
        assert False

    ############### terms ###############
    def _symbol(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a symbol")
        self.advance()
        return tok.text

    def _integer(self) -> int:
        tok = self.peek()
        if tok.kind != "num":
            self.fail("expected an integer")
        self.advance()
        return int(tok.text)

    def _additive_term(self) -> Term:
        coeffs: List[Tuple[str, int]] = []
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        while True:
            item = self._signed()
            if item is not None:
                coeffs.append((item[0], sign * item[1]))
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                return Term(tuple(coeffs), "additive")
            self.advance()

    def _signed(self) -> Optional[Tuple[str, int]]:
        # [int "*"] sym, or the identity "0"
        if self.peek().kind == "num":
            c = self._integer()
            if not self.at("*"):
                if c != 0:
                    self.fail("an integer alone must be the identity 0")
                return None
            self.advance()
            return self._symbol(), c
        return self._symbol(), 1

    def _multiplicative_term(self) -> Term:
        coeffs: List[Tuple[str, int]] = []
        while True:
            if self.peek().kind == "num":
                if self._integer() != 1:
                    self.fail("an integer alone must be the identity 1")
            else:
                name = self._symbol()
                e = 1
                if self.at("^"):
                    self.advance()
                    sign = 1
                    if self.at("-"):
                        self.advance()
                        sign = -1
                    e = sign * self._integer()
                coeffs.append((name, e))
            if not self.at("*"):
                return Term(tuple(coeffs), "multiplicative")
            self.advance()

    def _ring_expr(self) -> sympy.Expr:
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        res = self._ring_product()
        if neg:
            res = -res
        while self.at("+") or self.at("-"):
            op = self.advance().text
            rhs = self._ring_product()
            res = res + rhs if op == "+" else res - rhs
        return sympy.expand(res)

    def _ring_product(self) -> sympy.Expr:
        res = self._ring_power()
        while self.at("*"):
            self.advance()
            res = res * self._ring_power()
        return res

    def _ring_power(self) -> sympy.Expr:
        base = self._ring_primary()
        if self.at("^"):
            self.advance()
            base = base ** self._integer()
        return base

    def _ring_primary(self) -> sympy.Expr:
        if self.peek().kind == "num":
            return sympy.Integer(self._integer())
        if self.at("("):
            self.advance()
            res = self._ring_expr()
            self.expect(")")
            return res
        return sympy.Symbol(self._symbol())

def parse(text: str, flavor: str = "additive") -> Formula:
    """
    Parse a formula.

    Arguments
    ---------
    * text: str
        The formula, e.g. ``"ALL F. EX G. F = 2*G"``.
    * flavor: str
        ``"additive"`` (terms ``2*F - G``, identity ``0``), ``"multiplicative"``
        (terms ``F^2*G^-1``, identity ``1``) or ``"ring"`` (integer
        polynomials with ``=``, ``!=`` and ``<``).

    Returns
    -------
    * Formula
        The syntax tree, ``a != b`` being read as ``~(a = b)``.
    """
    parser = _Parser(text, flavor)
    res = parser.formula()
    if parser.peek().kind != "end":
        parser.fail("unexpected trailing input")
    return res

def parse_term(text: str, flavor: str = "additive"):
    parser = _Parser(text, flavor)
    res = parser.read_term()
    if parser.peek().kind != "end":
        parser.fail("unexpected trailing input")
    return res
