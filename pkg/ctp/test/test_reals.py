from fractions import Fraction
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from ctp.logic.formula import Exists, RingAtom
from ctp.logic.parser import parse
from ctp.structure.reals import (FastCauchyReal, get_real_presentation, Apart, real_from_rational,
                                 real_from_decimal, real_pow, newton_sqrt, equiv_semidecide,
                                 evaluate_polynomial, PolynomialDiagram,
                                 derive_polynomial_diagram, Sign, sign_decide, decide_qf_real)
from ctp.utils.datastruct import Unknown
from ctp.utils.errors import ArityMismatch, FuelExhausted, LabelUnavailable, UnsupportedFormula

c1, c2 = sympy.symbols("c1 c2")

def assert_close(x, value, n):
    # fast convergence: the level n label is within 2^-n of the limit
    assert abs(x.approx(n) - value) <= Fraction(1, 2 ** n)

def test_rational_arithmetic():
    x = real_from_rational(Fraction(1, 3))
    y = real_from_rational(Fraction(1, 6))
    assert (x + y).approx(5) == Fraction(1, 2)
    assert (x - y).approx(5) == Fraction(1, 6)
    assert (-x).approx(3) == Fraction(-1, 3)
    assert (x * real_from_rational(3)).approx(4) == 1
    assert real_pow(real_from_rational(2), 3).approx(4) == 8
    assert real_pow(x, 0).approx(2) == 1

def test_decimal_expansion():
    x = real_from_decimal("3.14159")
    assert x.approx(1) == Fraction(31, 10)
    assert x.approx(4) == Fraction(314, 100)
    assert x.approx(16) == Fraction(314159, 100000)
    with pytest.raises(LabelUnavailable):
        x.label(17)
    assert real_from_decimal("-2.5").approx(1) == Fraction(-5, 2)
    assert real_from_decimal("  1.0\n0 ").approx(5) == 1
    with pytest.raises(ValueError):
        real_from_decimal("3.1a")

@settings(deadline=None, max_examples=40)
@given(st.integers(0, 200), st.integers(1, 30))
def test_newton_sqrt(k, n):
    x = newton_sqrt(k).approx(n)
    # the iterates approach from above
    assert x * x >= k
    assert (x - Fraction(1, 2 ** n)) ** 2 <= k or x <= Fraction(1, 2 ** n)

def test_newton_sqrt_exact():
    assert newton_sqrt(9).prefix(3) == (3, 3, 3)
    assert newton_sqrt(0).approx(4) == 0
    with pytest.raises(ValueError):
        newton_sqrt(-1)

def test_sqrt_product():
    r2 = newton_sqrt(2)
    assert_close(r2 * r2, 2, 8)
    assert abs((newton_sqrt(2) * newton_sqrt(3)).approx(6) - Fraction(2449, 1000)) <= \
        Fraction(1, 32)
    assert equiv_semidecide(r2 * r2, real_from_rational(2), fuel=10) == Unknown(10)

def test_equiv_semidecide():
    x = real_from_rational(1)
    y = real_from_rational(Fraction(101, 100))
    # 2 / 2^n drops below 1/100 at n = 8
    assert equiv_semidecide(x, y, fuel=20) == Apart(8, -1)
    assert equiv_semidecide(y, x, fuel=20) == Apart(8, 1)
    assert equiv_semidecide(x, y, fuel=7) == Unknown(7)

def test_presentation():
    pres = get_real_presentation()
    assert pres.name == "TR"
    assert pres.signature == {"add": 2, "neg": 1, "mul": 2, "zero": 0, "one": 0}
    assert pres.is_valid((1, Fraction(3, 2)))
    assert not pres.is_valid((1, 2))
    assert not pres.is_valid(("a",))
    assert pres.functionals["one"]().approx(3) == 1

@pytest.mark.parametrize("level", [1, 2, 4])
def test_real_perturb(level):
    pres = get_real_presentation()
    x = real_from_rational(0)
    y = pres.perturb(x, level)
    assert isinstance(y, FastCauchyReal)
    assert y.prefix(level) == x.prefix(level)
    assert y.label(level + 1) != 0
    assert pres.is_valid(y.prefix(level + 3))

def test_evaluate_polynomial():
    values = {"c1": real_from_rational(Fraction(1, 2)), "c2": real_from_rational(3)}
    assert evaluate_polynomial(c1 ** 2 * c2 - 2 * c2 + 1, values).approx(6) == Fraction(-17, 4)
    assert evaluate_polynomial(sympy.Rational(7, 3), values).approx(2) == Fraction(7, 3)
    with pytest.raises(ArityMismatch):
        evaluate_polynomial(c1 + c2, {"c1": real_from_rational(1)})

def test_derive_diagram():
    d = derive_polynomial_diagram({"c1": ("sqrt", 2), "c2": ("sqrt", 8)})
    assert d.names == ("c1", "c2")
    assert d.complete
    assert d.contains(c1 ** 2 - 2)
    assert d.contains(c2 - 2 * c1)
    assert d.contains(c1 * c2 - 4)
    assert not d.contains(c1 - 1)
    assert not d.contains(c1 + c2)
    with pytest.raises(ArityMismatch):
        d.contains(sympy.Symbol("c3"))

def test_derive_diagram_rationals():
    d = derive_polynomial_diagram({"a": ("rat", Fraction(1, 3)), "b": ("sqrt", 0)})
    a, b = sympy.symbols("a b")
    assert d.contains(3 * a - 1)
    assert d.contains(b)
    assert not d.contains(a)
    # sqrt(2) and sqrt(3) share no relation
    d = derive_polynomial_diagram({"c1": ("sqrt", 2), "c2": ("sqrt", 3)})
    assert not d.contains(c1 - c2)
    assert d.contains(c2 ** 2 - 3)
    with pytest.raises(ValueError):
        derive_polynomial_diagram({"c1": ("cbrt", 2)})

def test_empty_diagram():
    d = PolynomialDiagram(["c1"])
    assert d.contains(sympy.Integer(0))
    assert not d.contains(c1)

def sqrt_params():
    values = {"c1": newton_sqrt(2), "c2": real_from_rational(Fraction(3, 2))}
    diagram = derive_polynomial_diagram({"c1": ("sqrt", 2), "c2": ("rat", Fraction(3, 2))})
    return values, diagram

signs = [
    (c1 ** 2 - 2, Sign.ZERO),
    (c1 - 1, Sign.POSITIVE),
    (c1 - c2, Sign.NEGATIVE),
    (2 * c2 - 3, Sign.ZERO),
    (c1 ** 3 - 2 * c1 + c2, Sign.POSITIVE),
]

@pytest.mark.parametrize("h,sign", signs)
def test_sign_decide(h, sign):
    values, diagram = sqrt_params()
    res = sign_decide(h, values, diagram)
    assert res.sign == sign
    if sign == Sign.ZERO:
        assert res.level == 0
    else:
        assert res.level > 0

def test_sign_needs_complete_diagram():
    values = {"c1": newton_sqrt(2)}
    diagram = PolynomialDiagram(["c1"], complete=False)
    with pytest.raises(FuelExhausted):
        sign_decide(c1 ** 2 - 2, values, diagram, fuel=8)
    assert sign_decide(c1 - 1, values, diagram, fuel=8).sign == Sign.POSITIVE

qf_formulas = [
    ("c1^2 = 2 & c1 < c2", True),
    ("c2 < c1 | FALSE", False),
    ("~(c1 = 1) & (c1 - 1) * (c1 + 1) = 1", True),
    ("2*c2 = 3 & ~(c1 * c1 < 2)", True),
    ("TRUE & c1 + c2 < 3", True),
]

@pytest.mark.parametrize("text,truth", qf_formulas)
def test_decide_qf_real(text, truth):
    values, diagram = sqrt_params()
    assert decide_qf_real(parse(text, "ring"), values, diagram) == truth

def test_decide_qf_real_quantified():
    values, diagram = sqrt_params()
    with pytest.raises(UnsupportedFormula):
        decide_qf_real(Exists("G", RingAtom(c1, c2)), values, diagram)
