import pytest
from hypothesis import given, settings, HealthCheck, strategies as st
from ctp.arith.residue import p_valuation
from ctp.oracle.finite_model import solvable_mod_tower
from ctp.structure.zp_additive import (LinearEquation, NoSolution, Unique, AllSolutions,
                                       ZpAdditiveStructure, get_presentation,
                                       get_digit_presentation, from_integer, from_rational,
                                       from_digits, add, neg, sub, linear_combination,
                                       digits_to_coherent, coherent_to_digits, solver_functional,
                                       solve_linear, clopen_of_equation)
from ctp.tree.clopen import ClopenSet, clopen_membership, full_space
from ctp.utils.datastruct import Witness, Unknown
from ctp.utils.errors import ArityMismatch, DenominatorNotUnit, PrimeMismatch, ZeroRhs
from ctp.test.utils import (assert_coherent, assert_same_prefix, primes, small_ints,
                            rationals_for, rational_residue)

rational_prefixes = [
    (3, 1, 2, (2, 5, 14, 41)),
    (2, 1, 3, (1, 3, 3, 11)),
    (5, -1, 1, (4, 24, 124, 624)),
    (7, 2, 5, (6, 20, 69, 1441)),
]

@pytest.mark.parametrize("p,num,den,prefix", rational_prefixes)
def test_from_rational(p, num, den, prefix):
    x = from_rational(p, num, den)
    assert x.prefix(4) == prefix
    assert_coherent(x, p, 6)

@pytest.mark.parametrize("p,den", [(2, 2), (3, 6), (5, 25)])
def test_from_rational_denominator(p, den):
    with pytest.raises(DenominatorNotUnit):
        from_rational(p, 1, den)
    # a cancelled denominator is fine
    assert from_rational(p, den, den).prefix(3) == from_integer(p, 1).prefix(3)

@given(primes, st.data())
def test_rational_arithmetic(p, data):
    q1 = data.draw(rationals_for(p))
    q2 = data.draw(rationals_for(p))
    x = from_rational(p, q1.numerator, q1.denominator)
    y = from_rational(p, q2.numerator, q2.denominator)
    s = q1 + q2
    assert_same_prefix(x + y, from_rational(p, s.numerator, s.denominator), 5)
    d = q1 - q2
    assert_same_prefix(x - y, from_rational(p, d.numerator, d.denominator), 5)
    assert_same_prefix(neg(neg(x)), x, 5)
    assert_same_prefix(3 * x, x + x + x, 5)

def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        add(from_integer(2, 1), from_integer(3, 1))
    with pytest.raises(PrimeMismatch):
        sub(from_integer(2, 1), from_integer(5, 1))
    with pytest.raises(ArityMismatch):
        linear_combination([1, 2], [from_integer(2, 1)])
    assert linear_combination([], [], p=3).prefix(3) == (0, 0, 0)

def test_normalized():
    assert LinearEquation((1, -2), -2).normalized() == LinearEquation((-1, 2), 2)
    assert LinearEquation((1,), 2).normalized() == LinearEquation((1,), 2)

@settings(max_examples=10000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(primes, st.lists(small_ints, min_size=1, max_size=3), small_ints.filter(lambda b: b != 0),
       st.data())
def test_solve_linear_against_tower(p, coeffs, b, data):
    qs = data.draw(st.lists(rationals_for(p), min_size=len(coeffs), max_size=len(coeffs)))
    eq = LinearEquation(tuple(coeffs), b)
    res = solve_linear(eq, [from_rational(p, q.numerator, q.denominator) for q in qs])
    e = p_valuation(b, p)
    f = [rational_residue(q, p ** (e + 1)) for q in qs]
    solvable = solvable_mod_tower(eq, f, p, e + 1)
    if isinstance(res, NoSolution):
        assert not solvable
    else:
        assert solvable
        assert isinstance(res, Unique)
        g = res.solution
        assert_coherent(g, p, 10)
        for n in range(1, 11):
            pn = p ** n
            t = sum(a * rational_residue(q, pn) for (a, q) in zip(coeffs, qs))
            assert (b * g.label(n) - t) % pn == 0

@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(primes, st.lists(small_ints, min_size=1, max_size=3), small_ints.filter(lambda b: b != 0),
       st.integers(1, 5), st.integers(0, 3), st.data())
def test_solution_is_local_fuzzed(p, coeffs, b, n, extra, data):
    # inputs changed above level n + e leave the solution unchanged up to n
    e = p_valuation(b, p)
    eq = LinearEquation(tuple(a * p ** e for a in coeffs), b)
    qs = data.draw(st.lists(rationals_for(p), min_size=len(coeffs), max_size=len(coeffs)))
    xs = [from_rational(p, q.numerator, q.denominator) for q in qs]
    i = data.draw(st.integers(0, len(xs) - 1))
    ys = list(xs)
    ys[i] = get_presentation(p).perturb(xs[i], n + e + extra)
    fcn = solver_functional(eq, p)
    assert fcn(*xs).prefix(n) == fcn(*ys).prefix(n)

@pytest.mark.parametrize("p,b", [(2, 4), (3, 9), (5, 10), (3, 2)])
def test_solution_is_local(p, b):
    # the level n label of the solution only reads the parameter up to n + e
    e = p_valuation(b, p)
    x = from_integer(p, b * 7)
    fcn = solver_functional(LinearEquation((1,), b), p)
    for n in range(1, 4):
        y = get_presentation(p).perturb(x, n + e)
        assert fcn(x).prefix(n) == fcn(y).prefix(n)

def test_solve_rational_parameter():
    # 2 G = 1 in Z_3 is solved by 1/2
    res = solve_linear(LinearEquation((1,), 2), [from_integer(3, 1)])
    assert isinstance(res, Unique)
    assert res.solution.prefix(4) == (2, 5, 14, 41)

def test_solve_no_solution():
    res = solve_linear(LinearEquation((1,), 3), [from_integer(3, 1)])
    assert isinstance(res, NoSolution)
    res = solve_linear(LinearEquation((1,), 2), [from_integer(2, 1)])
    assert isinstance(res, NoSolution)

def test_solve_zero_rhs():
    res = solve_linear(LinearEquation((1,), 0), [from_integer(2, 8)])
    assert isinstance(res, AllSolutions)
    assert res.refute(fuel=10) == Witness(4)
    assert res.refute(fuel=3) == Unknown(3)
    res = solve_linear(LinearEquation((2, -1), 0), [from_integer(5, 3), from_integer(5, 6)])
    assert res.refute(fuel=6) == Unknown(6)
    with pytest.raises(ZeroRhs):
        solver_functional(LinearEquation((1,), 0), 2)

def test_solve_errors():
    with pytest.raises(ArityMismatch):
        solve_linear(LinearEquation((1, 1), 2), [from_integer(2, 1)])
    with pytest.raises(PrimeMismatch):
        solve_linear(LinearEquation((1,), 2), [from_integer(3, 1)], p=2)
    res = solve_linear(LinearEquation((), 5), [], p=5)
    assert isinstance(res, Unique)
    assert res.solution.prefix(3) == (0, 0, 0)

def test_clopen_of_equation():
    assert clopen_of_equation(LinearEquation((1,), 2), 2) == ClopenSet(1, ((1, (0,)),))
    assert clopen_of_equation(LinearEquation((1,), 3), 2) == full_space(1)
    s = clopen_of_equation(LinearEquation((1, 1), 4), 2)
    assert s.constraints == ((2, (0, 0)), (2, (1, 3)), (2, (2, 2)), (2, (3, 1)))
    with pytest.raises(ZeroRhs):
        clopen_of_equation(LinearEquation((1,), 0), 2)

def test_clopen_of_equation_large_coefficients():
    # 2 * 10**18 + 1 = 3 mod 9
    s = clopen_of_equation(LinearEquation((2 * 10 ** 18 + 1,), 9), 3)
    assert s == ClopenSet(1, ((2, (0,)), (2, (3,)), (2, (6,))))
    s = clopen_of_equation(LinearEquation((2 ** 64 + 1,), 4), 2)
    assert s == clopen_of_equation(LinearEquation((1,), 4), 2)
    s = clopen_of_equation(LinearEquation((-(2 ** 70) - 1, 3), 8), 2)
    assert s == clopen_of_equation(LinearEquation((7, 3), 8), 2)

@pytest.mark.parametrize("p,coeffs,b", [(2, (1, 3), 8), (3, (2, 1), 9), (5, (1,), 5),
                                      (3, (2 * 10 ** 18 + 1,), 9), (2, (2 ** 64 + 1, 3), 8)])
def test_clopen_matches_tower(p, coeffs, b):
    eq = LinearEquation(coeffs, b)
    s = clopen_of_equation(eq, p)
    e = p_valuation(b, p)
    for z in range(p ** (e + 1)):
        f = [z, 2 * z + 1][:len(coeffs)]
        inside = clopen_membership(s, [from_integer(p, k) for k in f])
        assert inside == solvable_mod_tower(eq, f, p, e + 1)

@pytest.mark.parametrize("p", [2, 3, 5])
def test_digit_maps(p):
    minus_one = from_digits(p, lambda i: p - 1)
    assert_same_prefix(minus_one, from_integer(p, -1), 5)
    digits = coherent_to_digits(p)(from_integer(p, p + 2))
    assert sum(d * p ** i for (i, d) in enumerate(digits.prefix(5))) == p + 2
    assert_same_prefix(digits_to_coherent(p)(digits), from_integer(p, p + 2), 5)
    assert get_digit_presentation(p).is_valid(digits.prefix(5))

def test_digit_values():
    assert coherent_to_digits(5)(from_integer(5, 7)).prefix(3) == (2, 1, 0)
    assert coherent_to_digits(3)(from_rational(3, 1, 2)).prefix(4) == (2, 1, 1, 1)

def test_digit_addition_carries():
    dpres = get_digit_presentation(2)
    one = coherent_to_digits(2)(from_integer(2, 1))
    minus_one = coherent_to_digits(2)(from_integer(2, -1))
    assert dpres.functionals["add"](one, minus_one).prefix(6) == (0,) * 6
    assert dpres.functionals["neg"](one).prefix(4) == (1, 1, 1, 1)

def test_structure():
    zp = ZpAdditiveStructure(2)
    assert zp.name == "zp+"
    assert zp.tower_prime == 2
    assert zp.split_coefficient(12) == (4, 3)
    assert zp.split_coefficient(-3) == (1, -3)
    assert zp.normalize_modulus(12) == 4
    assert zp.residue(from_integer(2, 13), 4) == 1
    assert zp.residue(from_integer(2, 13), 3) == 0
    with pytest.raises(PrimeMismatch):
        zp.as_element(from_integer(3, 1))
    g = zp.solve([1], 2, [zp.from_integer(6)])
    assert_same_prefix(g, from_integer(2, 3), 5)
    assert zp.solve([1], 2, [zp.from_integer(5)]) is None
    with pytest.raises(DenominatorNotUnit):
        zp.from_rational(1, 2)
