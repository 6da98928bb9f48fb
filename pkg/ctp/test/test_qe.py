import pytest
from hypothesis import given, reject, settings, HealthCheck, strategies as st
from ctp.logic.formula import Term, Atom, Not, And, Or, Exists, ForAll, TOP, BOTTOM
from ctp.logic.normalform import to_prenex
from ctp.logic.lattice import RelationLattice, DiagramEnumeration
from ctp.logic.parser import parse
from ctp.oracle.finite_model import FiniteModel, finite_model_check
from ctp.qe.decide import UnitGroup, FiniteProduct, DecisionContext, tree_decide, decide_zhat, decide_units
from ctp.qe.eliminate import eliminate
from ctp.qe.product_translate import FactorLeaf, AllFactors, SomeFactor, product_translate
from ctp.qe.residue_clopen import ClopenLeaf, make_leaf, leaf_holds, to_clopen_set
from ctp.qe.skolem import skolem
from ctp.structure.zhat import ZhatStructure, zhat_from_integer
from ctp.structure.zp_additive import ZpAdditiveStructure, from_integer, from_rational, get_presentation
from ctp.structure.zp_units import UnitLabelPath
from ctp.tree.clopen import ClopenSet
from ctp.tree.path import apart_semidecide
from ctp.tree.product import product_finite, splice
from ctp.utils.datastruct import Witness
from ctp.utils.errors import (ArityMismatch, DisjunctionPresent, FuelExhausted, SignatureMismatch,
                              UnsupportedFormula, UnsupportedStructure, TooLarge)
from ctp.test.utils import additive_formulas, assert_same_prefix

def zp(p):
    return ZpAdditiveStructure(p)

def closed(structure):
    # context of a sentence
    return DecisionContext(structure, {}, RelationLattice([]))

# (structure, sentence, truth)
sentences = [
    (zp(2), "ALL F. EX G. F = 2*G", False),
    (zp(3), "ALL F. EX G. F = 2*G", True),
    (zp(3), "ALL F. EX G. F = 3*G", False),
    (zp(5), "ALL F. EX G. F = 3*G", True),
    (zp(2), "EX G. G != 0", True),
    (zp(2), "ALL F. EX G. EX H. F = 4*G + 2*H | F = G", True),
    (zp(2), "ALL F. EX G. F = 4*G | F = 2*G", False),
    (zp(3), "ALL F. ALL G. F = G | F != G", True),
    (zp(3), "EX F. ALL G. F = G", False),
    (zp(2), "ALL F. F = 0 | EX G. F = 2*G | EX H. F = 2*H + F", True),
    (ZhatStructure(), "ALL F. EX G. F = 2*G", False),
    (ZhatStructure(), "ALL F. EX G. F = G + G + G + G + G + G | F != 6*G", True),
    (ZhatStructure(), "EX G. G != 0 & EX H. G = 6*H", True),
]

# (p, formula, tower level) compared with Z/p^n
finite_agreement = [
    (2, "ALL F. EX G. F = 2*G", 3),
    (3, "ALL F. EX G. F = 2*G", 2),
    (3, "ALL F. EX G. F = 3*G", 2),
    (2, "ALL F. EX G. EX H. F = 4*G + 2*H | F = G", 3),
    (5, "ALL F. EX G. F = 10*G | F = G", 2),
]

@pytest.mark.parametrize("structure,text,truth", sentences)
def test_sentences(structure, text, truth):
    assert tree_decide(closed(structure), parse(text)) is truth

@pytest.mark.parametrize("p,text,n", finite_agreement)
def test_finite_model_agreement(p, text, n):
    f = parse(text)
    assert tree_decide(closed(zp(p)), f) == finite_model_check(FiniteModel(p, n), f)

def test_with_parameters():
    # c1 = 1, c2 = 2 in Z_3: G = 1/2 solves 2 G = c1 and differs from c2
    f = parse("EX G. c1 = 2*G & G != c2")
    params = {"c1": from_integer(3, 1), "c2": from_integer(3, 2)}
    ctx = DecisionContext(zp(3), params, RelationLattice(["c1", "c2"], [[2, -1]]))
    assert tree_decide(ctx, f)
    # with c2 = 1/2 the only solution is excluded
    params = {"c1": from_integer(3, 1), "c2": from_rational(3, 1, 2)}
    ctx = DecisionContext(zp(3), params, RelationLattice(["c1", "c2"], [[1, -2]]))
    assert not tree_decide(ctx, f)

@pytest.mark.parametrize("c,truth", [(6, True), (3, False), (-4, True), (0, True)])
def test_zhat_divisibility(c, truth):
    basis = [[1]] if c == 0 else []
    ctx = DecisionContext(ZhatStructure(), {"c": zhat_from_integer(c)}, RelationLattice(["c"], basis))
    assert decide_zhat(ctx, parse("EX G. c = 2*G")) is truth
    with pytest.raises(UnsupportedStructure):
        decide_zhat(DecisionContext(zp(2), {}, RelationLattice([])), parse("EX G. G = G"))

# (p, integer value, multiplicative relations, is a square)
unit_squares = [
    (5, 4, [], True),
    (5, 2, [], False),
    (5, -1, [[2]], True),
    (3, -1, [[2]], False),
    (7, 2, [], True),
    (2, 5, [], False),
    (2, 17, [], True),
    (2, -1, [[2]], False),
]

@pytest.mark.parametrize("p,z,basis,truth", unit_squares)
def test_unit_squares(p, z, basis, truth):
    ctx = DecisionContext(UnitGroup(p), {"c": UnitLabelPath.from_integer(p, z)},
                          RelationLattice(["c"], basis, "multiplicative"))
    assert tree_decide(ctx, parse("EX G. c = G*G", "multiplicative")) is truth

def test_units_sentences():
    ctx = DecisionContext(UnitGroup(7), {}, RelationLattice([], (), "multiplicative"))
    # x -> x^2 is not onto but x -> x^5 is
    assert not tree_decide(ctx, parse("ALL F. EX G. F = G^2", "multiplicative"))
    assert tree_decide(ctx, parse("ALL F. EX G. F = G^5", "multiplicative"))
    # the torsion has elements of order 3
    assert tree_decide(ctx, parse("EX G. G != 1 & G^3 = 1", "multiplicative"))

def test_units_errors():
    ctx = DecisionContext(UnitGroup(5), {"c": UnitLabelPath.from_integer(5, 2)},
                          RelationLattice(["c"], [], "additive"))
    with pytest.raises(SignatureMismatch):
        tree_decide(ctx, parse("EX G. c = G*G", "multiplicative"))
    ctx = DecisionContext(UnitGroup(5), {}, RelationLattice([], (), "multiplicative"))
    with pytest.raises(SignatureMismatch):
        tree_decide(ctx, parse("EX G. G = 2*G"))
    ctx = DecisionContext(zp(5), {}, RelationLattice([], (), "multiplicative"))
    with pytest.raises(UnsupportedStructure):
        decide_units(ctx, parse("EX G. G = G*G", "multiplicative"))

def test_finite_product():
    prod = FiniteProduct((zp(2), zp(3)))
    pres = product_finite([get_presentation(2), get_presentation(3)])
    diagram = (RelationLattice(["c"]), RelationLattice(["c"]))
    f = parse("EX G. c = 2*G")
    even = splice([from_integer(2, 4), from_integer(3, 1)], pres)
    odd = splice([from_integer(2, 1), from_integer(3, 1)], pres)
    assert tree_decide(DecisionContext(prod, {"c": even}, diagram), f)
    assert not tree_decide(DecisionContext(prod, {"c": odd}, diagram), f)
    empty = (RelationLattice([]), RelationLattice([]))
    assert not tree_decide(DecisionContext(prod, {}, empty), parse("ALL F. EX G. F = 2*G"))
    assert tree_decide(DecisionContext(FiniteProduct((zp(3), zp(5))), {}, empty),
                       parse("ALL F. EX G. F = 2*G"))
    with pytest.raises(ArityMismatch):
        DecisionContext(prod, {}, (RelationLattice([]),))

def test_product_translate():
    f = parse("ALL F. EX G. F = 2*G")
    assert product_translate(f, 2) == And((FactorLeaf(0, f), FactorLeaf(1, f)))
    g = parse("EX H. F = G & F != H")
    res = product_translate(g, "infinite")
    assert res == And((AllFactors(parse("EX H. F = G")), SomeFactor(g)))
    assert product_translate(parse("F = G"), "infinite") == AllFactors(parse("F = G"))
    with pytest.raises(UnsupportedFormula):
        product_translate(f, "infinite")
    with pytest.raises(UnsupportedFormula):
        product_translate(parse("EX H. F != H & G != H"), "infinite")
    with pytest.raises(ValueError):
        product_translate(f, 0)

def test_eliminate_leaves():
    res = eliminate(parse("EX G. F = 2*G"), zp(2))
    assert res == ClopenLeaf((Term.symbol("F"),), (2,), ((0,),))
    res = eliminate(parse("EX G. F = 2*G & EX H. G = 2*H"), zp(2))
    assert res == ClopenLeaf((Term.symbol("F"),), (4,), ((0,),))
    assert eliminate(parse("EX G. F = 2*G"), zp(3)) == TOP
    res = eliminate(parse("EX G. F = 6*G"), ZhatStructure())
    assert res == ClopenLeaf((Term.symbol("F"),), (6,), ((0,),))
    assert eliminate(parse("ALL G. F = 2*G"), zp(3)) == BOTTOM
    with pytest.raises(UnsupportedFormula):
        eliminate(parse("EX G. F = G^2", "multiplicative"), zp(3))

def test_clopen_leaf():
    leaf = make_leaf([Term.symbol("F")], [4], [(0,), (2,)])
    assert leaf_holds(leaf, [6])
    assert not leaf_holds(leaf, [5])
    neg = leaf.negated()
    assert neg.members == ((1,), (3,))
    assert to_clopen_set(leaf, ["F"], 2) == ClopenSet(1, ((2, (0,)), (2, (2,))))
    big = ClopenLeaf((Term((("F", 2 * 10 ** 18 + 1),)),), (9,), ((0,),))
    assert to_clopen_set(big, ["F"], 3) == ClopenSet(1, ((2, (0,)), (2, (3,)), (2, (6,))))
    assert make_leaf([Term.symbol("F")], [2], [(0,), (1,)]) == TOP
    assert make_leaf([Term.symbol("F")], [2], []) == BOTTOM
    assert make_leaf([Term()], [3], [(1,)]) == BOTTOM
    assert str(leaf) == "[(F mod 4) in {(0), (2)}]"

def test_free_form_diagram():
    params = {"c1": from_integer(2, 0), "c2": from_integer(2, 8)}
    ctx = DecisionContext(zp(2), params, DiagramEnumeration(["c1", "c2"], []), fuel=10)
    assert not tree_decide(ctx, parse("c1 = c2"))
    assert tree_decide(ctx, parse("c1 != c2"))
    short = DecisionContext(zp(2), params, DiagramEnumeration(["c1", "c2"], []), fuel=3)
    with pytest.raises(FuelExhausted):
        tree_decide(short, parse("c1 = c2"))
    known = DecisionContext(zp(2), params, DiagramEnumeration(["c1", "c2"], ["c1=0"]), fuel=3)
    assert tree_decide(known, parse("c1 = 0"))

def test_free_symbols_must_be_parameters():
    with pytest.raises(ArityMismatch):
        tree_decide(closed(zp(2)), parse("EX G. c = 2*G"))
    with pytest.raises(ArityMismatch):
        DecisionContext(zp(2), {"c": from_integer(2, 1)}, RelationLattice(["d"]))

def test_skolem_solution():
    ctx = DecisionContext(zp(3), {"c1": from_integer(3, 1)}, RelationLattice(["c1"]))
    res = skolem(ctx, parse("EX G. c1 = 2*G"))
    assert res.applicable
    assert res.variables == ("G",)
    assert res.paths[0].prefix(4) == (2, 5, 14, 41)

def test_skolem_with_inequation():
    params = {"c1": from_integer(3, 1), "c2": from_integer(3, 2)}
    ctx = DecisionContext(zp(3), params, RelationLattice(["c1", "c2"], [[2, -1]]))
    res = skolem(ctx, parse("EX G. c1 = 2*G & G != c2"))
    assert res.paths[0].prefix(4) == (2, 5, 14, 41)

def test_skolem_avoids_points():
    ctx = DecisionContext(zp(3), {"c": from_integer(3, 0)}, RelationLattice(["c"], [[1]]))
    g = skolem(ctx, parse("EX G. G != c")).paths[0]
    assert isinstance(apart_semidecide(g, from_integer(3, 0), 5), Witness)

def test_skolem_residue_conditions():
    # G must be 1 mod 2 and differ from c = 1
    ctx = DecisionContext(zp(2), {"c": from_integer(2, 1)}, RelationLattice(["c"]))
    g = skolem(ctx, parse("EX G. (EX H. G = 2*H + c) & G != c")).paths[0]
    assert g.label(1) == 1
    assert isinstance(apart_semidecide(g, from_integer(2, 1), 8), Witness)

def test_skolem_two_variables():
    ctx = DecisionContext(zp(5), {"c": from_integer(5, 3)}, RelationLattice(["c"]))
    res = skolem(ctx, parse("EX G. EX H. c = G + H & G = 2*H"))
    assert res.variables == ("G", "H")
    assert_same_prefix(res.paths[0], from_integer(5, 2), 4)
    assert_same_prefix(res.paths[1], from_integer(5, 1), 4)

def test_skolem_zhat():
    ctx = DecisionContext(ZhatStructure(), {"c": zhat_from_integer(10)}, RelationLattice(["c"]))
    g = skolem(ctx, parse("EX G. c = 2*G")).paths[0]
    assert_same_prefix(g, zhat_from_integer(5), 8)

def test_skolem_not_applicable():
    ctx = DecisionContext(zp(2), {"c": from_integer(2, 1)}, RelationLattice(["c"]))
    res = skolem(ctx, parse("EX G. c = 2*G"))
    assert not res.applicable
    assert res.paths[0].prefix(3) == (0, 0, 0)

def test_skolem_errors():
    ctx = DecisionContext(zp(2), {"c": from_integer(2, 1)}, RelationLattice(["c"]))
    with pytest.raises(DisjunctionPresent):
        skolem(ctx, parse("EX G. c = 2*G | c = G"))
    units = DecisionContext(UnitGroup(3), {}, RelationLattice([], (), "multiplicative"))
    with pytest.raises(UnsupportedStructure):
        skolem(units, parse("EX G. G = 1", "multiplicative"))

def test_atom_helper():
    # equations with both sides equal hold at any parameters
    ctx = DecisionContext(zp(2), {"c": from_integer(2, 1)}, RelationLattice(["c"]))
    assert tree_decide(ctx, Atom(Term.symbol("c"), Term.symbol("c")))

############### metamorphic ###############
def scaled(f, s):
    # every atom multiplied by s on both sides
    if isinstance(f, Atom):
        return Atom(f.lhs.scale(s), f.rhs.scale(s))
    if isinstance(f, Not):
        return Not(scaled(f.body, s))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(scaled(a, s) for a in f.args))
    if isinstance(f, (Exists, ForAll)):
        return type(f)(f.var, scaled(f.body, s))
    return f

@pytest.mark.parametrize("structure,text,truth", sentences)
def test_metamorphic_invariance(structure, text, truth):
    renamed = text.replace("F", "U").replace("G", "V").replace("H", "W")
    variants = [
        parse(renamed),
        scaled(parse(text), 3),
        scaled(parse(text), -2),
        Not(Not(parse(text))),
        to_prenex(parse(text)),
    ]
    for f in variants:
        assert tree_decide(closed(structure), f) is truth

def renamed(f, mapping):
    # symbols and bound variables renamed through mapping
    def term(t):
        return Term(tuple((mapping.get(k, k), c) for (k, c) in t.coeffs), t.flavor)
    if isinstance(f, Atom):
        return Atom(term(f.lhs), term(f.rhs))
    if isinstance(f, Not):
        return Not(renamed(f.body, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(renamed(a, mapping) for a in f.args))
    if isinstance(f, (Exists, ForAll)):
        return type(f)(mapping.get(f.var, f.var), renamed(f.body, mapping))
    return f

@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from([2, 3, 5]), additive_formulas())
def test_metamorphic_invariance_fuzzed(p, f):
    # a unit of Z_p, so the residue moduli of the elimination stay the same
    unit = 3 if p == 2 else 2
    variants = [
        f,
        renamed(f, {"F": "U", "G": "V"}),
        renamed(f, {"F": "G", "G": "F"}),
        scaled(f, unit),
        scaled(f, -1),
        Not(Not(f)),
        to_prenex(f),
    ]
    ctx = closed(zp(p))
    try:
        truths = [tree_decide(ctx, g) for g in variants]
    except TooLarge:
        reject()
    assert all(t is truths[0] for t in truths), f"{f}: {truths}"
