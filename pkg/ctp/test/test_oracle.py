import pytest
from ctp.logic.parser import parse
from ctp.oracle.adversary import (PrefixStub, skolem_stubs, decision_stubs, get_stub,
                                  or_issue_adversary, product_units_adversary,
                                  units_product_presentation, square_parameter)
from ctp.oracle.finite_model import (FiniteModel, evaluate_cyclic, finite_model_check,
                                     solvable_mod_tower)
from ctp.structure.zp_additive import LinearEquation, from_integer, get_presentation
from ctp.structure.zp_units import UnitLabelPath
from ctp.tree.product import project
from ctp.utils.errors import ArityMismatch, StubDiverged, TooLarge, ZeroRhs

halving = [(2, 1, False), (2, 3, False), (3, 1, True), (3, 2, True), (5, 2, True)]

@pytest.mark.parametrize("p,n,truth", halving)
def test_finite_model_halving(p, n, truth):
    f = parse("ALL F. EX G. G + G = F")
    assert finite_model_check(FiniteModel(p, n), f) == truth

def test_finite_model_params():
    f = parse("EX G. F = 2*G & G != H")
    assert evaluate_cyclic(f, 8, {"F": 6, "H": 3})
    assert not evaluate_cyclic(f, 8, {"F": 3, "H": 0})
    # modulo 8, 2*G = 4 has the solutions 2 and 6
    assert evaluate_cyclic(f, 8, {"F": 4, "H": 2})
    assert evaluate_cyclic(parse("F = 0 | ~(F = 0)"), 5, {"F": -3})
    assert evaluate_cyclic(parse("ALL G. EX H. G = H + H + H"), 7)
    assert not evaluate_cyclic(parse("ALL G. EX H. G = H + H + H"), 9)

def test_finite_model_errors():
    with pytest.raises(AssertionError):
        FiniteModel(2, 0)
    assert FiniteModel(3, 4).modulus == 81
    with pytest.raises(ArityMismatch):
        evaluate_cyclic(parse("EX G. F = G"), 4)
    with pytest.raises(TooLarge):
        evaluate_cyclic(parse("EX F. EX G. EX H. F = G + H"), 1000)

towers = [
    ((1,), 2, [1], 3, 2, True),
    ((1,), 3, [1], 3, 2, False),
    ((1,), 3, [3], 3, 3, True),
    ((1, 1), 4, [1, 3], 2, 3, True),
    ((1, 1), 4, [1, 2], 2, 3, False),
]

@pytest.mark.parametrize("coeffs,b,f,p,N,truth", towers)
def test_solvable_mod_tower(coeffs, b, f, p, N, truth):
    assert solvable_mod_tower(LinearEquation(coeffs, b), f, p, N) == truth

def test_solvable_mod_tower_errors():
    with pytest.raises(ZeroRhs):
        solvable_mod_tower(LinearEquation((1,), 0), [1], 2, 2)
    with pytest.raises(ArityMismatch):
        solvable_mod_tower(LinearEquation((1, 2), 1), [1], 2, 2)

############### adversaries ###############
def test_stub_use():
    stub = PrefixStub("greedy", 2, lambda pre, n: pre[0][5])
    with pytest.raises(StubDiverged):
        stub.run([from_integer(2, 1)])
    stub = PrefixStub("echo", 3, lambda pre, n: pre[0][n - 1])
    assert stub.output_prefix([from_integer(3, 5)], 3) == (2, 5, 5)

def test_get_stub():
    assert get_stub("skolem", "copy-f", 4, p=3).use == 4
    assert get_stub("decide", "true", 2).name == "true"
    with pytest.raises(ValueError, match="Unknown skolem stub"):
        get_stub("skolem", "oracle", 3)

def test_or_issue_perturbation():
    stub = get_stub("skolem", "const1", 3)
    cert = or_issue_adversary(stub, from_integer(2, 0), get_presentation(2), depth=6)
    assert cert.p_prefix == (0,) * 6
    assert cert.r_prefix == (0, 0, 0, 8, 8, 8)
    assert cert.output_prefix == (1,) * 6
    assert cert.instance == "(P,R)"
    assert cert.level == 1

or_issue_cases = [(2, 3), (3, 2), (5, 4)]

@pytest.mark.parametrize("p,use", or_issue_cases)
def test_or_issue_defeats_every_stub(p, use):
    P = from_integer(p, p + 2)
    for stub in skolem_stubs(p, use):
        cert = or_issue_adversary(stub, P, get_presentation(p), depth=8)
        assert cert.p_prefix[:use] == cert.r_prefix[:use]
        assert cert.p_prefix[use] != cert.r_prefix[use]
        if cert.instance == "(P,R)":
            # the unique witness at (P, R) is P
            n = cert.level
            assert cert.output_prefix[n - 1] != cert.p_prefix[n - 1]
            assert cert.output_prefix[:n - 1] == cert.p_prefix[:n - 1]
        else:
            # P is the one path excluded at (P, P)
            assert cert.instance == "(P,P)"
            assert cert.level is None
            assert cert.output_prefix == cert.p_prefix[:8]

def test_or_issue_kinds():
    P = from_integer(2, 0)
    kinds = {s.name: or_issue_adversary(s, P, get_presentation(2), depth=6).instance
             for s in skolem_stubs(2, 3)}
    assert kinds["const0"] == "(P,P)"
    assert kinds["copy-f"] == "(P,P)"
    assert kinds["copy-g"] == "(P,P)"
    assert kinds["flip-f"] == "(P,R)"

def test_square_parameter():
    f = square_parameter()
    assert project(f, 0).prefix(3) == (1, 1, 1)
    assert project(f, 1).prefix(2) == (1, 1)
    assert project(f, 3).prefix(2) == (4, 4)
    g = square_parameter((7, UnitLabelPath.from_integer(7, 3)))
    assert project(g, 3).prefix(2) == (3, 3)
    assert project(g, 2).prefix(2) == (4, 4)
    assert units_product_presentation().decode_level(10) == (3, 1)

unread_primes = [(1, 3, 2), (6, 7, 3), (10, 11, 2), (21, 17, 3)]

@pytest.mark.parametrize("use,p,y", unread_primes)
def test_product_units_alteration(use, p, y):
    cert = product_units_adversary(get_stub("decide", "true", use), depth=12)
    assert cert.prime == p
    assert cert.generator == y
    assert cert.truth_f
    assert not cert.truth_f_altered
    assert len(cert.seen_prefix) == use

@pytest.mark.parametrize("use", [3, 6, 15])
def test_product_units_defeats_every_stub(use):
    for stub in decision_stubs(use):
        cert = product_units_adversary(stub, depth=12)
        # the stub is wrong at one of the two parameters it can not tell apart
        assert cert.truth_f != cert.truth_f_altered
        wrong = cert.answer != cert.truth_f if cert.instance == "f" else \
            cert.answer != cert.truth_f_altered
        assert wrong

def test_product_units_answers():
    assert product_units_adversary(get_stub("decide", "false", 6)).instance == "f"
    assert product_units_adversary(get_stub("decide", "seen-coordinates", 6)).instance == "f'"
