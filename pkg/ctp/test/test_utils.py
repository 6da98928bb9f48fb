import pytest
from ctp.utils.config import config
from ctp.utils.errors import CTPError, NotAUnit, PathExprTypeError, FuelExhausted, UnsupportedFormula, \
    FormulaSyntaxError
from ctp.utils.misc import logger, get_option, memoize_method, natural_key

def test_logger(capsys):
    # test if logger behaves correctly, the messages go to stderr
    s = "Hello world"
    logger.log(s)
    captured = capsys.readouterr()
    assert captured.err == ""

    config.VERBOSE = 1
    logger.log(s)
    captured = capsys.readouterr()
    assert captured.err == s + "\n"
    assert captured.out == ""

    logger.log(s, vlevel=1)
    captured = capsys.readouterr()
    assert captured.err == ""

    # restore the verbosity level to 0
    config.VERBOSE = 0

def test_get_option():
    opts = {"zp+": 1, "zhat": 2}
    assert get_option("structure", "zhat", opts) == 2
    with pytest.raises(ValueError, match="Unknown structure: foo"):
        get_option("structure", "foo", opts)

def test_memoize_method():
    class A(object):
        def __init__(self):
            self.ncalls = 0

        @memoize_method
        def value(self):
            self.ncalls += 1
            return 42

    a = A()
    assert a.value() == 42
    assert a.value() == 42
    assert a.ncalls == 1

def test_natural_key():
    names = ["c10", "c2", "F", "c1"]
    assert sorted(names, key=natural_key) == ["F", "c1", "c2", "c10"]

def test_errors_hierarchy():
    assert issubclass(NotAUnit, ValueError) and issubclass(NotAUnit, CTPError)
    assert issubclass(PathExprTypeError, TypeError)
    assert issubclass(FuelExhausted, RuntimeError)
    assert issubclass(UnsupportedFormula, NotImplementedError)
    e = FormulaSyntaxError(3, "unexpected token")
    assert e.position == 3
    assert "position 3" in str(e)
