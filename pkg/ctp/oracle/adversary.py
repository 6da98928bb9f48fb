from __future__ import annotations
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple
from ctp.arith.ladder import least_generator
from ctp.logic.lattice import RelationLattice
from ctp.structure.zhat import prime_at
from ctp.structure.zp_units import UnitLabelPath, get_unit_presentation, iso_backward
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path
from ctp.tree.product import ProductPresentation, ProductPath, product_infinite, splice
from ctp.utils.config import config
from ctp.utils.datastruct import Label
from ctp.utils.errors import StubDiverged
from ctp.utils.misc import logger, get_option

__all__ = ["PrefixStub", "OrIssueCertificate", "ProductUnitsCertificate",
           "skolem_stubs", "decision_stubs", "get_stub",
           "or_issue_adversary", "product_units_adversary", "units_product_presentation",
           "square_parameter",
           "OR_ISSUE_FORMULA", "SQUARE_FORMULA"]

# the formula with a unique witness H = F when F != G and no computable witness
OR_ISSUE_FORMULA = "EX H. (F = G & F != H) | (F != G & F = H)"
# multiplicative, over the product of all the Z_p^x
SQUARE_FORMULA = "EX G. F = G*G"

Prefixes = Sequence[Tuple[Label, ...]]

@dataclass(frozen=True)
class PrefixStub:
    """
    A purported procedure seen only through finite prefixes of its inputs.

    Attributes
    ----------
    * name: str
        Name used in the certificates and by the command line.
    * use: int
        Number of labels of each input the stub may read.
    * fcn: Callable[[Prefixes, int], Any]
        ``fcn(prefixes, level)``: a Skolem stub returns the label of its
        output path at ``level``, a decision stub returns a bool and ignores
        ``level``.
    """
    name: str
    use: int
    fcn: Callable[[Prefixes, int], Any]

    def run(self, paths: Sequence[Path], level: int = 1) -> Any:
        # the stub only ever receives the first ``use`` labels
        prefixes = [p.prefix(self.use) for p in paths]
        try:
            return self.fcn(prefixes, level)
        except IndexError:
            raise StubDiverged(f"Stub {self.name} read beyond its declared use of {self.use}")

    def output_prefix(self, paths: Sequence[Path], depth: int) -> Tuple[Label, ...]:
        return tuple(self.run(paths, level) for level in range(1, depth + 1))

############### stub library ###############
def _coherent(label: int, p: int, level: int) -> int:
    return label % p ** level

def skolem_stubs(p: int, use: int) -> List[PrefixStub]:
    """
    Candidate witness procedures for the formula with inputs ``(F, G)`` over
    T_p^+, each of use ``use``: constants, copiers, a shifted copy and a
    hash of the seen prefixes.
    """
    def last(prefix: Tuple[Label, ...], level: int) -> int:
        return int(prefix[min(level, use) - 1])  # type: ignore

    return [
        PrefixStub("const0", use, lambda pre, n: 0),
        PrefixStub("const1", use, lambda pre, n: _coherent(1, p, n)),
        PrefixStub("copy-f", use, lambda pre, n: _coherent(last(pre[0], n), p, n)),
        PrefixStub("copy-g", use, lambda pre, n: _coherent(last(pre[1], n), p, n)),
        PrefixStub("flip-f", use, lambda pre, n: _coherent(last(pre[0], n) + 1, p, n)),
        PrefixStub("prefix-hash", use,
                   lambda pre, n: _coherent(hash(tuple(pre[0]) + tuple(pre[1])) & 0xffff, p, n)),
    ]

def decision_stubs(use: int) -> List[PrefixStub]:
    """
    Candidate deciders of the square formula over the product of the Z_p^x,
    each reading ``use`` labels of the spliced parameter.
    """
    def seen_squares(pre: Prefixes, _: int) -> bool:
        # every coordinate seen at level 1 is a square modulo its prime
        product = units_product_presentation()
        for (level, label) in enumerate(pre[0], start=1):
            i, l = product.decode_level(level)
            p = prime_at(i)
            if l == 1 and p > 2 and pow(int(label), (p - 1) // 2, p) != 1:  # type: ignore
                return False
        return True

    return [
        PrefixStub("true", use, lambda pre, n: True),
        PrefixStub("false", use, lambda pre, n: False),
        PrefixStub("prefix-hash", use, lambda pre, n: hash(tuple(pre[0])) % 2 == 0),
        PrefixStub("first-label", use, lambda pre, n: int(pre[0][0]) == 1),  # type: ignore
        PrefixStub("seen-coordinates", use, seen_squares),
    ]

def get_stub(kind: str, name: str, use: int, p: int = 2) -> PrefixStub:
    stubs = skolem_stubs(p, use) if kind == "skolem" else decision_stubs(use)
    return get_option(f"{kind} stub", name, {s.name: s for s in stubs})

############### or-issue ###############
@dataclass(frozen=True)
class OrIssueCertificate:
    """
    A wrong answer of a Skolem stub for ``OR_ISSUE_FORMULA``.

    Attributes
    ----------
    * stub: str
        Name of the stub.
    * p_prefix, r_prefix: Tuple[Label, ...]
        Prefixes of the inputs ``P`` and ``R``, equal up to the use of the
        stub and different right after it.
    * output_prefix: Tuple[Label, ...]
        The stub output, the same on ``(P, P)`` and ``(P, R)``.
    * instance: str
        ``"(P,R)"`` if the output differs from the unique witness ``P`` of
        ``(P, R)`` at ``level``, ``"(P,P)"`` if it agrees with ``P``, the
        one excluded witness of ``(P, P)``, on every inspected level.
    * level: Optional[int]
        The level of the disagreement, None for the second kind.
    """
    stub: str
    p_prefix: Tuple[Label, ...]
    r_prefix: Tuple[Label, ...]
    output_prefix: Tuple[Label, ...]
    instance: str
    level: Optional[int]

def or_issue_adversary(stub: PrefixStub, P: Path, presentation: TreePresentation,
                       depth: Optional[int] = None) -> OrIssueCertificate:
    """
    Defeat a stub claiming to compute witnesses of ``OR_ISSUE_FORMULA``.
    On ``(P, P)`` every ``H != P`` is a witness, on ``(P, R)`` with ``R != P``
    the only one is ``P``. ``R`` agrees with ``P`` beyond the use of the stub,
    which thus answers both instances with the same path, and that path can
    not be right twice.

    Arguments
    ---------
    * stub: PrefixStub
        The stub, called with the inputs ``(F, G)``.
    * P: Path
        A path of ``presentation``, not isolated.
    * presentation: TreePresentation
        The presentation, its ``perturb`` provides ``R``.
    * depth: Optional[int]
        Number of output levels inspected, ``config.SEARCH_DEPTH`` if None.

    Returns
    -------
    * OrIssueCertificate
        The instance where the stub fails.
    """
    depth = config.SEARCH_DEPTH if depth is None else depth
    R = presentation.perturb(P, stub.use)
    logger.log(f"or-issue: R differs from P at level {stub.use + 1}", vlevel=1)
    same = stub.output_prefix([P, P], depth)
    out = stub.output_prefix([P, R], depth)
    if out != same:
        raise StubDiverged(f"Stub {stub.name} answered differently on equal prefixes")
    width = max(depth, stub.use + 1)
    p_prefix, r_prefix = P.prefix(width), R.prefix(width)
    assert p_prefix[:stub.use] == r_prefix[:stub.use] and p_prefix != r_prefix
    level = next((n for n in range(1, depth + 1) if out[n - 1] != P.label(n)), None)
    instance = "(P,R)" if level is not None else "(P,P)"
    return OrIssueCertificate(stub.name, p_prefix, r_prefix, out, instance, level)

############### product of units ###############
def units_product_presentation() -> ProductPresentation:
    # the product of the Z_p^x over all the primes, spliced by Cantor pairing
    return _UNITS_PRODUCT

_UNITS_PRODUCT = product_infinite(lambda i: get_unit_presentation(prime_at(i)), name="ProdUnits")

def square_parameter(override: Optional[Tuple[int, UnitLabelPath]] = None) -> ProductPath:
    """
    The parameter ``(1, 1, 4, 4, ...)``: 1 at the primes 2 and 3, 4 at the
    others. ``override = (p, x)`` replaces the coordinate at ``p`` by ``x``.
    """
    def coordinate(i: int) -> Path:
        p = prime_at(i)
        if override is not None and override[0] == p:
            return override[1]
        return UnitLabelPath.from_integer(p, 1 if p <= 3 else 4)
    return splice(coordinate, _UNITS_PRODUCT)

@dataclass(frozen=True)
class ProductUnitsCertificate:
    """
    A wrong answer of a decision stub for ``SQUARE_FORMULA`` over the
    product of the Z_p^x.

    Attributes
    ----------
    * stub: str
        Name of the stub.
    * answer: bool
        The answer of the stub on both parameters.
    * instance: str
        ``"f"`` if the answer is wrong on ``(1, 1, 4, 4, ...)`` itself,
        ``"f'"`` if it is wrong on the altered parameter.
    * prime: int
        The altered coordinate, unread by the stub.
    * generator: int
        The label of the altered coordinate at level 1, a generator of
        (Z/pZ)^x.
    * truth_f, truth_f_altered: bool
        The verified truth of the formula on both parameters.
    * seen_prefix: Tuple[Label, ...]
        What the stub read, common to both parameters.
    """
    stub: str
    answer: bool
    instance: str
    prime: int
    generator: int
    truth_f: bool
    truth_f_altered: bool
    seen_prefix: Tuple[Label, ...]

def _unread_prime(use: int) -> Tuple[int, int]:
    # the first odd prime whose coordinate does not appear in the first ``use`` levels
    i = 1
    while _UNITS_PRODUCT.splice_level(i, 1) <= use:
        i += 1
    return i, prime_at(i)

def _is_square(x: Path, p: int) -> bool:
    # p odd: squares have an even torsion part, the free part is always halved
    return iso_backward(x, p).x % 2 == 0

def _square_root() -> ProductPath:
    return splice(lambda i: UnitLabelPath.from_integer(prime_at(i), 1 if i <= 1 else 2),
                  _UNITS_PRODUCT)

def product_units_adversary(stub: PrefixStub, depth: Optional[int] = None) \
        -> ProductUnitsCertificate:
    """
    Defeat a stub claiming to decide ``SQUARE_FORMULA`` at a parameter of
    the product of the Z_p^x from a prefix of the parameter and the fixed
    diagram of an infinite cyclic group. The formula holds at
    ``f = (1, 1, 4, 4, ...)``, the square of ``(1, 1, 2, 2, ...)``; changing a
    coordinate the stub did not read into a generator modulo an odd prime
    makes it false while the stub sees the same input.

    Arguments
    ---------
    * stub: PrefixStub
        The decision stub, called with the single parameter ``F``.
    * depth: Optional[int]
        Number of spliced levels on which ``f`` is checked against the square
        of its root, ``config.SEARCH_DEPTH`` if None.
    """
    depth = config.SEARCH_DEPTH if depth is None else depth
    diagram = RelationLattice(["F"], [], "multiplicative")
    f = square_parameter()
    root = _square_root()
    mul = _UNITS_PRODUCT.functionals["mul"]
    truth_f = mul(root, root).prefix(depth) == f.prefix(depth)
    seen = f.prefix(stub.use)
    answer = stub.run([f])

    i, p = _unread_prime(stub.use)
    y = least_generator(p)
    logger.log(f"product-units: coordinate {i} (p = {p}) becomes {y} under the diagram {diagram}",
               vlevel=1)
    x = UnitLabelPath.from_integer(p, y)
    f_altered = square_parameter((p, x))
    if f_altered.prefix(stub.use) != seen:
        raise StubDiverged(f"The coordinate at {p} is read within the use {stub.use}")
    if stub.run([f_altered]) != answer:
        raise StubDiverged(f"Stub {stub.name} answered differently on equal prefixes")
    truth_altered = _is_square(x, p)
    instance = "f" if bool(answer) != truth_f else "f'"
    return ProductUnitsCertificate(stub.name, bool(answer), instance, p, y, truth_f,
                                   truth_altered, seen)
