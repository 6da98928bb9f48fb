from __future__ import annotations
import math
import threading
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path, PrefixFunctional, NeedMoreInput, EvalResult
from ctp.utils.datastruct import Label
from ctp.utils.errors import BadCoordinate, SignatureMismatch

__all__ = ["cantor_pair", "cantor_unpair", "ProductPresentation", "ProductPath",
           "product_finite", "product_infinite", "project", "splice"]

def cantor_pair(i: int, l: int) -> int:
    return (i + l) * (i + l + 1) // 2 + i

def cantor_unpair(z: int) -> Tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    i = z - w * (w + 1) // 2
    return i, w - i

class ProductPresentation(TreePresentation):
    """
    Direct product of presentations. Factor ``i`` contributes its level ``l``
    at the spliced level ``splice_level(i, l)``: level ``n * (l - 1) + i + 1``
    for ``n`` factors, and level ``<i, l - 1> + 1`` (Cantor pairing) for an
    infinite family.

    Arguments
    ---------
    * factors: Sequence[TreePresentation] or Callable[[int], TreePresentation]
        The finite list of factors, or the function ``i -> factor`` of a
        uniformly presented infinite family.
    * name: Optional[str]
        Identifier of the product, generated from the factors if not given.
    """
    def __init__(self, factors: Union[Sequence[TreePresentation], Callable[[int], TreePresentation]],
                 name: Optional[str] = None):
        if callable(factors):
            self._family = factors
            self.nfactors: Optional[int] = None
        else:
            factors = list(factors)
            assert len(factors) >= 1, "A product needs at least one factor"
            self._family = factors.__getitem__
            self.nfactors = len(factors)
        self._factor_cache: Dict[int, TreePresentation] = {}
        self._lock = threading.Lock()
        self._name = name if name is not None else self._default_name()
        self._functionals = self._construct_functionals()

    def factor(self, i: int) -> TreePresentation:
        if i < 0 or (self.nfactors is not None and i >= self.nfactors):
            raise BadCoordinate(f"The product has no coordinate {i}")
        with self._lock:
            if i not in self._factor_cache:
                self._factor_cache[i] = self._family(i)
            return self._factor_cache[i]

    ############### level bookkeeping ###############
    def splice_level(self, i: int, l: int) -> int:
        # spliced level carrying level l (>= 1) of factor i
        if self.nfactors is not None:
            return self.nfactors * (l - 1) + i + 1
        return cantor_pair(i, l - 1) + 1

    def decode_level(self, level: int) -> Tuple[int, int]:
        # inverse of splice_level
        if self.nfactors is not None:
            return (level - 1) % self.nfactors, (level - 1) // self.nfactors + 1
        i, l = cantor_unpair(level - 1)
        return i, l + 1

    def factor_prefix(self, prefix: Sequence[Label], i: int) -> Tuple[Label, ...]:
        # labels of factor i readable from a spliced prefix
        res = []
        l = 1
        while self.splice_level(i, l) <= len(prefix):
            res.append(prefix[self.splice_level(i, l) - 1])
            l += 1
        return tuple(res)

    ############### tree interface ###############
    @property
    def name(self) -> str:
        return self._name

    @property
    def functionals(self) -> Dict[str, PrefixFunctional]:
        return self._functionals

    @property
    def coherent(self) -> bool:
        return False

    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        if len(node) == 0:
            return True
        nmax = max(self.decode_level(lvl)[0] for lvl in range(1, len(node) + 1)) + 1
        return all(self.factor(i).is_valid(self.factor_prefix(node, i)) for i in range(nmax))

    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        i, _ = self.decode_level(len(node) + 1)
        return self.factor(i).children(self.factor_prefix(node, i))

    def perturb(self, path: Path, level: int) -> Path:
        i, l = self.decode_level(level + 1)
        coords = _coordinate_getter(path, self)
        changed = self.factor(i).perturb(coords(i), l - 1)
        return splice(lambda j: changed if j == i else coords(j), self)

    ############### private functions ###############
    def _default_name(self) -> str:
        if self.nfactors is None:
            return f"prod[{self.factor(0).name},...]"
        return "prod[" + ",".join(self.factor(i).name for i in range(self.nfactors)) + "]"

    def _construct_functionals(self) -> Dict[str, PrefixFunctional]:
        sig = self.factor(0).signature
        if self.nfactors is not None:
            for i in range(1, self.nfactors):
                if self.factor(i).signature != sig:
                    raise SignatureMismatch(
                        f"Factor {i} has signature {self.factor(i).signature}, expected {sig}")
        return {sym: self._coordinatewise(sym, arity) for (sym, arity) in sig.items()}

    def _coordinatewise(self, sym: str, arity: int) -> PrefixFunctional:
        # decode the inputs, run the factor's functional, re-splice
        def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
            i, l = self.decode_level(level)
            fprefixes = [self.factor_prefix(pref, i) for pref in prefixes]
            res = self.factor(i).functionals[sym].evaluate(fprefixes, l)
            if isinstance(res, NeedMoreInput):
                return NeedMoreInput(self.splice_level(i, res.depth))
            label, use = res
            return label, (self.splice_level(i, use) if use > 0 else 0)

        return PrefixFunctional(evaluator, arity, self.name, sym,
                                make_path=lambda fcn, name: ProductPath(fcn, self))

class ProductPath(Path):
    """
    Path of a product presentation.
    """
    def __init__(self, fcn: Callable[[int], Label], product: ProductPresentation,
                 coordinates: Optional[Callable[[int], Path]] = None):
        super().__init__(fcn, product.name)
        self.product = product
        self._coordinates = coordinates

def _coordinate_getter(path: Path, product: ProductPresentation) -> Callable[[int], Path]:
    coords = getattr(path, "_coordinates", None)
    if coords is not None:
        return coords
    return lambda i: project(path, i)

def product_finite(presentations: Sequence[TreePresentation]) -> ProductPresentation:
    return ProductPresentation(list(presentations))

def product_infinite(family: Callable[[int], TreePresentation], name: Optional[str] = None) \
        -> ProductPresentation:
    return ProductPresentation(family, name=name)

def project(path: Path, i: int) -> Path:
    """
    The path of factor ``i`` encoded in the product path ``path``.
    """
    if not isinstance(path, ProductPath):
        raise BadCoordinate(f"{path} is not a path of a product presentation")
    factor = path.product.factor(i)
    coords = path._coordinates
    if coords is not None:
        return coords(i)
    return Path(lambda l: path.label(path.product.splice_level(i, l)), factor.name)

def splice(paths: Union[Sequence[Path], Callable[[int], Path]], product: ProductPresentation) \
        -> ProductPath:
    """
    The product path whose coordinates are ``paths`` (a list for a finite
    product, a function of the coordinate for an infinite one).
    """
    if callable(paths):
        getter = paths
    else:
        plist = list(paths)
        if product.nfactors is not None and len(plist) != product.nfactors:
            raise BadCoordinate(f"The product has {product.nfactors} coordinates, got {len(plist)}")
        getter = plist.__getitem__

    cache: Dict[int, Path] = {}
    lock = threading.Lock()

    def coordinate(i: int) -> Path:
        with lock:
            if i not in cache:
                cache[i] = getter(i)
            return cache[i]

    def fcn(level: int) -> Label:
        i, l = product.decode_level(level)
        return coordinate(i).label(l)

    return ProductPath(fcn, product, coordinates=coordinate)
