from __future__ import annotations
import functools
from typing import Callable, Optional, Sequence, Tuple
from sympy import factorint, prime, primepi
from ctp.arith.residue import crt_residue
from ctp.structure.base_structure import BaseStructure
from ctp.structure.zp_additive import (PadicInt, LinearEquation, Unique, from_integer,
                                       get_presentation, linear_combination, solve_linear)
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path
from ctp.tree.product import ProductPresentation, ProductPath, product_infinite, project, splice
from ctp.utils.errors import BadCoordinate, DenominatorNotUnit

__all__ = ["prime_at", "prime_index", "get_zhat_presentation", "zhat_from_coordinates",
           "zhat_from_integer", "coordinate", "override", "residue_mod", "zhat_solve", "ZhatStructure"]

@functools.lru_cache(maxsize=None)
def prime_at(i: int) -> int:
    # the i-th prime, counting from prime_at(0) = 2
    return int(prime(i + 1))

@functools.lru_cache(maxsize=None)
def prime_index(p: int) -> int:
    return int(primepi(p)) - 1

@functools.lru_cache(maxsize=None)
def get_zhat_presentation() -> ProductPresentation:
    """
    The profinite integers as the product of the trees T_p^+ over all the
    primes, coordinate ``i`` being the ``i``-th prime.
    """
    return product_infinite(lambda i: get_presentation(prime_at(i)), name="Zhat")

def zhat_from_coordinates(coords: Callable[[int], PadicInt]) -> ProductPath:
    # coords(p) is the coordinate at the prime p
    return splice(lambda i: coords(prime_at(i)), get_zhat_presentation())

def zhat_from_integer(z: int) -> ProductPath:
    return zhat_from_coordinates(lambda p: from_integer(p, z))

def coordinate(x: Path, p: int) -> PadicInt:
    """
    The Z_p coordinate of the profinite integer ``x``.
    """
    if prime_at(prime_index(p)) != p:
        raise BadCoordinate(f"{p} is not a prime coordinate of Zhat")
    c = project(x, prime_index(p))
    if isinstance(c, PadicInt):
        return c
    return PadicInt(p, c.label)

def override(x: Path, p: int, coord: PadicInt) -> ProductPath:
    """
    The profinite integer equal to ``x`` except at the coordinate ``p``.
    """
    if coord.p != p:
        raise BadCoordinate(f"A Z_{coord.p} element cannot be the Z_{p} coordinate")
    return zhat_from_coordinates(lambda q: coord if q == p else coordinate(x, q))

def residue_mod(x: Path, m: int) -> int:
    """
    ``x mod m``, combined by CRT from the coordinates at the primes dividing ``m``.
    """
    fac = factorint(m)
    moduli = [int(q) ** int(e) for (q, e) in fac.items()]
    residues = [int(coordinate(x, int(q)).label(int(e))) for (q, e) in fac.items()]  # type: ignore
    return crt_residue(moduli, residues).value

def zhat_solve(eq: LinearEquation, f: Sequence[Path]) -> Optional[ProductPath]:
    """
    The solution of ``sum_i a_i f_i = b G`` in Zhat, ``b != 0``, or None if
    some coordinate has no solution. Only the primes dividing ``b`` can fail.
    """
    eq = eq.normalized()
    assert eq.b != 0
    for (q, _) in factorint(eq.b).items():
        if not isinstance(solve_linear(eq, [coordinate(x, int(q)) for x in f], p=int(q)), Unique):
            return None

    def coord(p: int) -> PadicInt:
        res = solve_linear(eq, [coordinate(x, p) for x in f], p=p)
        assert isinstance(res, Unique)
        return res.solution

    return zhat_from_coordinates(coord)

class ZhatStructure(BaseStructure):
    """
    The profinite integers presented as the product of the T_p^+.
    """
    @property
    def name(self) -> str:
        return "zhat"

    @property
    def presentation(self) -> TreePresentation:
        return get_zhat_presentation()

    @property
    def tower_prime(self) -> int:
        return 2

    def from_integer(self, z: int) -> Path:
        return zhat_from_integer(z)

    def from_rational(self, num: int, den: int) -> Path:
        if abs(den) != 1:
            raise DenominatorNotUnit(f"{den} is not a unit in Zhat")
        return zhat_from_integer(num * den)

    def combination(self, coeffs: Sequence[int], paths: Sequence[Path]) -> Path:
        return zhat_from_coordinates(
            lambda p: linear_combination(coeffs, [coordinate(x, p) for x in paths], p))

    def split_coefficient(self, b: int) -> Tuple[int, int]:
        assert b != 0
        return abs(b), (1 if b > 0 else -1)

    def normalize_modulus(self, m: int) -> int:
        return abs(m)

    def residue(self, x: Path, m: int) -> int:
        return residue_mod(x, m) if m > 1 else 0

    def solve(self, coeffs: Sequence[int], b: int, paths: Sequence[Path]) -> Optional[Path]:
        return zhat_solve(LinearEquation(tuple(coeffs), b), paths)
