from __future__ import annotations
from dataclasses import dataclass
from typing import Tuple, Sequence
from sympy import n_order
from sympy.ntheory.modular import crt
from ctp.utils.errors import NotAUnit, ZeroInput

__all__ = ["Residue", "egcd", "mod_inv", "p_valuation", "order_mod", "crt_residue"]

@dataclass(frozen=True)
class Residue:
    """
    Element of Z/mZ stored as its least non-negative representative.

    Attributes
    ----------
    * value: int
        The representative, ``0 <= value < modulus``.
    * modulus: int
        The positive modulus.
    """
    value: int
    modulus: int

    def __post_init__(self):
        assert self.modulus >= 1, "The modulus must be positive"
        assert 0 <= self.value < self.modulus, \
            f"{self.value} is not a reduced residue modulo {self.modulus}"

    @staticmethod
    def of(a: int, m: int) -> Residue:
        return Residue(a % m, m)

    def __int__(self) -> int:
        return self.value

    def __add__(self, other: Residue) -> Residue:
        assert self.modulus == other.modulus
        return Residue.of(self.value + other.value, self.modulus)

    def __mul__(self, other: Residue) -> Residue:
        assert self.modulus == other.modulus
        return Residue.of(self.value * other.value, self.modulus)

    def __neg__(self) -> Residue:
        return Residue.of(-self.value, self.modulus)

    def __pow__(self, k: int) -> Residue:
        return Residue(pow(self.value, k, self.modulus), self.modulus)

def egcd(a: int, b: int) -> Tuple[int, int, int]:
    # returns (g, x, y) with a * x + b * y == g == gcd(a, b) >= 0
    if a == 0 and b == 0:
        return 0, 0, 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return r0, x0, y0

def mod_inv(a: int, m: int) -> Residue:
    """
    Multiplicative inverse of ``a`` modulo ``m``.
    Raises ``NotAUnit`` if ``a`` and ``m`` share a factor.
    """
    g, x, _ = egcd(a % m, m)
    if g != 1:
        raise NotAUnit(f"{a} is not invertible modulo {m}")
    return Residue.of(x, m)

def p_valuation(b: int, p: int) -> int:
    # exponent of the highest power of p dividing b
    if b == 0:
        raise ZeroInput("The p-adic valuation of 0 is not finite")
    e = 0
    b = abs(b)
    while b % p == 0:
        b //= p
        e += 1
    return e

def order_mod(a: int, m: int) -> int:
    # least k >= 1 with a ** k == 1 mod m
    if egcd(a, m)[0] != 1:
        raise NotAUnit(f"{a} is not a unit modulo {m}")
    if m == 1:
        return 1
    return int(n_order(a % m, m))

def crt_residue(moduli: Sequence[int], residues: Sequence[int]) -> Residue:
    # combine residues modulo pairwise coprime moduli into one residue
    # modulo their product
    if len(moduli) == 0:
        return Residue(0, 1)
    res = crt(list(moduli), list(residues))
    assert res is not None, "CRT called with incompatible residues"
    value, modulus = res
    return Residue.of(int(value), int(modulus))
