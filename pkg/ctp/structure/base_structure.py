from __future__ import annotations
from abc import abstractmethod, abstractproperty
from typing import Optional, Sequence, Tuple
from ctp.arith.residue import mod_inv
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path

__all__ = ["BaseStructure"]

class BaseStructure(object):
    """
    BaseStructure describes a torsion-free abelian group presented by a tree
    without isolated paths, with everything the quantifier elimination needs
    to turn solvability of linear equations into residue conditions.
    """
    @abstractproperty
    def name(self) -> str:
        """
        Name of the structure used by the command line, e.g. ``"zp+"``.
        """
        pass

    @property
    def flavor(self) -> str:
        return "additive"

    @abstractproperty
    def presentation(self) -> TreePresentation:
        """
        The tree presentation whose paths are the elements.
        """
        pass

    @abstractproperty
    def tower_prime(self) -> int:
        """
        A prime ``q`` such that every residue modulo a power of ``q`` is
        readable from the paths.
        """
        pass

    @abstractmethod
    def from_integer(self, z: int) -> Path:
        pass

    @abstractmethod
    def from_rational(self, num: int, den: int) -> Path:
        """
        The element ``num / den``, raises ``DenominatorNotUnit`` if ``den`` is
        not invertible in the structure.
        """
        pass

    @abstractmethod
    def combination(self, coeffs: Sequence[int], paths: Sequence[Path]) -> Path:
        """
        The element ``sum_i coeffs[i] * paths[i]``.
        """
        pass

    @abstractmethod
    def split_coefficient(self, b: int) -> Tuple[int, int]:
        """
        Split the nonzero integer ``b`` as ``d * u`` with ``d > 0`` and ``u``
        invertible in the structure, so that ``b G = t`` is solvable iff
        ``t == 0 mod d`` and then ``G mod M`` is ``u^-1 ((t mod M d) / d)``.
        """
        pass

    @abstractmethod
    def normalize_modulus(self, m: int) -> int:
        """
        The modulus ``m'`` with ``G / m G == G / m' G`` used for canonical
        residue conditions.
        """
        pass

    @abstractmethod
    def residue(self, x: Path, m: int) -> int:
        """
        ``x mod m`` for a normalized modulus ``m``.
        """
        pass

    @abstractmethod
    def solve(self, coeffs: Sequence[int], b: int, paths: Sequence[Path]) -> Optional[Path]:
        """
        The unique ``G`` with ``sum_i coeffs[i] * paths[i] = b G`` for
        ``b != 0``, or None if there is none.
        """
        pass

    def unit_inverse(self, u: int, m: int) -> int:
        # inverse of the unit part u modulo a normalized modulus m
        return mod_inv(u, m).value

    def avoid(self, forbidden: Sequence[Tuple[int, Path]]) -> Path:
        """
        An element ``g`` with ``c * g != s`` for every ``(c, s)`` in
        ``forbidden`` (all ``c != 0``). The solutions of the forbidden
        equations are at most single points, so ``g`` is the first integer,
        counting up from the first ``s`` plus one, whose multiples differ
        from every ``s`` modulo a large enough power of the tower prime.
        """
        q = self.tower_prime
        if len(forbidden) == 0:
            return self.from_integer(0)
        bound = sum(_prime_part(c, q) for (c, _) in forbidden)
        m = q
        while m <= bound:
            m *= q
        s_res = [(c, self.residue(s, m)) for (c, s) in forbidden]
        anchor = s_res[0][1]
        for j in range(1, m + 1):
            r = (anchor + j) % m
            if all((c * r - s) % m != 0 for (c, s) in s_res):
                return self.from_integer(r)
        assert False, f"No residue modulo {m} avoids the forbidden points"

def _prime_part(c: int, q: int) -> int:
    # largest power of q dividing c
    c = abs(c)
    res = 1
    while c % q == 0:
        c //= q
        res *= q
    return res
