from typing import Optional
from sympy import isprime
from ctp.structure.base_structure import BaseStructure
from ctp.structure.zhat import ZhatStructure
from ctp.structure.zp_additive import ZpAdditiveStructure
from ctp.utils.misc import get_option

__all__ = ["get_structure"]

def get_structure(name: str, p: Optional[int] = None) -> BaseStructure:
    """
    Returns the torsion-free structure decided by quantifier elimination.

    Arguments
    ---------
    * name: str
        ``"zp+"`` or ``"zhat"``.
    * p: Optional[int]
        The prime, required for ``"zp+"``.

    Returns
    -------
    * BaseStructure
        The structure object.
    """
    def zp() -> BaseStructure:
        if p is None or not isprime(p):
            raise ValueError(f"zp+ needs a prime, got {p}")
        return ZpAdditiveStructure(p)

    constructors = {
        "zp+": zp,
        "zhat": ZhatStructure,
    }
    return get_option("structure", name.lower(), constructors)()
