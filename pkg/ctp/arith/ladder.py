from __future__ import annotations
from dataclasses import dataclass
import threading
from typing import Dict, List, Tuple
from sympy import discrete_log, primefactors
from ctp.utils.misc import logger

__all__ = ["GeneratorLadder", "is_generator", "least_generator", "generator_ladder",
           "unit_group_order", "discrete_log_lift"]

@dataclass(frozen=True)
class GeneratorLadder:
    """
    Generators ``q_1, ..., q_N`` of the unit groups (Z/p^nZ)^x with
    ``q_{n+1} == q_n mod p^n``.

    Attributes
    ----------
    * p: int
        The odd prime.
    * entries: Tuple[int, ...]
        ``entries[n - 1]`` is ``q_n``.
    """
    p: int
    entries: Tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        # 1-based access, q_n
        return self.entries[n - 1]

    def __len__(self) -> int:
        return len(self.entries)

def unit_group_order(p: int, n: int) -> int:
    # order of (Z/p^nZ)^x, v_n = p^n - p^(n - 1)
    return p ** n - p ** (n - 1)

def is_generator(g: int, p: int, n: int) -> bool:
    # g generates the cyclic group (Z/p^nZ)^x iff g^(v/l) != 1 for every
    # prime l dividing its order v
    m = p ** n
    if g % p == 0:
        return False
    v = unit_group_order(p, n)
    return all(pow(g, v // l, m) != 1 for l in primefactors(v))

def least_generator(p: int) -> int:
    assert p > 2, "(Z/2^nZ)^x is not cyclic for n > 2, use the (-1, 5) decomposition"
    for g in range(2, p):
        if is_generator(g, p, 1):
            return g
    assert False, f"No generator found modulo {p}, is {p} a prime?"

# the ladders only grow, a cached prefix stays valid forever
_ladder_cache: Dict[int, List[int]] = {}
_ladder_lock = threading.Lock()

def generator_ladder(p: int, N: int) -> GeneratorLadder:
    """
    Returns the first ``N`` entries of the generator ladder of the odd prime
    ``p``: ``q_1`` is the least generator mod ``p`` and ``q_{n+1}`` is the least
    lift ``q_n + k * p^n`` (``0 <= k < p``) generating (Z/p^(n+1)Z)^x.
    """
    assert N >= 1
    with _ladder_lock:
        entries = _ladder_cache.setdefault(p, [])
        if not entries:
            entries.append(least_generator(p))
        while len(entries) < N:
            n = len(entries)
            q = entries[-1]
            pn = p ** n
            lift = next((q + k * pn for k in range(p) if is_generator(q + k * pn, p, n + 1)), None)
            assert lift is not None, f"The generator {q} mod {p}^{n} has no generating lift"
            entries.append(lift)
            logger.log(f"Generator ladder of p={p} extended to level {n + 1}: q = {lift}", vlevel=1)
        return GeneratorLadder(p, tuple(entries[:N]))

def discrete_log_lift(a: int, p: int, n: int) -> List[int]:
    """
    Discrete logarithms of ``a`` at the levels ``1..n`` of the ladder of ``p``.

    Arguments
    ---------
    * a: int
        A unit modulo ``p^n``.
    * p: int
        The odd prime.
    * n: int
        The deepest level.

    Returns
    -------
    * List[int]
        ``k_1, ..., k_n`` with ``q_l^(k_l) == a mod p^l`` and ``0 <= k_l < v_l``.
        Consecutive logs satisfy ``k_(l+1) == k_l mod v_l`` so each level is
        lifted from the previous one by testing ``p`` candidates.
    """
    ladder = generator_ladder(p, n)
    k = int(discrete_log(p, a % p, ladder[1]))
    logs = [k % (p - 1)]
    for l in range(1, n):
        m = p ** (l + 1)
        vl = unit_group_order(p, l)
        q = ladder[l + 1]
        k = logs[-1]
        nxt = next((k + t * vl for t in range(p) if pow(q, k + t * vl, m) == a % m), None)
        assert nxt is not None, f"{a} has no discrete log at level {l + 1}, is it a unit?"
        logs.append(nxt)
    return logs
