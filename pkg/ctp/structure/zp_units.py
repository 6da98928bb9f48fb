from __future__ import annotations
from dataclasses import dataclass
import functools
import threading
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple
from ctp.arith.ladder import discrete_log_lift, generator_ladder, unit_group_order
from ctp.arith.residue import mod_inv
from ctp.structure.zp_additive import PadicInt, add, from_integer, neg, scalar_mul
from ctp.tree.base_tree import TreePresentation
from ctp.tree.path import Path, PrefixFunctional, NeedMoreInput, EvalResult
from ctp.utils.datastruct import Label
from ctp.utils.errors import NotAUnit, PrimeMismatch

__all__ = ["UnitPadic", "UnitLabelPath", "UnitLabelPresentation", "get_unit_presentation",
           "torsion_order", "unit_one", "iso_forward", "iso_backward",
           "unit_mul", "unit_inv", "unit_pow", "enums_reduce"]

def torsion_order(p: int) -> int:
    # order of the torsion subgroup of Z_p^x
    return 2 if p == 2 else p - 1

@dataclass(frozen=True, eq=False)
class UnitPadic:
    """
    Element of Z_p^x in decomposed form: a torsion part in Z/(p-1)Z (Z/2Z
    for p = 2) and a free part in Z_p^+.

    Attributes
    ----------
    * p: int
        The prime.
    * x: int
        The torsion part, ``0 <= x < torsion_order(p)``.
    * y: PadicInt
        The free part.
    """
    p: int
    x: int
    y: PadicInt

    def __post_init__(self):
        assert 0 <= self.x < torsion_order(self.p), \
            f"Torsion part {self.x} out of range for p = {self.p}"
        if self.y.p != self.p:
            raise PrimeMismatch(f"Free part over Z_{self.y.p} for a unit of Z_{self.p}")

    def __mul__(self, other: UnitPadic) -> UnitPadic:
        return unit_mul(self, other)

    def __pow__(self, m: int) -> UnitPadic:
        return unit_pow(self, m)

class UnitLabelPath(Path):
    """
    Element of Z_p^x as the path of its residues, the label at level ``n``
    being a unit modulo ``p^n``.
    """
    def __init__(self, p: int, fcn: Callable[[int], Label]):
        super().__init__(fcn, get_unit_presentation(p).name)
        self.p = p

    @staticmethod
    def from_integer(p: int, z: int) -> UnitLabelPath:
        if z % p == 0:
            raise NotAUnit(f"{z} is not a unit of Z_{p}")
        return UnitLabelPath(p, lambda n: z % p ** n)

class UnitLabelPresentation(TreePresentation):
    """
    Tree of coherent unit residues, multiplication done label by label.
    """
    def __init__(self, p: int):
        self.p = p

        def levelwise(op: Callable[[Sequence[int], int], int], arity: int, name: str) \
                -> PrefixFunctional:
            def evaluator(prefixes: Sequence[Tuple[Label, ...]], level: int) -> EvalResult:
                if any(len(pref) < level for pref in prefixes):
                    return NeedMoreInput(level)
                return op([int(pref[level - 1]) for pref in prefixes], p ** level), \
                    (level if arity else 0)  # type: ignore
            return PrefixFunctional(evaluator, arity, self.name, name,
                                    make_path=lambda fcn, _: UnitLabelPath(p, fcn))

        self._functionals = {
            "mul": levelwise(lambda ks, m: ks[0] * ks[1] % m, 2, "mul"),
            "inv": levelwise(lambda ks, m: mod_inv(ks[0], m).value, 1, "inv"),
            "one": levelwise(lambda ks, m: 1 % m, 0, "one"),
        }

    @property
    def name(self) -> str:
        return f"T{self.p}x"

    @property
    def functionals(self) -> Dict[str, PrefixFunctional]:
        return self._functionals

    @property
    def coherent(self) -> bool:
        return True

    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        p = self.p
        prev = 0
        for (n, k) in enumerate(node, 1):
            if not (isinstance(k, int) and 0 <= k < p ** n and k % p != 0 and
                    k % p ** (n - 1) == prev):
                return False
            prev = k
        return True

    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        n = len(node)
        if n == 0:
            return [a for a in range(1, self.p)]
        return [node[-1] + j * self.p ** n for j in range(self.p)]  # type: ignore

    def labels_at(self, level: int) -> Iterable[Label]:
        return [a for a in range(self.p ** level) if a % self.p != 0]

    def restrict(self, label: Label, level: int, to_level: int) -> Label:
        assert isinstance(label, int)
        return label % self.p ** to_level

    def perturb(self, path: Path, level: int) -> Path:
        if level == 0:
            return super().perturb(path, level)
        # 1 + p^level is 1 below level + 1 and not 1 at level + 1
        p = self.p
        return UnitLabelPath(p, lambda n: path.label(n) * (1 + p ** level) % p ** n)

@functools.lru_cache(maxsize=None)
def get_unit_presentation(p: int) -> UnitLabelPresentation:
    return UnitLabelPresentation(p)

def unit_one(p: int) -> UnitPadic:
    return UnitPadic(p, 0, from_integer(p, 0))

############### the isomorphism ###############
def iso_forward(u: UnitPadic) -> UnitLabelPath:
    """
    Labels of the unit ``u``. For odd ``p`` the label at level ``n`` is
    ``q_n^(x p^(n-1) + y_(n-1) (p-1)) mod p^n`` with ``q_n`` the generator
    ladder and ``y_0 = 0``. For ``p = 2`` it is ``(-1)^x 5^(y_(n-2)) mod 2^n``
    from level 2 on, and 1 at level 1.
    """
    p, x, y = u.p, u.x, u.y
    if p == 2:
        def fcn2(n: int) -> int:
            m = 2 ** n
            if n == 1:
                return 1
            yn = y.label(n - 2) if n > 2 else 0
            return (-1) ** x * pow(5, yn, m) % m  # type: ignore
        return UnitLabelPath(p, fcn2)

    def fcn(n: int) -> int:
        q = generator_ladder(p, n)[n]
        yn = y.label(n - 1) if n > 1 else 0
        return pow(q, x * p ** (n - 1) + yn * (p - 1), p ** n)  # type: ignore

    return UnitLabelPath(p, fcn)

class _LogLift(object):
    # discrete logs of a unit label path at increasing levels, each lifted from
    # the previous one
    def __init__(self, w: Path, p: int):
        self.w = w
        self.p = p
        self.logs: List[int] = []
        self._lock = threading.Lock()

    def at(self, n: int) -> int:
        with self._lock:
            while len(self.logs) < n:
                self.logs.append(self._next())
            return self.logs[n - 1]

    def _next(self) -> int:
        p = self.p
        l = len(self.logs) + 1
        a = int(self.w.label(l))  # type: ignore
        if p == 2:
            return self._next_two(l, a)
        if l == 1:
            return discrete_log_lift(a, p, 1)[0]
        m = p ** l
        vl = unit_group_order(p, l - 1)
        q = generator_ladder(p, l)[l]
        k = self.logs[-1]
        nxt = next((k + t * vl for t in range(p) if pow(q, k + t * vl, m) == a), None)
        assert nxt is not None, f"Label {a} at level {l} is not coherent with the level below"
        return nxt

    def _next_two(self, l: int, a: int) -> int:
        # log to the base 5 of +-a modulo 2^l, the sign fixed by the level 2 label
        if l <= 2:
            return 0
        m = 2 ** l
        sign = 1 if int(self.w.label(2)) == 1 else -1  # type: ignore
        b = sign * a % m
        k = self.logs[-1]
        step = 2 ** (l - 3)
        nxt = next((k + t * step for t in range(2) if pow(5, k + t * step, m) == b), None)
        assert nxt is not None, f"Label {a} at level {l} is not coherent with the level below"
        return nxt

def iso_backward(w: Path, p: Optional[int] = None) -> UnitPadic:
    """
    Decompose a unit label path into its torsion and free parts through the
    per-level discrete logs ``k_n = x p^(n-1) + y_(n-1) (p-1) mod v_n``.
    The prime is read from ``w`` if not given.
    """
    p = getattr(w, "p") if p is None else p
    logs = _LogLift(w, p)
    if p == 2:
        x = 0 if int(w.label(2)) == 1 else 1  # type: ignore
        # the level-(m + 2) log is y mod 2^m
        y = PadicInt(2, lambda m: logs.at(m + 2) % 2 ** m)
        return UnitPadic(2, x, y)

    x = logs.at(1) % (p - 1)

    def yfcn(m: int) -> int:
        pm = p ** m
        return logs.at(m + 1) * mod_inv(p - 1, pm).value % pm

    return UnitPadic(p, x, PadicInt(p, yfcn))

############### group operations ###############
def _check_prime(u: UnitPadic, v: UnitPadic):
    if u.p != v.p:
        raise PrimeMismatch(f"Units of Z_{u.p} and Z_{v.p}")

def unit_mul(u: UnitPadic, v: UnitPadic) -> UnitPadic:
    _check_prime(u, v)
    return UnitPadic(u.p, (u.x + v.x) % torsion_order(u.p), add(u.y, v.y))

def unit_inv(u: UnitPadic) -> UnitPadic:
    return UnitPadic(u.p, (-u.x) % torsion_order(u.p), neg(u.y))

def unit_pow(u: UnitPadic, m: int) -> UnitPadic:
    return UnitPadic(u.p, (m * u.x) % torsion_order(u.p), scalar_mul(m, u.y))

def enums_reduce(u: UnitPadic, v: UnitPadic) -> Tuple[PadicInt, PadicInt]:
    """
    Free parts of ``u^k`` and ``v^k`` with ``k`` the torsion order (``p - 1``,
    or 2 for ``p = 2``). The torsion vanishes and, Z_p being an integral
    domain, the two results are equal exactly when the free parts of ``u``
    and ``v`` are.
    """
    _check_prime(u, v)
    k = torsion_order(u.p)
    return unit_pow(u, k).y, unit_pow(v, k).y
