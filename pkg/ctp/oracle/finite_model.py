from __future__ import annotations
from dataclasses import dataclass
import functools
from typing import Mapping, Optional, Sequence
import numpy as np
from ctp.logic.formula import (Formula, Atom, RingAtom, Not, And, Or, Exists, ForAll, Top, Bottom,
                               free_variables)
from ctp.logic.normalform import to_prenex, prenex_split
from ctp.structure.zp_additive import LinearEquation
from ctp.utils.config import config
from ctp.utils.errors import ArityMismatch, TooLarge, UnsupportedFormula, ZeroRhs

__all__ = ["FiniteModel", "evaluate_cyclic", "finite_model_check", "solvable_mod_tower"]

@dataclass(frozen=True)
class FiniteModel:
    """
    The finite quotient Z/p^n Z of Z_p^+, used as an exhaustive oracle.

    Attributes
    ----------
    * p: int
        The prime.
    * n: int
        The level, ``n >= 1``.
    """
    p: int
    n: int

    def __post_init__(self):
        assert self.n >= 1, f"The level of a finite model starts at 1, got {self.n}"

    @property
    def modulus(self) -> int:
        return self.p ** self.n

def evaluate_cyclic(f: Formula, modulus: int, params: Optional[Mapping[str, int]] = None) -> bool:
    """
    Truth of ``f`` in the cyclic group Z/M Z by exhaustive evaluation. The
    matrix of the prenex form is evaluated as a boolean tensor with one axis
    per quantified variable, which the quantifiers then reduce with
    ``any``/``all`` from the innermost one out.
    Multiplicative atoms are read through the exponents, i.e. in the cyclic
    group written additively.

    Arguments
    ---------
    * f: Formula
        The formula, its free symbols all in ``params``.
    * modulus: int
        The order ``M`` of the group.
    * params: Optional[Mapping[str, int]]
        Integer values of the free symbols, reduced modulo ``M``.

    Returns
    -------
    * bool
        The truth of ``f``.
    """
    params = {} if params is None else dict(params)
    missing = sorted(set(free_variables(f)) - set(params))
    if len(missing) > 0:
        raise ArityMismatch(f"No value for the free symbol(s) {missing}")
    prefix, matrix = prenex_split(to_prenex(f))
    depth = len(prefix)
    if modulus ** depth > config.FINITE_MODEL_BUDGET:
        raise TooLarge(f"Evaluating {depth} quantifier(s) over Z/{modulus} needs "
                       f"{modulus}^{depth} cells, over the budget of {config.FINITE_MODEL_BUDGET}")

    shape = (modulus,) * depth
    axes = {var: i for (i, (_, var)) in enumerate(prefix)}
    res = np.broadcast_to(_evaluate_matrix(matrix, modulus, params, axes, depth), shape)
    for (kind, _) in reversed(prefix):
        res = res.any(axis=-1) if kind is Exists else res.all(axis=-1)
    return bool(res)

def _symbol_values(name: str, modulus: int, params: Mapping[str, int], axes: Mapping[str, int],
                   depth: int) -> np.ndarray:
    if name in axes:
        shape = [1] * depth
        shape[axes[name]] = modulus
        return np.arange(modulus, dtype=np.int64).reshape(shape)
    return np.asarray(params[name] % modulus, dtype=np.int64)

def _evaluate_matrix(f: Formula, modulus: int, params: Mapping[str, int],
                     axes: Mapping[str, int], depth: int) -> np.ndarray:
    if isinstance(f, Atom):
        val = np.asarray(0, dtype=np.int64)
        for (name, c) in f.form().coeffs:
            val = (val + (c % modulus) * _symbol_values(name, modulus, params, axes, depth)) % modulus
        return val == 0
    if isinstance(f, Not):
        return np.logical_not(_evaluate_matrix(f.body, modulus, params, axes, depth))
    if isinstance(f, (And, Or)):
        op = np.logical_and if isinstance(f, And) else np.logical_or
        parts = [_evaluate_matrix(a, modulus, params, axes, depth) for a in f.args]
        return functools.reduce(op, parts)
    if isinstance(f, Top):
        return np.asarray(True)
    if isinstance(f, Bottom):
        return np.asarray(False)
    if isinstance(f, RingAtom):
        raise UnsupportedFormula(f"{f} is not in the language of groups")
    raise UnsupportedFormula(f"Cannot evaluate {f!r} in a finite model")

def finite_model_check(m: FiniteModel, f: Formula, params: Optional[Mapping[str, int]] = None) -> bool:
    """
    Truth of ``f`` in Z/p^n Z, the integer parameters reduced modulo ``p^n``.
    """
    return evaluate_cyclic(f, m.modulus, params)

def solvable_mod_tower(eq: LinearEquation, f: Sequence[int], p: int, N: int) -> bool:
    """
    True if for every ``m <= N`` some ``g`` in Z/p^m Z solves
    ``sum_i a_i f_i = b g`` modulo ``p^m``, found by exhaustive search over
    each level. For ``N`` above the valuation of ``b`` this is the
    solvability in Z_p.
    """
    if eq.b == 0:
        raise ZeroRhs("The tower oracle needs a nonzero coefficient of the unknown")
    if len(f) != len(eq.coeffs):
        raise ArityMismatch(f"The equation has {len(eq.coeffs)} parameters, got {len(f)}")
    for m in range(1, N + 1):
        pm = p ** m
        if pm > config.FINITE_MODEL_BUDGET:
            raise TooLarge(f"Searching Z/{p}^{m} exceeds the budget of {config.FINITE_MODEL_BUDGET}")
        t = sum(a * x for (a, x) in zip(eq.coeffs, f)) % pm
        g = np.arange(pm, dtype=np.int64)
        if not np.any(((eq.b % pm) * g - t) % pm == 0):
            return False
    return True
