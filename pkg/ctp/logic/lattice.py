from __future__ import annotations
import itertools
import math
import re
from typing import Iterable, List, Optional, Sequence, Tuple, Union
from ctp.logic.formula import Atom, Term
from ctp.logic.linalg import integer_kernel, lattice_basis, in_lattice
from ctp.utils.errors import ArityMismatch, MalformedCode
from ctp.utils.misc import memoize_method, natural_key

__all__ = ["RelationLattice", "DiagramEnumeration", "lattice_entails", "enumerate_diagram",
           "encode_atom", "decode_atom", "canonical_atom", "atom_rank", "load_diagram",
           "free_part_lattice", "CODE_ALPHABET"]

# characters of the canonical codes, in the order used by atom_rank
CODE_ALPHABET = "0123456789*+-=^_abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"

class RelationLattice(object):
    """
    Positive atomic diagram of a parameter tuple given by a finite basis of
    integer relations: ``sum_i a_i c_i = 0`` in the additive flavor and
    ``prod_i c_i^(a_i) = 1`` in the multiplicative one.

    Arguments
    ---------
    * names: Sequence[str]
        The parameter symbols, one per coordinate of the vectors.
    * basis: Sequence[Sequence[int]]
        The generating relations.
    * flavor: str
        ``"additive"`` or ``"multiplicative"``.
    * complete: bool
        True if every true relation of the parameters follows from the basis.
        Only then can a relation be refuted by non-entailment.
    """
    def __init__(self, names: Sequence[str], basis: Sequence[Sequence[int]] = (),
                 flavor: str = "additive", complete: bool = True):
        self.names = tuple(names)
        self.flavor = flavor
        self.complete = complete
        n = len(self.names)
        for v in basis:
            if len(v) != n:
                raise ArityMismatch(f"The relation {list(v)} does not have {n} coefficients")
        self.basis = tuple(tuple(int(x) for x in v) for v in basis if any(x != 0 for x in v))

    @property
    def arity(self) -> int:
        return len(self.names)

    @memoize_method
    def reduced_basis(self) -> List[List[int]]:
        # additive relations of a torsion-free group are closed under division,
        # so the additive flavor works with the saturation of the lattice
        n = self.arity
        if self.flavor == "additive" and len(self.basis) > 0:
            orth = integer_kernel([list(v) for v in self.basis], n)
            return lattice_basis(integer_kernel(orth, n), n)
        return lattice_basis(self.basis, n)

    def vector(self, atom: Atom) -> Tuple[int, ...]:
        coeffs = atom.form().as_dict()
        unknown = [k for k in coeffs if k not in self.names]
        if len(unknown) > 0:
            raise ArityMismatch(f"The diagram has no parameter {unknown[0]}")
        return tuple(coeffs.get(k, 0) for k in self.names)

    def entails(self, atom: Atom) -> bool:
        return in_lattice(self.reduced_basis(), self.vector(atom))

    def atom_of(self, v: Sequence[int]) -> Atom:
        return Atom(Term(tuple(zip(self.names, v)), self.flavor), Term((), self.flavor))

    def __repr__(self) -> str:
        return f"RelationLattice({list(self.names)}, {[list(v) for v in self.basis]}, " \
            f"{self.flavor}, complete={self.complete})"

class DiagramEnumeration(RelationLattice):
    """
    A diagram given by a list of canonical atom codes with no completeness
    promise. Its relations are sound, the missing ones must be refuted by
    looking at the parameters.
    """
    def __init__(self, names: Sequence[str], codes: Sequence[str], flavor: str = "additive"):
        self.codes = tuple(codes)
        vectors = []
        for code in self.codes:
            atom = decode_atom(code, flavor)
            vectors.append(RelationLattice(names, (), flavor).vector(atom))
        super().__init__(names, vectors, flavor, complete=False)

def lattice_entails(L: RelationLattice, atom: Atom) -> bool:
    """
    True if the relation ``atom`` holds for every parameter tuple satisfying
    the relations of ``L``.
    """
    if atom.flavor != L.flavor:
        raise ArityMismatch(f"A {atom.flavor} atom against a {L.flavor} diagram")
    return L.entails(atom)

def enumerate_diagram(L: RelationLattice, budget: int) -> List[str]:
    """
    The first ``budget`` distinct canonical codes of the relations of ``L``,
    listing the combinations of the basis by increasing max-norm of their
    coefficients, starting with the trivial relation.
    """
    basis = L.reduced_basis()
    k = len(basis)
    res: List[str] = []
    seen = set()
    for r in range(0, budget + 1):
        coeffs: Iterable[Tuple[int, ...]] = [()] if k == 0 else \
            (lam for lam in itertools.product(range(-r, r + 1), repeat=k)
             if max(abs(x) for x in lam) == r)
        for lam in coeffs:
            v = [sum(l * b[i] for (l, b) in zip(lam, basis)) for i in range(L.arity)]
            code = encode_atom(L.atom_of(v))
            if code not in seen:
                seen.add(code)
                res.append(code)
                if len(res) >= budget:
                    return res
        if k == 0:
            break
    return res

############### canonical codes ###############
def encode_atom(atom: Atom) -> str:
    """
    Canonical text of the relation ``atom``: ``lhs - rhs`` with the symbols in
    natural order, a positive leading coefficient and, in the additive
    flavor, coprime coefficients. Examples: ``"2*c1-c2=0"``, ``"c1^2*c2^-1=1"``.
    """
    form = atom.form()
    coeffs = list(form.coeffs)
    if atom.flavor == "multiplicative":
        if len(coeffs) == 0:
            return "1=1"
        if coeffs[0][1] < 0:
            coeffs = [(k, -c) for (k, c) in coeffs]
        return "*".join(k if c == 1 else f"{k}^{c}" for (k, c) in coeffs) + "=1"

    if len(coeffs) == 0:
        return "0=0"
    g = math.gcd(*[c for (_, c) in coeffs])
    sign = -1 if coeffs[0][1] < 0 else 1
    coeffs = [(k, sign * c // g) for (k, c) in coeffs]
    s = ""
    for (i, (k, c)) in enumerate(coeffs):
        if i > 0 and c > 0:
            s += "+"
        if c == -1:
            s += "-"
        elif c != 1:
            s += f"{c}*"
        s += k
    return s + "=0"

_ADD_TERM = re.compile(r"([+-]?)(?:(\d+)\*)?([A-Za-z_][A-Za-z0-9_]*)")
_MUL_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")

def decode_atom(code: str, flavor: Optional[str] = None) -> Atom:
    """
    The atom ``form = 0`` (or ``form = 1``) of a canonical code. Raises
    MalformedCode if the text is not the canonical code of its atom.
    """
    if flavor is None:
        flavor = "multiplicative" if code.endswith("=1") else "additive"
    if flavor == "multiplicative":
        if not code.endswith("=1"):
            raise MalformedCode(f"Multiplicative code {code!r} must end with '=1'")
        body = code[:-2]
        coeffs = []
        if body != "1":
            for part in body.split("*"):
                m = _MUL_FACTOR.match(part)
                if m is None:
                    raise MalformedCode(f"Malformed factor {part!r} in {code!r}")
                coeffs.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    else:
        if not code.endswith("=0"):
            raise MalformedCode(f"Additive code {code!r} must end with '=0'")
        body = code[:-2]
        coeffs = []
        if body != "0":
            pos = 0
            while pos < len(body):
                m = _ADD_TERM.match(body, pos)
                if m is None or m.end() == pos:
                    raise MalformedCode(f"Malformed term at offset {pos} of {code!r}")
                c = int(m.group(2)) if m.group(2) else 1
                coeffs.append((m.group(3), -c if m.group(1) == "-" else c))
                pos = m.end()
    atom = Atom(Term(tuple(coeffs), flavor), Term((), flavor))
    if encode_atom(atom) != code:
        raise MalformedCode(f"{code!r} is not canonical, expected {encode_atom(atom)!r}")
    return atom

def canonical_atom(atom: Atom) -> Atom:
    return decode_atom(encode_atom(atom), atom.flavor)

def atom_rank(code: str) -> int:
    """
    Position of the code in the length-lexicographic order of the strings
    over ``CODE_ALPHABET``, a numbering of the atoms.
    """
    base = len(CODE_ALPHABET)
    lex = 0
    for ch in code:
        idx = CODE_ALPHABET.find(ch)
        if idx < 0:
            raise MalformedCode(f"Character {ch!r} is not in the code alphabet")
        lex = lex * base + idx
    # all the shorter strings come first
    return sum(base ** l for l in range(len(code))) + lex

############### loading ###############
def load_diagram(source: Union[str, Sequence[str]], names: Sequence[str],
                 flavor: str = "additive") -> RelationLattice:
    """
    Read a diagram file. A first line ``lattice-basis`` introduces integer
    vectors (one per line, separated by spaces or commas) forming a complete
    relation lattice; otherwise every line is a canonical code of a free-form
    diagram. Blank lines and lines starting with ``#`` are ignored.

    Arguments
    ---------
    * source: str or Sequence[str]
        The path of the file, or its lines.
    * names: Sequence[str]
        The parameter symbols in vector order.
    * flavor: str
        ``"additive"`` or ``"multiplicative"``.
    """
    if isinstance(source, str):
        with open(source, "r") as f:
            lines = f.read().splitlines()
    else:
        lines = list(source)
    lines = [s.strip() for s in lines]
    lines = [s for s in lines if s and not s.startswith("#")]
    names = sorted(names, key=natural_key)
    if len(lines) > 0 and lines[0] == "lattice-basis":
        vectors = []
        for line in lines[1:]:
            try:
                vectors.append([int(x) for x in line.replace(",", " ").split()])
            except ValueError:
                raise MalformedCode(f"{line!r} is not an integer vector")
        return RelationLattice(names, vectors, flavor, complete=True)
    return DiagramEnumeration(names, lines, flavor)

def free_part_lattice(L: RelationLattice, k: int) -> RelationLattice:
    """
    The additive lattice ``{a : k a in L}`` of a multiplicative lattice ``L``.
    For units with torsion of order ``k`` these are the relations of the free
    parts.
    """
    n = L.arity
    m = len(L.basis)
    # columns: the multipliers of the basis vectors, then the unknown a
    rows = [[L.basis[j][i] for j in range(m)] + [(-k if c == i else 0) for c in range(n)]
            for i in range(n)]
    kernel = integer_kernel(rows, m + n)
    vectors = [v[m:] for v in kernel]
    return RelationLattice(L.names, lattice_basis(vectors, n), "additive", complete=L.complete)
