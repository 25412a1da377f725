"""Translation-invariant stabilizer maps over GF(2) Laurent polynomials.

A stabilizer map is a ``2n x m`` matrix: column ``c`` describes stabilizer
type ``c``, rows ``0..n-1`` its X part on the ``n`` qubits of a site and rows
``n..2n-1`` its Z part.  A monomial ``e^a`` in entry ``(r, c)`` means the type
anchored at site ``v`` acts on slot ``r mod n`` of site ``v + a``.

Text format: entries are ``+``-separated monomials in the variables
``x, y, z`` (``x1, x2, ...`` beyond three dimensions); ``~`` before a
variable inverts it and ``^k`` raises it, e.g. ``1+~x~y`` for
``1 + e1^-1 e2^-1``.  Matrices are written one row per line with entries
separated by ``,``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .codes import InvalidCode, Stabilizer, StabilizerCode, check_stabilizer_set
from .pauli import Lattice, PauliOperator

Exponent = tuple[int, ...]


def variable_names(d: int) -> list[str]:
    return ["x", "y", "z"][:d] if d <= 3 else ["x%d" % (i + 1) for i in range(d)]


class LaurentPoly:
    """Element of ``F2[e_1^{+-1}, ..., e_d^{+-1}]`` stored as a set of exponents."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Iterable[Sequence[int]] = ()):
        acc: set[Exponent] = set()
        for t in terms:
            t = tuple(int(a) for a in t)
            if len(t) != d:
                raise ValueError("exponent %r has %d entries, expected %d" % (t, len(t), d))
            acc ^= {t}
        self.d = d
        self.terms = frozenset(acc)

    @classmethod
    def zero(cls, d: int) -> "LaurentPoly":
        return cls(d)

    @classmethod
    def one(cls, d: int) -> "LaurentPoly":
        return cls(d, [(0,) * d])

    @classmethod
    def var(cls, d: int, i: int, power: int = 1) -> "LaurentPoly":
        e = [0] * d
        e[i] = power
        return cls(d, [e])

    def _check(self, other: "LaurentPoly") -> None:
        if not isinstance(other, LaurentPoly) or other.d != self.d:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly(self.d, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        acc: set[Exponent] = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        return LaurentPoly(self.d, acc)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("only non-negative powers are supported")
        out = LaurentPoly.one(self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[Exponent]:
        return sorted(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and other.d == self.d and other.terms == self.terms

    def __hash__(self) -> int:
        return hash((self.d, self.terms))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return "LaurentPoly(%s)" % format_poly(self)


def antipode(p: LaurentPoly) -> LaurentPoly:
    """Negate every exponent (``e_i -> e_i^{-1}``)."""
    return LaurentPoly(p.d, [tuple(-a for a in t) for t in p.terms])


def frobenius_power(p: LaurentPoly, k: int) -> LaurentPoly:
    """``p^(2^k)`` computed by repeated squaring."""
    if k < 0:
        raise ValueError("generation must be non-negative")
    for _ in range(k):
        p = p * p
    return p


# -- text format -------------------------------------------------------------

def _format_monomial(t: Exponent, names: Sequence[str]) -> str:
    parts = []
    for a, name in zip(t, names):
        if a == 0:
            continue
        s = ("~" if a < 0 else "") + name
        if abs(a) != 1:
            s += "^%d" % abs(a)
        parts.append(s)
    return "".join(parts) if parts else "1"


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    names = variable_names(p.d)
    return "+".join(_format_monomial(t, names) for t in p.sorted_terms())


_FACTOR = re.compile(r"(~?)([a-z]\d*)(?:\^(\d+))?")


def parse_poly(text: str, d: int) -> LaurentPoly:
    names = variable_names(d)
    index = {n: i for i, n in enumerate(names)}
    text = text.replace(" ", "")
    if text in ("", "0"):
        return LaurentPoly.zero(d)
    terms = []
    for mono in text.split("+"):
        e = [0] * d
        if mono != "1":
            pos = 0
            while pos < len(mono):
                m = _FACTOR.match(mono, pos)
                if not m or m.end() == pos:
                    raise ValueError("cannot parse monomial %r" % mono)
                inv, name, power = m.groups()
                if name not in index:
                    raise ValueError("unknown variable %r (expected %s)" % (name, ", ".join(names)))
                k = int(power) if power else 1
                e[index[name]] += -k if inv else k
                pos = m.end()
        terms.append(e)
    return LaurentPoly(d, terms)


# -- matrices ---------------------------------------------------------------

class PolyMatrix:
    """Dense matrix of :class:`LaurentPoly` entries."""

    __slots__ = ("d", "entries")

    def __init__(self, d: int, entries: Sequence[Sequence[LaurentPoly]]):
        rows = tuple(tuple(r) for r in entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        for r in rows:
            for p in r:
                if p.d != d:
                    raise ValueError("entry in %d variables, expected %d" % (p.d, d))
        self.d = d
        self.entries = rows

    @classmethod
    def zeros(cls, d: int, rows: int, cols: int) -> "PolyMatrix":
        z = LaurentPoly.zero(d)
        return cls(d, [[z] * cols for _ in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, rc: tuple[int, int]) -> LaurentPoly:
        r, c = rc
        return self.entries[r][c]

    def column(self, c: int) -> list[LaurentPoly]:
        return [row[c] for row in self.entries]

    @property
    def T(self) -> "PolyMatrix":
        rows, cols = self.shape
        return PolyMatrix(self.d, [[self.entries[r][c] for r in range(rows)] for c in range(cols)])

    def antipode(self) -> "PolyMatrix":
        return PolyMatrix(self.d, [[antipode(p) for p in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = LaurentPoly.zero(self.d)
                for t in range(k):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.d, out)

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMatrix) and other.d == self.d and other.entries == self.entries

    def __hash__(self) -> int:
        return hash((self.d, self.entries))

    def __str__(self) -> str:
        return format_matrix(self)


def format_matrix(M: PolyMatrix) -> str:
    return "\n".join(",".join(format_poly(p) for p in row) for row in M.entries)


def parse_matrix(text: str, d: int) -> PolyMatrix:
    rows = [line for line in (l.strip() for l in text.strip().splitlines()) if line]
    return PolyMatrix(d, [[parse_poly(e, d) for e in line.split(",")] for line in rows])


# -- stabilizer maps --------------------------------------------------------

@dataclass(frozen=True)
class StabilizerMap:
    """A ``2n x m`` Laurent matrix together with type labels."""

    n: int
    matrix: PolyMatrix
    labels: tuple[str, ...] = ()
    family: str = "custom"

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != 2 * self.n:
            raise ValueError("stabilizer map needs 2n = %d rows, got %d" % (2 * self.n, rows))
        if not self.labels:
            object.__setattr__(self, "labels", tuple("type_%d" % c for c in range(cols)))
        if len(self.labels) != cols:
            raise ValueError("need one label per column")
        for c in range(cols):
            if all(p.is_zero() for p in self.matrix.column(c)):
                raise ValueError("column %d is identically zero" % c)

    @property
    def d(self) -> int:
        return self.matrix.d

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    def is_commuting(self) -> bool:
        return (excitation_map(self) @ self.matrix).is_zero()


def _swap_form(n: int, d: int) -> PolyMatrix:
    one, zero = LaurentPoly.one(d), LaurentPoly.zero(d)
    return PolyMatrix(d, [[one if (c == r + n or r == c + n) else zero for c in range(2 * n)] for r in range(2 * n)])


def excitation_map(M: StabilizerMap) -> PolyMatrix:
    """Polynomial syndrome map: antipode-transpose of ``M`` times the block swap.

    ``excitation_map(M) @ M.matrix`` vanishes iff all translates of all
    types commute.
    """
    return M.matrix.antipode().T @ _swap_form(M.n, M.d)


def instantiate(M: StabilizerMap, L: int) -> StabilizerCode:
    """Expand every type over all ``L^d`` translations (type-major, sites row-major)."""
    if L < 2:
        raise ValueError("L must be at least 2")
    lattice = Lattice(M.d, L, M.n)
    stabs = []
    for c, label in enumerate(M.labels):
        col = M.matrix.column(c)
        for site in lattice.sites():
            x, z = [], []
            for r, p in enumerate(col):
                slot = r % M.n
                target = x if r < M.n else z
                for t in p.terms:
                    target.append(lattice.qubit([a + b for a, b in zip(site, t)], slot))
            stabs.append(Stabilizer(PauliOperator.from_qubits(lattice, x, z), label, tuple(site)))
    code = StabilizerCode(lattice, stabs, M.family, "periodic")
    problems = [p for p in check_stabilizer_set(code) if not p.startswith("condition 4")]
    if problems:
        raise InvalidCode("map is not a stabilizer code at L=%d: %s" % (L, "; ".join(problems)))
    return code


_BUILTIN_TEXT = {
    # rows: x-block then z-block; columns in constructor order
    "toric2": (2, 2, ("vertex", "plaquette_01"), """
        1+~x, 0
        1+~y, 0
        0, 1+y
        0, 1+x
    """),
    "toric3": (3, 3, ("vertex", "plaquette_12", "plaquette_02", "plaquette_01"), """
        1+~x, 0, 0, 0
        1+~y, 0, 0, 0
        1+~z, 0, 0, 0
        0, 0, 1+z, 1+y
        0, 1+z, 0, 1+x
        0, 1+y, 1+x, 0
    """),
    "xcube": (3, 3, ("cube", "cross_0", "cross_1", "cross_2"), """
        1+y+z+yz, 0, 0, 0
        1+x+z+xz, 0, 0, 0
        1+x+y+xy, 0, 0, 0
        0, 0, 1+~x, 1+~x
        0, 1+~y, 0, 1+~y
        0, 1+~z, 1+~z, 0
    """),
    "haah": (3, 2, ("g_x", "g_z"), """
        1+x+y+z, 0
        1+xy+yz+xz, 0
        0, 1+~x~y+~y~z+~x~z
        0, 1+~x+~y+~z
    """),
}

BUILTIN_FAMILIES = tuple(_BUILTIN_TEXT)


def builtin_map(family: str) -> StabilizerMap:
    if family not in _BUILTIN_TEXT:
        raise ValueError("unknown family %r (expected one of %s)" % (family, ", ".join(_BUILTIN_TEXT)))
    d, n, labels, text = _BUILTIN_TEXT[family]
    return StabilizerMap(n, parse_matrix(text, d), labels, family)


__all__ = [
    "LaurentPoly",
    "PolyMatrix",
    "StabilizerMap",
    "BUILTIN_FAMILIES",
    "antipode",
    "frobenius_power",
    "format_poly",
    "parse_poly",
    "format_matrix",
    "parse_matrix",
    "excitation_map",
    "instantiate",
    "builtin_map",
    "variable_names",
]
