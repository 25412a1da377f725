"""Continuum gauge structures: matrices of constant-coefficient differential operators.

Stabilizer maps over ``F2[e^{+-1}]`` are sent to real operator matrices by the
substitution ``e_i -> 1 + s_i d_i`` and ``e_i^{-1} -> 1 - s_i d_i``, expanding
over the integers and then deleting every term with an even coefficient (an
even coefficient is zero mod 2, so it carries no information from the
discrete side).  The signs ``s_i`` are chosen per matrix entry, and per
variable inside an entry when a product of two differences must come out
negative.  The defaults reproduce the continuum matrices of the toric,
X-cube and Haah maps.

Formal adjoints come from integration by parts: transpose and multiply every
term by ``(-1)^degree``.  Maxwell operators are ``adjoint(phi) @ phi`` (global
sign ``+1`` in every sector, which matches the X-cube charge equation
``j0 = (d1^2 d2^2 + d2^2 d3^2 + d3^2 d1^2) A0`` exactly).
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .polyform import LaurentPoly, StabilizerMap, builtin_map

Exponent = tuple[int, ...]

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _clean(terms: Mapping[Exponent, int]) -> tuple[tuple[Exponent, int], ...]:
    return tuple(sorted((e, c) for e, c in terms.items() if c != 0))


class DiffPoly:
    """Integer polynomial in commuting derivative symbols ``d_0 .. d_{nvars-1}``."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        acc: dict[Exponent, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(a) for a in e)
            if len(e) != nvars or any(a < 0 for a in e):
                raise ValueError("bad derivative multi-index %r" % (e,))
            acc[e] = acc.get(e, 0) + int(c)
        self.nvars = nvars
        self._terms = _clean(acc)

    @classmethod
    def zero(cls, nvars: int) -> "DiffPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: int) -> "DiffPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def d(cls, nvars: int, i: int, power: int = 1) -> "DiffPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def _check(self, other: "DiffPoly") -> None:
        if not isinstance(other, DiffPoly) or other.nvars != self.nvars:
            raise ValueError("operators in different numbers of variables")

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        self._check(other)
        t = self.terms
        for e, c in other._terms:
            t[e] = t.get(e, 0) + c
        return DiffPoly(self.nvars, t)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.nvars, {e: -c for e, c in self._terms})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other: "DiffPoly | int") -> "DiffPoly":
        if isinstance(other, int):
            return DiffPoly(self.nvars, {e: c * other for e, c in self._terms})
        self._check(other)
        acc: dict[Exponent, int] = {}
        for a, ca in self._terms:
            for b, cb in other._terms:
                e = tuple(x + y for x, y in zip(a, b))
                acc[e] = acc.get(e, 0) + ca * cb
        return DiffPoly(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        out = DiffPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e, _ in self._terms), default=-1)

    def support(self) -> frozenset[Exponent]:
        return frozenset(e for e, _ in self._terms)

    def adjoint(self) -> "DiffPoly":
        """Integration by parts: ``d^a -> (-1)^{|a|} d^a``."""
        return DiffPoly(self.nvars, {e: c * (-1) ** sum(e) for e, c in self._terms})

    def apply(self, f: "PositionPoly") -> "PositionPoly":
        out = PositionPoly.zero(self.nvars)
        for e, c in self._terms:
            g = f
            for i, a in enumerate(e):
                for _ in range(a):
                    g = g.diff(i)
            out = out + g.scale(c)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiffPoly) and other.nvars == self.nvars and other._terms == self._terms

    def __hash__(self) -> int:
        return hash((self.nvars, self._terms))

    def __repr__(self) -> str:
        return "DiffPoly(%s)" % format_diffpoly(self)

    def __str__(self) -> str:
        return format_diffpoly(self)


def d111() -> DiffPoly:
    """``d1 + d2 + d3``."""
    return DiffPoly(3, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})


def dmix() -> DiffPoly:
    """``d1 d2 + d2 d3 + d1 d3``."""
    return DiffPoly(3, {(1, 1, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1})


class PositionPoly:
    """Polynomial test function in ``x_1 .. x_d`` with rational coefficients."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction | int] = None):
        terms = terms or {}
        self.nvars = nvars
        self._terms = tuple(sorted((tuple(e), Fraction(c)) for e, c in terms.items() if c != 0))

    @classmethod
    def zero(cls, nvars: int) -> "PositionPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "PositionPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "PositionPoly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    def __add__(self, other: "PositionPoly") -> "PositionPoly":
        t = dict(self._terms)
        for e, c in other._terms:
            t[e] = t.get(e, 0) + c
        return PositionPoly(self.nvars, t)

    def __sub__(self, other: "PositionPoly") -> "PositionPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "PositionPoly") -> "PositionPoly":
        t: dict[Exponent, Fraction] = {}
        for a, ca in self._terms:
            for b, cb in other._terms:
                e = tuple(x + y for x, y in zip(a, b))
                t[e] = t.get(e, 0) + ca * cb
        return PositionPoly(self.nvars, t)

    def scale(self, c) -> "PositionPoly":
        return PositionPoly(self.nvars, {e: v * c for e, v in self._terms})

    def diff(self, i: int) -> "PositionPoly":
        t = {}
        for e, c in self._terms:
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return PositionPoly(self.nvars, t)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PositionPoly) and other._terms == self._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            mono = "".join("x%d%s" % (i + 1, "^%d" % a if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append("%s%s" % (c, "*" + mono if mono else ""))
        return " + ".join(parts)


# -- matrices -----------------------------------------------------------------

class DiffOpMatrix:
    """Dense matrix of :class:`DiffPoly` entries; a linear map on field tuples."""

    __slots__ = ("nvars", "entries")

    def __init__(self, nvars: int, entries: Sequence[Sequence[DiffPoly]]):
        rows = tuple(tuple(r) for r in entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged operator matrix")
        for r in rows:
            for p in r:
                if p.nvars != nvars:
                    raise ValueError("entry in %d variables, expected %d" % (p.nvars, nvars))
        self.nvars = nvars
        self.entries = rows

    @classmethod
    def zeros(cls, nvars: int, rows: int, cols: int) -> "DiffOpMatrix":
        z = DiffPoly.zero(nvars)
        return cls(nvars, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, nvars: int, n: int) -> "DiffOpMatrix":
        return cls(nvars, [[DiffPoly.const(nvars, int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, nvars: int, rows: Sequence[Sequence[int]]) -> "DiffOpMatrix":
        return cls(nvars, [[DiffPoly.const(nvars, c) for c in r] for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, rc: tuple[int, int]) -> DiffPoly:
        return self.entries[rc[0]][rc[1]]

    def row(self, i: int) -> "DiffOpMatrix":
        return DiffOpMatrix(self.nvars, [self.entries[i]])

    def rows_slice(self, start: int, stop: int) -> "DiffOpMatrix":
        return DiffOpMatrix(self.nvars, self.entries[start:stop])

    @property
    def T(self) -> "DiffOpMatrix":
        r, c = self.shape
        return DiffOpMatrix(self.nvars, [[self.entries[i][j] for i in range(r)] for j in range(c)])

    def _zip(self, other: "DiffOpMatrix", op) -> "DiffOpMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return DiffOpMatrix(self.nvars, [[op(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __add__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "DiffOpMatrix":
        return DiffOpMatrix(self.nvars, [[-p for p in r] for r in self.entries])

    def scale(self, c: int) -> "DiffOpMatrix":
        return DiffOpMatrix(self.nvars, [[p * c for p in r] for r in self.entries])

    def __matmul__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = DiffPoly.zero(self.nvars)
                for t in range(k):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return DiffOpMatrix(self.nvars, out)

    def apply(self, fields: Sequence[PositionPoly]) -> list[PositionPoly]:
        if len(fields) != self.shape[1]:
            raise ValueError("need %d field components" % self.shape[1])
        out = []
        for r in self.entries:
            acc = PositionPoly.zero(self.nvars)
            for p, f in zip(r, fields):
                acc = acc + p.apply(f)
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiffOpMatrix) and other.nvars == self.nvars and other.entries == self.entries

    def __hash__(self) -> int:
        return hash((self.nvars, self.entries))

    def __repr__(self) -> str:
        return "DiffOpMatrix(%s)" % "; ".join(", ".join(map(str, r)) for r in self.entries)


def formal_adjoint(M: DiffOpMatrix) -> DiffOpMatrix:
    """Transpose with every term scaled by ``(-1)^degree``."""
    return DiffOpMatrix(M.nvars, [[p.adjoint() for p in r] for r in M.T.entries])


# -- F2 -> R substitution -----------------------------------------------------

SignSpec = int | Sequence[int]

# Per-entry signs chosen so the images match the printed continuum matrices.
# A tuple gives one sign per variable; an int applies to every variable.
DEFAULT_SIGNS: dict[str, dict[tuple[int, int], SignSpec]] = {
    "toric2": {(2, 1): -1},
    "toric3": {(3, 2): -1, (4, 3): -1, (5, 1): -1},
    "xcube": {
        (0, 0): (1, 1, -1), (1, 0): (-1, 1, 1), (2, 0): (1, -1, 1),
        (3, 2): -1, (4, 3): -1, (5, 1): -1,
    },
    "haah": {(3, 1): -1},
}


def _entry_signs(spec: SignSpec, d: int) -> tuple[int, ...]:
    if isinstance(spec, int):
        spec = (spec,) * d
    spec = tuple(int(s) for s in spec)
    if len(spec) != d or any(s not in (1, -1) for s in spec):
        raise ValueError("sign specification must be +-1 per variable, got %r" % (spec,))
    return spec


def substitute(p: LaurentPoly, signs: SignSpec = 1) -> DiffPoly:
    """Image of one Laurent polynomial; even integer coefficients are dropped."""
    d = p.d
    sig = _entry_signs(signs, d)
    acc: dict[Exponent, int] = {}
    for term in p.terms:
        # product over variables of (1 +- s_i d_i)^{|a_i|}
        factors = []
        for i, a in enumerate(term):
            s = sig[i] if a >= 0 else -sig[i]
            factors.append([(k, comb(abs(a), k) * s ** k) for k in range(abs(a) + 1)])
        for choice in itertools.product(*factors):
            e = tuple(k for k, _ in choice)
            c = 1
            for _, ck in choice:
                c *= ck
            acc[e] = acc.get(e, 0) + c
    return DiffPoly(d, {e: c for e, c in acc.items() if c % 2})


def f2_to_continuum(M: StabilizerMap, sign_config: Mapping[tuple[int, int], SignSpec] | None = None) -> DiffOpMatrix:
    """Substitute every entry of a stabilizer map.

    ``sign_config`` maps ``(row, col)`` to a sign or per-variable signs;
    missing entries use ``+1``.  ``None`` selects the family defaults.
    """
    if sign_config is None:
        sign_config = DEFAULT_SIGNS.get(M.family, {})
    rows, cols = M.matrix.shape
    return DiffOpMatrix(M.d, [[substitute(M.matrix[r, c], sign_config.get((r, c), 1)) for c in range(cols)] for r in range(rows)])


# -- gauge structures ---------------------------------------------------------

class LambdaKind(enum.Enum):
    INNER = "inner"
    SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class Identity:
    """Named operator identity: ``matrix @ maxwell(gs) == 0``."""

    name: str
    matrix: DiffOpMatrix


@dataclass(frozen=True)
class TransverseCheck:
    """Every monomial of ``maxwell`` row ``row`` has a derivative along ``pair``."""

    row: int
    pair: tuple[int, int]


@dataclass(frozen=True)
class KernelWitness:
    name: str
    fields: tuple[PositionPoly, ...]


@dataclass(frozen=True)
class ContinuumGaugeStructure:
    """``phi`` maps potentials (columns) to fields (rows).

    ``sectors`` splits the field rows into two equally sized halves for the
    symplectic pairing ``lambda_s(F, G) = F^T J G`` with
    ``J = [[0, I], [symplectic_sign * I, 0]]``.  ``symplectic_sign = -1`` is
    the block-swap-with-sign form; ``+1`` is the symmetric pairing that the
    four-dimensional theta form reduces to.
    """

    name: str
    phi: DiffOpMatrix
    lambda_kind: LambdaKind = LambdaKind.INNER
    sectors: tuple[int, int] | None = None
    symplectic_sign: int = -1
    var_labels: tuple[str, ...] = ("1", "2", "3")
    potential_labels: tuple[str, ...] = ()
    current_labels: tuple[str, ...] = ()
    identities: tuple[Identity, ...] = ()
    transverse: tuple[TransverseCheck, ...] = ()
    witnesses: tuple[KernelWitness, ...] = ()
    named_forms: tuple[tuple[DiffPoly, str], ...] = ()

    def __post_init__(self):
        rows, cols = self.phi.shape
        if not self.potential_labels:
            object.__setattr__(self, "potential_labels", tuple("A%d" % i for i in range(cols)))
        if not self.current_labels:
            object.__setattr__(self, "current_labels", tuple("j%d" % i for i in range(cols)))
        if len(self.var_labels) != self.phi.nvars:
            raise ValueError("need one label per derivative variable")

    def with_lambda(self, kind: LambdaKind) -> "ContinuumGaugeStructure":
        return replace(self, lambda_kind=kind)

    def with_phi(self, phi: DiffOpMatrix, name: str | None = None) -> "ContinuumGaugeStructure":
        return replace(self, phi=phi, name=name or self.name)


@dataclass(frozen=True)
class SymplecticCheck:
    ok: bool
    residual: DiffOpMatrix

    def __bool__(self) -> bool:
        return self.ok


def symplectic_matrix(gs: ContinuumGaugeStructure) -> DiffOpMatrix:
    rows = gs.phi.shape[0]
    if gs.sectors is None:
        raise ValueError("%s has no sector split" % gs.name)
    a, b = gs.sectors
    if a != b or a + b != rows:
        raise ValueError("sector split %r is inconsistent with %d field rows" % (gs.sectors, rows))
    J = [[0] * rows for _ in range(rows)]
    for i in range(a):
        J[i][a + i] = 1
        J[a + i][i] = gs.symplectic_sign
    return DiffOpMatrix.from_ints(gs.phi.nvars, J)


def is_symplectic(gs: ContinuumGaugeStructure) -> SymplecticCheck:
    """``adjoint(phi) @ J @ phi`` vanishes, using the structure's sector split."""
    residual = formal_adjoint(gs.phi) @ symplectic_matrix(gs) @ gs.phi
    return SymplecticCheck(residual.is_zero(), residual)


MAXWELL_SIGN = 1


def maxwell(gs: ContinuumGaugeStructure) -> DiffOpMatrix:
    """Current-from-potential operator ``adjoint(phi) @ phi`` (sign ``+1``)."""
    if gs.lambda_kind is not LambdaKind.INNER:
        raise ValueError("maxwell needs the inner-product pairing; use with_lambda(LambdaKind.INNER)")
    return (formal_adjoint(gs.phi) @ gs.phi).scale(MAXWELL_SIGN)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    kind: str
    ok: bool
    residual: str = ""


def conservation_identities(gs: ContinuumGaugeStructure, mw: DiffOpMatrix | None = None) -> list[IdentityResult]:
    """Check every registered identity of ``gs``.

    Kinds: ``divergence`` (``D @ maxwell = 0``), ``transverse`` (every
    monomial in a row involves one of two coordinates) and ``kernel``
    (``phi`` annihilates a polynomial witness).
    """
    if mw is None:
        mw = maxwell(gs.with_lambda(LambdaKind.INNER))
    out = []
    for ident in gs.identities:
        res = ident.matrix @ mw
        out.append(IdentityResult(ident.name, "divergence", res.is_zero(), "" if res.is_zero() else repr(res)))
    for tc in gs.transverse:
        i, j = tc.pair
        bad = []
        for c, p in enumerate(mw.entries[tc.row]):
            for e, coef in p.terms.items():
                if e[i] == 0 and e[j] == 0:
                    bad.append("%s %s" % (format_diffpoly(DiffPoly(p.nvars, {e: coef}), gs.var_labels), gs.potential_labels[c]))
        name = "transverse %s over (%s,%s)" % (gs.current_labels[tc.row], gs.var_labels[i], gs.var_labels[j])
        out.append(IdentityResult(name, "transverse", not bad, ", ".join(bad)))
    for w in gs.witnesses:
        image = gs.phi.apply(w.fields)
        ok = all(f.is_zero() for f in image)
        out.append(IdentityResult("kernel witness %s" % w.name, "kernel", ok, "" if ok else repr(image)))
    return out


# -- built-in structures -------------------------------------------------------

def _levi_civita(idx: Sequence[int]) -> int:
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


# antisymmetric tensor components (electric 0i, then magnetic jk cyclic)
TENSOR_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


def _u1_static() -> ContinuumGaugeStructure:
    phi = f2_to_continuum(builtin_map("toric3"))
    div = DiffOpMatrix(3, [[DiffPoly.zero(3)] + [DiffPoly.d(3, i) for i in range(3)]])
    x = [PositionPoly.linear([int(i == k) for i in range(3)]) for k in range(3)]
    grad_sq = [PositionPoly.zero(3)] + [x[k].scale(2) for k in range(3)]  # gradient of |x|^2
    return ContinuumGaugeStructure(
        "u1_static", phi, sectors=(3, 3),
        identities=(Identity("U(1) divergence of the currents", div),),
        witnesses=(
            KernelWitness("constant A0", (PositionPoly.const(3, 1),) + (PositionPoly.zero(3),) * 3),
            KernelWitness("pure gauge grad |x|^2", tuple(grad_sq)),
        ),
    )


def _u1_4d() -> ContinuumGaugeStructure:
    rows = []
    for mu, nu in TENSOR_PAIRS:
        row = [DiffPoly.zero(4)] * 4
        row[nu] = row[nu] + DiffPoly.d(4, mu)
        row[mu] = row[mu] - DiffPoly.d(4, nu)
        rows.append(row)
    phi = DiffOpMatrix(4, rows)
    div = DiffOpMatrix(4, [[DiffPoly.d(4, i) for i in range(4)]])
    x = [PositionPoly.linear([int(i == k) for i in range(4)]) for k in range(4)]
    return ContinuumGaugeStructure(
        "u1_4d", phi, sectors=(3, 3), symplectic_sign=1,
        var_labels=("t", "1", "2", "3"),
        identities=(Identity("U(1) continuity equation", div),),
        witnesses=(KernelWitness("pure gauge grad(t x1)", (x[1], x[0], PositionPoly.zero(4), PositionPoly.zero(4))),),
    )


def _u1_adjoint() -> ContinuumGaugeStructure:
    # (phi A)_alpha = eps_{alpha beta mu nu} d_beta A^{mu nu}, one term per unordered pair
    rows = []
    for alpha in range(4):
        row = []
        for mu, nu in TENSOR_PAIRS:
            p = DiffPoly.zero(4)
            for beta in range(4):
                s = _levi_civita((alpha, beta, mu, nu))
                if s:
                    p = p + DiffPoly.d(4, beta) * s
            row.append(p)
        rows.append(row)
    phi = DiffOpMatrix(4, rows)
    # tensor divergence d_nu J^{mu nu} with J^{nu mu} = -J^{mu nu}
    div = []
    for mu in range(4):
        row = []
        for a, b in TENSOR_PAIRS:
            if a == mu:
                row.append(DiffPoly.d(4, b))
            elif b == mu:
                row.append(-DiffPoly.d(4, a))
            else:
                row.append(DiffPoly.zero(4))
        div.append(row)
    labels = tuple("A%d%d" % p for p in TENSOR_PAIRS)
    return ContinuumGaugeStructure(
        "u1_adjoint", phi, var_labels=("t", "1", "2", "3"),
        potential_labels=labels, current_labels=tuple("J%d%d" % p for p in TENSOR_PAIRS),
        identities=(Identity("tensor continuity equation", DiffOpMatrix(4, div)),),
    )


def _xcube() -> ContinuumGaugeStructure:
    phi = f2_to_continuum(builtin_map("xcube"))
    ones = DiffOpMatrix.from_ints(3, [[0, 1, 1, 1]])
    x = [PositionPoly.linear([int(i == k) for i in range(3)]) for k in range(3)]
    z = PositionPoly.zero(3)
    transverse = [TransverseCheck(0, p) for p in ((0, 1), (1, 2), (0, 2))]
    # j_{i+2} over (x_i, x_{i+1}), indices mod 3 from 1
    transverse += [TransverseCheck(1 + (i + 2) % 3, (i, (i + 1) % 3)) for i in range(3)]
    return ContinuumGaugeStructure(
        "xcube", phi, sectors=(3, 3),
        identities=(Identity("magnetic currents sum to zero", ones),),
        transverse=tuple(transverse),
        witnesses=(
            KernelWitness("A0 = x1^3 + x2^2 + x3", (x[0] * x[0] * x[0] + x[1] * x[1] + x[2], z, z, z)),
            KernelWitness("A = (0, x1 x2 x3, x1 x2 x3, x1 x2 x3)", (z,) + (x[0] * x[1] * x[2],) * 3),
            KernelWitness("A_i = x_i^2", (z, x[0] * x[0], x[1] * x[1], x[2] * x[2])),
        ),
    )


def haah_kernel_witnesses() -> list[PositionPoly]:
    """Polynomials killed by both ``d111`` and ``dmix``: harmonic in the plane normal to [111]."""
    u = PositionPoly.linear([1, -1, 0])
    w = PositionPoly.linear([1, 1, -2])
    return [PositionPoly.const(3, 1), u, w, u * w, u * u.scale(3) - w * w]


def _haah() -> ContinuumGaugeStructure:
    phi = f2_to_continuum(builtin_map("haah"))
    z = PositionPoly.zero(3)
    ws = []
    for k, a in enumerate(haah_kernel_witnesses()):
        ws.append(KernelWitness("a%d electric" % k, (a, z)))
        ws.append(KernelWitness("a%d magnetic" % k, (z, a)))
    named = ((dmix() * dmix() - d111() * d111(), "(∂²ₘᵢₓ)² − ∂²₍₁₁₁₎"),)
    return ContinuumGaugeStructure("haah", phi, sectors=(2, 2), witnesses=tuple(ws), named_forms=named)


_BUILTINS = {
    "u1_static": _u1_static,
    "u1_4d": _u1_4d,
    "u1_adjoint": _u1_adjoint,
    "xcube": _xcube,
    "haah": _haah,
}

CONTINUUM_FAMILIES = tuple(_BUILTINS)


def builtin_continuum(family: str) -> ContinuumGaugeStructure:
    if family not in _BUILTINS:
        raise ValueError("unknown continuum family %r (expected one of %s)" % (family, ", ".join(_BUILTINS)))
    return _BUILTINS[family]()


def bulmash_perturbation(gs: ContinuumGaugeStructure) -> ContinuumGaugeStructure:
    """Replace every ``dmix`` entry of the Haah map by ``dmix - 2 d111``."""
    target = dmix()
    shift = d111() * 2
    entries = [[p - shift if p == target else p for p in row] for row in gs.phi.entries]
    return gs.with_phi(DiffOpMatrix(gs.phi.nvars, entries), gs.name + "+bulmash")


# -- output -------------------------------------------------------------------

def _order_key(e: Exponent) -> tuple:
    return (-sum(e), tuple(-a for a in e))


def format_monomial(e: Exponent, var_labels: Sequence[str]) -> str:
    parts = []
    for a, lab in zip(e, var_labels):
        if a:
            parts.append("∂" + lab.translate(_SUB) + (str(a).translate(_SUP) if a > 1 else ""))
    return "".join(parts)


def format_diffpoly(p: DiffPoly, var_labels: Sequence[str] | None = None) -> str:
    """Unicode rendering, e.g. ``∂₁²∂₂² + ∂₁²∂₃² - 2∂₁∂₂``."""
    if var_labels is None:
        var_labels = tuple(str(i + 1) for i in range(p.nvars))
    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda t: _order_key(t[0]))
    out = ""
    for k, (e, c) in enumerate(items):
        mono = format_monomial(e, var_labels)
        mag = abs(c)
        body = (str(mag) if (mag != 1 or not mono) else "") + mono
        if k == 0:
            out = ("−" if c < 0 else "") + body
        else:
            out += (" − " if c < 0 else " + ") + body
    return out


def _sub_label(label: str) -> str:
    return label[0] + label[1:].translate(_SUB)


def format_row(
    row: Sequence[DiffPoly],
    lhs: str,
    potential_labels: Sequence[str],
    var_labels: Sequence[str],
    named_forms: Sequence[tuple[DiffPoly, str]] = (),
) -> str:
    """Render ``lhs = sum_c row[c] A_c``; entries listed in ``named_forms`` print by name."""
    names = dict(named_forms)
    pieces = []
    for p, lab in zip(row, potential_labels):
        if p.is_zero():
            continue
        if p in names:
            pieces.append((False, "(%s)%s" % (names[p], _sub_label(lab))))
            continue
        if -p in names:
            pieces.append((True, "(%s)%s" % (names[-p], _sub_label(lab))))
            continue
        neg = all(c < 0 for c in p.terms.values())
        q = -p if neg else p
        s = format_diffpoly(q, var_labels)
        if len(q.terms) > 1:
            s = "(%s)" % s
        elif s == "1":
            s = ""
        pieces.append((neg, s + _sub_label(lab)))
    if not pieces:
        return "%s = 0" % _sub_label(lhs)
    out = ("−" if pieces[0][0] else "") + pieces[0][1]
    for neg, s in pieces[1:]:
        out += (" − " if neg else " + ") + s
    return "%s = %s" % (_sub_label(lhs), out)


def format_matrix(M: DiffOpMatrix, var_labels: Sequence[str] | None = None) -> str:
    """Aligned grid of entries, one matrix row per line."""
    if var_labels is None:
        var_labels = tuple(str(i + 1) for i in range(M.nvars))
    cells = [[format_diffpoly(p, var_labels) for p in r] for r in M.entries]
    if not cells:
        return ""
    widths = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
    return "\n".join("[ " + "  ".join(s.rjust(w) for s, w in zip(r, widths)) + " ]" for r in cells)


def format_maxwell(gs: ContinuumGaugeStructure, mw: DiffOpMatrix | None = None) -> str:
    if mw is None:
        mw = maxwell(gs)
    return "\n".join(
        format_row(row, lhs, gs.potential_labels, gs.var_labels, gs.named_forms) for row, lhs in zip(mw.entries, gs.current_labels)
    )


def matrix_to_json(M: DiffOpMatrix) -> dict:
    return {
        "schema": "gaugecodes/diffop@1",
        "nvars": M.nvars,
        "shape": list(M.shape),
        "entries": [[[[list(e), c] for e, c in sorted(p.terms.items())] for p in r] for r in M.entries],
    }


def matrix_from_json(data: Mapping) -> DiffOpMatrix:
    if data.get("schema") != "gaugecodes/diffop@1":
        raise ValueError("unsupported schema %r" % data.get("schema"))
    n = int(data["nvars"])
    return DiffOpMatrix(n, [[DiffPoly(n, [(tuple(e), c) for e, c in cell]) for cell in r] for r in data["entries"]])


def maxwell_json(gs: ContinuumGaugeStructure) -> str:
    mw = maxwell(gs)
    return json.dumps(
        {
            "family": gs.name,
            "variables": list(gs.var_labels),
            "potentials": list(gs.potential_labels),
            "currents": list(gs.current_labels),
            "maxwell": matrix_to_json(mw),
        },
        indent=2,
    )


__all__ = [
    "DiffPoly",
    "PositionPoly",
    "DiffOpMatrix",
    "LambdaKind",
    "ContinuumGaugeStructure",
    "Identity",
    "TransverseCheck",
    "KernelWitness",
    "SymplecticCheck",
    "IdentityResult",
    "DEFAULT_SIGNS",
    "CONTINUUM_FAMILIES",
    "TENSOR_PAIRS",
    "d111",
    "dmix",
    "substitute",
    "f2_to_continuum",
    "formal_adjoint",
    "symplectic_matrix",
    "is_symplectic",
    "maxwell",
    "conservation_identities",
    "builtin_continuum",
    "bulmash_perturbation",
    "haah_kernel_witnesses",
    "format_diffpoly",
    "format_matrix",
    "format_maxwell",
    "format_row",
    "matrix_to_json",
    "matrix_from_json",
    "maxwell_json",
]
