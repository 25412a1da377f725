"""Haah-code constraints that are constant along [111], as coupled Newman–Moore layers.

A g_x-type constraint of Haah's code is a coefficient function ``a`` on sites
with ``a(v) = a(v-e1) + a(v-e2) + a(v-e3)`` and
``a(v) = a(v-e1-e2) + a(v-e2-e3) + a(v-e1-e3)``.  If ``a`` is constant along
``(1,1,1)`` it only depends on ``u = (v1-v3, v2-v3)``, and the two rules become
four-point stencils on the triangular lattice ``Z^2`` (neighbours
``+-(1,0), +-(0,1), +-(1,1)``)::

    (a)  f(u) + f(u-(1,0)) + f(u-(0,1)) + f(u+(1,1)) = 0
    (b)  f(u) + f(u+(1,0)) + f(u+(0,1)) + f(u-(1,1)) = 0

The colour ``(u1 + u2) mod 3`` is the [111] layer index mod 3: red (0) are
the vertices, green (1) and blue (2) the two kinds of triangles.  Each colour
class is a copy of the coarse lattice spanned by ``(2,1)`` and ``(1,2)``; the
layer system puts every class on an ``L x L`` torus, i.e. works modulo
``L * <(2,1), (1,2)>``.  That period lattice contains ``3L * Z^2``, so a layer
pattern lifts to Haah's code on any torus whose size is a multiple of ``3L``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import f2linalg as f2
from .codes import StabilizerCode, build_haah
from .f2linalg import BitVec, F2Matrix
from .gauge import F2GaugeStructure, constraint_space, phi_bits
from .polyform import LaurentPoly, antipode, builtin_map, frobenius_power

COLOR_NAMES = ("red", "green", "blue")
COARSE = ((2, 1), (1, 2))
_OFFSET = {0: (0, 0), 1: (1, 0), 2: (-1, 0)}

STENCILS = {
    "a": ((0, 0), (-1, 0), (0, -1), (1, 1)),
    "b": ((0, 0), (1, 0), (0, 1), (-1, -1)),
}


def color(u: Sequence[int]) -> int:
    return (u[0] + u[1]) % 3


def point(c: int, i: int, j: int) -> tuple[int, int]:
    """Plane coordinates of cell ``(i, j)`` of layer ``c``."""
    o = _OFFSET[c]
    return (2 * i + j + o[0], i + 2 * j + o[1])


def locate(u: Sequence[int], L: int) -> tuple[int, int, int]:
    """Inverse of :func:`point` modulo the period lattice ``L * <(2,1),(1,2)>``."""
    c = color(u)
    o = _OFFSET[c]
    w0, w1 = u[0] - o[0], u[1] - o[1]
    i, j = (2 * w0 - w1) // 3, (2 * w1 - w0) // 3
    return c, i % L, j % L


def variable_index(u: Sequence[int], L: int) -> int:
    c, i, j = locate(u, L)
    return (c * L + i) * L + j


@dataclass(frozen=True)
class LayerSystem:
    """Recurrences (a) and (b) at every plane point; one variable per point."""

    L: int
    matrix: F2Matrix
    labels: tuple[tuple[str, tuple[int, int]], ...]

    @property
    def n_variables(self) -> int:
        return 3 * self.L * self.L


def build_system(L: int) -> LayerSystem:
    if L < 2:
        raise ValueError("L must be at least 2")
    n = 3 * L * L
    rows, labels = [], []
    for c in range(3):
        for i in range(L):
            for j in range(L):
                u = point(c, i, j)
                for name, stencil in STENCILS.items():
                    idx = [variable_index((u[0] + a, u[1] + b), L) for a, b in stencil]
                    rows.append(BitVec.from_indices(n, idx))
                    labels.append((name, u))
    return LayerSystem(L, F2Matrix.from_rows(rows, cols=n), tuple(labels))


def count_solutions(L: int) -> int:
    system = build_system(L)
    return system.n_variables - f2.rank(system.matrix)


@dataclass(frozen=True)
class Pattern:
    """A solution: ``layers[c, i, j]`` is the value at :func:`point` ``(c, i, j)``."""

    L: int
    layers: np.ndarray

    @classmethod
    def from_bitvec(cls, L: int, v: BitVec) -> "Pattern":
        return cls(L, v.to_bits().reshape(3, L, L).astype(np.uint8))

    def to_bitvec(self) -> BitVec:
        return BitVec.from_bits(self.layers.reshape(-1))

    def value(self, u: Sequence[int]) -> int:
        c, i, j = locate(u, self.L)
        return int(self.layers[c, i, j])

    def translate(self, shift: Sequence[int]) -> "Pattern":
        out = np.zeros_like(self.layers)
        for c in range(3):
            for i in range(self.L):
                for j in range(self.L):
                    u = point(c, i, j)
                    out[locate((u[0] + shift[0], u[1] + shift[1]), self.L)] = self.layers[c, i, j]
        return Pattern(self.L, out)

    def is_empty(self) -> bool:
        return not self.layers.any()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Pattern) and other.L == self.L and np.array_equal(other.layers, self.layers)

    def __hash__(self) -> int:
        return hash((self.L, self.layers.tobytes()))


def enumerate_solutions(L: int) -> list[Pattern]:
    """Canonical kernel basis (reduced row echelon form of the solution space)."""
    system = build_system(L)
    basis = f2.kernel_basis(system.matrix)
    if basis:
        R, _ = f2.rref(F2Matrix.from_rows(basis, cols=system.n_variables))
        basis = R.row_list()
    return [Pattern.from_bitvec(L, v) for v in basis]


def is_solution(p: Pattern) -> bool:
    return build_system(p.L).matrix.matvec(p.to_bitvec()).is_zero()


def translation_closed(patterns: Sequence[Pattern], shifts: Iterable[Sequence[int]] = ((1, 0), (0, 1))) -> bool:
    """Every translate of every pattern lies in the span of ``patterns``."""
    vecs = [p.to_bitvec() for p in patterns]
    return all(f2.in_span(p.translate(s).to_bitvec(), vecs) for p in patterns for s in shifts)


# -- lifting to Haah's code -----------------------------------------------------------


@dataclass(frozen=True)
class LiftResult:
    L_prime: int
    subset: BitVec
    verified: bool


def lift_size(L: int) -> int:
    """Smallest Haah lattice size the layer torus of size ``L`` embeds into."""
    return 3 * L


def lift_subset(pattern: Pattern, L_prime: int, sector: str = "x") -> BitVec:
    """Stabilizer subset of ``build_haah(L_prime)`` with ``a(v) = pattern(v1-v3, v2-v3)``.

    ``sector="z"`` uses the mirrored pattern ``b(v) = a(-v)`` on the g_z
    stabilizers, which solves the antipodal recurrences.
    """
    if L_prime % lift_size(pattern.L):
        raise ValueError("pattern of layer size %d needs a Haah size divisible by %d" % (pattern.L, lift_size(pattern.L)))
    if sector not in ("x", "z"):
        raise ValueError("sector must be 'x' or 'z'")
    n_sites = L_prime ** 3
    idx = []
    for site in range(n_sites):
        v1, rem = divmod(site, L_prime * L_prime)
        v2, v3 = divmod(rem, L_prime)
        u = (v1 - v3, v2 - v3) if sector == "x" else (v3 - v1, v3 - v2)
        if pattern.value(u):
            idx.append(site if sector == "x" else n_sites + site)
    return BitVec.from_indices(2 * n_sites, idx)


def lift_to_haah(pattern: Pattern, L_prime: int | None = None, sector: str = "x", code: StabilizerCode | None = None) -> LiftResult:
    """Lift and check that the product of the selected stabilizers is the identity."""
    if L_prime is None:
        L_prime = lift_size(pattern.L)
    subset = lift_subset(pattern, L_prime, sector)
    gs = F2GaugeStructure.from_code(code if code is not None else build_haah(L_prime))
    return LiftResult(L_prime, subset, phi_bits(gs, subset).is_zero())


@dataclass(frozen=True)
class LiftSummary:
    L: int
    L_prime: int
    n_patterns: int
    n_verified: int
    lifted_dim: int
    dim_ker_phi: int

    @property
    def gap(self) -> int:
        """Constraints of Haah's code not reached by the [111]-constant ansatz."""
        return self.dim_ker_phi - self.lifted_dim

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "L_prime": self.L_prime,
            "n_patterns": self.n_patterns,
            "n_verified": self.n_verified,
            "lifted_dim": self.lifted_dim,
            "dim_ker_phi": self.dim_ker_phi,
            "gap": self.gap,
        }


def lift_all(L: int, L_prime: int | None = None) -> LiftSummary:
    """Lift every basis pattern into both sectors and compare with ``ker phi``."""
    L_prime = lift_size(L) if L_prime is None else L_prime
    code = build_haah(L_prime)
    gs = F2GaugeStructure.from_code(code)
    subsets, verified = [], 0
    patterns = enumerate_solutions(L)
    for p in patterns:
        for sector in ("x", "z"):
            s = lift_subset(p, L_prime, sector)
            verified += phi_bits(gs, s).is_zero()
            subsets.append(s)
    return LiftSummary(
        L, L_prime, 2 * len(patterns), verified,
        f2.span_rank(subsets, gs.n_stabilizers) if subsets else 0,
        constraint_space(gs).dim,
    )


# -- fractal conditions -----------------------------------------------------------------


def fractal_stencil(base: str, k: int, sector: str = "x") -> list[tuple[int, int, int]]:
    """Offsets ``m`` of the generation-``k`` condition, from ``p^(2^k)``.

    For the x sector the condition at ``v`` involves ``g_x`` at ``v - m``;
    for the z sector it involves ``g_z`` at ``v + m``.
    """
    M = builtin_map("haah")
    if base not in ("a", "b"):
        raise ValueError("base must be 'a' or 'b'")
    p: LaurentPoly = M.matrix[0 if base == "a" else 1, 0]
    if sector == "z":
        p = antipode(M.matrix[3 if base == "a" else 2, 1])
    return sorted(frobenius_power(p, k).terms)


def fractal_conditions(base: str, k: int, L: int, sector: str = "x") -> list[frozenset[int]]:
    """For each anchor site, the stabilizer indices (in ``build_haah(L)``) of the condition."""
    if k < 0 or 2 ** k >= L:
        raise ValueError("scale 2^%d does not fit in a lattice of size %d" % (k, L))
    offsets = fractal_stencil(base, k, sector)
    n_sites = L ** 3
    out = []
    for site in range(n_sites):
        v1, rem = divmod(site, L * L)
        v2, v3 = divmod(rem, L)
        idx = set()
        for m in offsets:
            if sector == "x":
                w = ((v1 - m[0]) % L, (v2 - m[1]) % L, (v3 - m[2]) % L)
                idx ^= {(w[0] * L + w[1]) * L + w[2]}
            else:
                w = ((v1 + m[0]) % L, (v2 + m[1]) % L, (v3 + m[2]) % L)
                idx ^= {n_sites + (w[0] * L + w[1]) * L + w[2]}
        out.append(frozenset(idx))
    return out


# -- output ---------------------------------------------------------------------------


def render_pattern(p: Pattern) -> str:
    """Three ``L x L`` grids, one per colour; rows index ``i``, columns ``j``."""
    blocks = []
    for c in range(3):
        lines = ["%s (%s)" % (COLOR_NAMES[c], "vertices" if c == 0 else "triangles")]
        for i in range(p.L):
            lines.append(" ".join("#" if p.layers[c, i, j] else "." for j in range(p.L)))
        blocks.append(lines)
    width = max(len(s) for b in blocks for s in b)
    return "\n".join("   ".join(b[r].ljust(width) for b in blocks) for r in range(len(blocks[0])))


def pattern_to_json(p: Pattern) -> dict:
    return {
        "schema": "gaugecodes/nm-pattern@1",
        "L": p.L,
        "layers": {COLOR_NAMES[c]: p.layers[c].tolist() for c in range(3)},
    }


def pattern_from_json(data: dict) -> Pattern:
    if data.get("schema") != "gaugecodes/nm-pattern@1":
        raise ValueError("unsupported schema %r" % data.get("schema"))
    L = int(data["L"])
    layers = np.array([data["layers"][name] for name in COLOR_NAMES], dtype=np.uint8)
    if layers.shape != (3, L, L):
        raise ValueError("layer arrays must be %dx%d" % (L, L))
    return Pattern(L, layers)


def patterns_json(patterns: Sequence[Pattern]) -> str:
    return json.dumps([pattern_to_json(p) for p in patterns], indent=2)


__all__ = [
    "COLOR_NAMES",
    "STENCILS",
    "LayerSystem",
    "Pattern",
    "LiftResult",
    "LiftSummary",
    "color",
    "point",
    "locate",
    "variable_index",
    "build_system",
    "count_solutions",
    "enumerate_solutions",
    "is_solution",
    "translation_closed",
    "lift_size",
    "lift_subset",
    "lift_to_haah",
    "lift_all",
    "fractal_stencil",
    "fractal_conditions",
    "render_pattern",
    "pattern_to_json",
    "pattern_from_json",
    "patterns_json",
]
