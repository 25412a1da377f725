"""Pauli operators modulo phase, as pairs of qubit subsets.

Qubits live on the sites of a periodic ``d``-dimensional lattice of linear
size ``L`` with ``n`` slots per site.  The linear qubit index is
``site_index * n + slot`` where ``site_index`` is row-major over the
coordinates (first coordinate slowest).  Bit forms of operators are the
concatenation ``[x_part | z_part]`` of length ``2N``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .f2linalg import BitVec, F2Matrix


@dataclass(frozen=True)
class Lattice:
    d: int
    L: int
    n: int

    def __post_init__(self):
        if self.d < 1 or self.L < 1 or self.n < 1:
            raise ValueError("lattice parameters must be positive: %r" % (self,))

    @property
    def n_sites(self) -> int:
        return self.L ** self.d

    @property
    def n_qubits(self) -> int:
        return self.n_sites * self.n

    def sites(self) -> Iterator[tuple[int, ...]]:
        """All sites in row-major order."""
        return itertools.product(range(self.L), repeat=self.d)

    def reduce(self, site: Iterable[int]) -> tuple[int, ...]:
        return tuple(int(c) % self.L for c in site)

    def site_index(self, site: Iterable[int]) -> int:
        idx = 0
        for c in self.reduce(site):
            idx = idx * self.L + c
        return idx

    def site_of(self, index: int) -> tuple[int, ...]:
        coords = []
        for _ in range(self.d):
            index, c = divmod(index, self.L)
            coords.append(c)
        return tuple(reversed(coords))

    def qubit(self, site: Iterable[int], slot: int) -> int:
        if not 0 <= slot < self.n:
            raise ValueError("slot %d out of range (n=%d)" % (slot, self.n))
        return self.site_index(site) * self.n + slot

    def qubit_index(self, q: int) -> "QubitIndex":
        s, slot = divmod(q, self.n)
        return QubitIndex(self.site_of(s), slot)

    def translate_qubit(self, q: int, shift: Iterable[int]) -> int:
        s, slot = divmod(q, self.n)
        site = self.site_of(s)
        return self.qubit([a + b for a, b in zip(site, shift)], slot)


@dataclass(frozen=True, order=True)
class QubitIndex:
    site: tuple[int, ...]
    slot: int

    def __str__(self) -> str:
        return "(%s;%d)" % (",".join(map(str, self.site)), self.slot)


class PauliOperator:
    """Pauli operator modulo phase: ``x`` and ``z`` are bit vectors over qubits."""

    __slots__ = ("lattice", "x", "z")

    def __init__(self, lattice: Lattice, x: BitVec | None = None, z: BitVec | None = None):
        N = lattice.n_qubits
        x = BitVec(N) if x is None else x
        z = BitVec(N) if z is None else z
        if x.length != N or z.length != N:
            raise ValueError("x/z parts must have length %d" % N)
        self.lattice = lattice
        self.x = x
        self.z = z

    @classmethod
    def identity(cls, lattice: Lattice) -> "PauliOperator":
        return cls(lattice)

    @classmethod
    def from_qubits(
        cls, lattice: Lattice, x: Iterable[int] = (), z: Iterable[int] = ()
    ) -> "PauliOperator":
        N = lattice.n_qubits
        return cls(lattice, BitVec.from_indices(N, x), BitVec.from_indices(N, z))

    @classmethod
    def from_bitvec(cls, lattice: Lattice, v: BitVec) -> "PauliOperator":
        N = lattice.n_qubits
        if v.length != 2 * N:
            raise ValueError("expected a vector of length %d" % (2 * N))
        bits = v.to_bits()
        return cls(lattice, BitVec.from_bits(bits[:N]), BitVec.from_bits(bits[N:]))

    def to_bitvec(self) -> BitVec:
        return BitVec.from_bits(np.concatenate([self.x.to_bits(), self.z.to_bits()]))

    @property
    def n_qubits(self) -> int:
        return self.lattice.n_qubits

    def _check(self, other: "PauliOperator") -> None:
        if not isinstance(other, PauliOperator) or other.lattice != self.lattice:
            raise ValueError("Pauli operators act on different qubit universes")

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        self._check(other)
        return PauliOperator(self.lattice, self.x + other.x, self.z + other.z)

    __mul__ = __add__

    def is_identity(self) -> bool:
        return self.x.is_zero() and self.z.is_zero()

    def is_css(self) -> bool:
        return self.x.is_zero() or self.z.is_zero()

    def weight(self) -> int:
        return len(self.support_indices())

    def support_indices(self) -> list[int]:
        return sorted(set(self.x.indices()) | set(self.z.indices()))

    def translate(self, shift: Iterable[int]) -> "PauliOperator":
        shift = tuple(shift)
        lat = self.lattice
        return PauliOperator.from_qubits(
            lat,
            [lat.translate_qubit(q, shift) for q in self.x.indices()],
            [lat.translate_qubit(q, shift) for q in self.z.indices()],
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PauliOperator)
            and other.lattice == self.lattice
            and other.x == self.x
            and other.z == self.z
        )

    def __hash__(self) -> int:
        return hash((self.lattice, self.x, self.z))

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return "PauliOperator(%s)" % format_pauli(self)


def pauli_add(f: PauliOperator, g: PauliOperator) -> PauliOperator:
    """Product of two Paulis with the phase discarded."""
    return f + g


def symplectic_form(f: PauliOperator, g: PauliOperator) -> int:
    """``|F_x & G_z| + |G_x & F_z| mod 2``; zero iff ``f`` and ``g`` commute."""
    f._check(g)
    return f.x.dot(g.z) ^ g.x.dot(f.z)


def commutes(f: PauliOperator, g: PauliOperator) -> bool:
    return symplectic_form(f, g) == 0


def support(f: PauliOperator) -> set[QubitIndex]:
    return {f.lattice.qubit_index(q) for q in f.support_indices()}


def symplectic_gram(n_qubits: int) -> F2Matrix:
    """Gram matrix of the symplectic form in the ordered basis (x_0.., z_0..)."""
    N = n_qubits
    G = np.zeros((2 * N, 2 * N), dtype=np.uint8)
    G[np.arange(N), N + np.arange(N)] = 1
    G[N + np.arange(N), np.arange(N)] = 1
    return F2Matrix.from_dense(G)


def swap_halves(v: BitVec) -> BitVec:
    """Apply the symplectic Gram matrix: ``(x | z) -> (z | x)``."""
    bits = v.to_bits()
    N = bits.size // 2
    return BitVec.from_bits(np.concatenate([bits[N:], bits[:N]]))


_TOKEN = re.compile(r"^([XYZ])@\(([-\d,\s]*);\s*(\d+)\)$")


def format_pauli(f: PauliOperator) -> str:
    """Whitespace-separated ``X@(c1,..,cd;slot)`` tokens; ``I`` for the identity."""
    xs = set(f.x.indices())
    zs = set(f.z.indices())
    tokens = []
    for q in sorted(xs | zs):
        kind = "Y" if (q in xs and q in zs) else ("X" if q in xs else "Z")
        tokens.append("%s@%s" % (kind, f.lattice.qubit_index(q)))
    return " ".join(tokens) if tokens else "I"


def parse_pauli(text: str, lattice: Lattice) -> PauliOperator:
    """Inverse of :func:`format_pauli`.  Repeated factors multiply (mod phase)."""
    x: list[int] = []
    z: list[int] = []
    for tok in text.split():
        if tok == "I":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError("cannot parse Pauli token %r" % tok)
        kind, coords, slot = m.groups()
        site = [int(c) for c in coords.split(",") if c.strip()]
        if len(site) != lattice.d:
            raise ValueError("token %r has %d coordinates, lattice has d=%d" % (tok, len(site), lattice.d))
        q = lattice.qubit(site, int(slot))
        if kind in "XY":
            x.append(q)
        if kind in "ZY":
            z.append(q)
    return PauliOperator.from_qubits(lattice, x, z)
