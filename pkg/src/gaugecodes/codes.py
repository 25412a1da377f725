"""Stabilizer sets for the toric codes, X-cube and Haah's cubic code.

Every code lives on a periodic cubic lattice with qubits on vertices: edge
qubits are stored on the vertex at the negative end of the edge, in the
slot equal to the edge direction.  Stabilizers are ordered type-major, then
by anchor site in row-major order.

Open-boundary codes keep the same qubits.  A cut is placed on the seam
between coordinate ``L-1`` and ``0`` of each cut direction; every stabilizer
leg that crosses a seam, seen from the stabilizer's anchor, is deleted.
With a single seam the deleted X legs and deleted Z legs never share a
qubit, because X-type and Z-type stabilizers extend in opposite directions.
Where several seams meet (the X-cube box) they do, and
:func:`build_change_of_boundary` then re-chooses the altered target
generators inside the same stabilizer group so that the altered parts
commute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import f2linalg as f2
from .f2linalg import BitVec, F2Matrix
from .pauli import Lattice, PauliOperator, format_pauli, parse_pauli, swap_halves

FAMILIES = ("toric2", "toric3", "xcube", "haah")
CODE_SCHEMA = "gaugecodes/code@1"


class InvalidCode(ValueError):
    """A stabilizer list violates the stabilizer-set conditions."""


class BoundaryError(ValueError):
    """A change of boundary fails one of its three conditions."""

    def __init__(self, condition: int, message: str, witness=None):
        super().__init__("condition %d failed: %s" % (condition, message))
        self.condition = condition
        self.witness = witness


@dataclass(frozen=True)
class Stabilizer:
    op: PauliOperator
    kind: str
    anchor: tuple[int, ...]


@dataclass(frozen=True)
class StabilizerType:
    """A translation class of stabilizers: Pauli letter plus legs ``(offset, slot)``."""

    label: str
    pauli: str
    legs: tuple[tuple[tuple[int, ...], int], ...]


@dataclass
class StabilizerCode:
    lattice: Lattice
    stabilizers: list[Stabilizer]
    family: str = "custom"
    boundary: str = "periodic"
    cuts: tuple[int, ...] = ()
    _matrix: F2Matrix | None = field(default=None, repr=False, compare=False)

    @property
    def n_qubits(self) -> int:
        return self.lattice.n_qubits

    @property
    def L(self) -> int:
        return self.lattice.L

    def __len__(self) -> int:
        return len(self.stabilizers)

    def __iter__(self):
        return iter(self.stabilizers)

    def __getitem__(self, i: int) -> Stabilizer:
        return self.stabilizers[i]

    @property
    def ops(self) -> list[PauliOperator]:
        return [s.op for s in self.stabilizers]

    def stabilizer_matrix(self) -> F2Matrix:
        """``|S| x 2N`` matrix whose rows are the stabilizer bit forms."""
        if self._matrix is None:
            self._matrix = F2Matrix.from_rows(
                [s.op.to_bitvec() for s in self.stabilizers], cols=2 * self.n_qubits
            )
        return self._matrix

    def indices_of(self, kind: str) -> list[int]:
        return [i for i, s in enumerate(self.stabilizers) if s.kind == kind]

    def kinds(self) -> list[str]:
        seen: list[str] = []
        for s in self.stabilizers:
            if s.kind not in seen:
                seen.append(s.kind)
        return seen

    def subset(self, indices: Iterable[int]) -> BitVec:
        return BitVec.from_indices(len(self), indices)

    def validate(self) -> "StabilizerCode":
        problems = check_stabilizer_set(self)
        if problems:
            raise InvalidCode("; ".join(problems))
        return self


def _expand(lattice: Lattice, types: Sequence[StabilizerType], cuts: Sequence[int] = ()) -> list[Stabilizer]:
    L = lattice.L
    out = []
    for t in types:
        for site in lattice.sites():
            qubits = []
            for offset, slot in t.legs:
                pos = [a + b for a, b in zip(site, offset)]
                if any(not 0 <= pos[j] < L for j in cuts):
                    continue
                qubits.append(lattice.qubit(pos, slot))
            if t.pauli == "X":
                op = PauliOperator.from_qubits(lattice, x=qubits)
            else:
                op = PauliOperator.from_qubits(lattice, z=qubits)
            out.append(Stabilizer(op, t.label, tuple(site)))
    return out


def _unit(d: int, j: int, scale: int = 1) -> tuple[int, ...]:
    return tuple(scale if i == j else 0 for i in range(d))


def _add(*vs: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(c) for c in zip(*vs))


def toric_types(d: int) -> list[StabilizerType]:
    zero = (0,) * d
    vertex = []
    for j in range(d):
        vertex += [(zero, j), (_unit(d, j, -1), j)]
    types = [StabilizerType("vertex", "X", tuple(vertex))]
    planes = [(0, 1)] if d == 2 else [(1, 2), (0, 2), (0, 1)]
    for i, j in planes:
        legs = ((zero, i), (_unit(d, j), i), (zero, j), (_unit(d, i), j))
        types.append(StabilizerType("plaquette_%d%d" % (i, j), "Z", legs))
    return types


def xcube_types() -> list[StabilizerType]:
    d = 3
    zero = (0, 0, 0)
    cube = []
    for j in range(3):
        k, l = [i for i in range(3) if i != j]
        for a in (0, 1):
            for b in (0, 1):
                cube.append((_add(_unit(d, k, a), _unit(d, l, b)), j))
    types = [StabilizerType("cube", "X", tuple(cube))]
    for normal in range(3):
        i, j = [c for c in range(3) if c != normal]
        legs = ((zero, i), (_unit(d, i, -1), i), (zero, j), (_unit(d, j, -1), j))
        types.append(StabilizerType("cross_%d" % normal, "Z", legs))
    return types


def haah_types() -> list[StabilizerType]:
    e = [_unit(3, j) for j in range(3)]
    zero = (0, 0, 0)
    neg = lambda v: tuple(-c for c in v)
    gx = [(zero, 0), (e[0], 0), (e[1], 0), (e[2], 0),
          (zero, 1), (_add(e[0], e[1]), 1), (_add(e[1], e[2]), 1), (_add(e[0], e[2]), 1)]
    gz = [(zero, 0), (neg(_add(e[0], e[1])), 0), (neg(_add(e[1], e[2])), 0), (neg(_add(e[0], e[2])), 0),
          (zero, 1), (neg(e[0]), 1), (neg(e[1]), 1), (neg(e[2]), 1)]
    return [StabilizerType("g_x", "X", tuple(gx)), StabilizerType("g_z", "Z", tuple(gz))]


def family_types(family: str) -> tuple[int, int, list[StabilizerType]]:
    """``(d, n, types)`` for a built-in family."""
    if family == "toric2":
        return 2, 2, toric_types(2)
    if family == "toric3":
        return 3, 3, toric_types(3)
    if family == "xcube":
        return 3, 3, xcube_types()
    if family == "haah":
        return 3, 2, haah_types()
    raise ValueError("unknown code family %r (expected one of %s)" % (family, ", ".join(FAMILIES)))


# Cut directions giving a trivial target logical space.  One seam suffices
# for the toric codes; X-cube needs at least two (one leaves 2L logicals).
DEFAULT_CUTS = {"toric2": (0,), "toric3": (0,), "xcube": (0, 1, 2)}


def _build(family: str, L: int, boundary: str = "periodic", cuts: Sequence[int] | None = None) -> StabilizerCode:
    if L < 2:
        raise ValueError("L must be at least 2, got %r" % L)
    d, n, types = family_types(family)
    lattice = Lattice(d, L, n)
    if boundary == "periodic":
        return StabilizerCode(lattice, _expand(lattice, types), family, "periodic").validate()
    if boundary != "open":
        raise ValueError("boundary must be 'periodic' or 'open', got %r" % boundary)
    if cuts is None:
        if family not in DEFAULT_CUTS:
            raise ValueError("no open-boundary construction for %r" % family)
        cuts = DEFAULT_CUTS[family]
    cuts = tuple(sorted(set(cuts)))
    stabs = _expand(lattice, types, cuts)
    code = StabilizerCode(lattice, stabs, family, "open", cuts)
    problems = [p for p in check_stabilizer_set(code) if not p.startswith("condition 4")]
    if problems:
        raise InvalidCode("; ".join(problems))
    return code


def build_toric(L: int, d: int = 2, boundary: str = "periodic", cuts: Sequence[int] | None = None) -> StabilizerCode:
    if d not in (2, 3):
        raise ValueError("toric code dimension must be 2 or 3")
    return _build("toric%d" % d, L, boundary, cuts)


def build_xcube(L: int, boundary: str = "periodic", cuts: Sequence[int] | None = None) -> StabilizerCode:
    return _build("xcube", L, boundary, cuts)


def build_haah(L: int) -> StabilizerCode:
    return _build("haah", L)


def build_code(family: str, L: int, boundary: str = "periodic") -> StabilizerCode:
    if family == "haah" and boundary != "periodic":
        raise ValueError("Haah's code is only built with periodic boundaries")
    return _build(family, L, boundary)


def commutation_matrix(code: StabilizerCode) -> F2Matrix:
    """``|S| x |S|`` matrix of pairwise symplectic products."""
    S = code.stabilizer_matrix()
    swapped = F2Matrix.from_rows([swap_halves(r) for r in S.row_list()], cols=S.cols) if S.rows else S
    return S @ swapped.T


def check_stabilizer_set(code: StabilizerCode) -> list[str]:
    """Conditions 1, 2 and 4 of a stabilizer set; returns human-readable failures."""
    problems = []
    if len(code) == 0:
        return ["stabilizer list is empty"]
    C = commutation_matrix(code).to_dense()
    bad = np.argwhere(np.triu(C))
    if bad.size:
        i, j = bad[0]
        problems.append("condition 1: stabilizers %d and %d anticommute" % (i, j))
    for i, s in enumerate(code.stabilizers):
        if s.op.is_identity():
            problems.append("condition 2: stabilizer %d is the identity" % i)
            break
    covered = np.zeros(code.n_qubits, dtype=bool)
    for s in code.stabilizers:
        covered[s.op.support_indices()] = True
    if not covered.all():
        problems.append("condition 4: qubit %d is not acted upon" % int(np.flatnonzero(~covered)[0]))
    return problems


def is_translation_covariant(code: StabilizerCode) -> bool:
    ops = set(code.ops)
    for j in range(code.lattice.d):
        shift = _unit(code.lattice.d, j)
        if {op.translate(shift) for op in ops} != ops:
            return False
    return True


def is_css(code: StabilizerCode) -> bool:
    return all(s.op.is_css() for s in code.stabilizers)


@dataclass
class ChangeOfBoundary:
    """Bijection ``beta`` from a periodic code onto an open code on the same qubits.

    ``pairing[i]`` is the index in ``target`` of ``beta(source[i])``.
    """

    source: StabilizerCode
    target: StabilizerCode
    pairing: tuple[int, ...]

    def fixed_indices(self) -> list[int]:
        """Source stabilizers left unaltered by the change of boundary."""
        return [
            i for i, j in enumerate(self.pairing)
            if self.source[i].op == self.target[j].op
        ]

    def altered_indices(self) -> list[int]:
        fixed = set(self.fixed_indices())
        return [i for i in range(len(self.source)) if i not in fixed]

    def apply(self, subset: BitVec) -> BitVec:
        """``beta[A]`` as a subset of the target."""
        return BitVec.from_indices(len(self.target), [self.pairing[i] for i in subset.indices()])

    def apply_inverse(self, subset: BitVec) -> BitVec:
        inv = {j: i for i, j in enumerate(self.pairing)}
        return BitVec.from_indices(len(self.source), [inv[j] for j in subset.indices()])

    def target_matrix_in_source_order(self) -> F2Matrix:
        """Rows ``beta(s)`` for ``s`` in source order."""
        T = self.target.stabilizer_matrix()
        return F2Matrix(len(self.pairing), T.cols, T.data[list(self.pairing)])

    def validate(self) -> "ChangeOfBoundary":
        check_change_of_boundary(self)
        return self


def check_change_of_boundary(beta: ChangeOfBoundary) -> None:
    """Raise :class:`BoundaryError` naming the first failing condition."""
    src, tgt = beta.source, beta.target
    if src.lattice != tgt.lattice:
        raise BoundaryError(0, "source and target act on different qubits")
    if sorted(beta.pairing) != list(range(len(tgt))) or len(src) != len(tgt):
        raise BoundaryError(0, "pairing is not a bijection")
    N = src.n_qubits
    St = tgt.stabilizer_matrix()
    r_t = f2.rank(St)
    # commuting target: k' = N - rank(S')
    if r_t != N:
        raise BoundaryError(1, "target logical dimension is %d, not 0" % (2 * (N - r_t)))
    Ss = src.stabilizer_matrix()
    fixed = beta.fixed_indices()
    common = F2Matrix(len(fixed), Ss.cols, Ss.data[fixed])
    r_s = f2.rank(Ss)
    r_union = f2.rank(Ss.vstack(St))
    inter = r_s + r_t - r_union
    r_common = f2.rank(common)
    if inter != r_common:
        raise BoundaryError(
            2, "dim(G & G') = %d but the common stabilizers span %d" % (inter, r_common)
        )
    deltas = Ss + beta.target_matrix_in_source_order()
    swapped = F2Matrix.from_rows([swap_halves(r) for r in deltas.row_list()], cols=deltas.cols)
    gram = (deltas @ swapped.T).to_dense()
    bad = np.argwhere(gram)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise BoundaryError(3, "altered parts of stabilizers %d and %d anticommute" % (i, j), (i, j))


def symmetrize_pairing(source: StabilizerCode, target: StabilizerCode) -> StabilizerCode:
    """Re-choose the altered generators of ``target`` so that condition 3 holds.

    Pair source and target by index and let ``B`` be the altered indices.
    Condition 3 is equivalent to the matrix ``K[i, j] = lambda(s_i, t_j)``
    (``i, j`` in ``B``) being symmetric.  Replacing the altered generators by
    ``Y^T t_B`` for an invertible ``Y`` keeps the stabilizer group, hence
    conditions 1 and 2, and turns ``K`` into ``K Y``.  Writing ``K = U V^T``
    with full-rank factors and taking ``Y^T = [U|U'][V|V']^{-1}`` gives
    ``K Y = U U^T``.  When ``K`` is already symmetric the target is returned
    unchanged.

    The new generators are products of altered target generators of both
    Pauli types, so they need not be CSS or geometrically local.  A
    CSS-preserving choice is impossible whenever the X-block and Z-block
    ranks of ``K`` differ, as they do for X-cube with two or more seams.
    """
    if source.lattice != target.lattice or len(source) != len(target):
        raise ValueError("source and target must share qubits and stabilizer count")
    N = source.n_qubits
    Ss, St = source.stabilizer_matrix(), target.stabilizer_matrix()
    altered = [i for i in range(Ss.rows) if Ss.row(i) != St.row(i)]
    if not altered:
        return target
    SB = F2Matrix(len(altered), 2 * N, Ss.data[altered])
    TB = F2Matrix(len(altered), 2 * N, St.data[altered])
    TB_swapped = F2Matrix.from_rows([swap_halves(r) for r in TB.row_list()], cols=2 * N)
    K = SB @ TB_swapped.T
    if K == K.T:
        return target
    n = len(altered)
    R, piv = f2.rref(K)
    U = K.select_columns(piv)  # K = U R because R is the rref of K
    Ub = F2Matrix.from_rows(f2.extend_to_basis(U.T.row_list(), n), cols=n).T
    Vb = F2Matrix.from_rows(f2.extend_to_basis(R.row_list(), n), cols=n).T
    new_rows = (Ub @ f2.inverse(Vb)) @ TB
    lat = target.lattice
    stabs = list(target.stabilizers)
    for row, i in zip(new_rows.row_list(), altered):
        old = stabs[i]
        stabs[i] = Stabilizer(PauliOperator.from_bitvec(lat, row), old.kind, old.anchor)
    return StabilizerCode(lat, stabs, target.family, target.boundary, target.cuts)


def build_change_of_boundary(family: str, L: int, cuts: Sequence[int] | None = None) -> ChangeOfBoundary:
    """Validated change of boundary from the periodic code to the open code.

    The target group is the seam truncation of :func:`build_code`; its
    generators are passed through :func:`symmetrize_pairing`.
    """
    if family not in DEFAULT_CUTS:
        raise ValueError("no change of boundary available for %r" % family)
    source = _build(family, L)
    target = symmetrize_pairing(source, _build(family, L, "open", cuts))
    beta = ChangeOfBoundary(source, target, tuple(range(len(source))))
    return beta.validate()


# -- code description files ------------------------------------------------

def code_to_dict(code: StabilizerCode, explicit: bool = False) -> dict:
    lat = code.lattice
    out = {
        "schema": CODE_SCHEMA,
        "family": code.family,
        "L": lat.L,
        "d": lat.d,
        "n": lat.n,
        "boundary": code.boundary,
    }
    if code.cuts:
        out["cuts"] = list(code.cuts)
    if explicit or code.family not in FAMILIES:
        out["stabilizers"] = [
            {"type": s.kind, "anchor": list(s.anchor), "pauli": format_pauli(s.op)}
            for s in code.stabilizers
        ]
    return out


def code_from_dict(data: dict) -> StabilizerCode:
    family = data.get("family", "custom")
    L = int(data["L"])
    boundary = data.get("boundary", "periodic")
    if "stabilizers" not in data:
        return _build(family, L, boundary, data.get("cuts"))
    lattice = Lattice(int(data["d"]), L, int(data["n"]))
    stabs = []
    for entry in data["stabilizers"]:
        if isinstance(entry, str):
            entry = {"pauli": entry}
        op = parse_pauli(entry["pauli"], lattice)
        anchor = tuple(entry.get("anchor", (0,) * lattice.d))
        stabs.append(Stabilizer(op, entry.get("type", "custom"), anchor))
    code = StabilizerCode(lattice, stabs, family, boundary, tuple(data.get("cuts", ())))
    problems = check_stabilizer_set(code)
    if boundary != "periodic":
        problems = [p for p in problems if not p.startswith("condition 4")]
    if problems:
        raise InvalidCode("; ".join(problems))
    return code


def load_code(path) -> StabilizerCode:
    with open(path) as fh:
        return code_from_dict(json.load(fh))


def save_code(code: StabilizerCode, path, explicit: bool = True) -> None:
    with open(path, "w") as fh:
        json.dump(code_to_dict(code, explicit), fh, indent=2)
