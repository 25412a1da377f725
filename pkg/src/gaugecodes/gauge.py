"""The GF(2) linear gauge structure of a stabilizer code.

For a code with stabilizer list ``S`` on ``N`` qubits:

* ``Phi`` (``2N x |S|``) sends a subset of ``S`` to the product of its
  members, one column per stabilizer;
* ``Psi`` (``|S| x 2N``) sends a Pauli operator to the set of stabilizers it
  anticommutes with (its syndrome);
* ``LambdaGram`` is the symplectic Gram matrix on Pauli bit vectors and
  ``OmegaGram`` the identity form on subsets of ``S``.

They satisfy ``Phi^T LambdaGram = OmegaGram Psi``.  The constraint space is
``ker Phi``, the logical space ``ker Psi / im Phi``, and a change of
boundary splits constraints into trivial and topological ones.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import f2linalg as f2
from .codes import ChangeOfBoundary, StabilizerCode, check_change_of_boundary
from .f2linalg import BitVec, F2Matrix
from .pauli import PauliOperator, swap_halves, symplectic_gram

REPORT_SCHEMA = "gaugecodes/analysis@1"


class SyndromeViolation(ValueError):
    """A subset of ``S`` is not a syndrome; ``constraint`` overlaps it oddly."""

    def __init__(self, constraint: BitVec):
        super().__init__("subset meets a constraint an odd number of times")
        self.constraint = constraint


@dataclass(frozen=True)
class F2GaugeStructure:
    """Explicit matrices of a stabilizer code's gauge structure."""

    Phi: F2Matrix
    Psi: F2Matrix
    LambdaGram: F2Matrix
    OmegaGram: F2Matrix
    code: Optional[StabilizerCode] = None

    @classmethod
    def from_code(cls, code: StabilizerCode) -> "F2GaugeStructure":
        S = code.stabilizer_matrix()
        swapped = F2Matrix.from_rows([swap_halves(r) for r in S.row_list()], cols=S.cols)
        return cls(
            Phi=S.T,
            Psi=swapped,
            LambdaGram=symplectic_gram(code.n_qubits),
            OmegaGram=F2Matrix.identity(S.rows),
            code=code,
        )

    @classmethod
    def from_matrices(cls, Phi: F2Matrix, Psi: Optional[F2Matrix] = None) -> "F2GaugeStructure":
        """Build from a raw ``Phi``; ``Psi`` defaults to ``Phi^T LambdaGram``."""
        if Phi.rows % 2:
            raise ValueError("Phi must have an even number of rows (x and z halves)")
        N = Phi.rows // 2
        Lam = symplectic_gram(N)
        if Psi is None:
            Psi = Phi.T @ Lam
        if Psi.shape != (Phi.cols, Phi.rows):
            raise ValueError("Psi must be |S| x 2N")
        return cls(Phi=Phi, Psi=Psi, LambdaGram=Lam, OmegaGram=F2Matrix.identity(Phi.cols))

    @property
    def n_qubits(self) -> int:
        return self.Phi.rows // 2

    @property
    def n_stabilizers(self) -> int:
        return self.Phi.cols

    def stabilizer_rows(self) -> F2Matrix:
        """``Phi^T``: one row per stabilizer."""
        return self.Phi.T


@dataclass
class ConstraintSpace:
    basis: list[BitVec]
    trivial_basis: Optional[list[BitVec]] = None
    topological_basis: Optional[list[BitVec]] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dim_trivial(self) -> Optional[int]:
        return None if self.trivial_basis is None else len(self.trivial_basis)

    @property
    def dim_topological(self) -> Optional[int]:
        return None if self.topological_basis is None else len(self.topological_basis)


@dataclass
class LogicalSpace:
    representatives: list[PauliOperator]
    k: int


@dataclass
class SyndromeVerdict:
    """Outcome of Brule's Rules for a subset ``J``: a witness or a violated constraint."""

    subset: BitVec
    witness: Optional[PauliOperator] = None
    constraint: Optional[BitVec] = None

    @property
    def realizable(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.realizable


@dataclass
class DistanceResult:
    """Exact distance, or ``None`` when nothing was found up to ``bound``."""

    distance: Optional[int]
    bound: int
    has_logicals: bool = True

    @property
    def exact(self) -> bool:
        return self.distance is not None

    def to_json(self):
        if not self.has_logicals:
            return {"status": "no_logicals"}
        if self.distance is None:
            return {"status": "unknown", "bound": self.bound}
        return {"status": "exact", "distance": self.distance}


@dataclass
class Theorem2Report:
    dim_topological: int
    logicals: list[PauliOperator] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


# -- basic maps -------------------------------------------------------------

def _subset(gs: F2GaugeStructure, A) -> BitVec:
    n = gs.n_stabilizers
    if isinstance(A, BitVec):
        if A.length != n:
            raise ValueError("subset vector has length %d, expected %d" % (A.length, n))
        return A
    idx = list(A)
    for i in idx:
        if not 0 <= i < n:
            raise IndexError("stabilizer index %d out of range (|S|=%d)" % (i, n))
    return BitVec.from_indices(n, idx)


def _lattice(gs: F2GaugeStructure):
    if gs.code is None:
        raise ValueError("this gauge structure has no attached code")
    return gs.code.lattice


def _pauli_bits(gs: F2GaugeStructure, f) -> BitVec:
    if isinstance(f, PauliOperator):
        if gs.code is not None and f.lattice != gs.code.lattice:
            raise ValueError("Pauli operator lives on a different qubit universe")
        v = f.to_bitvec()
    else:
        v = f
    if v.length != 2 * gs.n_qubits:
        raise ValueError("Pauli vector has length %d, expected %d" % (v.length, 2 * gs.n_qubits))
    return v


def phi_bits(gs: F2GaugeStructure, A) -> BitVec:
    return gs.Phi.matvec(_subset(gs, A))


def phi(gs: F2GaugeStructure, A) -> PauliOperator:
    """Product of the stabilizers in ``A`` (phase discarded)."""
    return PauliOperator.from_bitvec(_lattice(gs), phi_bits(gs, A))


def psi(gs: F2GaugeStructure, f) -> BitVec:
    """Syndrome of ``f``: the stabilizers that anticommute with it."""
    return gs.Psi.matvec(_pauli_bits(gs, f))


def duality_check(gs: F2GaugeStructure):
    """Check ``Phi^T LambdaGram == OmegaGram Psi``.

    Returns ``(True, None)`` or ``(False, (A, f))`` where ``A`` is a singleton
    subset and ``f`` a single-qubit Pauli (as bit vectors) violating
    ``lambda(phi(A), f) == omega(A, psi(f))``.
    """
    lhs = gs.Phi.T @ gs.LambdaGram
    rhs = gs.OmegaGram @ gs.Psi
    if lhs == rhs:
        return True, None
    diff = (lhs + rhs).to_dense()
    i, q = (int(v) for v in np.argwhere(diff)[0])
    A = BitVec.from_indices(gs.n_stabilizers, [i])
    f = BitVec.from_indices(2 * gs.n_qubits, [q])
    return False, (A, f)


def symplectic_check(gs: F2GaugeStructure) -> bool:
    """``Psi Phi == 0``: the stabilizers commute pairwise."""
    return not (gs.Psi @ gs.Phi).to_dense().any()


# -- constraints and syndromes ---------------------------------------------

def constraint_space(gs: F2GaugeStructure) -> ConstraintSpace:
    return ConstraintSpace(basis=f2.kernel_basis(gs.Phi))


def is_syndrome(gs: F2GaugeStructure, J) -> SyndromeVerdict:
    """Brule's Rules: realize ``J`` by a Pauli, or return a constraint meeting it oddly."""
    J = _subset(gs, J)
    try:
        x = f2.solve(gs.Psi, J)
    except f2.InconsistentSystem as exc:
        # ker(Psi^T) = ker(Lambda Phi) = ker(Phi): the certificate is a constraint
        return SyndromeVerdict(J, constraint=exc.certificate)
    witness = PauliOperator.from_bitvec(_lattice(gs), x) if gs.code is not None else x
    return SyndromeVerdict(J, witness=witness)


def realize_syndrome(gs: F2GaugeStructure, J) -> PauliOperator:
    """Like :func:`is_syndrome` but raising :class:`SyndromeViolation`."""
    verdict = is_syndrome(gs, J)
    if not verdict:
        raise SyndromeViolation(verdict.constraint)
    return verdict.witness


def orthogonal_to_constraints(gs: F2GaugeStructure, J, constraints: Optional[Sequence[BitVec]] = None) -> bool:
    """The orthogonality side of Brule's Rules, evaluated directly."""
    J = _subset(gs, J)
    if constraints is None:
        constraints = constraint_space(gs).basis
    return all(c.dot(J) == 0 for c in constraints)


# -- logical operators ------------------------------------------------------

def logical_space(gs: F2GaugeStructure) -> LogicalSpace:
    ker_psi = f2.kernel_basis(gs.Psi)
    im_phi = gs.stabilizer_rows().row_list()
    reps = f2.quotient_basis(ker_psi, im_phi)
    if len(reps) % 2:
        raise RuntimeError("odd logical dimension %d: symplectic structure violated" % len(reps))
    if gs.code is not None:
        lat = gs.code.lattice
        reps = [PauliOperator.from_bitvec(lat, r) for r in reps]
    return LogicalSpace(representatives=reps, k=len(reps) // 2)


def in_image_phi(gs: F2GaugeStructure, f) -> bool:
    return f2.in_span(_pauli_bits(gs, f), gs.stabilizer_rows().row_list())


def _check_beta(gs: F2GaugeStructure, beta: ChangeOfBoundary) -> None:
    if gs.code is None:
        raise ValueError("gauge structure has no attached code")
    if beta.source.stabilizer_matrix() != gs.code.stabilizer_matrix():
        raise ValueError("change of boundary does not start from this code")
    check_change_of_boundary(beta)


def trivial_and_topological(
    gs: F2GaugeStructure, beta: ChangeOfBoundary, validate: bool = True
) -> ConstraintSpace:
    """Split ``ker phi`` into trivial constraints and topological representatives.

    ``C`` is trivial iff ``phi'(beta[C])`` lies in ``im phi``.  That test is
    linear in ``C``: reduce ``phi'(beta[C])`` modulo the rref of ``im phi``
    and take the kernel of the resulting map on the constraint basis.
    """
    if validate:
        _check_beta(gs, beta)
    basis = f2.kernel_basis(gs.Phi)
    if not basis:
        return ConstraintSpace([], [], [])
    K = F2Matrix.from_rows(basis, cols=gs.n_stabilizers)
    images = K @ beta.target_matrix_in_source_order()
    R, piv = f2.rref(gs.stabilizer_rows())
    reduced = F2Matrix.from_rows([f2.reduce_against(R, piv, v) for v in images.row_list()], cols=images.cols)
    coeffs = f2.kernel_basis(reduced.T)
    trivial = [K.T.matvec(a) for a in coeffs]
    trivial = f2.row_basis(trivial, gs.n_stabilizers) if trivial else []
    topo = f2.quotient_basis(basis, trivial)
    return ConstraintSpace(basis=basis, trivial_basis=trivial, topological_basis=topo)


def logical_from_constraint(gs: F2GaugeStructure, beta: ChangeOfBoundary, C) -> PauliOperator:
    """``p_C = phi'(beta[C])`` for a constraint ``C`` of the source code."""
    C = _subset(gs, C)
    if not gs.Phi.matvec(C).is_zero():
        raise ValueError("subset is not a constraint (phi(C) is not the identity)")
    bits = beta.target_matrix_in_source_order().T.matvec(C)
    return PauliOperator.from_bitvec(_lattice(gs), bits)


def gamma(gs: F2GaugeStructure, beta: ChangeOfBoundary, Cprime) -> BitVec:
    """Send a target constraint to a source constraint.

    Returns ``beta^{-1}[C'] + F`` where ``F`` uses only stabilizers fixed by
    ``beta`` and has ``phi(F) = phi(beta^{-1}[C'])``.
    """
    target_gs = F2GaugeStructure.from_code(beta.target)
    Cp = _subset(target_gs, Cprime)
    if not target_gs.Phi.matvec(Cp).is_zero():
        raise ValueError("C' is not a constraint of the target code")
    A = beta.apply_inverse(Cp)
    v = gs.Phi.matvec(A)
    if v.is_zero():
        return A
    fixed = beta.fixed_indices()
    try:
        x = f2.solve(gs.Phi.select_columns(fixed), v)
    except f2.InconsistentSystem as exc:
        raise RuntimeError("no beta-fixed counter-term exists; beta is not a valid change of boundary") from exc
    F = BitVec.from_indices(gs.n_stabilizers, [fixed[i] for i in x.indices()])
    return A + F


def verify_theorem2(gs: F2GaugeStructure, beta: ChangeOfBoundary) -> Theorem2Report:
    """Check the logical-operator theorem on a basis of topological constraints."""
    cs = trivial_and_topological(gs, beta)
    logicals = [logical_from_constraint(gs, beta, C) for C in cs.topological_basis]
    report = Theorem2Report(dim_topological=len(logicals), logicals=logicals)
    rows = gs.stabilizer_rows().row_list()
    for n, p in enumerate(logicals):
        if not psi(gs, p).is_zero():
            report.failures.append("p_C #%d has a nonzero syndrome" % n)
        if f2.in_span(p.to_bitvec(), rows):
            report.failures.append("p_C #%d is a product of stabilizers" % n)
    if logicals:
        P = F2Matrix.from_rows([p.to_bitvec() for p in logicals])
        swapped = F2Matrix.from_rows([swap_halves(r) for r in P.row_list()], cols=P.cols)
        gram = (P @ swapped.T).to_dense()
        for i, j in np.argwhere(np.triu(gram)):
            report.failures.append("p_C #%d and #%d anticommute" % (i, j))
        r_s = f2.rank(gs.stabilizer_rows())
        r_all = f2.rank(gs.stabilizer_rows().vstack(P))
        if r_all - r_s != len(logicals):
            report.failures.append(
                "class map not injective: rank %d for %d constraints" % (r_all - r_s, len(logicals))
            )
    return report


# -- distance ---------------------------------------------------------------

def code_distance(gs: F2GaugeStructure, max_weight: int) -> DistanceResult:
    """Smallest weight of a Pauli in ``ker psi`` but not in ``im phi``.

    Exhaustive over weights ``1..max_weight``.  A commuting ``f`` lies in
    ``im phi`` iff it commutes with every logical representative, so each
    single-qubit Pauli is encoded once as (syndrome, logical pairing) bits
    and candidates are XOR-combined.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be at least 1")
    logical = logical_space(gs)
    if logical.k == 0:
        return DistanceResult(None, max_weight, has_logicals=False)
    N = gs.n_qubits
    reps = [r.to_bitvec() if isinstance(r, PauliOperator) else r for r in logical.representatives]
    R = F2Matrix.from_rows(reps, cols=2 * N)
    Rsw = F2Matrix.from_rows([swap_halves(r) for r in reps], cols=2 * N)
    n_s = gs.n_stabilizers
    # column q of Psi / Rsw^T is the signature of the unit vector e_q
    psi_cols = gs.Psi.T.to_dense()
    log_cols = Rsw.to_dense().T
    sig = np.concatenate([psi_cols, log_cols], axis=1)
    weights = 1 << np.arange(sig.shape[1], dtype=object)
    codes_ = [int((sig[q].astype(object) * weights).sum()) for q in range(2 * N)]
    syn_mask = (1 << n_s) - 1
    # X, Z, Y on qubit q
    local = [(codes_[q], codes_[N + q], codes_[q] ^ codes_[N + q]) for q in range(N)]
    for w in range(1, min(max_weight, N) + 1):
        for qubits in itertools.combinations(range(N), w):
            options = [local[q] for q in qubits]
            for choice in itertools.product(*options):
                acc = 0
                for c in choice:
                    acc ^= c
                if acc & syn_mask == 0 and acc >> n_s:
                    return DistanceResult(w, max_weight)
    return DistanceResult(None, max_weight)


# -- report -----------------------------------------------------------------

@dataclass
class RoundTripReport:
    """Seeded agreement test between the two sides of Brule's Rules."""

    trials: int
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def brule_roundtrip(gs: F2GaugeStructure, trials: int = 100, seed: int = 0) -> RoundTripReport:
    """Random Paulis have syndromes orthogonal to every constraint; random
    subsets get an ``is_syndrome`` verdict that agrees with orthogonality and
    whose witness (or violated constraint) checks out."""
    rng = np.random.default_rng(seed)
    constraints = constraint_space(gs).basis
    report = RoundTripReport(trials)
    for t in range(trials):
        f = BitVec.from_bits(rng.integers(0, 2, 2 * gs.n_qubits))
        if not orthogonal_to_constraints(gs, gs.Psi.matvec(f), constraints):
            report.mismatches.append("pauli #%d: syndrome meets a constraint oddly" % t)
    for t in range(trials):
        J = BitVec.from_bits(rng.integers(0, 2, gs.n_stabilizers))
        verdict = is_syndrome(gs, J)
        orth = orthogonal_to_constraints(gs, J, constraints)
        if verdict.realizable != orth:
            report.mismatches.append("subset #%d: verdict %s but orthogonality %s" % (t, verdict.realizable, orth))
        elif verdict.realizable:
            if psi(gs, verdict.witness) != J:
                report.mismatches.append("subset #%d: witness has the wrong syndrome" % t)
        elif not (phi_bits(gs, verdict.constraint).is_zero() and verdict.constraint.dot(J) == 1):
            report.mismatches.append("subset #%d: certificate is not a violated constraint" % t)
    return report


def analyze(
    code: StabilizerCode,
    beta: Optional[ChangeOfBoundary] = None,
    distance_max_weight: Optional[int] = None,
    seed: int = 0,
    trials: int = 0,
) -> dict:
    """JSON-ready analysis report of one code.

    ``checks`` maps each check name to ``{"ok": bool, ...}``; failing checks
    carry a ``witness``.  ``trials > 0`` adds the seeded Brule round trip.
    """
    clock = time.perf_counter
    timings: dict[str, float] = {}
    t0 = clock()
    gs = F2GaugeStructure.from_code(code)
    cs = trivial_and_topological(gs, beta) if beta is not None else constraint_space(gs)
    timings["constraints"] = clock() - t0
    t0 = clock()
    logical = logical_space(gs)
    timings["logicals"] = clock() - t0
    report = {
        "schema": REPORT_SCHEMA,
        "family": code.family,
        "L": code.L,
        "boundary": code.boundary,
        "N": code.n_qubits,
        "n_stabilizers": len(code),
        "dim_ker_phi": cs.dim,
        "dim_trivial": cs.dim_trivial,
        "dim_topological": cs.dim_topological,
        "k": logical.k,
    }
    checks: dict[str, dict] = {}
    ok, wit = duality_check(gs)
    checks["duality"] = {"ok": ok} if ok else {"ok": False, "witness": {"subset": wit[0].indices(), "pauli_bits": wit[1].indices()}}
    ok = symplectic_check(gs)
    if ok:
        checks["symplectic"] = {"ok": True}
    else:
        i, j = (int(v) for v in np.argwhere((gs.Psi @ gs.Phi).to_dense())[0])
        checks["symplectic"] = {"ok": False, "witness": {"anticommuting_pair": [i, j]}}
    if trials > 0:
        t0 = clock()
        rt = brule_roundtrip(gs, trials, seed)
        timings["brule_roundtrip"] = clock() - t0
        checks["brule_roundtrip"] = {"ok": rt.ok, "trials": trials, "seed": seed}
        if not rt.ok:
            checks["brule_roundtrip"]["witness"] = rt.mismatches
    if beta is not None:
        t0 = clock()
        th = verify_theorem2(gs, beta)
        timings["theorem2"] = clock() - t0
        checks["theorem2"] = {"ok": th.ok} if th.ok else {"ok": False, "witness": th.failures}
        if cs.dim_topological != logical.k:
            checks["topological_equals_k"] = {
                "ok": False,
                "witness": {"dim_topological": cs.dim_topological, "k": logical.k},
            }
        else:
            checks["topological_equals_k"] = {"ok": True}
    if distance_max_weight is not None:
        t0 = clock()
        report["distance"] = code_distance(gs, distance_max_weight).to_json()
        timings["distance"] = clock() - t0
    report["checks"] = checks
    report["ok"] = all(c["ok"] for c in checks.values())
    report["timings"] = {k: round(v, 4) for k, v in timings.items()}
    return report


__all__ = [
    "REPORT_SCHEMA",
    "F2GaugeStructure",
    "ConstraintSpace",
    "LogicalSpace",
    "SyndromeVerdict",
    "SyndromeViolation",
    "DistanceResult",
    "Theorem2Report",
    "phi",
    "phi_bits",
    "psi",
    "duality_check",
    "symplectic_check",
    "constraint_space",
    "is_syndrome",
    "realize_syndrome",
    "orthogonal_to_constraints",
    "logical_space",
    "in_image_phi",
    "trivial_and_topological",
    "logical_from_constraint",
    "gamma",
    "verify_theorem2",
    "code_distance",
    "RoundTripReport",
    "brule_roundtrip",
    "analyze",
]
