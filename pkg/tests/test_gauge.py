import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugecodes import f2linalg as f2
from gaugecodes.codes import FAMILIES, StabilizerCode, build_change_of_boundary, build_code
from gaugecodes.f2linalg import BitVec, F2Matrix
from gaugecodes.gauge import (
    F2GaugeStructure,
    SyndromeViolation,
    analyze,
    brule_roundtrip,
    code_distance,
    constraint_space,
    duality_check,
    gamma,
    in_image_phi,
    is_syndrome,
    logical_from_constraint,
    logical_space,
    orthogonal_to_constraints,
    phi,
    phi_bits,
    psi,
    realize_syndrome,
    symplectic_check,
    trivial_and_topological,
    verify_theorem2,
)
from gaugecodes.pauli import Lattice, PauliOperator


def gauge(family, L, boundary="periodic"):
    return F2GaugeStructure.from_code(build_code(family, L, boundary))


def toric_vertex(L, site):
    return site[0] * L + site[1]


# -- phi / psi -------------------------------------------------------------------


def test_phi_examples():
    gs = gauge("toric2", 3)
    code = gs.code
    assert phi(gs, []).is_identity()
    assert phi(gs, [4]) == code[4].op
    assert phi(gs, code.indices_of("vertex")).is_identity()
    with pytest.raises(IndexError):
        phi(gs, [len(code)])


def test_psi_examples():
    L = 3
    gs = gauge("toric2", L)
    lat = gs.code.lattice
    assert psi(gs, PauliOperator.identity(lat)).is_zero()
    z = PauliOperator.from_qubits(lat, z=[lat.qubit((0, 0), 0)])
    assert psi(gs, z).indices() == sorted([toric_vertex(L, (0, 0)), toric_vertex(L, (1, 0))])
    for s in gs.code:
        assert psi(gs, s.op).is_zero()
    with pytest.raises(ValueError):
        psi(gs, PauliOperator.identity(Lattice(2, 4, 2)))


@pytest.mark.parametrize("family", FAMILIES)
def test_structure_invariants(family):
    gs = gauge(family, 2)
    assert gs.Phi.T @ gs.LambdaGram == gs.OmegaGram @ gs.Psi
    assert duality_check(gs) == (True, None)
    assert symplectic_check(gs)
    assert not (gs.Phi.T @ gs.LambdaGram @ gs.Phi).to_dense().any()


def test_duality_check_reports_witness_for_mutated_phi():
    gs = gauge("toric2", 2)
    D = gs.Phi.to_dense()
    D[3, 1] ^= 1
    bad = F2GaugeStructure(F2Matrix.from_dense(D), gs.Psi, gs.LambdaGram, gs.OmegaGram, gs.code)
    ok, (A, f) = duality_check(bad)
    assert not ok
    lam = bad.Phi.matvec(A).dot(gs.LambdaGram.matvec(f))
    om = A.dot(bad.Psi.matvec(f))
    assert lam != om


def random_css_code(seed):
    """Random commuting CSS code: X checks from H, Z checks from ker H."""
    rng = np.random.default_rng(seed)
    N = 6
    H = F2Matrix.from_dense(rng.integers(0, 2, (2, N)))
    hx = [r for r in H.row_list() if not r.is_zero()]
    hz = [r for r in f2.kernel_basis(F2Matrix.from_rows(hx, cols=N))] if hx else []
    lat = Lattice(1, N, 1)
    from gaugecodes.codes import Stabilizer

    stabs = [Stabilizer(PauliOperator(lat, x=r), "x", (0,)) for r in hx]
    stabs += [Stabilizer(PauliOperator(lat, z=r), "z", (0,)) for r in hz]
    return StabilizerCode(lat, stabs, family="custom")


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_duality_on_random_commuting_codes(seed):
    code = random_css_code(seed)
    if not len(code):
        return
    gs = F2GaugeStructure.from_code(code)
    assert duality_check(gs)[0] and symplectic_check(gs)


def test_anticommuting_pair_breaks_symplectic_property():
    lat = Lattice(1, 2, 1)
    Phi = F2Matrix.from_rows(
        [PauliOperator.from_qubits(lat, [0]).to_bitvec(), PauliOperator.from_qubits(lat, z=[0, 1]).to_bitvec()]
    ).T
    gs = F2GaugeStructure.from_matrices(Phi)
    assert not symplectic_check(gs)


# -- constraints and Brule's Rules --------------------------------------------------


@pytest.mark.parametrize("L", [2, 3, 4])
def test_toric_constraints(L):
    gs = gauge("toric2", L)
    basis = constraint_space(gs).basis
    assert len(basis) == 2
    n = L * L
    span = {tuple(v.to_bits()) for v in basis}
    allv = BitVec.from_indices(2 * n, range(n))
    allp = BitVec.from_indices(2 * n, range(n, 2 * n))
    assert f2.in_span(allv, basis) and f2.in_span(allp, basis)
    assert span  # non-empty


def test_constraint_dimension_is_nullity():
    for family in FAMILIES:
        gs = gauge(family, 2)
        cs = constraint_space(gs)
        assert cs.dim == gs.n_stabilizers - f2.rank(gs.Phi)
        assert all(phi_bits(gs, c).is_zero() for c in cs.basis)


def test_is_syndrome_examples():
    L = 3
    gs = gauge("toric2", L)
    empty = is_syndrome(gs, [])
    assert empty and empty.witness.is_identity()
    single = is_syndrome(gs, [0])
    assert not single
    C = single.constraint
    assert phi_bits(gs, C).is_zero() and C.dot(BitVec.from_indices(gs.n_stabilizers, [0])) == 1
    assert C == BitVec.from_indices(gs.n_stabilizers, range(L * L))
    pair = is_syndrome(gs, [0, 1])
    assert pair and psi(gs, pair.witness).indices() == [0, 1]
    assert pair.witness.x.is_zero()  # a Z string
    with pytest.raises(SyndromeViolation):
        realize_syndrome(gs, [0])


@pytest.mark.parametrize("family, L", [("toric2", 3), ("toric3", 2), ("xcube", 2), ("haah", 2), ("haah", 3)])
def test_brule_both_directions(family, L):
    gs = gauge(family, L)
    rng = np.random.default_rng(7)
    constraints = constraint_space(gs).basis
    for _ in range(50):
        f = BitVec.from_bits(rng.integers(0, 2, 2 * gs.n_qubits))
        J = psi(gs, f)
        assert all(c.dot(J) == 0 for c in constraints)
    for _ in range(50):
        J = BitVec.from_bits(rng.integers(0, 2, gs.n_stabilizers))
        verdict = is_syndrome(gs, J)
        assert bool(verdict) == orthogonal_to_constraints(gs, J, constraints)
        if verdict:
            assert psi(gs, verdict.witness) == J
        else:
            assert phi_bits(gs, verdict.constraint).is_zero()
            assert verdict.constraint.dot(J) == 1
    assert brule_roundtrip(gs, trials=30, seed=1).ok


@pytest.mark.parametrize("family", FAMILIES)
def test_generalized_brule_matrix_facts(family):
    gs = gauge(family, 2)
    dim_ker_phi = constraint_space(gs).dim
    assert f2.rank(gs.Psi) == gs.n_stabilizers - dim_ker_phi
    ker_psi = f2.kernel_basis(gs.Psi)
    comp = f2.orthogonal_complement(gs.Phi.T.row_list(), gs.LambdaGram)
    n = 2 * gs.n_qubits
    assert f2.span_rank(ker_psi, n) == f2.span_rank(comp, n) == f2.span_rank(ker_psi + comp, n)


# -- logical space, topological constraints ------------------------------------------------


@pytest.mark.parametrize(
    "family, L, k",
    [("toric2", 2, 2), ("toric2", 3, 2), ("toric3", 3, 3), ("xcube", 2, 9), ("xcube", 3, 15), ("haah", 2, 6), ("haah", 3, 2)],
)
def test_logical_dimension(family, L, k):
    gs = gauge(family, L)
    logical = logical_space(gs)
    assert logical.k == k
    for r in logical.representatives:
        assert psi(gs, r).is_zero() and not in_image_phi(gs, r)
    n_ker_psi = len(f2.kernel_basis(gs.Psi))
    assert 2 * logical.k == n_ker_psi - f2.rank(gs.Phi)


def test_open_toric_has_no_logicals_or_distance():
    gs = gauge("toric2", 3, "open")
    assert logical_space(gs).k == 0
    res = code_distance(gs, 3)
    assert not res.has_logicals and res.to_json() == {"status": "no_logicals"}


@pytest.mark.parametrize("L, d", [(2, 2), (3, 3)])
def test_toric_distance(L, d):
    res = code_distance(gauge("toric2", L), 4)
    assert res.exact and res.distance == d


def test_distance_bound_reports_unknown():
    res = code_distance(gauge("toric2", 4), 3)
    assert not res.exact and res.to_json() == {"status": "unknown", "bound": 3}
    with pytest.raises(ValueError):
        code_distance(gauge("toric2", 2), 0)


@pytest.mark.parametrize(
    "family, L, trivial, topo",
    [("toric2", 3, 0, 2), ("toric2", 4, 0, 2), ("toric3", 2, None, 3), ("toric3", 3, None, 3), ("xcube", 3, None, 15)],
)
def test_topological_dimension(family, L, trivial, topo):
    gs = gauge(family, L)
    cs = trivial_and_topological(gs, build_change_of_boundary(family, L))
    assert cs.dim_topological == topo
    if trivial is not None:
        assert cs.dim_trivial == trivial
    assert cs.dim_trivial + cs.dim_topological == cs.dim
    assert cs.dim_topological == logical_space(gs).k


def test_toric_logical_from_vertex_constraint_wraps():
    L = 3
    gs = gauge("toric2", L)
    beta = build_change_of_boundary("toric2", L)
    p = logical_from_constraint(gs, beta, range(L * L))
    assert p.z.is_zero() and p.weight() == L
    assert psi(gs, p).is_zero() and not in_image_phi(gs, p)
    trivial = logical_from_constraint(gs, beta, [])
    assert trivial.is_identity() and in_image_phi(gs, trivial)
    with pytest.raises(ValueError):
        logical_from_constraint(gs, beta, [0])


def test_xcube_plane_constraint_logical_commutes_with_the_rest():
    L = 3
    gs = gauge("xcube", L)
    beta = build_change_of_boundary("xcube", L)
    n = L ** 3
    # the cross_0 operators in the plane x0 = 0 multiply to the identity
    plane = [n + v for v in range(n) if gs.code[n + v].anchor[0] == 0]
    assert phi_bits(gs, plane).is_zero()
    p = logical_from_constraint(gs, beta, plane)
    assert psi(gs, p).is_zero() and not in_image_phi(gs, p)
    others = [logical_from_constraint(gs, beta, C) for C in trivial_and_topological(gs, beta).topological_basis]
    for q in others:
        assert p.x.dot(q.z) ^ q.x.dot(p.z) == 0


@pytest.mark.parametrize("family, L", [("toric2", 3), ("toric3", 2), ("xcube", 2), ("xcube", 3)])
def test_theorem2(family, L):
    gs = gauge(family, L)
    report = verify_theorem2(gs, build_change_of_boundary(family, L))
    assert report.ok, report.failures
    assert report.dim_topological == logical_space(gs).k


def test_gamma_examples():
    L = 3
    beta = build_change_of_boundary("toric3", L)
    src, tgt = beta.source, beta.target
    gs, tg = F2GaugeStructure.from_code(src), F2GaugeStructure.from_code(tgt)

    def index(code, kind, a):
        return next(i for i in code.indices_of(kind) if code[i].anchor == a)

    def cube(code, a):
        out = []
        for k, kind in enumerate(("plaquette_12", "plaquette_02", "plaquette_01")):
            b = list(a)
            b[k] = (b[k] + 1) % L
            out += [index(code, kind, tuple(a)), index(code, kind, tuple(b))]
        return BitVec.from_indices(len(code), out)

    # an interior cube is untouched by the cut
    C = cube(tgt, (0, 0, 0))
    assert phi_bits(tg, C).is_zero()
    assert gamma(gs, beta, C) == beta.apply_inverse(C)

    # the sum of every open-boundary cube constraint lands in ker phi and is trivial
    total = BitVec.zeros(len(tgt))
    for a in itertools.product(range(L), repeat=3):
        c = cube(tgt, a)
        if phi_bits(tg, c).is_zero():
            total = total + c
    image = gamma(gs, beta, total)
    assert phi_bits(gs, image).is_zero()
    cs = trivial_and_topological(gs, beta)
    assert f2.in_span(image, cs.trivial_basis)
    with pytest.raises(ValueError):
        gamma(gs, beta, [index(tgt, "vertex", (1, 1, 1))])


# -- Haah: exhaustive kernel check at L = 2 -------------------------------------------------------


def test_haah_L2_exhaustive_kernel():
    gs = gauge("haah", 2)
    assert gs.n_stabilizers == gs.n_qubits == 16
    P = gs.Phi.to_dense().astype(np.int64)
    subsets = (np.arange(1 << 16)[:, None] >> np.arange(16)) & 1
    zero = ~((subsets @ P.T) % 2).any(axis=1)
    n_constraints = int(zero.sum())
    k = logical_space(gs).k
    assert n_constraints == 2 ** constraint_space(gs).dim == 2 ** k == 64


# -- analysis report -----------------------------------------------------------------


def test_analyze_report_toric3():
    code = build_code("toric3", 2)
    report = analyze(code, build_change_of_boundary("toric3", 2), distance_max_weight=3, trials=5)
    assert report["ok"]
    assert (report["N"], report["n_stabilizers"], report["k"]) == (24, 32, 3)
    assert report["dim_trivial"] + report["dim_topological"] == report["dim_ker_phi"]
    assert report["distance"] == {"status": "exact", "distance": 2}
    assert set(report["checks"]) == {"duality", "symplectic", "brule_roundtrip", "theorem2", "topological_equals_k"}


def test_analyze_without_beta():
    report = analyze(build_code("haah", 2))
    assert report["ok"] and report["dim_topological"] is None and report["k"] == report["dim_ker_phi"] == 6
