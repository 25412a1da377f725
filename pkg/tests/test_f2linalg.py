import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from gaugecodes import f2linalg as f2
from gaugecodes.f2linalg import BitVec, F2Matrix, InconsistentSystem, SubspaceError


def M(*rows: str) -> F2Matrix:
    return F2Matrix.from_strings(list(rows))


def V(s: str) -> BitVec:
    return BitVec.from_string(s)


def dense_matrices(max_rows=8, max_cols=8):
    return st.tuples(st.integers(0, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: arrays(np.uint8, rc, elements=st.integers(0, 1))
    )


# -- BitVec ----------------------------------------------------------------


@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_bitvec_roundtrip_and_self_inverse(bits):
    v = BitVec.from_bits(bits)
    assert v.to_bits().tolist() == bits
    assert (v + v).is_zero()
    assert v.weight() == sum(bits)


def test_bitvec_trailing_bits_are_zero():
    v = BitVec.from_bits([1] * 70)
    assert v.words[-1] >> np.uint64(70 - 64) == 0
    w = BitVec.from_indices(130, [0, 64, 129])
    assert w.indices() == [0, 64, 129]


def test_bitvec_length_mismatch_rejected():
    with pytest.raises(ValueError):
        BitVec.zeros(3) + BitVec.zeros(4)


# -- rank --------------------------------------------------------------------


def test_rank_examples():
    assert f2.rank(F2Matrix.zeros(3, 3)) == 0
    assert f2.rank(F2Matrix.identity(4)) == 4
    assert f2.rank(M("110", "011", "101")) == 2


@given(dense_matrices())
def test_rank_matches_enumeration(A):
    assert f2.rank(F2Matrix.from_dense(A)) == (oracles.rank(A) if A.shape[0] else 0)


@given(dense_matrices())
def test_rank_nullity(A):
    Mx = F2Matrix.from_dense(A)
    assert f2.rank(Mx) + len(f2.kernel_basis(Mx)) == Mx.cols
    assert f2.rank(Mx) == f2.rank(Mx.T)


@given(dense_matrices())
def test_rref_is_idempotent_and_reduced(A):
    R, piv = f2.rref(F2Matrix.from_dense(A))
    R2, piv2 = f2.rref(R)
    assert R2 == R and piv2 == piv
    assert oracles.is_rref(R.to_dense())
    assert piv == sorted(piv)


def test_rank_of_wide_packed_matrix():
    rng = np.random.default_rng(3)
    A = rng.integers(0, 2, (100, 300), dtype=np.uint8)
    B = np.vstack([A, (A[:10] + A[10:20]) % 2])
    assert f2.rank(F2Matrix.from_dense(B)) == f2.rank(F2Matrix.from_dense(A))


# -- kernel --------------------------------------------------------------------


def test_kernel_examples():
    assert f2.kernel_basis(F2Matrix.identity(3)) == []
    assert f2.kernel_basis(M("11")) == [V("11")]
    # the four cyclic neighbour rows have rank 3 (they sum to zero); the
    # brute-force kernel is {0000, 1111}
    A = M("1100", "0110", "0011", "1001")
    basis = f2.kernel_basis(A)
    assert basis == [V("1111")]
    assert oracles.kernel(A.to_dense()) == {(0, 0, 0, 0), (1, 1, 1, 1)}


@given(dense_matrices(6, 7))
def test_kernel_matches_enumeration(A):
    Mx = F2Matrix.from_dense(A)
    basis = f2.kernel_basis(Mx)
    got = oracles.span(np.array([b.to_bits() for b in basis])) if basis else {tuple([0] * A.shape[1])}
    assert got == oracles.kernel(A)
    assert f2.kernel_matrix(Mx).rows == len(basis)


# -- solve -----------------------------------------------------------------------


def test_solve_examples():
    b = V("1011")
    assert f2.solve(F2Matrix.identity(4), b) == b
    x = f2.solve(M("11"), V("1"))
    assert x in (V("10"), V("01"))
    with pytest.raises(InconsistentSystem) as info:
        f2.solve(M("11", "11"), V("10"))
    assert info.value.certificate == V("11")


@given(dense_matrices(7, 7), st.data())
def test_solve_round_trip(A, data):
    Mx = F2Matrix.from_dense(A)
    x = BitVec.from_bits(data.draw(arrays(np.uint8, A.shape[1], elements=st.integers(0, 1))))
    b = Mx.matvec(x)
    assert Mx.matvec(f2.solve(Mx, b)) == b


@given(dense_matrices(6, 5), st.data())
def test_solve_certificate_or_solution(A, data):
    Mx = F2Matrix.from_dense(A)
    b = BitVec.from_bits(data.draw(arrays(np.uint8, A.shape[0], elements=st.integers(0, 1))))
    solvable = bool(oracles.solutions(A, b.to_bits())) if A.shape[0] else True
    try:
        x = f2.solve(Mx, b)
    except InconsistentSystem as exc:
        assert not solvable
        c = exc.certificate
        assert Mx.T.matvec(c).is_zero() and c.dot(b) == 1
    else:
        assert solvable and Mx.matvec(x) == b


# -- complements, quotients, inverses ------------------------------------------------


def test_orthogonal_complement_examples():
    assert len(f2.orthogonal_complement([], F2Matrix.identity(3))) == 3
    comp = f2.orthogonal_complement([V("111")], F2Matrix.identity(3))
    assert oracles.span(np.array([c.to_bits() for c in comp])) == {
        v for v in oracles.kernel(np.array([[1, 1, 1]]))
    }
    from gaugecodes.pauli import symplectic_gram

    G = symplectic_gram(3)
    comp = f2.orthogonal_complement([BitVec.from_indices(6, [0])], G)
    singles = [BitVec.from_indices(6, [i]) for i in range(6)]
    assert not f2.in_span(singles[3], comp)
    assert all(f2.in_span(s, comp) for i, s in enumerate(singles) if i != 3)


@given(dense_matrices(5, 6))
def test_double_complement_has_span_dimension(A):
    n = A.shape[1]
    B = [BitVec.from_bits(r) for r in A]
    G = F2Matrix.identity(n)
    twice = f2.orthogonal_complement(f2.orthogonal_complement(B, G), G)
    assert len(twice) == f2.span_rank(B, n)


def test_quotient_examples():
    U = [V("10"), V("01")]
    assert f2.quotient_basis(U, U) == []
    reps = f2.quotient_basis(U, [V("11")])
    assert len(reps) == 1 and not f2.in_span(reps[0], [V("11")])
    with pytest.raises(SubspaceError):
        f2.quotient_basis([V("10")], [V("01")])


def test_quotient_toric_logicals():
    from gaugecodes import build_code
    from gaugecodes.gauge import F2GaugeStructure

    gs = F2GaugeStructure.from_code(build_code("toric2", 3))
    reps = f2.quotient_basis(f2.kernel_basis(gs.Psi), gs.Phi.T.row_list())
    assert len(reps) == 4


@given(dense_matrices(5, 6), dense_matrices(5, 6))
def test_intersection_dimension(A, B):
    n = min(A.shape[1], B.shape[1])
    U = [BitVec.from_bits(r[:n]) for r in A]
    W = [BitVec.from_bits(r[:n]) for r in B]
    expected = len(oracles.span(A[:, :n]) & oracles.span(B[:, :n])).bit_length() - 1
    assert f2.intersection_dim(U, W, n) == expected


def test_inverse_and_singular():
    rng = np.random.default_rng(11)
    found = 0
    while found < 20:
        A = F2Matrix.from_dense(rng.integers(0, 2, (6, 6)))
        if f2.rank(A) < 6:
            with pytest.raises(ValueError):
                f2.inverse(A)
            continue
        assert A @ f2.inverse(A) == F2Matrix.identity(6)
        found += 1


def test_extend_to_basis():
    out = f2.extend_to_basis([V("110")], 3)
    assert out[0] == V("110") and f2.span_rank(out, 3) == 3


def test_matrix_products_and_stacks():
    A = M("101", "011")
    B = M("10", "01", "11")
    dense = (A.to_dense().astype(int) @ B.to_dense().astype(int)) % 2
    assert (A @ B).to_dense().tolist() == dense.tolist()
    assert A.vstack(A).rows == 4 and A.hstack(A).cols == 6
    assert A.T.T == A
    assert A.select_columns([2, 0]).to_dense().tolist() == [[1, 1], [1, 0]]
