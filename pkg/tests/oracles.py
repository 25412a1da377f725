"""Naive reference implementations used as test oracles.

Everything here works on small dense 0/1 numpy arrays by brute-force
enumeration, with no shared code with the package under test.
"""

from __future__ import annotations

import itertools

import numpy as np


def all_vectors(n: int) -> np.ndarray:
    """Every vector of GF(2)^n as rows, in binary counting order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)


def span(rows: np.ndarray) -> set[tuple[int, ...]]:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    if rows.shape[0] == 0:
        return {tuple([0] * rows.shape[1])}
    coeffs = all_vectors(rows.shape[0])
    return {tuple(v) for v in (coeffs.astype(int) @ rows.astype(int)) % 2}


def rank(M: np.ndarray) -> int:
    size = len(span(M))
    return size.bit_length() - 1


def kernel(M: np.ndarray) -> set[tuple[int, ...]]:
    M = np.atleast_2d(np.asarray(M, dtype=np.uint8))
    vs = all_vectors(M.shape[1])
    good = ((vs.astype(int) @ M.T.astype(int)) % 2 == 0).all(axis=1)
    return {tuple(v) for v in vs[good]}


def solutions(M: np.ndarray, b) -> set[tuple[int, ...]]:
    M = np.atleast_2d(np.asarray(M, dtype=np.uint8))
    b = np.asarray(b, dtype=int)
    vs = all_vectors(M.shape[1])
    good = ((vs.astype(int) @ M.T.astype(int)) % 2 == b).all(axis=1)
    return {tuple(v) for v in vs[good]}


def is_rref(M: np.ndarray) -> bool:
    last = -1
    zero_seen = False
    for row in M:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            zero_seen = True
            continue
        if zero_seen or nz[0] <= last:
            return False
        if M[:, nz[0]].sum() != 1:
            return False
        last = nz[0]
    return True


def symplectic(a: np.ndarray, b: np.ndarray) -> int:
    """Commutation of two Paulis given as dense [x|z] rows."""
    n = a.size // 2
    return int((a[:n] @ b[n:] + a[n:] @ b[:n]) % 2)


def pauli_matrix(bits: np.ndarray) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the Pauli with [x|z] bits (phase dropped)."""
    X = np.array([[0, 1], [1, 0]])
    Z = np.array([[1, 0], [0, -1]])
    n = bits.size // 2
    out = np.array([[1]])
    for i in range(n):
        m = np.eye(2, dtype=int)
        if bits[i]:
            m = m @ X
        if bits[n + i]:
            m = m @ Z
        out = np.kron(out, m)
    return out
