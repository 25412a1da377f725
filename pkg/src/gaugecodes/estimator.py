"""scikit-learn style syndrome extraction.

``SyndromeTransformer`` turns a batch of Pauli operators, given as rows of
``[x | z]`` bits, into their syndromes.  It plugs into ``Pipeline`` and
``clone`` like any transformer; the code is a constructor parameter and
``fit`` only precomputes the parity-check and constraint matrices.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .codes import StabilizerCode, build_code
from .gauge import F2GaugeStructure, constraint_space


class SyndromeTransformer(TransformerMixin, BaseEstimator):
    """Map Pauli bit vectors to syndromes of a stabilizer code.

    Parameters
    ----------
    family, L, boundary
        Code built with :func:`gaugecodes.codes.build_code` when ``code`` is
        not given.
    code
        An explicit :class:`StabilizerCode`; takes precedence over ``family``.

    Attributes
    ----------
    code_ : StabilizerCode
    gauge_structure_ : F2GaugeStructure
    parity_check_ : ndarray of shape (n_stabilizers, 2 * n_qubits)
        ``Psi`` as a dense 0/1 array.
    constraints_ : ndarray of shape (n_constraints, n_stabilizers)
        Basis of ``ker Phi``.
    n_features_in_ : int
    """

    def __init__(self, family: str = "toric2", L: int = 3, boundary: str = "periodic", code: StabilizerCode | None = None):
        self.family = family
        self.L = L
        self.boundary = boundary
        self.code = code

    def fit(self, X=None, y=None):
        code = self.code if self.code is not None else build_code(self.family, self.L, self.boundary)
        gs = F2GaugeStructure.from_code(code)
        self.code_ = code
        self.gauge_structure_ = gs
        self.parity_check_ = gs.Psi.to_dense().astype(np.uint8)
        basis = constraint_space(gs).basis
        self.constraints_ = (
            np.array([c.to_bits() for c in basis], dtype=np.uint8)
            if basis
            else np.zeros((0, gs.n_stabilizers), dtype=np.uint8)
        )
        self.n_features_in_ = 2 * gs.n_qubits
        return self

    def _bits(self, X, width: int) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X))
        if X.shape[1] != width:
            raise ValueError("expected %d columns, got %d" % (width, X.shape[1]))
        if not np.isin(X, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        return X.astype(np.int64)

    def transform(self, X) -> np.ndarray:
        """Syndromes, shape ``(n_samples, n_stabilizers)``."""
        check_is_fitted(self, "parity_check_")
        X = self._bits(X, self.n_features_in_)
        return ((X @ self.parity_check_.T.astype(np.int64)) % 2).astype(np.uint8)

    def is_realizable(self, J) -> np.ndarray:
        """Brule's Rules per row: the subset meets every constraint evenly."""
        check_is_fitted(self, "constraints_")
        J = self._bits(J, self.parity_check_.shape[0])
        if self.constraints_.shape[0] == 0:
            return np.ones(J.shape[0], dtype=bool)
        return ~(((J @ self.constraints_.T.astype(np.int64)) % 2).any(axis=1))


__all__ = ["SyndromeTransformer"]
