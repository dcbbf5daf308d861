# Copyright 2024. NH Creutz Ladder Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dense non-Hermitian eigensolver with a residual contract, and the closed-form 2x2 solver."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from cl_model import BlochCoefficients, LadderException

log = logging.getLogger(__name__)

TOL_EIG = 1e-10
MAX_DIM = 4096
ORDER_DECIMALS = 10


class EigenSolverError(LadderException):
    """Exception raised when the eigensolver fails or violates the residual contract."""

    def __init__(self, message, partial_state=None):
        super().__init__(message)
        self.partial_state = partial_state


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues and unit right eigenvectors (columns of ``vectors``), aligned by index.

    ``independent`` is False for a vector that only repeats the span of an
    earlier vector of the same repeated eigenvalue (defective matrices).
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    independent: np.ndarray

    def __len__(self):
        return len(self.values)

    def vector(self, index) -> np.ndarray:
        return self.vectors[:, index]


def _validate(matrix, max_dim):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("Expected a square matrix, got shape %s" % (matrix.shape,))
    if matrix.shape[0] == 0:
        raise ValueError("Empty matrix")
    if matrix.shape[0] > max_dim:
        raise ValueError("Matrix dimension %i exceeds the configured maximum %i" % (matrix.shape[0], max_dim))
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Matrix has non-finite entries")
    return matrix


def _independence(values, vectors, scale):
    """Flag vectors that add a new direction within their cluster of repeated eigenvalues."""
    size = len(values)
    flags = np.ones(size, dtype=bool)
    cluster_tol = 1e-7 * max(scale, 1.0)
    visited = np.zeros(size, dtype=bool)
    for i in range(size):
        if visited[i]:
            continue
        members = np.flatnonzero(np.abs(values - values[i]) <= cluster_tol)
        visited[members] = True
        if len(members) < 2:
            continue
        kept = []
        for index in members:
            trial = vectors[:, kept + [index]]
            singular = sla.svdvals(trial)
            if singular[-1] > 1e-6 * singular[0]:
                kept.append(index)
            else:
                flags[index] = False
    return flags


def eigen_general(matrix, tol=TOL_EIG, max_dim=MAX_DIM) -> EigenDecomposition:
    """Eigenvalues with algebraic multiplicity and unit right eigenvectors.

    LAPACK ``zgeev`` balances, reduces to upper Hessenberg form, runs shifted QR
    with deflation and back-substitutes the Schur form. Values are ordered by
    real part, ties by imaginary part. Residuals ``||H v - lambda v||`` must stay
    within ``tol * ||H||_F``.
    """
    matrix = _validate(matrix, max_dim)
    try:
        values, vectors = sla.eig(matrix, check_finite=False)
    except sla.LinAlgError as e:
        raise EigenSolverError("QR iteration did not converge: %s" % e, partial_state=sla.hessenberg(matrix))
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise EigenSolverError("Eigensolver produced non-finite output", partial_state=sla.hessenberg(matrix))
    norms = np.linalg.norm(vectors, axis=0)
    if np.any(norms == 0):
        raise EigenSolverError("Eigensolver returned a null eigenvector", partial_state=sla.hessenberg(matrix))
    vectors = vectors / norms
    order = np.lexsort((np.round(values.imag, ORDER_DECIMALS), np.round(values.real, ORDER_DECIMALS)))
    values = values[order]
    vectors = vectors[:, order]

    frobenius = np.linalg.norm(matrix)
    residuals = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
    limit = tol * frobenius
    worst = float(residuals.max())
    if worst > limit:
        raise EigenSolverError("Residual %.3e exceeds %.3e" % (worst, limit), partial_state=sla.hessenberg(matrix))
    independent = _independence(values, vectors, float(np.max(np.abs(values))))
    log.debug("Diagonalized %ix%i matrix, max residual %.3e", matrix.shape[0], matrix.shape[0], worst)
    return EigenDecomposition(values, vectors, residuals, independent)


def eig2(c: BlochCoefficients):
    """Closed-form eigenvalues ``h0 +- sqrt(P)`` of the 2x2 Bloch matrix, principal root.

    ``E+`` is the branch with the larger real part, ties broken by the larger
    imaginary part. Works elementwise on array coefficients.
    """
    h0 = np.asarray(c.h0, dtype=complex)
    root = np.sqrt(np.asarray(c.p, dtype=complex))
    upper = h0 + root
    lower = h0 - root
    swap = (lower.real > upper.real) | ((lower.real == upper.real) & (lower.imag > upper.imag))
    e_plus = np.where(swap, lower, upper)
    e_minus = np.where(swap, upper, lower)
    if e_plus.ndim == 0:
        return complex(e_plus), complex(e_minus)
    return e_plus, e_minus
