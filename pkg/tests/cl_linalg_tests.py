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

import unittest
from unittest import mock

import numpy as np
from scipy.optimize import linear_sum_assignment

import cl_linalg
from cl_linalg import EigenSolverError, eig2, eigen_general
from cl_model import BlochCoefficients, h2x2


def characteristic_coefficients(matrix):
    """Monic characteristic polynomial by Faddeev-LeVerrier, highest power first."""
    size = matrix.shape[0]
    identity = np.eye(size, dtype=complex)
    coefficients = [1.0 + 0j]
    current = identity
    for k in range(1, size + 1):
        product = matrix @ current
        c = -np.trace(product) / k
        coefficients.append(c)
        current = product + c * identity
    return np.array(coefficients)


def polynomial_roots(coefficients, iterations=2000):
    """Durand-Kerner iteration followed by Newton polishing."""
    degree = len(coefficients) - 1
    roots = (0.4 + 0.9j) ** np.arange(degree)
    for _ in range(iterations):
        previous = roots.copy()
        for i in range(degree):
            others = np.prod([roots[i] - roots[j] for j in range(degree) if j != i])
            roots[i] = roots[i] - np.polyval(coefficients, roots[i]) / others
        if np.max(np.abs(roots - previous)) < 1e-14 * max(1.0, float(np.max(np.abs(roots)))):
            break
    derivative = np.polyder(coefficients)
    for _ in range(3):
        slope = np.polyval(derivative, roots)
        safe = np.abs(slope) > 0
        roots[safe] -= np.polyval(coefficients, roots[safe]) / slope[safe]
    return roots


def cofactor_determinant(matrix):
    size = matrix.shape[0]
    if size == 1:
        return matrix[0, 0]
    total = 0j
    for j in range(size):
        minor = np.delete(matrix[1:], j, axis=1)
        total += (-1) ** j * matrix[0, j] * cofactor_determinant(minor)
    return total


def max_mismatch(first, second):
    cost = np.abs(np.asarray(first)[:, None] - np.asarray(second)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def random_matrix(rng, size):
    return rng.uniform(-1, 1, (size, size)) + 1j * rng.uniform(-1, 1, (size, size))


class EigenGeneralTests(unittest.TestCase):
    def test_diagonal(self):
        result = eigen_general(np.diag([1, 2j, -3]))
        self.assertTrue(np.allclose(result.values, [-3, 2j, 1]))
        self.assertTrue(np.allclose(result.residuals, 0))
        self.assertTrue(np.all(result.independent))

    def test_jordan_block(self):
        result = eigen_general(np.array([[0, 1], [0, 0]]))
        self.assertTrue(np.allclose(result.values, [0, 0]))
        self.assertEqual(int(result.independent.sum()), 1)
        self.assertTrue(np.all(result.residuals <= 1e-10))

    def test_unit_vectors_and_residuals(self):
        rng = np.random.default_rng(7)
        matrix = random_matrix(rng, 12)
        result = eigen_general(matrix)
        self.assertTrue(np.allclose(np.linalg.norm(result.vectors, axis=0), 1))
        for n in range(len(result)):
            residual = np.linalg.norm(matrix @ result.vector(n) - result.values[n] * result.vector(n))
            self.assertLessEqual(residual, 1e-10 * np.linalg.norm(matrix))

    def test_ordering(self):
        rng = np.random.default_rng(3)
        values = eigen_general(random_matrix(rng, 10)).values
        self.assertTrue(np.all(np.diff(np.round(values.real, 10)) >= 0))

    def test_characteristic_polynomial_roots(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            size = int(rng.integers(2, 7))
            matrix = random_matrix(rng, size)
            roots = polynomial_roots(characteristic_coefficients(matrix))
            values = eigen_general(matrix).values
            scale = max(1.0, float(np.max(np.abs(values))))
            self.assertLess(max_mismatch(values, roots), 1e-8 * scale)

    def test_trace_and_determinant(self):
        rng = np.random.default_rng(11)
        for size in range(2, 7):
            matrix = random_matrix(rng, size)
            values = eigen_general(matrix).values
            self.assertAlmostEqual(abs(values.sum() - np.trace(matrix)), 0, places=10)
            determinant = cofactor_determinant(matrix)
            self.assertLess(abs(np.prod(values) - determinant), 1e-9 * max(1.0, abs(determinant)))

    def test_similarity_invariance(self):
        rng = np.random.default_rng(5)
        matrix = random_matrix(rng, 6)
        transform = np.eye(6) + 0.3 * random_matrix(rng, 6)
        similar = np.linalg.solve(transform, matrix @ transform)
        self.assertLess(max_mismatch(eigen_general(matrix).values, eigen_general(similar).values), 1e-8)

    def test_hermitian_input(self):
        rng = np.random.default_rng(9)
        half = random_matrix(rng, 8)
        matrix = half + half.conj().T
        result = eigen_general(matrix)
        self.assertLess(np.max(np.abs(result.values.imag)), 1e-10 * np.max(np.abs(result.values)))
        gram = result.vectors.conj().T @ result.vectors
        self.assertTrue(np.allclose(gram, np.eye(8), atol=1e-8))

    def test_invalid_input(self):
        with self.assertRaises(ValueError):
            eigen_general(np.zeros((2, 3)))
        with self.assertRaises(ValueError):
            eigen_general(np.array([[1, np.nan], [0, 1]]))
        with self.assertRaises(ValueError):
            eigen_general(np.eye(5), max_dim=4)

    def test_solver_failure_keeps_hessenberg_form(self):
        matrix = random_matrix(np.random.default_rng(1), 5)
        with mock.patch.object(cl_linalg.sla, "eig", side_effect=np.linalg.LinAlgError("no convergence")):
            with self.assertRaises(EigenSolverError) as context:
                eigen_general(matrix)
        state = context.exception.partial_state
        self.assertEqual(state.shape, (5, 5))
        self.assertTrue(np.allclose(np.tril(state, -2), 0))

    def test_residual_contract(self):
        with self.assertRaises(EigenSolverError) as context:
            eigen_general(random_matrix(np.random.default_rng(4), 6), tol=0.0)
        state = context.exception.partial_state
        self.assertEqual(state.shape, (6, 6))
        self.assertTrue(np.allclose(np.tril(state, -2), 0))


class Eig2Tests(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(eig2(BlochCoefficients(0, 1, 0, 0, 0.0)), (1, -1))
        self.assertEqual(eig2(BlochCoefficients(2, 0, 0, 0, 0.0)), (2, 2))
        e_plus, e_minus = eig2(BlochCoefficients(0, 0, 2j, 0, 0.0))
        self.assertAlmostEqual(abs(e_plus - 2j), 0, places=14)
        self.assertAlmostEqual(abs(e_minus + 2j), 0, places=14)

    def test_matches_general_solver(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            h0, hx, hy, hz = rng.uniform(-2, 2, 4) + 1j * rng.uniform(-2, 2, 4)
            coefficients = BlochCoefficients(h0, hx, hy, hz, 0.0)
            closed = eig2(coefficients)
            values = eigen_general(h2x2(coefficients)).values
            scale = max(1.0, float(np.max(np.abs(values))))
            self.assertLess(max_mismatch(closed, values), 1e-8 * scale)


if __name__ == '__main__':
    unittest.main()
