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

"""Closed-form criteria: transfer matrices at E = 0, P(k) extremes, phase boundaries and transition angles."""

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import optimize

from cl_model import LadderException

log = logging.getLogger(__name__)

EXACT_TOL = 1e-12
THETA_BRACKET = (1e-3, math.pi / 2 - 1e-3)
THETA_SCAN = 4000


class SingularTransferMatrixError(LadderException):
    """Exception raised when the leading transfer-matrix coefficient vanishes."""


class TransferRegime(Enum):
    BOTH_INSIDE = "BothInside"
    BOTH_OUTSIDE = "BothOutside"
    SPLIT = "Split"


@dataclass(frozen=True)
class TransferEigs:
    lambda1: complex
    lambda2: complex
    regime: TransferRegime


def _cross_terms(r, theta, alpha):
    delta_r = 2 * cmath.sin(complex(theta, alpha))
    return r + delta_r / 2, r - delta_r / 2


def transfer_matrices(M, r, theta, alpha=0.0):
    """Zero-energy transfer matrices ``(T_A, T_B)`` advancing ``(psi_{x+1}, psi_x)`` by one cell."""
    r_plus, r_minus = _cross_terms(r, theta, alpha)
    if abs(r_plus) == 0 or abs(r_minus) == 0:
        raise SingularTransferMatrixError("Transfer matrices need R+ != 0 and R- != 0")
    t_a = np.array([[-M / r_plus, -r_minus / r_plus], [1, 0]], dtype=complex)
    t_b = np.array([[-M / r_minus, -r_plus / r_minus], [1, 0]], dtype=complex)
    return t_a, t_b


def _regime(moduli):
    if all(value < 1 for value in moduli):
        return TransferRegime.BOTH_INSIDE
    if all(value > 1 for value in moduli):
        return TransferRegime.BOTH_OUTSIDE
    return TransferRegime.SPLIT


def transfer_eigs(M, r, theta, alpha=0.0, sublattice="A") -> TransferEigs:
    """Eigenvalues ``(-M +- sqrt(M^2 - 4 R+ R-)) / (2 R+)`` of ``T_A`` (``2 R-`` for ``T_B``), larger modulus first."""
    if sublattice not in ("A", "B"):
        raise ValueError("sublattice must be 'A' or 'B', got %r" % sublattice)
    r_plus, r_minus = _cross_terms(r, theta, alpha)
    leading = r_plus if sublattice == "A" else r_minus
    if abs(leading) == 0:
        raise SingularTransferMatrixError("Singular transfer matrix: R%s = 0" % ("+" if sublattice == "A" else "-"))
    root = cmath.sqrt(M * M - 4 * r_plus * r_minus)
    first = (-M + root) / (2 * leading)
    second = (-M - root) / (2 * leading)
    lambda1, lambda2 = sorted((first, second), key=abs, reverse=True)
    return TransferEigs(lambda1, lambda2, _regime((abs(lambda1), abs(lambda2))))


def alpha_edge_criterion(M, r) -> bool:
    return abs(M) < abs(2 * r)


@dataclass(frozen=True)
class PExtremes:
    P0: float
    Ppi: float
    Pkprime: Optional[float] = None
    coskprime: Optional[float] = None


def _denominator(r, theta, r1):
    return math.sin(theta) ** 2 - r * r + r1 * r1


def p_extremes(M, r, theta, m, r1) -> PExtremes:
    """Values of ``P(k)`` at ``k = 0``, ``k = pi`` and, when it exists, the interior extreme ``k'``."""
    mixed = M * r - m * r1
    base = M * M - m * m
    p_zero = base + 4 * (r * r - r1 * r1) + 4 * mixed
    p_pi = base + 4 * (r * r - r1 * r1) - 4 * mixed
    denominator = _denominator(r, theta, r1)
    if abs(denominator) <= EXACT_TOL:
        return PExtremes(p_zero, p_pi)
    cos_kprime = mixed / (2 * denominator)
    if abs(cos_kprime) > 1:
        return PExtremes(p_zero, p_pi)
    p_kprime = base + 4 * math.sin(theta) ** 2 + mixed * mixed / denominator
    return PExtremes(p_zero, p_pi, p_kprime, cos_kprime)


@dataclass(frozen=True)
class BoundaryCurve:
    """Critical value of ``critical_axis`` as a function of ``sweep_axis``; NaN outside the domain."""

    name: str
    sweep_axis: str
    critical_axis: str
    function: Callable[[float], float] = field(repr=False)

    def evaluate(self, values) -> np.ndarray:
        result = []
        for value in np.asarray(values, dtype=float):
            try:
                critical = self.function(float(value))
            except (ZeroDivisionError, ValueError):
                critical = math.nan
            result.append(math.nan if critical is None else critical)
        return np.array(result, dtype=float)


@dataclass(frozen=True)
class BoundarySet:
    curves: Dict[str, BoundaryCurve]

    def names(self) -> List[str]:
        return list(self.curves)

    def __getitem__(self, name) -> BoundaryCurve:
        return self.curves[name]

    def rows(self, values):
        """``(sweep_param, critical_value, curve_name)`` rows, domain gaps skipped."""
        for name, curve in self.curves.items():
            for value, critical in zip(values, curve.evaluate(values)):
                if math.isfinite(critical):
                    yield float(value), float(critical), name

    def rows_on(self, samples: Dict[str, np.ndarray]):
        """Rows with each curve sampled along its own sweep axis; curves without samples are skipped."""
        for name, curve in self.curves.items():
            values = samples.get(curve.sweep_axis)
            if values is None:
                continue
            for value, critical in zip(values, curve.evaluate(values)):
                if math.isfinite(critical):
                    yield float(value), float(critical), name


def _boundary_set(*curves) -> BoundarySet:
    return BoundarySet({curve.name: curve for curve in curves})


def m_r1_boundaries(M, r, theta) -> BoundarySet:
    """Curves ``m(r1)`` from ``P(0) = 0``, ``P(pi) = 0``, ``P(k') = 0`` and ``cos k' = +-1``.

    ``P(k') = 0`` reduces to ``a m^2 + b m + c = 0`` with ``a = r^2 - sin^2(theta)``;
    it is linear when ``a = 0``. Its roots are kept only where ``k'`` exists.
    """
    sin2 = math.sin(theta) ** 2

    def nonzero(r1):
        if r1 == 0:
            raise ZeroDivisionError("r1 = 0 is excluded")

    def kprime_root(sign):
        def solve(r1):
            nonzero(r1)
            denominator = _denominator(r, theta, r1)
            a = r * r - sin2
            b = -2 * M * r * r1
            c = (M * M + 4 * sin2) * denominator + M * M * r * r
            if abs(a) <= EXACT_TOL:
                if sign < 0 or b == 0:
                    return None
                m = -c / b
            else:
                discriminant = b * b - 4 * a * c
                if discriminant < 0:
                    return None
                m = (-b + sign * math.sqrt(discriminant)) / (2 * a)
            extremes = p_extremes(M, r, theta, m, r1)
            return m if extremes.Pkprime is not None else None
        return solve

    def edge(sign):
        def solve(r1):
            nonzero(r1)
            return (M * r - sign * 2 * _denominator(r, theta, r1)) / r1
        return solve

    return _boundary_set(
        BoundaryCurve("P0_plus", "r1", "m", lambda r1: (M + 2 * r) - 2 * r1),
        BoundaryCurve("P0_minus", "r1", "m", lambda r1: -(M + 2 * r) - 2 * r1),
        BoundaryCurve("Ppi_plus", "r1", "m", lambda r1: (M - 2 * r) + 2 * r1),
        BoundaryCurve("Ppi_minus", "r1", "m", lambda r1: -(M - 2 * r) + 2 * r1),
        BoundaryCurve("Pkprime_plus", "r1", "m", kprime_root(1)),
        BoundaryCurve("Pkprime_minus", "r1", "m", kprime_root(-1)),
        BoundaryCurve("coskprime_plus", "r1", "m", edge(1)),
        BoundaryCurve("coskprime_minus", "r1", "m", edge(-1)),
    )


def mu_critical_values(M, theta) -> List[float]:
    """Non-negative ``mu`` solving ``sqrt|M^2 - mu^2| = |2 sin(theta)|``."""
    gap = 4 * math.sin(theta) ** 2
    values = set()
    for square in (M * M - gap, M * M + gap):
        if square >= 0:
            values.add(math.sqrt(square))
    return sorted(values)


def mu_boundaries(theta) -> BoundarySet:
    gap = 4 * math.sin(theta) ** 2

    def branch(sign):
        def solve(M):
            square = M * M + sign * gap
            return math.sqrt(square) if square >= 0 else None
        return solve

    return _boundary_set(
        BoundaryCurve("mu_plus", "M", "mu", branch(1)),
        BoundaryCurve("mu_minus", "M", "mu", branch(-1)),
    )


def r2_boundaries(r, theta) -> BoundarySet:
    """DP lines ``M = +-2r`` (swept along r2) and the EP line ``|r2| = |sin(theta)|`` for ``|M| < |2r|``."""
    return _boundary_set(
        BoundaryCurve("dp_plus", "r2", "M", lambda r2: 2 * abs(r)),
        BoundaryCurve("dp_minus", "r2", "M", lambda r2: -2 * abs(r)),
        BoundaryCurve("ep", "M", "r2", lambda M: abs(math.sin(theta)) if abs(M) < abs(2 * r) else None),
    )


def boundary_overlay(params, axis1, axis2) -> Optional[BoundarySet]:
    """Analytic curves matching a two-parameter sweep, or None when no closed form covers it."""
    axes = {axis1, axis2}
    if axes == {"r1", "m"}:
        return m_r1_boundaries(params.M, params.r, params.theta)
    if axes == {"M", "mu"}:
        return mu_boundaries(params.theta)
    if axes == {"M", "r2"}:
        return r2_boundaries(params.r, params.theta)
    return None


@dataclass(frozen=True)
class ThetaTransitions:
    overlap_theta: Optional[float] = None
    touching_theta: Optional[float] = None


def m_r1_theta_transitions(M, r, m, r1) -> ThetaTransitions:
    """Angles where the real bands start to overlap and where ``P(k')`` first vanishes, in radians."""
    extremes = p_extremes(M, r, math.pi / 2, m, r1)
    low, high = THETA_BRACKET
    overlap = None
    if extremes.P0 >= 0 and extremes.Ppi >= 0:
        target = math.sqrt(extremes.P0) + math.sqrt(extremes.Ppi)
        overlap_gap = lambda theta: 4 * math.cos(theta) - target
        if overlap_gap(low) * overlap_gap(high) < 0:
            overlap = optimize.bisect(overlap_gap, low, high, xtol=1e-13)

    def p_kprime(theta):
        value = p_extremes(M, r, theta, m, r1).Pkprime
        return math.nan if value is None else value

    touching = None
    thetas = np.linspace(low, high, THETA_SCAN)
    samples = [p_kprime(theta) for theta in thetas]
    for j in range(len(thetas) - 1):
        a, b = samples[j], samples[j + 1]
        if math.isnan(a) or math.isnan(b) or a * b > 0:
            continue
        root = thetas[j] if a == 0 else optimize.brentq(p_kprime, thetas[j], thetas[j + 1], xtol=1e-13)
        if abs(p_kprime(root)) <= 1e-8:
            touching = root
            break
    log.debug("Theta transitions for M=%s r=%s m=%s r1=%s: overlap %s, touching %s", M, r, m, r1, overlap, touching)
    return ThetaTransitions(overlap, touching)


@dataclass(frozen=True)
class R2Conditions:
    dp: bool
    ep: bool


def r2_conditions(M, r, theta, r2, tol=EXACT_TOL) -> R2Conditions:
    dp = abs(abs(M) - abs(2 * r)) <= tol
    ep = abs(abs(r2) - abs(math.sin(theta))) <= tol and abs(M) < abs(2 * r)
    return R2Conditions(dp, ep)


def mu_criterion(M, mu, theta) -> bool:
    """Edge pair criterion of the imaginary-potential model, valid for ``r = sin(theta)``."""
    return math.sqrt(abs(M * M - mu * mu)) < abs(2 * math.sin(theta))
