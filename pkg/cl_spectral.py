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

"""Band structures, spectral winding, gap classes, degeneracies, edge modes and BBC comparison."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
from scipy import optimize
from scipy.spatial import ConvexHull, Delaunay

from cl_linalg import TOL_EIG, EigenDecomposition, eig2, eigen_general
from cl_model import BoundaryCondition, LadderConfigError, LadderException, LadderParams, bloch, bloch_derivative, \
    bloch_terms, real_space

log = logging.getLogger(__name__)

DEFAULT_NK = 1024
MIN_NK_BANDS = 64
MIN_NK_GAP = 256
MIN_NK_DEGENERACY = 512
MIN_L_EDGE = 20
MIN_SWEEP_POINTS = 50

WINDING_PROXIMITY = 1e-6
WINDING_GUARD = 0.05
GAP_REAL_TOL = 1e-9
GAP_MARGIN = 1e-6
POINT_GAP_MARGIN = 1e-6


class SpectrumProximityError(LadderException):
    """Exception raised when a reference energy lies on the PBC spectrum."""


class WindingResolutionError(LadderException):
    """Exception raised when the accumulated phase is not close to an integer; raise Nk."""

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class GapClass(Enum):
    REAL_LINE_GAP = "RealLineGap"
    IMAGINARY_LINE_GAP = "ImaginaryLineGap"
    GAPLESS_BAND_TOUCHING = "GaplessBandTouching"
    GAPLESS_OVERLAP = "GaplessOverlap"
    POINT_GAP_ONLY = "PointGapOnly"
    BOUNDARY = "Boundary"


class TopologyClass(Enum):
    TRIVIAL = "Trivial"
    EDGE_MODES = "EdgeModes"
    NOT_APPLICABLE = "NotApplicable"


EDGE_COMPATIBLE_GAPS = (GapClass.REAL_LINE_GAP, GapClass.POINT_GAP_ONLY)


@dataclass(frozen=True)
class PhaseLabel:
    gap: GapClass
    topological: TopologyClass = TopologyClass.NOT_APPLICABLE

    def __post_init__(self):
        if self.topological is TopologyClass.EDGE_MODES and self.gap not in EDGE_COMPATIBLE_GAPS:
            raise ValueError("Edge modes require a real line gap or a point gap, got %s" % self.gap.value)

    @classmethod
    def from_edge_count(cls, gap: GapClass, edge_count: int) -> "PhaseLabel":
        if gap not in EDGE_COMPATIBLE_GAPS:
            return cls(gap, TopologyClass.NOT_APPLICABLE)
        return cls(gap, TopologyClass.EDGE_MODES if edge_count > 0 else TopologyClass.TRIVIAL)


class DegeneracyKind(Enum):
    DP = "DP"
    EP = "EP"


@dataclass(frozen=True)
class DegeneracyPoint:
    k: float
    kind: DegeneracyKind
    params_at: LadderParams
    energy: complex = 0j


@dataclass(frozen=True, eq=False)
class BandStructure:
    kgrid: np.ndarray
    Eplus: np.ndarray
    Eminus: np.ndarray
    params: LadderParams

    @property
    def nk(self) -> int:
        return len(self.kgrid)

    def values(self) -> np.ndarray:
        return np.concatenate((self.Eplus, self.Eminus))

    def rows(self):
        for k, e_plus, e_minus in zip(self.kgrid, self.Eplus, self.Eminus):
            yield k, e_plus.real, e_plus.imag, e_minus.real, e_minus.imag


@dataclass(frozen=True)
class WindingResult:
    Eref: complex
    w: int
    Nk: int
    raw: float


def momentum_grid(nk) -> np.ndarray:
    return 2 * np.pi * np.arange(nk) / nk


def bands(params: LadderParams, Nk: int = DEFAULT_NK) -> BandStructure:
    """Sample ``E+-(k)`` on a uniform grid and relabel the branches for continuity in ``k``."""
    if Nk < MIN_NK_BANDS:
        raise ValueError("bands needs Nk >= %i, got %i" % (MIN_NK_BANDS, Nk))
    kgrid = momentum_grid(Nk)
    e_plus, e_minus = eig2(bloch(params, kgrid))
    e_plus = e_plus.copy()
    e_minus = e_minus.copy()
    for j in range(1, Nk):
        keep = abs(e_plus[j] - e_plus[j - 1]) + abs(e_minus[j] - e_minus[j - 1])
        swap = abs(e_minus[j] - e_plus[j - 1]) + abs(e_plus[j] - e_minus[j - 1])
        if swap < keep:
            e_plus[j], e_minus[j] = e_minus[j], e_plus[j]
    return BandStructure(kgrid, e_plus, e_minus, params)


def pbc_spectrum(params: LadderParams, Nk: int = DEFAULT_NK) -> np.ndarray:
    e_plus, e_minus = eig2(bloch(params, momentum_grid(Nk)))
    return np.concatenate((e_plus, e_minus))


def winding_number(params: LadderParams, Eref, Nk: int = DEFAULT_NK) -> WindingResult:
    """Winding of ``det(h(k) - Eref)`` around the origin as ``k`` sweeps the Brillouin zone."""
    e_ref = complex(Eref)
    coefficients = bloch(params, momentum_grid(Nk))
    e_plus, e_minus = eig2(coefficients)
    distance = min(np.min(np.abs(e_plus - e_ref)), np.min(np.abs(e_minus - e_ref)))
    if distance <= WINDING_PROXIMITY:
        raise SpectrumProximityError("Reference energy %s is %.2e from the PBC spectrum" % (e_ref, distance))
    det = (coefficients.h0 - e_ref) ** 2 - coefficients.p
    raw = float(np.sum(np.angle(np.roll(det, -1) / det)) / (2 * np.pi))
    w = int(round(raw))
    if abs(raw - w) >= WINDING_GUARD:
        raise WindingResolutionError("Winding %.4f at %s is not resolved with Nk=%i" % (raw, e_ref, Nk), raw=raw)
    return WindingResult(e_ref, w, Nk, raw)


@dataclass(frozen=True)
class HatanoNelsonChain:
    """Single-band chain ``E(k) = onsite + forward e^{ik} + backward e^{-ik}``."""

    onsite: complex
    forward: complex
    backward: complex

    def energies(self, kgrid) -> np.ndarray:
        return self.onsite + self.forward * np.exp(1j * kgrid) + self.backward * np.exp(-1j * kgrid)


def hatano_nelson_chains(params: LadderParams) -> List[HatanoNelsonChain]:
    """Decoupled sx = +1 and sx = -1 chains of the unbalanced cross-hopping model at theta in {0, pi}."""
    if abs(math.sin(params.theta)) > 1e-12 or any(
            abs(value) > 0 for value in (params.alpha, params.m, params.r1, params.mu)):
        raise LadderConfigError("Chains decouple only for sin(theta) = 0 with alpha = m = r1 = mu = 0")
    leg = 0.0 if params.drop_h0 else math.cos(params.theta)
    chains = []
    for sign in (1, -1):
        chains.append(HatanoNelsonChain(
            onsite=complex(sign * params.M),
            forward=complex(leg + sign * (params.r + params.r2)),
            backward=complex(leg + sign * (params.r - params.r2)),
        ))
    return chains


def hatano_nelson_winding(chain: HatanoNelsonChain, Eref, Nk: int = DEFAULT_NK) -> int:
    kgrid = momentum_grid(Nk)
    values = chain.energies(kgrid) - complex(Eref)
    if np.min(np.abs(values)) <= WINDING_PROXIMITY:
        raise SpectrumProximityError("Reference energy %s lies on the chain spectrum" % (Eref,))
    raw = np.sum(np.angle(np.roll(values, -1) / values)) / (2 * np.pi)
    return int(round(raw))


def _discriminant(params, k):
    _, hx, hy, hz = bloch_terms(params, k)
    dhx, dhy, dhz = bloch_derivative(params, k)
    return hx * hx + hy * hy + hz * hz, 2 * (hx * dhx + hy * dhy + hz * dhz)


def _newton_root(params, k_start, max_iter=80):
    k = complex(k_start)
    for _ in range(max_iter):
        value, slope = _discriminant(params, k)
        if slope == 0:
            break
        step = complex(value / slope)
        k -= step
        if abs(step) < 1e-15 * (1 + abs(k)):
            break
    return k


def find_degeneracies(params: LadderParams, Nk: int = MIN_NK_DEGENERACY) -> List[DegeneracyPoint]:
    """Momenta where ``P(k) = 0``; DP when ``hx = hy = hz = 0``, EP otherwise.

    Candidates are sign changes of a real ``P`` (bracketed with brentq) and
    local minima of ``|P|`` on the grid, polished by Newton steps in complex
    momentum; a root counts when it lands on the real axis.
    """
    if Nk < MIN_NK_DEGENERACY:
        raise ValueError("find_degeneracies needs Nk >= %i, got %i" % (MIN_NK_DEGENERACY, Nk))
    kgrid = momentum_grid(Nk)
    coefficients = bloch(params, kgrid)
    p_values = coefficients.p
    magnitude = np.abs(p_values)
    scale = max(1.0, float(magnitude.max()))
    if magnitude.max() <= 1e-12:
        log.warning("P(k) vanishes identically, every momentum is degenerate")
        return []
    candidates = []
    if np.max(np.abs(p_values.imag)) <= GAP_REAL_TOL * scale:
        real_p = p_values.real
        for j in np.flatnonzero(np.sign(real_p) != np.sign(np.roll(real_p, -1))):
            lo, hi = kgrid[j], kgrid[j] + 2 * np.pi / Nk
            f = lambda k: float(np.real(_discriminant(params, k)[0]))
            if f(lo) == 0:
                candidates.append(lo)
            elif f(lo) * f(hi) < 0:
                candidates.append(optimize.brentq(f, lo, hi, xtol=1e-15))
    minima = np.flatnonzero((magnitude <= np.roll(magnitude, 1)) & (magnitude <= np.roll(magnitude, -1)))
    for j in minima:
        root = _newton_root(params, kgrid[j])
        if abs(root.imag) <= 1e-7:
            candidates.append(root.real)

    points = []
    for k in sorted(float(np.mod(k, 2 * np.pi)) for k in candidates):
        value = abs(_discriminant(params, k)[0])
        if value > 1e-8 * scale:
            continue
        if any(min(abs(k - p.k), 2 * np.pi - abs(k - p.k)) < 1e-6 for p in points):
            continue
        h0, hx, hy, hz = (complex(v) for v in bloch_terms(params, k))
        vanishing = max(abs(hx), abs(hy), abs(hz)) <= 1e-6 * scale
        kind = DegeneracyKind.DP if vanishing else DegeneracyKind.EP
        points.append(DegeneracyPoint(k, kind, params, h0))
        log.debug("%s at k=%.10f, E=%s", kind.value, k, h0)
    return points


def classify_gap(params: LadderParams, Nk: int = DEFAULT_NK) -> PhaseLabel:
    """Gap class of the PBC spectrum; topology is filled in by callers that know the edge count."""
    if Nk < MIN_NK_GAP:
        raise ValueError("classify_gap needs Nk >= %i, got %i" % (MIN_NK_GAP, Nk))
    coefficients = bloch(params, momentum_grid(Nk))
    p_values = coefficients.p
    scale = max(1.0, float(np.max(np.abs(p_values))))
    tol = GAP_REAL_TOL * scale
    e_plus, e_minus = eig2(coefficients)
    separation = float(np.min(e_plus.real) - np.max(e_minus.real))

    if np.max(np.abs(p_values.imag)) <= tol:
        real_p = p_values.real
        if np.any(np.abs(real_p) <= tol) or (np.any(real_p > tol) and np.any(real_p < -tol)):
            return PhaseLabel(_touching_class(params, Nk, e_plus, e_minus))
        if np.all(real_p < -tol):
            return PhaseLabel(GapClass.IMAGINARY_LINE_GAP)
        if separation > GAP_MARGIN:
            return PhaseLabel(GapClass.REAL_LINE_GAP)
        if separation < -GAP_MARGIN:
            return PhaseLabel(GapClass.GAPLESS_OVERLAP)
        return PhaseLabel(GapClass.BOUNDARY)

    if find_degeneracies(params, max(Nk, MIN_NK_DEGENERACY)):
        return PhaseLabel(_touching_class(params, Nk, e_plus, e_minus))
    # complex loops are compared as continuous branches
    structure = bands(params, Nk)
    separation = _loop_separation(structure.Eplus.real, structure.Eminus.real)
    if separation > GAP_MARGIN:
        return PhaseLabel(GapClass.REAL_LINE_GAP)
    if abs(separation) <= GAP_MARGIN:
        return PhaseLabel(GapClass.BOUNDARY)
    if _loop_separation(structure.Eplus.imag, structure.Eminus.imag) > GAP_MARGIN:
        return PhaseLabel(GapClass.IMAGINARY_LINE_GAP)
    return PhaseLabel(GapClass.POINT_GAP_ONLY)


def _loop_separation(first, second):
    return float(max(np.min(first) - np.max(second), np.min(second) - np.max(first)))


def _touching_class(params, Nk, e_plus, e_minus):
    """Touching bands; EP-only touchings away from E = 0 with E = 0 off the spectrum keep a point gap there."""
    points = find_degeneracies(params, max(Nk, MIN_NK_DEGENERACY))
    if not points or any(p.kind is not DegeneracyKind.EP for p in points):
        return GapClass.GAPLESS_BAND_TOUCHING
    # exact coalescence energies
    if min(abs(p.energy) for p in points) <= POINT_GAP_MARGIN:
        return GapClass.GAPLESS_BAND_TOUCHING
    if _origin_distance(params, e_plus, e_minus) <= POINT_GAP_MARGIN:
        return GapClass.GAPLESS_BAND_TOUCHING
    return GapClass.POINT_GAP_ONLY


def _origin_distance(params, e_plus, e_minus):
    """Distance from E = 0 to the PBC spectrum, polished around the closest grid sample."""
    kgrid = momentum_grid(len(e_plus))
    magnitude = np.minimum(np.abs(e_plus), np.abs(e_minus))
    j = int(np.argmin(magnitude))
    step = kgrid[1] - kgrid[0]

    def closest(k):
        upper, lower = eig2(bloch(params, k))
        return min(abs(upper), abs(lower))

    result = optimize.minimize_scalar(closest, bounds=(kgrid[j] - step, kgrid[j] + step), method="bounded",
                                      options={"xatol": 1e-12})
    return min(float(magnitude[j]), float(result.fun))


@dataclass(frozen=True)
class EdgeCriteria:
    """Thresholds of the edge-mode detector.

    :param delta_gap: minimum distance to the PBC spectrum and to non-partner OBC eigenvalues.
    :param end_fraction: fraction of the cells counted as one end.
    :param end_weight: minimum weight of a mode inside one end.
    :param pair_ratio: a pair splitting must stay below this fraction of its isolation.
    :param spacing_factor: an unpaired candidate must be isolated by this many median OBC level spacings.
    :param delta_deg: relative splitting reported as an exact degeneracy.
    """

    delta_gap: float = 0.05
    end_fraction: float = 0.2
    end_weight: float = 0.5
    pair_ratio: float = 0.1
    spacing_factor: float = 5.0
    delta_deg: float = 1e-6


@dataclass(frozen=True, eq=False)
class EdgeMode:
    index: int
    energy: complex
    partner: Optional[int]
    end: str
    end_weight: float
    degenerate: bool = False
    vector: Optional[np.ndarray] = field(default=None, repr=False)


def end_weights(vector, size, end_fraction=EdgeCriteria.end_fraction):
    weights = np.abs(vector[0::2]) ** 2 + np.abs(vector[1::2]) ** 2
    total = weights.sum()
    cells = max(2, int(math.ceil(end_fraction * size)))
    return weights[:cells].sum() / total, weights[-cells:].sum() / total


def _split_pair(vectors, size):
    """Rotate a two-dimensional eigenspace so the cell-position operator is diagonal."""
    basis, _ = np.linalg.qr(vectors)
    position = np.repeat(np.arange(size, dtype=float), 2)
    projected = basis.conj().T @ (position[:, None] * basis)
    _, rotation = np.linalg.eigh(projected)
    return basis @ rotation


def _localized(vector, size, criteria):
    left, right = end_weights(vector, size, criteria.end_fraction)
    end, weight = ("left", left) if left >= right else ("right", right)
    return weight > criteria.end_weight, end, weight


def detect_edge_modes(params: LadderParams, decomposition: EigenDecomposition, pbc_values,
                      criteria: EdgeCriteria = EdgeCriteria()) -> List[EdgeMode]:
    values = decomposition.values
    size = params.L
    distance_pbc = np.min(np.abs(values[:, None] - pbc_values[None, :]), axis=1)
    candidates = np.flatnonzero(distance_pbc > criteria.delta_gap)
    if len(candidates) == 0:
        return []
    gaps = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(gaps, np.inf)

    nearest = {}
    for i in candidates:
        others = [j for j in candidates if j != i]
        nearest[i] = min(others, key=lambda j: gaps[i, j]) if others else None

    def isolation(i, partner):
        row = gaps[i].copy()
        if partner is not None:
            row[partner] = np.inf
        return float(np.min(row))

    energy_scale = max(1.0, float(np.max(np.abs(values))))
    spacing = float(np.median(np.min(gaps, axis=1))) if len(values) > 1 else 0.0
    lone_isolation = max(criteria.delta_gap, criteria.spacing_factor * spacing)
    modes = []
    used = set()
    for i in candidates:
        if i in used:
            continue
        j = nearest[i]
        if j is not None and nearest.get(j) == i and j not in used:
            split = gaps[i, j]
            iso = min(isolation(i, j), isolation(j, i))
            if iso > criteria.delta_gap and split <= criteria.pair_ratio * iso:
                used.update((i, j))
                rotated = _split_pair(decomposition.vectors[:, [i, j]], size)
                checks = [_localized(rotated[:, n], size, criteria) for n in range(2)]
                if all(check[0] for check in checks):
                    degenerate = split <= criteria.delta_deg * energy_scale
                    for index, partner, check, vector in ((i, j, checks[0], rotated[:, 0]),
                                                          (j, i, checks[1], rotated[:, 1])):
                        modes.append(EdgeMode(int(index), complex(values[index]), int(partner), check[1],
                                              float(check[2]), degenerate, vector))
                continue
        if isolation(i, None) > lone_isolation:
            localized, end, weight = _localized(decomposition.vectors[:, i], size, criteria)
            if localized:
                modes.append(EdgeMode(int(i), complex(values[i]), None, end, float(weight), False,
                                      decomposition.vectors[:, i]))
    modes.sort(key=lambda mode: mode.index)
    log.debug("Found %i edge mode(s), %i paired", len(modes), sum(1 for mode in modes if mode.partner is not None))
    return modes


def _require_edge_length(params):
    if params.L < MIN_L_EDGE:
        raise LadderConfigError("Edge-mode detection needs L >= %i, got %i" % (MIN_L_EDGE, params.L))


def find_edge_modes(params: LadderParams, Nk_ref: int = DEFAULT_NK, criteria: EdgeCriteria = EdgeCriteria(),
                    tol: float = TOL_EIG) -> List[EdgeMode]:
    """In-gap, isolated, end-localized OBC modes; pairs carry each other's index as ``partner``."""
    if params.bc is not BoundaryCondition.OBC:
        raise LadderConfigError("Edge-mode detection needs open boundaries")
    _require_edge_length(params)
    decomposition = eigen_general(real_space(params), tol=tol)
    return detect_edge_modes(params, decomposition, pbc_spectrum(params, Nk_ref), criteria)


def edge_count(modes: List[EdgeMode]) -> int:
    return sum(1 for mode in modes if mode.partner is not None)


@dataclass(frozen=True, eq=False)
class SpectrumOBC:
    """Open-boundary eigenpairs with edge tags and two-band membership.

    Vectors of paired edge modes are replaced by their position-resolved
    rotation inside the pair's eigenspace. ``band`` holds ``'+'``, ``'-'`` or
    ``''`` for edge modes.
    """

    params: LadderParams
    values: np.ndarray
    vectors: np.ndarray
    edge_modes: List[EdgeMode]
    is_edge: np.ndarray
    band: Optional[np.ndarray]

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def edge_count(self) -> int:
        return edge_count(self.edge_modes)

    @property
    def has_edge_pair(self) -> bool:
        return self.edge_count > 0

    def band_indices(self, band) -> np.ndarray:
        return np.flatnonzero(self.band == band)


def assign_bands(values, is_edge) -> np.ndarray:
    """Split bulk modes by ``Re(E - median)``; ties go to the ``'+'`` band."""
    band = np.full(len(values), "", dtype=object)
    bulk = np.flatnonzero(~is_edge)
    if len(bulk):
        median = np.median(values[bulk].real)
        band[bulk] = np.where(values[bulk].real >= median, "+", "-")
    return band


def obc_spectrum(params: LadderParams, Nk_ref: int = DEFAULT_NK, criteria: EdgeCriteria = EdgeCriteria(),
                 tol: float = TOL_EIG) -> SpectrumOBC:
    if params.bc is not BoundaryCondition.OBC:
        params = params.with_(bc=BoundaryCondition.OBC)
    decomposition = eigen_general(real_space(params), tol=tol)
    if params.L >= MIN_L_EDGE:
        modes = detect_edge_modes(params, decomposition, pbc_spectrum(params, Nk_ref), criteria)
    else:
        log.warning("L=%i is below %i, edge-mode detection skipped", params.L, MIN_L_EDGE)
        modes = []
    vectors = decomposition.vectors.copy()
    is_edge = np.zeros(len(decomposition.values), dtype=bool)
    for mode in modes:
        if mode.partner is not None:
            is_edge[mode.index] = True
            vectors[:, mode.index] = mode.vector
    return SpectrumOBC(params, decomposition.values, vectors, modes, is_edge,
                       assign_bands(decomposition.values, is_edge))


def reference_grid(params: LadderParams, Nk: int = DEFAULT_NK, grid: int = 16) -> np.ndarray:
    """Reference energies on a ``grid x grid`` lattice inside the hull of the PBC spectrum.

    A spectrum without two-dimensional hull is padded into a thin box instead.
    """
    values = pbc_spectrum(params, Nk)
    points = np.column_stack((values.real, values.imag))
    centred = points - points.mean(axis=0)
    spread = np.linalg.svd(centred, compute_uv=False)
    low, high = points.min(axis=0), points.max(axis=0)
    if spread[-1] <= 1e-9 * max(1.0, spread[0]):
        pad = max(0.1, 0.1 * float(np.max(high - low)))
        xs = np.linspace(low[0] - pad, high[0] + pad, grid)
        ys = np.linspace(low[1] - pad, high[1] + pad, grid)
        mesh = np.array([complex(x, y) for y in ys for x in xs])
        return mesh
    hull = ConvexHull(points)
    triangulation = Delaunay(points[hull.vertices])
    xs = np.linspace(low[0], high[0], grid + 2)[1:-1]
    ys = np.linspace(low[1], high[1], grid + 2)[1:-1]
    mesh = np.array([(x, y) for y in ys for x in xs])
    inside = triangulation.find_simplex(mesh) >= 0
    return mesh[inside, 0] + 1j * mesh[inside, 1]


def nhse_predicate(params: LadderParams, Nk: int = DEFAULT_NK, grid: int = 16) -> bool:
    """True when a reference energy inside the PBC spectrum hull has nonzero winding."""
    if Nk < MIN_NK_GAP:
        raise ValueError("nhse_predicate needs Nk >= %i, got %i" % (MIN_NK_GAP, Nk))
    for e_ref in reference_grid(params, Nk, grid):
        try:
            result = winding_number(params, e_ref, Nk)
        except (SpectrumProximityError, WindingResolutionError) as e:
            log.debug("Skipping reference energy %s: %s", e_ref, e)
            continue
        if result.w != 0:
            log.debug("Winding %i at %s", result.w, e_ref)
            return True
    return False


@dataclass(frozen=True)
class BBCReport:
    axis: str
    pbc_closing: List[float]
    obc_closing: List[float]
    conventional_bbc: bool
    step: float

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "pbc_closing": list(self.pbc_closing),
            "obc_closing": list(self.obc_closing),
            "conventional_bbc": self.conventional_bbc,
            "step": self.step,
        }


def pbc_gap(params: LadderParams, Nk: int = DEFAULT_NK) -> float:
    """Minimal band splitting ``2 min_k |sqrt(P(k))|``."""
    return float(2 * np.min(np.sqrt(np.abs(bloch(params, momentum_grid(Nk)).p))))


def _closing_runs(values, gaps):
    size = len(gaps)
    flags = []
    for j in range(size):
        neighbours = [n for n in (j - 1, j + 1) if 0 <= n < size]
        is_min = all(gaps[j] <= gaps[n] for n in neighbours)
        jump = max(abs(gaps[n] - gaps[j]) for n in neighbours)
        flags.append(is_min and gaps[j] <= 2 * jump + 1e-9)
    closings = []
    j = 0
    while j < size:
        if flags[j]:
            start = j
            while j + 1 < size and flags[j + 1]:
                j += 1
            closings.append(float(0.5 * (values[start] + values[j])))
        j += 1
    return closings


def bbc_check(params: LadderParams, axis: str, values, Nk: int = DEFAULT_NK, L: Optional[int] = None,
              criteria: EdgeCriteria = EdgeCriteria()) -> BBCReport:
    """Compare PBC gap closings with OBC edge-pair transitions along one parameter."""
    values = np.asarray(values, dtype=float)
    if len(values) < MIN_SWEEP_POINTS:
        raise ValueError("bbc_check needs at least %i sweep points, got %i" % (MIN_SWEEP_POINTS, len(values)))
    if axis not in ("r", "M", "theta", "alpha", "m", "r1", "r2", "mu"):
        raise LadderConfigError("Cannot sweep parameter %r" % axis)
    base = params.with_(bc=BoundaryCondition.OBC, L=L if L is not None else params.L)
    _require_edge_length(base)
    gaps = []
    counts = []
    for value in values:
        point = base.with_(**{axis: float(value)})
        gaps.append(pbc_gap(point, Nk))
        counts.append(edge_count(find_edge_modes(point, Nk, criteria)))
    pbc_closing = _closing_runs(values, gaps)
    obc_closing = [float(0.5 * (values[j] + values[j + 1]))
                   for j in range(len(values) - 1) if counts[j] != counts[j + 1]]
    step = float(np.max(np.abs(np.diff(values))))

    def matched(source, target):
        return all(any(abs(a - b) <= step + 1e-12 for b in target) for a in source)

    conventional = matched(pbc_closing, obc_closing) and matched(obc_closing, pbc_closing)
    log.info("BBC along %s: PBC closings %s, OBC closings %s", axis, pbc_closing, obc_closing)
    return BBCReport(axis, pbc_closing, obc_closing, conventional, step)
