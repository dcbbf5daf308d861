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

"""Skin-effect diagnostics over open-boundary spectra."""

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from cl_model import LadderException
from cl_spectral import SpectrumOBC

log = logging.getLogger(__name__)

NORM_TOL = 1e-10
MIN_FIT_LENGTH = 16
MIN_DIPR_FIT = 0.1


class LocalizationError(LadderException):
    """Exception raised for unnormalized or unlocalized modes and divergent localization lengths."""


@dataclass(frozen=True, eq=False)
class ModeProfile:
    amps_A: np.ndarray
    amps_B: np.ndarray

    @property
    def L(self) -> int:
        return len(self.amps_A)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amps_A) ** 2 + np.abs(self.amps_B) ** 2

    @property
    def norm(self) -> float:
        return float(self.weights.sum())

    @classmethod
    def from_vector(cls, vector) -> "ModeProfile":
        vector = np.asarray(vector, dtype=complex)
        return cls(vector[0::2].copy(), vector[1::2].copy())

    def normalized(self) -> "ModeProfile":
        scale = math.sqrt(self.norm)
        if scale == 0:
            raise LocalizationError("Cannot normalize a null mode")
        return ModeProfile(self.amps_A / scale, self.amps_B / scale)

    def mirrored(self) -> "ModeProfile":
        return ModeProfile(self.amps_B[::-1].copy(), self.amps_A[::-1].copy())


@dataclass(frozen=True, eq=False)
class DiprReport:
    per_mode: np.ndarray
    Ibar_plus: float
    Ibar_minus: float
    normalizer: int

    @property
    def product(self) -> float:
        return self.Ibar_plus * self.Ibar_minus


def dipr(mode: ModeProfile) -> float:
    """Directed IPR: +1 for a mode sitting on the last cell, -1 on the first."""
    size = mode.L
    if size < 3:
        raise ValueError("dIPR needs L >= 3, got %i" % size)
    if abs(mode.norm - 1) > NORM_TOL:
        raise LocalizationError("Mode is not normalized (norm %.12f)" % mode.norm)
    x = np.arange(1, size + 1)
    centre = (size + 1) / 2
    quartic = np.abs(mode.amps_A) ** 4 + np.abs(mode.amps_B) ** 4
    return float(np.sum((x - centre) * quartic) / ((size - 1) / 2))


def cell_dipr(mode: ModeProfile) -> float:
    """Directed IPR of the leg-summed cell weights; a mode shared evenly by both legs still reaches +-1."""
    size = mode.L
    if size < 3:
        raise ValueError("dIPR needs L >= 3, got %i" % size)
    x = np.arange(1, size + 1)
    weights = mode.weights / mode.norm
    return float(np.sum((x - (size + 1) / 2) * weights ** 2) / ((size - 1) / 2))


def mode_profiles(spectrum: SpectrumOBC) -> List[ModeProfile]:
    return [ModeProfile.from_vector(spectrum.vectors[:, n]).normalized() for n in range(len(spectrum.values))]


def mode_dipr(spectrum: SpectrumOBC) -> np.ndarray:
    return np.array([dipr(profile) for profile in mode_profiles(spectrum)])


def band_dipr(spectrum: SpectrumOBC) -> DiprReport:
    """Band averages of the dIPR over bulk modes, normalized by L-1 when an edge pair exists, else L."""
    if spectrum.band is None:
        raise LocalizationError("Spectrum carries no band assignment")
    per_mode = mode_dipr(spectrum)
    normalizer = spectrum.L - 1 if spectrum.has_edge_pair else spectrum.L
    averages = {}
    for band in ("+", "-"):
        indices = spectrum.band_indices(band)
        averages[band] = float(per_mode[indices].sum() / normalizer)
    log.debug("Average dIPR +%.4f / -%.4f (N=%i)", averages["+"], averages["-"], normalizer)
    return DiprReport(per_mode, averages["+"], averages["-"], normalizer)


def density_profile(spectrum: SpectrumOBC):
    """Summed populations ``(rho_plus(x), rho_minus(x))`` of the bulk modes of each band."""
    if spectrum.band is None:
        raise LocalizationError("Spectrum carries no band assignment")
    profiles = mode_profiles(spectrum)
    rho = {}
    for band in ("+", "-"):
        rho[band] = np.zeros(spectrum.L)
        for n in spectrum.band_indices(band):
            rho[band] += profiles[n].weights
    return rho["+"], rho["-"]


def band_profile(spectrum: SpectrumOBC, band: str) -> ModeProfile:
    """Normalized aggregate profile of one band, amplitudes ``sqrt(sum |psi|^2)`` per sublattice."""
    indices = spectrum.band_indices(band)
    if len(indices) == 0:
        raise LocalizationError("Band %r holds no bulk modes" % band)
    profiles = mode_profiles(spectrum)
    amps_A = np.sqrt(sum(np.abs(profiles[n].amps_A) ** 2 for n in indices))
    amps_B = np.sqrt(sum(np.abs(profiles[n].amps_B) ** 2 for n in indices))
    return ModeProfile(amps_A.astype(complex), amps_B.astype(complex)).normalized()


def kappa_u(M, mu) -> float:
    """Closed-form inverse localization length ``ln sqrt|(M+mu)/(M-mu)|`` of the uniform skin effect."""
    if abs(abs(M) - abs(mu)) == 0:
        raise LocalizationError("kappa_u diverges for |M| = |mu| (M=%r, mu=%r)" % (M, mu))
    return 0.5 * math.log(abs((M + mu) / (M - mu)))


def fit_window(size):
    low = int(math.ceil((size + 1) / 4))
    return low, size + 1 - low


def fit_kappa(mode: ModeProfile, min_dipr: float = MIN_DIPR_FIT) -> float:
    """Least-squares slope of ``ln(weight)/2`` over the interior; positive means growth toward x = L."""
    size = mode.L
    if size < MIN_FIT_LENGTH:
        raise LocalizationError("Fit window too short, need L >= %i, got %i" % (MIN_FIT_LENGTH, size))
    if min_dipr > 0:
        directed = cell_dipr(mode)
        if abs(directed) < min_dipr:
            raise LocalizationError("Mode is not localized (|dIPR| = %.4f < %.2f)" % (abs(directed), min_dipr))
    low, high = fit_window(size)
    x = np.arange(low, high + 1)
    weights = mode.weights[low - 1:high]
    if np.any(weights <= 0):
        raise LocalizationError("Mode vanishes inside the fit window")
    slope, _ = np.polyfit(x, 0.5 * np.log(weights), 1)
    return float(slope)
