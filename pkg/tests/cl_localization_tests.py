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

import math
import unittest

import numpy as np

from cl_localization import LocalizationError, ModeProfile, band_dipr, band_profile, cell_dipr, density_profile, \
    dipr, fit_kappa, fit_window, kappa_u, mode_dipr, mode_profiles
from cl_model import LadderParams
from cl_spectral import obc_spectrum

TOPOLOGICAL = LadderParams(r=0.5, M=0.25, theta=math.pi / 2, L=30)
TRIVIAL = LadderParams(r=0.25, M=0.75, theta=math.pi / 2, L=30)
UNIFORM_SKIN = LadderParams(r=1, M=1.35, theta=math.pi / 2, mu=0.5, L=30)
BIPOLAR_SKIN = LadderParams(r=1, M=0, theta=math.pi / 4, mu=0.5, L=30)


def single_site(size, cell, sublattice):
    amps = [np.zeros(size, dtype=complex), np.zeros(size, dtype=complex)]
    amps[sublattice][cell - 1] = 1
    return ModeProfile(*amps)


def exponential_mode(size, kappa):
    x = np.arange(1, size + 1)
    amps = np.exp(kappa * x) / math.sqrt(2)
    return ModeProfile(amps.astype(complex), amps.astype(complex)).normalized()


class DiprTests(unittest.TestCase):
    def test_limits(self):
        self.assertAlmostEqual(dipr(single_site(10, 10, 0)), 1, places=12)
        self.assertAlmostEqual(dipr(single_site(10, 1, 1)), -1, places=12)

    def test_uniform_mode(self):
        amps = np.full(12, 1 / math.sqrt(24), dtype=complex)
        self.assertAlmostEqual(dipr(ModeProfile(amps, amps.copy())), 0, places=12)

    def test_mirror_and_bounds(self):
        rng = np.random.default_rng(21)
        for _ in range(1000):
            size = int(rng.integers(10, 31))
            raw = rng.normal(size=(2, size)) + 1j * rng.normal(size=(2, size))
            mode = ModeProfile(raw[0], raw[1]).normalized()
            value = dipr(mode)
            self.assertLessEqual(abs(value), 1 + 1e-12)
            self.assertAlmostEqual(dipr(mode.mirrored()), -value, places=12)

    def test_unnormalized_mode(self):
        amps = np.ones(10, dtype=complex)
        with self.assertRaises(LocalizationError):
            dipr(ModeProfile(amps, amps.copy()))

    def test_short_chain(self):
        with self.assertRaises(ValueError):
            dipr(single_site(2, 1, 0))

    def test_null_mode(self):
        with self.assertRaises(LocalizationError):
            ModeProfile(np.zeros(5, dtype=complex), np.zeros(5, dtype=complex)).normalized()


class KappaTests(unittest.TestCase):
    def test_closed_form(self):
        self.assertAlmostEqual(kappa_u(1.35, 0.5), 0.5 * math.log(1.85 / 0.85), places=12)
        self.assertLess(abs(kappa_u(1.35, 0.5) - 0.38875), 2e-4)
        self.assertAlmostEqual(kappa_u(-1.35, 0.5), -kappa_u(1.35, 0.5), places=12)
        self.assertEqual(kappa_u(1, 0), 0)

    def test_divergence(self):
        with self.assertRaises(LocalizationError):
            kappa_u(0.5, -0.5)

    def test_window(self):
        self.assertEqual(fit_window(40), (11, 30))
        self.assertEqual(fit_window(60), (16, 45))

    def test_synthetic_modes(self):
        self.assertAlmostEqual(fit_kappa(exponential_mode(60, 0.3)), 0.3, places=6)
        self.assertAlmostEqual(fit_kappa(exponential_mode(60, -0.3)), -0.3, places=6)

    def test_localization_gate_uses_cell_weights(self):
        mode = exponential_mode(60, 0.3)
        self.assertAlmostEqual(cell_dipr(mode), 2 * dipr(mode), places=12)
        self.assertGreater(cell_dipr(mode), 0.2)
        self.assertAlmostEqual(cell_dipr(mode.mirrored()), -cell_dipr(mode), places=12)

    def test_fit_requirements(self):
        with self.assertRaises(LocalizationError):
            fit_kappa(exponential_mode(10, 0.3))
        amps = np.full(40, 1 / math.sqrt(80), dtype=complex)
        with self.assertRaises(LocalizationError):
            fit_kappa(ModeProfile(amps, amps.copy()))

    def test_hermitian_bulk_mode_is_extended(self):
        spectrum = obc_spectrum(TRIVIAL.with_(L=40))
        profiles = mode_profiles(spectrum)
        for index in (10, 25, 50):
            self.assertLess(abs(fit_kappa(profiles[index], min_dipr=0)), 0.01)

    def test_uniform_skin_effect_length(self):
        spectrum = obc_spectrum(UNIFORM_SKIN.with_(L=60))
        expected = kappa_u(1.35, 0.5)
        for band in ("+", "-"):
            fitted = abs(fit_kappa(band_profile(spectrum, band)))
            self.assertLess(abs(fitted - expected), 0.05 * expected)


class BandDiprTests(unittest.TestCase):
    def test_hermitian_bands_are_balanced(self):
        report = band_dipr(obc_spectrum(TOPOLOGICAL))
        self.assertEqual(report.normalizer, 29)
        self.assertLess(abs(report.Ibar_plus), 0.05)
        self.assertLess(abs(report.Ibar_minus), 0.05)

    def test_trivial_normalizer(self):
        self.assertEqual(band_dipr(obc_spectrum(TRIVIAL)).normalizer, 30)

    def test_uniform_skin_effect(self):
        report = band_dipr(obc_spectrum(UNIFORM_SKIN))
        self.assertGreater(report.product, 0)

    def test_bipolar_skin_effect(self):
        report = band_dipr(obc_spectrum(BIPOLAR_SKIN))
        self.assertLess(report.product, 0)
        self.assertEqual(np.sign(report.Ibar_plus), -np.sign(report.Ibar_minus))

    def test_per_mode_values(self):
        spectrum = obc_spectrum(TOPOLOGICAL)
        values = mode_dipr(spectrum)
        self.assertEqual(len(values), 60)
        self.assertTrue(np.all(np.abs(values) <= 1))


class DensityTests(unittest.TestCase):
    def test_hermitian_profile_is_flat(self):
        for rho in density_profile(obc_spectrum(TRIVIAL)):
            mean = rho.mean()
            self.assertLess(rho.max(), 3 * mean)
            self.assertGreater(rho.min(), mean / 3)

    def test_uniform_skin_effect_shares_one_end(self):
        rho_plus, rho_minus = density_profile(obc_spectrum(UNIFORM_SKIN))
        self.assertEqual(np.argmax(rho_plus) < 15, np.argmax(rho_minus) < 15)

    def test_band_contrast(self):
        rho_plus, rho_minus = density_profile(obc_spectrum(UNIFORM_SKIN.with_(theta=math.pi / 4)))
        ratio = rho_plus.max() / rho_minus.max()
        self.assertGreaterEqual(max(ratio, 1 / ratio), 3)

    def test_profile_totals(self):
        spectrum = obc_spectrum(TRIVIAL)
        rho_plus, rho_minus = density_profile(spectrum)
        self.assertAlmostEqual(rho_plus.sum(), len(spectrum.band_indices("+")), places=9)
        self.assertAlmostEqual(rho_minus.sum(), len(spectrum.band_indices("-")), places=9)


if __name__ == '__main__':
    unittest.main()
