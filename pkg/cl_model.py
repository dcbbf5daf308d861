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

"""Creutz ladder parameters, Bloch coefficients and real-space Hamiltonians.

Basis ordering of the real-space matrix is interleaved, index ``2*x + s`` with
``x = 0..L-1`` the unit cell and ``s = 0, 1`` the A, B legs. A hopping term
``t * c_x^dagger d_{x+1}`` contributes ``t * exp(ik)`` to the Bloch element,
which fixes every asymmetric assignment below.
"""

import cmath
import configparser
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

log = logging.getLogger(__name__)

PARAM_KEYS = ("K", "r", "M", "theta", "alpha", "m", "r1", "r2", "mu", "L", "bc")
OPTIONAL_KEYS = ("drop_h0",)
LADDER_SECTION = "ladder"
SWEEP_SECTION = "sweep"


class LadderException(Exception):
    """Base exception of the Creutz ladder toolkit."""


class LadderConfigError(LadderException):
    """Exception raised for invalid parameters or configuration documents."""


class BoundaryCondition(Enum):
    PBC = "PBC"
    OBC = "OBC"


@dataclass(frozen=True)
class LadderParams:
    """Model parameters of the two-leg ladder.

    ``mu`` is the imaginary potential on the B leg, the A leg carries ``-mu``.
    ``drop_h0`` removes the identity part ``h0(k)`` from the Hamiltonian.
    """

    K: float = 1.0
    r: float = 0.0
    M: float = 0.0
    theta: float = math.pi / 2
    alpha: float = 0.0
    m: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    mu: float = 0.0
    L: int = 60
    bc: BoundaryCondition = BoundaryCondition.OBC
    drop_h0: bool = False

    def __post_init__(self):
        if not isinstance(self.bc, BoundaryCondition):
            try:
                object.__setattr__(self, "bc", BoundaryCondition(str(self.bc).strip().upper()))
            except ValueError:
                raise LadderConfigError("Unknown boundary condition %r, expected PBC or OBC" % (self.bc,))
        for key in ("K", "r", "M", "theta", "alpha", "m", "r1", "r2", "mu"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise LadderConfigError("Parameter %s must be a real number, got %r" % (key, value))
            if not math.isfinite(value):
                raise LadderConfigError("Parameter %s must be finite, got %r" % (key, value))
            object.__setattr__(self, key, float(value))
        if self.K != 1.0:
            raise LadderConfigError("K is the energy unit and must be 1, got %r" % self.K)
        if isinstance(self.L, bool) or int(self.L) != self.L or self.L < 1:
            raise LadderConfigError("L must be a positive integer, got %r" % (self.L,))
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "drop_h0", bool(self.drop_h0))

    @property
    def phase(self) -> complex:
        """Complex flux phase ``theta + i*alpha``."""
        return complex(self.theta, self.alpha)

    def with_(self, **changes) -> "LadderParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        result = {key: getattr(self, key) for key in PARAM_KEYS}
        result["bc"] = self.bc.value
        if self.drop_h0:
            result["drop_h0"] = True
        return result

    @classmethod
    def from_dict(cls, data) -> "LadderParams":
        unknown = [key for key in data if key not in PARAM_KEYS and key not in OPTIONAL_KEYS]
        if unknown:
            raise LadderConfigError("Unknown parameter key(s): %s" % ", ".join(sorted(unknown)))
        values = {}
        for key, value in data.items():
            values[key] = _coerce(key, value)
        return cls(**values)


def _coerce(key, value):
    if not isinstance(value, str):
        return value
    text = value.strip()
    try:
        if key == "L":
            number = float(text)
            if not number.is_integer():
                raise LadderConfigError("L must be an integer, got %r" % value)
            return int(number)
        if key == "bc":
            return text
        if key == "drop_h0":
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise LadderConfigError("drop_h0 must be a boolean, got %r" % value)
        return float(text)
    except ValueError:
        raise LadderConfigError("Could not read %s value %r" % (key, value))


@dataclass(frozen=True, eq=False)
class BlochCoefficients:
    """Pauli decomposition ``h(k) = h0 + hx sx + hy sy + hz sz``; arrays when ``k`` is an array."""

    h0: complex
    hx: complex
    hy: complex
    hz: complex
    k: float

    @property
    def p(self):
        """Discriminant ``P(k) = hx^2 + hy^2 + hz^2``."""
        return self.hx * self.hx + self.hy * self.hy + self.hz * self.hz


def bloch_terms(params: LadderParams, k):
    """Coefficients at real or complex momentum, returned as numpy values."""
    k = np.asarray(k)
    cos_k = np.cos(k)
    sin_k = np.sin(k)
    phase = params.phase
    if params.drop_h0:
        h0 = np.zeros_like(cos_k, dtype=complex)
    else:
        h0 = 2 * cmath.cos(phase) * cos_k + 0j
    hz = -2 * cmath.sin(phase) * sin_k - 1j * params.mu
    hx = params.M + 2 * params.r * cos_k + 2j * params.r2 * sin_k
    hy = 1j * (params.m + 2 * params.r1 * cos_k)
    return h0, hx, hy, hz


def bloch_derivative(params: LadderParams, k):
    """Momentum derivatives of ``hx, hy, hz``."""
    k = np.asarray(k)
    cos_k = np.cos(k)
    sin_k = np.sin(k)
    dhz = -2 * cmath.sin(params.phase) * cos_k
    dhx = -2 * params.r * sin_k + 2j * params.r2 * cos_k
    dhy = -2j * params.r1 * sin_k
    return dhx, dhy, dhz


def bloch(params: LadderParams, k) -> BlochCoefficients:
    h0, hx, hy, hz = bloch_terms(params, k)
    if np.ndim(k) == 0:
        return BlochCoefficients(complex(h0), complex(hx), complex(hy), complex(hz), float(k))
    return BlochCoefficients(h0, hx, hy, hz, np.asarray(k, dtype=float))


def h2x2(c: BlochCoefficients) -> np.ndarray:
    """Return ``[[h0+hz, hx-i*hy], [hx+i*hy, h0-hz]]``, stacked on the last two axes for array input."""
    h0, hx, hy, hz = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (c.h0, c.hx, c.hy, c.hz)))
    matrix = np.empty(h0.shape + (2, 2), dtype=complex)
    matrix[..., 0, 0] = h0 + hz
    matrix[..., 0, 1] = hx - 1j * hy
    matrix[..., 1, 0] = hx + 1j * hy
    matrix[..., 1, 1] = h0 - hz
    return matrix


def leg_hoppings(params: LadderParams):
    """Forward and backward leg amplitudes ``(a_fwd, a_bwd, b_fwd, b_bwd)``."""
    a_fwd = cmath.exp(complex(-params.alpha, params.theta))
    a_bwd = cmath.exp(complex(params.alpha, -params.theta))
    b_fwd = a_bwd
    b_bwd = a_fwd
    if params.drop_h0:
        shift = cmath.cos(params.phase)
        a_fwd, a_bwd, b_fwd, b_bwd = a_fwd - shift, a_bwd - shift, b_fwd - shift, b_bwd - shift
    return a_fwd, a_bwd, b_fwd, b_bwd


def real_space(params: LadderParams) -> np.ndarray:
    """Dense ``2L x 2L`` Hamiltonian; PBC adds the ``x = L -> 1`` wrap terms."""
    size = params.L
    if size < 2:
        raise LadderConfigError("Real-space construction needs L >= 2, got %i" % size)
    a, b = 0, 1
    a_fwd, a_bwd, b_fwd, b_bwd = leg_hoppings(params)
    r, r1, r2 = params.r, params.r1, params.r2
    rung_ab = params.M + params.m
    rung_ba = params.M - params.m
    # (from sublattice, to sublattice, amplitude) for hops x -> x+1 written as H[(x, s), (x+1, s')]
    forward = (
        (a, a, a_fwd),
        (b, b, b_fwd),
        (a, b, r + r1 + r2),
        (b, a, r - r1 + r2),
    )
    # H[(x+1, s), (x, s')]
    backward = (
        (a, a, a_bwd),
        (b, b, b_bwd),
        (a, b, r + r1 - r2),
        (b, a, r - r1 - r2),
    )
    matrix = np.zeros((2 * size, 2 * size), dtype=complex)
    cells = np.arange(size)
    matrix[2 * cells + a, 2 * cells + a] = -1j * params.mu
    matrix[2 * cells + b, 2 * cells + b] = 1j * params.mu
    matrix[2 * cells + a, 2 * cells + b] = rung_ab
    matrix[2 * cells + b, 2 * cells + a] = rung_ba
    bonds = size if params.bc is BoundaryCondition.PBC else size - 1
    for x in range(bonds):
        x_next = (x + 1) % size
        for s_from, s_to, amplitude in forward:
            matrix[2 * x + s_from, 2 * x_next + s_to] += amplitude
        for s_from, s_to, amplitude in backward:
            matrix[2 * x_next + s_from, 2 * x + s_to] += amplitude
    log.debug("Built %s real-space matrix of size %i", params.bc.value, 2 * size)
    return matrix


def read_config_text(text) -> configparser.ConfigParser:
    """Parse an INI document; a document without section headers is read as ``[ladder]``."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError:
        parser = read_config_text("[%s]\n%s" % (LADDER_SECTION, text))
    except configparser.Error as e:
        raise LadderConfigError("Malformed config document: %s" % e)
    unknown = [section for section in parser.sections() if section not in (LADDER_SECTION, SWEEP_SECTION)]
    if unknown:
        raise LadderConfigError("Unknown config section(s): %s" % ", ".join(unknown))
    return parser


def ladder_section(parser: configparser.ConfigParser) -> dict:
    if not parser.has_section(LADDER_SECTION):
        return {}
    return dict(parser.items(LADDER_SECTION))


def params_from_config_text(text) -> LadderParams:
    return LadderParams.from_dict(ladder_section(read_config_text(text)))


def params_to_config_text(params: LadderParams) -> str:
    lines = ["[%s]" % LADDER_SECTION]
    for key, value in params.to_dict().items():
        if isinstance(value, float):
            value = repr(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append("%s = %s" % (key, value))
    return "\n".join(lines) + "\n"
