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

"""Command-line front end: ``creutz-ladder <subcommand>`` writing CSV/JSON artifacts."""

import argparse
import logging
import sys
import time
from os import path

import numpy as np

from cl_analytic import SingularTransferMatrixError, boundary_overlay, m_r1_boundaries, mu_boundaries, \
    r2_boundaries, transfer_eigs
from cl_linalg import TOL_EIG
from cl_localization import band_dipr, density_profile, mode_dipr
from cl_model import BoundaryCondition, LadderConfigError, LadderException, LadderParams, ladder_section, \
    read_config_text
from cl_spectral import DEFAULT_NK, GapClass, PhaseLabel, SpectrumProximityError, WindingResolutionError, \
    bands, bbc_check, classify_gap, nhse_predicate, obc_spectrum, reference_grid, winding_number
from cl_sweep import AxisSpec, CellResult, RunManifest, STATUS_BOUNDARY, SweepRunner, sweep_from_config_text
from utils import VERSION, parse_complex, write_csv, write_json

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULT_L = 60
ALPHA_DEMO_L = 200
TRANSFER_AXES = ("M", "r", "theta", "alpha")

PHASE_COLUMNS = ("p1", "p2", "gap_label", "edge_count", "Ibar_plus", "Ibar_minus", "product", "topology")


def read_config(args):
    """Return ``(params, config_text)`` with flag overrides applied."""
    text = ""
    if args.config:
        try:
            with open(args.config) as f:
                text = f.read()
        except OSError as e:
            raise LadderConfigError("Cannot read config %s: %s" % (args.config, e))
    data = ladder_section(read_config_text(text)) if text else {}
    params = LadderParams.from_dict(data)
    if args.L is not None:
        params = params.with_(L=args.L)
    elif "L" not in data:
        params = params.with_(L=ALPHA_DEMO_L if params.alpha != 0 else DEFAULT_L)
    if args.no_h0:
        params = params.with_(drop_h0=True)
    return params, text


def _output(args, name):
    return path.join(args.out, name)


def _sweep_axis(args, text, params):
    if args.axis:
        return AxisSpec.parse(args.axis)
    sweep = sweep_from_config_text(text, params) if text else None
    if sweep is None:
        raise LadderConfigError("No sweep axis given, use --axis or a [sweep] section")
    return sweep.axis1


def cmd_spectrum(args):
    params, _ = read_config(args)
    params = params.with_(bc=BoundaryCondition.OBC)
    spectrum = obc_spectrum(params, args.nk, tol=args.tol)
    band_structure = bands(params, args.nk)
    write_csv(_output(args, "pbc_bands.csv"), ("k", "ReE+", "ImE+", "ReE-", "ImE-"), band_structure.rows())
    diprs = mode_dipr(spectrum)
    rows = [(n, value.real, value.imag, diprs[n], bool(spectrum.is_edge[n]))
            for n, value in enumerate(spectrum.values)]
    write_csv(_output(args, "obc_spectrum.csv"), ("index", "ReE", "ImE", "dipr", "is_edge"), rows)
    rho_plus, rho_minus = density_profile(spectrum)
    write_csv(_output(args, "profile.csv"), ("x", "rho_plus", "rho_minus"),
              ((x + 1, rho_plus[x], rho_minus[x]) for x in range(params.L)))
    log.info("Spectrum of L=%i with %i edge mode(s)", params.L, spectrum.edge_count)
    return EXIT_OK


def _phase_cell(sweep, args):
    outputs = sweep.outputs

    def evaluate(index, p1, p2, params):
        values = {}
        status = "ok"
        label = classify_gap(params, args.nk)
        count = None
        if "edge" in outputs or "dipr" in outputs:
            spectrum = obc_spectrum(params, args.nk, tol=args.tol)
            count = spectrum.edge_count
            if "dipr" in outputs:
                report = band_dipr(spectrum)
                values.update(Ibar_plus=report.Ibar_plus, Ibar_minus=report.Ibar_minus, product=report.product)
        if count is not None:
            label = PhaseLabel.from_edge_count(label.gap, count)
            values["edge_count"] = count
        values["gap_label"] = label.gap.value
        values["topology"] = label.topological.value
        if "winding" in outputs:
            values["nhse"] = nhse_predicate(params, args.nk)
        if label.gap is GapClass.BOUNDARY:
            status = STATUS_BOUNDARY
        return CellResult(index, p1, p2, status, values)

    return evaluate


def cmd_phase_diagram(args):
    params, text = read_config(args)
    params = params.with_(bc=BoundaryCondition.OBC)
    sweep = sweep_from_config_text(text, params) if text else None
    if sweep is None:
        raise LadderConfigError("phase-diagram needs a [sweep] section in the config")
    if sweep.axis2 is None:
        raise LadderConfigError("phase-diagram needs two sweep axes")
    for ignored in ("bands",):
        if ignored in sweep.outputs:
            log.warning("Output %r has no per-cell meaning in a phase diagram and is ignored", ignored)
    started = time.monotonic()
    runner = SweepRunner(_phase_cell(sweep, args), threads=args.threads)
    results = runner.run(sweep.cells())

    columns = PHASE_COLUMNS + (("nhse",) if "winding" in sweep.outputs else ())
    rows = [[result.p1, result.p2] + [result.values.get(column) for column in columns[2:]] for result in results]
    write_csv(_output(args, "phase.csv"), columns, rows)

    if "boundaries" in sweep.outputs:
        overlay = boundary_overlay(params, sweep.axis1.name, sweep.axis2.name)
        if overlay is None:
            log.info("No analytic boundaries for axes %s, %s", sweep.axis1.name, sweep.axis2.name)
        else:
            samples = {axis.name: np.linspace(axis.start, axis.stop, 10 * axis.count)
                       for axis in (sweep.axis1, sweep.axis2)}
            write_csv(_output(args, "boundaries.csv"), ("sweep_param", "critical_value", "curve_name"),
                      overlay.rows_on(samples))
    if "bbc" in sweep.outputs:
        _write_bbc(args, params, sweep.axis1)

    manifest = RunManifest({"ladder": params.to_dict(), "sweep": sweep.to_dict()}, args.nk, params.L, results,
                           time.monotonic() - started)
    write_json(_output(args, "manifest.json"), manifest.to_dict())
    if manifest.failed == len(results):
        log.error("All %i cells failed", len(results))
        return EXIT_NUMERICAL
    if manifest.failed:
        log.warning("%i of %i cells failed, see manifest.json", manifest.failed, len(results))
    return EXIT_OK


def cmd_winding(args):
    params, _ = read_config(args)
    if args.eref:
        energies = [parse_complex(text) for text in args.eref]
    else:
        energies = list(reference_grid(params, args.nk, args.grid))
    rows = []
    for energy in energies:
        try:
            result = winding_number(params, energy, args.nk)
            rows.append((energy.real, energy.imag, result.w, result.raw))
        except WindingResolutionError as e:
            log.warning("%s", e)
            rows.append((energy.real, energy.imag, None, e.raw))
        except SpectrumProximityError as e:
            log.warning("%s", e)
            rows.append((energy.real, energy.imag, None, None))
    write_csv(_output(args, "winding.csv"), ("ReEref", "ImEref", "w", "raw"), rows)
    return EXIT_OK


def _write_bbc(args, params, axis):
    report = bbc_check(params, axis.name, axis.values(), args.nk, params.L)
    content = report.to_dict()
    content["config"] = params.to_dict()
    content["version"] = VERSION
    write_json(_output(args, "bbc.json"), content)
    return report


def cmd_bbc(args):
    params, text = read_config(args)
    _write_bbc(args, params, _sweep_axis(args, text, params))
    return EXIT_OK


def cmd_transfer_matrix(args):
    params, text = read_config(args)
    axis = _sweep_axis(args, text, params)
    if axis.name not in TRANSFER_AXES:
        raise LadderConfigError("transfer-matrix sweeps one of %s, got %r" % (", ".join(TRANSFER_AXES), axis.name))
    rows = []
    for value in axis.values():
        point = params.with_(**{axis.name: float(value)})
        try:
            eigs = transfer_eigs(point.M, point.r, point.theta, point.alpha, args.sublattice)
        except SingularTransferMatrixError as e:
            log.warning("%s at %s=%s", e, axis.name, value)
            rows.append((value, None, None, None, None, None, None, "Singular"))
            continue
        rows.append((value, eigs.lambda1.real, eigs.lambda1.imag, eigs.lambda2.real, eigs.lambda2.imag,
                     abs(eigs.lambda1), abs(eigs.lambda2), eigs.regime.value))
    write_csv(_output(args, "transfer.csv"),
              (axis.name, "ReL1", "ImL1", "ReL2", "ImL2", "absL1", "absL2", "regime"), rows)
    return EXIT_OK


def cmd_boundaries(args):
    params, _ = read_config(args)
    if args.kind == "m_r1":
        boundary_set = m_r1_boundaries(params.M, params.r, params.theta)
    elif args.kind == "mu":
        boundary_set = mu_boundaries(params.theta)
    else:
        boundary_set = r2_boundaries(params.r, params.theta)
    start, stop, count = args.range
    count = int(count)
    if count < 2:
        raise LadderConfigError("--range needs at least 2 points")
    samples = np.linspace(start, stop, count)
    write_csv(_output(args, "boundaries.csv"), ("sweep_param", "critical_value", "curve_name"),
              boundary_set.rows(samples))
    return EXIT_OK


def add_common_arguments(parser, suppress=False):
    """Flags shared by every subcommand; the subcommand copies only set what is given."""

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--config", default=default(None),
                        help="INI config with [ladder] and optional [sweep] sections")
    parser.add_argument("--out", default=default("."), help="output directory")
    parser.add_argument("--nk", type=int, default=default(DEFAULT_NK), help="momentum grid size")
    parser.add_argument("--L", type=int, default=default(None), help="unit cells of the open ladder")
    parser.add_argument("--threads", type=int, default=default(1), help="sweep worker threads")
    parser.add_argument("--tol", type=float, default=default(TOL_EIG), help="eigensolver residual tolerance")
    parser.add_argument("--no-h0", dest="no_h0", action="store_true", default=default(False),
                        help="drop the identity term h0(k)")
    parser.add_argument("--log-level", default=default("WARNING"),
                        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False),
                        help="same as --log-level INFO")


def build_parser():
    parser = argparse.ArgumentParser(prog="creutz-ladder",
                                     description="Non-Hermitian Creutz ladder spectra, topology and phase diagrams.")
    add_common_arguments(parser)
    parser.add_argument("--version", action="version", version="%(prog)s " + VERSION)
    common = argparse.ArgumentParser(add_help=False)
    add_common_arguments(common, suppress=True)
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("spectrum", parents=[common], help="PBC bands, OBC spectrum and band densities").set_defaults(
        handler=cmd_spectrum)
    commands.add_parser("phase-diagram", parents=[common], help="two-axis sweep from the [sweep] section").set_defaults(
        handler=cmd_phase_diagram)

    winding = commands.add_parser("winding", parents=[common], help="spectral winding numbers")
    winding.add_argument("--eref", action="append", help="reference energy, repeatable (e.g. -1.5+0.2j)")
    winding.add_argument("--grid", type=int, default=16, help="auto-grid resolution inside the spectrum hull")
    winding.set_defaults(handler=cmd_winding)

    bbc = commands.add_parser("bbc", parents=[common], help="PBC versus OBC transitions along one axis")
    bbc.add_argument("--axis", help="'<name> <min> <max> <count>', defaults to [sweep] axis1")
    bbc.set_defaults(handler=cmd_bbc)

    transfer = commands.add_parser("transfer-matrix", parents=[common], help="zero-energy transfer-matrix eigenvalues")
    transfer.add_argument("--axis", help="'<name> <min> <max> <count>', defaults to [sweep] axis1")
    transfer.add_argument("--sublattice", choices=("A", "B"), default="A")
    transfer.set_defaults(handler=cmd_transfer_matrix)

    boundaries = commands.add_parser("boundaries", parents=[common], help="analytic phase-boundary curves")
    boundaries.add_argument("--kind", choices=("m_r1", "mu", "r2"), required=True)
    boundaries.add_argument("--range", nargs=3, type=float, default=(0.0, 4.0, 201.0),
                            metavar=("MIN", "MAX", "COUNT"), help="samples of each curve's swept parameter")
    boundaries.set_defaults(handler=cmd_boundaries)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    logging.basicConfig(level="INFO" if args.verbose and args.log_level == "WARNING" else args.log_level,
                        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s")
    try:
        return args.handler(args)
    except (LadderConfigError, ValueError) as e:
        log.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except LadderException as e:
        log.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
