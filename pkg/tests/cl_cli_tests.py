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
import tempfile
import unittest
from os import path

from simplejson import loads

from cl_cli import EXIT_CONFIG, EXIT_OK, PHASE_COLUMNS, main
from utils import read_csv

TOPOLOGICAL = "[ladder]\nr = 0.5\nM = 0.25\ntheta = %r\nL = 30\n" % (math.pi / 2)
CROSS_HOPPING = "[ladder]\nr = 1.5\nM = 1.5\ntheta = 0\nr2 = 0.5\n"
PHASE_DIAGRAM = """[ladder]
r = 1
theta = %r
L = 20

[sweep]
axis1 = M 0.5 2.5 3
axis2 = mu 0 1 2
outputs = gapclass, edge, dipr, boundaries
""" % (math.pi / 2)


class CliTests(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def write_config(self, text, name="ladder.ini"):
        file_path = path.join(self.directory.name, name)
        with open(file_path, "w") as f:
            f.write(text)
        return file_path

    def out(self, name="out"):
        return path.join(self.directory.name, name)

    def run_cli(self, config_text, *arguments, out=None):
        config = self.write_config(config_text)
        return main(["--config", config, "--out", out or self.out(), "--nk", "256"] + list(arguments))

    def test_spectrum(self):
        self.assertEqual(self.run_cli(TOPOLOGICAL, "spectrum"), EXIT_OK)
        header, rows = read_csv(path.join(self.out(), "obc_spectrum.csv"))
        self.assertEqual(header, ["index", "ReE", "ImE", "dipr", "is_edge"])
        self.assertEqual(len(rows), 60)
        self.assertEqual(sum(1 for row in rows if row[4] == "true"), 2)
        _, bands = read_csv(path.join(self.out(), "pbc_bands.csv"))
        self.assertEqual(len(bands), 256)
        _, profile = read_csv(path.join(self.out(), "profile.csv"))
        self.assertEqual([row[0] for row in profile], [str(x) for x in range(1, 31)])

    def test_spectrum_is_reproducible(self):
        self.run_cli(TOPOLOGICAL, "spectrum", out=self.out("first"))
        self.run_cli(TOPOLOGICAL, "spectrum", out=self.out("second"))
        for name in ("pbc_bands.csv", "obc_spectrum.csv", "profile.csv"):
            with open(path.join(self.out("first"), name)) as f:
                first = f.read()
            with open(path.join(self.out("second"), name)) as f:
                second = f.read()
            self.assertEqual(first, second)

    def test_single_cell_ladder(self):
        self.assertEqual(self.run_cli("[ladder]\nr = 1\nM = 1\nL = 1\n", "spectrum"), EXIT_CONFIG)

    def test_unknown_config_key(self):
        self.assertEqual(self.run_cli("[ladder]\nr = 1\nbeta = 2\n", "spectrum"), EXIT_CONFIG)

    def test_missing_config_file(self):
        code = main(["--config", path.join(self.directory.name, "absent.ini"), "--out", self.out(), "spectrum"])
        self.assertEqual(code, EXIT_CONFIG)

    def test_bad_arguments(self):
        self.assertEqual(main(["boundaries", "--kind", "sideways"]), EXIT_CONFIG)

    def test_one_point_sweep(self):
        text = "[ladder]\nr = 1\n[sweep]\naxis1 = M 1 1 1\naxis2 = mu 0 1 1\n"
        self.assertEqual(self.run_cli(text, "phase-diagram"), EXIT_CONFIG)

    def test_phase_diagram(self):
        self.assertEqual(self.run_cli(PHASE_DIAGRAM, "phase-diagram", "--threads", "2"), EXIT_OK)
        header, rows = read_csv(path.join(self.out(), "phase.csv"))
        self.assertEqual(header, list(PHASE_COLUMNS))
        self.assertEqual(len(rows), 6)
        self.assertEqual([(row[0], row[1]) for row in rows[:2]], [("0.5", "0"), ("0.5", "1")])
        _, boundaries = read_csv(path.join(self.out(), "boundaries.csv"))
        self.assertIn("mu_plus", {row[2] for row in boundaries})
        with open(path.join(self.out(), "manifest.json")) as f:
            manifest = loads(f.read())
        self.assertEqual(len(manifest["cells"]), 6)
        self.assertTrue(all(cell["status"] in ("ok", "boundary") for cell in manifest["cells"]))
        self.assertEqual(manifest["grid"]["L"], 20)

    def test_phase_diagram_thread_count_does_not_change_results(self):
        serial_code = self.run_cli(PHASE_DIAGRAM, "phase-diagram", "--threads", "1", out=self.out("serial"))
        parallel_code = self.run_cli(PHASE_DIAGRAM, "--threads", "3", "phase-diagram", out=self.out("parallel"))
        self.assertEqual((serial_code, parallel_code), (EXIT_OK, EXIT_OK))
        with open(path.join(self.out("serial"), "phase.csv")) as f:
            serial = f.read()
        with open(path.join(self.out("parallel"), "phase.csv")) as f:
            parallel = f.read()
        self.assertEqual(serial, parallel)

    def test_shared_flags_follow_the_subcommand(self):
        config = self.write_config(TOPOLOGICAL)
        code = main(["spectrum", "--config", config, "--out", self.out(), "--nk", "256", "--L", "20"])
        self.assertEqual(code, EXIT_OK)
        _, rows = read_csv(path.join(self.out(), "obc_spectrum.csv"))
        self.assertEqual(len(rows), 40)
        _, bands = read_csv(path.join(self.out(), "pbc_bands.csv"))
        self.assertEqual(len(bands), 256)

    def test_shared_flags_mix_positions(self):
        config = self.write_config(TOPOLOGICAL)
        code = main(["--nk", "256", "--out", self.out(), "spectrum", "--config", config, "--log-level", "ERROR"])
        self.assertEqual(code, EXIT_OK)
        _, bands = read_csv(path.join(self.out(), "pbc_bands.csv"))
        self.assertEqual(len(bands), 256)
        _, rows = read_csv(path.join(self.out(), "obc_spectrum.csv"))
        self.assertEqual(len(rows), 60)

    def test_winding(self):
        code = self.run_cli(CROSS_HOPPING, "winding", "--eref=-1.5", "--eref=20+20j")
        self.assertEqual(code, EXIT_OK)
        header, rows = read_csv(path.join(self.out(), "winding.csv"))
        self.assertEqual(header, ["ReEref", "ImEref", "w", "raw"])
        self.assertEqual([row[2] for row in rows], ["2", "0"])

    def test_winding_grid_of_hermitian_ladder(self):
        self.assertEqual(self.run_cli(TOPOLOGICAL, "winding", "--grid", "4"), EXIT_OK)
        _, rows = read_csv(path.join(self.out(), "winding.csv"))
        self.assertEqual(len(rows), 16)
        self.assertEqual({row[2] for row in rows}, {"0"})

    def test_bbc(self):
        text = "[ladder]\nr = 1\ntheta = %r\nL = 100\n" % (math.pi / 2)
        self.assertEqual(self.run_cli(text, "bbc", "--axis", "M 0 4.9 50"), EXIT_OK)
        with open(path.join(self.out(), "bbc.json")) as f:
            report = loads(f.read())
        self.assertTrue(report["conventional_bbc"])
        self.assertEqual(report["axis"], "M")
        self.assertEqual(report["config"]["L"], 100)

    def test_bbc_needs_axis(self):
        self.assertEqual(self.run_cli(TOPOLOGICAL, "bbc"), EXIT_CONFIG)

    def test_transfer_matrix(self):
        text = "[ladder]\nr = 1\ntheta = %r\nalpha = 2\n" % (math.pi / 2)
        self.assertEqual(self.run_cli(text, "transfer-matrix", "--axis", "M 0 4 5"), EXIT_OK)
        header, rows = read_csv(path.join(self.out(), "transfer.csv"))
        self.assertEqual(header[0], "M")
        self.assertEqual(len(rows), 5)
        self.assertEqual(rows[1][-1], "BothInside")
        self.assertEqual(rows[3][-1], "Split")

    def test_transfer_matrix_axis(self):
        self.assertEqual(self.run_cli(TOPOLOGICAL, "transfer-matrix", "--axis", "mu 0 1 3"), EXIT_CONFIG)

    def test_boundaries(self):
        text = "[ladder]\nr = 1\ntheta = %r\n" % (math.pi / 3)
        self.assertEqual(self.run_cli(text, "boundaries", "--kind", "mu", "--range", "0", "4", "5"), EXIT_OK)
        header, rows = read_csv(path.join(self.out(), "boundaries.csv"))
        self.assertEqual(header, ["sweep_param", "critical_value", "curve_name"])
        self.assertEqual(sum(1 for row in rows if row[2] == "mu_plus"), 5)
        self.assertIn(["2", "1", "mu_minus"], rows)


if __name__ == '__main__':
    unittest.main()
