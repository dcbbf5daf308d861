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

import csv
import logging
import math
from os import makedirs, path

from simplejson import dumps

VERSION = "0.4.0"

log = logging.getLogger(__name__)


def format_value(value):
    """Render one CSV field. Floats use 12 significant digits so output files are byte-stable."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if math.isnan(value):
            return "nan"
        text = "%.12g" % value
        # avoid "-0" rows for values that round to zero
        return "0" if text in ("-0", "0") else text
    return str(value)


def ensure_directory(directory):
    if directory and not path.isdir(directory):
        log.debug("Creating output directory %s", directory)
        makedirs(directory, exist_ok=True)


def write_csv(file_path, header, rows):
    ensure_directory(path.dirname(file_path))
    count = 0
    with open(file_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
            count += 1
    log.info("Written %s (%i rows)", file_path, count)
    return file_path


def read_csv(file_path):
    with open(file_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        return header, [row for row in reader]


def write_json(file_path, content):
    ensure_directory(path.dirname(file_path))
    with open(file_path, "w") as f:
        f.write(dumps(content, sort_keys=True, indent=2, ignore_nan=True))
        f.write("\n")
    log.info("Written %s", file_path)
    return file_path


def parse_complex(text):
    """Parse a complex energy given as ``1.5``, ``-1.5+0.2j``, ``1.5+0.2i`` or ``1.5,0.2``."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    cleaned = text.strip().replace(" ", "")
    if "," in cleaned:
        real, imag = cleaned.split(",", 1)
        return complex(float(real), float(imag))
    return complex(cleaned.replace("i", "j"))
