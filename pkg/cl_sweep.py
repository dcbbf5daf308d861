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

"""Parameter sweeps: axis specification, ``[sweep]`` config parsing and the threaded cell runner."""

import logging
import queue
import threading
import time
import typing
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from cl_model import LadderConfigError, LadderParams, SWEEP_SECTION, read_config_text
from utils import VERSION

log = logging.getLogger(__name__)

SWEEP_AXES = ("r", "M", "theta", "alpha", "m", "r1", "r2", "mu")
OUTPUTS = ("bands", "winding", "gapclass", "edge", "dipr", "boundaries", "bbc")
DEFAULT_OUTPUTS = ("gapclass", "edge", "dipr", "boundaries")

STATUS_OK = "ok"
STATUS_BOUNDARY = "boundary"


@dataclass(frozen=True)
class AxisSpec:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in SWEEP_AXES:
            raise LadderConfigError("Cannot sweep %r, expected one of %s" % (self.name, ", ".join(SWEEP_AXES)))
        if self.count < 2:
            raise LadderConfigError("Axis %s needs at least 2 points, got %i" % (self.name, self.count))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text) -> "AxisSpec":
        """Read ``"<name> <min> <max> <count>"``."""
        parts = text.split()
        if len(parts) != 4:
            raise LadderConfigError("Axis must read '<name> <min> <max> <count>', got %r" % text)
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError:
            raise LadderConfigError("Could not read axis %r" % text)

    def to_text(self) -> str:
        return "%s %r %r %i" % (self.name, self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    axis1: AxisSpec
    axis2: Optional[AxisSpec]
    fixed: LadderParams
    outputs: Tuple[str, ...] = DEFAULT_OUTPUTS

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise LadderConfigError("Sweep axes must differ, both are %r" % self.axis1.name)
        unknown = [name for name in self.outputs if name not in OUTPUTS]
        if unknown:
            raise LadderConfigError("Unknown sweep output(s): %s" % ", ".join(unknown))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.axis1.count, self.axis2.count if self.axis2 is not None else 1

    def cells(self):
        """``(index, p1, p2, params)`` in row-major order, axis2 varying fastest."""
        second = self.axis2.values() if self.axis2 is not None else [None]
        index = 0
        for p1 in self.axis1.values():
            for p2 in second:
                changes = {self.axis1.name: float(p1)}
                if p2 is not None:
                    changes[self.axis2.name] = float(p2)
                yield index, float(p1), None if p2 is None else float(p2), self.fixed.with_(**changes)
                index += 1

    def to_dict(self) -> dict:
        return {
            "axis1": self.axis1.to_text(),
            "axis2": self.axis2.to_text() if self.axis2 is not None else None,
            "outputs": list(self.outputs),
        }


def sweep_from_config_text(text, fixed: LadderParams) -> Optional[SweepSpec]:
    parser = read_config_text(text)
    if not parser.has_section(SWEEP_SECTION):
        return None
    section = dict(parser.items(SWEEP_SECTION))
    unknown = [key for key in section if key not in ("axis1", "axis2", "outputs")]
    if unknown:
        raise LadderConfigError("Unknown [sweep] key(s): %s" % ", ".join(sorted(unknown)))
    if "axis1" not in section:
        raise LadderConfigError("[sweep] needs axis1")
    axis2 = AxisSpec.parse(section["axis2"]) if section.get("axis2") else None
    outputs = DEFAULT_OUTPUTS
    if section.get("outputs"):
        outputs = tuple(item.strip() for item in section["outputs"].split(",") if item.strip())
    return SweepSpec(AxisSpec.parse(section["axis1"]), axis2, fixed, outputs)


@dataclass
class CellResult:
    index: int
    p1: float
    p2: Optional[float]
    status: str = STATUS_OK
    values: dict = field(default_factory=dict)


@dataclass
class RunManifest:
    config: dict
    nk: int
    L: int
    cells: List[CellResult]
    wall_time: float = 0.0
    version: str = VERSION

    @property
    def failed(self) -> int:
        return sum(1 for cell in self.cells if cell.status.startswith("error"))

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "grid": {"Nk": self.nk, "L": self.L},
            "wall_time": round(self.wall_time, 3),
            "cells": [{"index": cell.index, "p1": cell.p1, "p2": cell.p2, "status": cell.status}
                      for cell in self.cells],
        }


class SweepRunner:
    """Evaluates sweep cells on worker threads and returns results in cell-index order."""

    def __init__(self, evaluate: Callable[..., CellResult], threads: int = 1):
        if threads < 1:
            raise LadderConfigError("threads must be >= 1, got %i" % threads)
        self.__evaluate = evaluate
        self.__threads = threads
        self.__queue = queue.Queue()
        self.__results = {}
        self.__lock = threading.Lock()

    @property
    def threads(self) -> int:
        return self.__threads

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger('SweepRunner')

    @property
    def log_level(self) -> str:
        levels = {0: 'NOTSET', 10: 'DEBUG', 20: 'INFO', 30: 'WARNING', 40: 'ERROR', 50: 'CRITICAL'}
        return levels.get(self.logger.level)

    @log_level.setter
    def log_level(self, value: typing.Union[int, str]):
        self.logger.setLevel(value)
        self.logger.info('Log level set to %s', self.log_level)

    def __worker(self, number):
        logger = self.logger.getChild('worker.%i' % number)
        while True:
            try:
                index, p1, p2, params = self.__queue.get_nowait()
            except queue.Empty:
                break
            try:
                result = self.__evaluate(index, p1, p2, params)
            except Exception as e:
                logger.error("Cell %i (%s, %s) failed: %s", index, p1, p2, e)
                result = CellResult(index, p1, p2, "error:%s" % type(e).__name__)
            with self.__lock:
                self.__results[index] = result
            self.__queue.task_done()

    def run(self, cells) -> List[CellResult]:
        cells = list(cells)
        for cell in cells:
            self.__queue.put(cell)
        started = time.monotonic()
        workers = [threading.Thread(target=self.__worker, daemon=True, args=(n,))
                   for n in range(min(self.__threads, max(1, len(cells))))]
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
        self.logger.info("Evaluated %i cell(s) on %i thread(s) in %.2fs", len(cells), len(workers),
                         time.monotonic() - started)
        with self.__lock:
            return [self.__results[cell[0]] for cell in cells]
