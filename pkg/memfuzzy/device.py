# -*- coding: utf-8 -*-

# Copyright 2020 ICON Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Memristor and crossbar simulation

A memristor is modeled by linear ion drift: the dopant state x in [0, 1]
moves by k_drift * voltage * duration and the memristance interpolates
linearly between r_off (x = 0) and r_on (x = 1). A crossbar stores one
weight per cell through an affine map of the cell conductance and reads
W.u (or W^T.u) in a single analog step.
"""

import logging
import threading
from dataclasses import dataclass, replace
from typing import List, Union

import numpy as np

from .constants import (
    R_ON, R_OFF, K_DRIFT, V_READ, V_WRITE, T_WRITE, PULSE_BUDGET, W_MAX,
    BACKEND_IDEAL, BACKEND_DEVICE, COLUMNS_AS_INPUTS, ROWS_AS_INPUTS,
)
from .exception import (
    InvalidParamsException, DimensionMismatch, IndexOutOfRange,
    TargetOutOfRange, NoConvergence,
)


@dataclass(frozen=True)
class DeviceParams:
    r_on: float = R_ON
    r_off: float = R_OFF
    k_drift: float = K_DRIFT
    v_read: float = V_READ
    v_write: float = V_WRITE
    t_write: float = T_WRITE
    pulse_budget: int = PULSE_BUDGET
    w_max: float = W_MAX

    def __post_init__(self):
        if not 0.0 < self.r_on < self.r_off:
            raise InvalidParamsException(
                f"Invalid resistance bounds: r_on={self.r_on}, r_off={self.r_off}")
        if self.k_drift <= 0.0:
            raise InvalidParamsException(f"Invalid k_drift: {self.k_drift}")
        if self.v_read <= 0.0 or self.v_write <= 0.0 or self.t_write <= 0.0:
            raise InvalidParamsException("Read/write voltages and write duration must be positive")
        if self.pulse_budget < 1:
            raise InvalidParamsException(f"Invalid pulse budget: {self.pulse_budget}")
        if self.w_max <= 0.0:
            raise InvalidParamsException(f"Invalid w_max: {self.w_max}")

    @property
    def g_min(self) -> float:
        return 1.0 / self.r_off

    @property
    def g_max(self) -> float:
        return 1.0 / self.r_on


@dataclass(frozen=True)
class MemristorState:
    x: float
    r_on: float = R_ON
    r_off: float = R_OFF
    k_drift: float = K_DRIFT

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise InvalidParamsException(f"Dopant state out of [0, 1]: {self.x}")
        if not 0.0 < self.r_on < self.r_off:
            raise InvalidParamsException(
                f"Invalid resistance bounds: r_on={self.r_on}, r_off={self.r_off}")


@dataclass(frozen=True)
class ProgramReport:
    pulses_used: int
    achieved_weight: float
    residual: float


def memristance(cell: MemristorState) -> float:
    return cell.r_on * cell.x + cell.r_off * (1.0 - cell.x)


def apply_pulse(cell: MemristorState, voltage: float, duration: float) -> MemristorState:
    """Apply one write pulse; positive voltage raises x and lowers the memristance

    Saturation at either bound is silent.
    """
    if duration < 0.0:
        raise InvalidParamsException(f"Negative pulse duration: {duration}")

    x = cell.x + cell.k_drift * voltage * duration
    return replace(cell, x=min(1.0, max(0.0, x)))


class Crossbar:
    """Grid of memristors read as a non-negative weight matrix"""

    backend = BACKEND_DEVICE

    def __init__(self, rows: int, cols: int, params: DeviceParams = DeviceParams()):
        if rows < 1 or cols < 1:
            raise InvalidParamsException(f"Invalid crossbar size: {rows}x{cols}")

        self._rows = rows
        self._cols = cols
        self._params = params
        self._x = np.zeros((rows, cols), dtype=np.float64)
        self._lock = threading.Lock()

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple:
        return self._rows, self._cols

    @property
    def params(self) -> DeviceParams:
        return self._params

    @property
    def v_read(self) -> float:
        return self._params.v_read

    @property
    def g_min(self) -> float:
        return self._params.g_min

    @property
    def g_max(self) -> float:
        return self._params.g_max

    @property
    def w_max(self) -> float:
        return self._params.w_max

    def _check_index(self, row: int, col: int):
        if not (0 <= row < self._rows and 0 <= col < self._cols):
            raise IndexOutOfRange(f"Cell ({row}, {col}) outside {self._rows}x{self._cols} crossbar")

    def cell(self, row: int, col: int) -> MemristorState:
        self._check_index(row, col)
        p = self._params
        return MemristorState(float(self._x[row, col]), p.r_on, p.r_off, p.k_drift)

    def weight_of(self, g: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return self.w_max * (g - self.g_min) / (self.g_max - self.g_min)

    def conductances(self) -> np.ndarray:
        p = self._params
        return 1.0 / (p.r_on * self._x + p.r_off * (1.0 - self._x))

    def weight_of_cell(self, row: int, col: int) -> float:
        return float(self.weight_of(1.0 / memristance(self.cell(row, col))))

    def program_weight(self, row: int, col: int, target: float, tol: float) -> ProgramReport:
        """Write-verify loop driving one cell to target within tol

        Pulses have fixed amplitude; their sign follows the weight error and
        their duration halves whenever the error changes sign.
        """
        if not 0.0 <= target <= self.w_max:
            raise TargetOutOfRange(f"Target weight {target} outside [0, {self.w_max}]")
        if tol <= 0.0:
            raise InvalidParamsException(f"Invalid tolerance: {tol}")

        p = self._params
        with self._lock:
            cell = self.cell(row, col)
            duration = p.t_write
            last_sign = 0
            pulses = 0

            error = target - self.weight_of(1.0 / memristance(cell))
            while abs(error) > tol:
                if pulses >= p.pulse_budget:
                    raise NoConvergence(
                        f"Cell ({row}, {col}) missed target {target} by {abs(error)} "
                        f"after {pulses} pulses")

                sign = 1 if error > 0.0 else -1
                if last_sign != 0 and sign != last_sign:
                    duration *= 0.5

                cell = apply_pulse(cell, sign * p.v_write, duration)
                last_sign = sign
                pulses += 1
                error = target - self.weight_of(1.0 / memristance(cell))

            self._x[row, col] = cell.x

        achieved = target - error
        logging.debug(f"Crossbar.program_weight() ({row}, {col}) target={target} pulses={pulses}")
        return ProgramReport(pulses, float(achieved), float(abs(error)))

    def read_vmm(self, inputs, orientation: str = COLUMNS_AS_INPUTS) -> np.ndarray:
        """Read W.u (columns as inputs) or W^T.u (rows as inputs)

        inputs may be one vector or a batch with one vector per row.
        """
        u, single = _check_inputs(inputs, self.shape, orientation)

        # Inputs are applied as read voltages; a reference line at g_min
        # removes the conductance offset from the summed currents.
        g = self.conductances()
        voltages = u * self.v_read
        if orientation == COLUMNS_AS_INPUTS:
            currents = voltages @ g.T
        else:
            currents = voltages @ g
        offset = self.g_min * u.sum(axis=1, keepdims=True)
        out = self.w_max * (currents / self.v_read - offset) / (self.g_max - self.g_min)

        return out[0] if single else out

    def snapshot_weights(self) -> np.ndarray:
        weights = self.weight_of(self.conductances())
        weights.setflags(write=False)
        return weights


class IdealCrossbar:
    """Signed weight matrix with exact writes, bypassing the device law"""

    backend = BACKEND_IDEAL

    def __init__(self, rows: int, cols: int):
        if rows < 1 or cols < 1:
            raise InvalidParamsException(f"Invalid crossbar size: {rows}x{cols}")

        self._w = np.zeros((rows, cols), dtype=np.float64)
        self._lock = threading.Lock()

    @property
    def rows(self) -> int:
        return self._w.shape[0]

    @property
    def cols(self) -> int:
        return self._w.shape[1]

    @property
    def shape(self) -> tuple:
        return self._w.shape

    def _check_index(self, row: int, col: int):
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise IndexOutOfRange(f"Cell ({row}, {col}) outside {self.rows}x{self.cols} crossbar")

    def weight_of_cell(self, row: int, col: int) -> float:
        self._check_index(row, col)
        return float(self._w[row, col])

    def program_weight(self, row: int, col: int, target: float, tol: float) -> ProgramReport:
        self._check_index(row, col)
        if not np.isfinite(target):
            raise TargetOutOfRange(f"Non-finite target weight: {target}")
        if tol <= 0.0:
            raise InvalidParamsException(f"Invalid tolerance: {tol}")

        with self._lock:
            self._w[row, col] = target

        return ProgramReport(0, float(target), 0.0)

    def read_vmm(self, inputs, orientation: str = COLUMNS_AS_INPUTS) -> np.ndarray:
        u, single = _check_inputs(inputs, self.shape, orientation)

        if orientation == COLUMNS_AS_INPUTS:
            out = u @ self._w.T
        else:
            out = u @ self._w

        return out[0] if single else out

    def snapshot_weights(self) -> np.ndarray:
        weights = self._w.copy()
        weights.setflags(write=False)
        return weights


def _check_inputs(inputs, shape: tuple, orientation: str):
    if orientation == COLUMNS_AS_INPUTS:
        dim = shape[1]
    elif orientation == ROWS_AS_INPUTS:
        dim = shape[0]
    else:
        raise InvalidParamsException(f"Invalid orientation: {orientation}")

    u = np.asarray(inputs, dtype=np.float64)
    single = u.ndim == 1
    u = np.atleast_2d(u)
    if u.ndim != 2 or u.shape[1] != dim:
        raise DimensionMismatch(
            f"Input length {u.shape[-1]} does not match {orientation} dimension {dim}")
    if not np.all(np.isfinite(u)):
        raise InvalidParamsException("Crossbar inputs must be finite")

    return u, single


def create_crossbar(rows: int, cols: int, backend: str = BACKEND_DEVICE,
                    params: DeviceParams = DeviceParams()) -> Union[Crossbar, IdealCrossbar]:
    if backend == BACKEND_DEVICE:
        return Crossbar(rows, cols, params)
    if backend == BACKEND_IDEAL:
        return IdealCrossbar(rows, cols)

    raise InvalidParamsException(f"Invalid backend: {backend}")


def program_matrix(xbar: Union[Crossbar, IdealCrossbar], matrix, tol: float) -> List[ProgramReport]:
    """Program every cell of xbar with the matching entry of matrix"""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != xbar.shape:
        raise DimensionMismatch(f"Matrix shape {matrix.shape} does not match crossbar {xbar.shape}")

    logging.debug(f"program_matrix() start: {matrix.shape}")
    reports = [
        xbar.program_weight(row, col, float(matrix[row, col]), tol)
        for row in range(matrix.shape[0])
        for col in range(matrix.shape[1])
    ]
    logging.debug(f"program_matrix() end: {sum(r.pulses_used for r in reports)} pulses")

    return reports
