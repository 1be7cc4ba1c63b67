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

"""McCulloch-Pitts XOR reference network on signed-weight crossbars"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .constants import BACKEND_IDEAL, COLUMNS_AS_INPUTS, ROWS_AS_INPUTS
from .device import IdealCrossbar, create_crossbar, program_matrix
from .exception import InvalidParamsException

MP_S = ((2.0, -1.0), (-1.0, 2.0))
# [2, 2] is the smallest vector making the output unit an OR
MP_A = (2.0, 2.0)
MP_THRESHOLD = 2.0


@dataclass(frozen=True, eq=False)
class MPNetwork:
    S: np.ndarray = field(default_factory=lambda: np.array(MP_S))
    a: np.ndarray = field(default_factory=lambda: np.array(MP_A))
    threshold: float = MP_THRESHOLD
    hidden: IdealCrossbar = field(init=False)
    output: IdealCrossbar = field(init=False)

    def __post_init__(self):
        hidden = create_crossbar(*self.S.shape, backend=BACKEND_IDEAL)
        program_matrix(hidden, self.S, tol=1.0)
        output = create_crossbar(self.a.shape[0], 1, backend=BACKEND_IDEAL)
        program_matrix(output, self.a.reshape(-1, 1), tol=1.0)

        object.__setattr__(self, "hidden", hidden)
        object.__setattr__(self, "output", output)


def _fire(values: np.ndarray, threshold: float) -> np.ndarray:
    return (values >= threshold).astype(np.int64)


def mp_forward(net: MPNetwork, x1: int, x2: int) -> Tuple[np.ndarray, int]:
    """Return the hidden preactivation S.[x1, x2]^T and the output bit"""
    if x1 not in (0, 1) or x2 not in (0, 1):
        raise InvalidParamsException(f"McCulloch-Pitts inputs must be bits: ({x1}, {x2})")

    preactivation = net.hidden.read_vmm([x1, x2], COLUMNS_AS_INPUTS)
    z = _fire(preactivation, net.threshold)
    y = _fire(net.output.read_vmm(z, ROWS_AS_INPUTS), net.threshold)

    return preactivation, int(y[0])


def mp_truth_table(net: MPNetwork) -> List[dict]:
    table = []
    for x1 in (0, 1):
        for x2 in (0, 1):
            preactivation, y = mp_forward(net, x1, x2)
            table.append({"x1": x1, "x2": x2, "hidden": preactivation.tolist(), "y": y})

    return table
