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

import numpy as np

from .config import RunConfig
from .constants import DEFAULT_RESOLUTION, CSV_DIGITS, EXIT_OK
from .fuzzy import load_network, inference_surface, normalize_surface
from .utils import print_response, write_atomic


def init(sub_parser, common_parent_parser):
    _init_for_surface(sub_parser, common_parent_parser)


def _init_for_surface(sub_parser, common_parent_parser):
    name = "surface"
    desc = "Sample the fuzzy XOR inference surface into a CSV file"

    surface_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    surface_parser.add_argument("network", type=str, help="network JSON written by compile")
    surface_parser.add_argument("out", type=str, help="output CSV")
    surface_parser.add_argument(
        "--resolution",
        type=int,
        required=False,
        default=None,
        help=f"samples per input axis default({DEFAULT_RESOLUTION})"
    )
    surface_parser.add_argument(
        "--exponent",
        type=float,
        required=False,
        default=None,
        help="override the network's minterm activation exponent"
    )

    surface_parser.set_defaults(func=_surface)


def surface_csv(net, resolution: int, digits: int = CSV_DIGITS) -> str:
    """Header a,b,raw,normalized then one line per grid cell, a major"""
    raw = inference_surface(net, resolution)
    normalized = normalize_surface(raw)
    ua = net.variables[0].universe
    ub = net.variables[1].universe
    a = np.linspace(ua.lo, ua.hi, resolution)
    b = np.linspace(ub.lo, ub.hi, resolution)

    lines = ["a,b,raw,normalized"]
    for i in range(resolution):
        for j in range(resolution):
            lines.append(
                f"{a[i]:.{digits}g},{b[j]:.{digits}g},"
                f"{raw[i, j]:.{digits}g},{normalized[i, j]:.{digits}g}")

    return "\n".join(lines) + "\n"


def _surface(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    with open(args.network, "r", encoding="utf-8") as f:
        net = load_network(f.read())
    if config.is_set("exponent"):
        net = net.with_exponent(config.exponent)

    write_atomic(args.out, surface_csv(net, config.resolution))

    print_response({
        "out": args.out,
        "resolution": config.resolution,
        "exponent": net.exponent,
        "rows": config.resolution * config.resolution,
    })

    return EXIT_OK
