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

from .config import RunConfig
from .constants import BACKENDS, BACKEND_DEVICE, EXIT_OK
from .fuzzy import load_network, infer
from .mcculloch_pitts import MPNetwork, mp_truth_table
from .utils import print_response, print_title


def init(sub_parser, common_parent_parser):
    _init_for_infer(sub_parser, common_parent_parser)
    _init_for_mp(sub_parser, common_parent_parser)


def _init_for_infer(sub_parser, common_parent_parser):
    name = "infer"
    desc = "Evaluate a compiled network on crisp inputs"

    infer_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    infer_parser.add_argument(
        "network",
        type=str,
        help="network JSON written by compile"
    )
    infer_parser.add_argument(
        "values",
        type=float,
        nargs="+",
        help="one crisp value per input variable ex) 1 0"
    )
    infer_parser.add_argument(
        "--backend",
        type=str,
        choices=BACKENDS,
        required=False,
        default=None,
        help="ideal arithmetic or programmed memristor crossbars"
    )

    infer_parser.set_defaults(func=_infer)


def _infer(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    with open(args.network, "r", encoding="utf-8") as f:
        net = load_network(f.read())

    if config.backend == BACKEND_DEVICE:
        net, _ = net.to_device(config.device, config.tolerance)

    result = infer(net, args.values)
    response = {
        "inputs": {var.name: value for var, value in zip(net.variables, args.values)},
        "backend": net.backend,
        "exponent": net.exponent,
        net.output: result,
    }
    print_response(response)

    return EXIT_OK


def _init_for_mp(sub_parser, common_parent_parser):
    name = "mp"
    desc = "Print the McCulloch-Pitts XOR truth table"

    mp_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    mp_parser.set_defaults(func=_mp)


def _mp(args) -> int:
    net = MPNetwork()

    if args.verbose:
        print_title("Weights")
        print(f"S: {net.S.tolist()}, a: {net.a.tolist()}, threshold: {net.threshold}\n")

    print_response({"table": mp_truth_table(net)})

    return EXIT_OK
