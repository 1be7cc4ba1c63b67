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

import logging

import numpy as np

from .config import RunConfig
from .constants import (
    DEFAULT_TOLERANCE, DEVICE_CHECK_LIMIT, DEVICE_CHECK_SAMPLES, DEFAULT_SEED,
    EXIT_OK, EXIT_NUMERIC_ERROR,
)
from .fuzzy import FuzzyNetwork, load_network, infer_batch
from .utils import print_response


def init(sub_parser, common_parent_parser):
    _init_for_device_check(sub_parser, common_parent_parser)


def _init_for_device_check(sub_parser, common_parent_parser):
    name = "device-check"
    desc = "Program a network onto memristor crossbars and compare it with ideal arithmetic"

    check_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    check_parser.add_argument("network", type=str, help="network JSON written by compile")
    check_parser.add_argument(
        "--tolerance",
        type=float,
        required=False,
        default=None,
        help=f"programming tolerance as a fraction of w_max default({DEFAULT_TOLERANCE})"
    )
    check_parser.add_argument(
        "--samples",
        type=int,
        required=False,
        default=None,
        help=f"random inputs to compare default({DEVICE_CHECK_SAMPLES})"
    )
    check_parser.add_argument(
        "--seed",
        type=int,
        required=False,
        default=None,
        help=f"input sampling seed default({DEFAULT_SEED})"
    )

    check_parser.set_defaults(func=_device_check)


def device_deviation(net: FuzzyNetwork, device_net: FuzzyNetwork, samples: int, seed: int) -> float:
    """Max relative deviation of every output concept over seeded uniform inputs"""
    rng = np.random.default_rng(seed)
    X = np.column_stack([
        rng.uniform(var.universe.lo, var.universe.hi, samples) for var in net.variables
    ])

    expected = infer_batch(net, X)
    actual = infer_batch(device_net, X)

    deviation = 0.0
    for concept, values in expected.items():
        scale = np.maximum(np.abs(values), np.finfo(np.float64).eps)
        deviation = max(deviation, float(np.max(np.abs(actual[concept] - values) / scale)))

    return deviation


def _device_check(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    with open(args.network, "r", encoding="utf-8") as f:
        net = load_network(f.read())

    device_net, reports = net.to_device(config.device, config.tolerance)
    deviation = device_deviation(net, device_net, config.samples, config.seed)
    passed = deviation <= DEVICE_CHECK_LIMIT

    logging.info(f"device-check: max relative deviation {deviation}, limit {DEVICE_CHECK_LIMIT}")

    response = {
        "cells": len(reports),
        "pulses": sum(r.pulses_used for r in reports),
        "max_residual": max(r.residual for r in reports),
        "samples": config.samples,
        "max_relative_deviation": deviation,
        "limit": DEVICE_CHECK_LIMIT,
        "passed": passed,
    }
    if args.verbose:
        response["tolerance"] = config.tolerance
    print_response(response)

    return EXIT_OK if passed else EXIT_NUMERIC_ERROR
