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
from .constants import DEFAULT_GRID, DEFAULT_EXPONENT, EXIT_OK
from .fuzzy import dump_network
from .rulebase import parse, compile_with_diagnostics
from .utils import print_response, write_atomic


def init(sub_parser, common_parent_parser):
    _init_for_compile(sub_parser, common_parent_parser)


def _init_for_compile(sub_parser, common_parent_parser):
    name = "compile"
    desc = "Compile a fuzzy rule base into a network JSON document"

    compile_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    compile_parser.add_argument(
        "rules",
        type=str,
        help="rule base source ex) memfuzzy/samples/xor.rules"
    )
    compile_parser.add_argument(
        "out",
        type=str,
        help="network JSON to write"
    )
    compile_parser.add_argument(
        "--grid",
        type=int,
        required=False,
        default=None,
        help=f"grid points per input universe default({DEFAULT_GRID})"
    )
    compile_parser.add_argument(
        "--exponent",
        type=float,
        required=False,
        default=None,
        help=f"minterm activation exponent default({DEFAULT_EXPONENT})"
    )

    compile_parser.set_defaults(func=_compile)


def _compile(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    with open(args.rules, "r", encoding="utf-8") as f:
        rb = parse(f.read())

    net, diagnostics = compile_with_diagnostics(rb, config.grid, config.exponent)
    warnings = [str(d) for d in diagnostics]
    write_atomic(args.out, dump_network(net))

    response = {
        "out": args.out,
        "inputs": [var.name for var in net.variables],
        "output": net.output,
        "grid": config.grid,
        "exponent": net.exponent,
        "rules": net.rule_count,
        "concepts": net.concepts,
        "warnings": warnings if args.verbose else len(warnings),
    }
    print_response(response)

    return EXIT_OK
