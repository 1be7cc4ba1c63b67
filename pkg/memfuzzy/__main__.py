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

import argparse
import json
import logging
import sys
from typing import List, Optional

from . import __about__
from . import compile_command
from . import device_command
from . import edges_command
from . import infer_command
from . import surface_command
from .constants import COLUMN, EXIT_USER_ERROR
from .exception import MemfuzzyException
from .utils import print_title


def main(argv: Optional[List[str]] = None) -> int:
    handlers = [
        compile_command.init,
        infer_command.init,
        edges_command.init,
        surface_command.init,
        device_command.init,
    ]

    if argv is None:
        argv = sys.argv[1:]

    parser = argparse.ArgumentParser(
        prog=__about__.name,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=__about__.description,
        epilog=_get_epilog())
    sub_parser = parser.add_subparsers(title="subcommands")

    common_parent_parser = create_common_parser()

    for handler in handlers:
        handler(sub_parser, common_parent_parser)

    if len(argv) == 0:
        parser.print_help(sys.stderr)
        return 1

    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 1

    _print_arguments(args)

    _init_logger(args)

    try:
        return args.func(args)
    except MemfuzzyException as e:
        logging.error(f"{args.func.__name__}() failed: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logging.error(f"{args.func.__name__}() failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USER_ERROR


def _init_logger(args):
    if not getattr(args, "log", None):
        return

    log_level = {
        "debug": logging.DEBUG,
        "info": logging.INFO,
        "warn": logging.WARN,
        "warning": logging.WARNING,
        "error": logging.ERROR,
        "fatal": logging.FATAL,
        "critical": logging.CRITICAL,
    }

    logging.basicConfig(
        filename="memfuzzy.log",
        level=log_level.get(args.log, logging.DEBUG)
    )


def _print_arguments(args):
    print_title("Arguments", COLUMN)

    arguments = {}
    for name, value in args._get_kwargs():
        if name == "func":
            value = value.__name__
        arguments[name] = value

    print(f"{json.dumps(arguments, indent=4)}\n")


def _get_epilog() -> str:
    words = [
        "exit codes:",
        "    0: success",
        "    2: invalid input (rules, image, network, config or arguments)",
        "    3: numeric failure (programming did not converge, non-finite values,",
        "       device check above its limit)",
    ]

    return "\n".join(words)


def create_common_parser() -> argparse.ArgumentParser:
    parent_parser = argparse.ArgumentParser(add_help=False)
    parent_parser.add_argument(
        "--config",
        type=str,
        required=False,
        default=None,
        help="key = value settings file; command-line flags take precedence"
    )
    parent_parser.add_argument(
        "--verbose",
        required=False,
        action="store_true"
    )
    parent_parser.add_argument(
        "--log",
        type=str,
        required=False,
        help=(
            "Write logging messages to 'memfuzzy.log' with a given level\n"
            "ex) debug, info, warn, error, fatal"
        )
    )

    return parent_parser


if __name__ == "__main__":
    sys.exit(main())
