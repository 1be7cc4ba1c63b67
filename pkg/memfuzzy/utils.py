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

import json
import logging
import os
import tempfile
from typing import Union

import numpy as np

from .constants import COLUMN


def print_title(title: str, column: int = COLUMN, sep: str = "="):
    sep_count: int = max(0, column - len(title) - 3)
    print(f"[{title}] {sep * sep_count}")


def _to_jsonable(value):
    if isinstance(value, bytes):
        return f"0x{value.hex()}"
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()

    return value


def print_dict(data: dict):
    converted = {}

    for key in data:
        converted[key] = _to_jsonable(data[key])

    print(json.dumps(converted, indent=4))


def print_response(content: Union[str, dict]):
    print_title("Response", COLUMN)

    if isinstance(content, dict):
        print_dict(content)
    else:
        print(content)

    print("")


def _current_umask() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return umask


def write_atomic(path: str, content: Union[bytes, str]):
    """Write content to path through a temporary file in the same directory

    :param path: destination path
    :param content: bytes are written as is, str is encoded as utf-8
    """
    if isinstance(content, str):
        content = content.encode("utf-8")

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(prefix=".memfuzzy-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(content)
        # mkstemp creates 0600 files; give the output the usual umask-based mode
        os.chmod(tmp_path, 0o666 & ~_current_umask())
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise

    logging.debug(f"write_atomic() {path}: {len(content)} bytes")


def suffixed_path(path: str, suffix: str) -> str:
    """out.pgm, "v" -> out.v.pgm"""
    root, ext = os.path.splitext(path)
    return f"{root}.{suffix}{ext}"
