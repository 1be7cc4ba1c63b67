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

from typing import Optional, Sequence

from .constants import EXIT_USER_ERROR, EXIT_NUMERIC_ERROR


class MemfuzzyException(Exception):
    exit_code: int = EXIT_USER_ERROR

    def __init__(self, message: Optional[str] = None):
        super().__init__(message)
        self._message = message

    @property
    def message(self) -> str:
        return self._message if self._message else self.__class__.__name__

    def __str__(self) -> str:
        return self.message


class InvalidParamsException(MemfuzzyException):
    pass


class DimensionMismatch(InvalidParamsException):
    pass


class IndexOutOfRange(InvalidParamsException):
    pass


class TargetOutOfRange(InvalidParamsException):
    pass


class OutOfUniverse(InvalidParamsException):
    pass


class ImageFormatError(MemfuzzyException):
    pass


class ConfigError(MemfuzzyException):
    pass


class RuleSyntaxError(MemfuzzyException):
    def __init__(self, line: int, column: int, expected: Sequence[str] = (), found: str = ""):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))

        words = [f"{line}:{column}: syntax error"]
        if found:
            words.append(f"unexpected {found!r}")
        if self.expected:
            words.append(f"expected one of {', '.join(self.expected)}")

        super().__init__(", ".join(words))


class UnknownName(MemfuzzyException):
    def __init__(self, name: str, rule_index: int, kind: str = "name"):
        self.name = name
        self.rule_index = rule_index
        super().__init__(f"rule {rule_index}: unknown {kind} {name!r}")


class DuplicateName(MemfuzzyException):
    def __init__(self, name: str, line: int = 0, column: int = 0):
        self.name = name
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: duplicate name {name!r}")


class RuleConflict(MemfuzzyException):
    pass


class NoConvergence(MemfuzzyException):
    exit_code = EXIT_NUMERIC_ERROR


class NumericFailure(MemfuzzyException):
    exit_code = EXIT_NUMERIC_ERROR
