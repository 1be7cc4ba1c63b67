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
from dataclasses import dataclass, field, fields, replace
from typing import Dict, FrozenSet, Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .constants import (
    DEFAULT_EXPONENT, DEFAULT_GRID, DEFAULT_SIGMA, DEFAULT_NOISE_MEAN, DEFAULT_NOISE_VAR,
    DEFAULT_SEED, BACKEND_IDEAL, BACKENDS, DEFAULT_TOLERANCE, DEFAULT_RESOLUTION,
    DEVICE_CHECK_SAMPLES,
)
from .device import DeviceParams
from .exception import ConfigError, InvalidParamsException

GRAMMAR = r"""
start: (pair? _NL)*
pair: KEY "=" VALUE

KEY: /[A-Za-z_][A-Za-z0-9_]*/
VALUE: /[^\s#=]+/
_NL: /\r?\n/
COMMENT: /#[^\n]*/

%ignore /[ \t\f]+/
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, start="start", parser="lalr", propagate_positions=True)


@dataclass(frozen=True)
class RunConfig:
    exponent: float = DEFAULT_EXPONENT
    grid: int = DEFAULT_GRID
    sigma: float = DEFAULT_SIGMA
    noise_mean: float = DEFAULT_NOISE_MEAN
    noise_var: float = DEFAULT_NOISE_VAR
    seed: int = DEFAULT_SEED
    backend: str = BACKEND_IDEAL
    tolerance: float = DEFAULT_TOLERANCE
    resolution: int = DEFAULT_RESOLUTION
    samples: int = DEVICE_CHECK_SAMPLES
    device: DeviceParams = field(default_factory=DeviceParams)
    # names given by a config file or a flag rather than defaulted
    explicit: FrozenSet[str] = field(default=frozenset(), compare=False)

    def validate(self) -> "RunConfig":
        checks = (
            (self.exponent >= 1.0, f"exponent must be >= 1: {self.exponent}"),
            (self.grid >= 2, f"grid must be >= 2: {self.grid}"),
            (self.sigma > 0.0, f"sigma must be positive: {self.sigma}"),
            (self.noise_var >= 0.0, f"noise_var must be non-negative: {self.noise_var}"),
            (self.backend in BACKENDS, f"backend must be one of {', '.join(BACKENDS)}: {self.backend}"),
            (self.tolerance > 0.0, f"tolerance must be positive: {self.tolerance}"),
            (self.resolution >= 2, f"resolution must be >= 2: {self.resolution}"),
            (self.samples >= 1, f"samples must be >= 1: {self.samples}"),
        )
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

        return self

    def is_set(self, name: str) -> bool:
        return name in self.explicit

    @classmethod
    def from_sources(cls, args=None, path: Optional[str] = None) -> "RunConfig":
        """Defaults, overridden by a config file, overridden by command-line flags

        Flags left at None on args do not override anything.
        """
        config = cls()
        if path:
            with open(path, "r", encoding="utf-8") as f:
                config = apply_settings(config, parse_config(f.read()))

        if args is not None:
            overrides = {
                f.name: getattr(args, f.name)
                for f in fields(cls)
                if f.name in _RUN_TYPES and getattr(args, f.name, None) is not None
            }
            config = replace(config, explicit=config.explicit | frozenset(overrides), **overrides)

        logging.debug(f"RunConfig.from_sources() {config}")
        return config.validate()


_RUN_TYPES = {f.name: f.type for f in fields(RunConfig) if f.name not in ("device", "explicit")}
_DEVICE_TYPES = {f.name: f.type for f in fields(DeviceParams)}
_CONVERTERS = {int: int, float: float, str: str, "int": int, "float": float, "str": str}


class _ConfigBuilder(Transformer):
    @v_args(inline=True)
    def pair(self, key: Token, value: Token):
        name = str(key)
        kind = _RUN_TYPES.get(name, _DEVICE_TYPES.get(name))
        if kind is None:
            raise ConfigError(f"{key.line}:{key.column}: unknown key {name!r}")

        try:
            converted = _CONVERTERS[kind](str(value))
        except ValueError:
            raise ConfigError(f"{value.line}:{value.column}: invalid value {str(value)!r} for {name}")

        return name, converted, key

    def start(self, pairs):
        settings = {}
        for name, value, key in pairs:
            if name in settings:
                raise ConfigError(f"{key.line}:{key.column}: duplicate key {name!r}")
            settings[name] = value
        return settings


def parse_config(text: str) -> Dict[str, object]:
    """Parse key = value lines into a dict of typed settings"""
    try:
        tree = _parser.parse(text if text.endswith("\n") else text + "\n")
        return _ConfigBuilder().transform(tree)
    except UnexpectedInput as e:
        raise ConfigError(f"{e.line}:{e.column}: malformed config line")
    except VisitError as e:
        if isinstance(e.orig_exc, ConfigError):
            raise e.orig_exc
        raise


def apply_settings(config: RunConfig, settings: Dict[str, object]) -> RunConfig:
    run = {key: value for key, value in settings.items() if key in _RUN_TYPES}
    device = {key: value for key, value in settings.items() if key in _DEVICE_TYPES}

    try:
        params = replace(config.device, **device)
    except InvalidParamsException as e:
        raise ConfigError(e.message)

    return replace(config, device=params, explicit=config.explicit | frozenset(settings), **run)
