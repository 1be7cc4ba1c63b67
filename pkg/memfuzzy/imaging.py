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
import math
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from .constants import MAX_INTENSITY, CSV_DIGITS, DEFAULT_CONCEPT
from .exception import InvalidParamsException, ImageFormatError
from .fuzzy import FuzzyNetwork, fuzzy_xor_batch

_WHITESPACE = b" \t\r\n\v\f"


@dataclass(frozen=True, eq=False)
class GrayImage:
    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 2 or self.pixels.dtype != np.uint8 or 0 in self.pixels.shape:
            raise InvalidParamsException(
                f"GrayImage needs a non-empty 2-D uint8 raster, got {self.pixels.dtype} {self.pixels.shape}")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def from_array(cls, values) -> "GrayImage":
        values = np.asarray(values)
        if np.any(values < 0) or np.any(values > MAX_INTENSITY):
            raise InvalidParamsException("Intensities must lie in [0, 255]")
        return cls(np.ascontiguousarray(values, dtype=np.uint8))

    def transpose(self) -> "GrayImage":
        return GrayImage(np.ascontiguousarray(self.pixels.T))


@dataclass(frozen=True, eq=False)
class EdgeMap:
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2:
            raise InvalidParamsException(f"EdgeMap needs a 2-D raster, got {self.values.shape}")
        if np.any(self.values < 0.0):
            raise InvalidParamsException("Edge strengths must be non-negative")

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def _header_tokens(data: bytes, count: int) -> Tuple[list, int]:
    """Read count whitespace separated header tokens, skipping # comments"""
    tokens = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos] in _WHITESPACE:
            pos += 1
        if pos >= len(data):
            raise ImageFormatError("Truncated PGM header")
        if data[pos:pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue

        start = pos
        while pos < len(data) and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])

    return tokens, pos


def load_pgm(data: bytes) -> GrayImage:
    """Decode a P2 (plain) or P5 (raw) graymap with maxval 255"""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ImageFormatError(f"Not a PGM file: magic {magic!r}")

    tokens, pos = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(token) for token in tokens[1:])
    except ValueError:
        raise ImageFormatError(f"Malformed PGM header: {tokens}")
    if width < 1 or height < 1:
        raise ImageFormatError(f"Invalid PGM size: {width}x{height}")
    if maxval != MAX_INTENSITY:
        raise ImageFormatError(f"Unsupported maxval: {maxval}")

    size = width * height
    if magic == b"P5":
        # exactly one whitespace byte ends the header
        payload = data[pos + 1:pos + 1 + size]
        if len(payload) < size:
            raise ImageFormatError(f"Truncated PGM payload: {len(payload)} of {size} bytes")
        pixels = np.frombuffer(payload, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:])
        try:
            values = np.array([int(token) for token in body.split()], dtype=np.int64)
        except ValueError:
            raise ImageFormatError("Malformed P2 sample")
        if len(values) < size:
            raise ImageFormatError(f"Truncated PGM payload: {len(values)} of {size} samples")
        values = values[:size]
        if np.any(values < 0) or np.any(values > maxval):
            raise ImageFormatError("P2 sample outside [0, maxval]")
        pixels = values.astype(np.uint8)

    return GrayImage(pixels.reshape(height, width).copy())


def save_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n{MAX_INTENSITY}\n".encode("ascii")
    return header + img.pixels.tobytes()


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def _to_gray(values: np.ndarray) -> GrayImage:
    return GrayImage(np.clip(np.rint(values), 0, MAX_INTENSITY).astype(np.uint8))


def gaussian_smooth(img: GrayImage, sigma: float) -> GrayImage:
    if sigma <= 0.0:
        raise InvalidParamsException(f"Smoothing sigma must be positive: {sigma}")

    kernel = gaussian_kernel(sigma)
    values = img.pixels.astype(np.float64)
    values = ndimage.correlate1d(values, kernel, axis=0, mode="reflect")
    values = ndimage.correlate1d(values, kernel, axis=1, mode="reflect")

    return _to_gray(values)


def add_gaussian_noise(img: GrayImage, mean: float, variance: float, seed: int) -> GrayImage:
    """i.i.d. Gaussian noise on the [0, 1] intensity scale"""
    if variance < 0.0:
        raise InvalidParamsException(f"Noise variance must be non-negative: {variance}")

    rng = np.random.default_rng(seed)
    values = img.pixels.astype(np.float64) / MAX_INTENSITY
    values = values + rng.normal(mean, math.sqrt(variance), size=values.shape)

    return _to_gray(np.clip(values, 0.0, 1.0) * MAX_INTENSITY)


def row_edge_pass(row, net: FuzzyNetwork, concept: str = DEFAULT_CONCEPT) -> np.ndarray:
    """Fuzzy XOR of every pair of consecutive intensities in one batch"""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or row.shape[0] < 2:
        raise InvalidParamsException(f"Row needs at least 2 pixels, got shape {row.shape}")

    values = row / MAX_INTENSITY
    return fuzzy_xor_batch(net, values[:-1], values[1:], concept)


def detect_edges(img: GrayImage, net: FuzzyNetwork,
                 concept: str = DEFAULT_CONCEPT) -> Tuple[EdgeMap, EdgeMap, EdgeMap]:
    """Vertical (H x W-1), horizontal (H-1 x W) and merged (H x W) edge maps

    Each strength belongs to the left/top pixel of its pair. In the merged
    map the last column and last row have no partner pixel and take the
    pixel's pair with itself.
    """
    h, w = img.height, img.width
    if h < 2 or w < 2:
        raise InvalidParamsException(f"Edge detection needs at least 2x2 pixels, got {w}x{h}")

    logging.debug(f"detect_edges() start: {w}x{h}")

    p = img.pixels.astype(np.float64) / MAX_INTENSITY
    # one batch: row pairs, column pairs, then self pairs of the last column/row
    a = np.concatenate((p[:, :-1].ravel(), p[:-1, :].T.ravel(), p[:, -1], p[-1, :]))
    b = np.concatenate((p[:, 1:].ravel(), p[1:, :].T.ravel(), p[:, -1], p[-1, :]))
    out = fuzzy_xor_batch(net, a, b, concept)

    n_v = h * (w - 1)
    n_h = (h - 1) * w
    vertical = out[:n_v].reshape(h, w - 1)
    horizontal = out[n_v:n_v + n_h].reshape(w, h - 1).T
    last_column = out[n_v + n_h:n_v + n_h + h]
    last_row = out[n_v + n_h + h:]

    merged = np.empty((h, w), dtype=np.float64)
    merged[:, :-1] = vertical
    merged[:, -1] = last_column
    merged[:-1, :] += horizontal
    merged[-1, :] += last_row

    logging.debug("detect_edges() end")
    return EdgeMap(vertical), EdgeMap(np.ascontiguousarray(horizontal)), EdgeMap(merged)


def normalize_to_bytes(edge_map: EdgeMap) -> GrayImage:
    """Global min-max map to [0, 255]; a constant map becomes all zeros"""
    values = edge_map.values
    lo = values.min()
    span = values.max() - lo
    if span <= 0.0:
        return GrayImage(np.zeros(values.shape, dtype=np.uint8))

    return _to_gray((values - lo) / span * MAX_INTENSITY)


def canny_gradient_baseline(img: GrayImage, sigma: float) -> EdgeMap:
    """Smoothing and Sobel gradient magnitude, the first two Canny steps"""
    values = gaussian_smooth(img, sigma).pixels.astype(np.float64)
    gx = ndimage.sobel(values, axis=1, mode="reflect")
    gy = ndimage.sobel(values, axis=0, mode="reflect")

    return EdgeMap(np.hypot(gx, gy))


def save_edge_csv(edge_map: EdgeMap, digits: int = CSV_DIGITS) -> str:
    lines = [
        ",".join(f"{value:.{digits}g}" for value in row)
        for row in edge_map.values
    ]
    return "\n".join(lines) + "\n"
