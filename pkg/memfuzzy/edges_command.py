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

from .config import RunConfig
from .constants import (
    BACKENDS, BACKEND_DEVICE, DEFAULT_SIGMA, DEFAULT_NOISE_MEAN, DEFAULT_NOISE_VAR,
    DEFAULT_SEED, EXIT_OK,
)
from .fuzzy import load_network
from .imaging import (
    load_pgm, save_pgm, gaussian_smooth, add_gaussian_noise, detect_edges,
    normalize_to_bytes, canny_gradient_baseline, save_edge_csv,
)
from .utils import print_response, write_atomic, suffixed_path

DUMP_CHOICES = ("v", "h", "merged")


def init(sub_parser, common_parent_parser):
    _init_for_edges(sub_parser, common_parent_parser)
    _init_for_baseline(sub_parser, common_parent_parser)


def _add_sigma_argument(parser):
    parser.add_argument(
        "--sigma",
        type=float,
        required=False,
        default=None,
        help=f"Gaussian smoothing sigma in pixels default({DEFAULT_SIGMA})"
    )


def _read_image(path: str):
    with open(path, "rb") as f:
        return load_pgm(f.read())


def _init_for_edges(sub_parser, common_parent_parser):
    name = "edges"
    desc = "Extract edges of a PGM image with a compiled fuzzy XOR network"

    edges_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    edges_parser.add_argument("image", type=str, help="input PGM (P2 or P5, maxval 255)")
    edges_parser.add_argument("network", type=str, help="network JSON written by compile")
    edges_parser.add_argument("out", type=str, help="output PGM")
    _add_sigma_argument(edges_parser)
    edges_parser.add_argument(
        "--noise-mean",
        type=float,
        required=False,
        default=None,
        help=f"mean of Gaussian noise added before smoothing default({DEFAULT_NOISE_MEAN})"
    )
    edges_parser.add_argument(
        "--noise-var",
        type=float,
        required=False,
        default=None,
        help=f"variance of Gaussian noise on the [0, 1] scale default({DEFAULT_NOISE_VAR}) ex) 0.03"
    )
    edges_parser.add_argument(
        "--seed",
        type=int,
        required=False,
        default=None,
        help=f"noise seed default({DEFAULT_SEED})"
    )
    edges_parser.add_argument(
        "--backend",
        type=str,
        choices=BACKENDS,
        required=False,
        default=None,
        help="ideal arithmetic or programmed memristor crossbars"
    )
    edges_parser.add_argument(
        "--exponent",
        type=float,
        required=False,
        default=None,
        help="override the network's minterm activation exponent"
    )
    edges_parser.add_argument(
        "--dump",
        type=str,
        choices=DUMP_CHOICES,
        nargs="+",
        required=False,
        default=None,
        help="write these maps next to OUT ex) --dump v h writes out.v.pgm and out.h.pgm"
    )
    edges_parser.add_argument(
        "--csv",
        type=str,
        required=False,
        default=None,
        help="also write the raw merged edge strengths as CSV"
    )

    edges_parser.set_defaults(func=_edges)


def _edges(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    img = _read_image(args.image)
    with open(args.network, "r", encoding="utf-8") as f:
        net = load_network(f.read())

    if config.is_set("exponent"):
        net = net.with_exponent(config.exponent)
    if config.backend == BACKEND_DEVICE:
        net, _ = net.to_device(config.device, config.tolerance)

    if config.noise_var > 0.0 or config.noise_mean != 0.0:
        img = add_gaussian_noise(img, config.noise_mean, config.noise_var, config.seed)
    img = gaussian_smooth(img, config.sigma)

    vertical, horizontal, merged = detect_edges(img, net)
    maps = {"v": vertical, "h": horizontal, "merged": merged}

    written = []
    if args.dump:
        for key in args.dump:
            path = suffixed_path(args.out, key)
            write_atomic(path, save_pgm(normalize_to_bytes(maps[key])))
            written.append(path)
    else:
        write_atomic(args.out, save_pgm(normalize_to_bytes(merged)))
        written.append(args.out)

    if args.csv:
        write_atomic(args.csv, save_edge_csv(merged))
        written.append(args.csv)

    logging.info(f"edges: {img.width}x{img.height} -> {written}")

    response = {
        "size": [img.width, img.height],
        "backend": net.backend,
        "exponent": net.exponent,
        "written": written,
    }
    if args.verbose:
        response["merged_range"] = [float(merged.values.min()), float(merged.values.max())]
    print_response(response)

    return EXIT_OK


def _init_for_baseline(sub_parser, common_parent_parser):
    name = "baseline"
    desc = "Smoothing and gradient magnitude edges for comparison"

    baseline_parser = sub_parser.add_parser(
        name,
        parents=[common_parent_parser],
        help=desc)

    baseline_parser.add_argument("image", type=str, help="input PGM (P2 or P5, maxval 255)")
    baseline_parser.add_argument("out", type=str, help="output PGM")
    _add_sigma_argument(baseline_parser)

    baseline_parser.set_defaults(func=_baseline)


def _baseline(args) -> int:
    config = RunConfig.from_sources(args, args.config)

    img = _read_image(args.image)
    edge_map = canny_gradient_baseline(img, config.sigma)
    write_atomic(args.out, save_pgm(normalize_to_bytes(edge_map)))

    print_response({"size": [img.width, img.height], "sigma": config.sigma, "written": [args.out]})

    return EXIT_OK
