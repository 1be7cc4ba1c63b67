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

"""Three-layer neuro-fuzzy network

fuzzification (S) -> fuzzy minterms (Mt, x^n activation) -> aggregation (sum)
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import skfuzzy as fuzz

from .constants import (
    BACKEND_IDEAL, BACKEND_DEVICE, COLUMNS_AS_INPUTS, ROWS_AS_INPUTS,
    DEFAULT_CONCEPT, DEFAULT_TOLERANCE, MAX_INTENSITY, NETWORK_FORMAT, NETWORK_VERSION,
)
from .device import DeviceParams, ProgramReport, create_crossbar, program_matrix
from .exception import (
    InvalidParamsException, DimensionMismatch, OutOfUniverse, NumericFailure,
)


@dataclass(frozen=True)
class Universe:
    lo: float
    hi: float
    k: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidParamsException(f"Invalid universe: [{self.lo}, {self.hi}]")
        if self.k < 2:
            raise InvalidParamsException(f"Universe needs at least 2 grid points: k={self.k}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.k)

    @property
    def span(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class MembershipFunction:
    """Triangular (a, b, c) with a <= b <= c, or an explicit sample vector"""

    abc: Optional[Tuple[float, float, float]] = None
    samples: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if (self.abc is None) == (self.samples is None):
            raise InvalidParamsException("Membership needs either tri(a, b, c) or samples")
        if self.abc is not None:
            a, b, c = self.abc
            if not a <= b <= c:
                raise InvalidParamsException(f"tri({a}, {b}, {c}) requires a <= b <= c")

    @classmethod
    def triangular(cls, a: float, b: float, c: float) -> "MembershipFunction":
        return cls(abc=(float(a), float(b), float(c)))

    @classmethod
    def sampled(cls, values: Sequence[float]) -> "MembershipFunction":
        return cls(samples=tuple(float(v) for v in values))

    def anchor(self, u: Universe) -> float:
        """Normalized peak position; 1 is driven by the direct input, 0 by its complement"""
        if self.abc is not None:
            peak = (self.abc[1] - u.lo) / u.span
            return float(min(1.0, max(0.0, peak)))

        values = discretize(self, u)
        return float(np.argmax(values)) / (u.k - 1)


def discretize(mf: MembershipFunction, u: Universe) -> np.ndarray:
    if mf.abc is not None:
        values = fuzz.trimf(u.grid, list(mf.abc))
    else:
        values = np.asarray(mf.samples, dtype=np.float64)
        if values.shape != (u.k,):
            raise DimensionMismatch(f"{len(values)} samples for a universe of {u.k} points")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise InvalidParamsException("Membership samples must lie in [0, 1]")

    if not np.any(values > 0.0):
        raise InvalidParamsException("Membership function has empty support on its universe")

    return values


def complement_encode(x: float, u: Universe) -> Tuple[float, float]:
    if not u.contains(x):
        raise OutOfUniverse(f"Input {x} outside universe [{u.lo}, {u.hi}]")

    return x - u.lo, u.hi - x


@dataclass(frozen=True)
class Term:
    name: str
    anchor: float
    samples: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class Variable:
    name: str
    universe: Universe
    terms: Tuple[Term, ...]


class MintermSpec(NamedTuple):
    antecedent: Tuple[Tuple[str, str], ...]
    consequent: str


@dataclass(frozen=True, eq=False)
class FuzzificationLayer:
    S: np.ndarray
    column_owner: Tuple[Tuple[int, int], ...]
    row_owner: Tuple[int, ...]
    anchors: np.ndarray


@dataclass(frozen=True, eq=False)
class MintermLayer:
    Mt: np.ndarray
    n: float


@dataclass(frozen=True, eq=False)
class AggregationLayer:
    groups: Dict[str, Tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class FuzzyNetwork:
    variables: Tuple[Variable, ...]
    fuzz: FuzzificationLayer
    minterms: MintermLayer
    agg: AggregationLayer
    rules: Tuple[MintermSpec, ...] = ()
    output: str = "y"
    backend: str = BACKEND_IDEAL
    crossbars: Optional[tuple] = None

    def __post_init__(self):
        _check_network(self)

    @property
    def row_slices(self) -> List[slice]:
        slices = []
        offset = 0
        for var in self.variables:
            slices.append(slice(offset, offset + var.universe.k))
            offset += var.universe.k
        return slices

    @property
    def column_slices(self) -> List[slice]:
        slices = []
        offset = 0
        for var in self.variables:
            slices.append(slice(offset, offset + len(var.terms)))
            offset += len(var.terms)
        return slices

    @property
    def exponent(self) -> float:
        return self.minterms.n

    @property
    def rule_count(self) -> int:
        return self.minterms.Mt.shape[1]

    @property
    def concepts(self) -> List[str]:
        return list(self.agg.groups)

    def with_exponent(self, n: float) -> "FuzzyNetwork":
        if n < 1.0:
            raise InvalidParamsException(f"Activation exponent must be >= 1: {n}")
        return replace(self, minterms=MintermLayer(self.minterms.Mt, float(n)))

    def to_device(self, params: DeviceParams = DeviceParams(),
                  tol: float = DEFAULT_TOLERANCE) -> Tuple["FuzzyNetwork", List[ProgramReport]]:
        """Program S and Mt onto fresh crossbars

        :param params: device parameters of every cell
        :param tol: programming tolerance as a fraction of w_max
        :return: device-backed network and one report per programmed cell
        """
        logging.debug("FuzzyNetwork.to_device() start")

        weight_tol = tol * params.w_max
        fuzz_xbar = create_crossbar(*self.fuzz.S.shape, backend=BACKEND_DEVICE, params=params)
        minterm_xbar = create_crossbar(*self.minterms.Mt.shape, backend=BACKEND_DEVICE, params=params)

        reports = program_matrix(fuzz_xbar, self.fuzz.S, weight_tol)
        reports += program_matrix(minterm_xbar, self.minterms.Mt, weight_tol)

        logging.info(
            f"Programmed {len(reports)} cells with {sum(r.pulses_used for r in reports)} pulses, "
            f"max residual {max(r.residual for r in reports)}")
        logging.debug("FuzzyNetwork.to_device() end")

        return replace(self, backend=BACKEND_DEVICE, crossbars=(fuzz_xbar, minterm_xbar)), reports

    def to_ideal(self) -> "FuzzyNetwork":
        return replace(self, backend=BACKEND_IDEAL, crossbars=None)


def _check_network(net: FuzzyNetwork):
    S = net.fuzz.S
    Mt = net.minterms.Mt
    rows = sum(var.universe.k for var in net.variables)
    cols = sum(len(var.terms) for var in net.variables)

    if S.shape != (rows, cols):
        raise DimensionMismatch(f"Fuzzification matrix {S.shape} does not match ({rows}, {cols})")
    if Mt.ndim != 2 or Mt.shape[0] != rows or Mt.shape[1] < 1:
        raise DimensionMismatch(f"Minterm matrix {Mt.shape} does not match {rows} rows")
    if np.any(S < 0.0) or np.any(Mt < 0.0):
        raise InvalidParamsException("Network weights must be non-negative")
    if net.minterms.n < 1.0:
        raise InvalidParamsException(f"Activation exponent must be >= 1: {net.minterms.n}")

    for r, c in zip(*np.nonzero(S)):
        if net.fuzz.row_owner[r] != net.fuzz.column_owner[c][0]:
            raise InvalidParamsException(f"Fuzzification column {c} writes into another variable's rows")

    indices = sorted(i for group in net.agg.groups.values() for i in group)
    if indices != list(range(Mt.shape[1])) or any(len(g) == 0 for g in net.agg.groups.values()):
        raise InvalidParamsException("Aggregation groups must partition the rules")
    if net.backend not in (BACKEND_IDEAL, BACKEND_DEVICE):
        raise InvalidParamsException(f"Invalid backend: {net.backend}")
    if net.backend == BACKEND_DEVICE and net.crossbars is None:
        raise InvalidParamsException("Device backend requires programmed crossbars")


def build_network(variables: Sequence[Variable], rules: Sequence[MintermSpec],
                  exponent: float, output: str = "y") -> FuzzyNetwork:
    """Lay out S, Mt and the aggregation groups for an ideal network"""
    variables = tuple(variables)
    rows = sum(var.universe.k for var in variables)
    cols = sum(len(var.terms) for var in variables)

    S = np.zeros((rows, cols), dtype=np.float64)
    column_owner = []
    row_owner = []
    anchors = []

    row = 0
    col = 0
    for i, var in enumerate(variables):
        k = var.universe.k
        row_owner.extend([i] * k)
        for j, term in enumerate(var.terms):
            S[row:row + k, col] = term.samples
            column_owner.append((i, j))
            anchors.append(term.anchor)
            col += 1
        row += k

    Mt = np.zeros((rows, len(rules)), dtype=np.float64)
    groups: Dict[str, List[int]] = {}
    for j, rule in enumerate(rules):
        named = dict(rule.antecedent)
        unknown = set(named) - {var.name for var in variables}
        if unknown:
            raise InvalidParamsException(f"Rule {j} names unknown variables {sorted(unknown)}")
        row = 0
        for var in variables:
            k = var.universe.k
            if var.name in named:
                term = next((t for t in var.terms if t.name == named[var.name]), None)
                if term is None:
                    raise InvalidParamsException(
                        f"Rule {j} names unknown term {named[var.name]!r} of {var.name!r}")
                Mt[row:row + k, j] = term.samples
            else:
                # variables absent from the antecedent contribute a neutral block
                Mt[row:row + k, j] = 1.0 / k
            row += k
        groups.setdefault(rule.consequent, []).append(j)

    S.setflags(write=False)
    Mt.setflags(write=False)
    anchors = np.asarray(anchors, dtype=np.float64)
    anchors.setflags(write=False)

    return FuzzyNetwork(
        variables=variables,
        fuzz=FuzzificationLayer(S, tuple(column_owner), tuple(row_owner), anchors),
        minterms=MintermLayer(Mt, float(exponent)),
        agg=AggregationLayer({label: tuple(idx) for label, idx in groups.items()}),
        rules=tuple(rules),
        output=output,
    )


def _encode(net: FuzzyNetwork, X: np.ndarray) -> np.ndarray:
    """Column drive values: anchor * direct + (1 - anchor) * complement"""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(net.variables):
        raise DimensionMismatch(
            f"Expected {len(net.variables)} crisp values per sample, got shape {X.shape}")

    E = np.empty((X.shape[0], net.fuzz.S.shape[1]), dtype=np.float64)
    for i, (var, cols) in enumerate(zip(net.variables, net.column_slices)):
        u = var.universe
        x = X[:, i]
        if not np.all((x >= u.lo) & (x <= u.hi)):
            raise OutOfUniverse(f"Input for {var.name!r} outside universe [{u.lo}, {u.hi}]")

        direct = (x - u.lo) / u.span
        complement = (u.hi - x) / u.span
        for c in range(cols.start, cols.stop):
            p = net.fuzz.anchors[c]
            E[:, c] = p * direct + (1.0 - p) * complement

    return E


def _fuzzify(net: FuzzyNetwork, X: np.ndarray) -> np.ndarray:
    E = _encode(net, X)

    if net.backend == BACKEND_DEVICE:
        fuzz_xbar = net.crossbars[0]
        return np.maximum(fuzz_xbar.read_vmm(E, COLUMNS_AS_INPUTS), 0.0)

    S = net.fuzz.S
    V = np.zeros((E.shape[0], S.shape[0]), dtype=np.float64)
    for rows, cols in zip(net.row_slices, net.column_slices):
        block = V[:, rows]
        for c in range(cols.start, cols.stop):
            block += E[:, c, None] * S[rows, c][None, :]

    return V


def _raw_minterms(net: FuzzyNetwork, V: np.ndarray) -> np.ndarray:
    Mt = net.minterms.Mt
    if V.ndim != 2 or V.shape[1] != Mt.shape[0]:
        raise DimensionMismatch(f"Fuzzified vector length {V.shape[-1]} does not match {Mt.shape[0]} rows")

    if net.backend == BACKEND_DEVICE:
        minterm_xbar = net.crossbars[1]
        return np.maximum(minterm_xbar.read_vmm(V, ROWS_AS_INPUTS), 0.0)

    # per-variable dot products summed in variable order keep mirrored rules bit-identical
    raw = np.zeros((V.shape[0], Mt.shape[1]), dtype=np.float64)
    for rows in net.row_slices:
        block = V[:, rows]
        for j in range(Mt.shape[1]):
            raw[:, j] += (block * Mt[rows, j][None, :]).sum(axis=1)

    return raw


def _activate(net: FuzzyNetwork, raw: np.ndarray) -> np.ndarray:
    m = raw ** net.minterms.n
    if not np.all(np.isfinite(m)):
        raise NumericFailure("Non-finite minterm activation")
    return m


def _aggregate(net: FuzzyNetwork, M: np.ndarray) -> Dict[str, np.ndarray]:
    if M.ndim != 2 or M.shape[1] != net.rule_count:
        raise DimensionMismatch(f"Expected {net.rule_count} activations, got shape {M.shape}")

    out = {}
    for label, indices in net.agg.groups.items():
        total = M[:, indices[0]].copy()
        for j in indices[1:]:
            total += M[:, j]
        out[label] = total

    return out


def fuzzify(net: FuzzyNetwork, inputs: Sequence[float]) -> np.ndarray:
    return _fuzzify(net, np.atleast_2d(np.asarray(inputs, dtype=np.float64)))[0]


def minterm_activations(net: FuzzyNetwork, v: Sequence[float]) -> np.ndarray:
    V = np.atleast_2d(np.asarray(v, dtype=np.float64))
    if np.any(V < 0.0):
        raise InvalidParamsException("Fuzzified values must be non-negative")

    return _activate(net, _raw_minterms(net, V))[0]


def aggregate(net: FuzzyNetwork, m: Sequence[float]) -> Dict[str, float]:
    M = np.atleast_2d(np.asarray(m, dtype=np.float64))
    return {label: float(value[0]) for label, value in _aggregate(net, M).items()}


def infer_batch(net: FuzzyNetwork, X) -> Dict[str, np.ndarray]:
    """Evaluate every row of X (one crisp value per variable) in one pass"""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, len(net.variables))

    V = _fuzzify(net, X)
    M = _activate(net, _raw_minterms(net, V))
    return _aggregate(net, M)


def infer(net: FuzzyNetwork, inputs: Sequence[float]) -> Dict[str, float]:
    X = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if X.shape[0] != 1:
        raise DimensionMismatch("infer() takes a single crisp vector; use infer_batch()")

    return {label: float(value[0]) for label, value in infer_batch(net, X).items()}


def _concept(net: FuzzyNetwork, concept: str) -> str:
    if concept not in net.agg.groups:
        raise InvalidParamsException(f"Network has no output concept {concept!r}")
    return concept


def fuzzy_xor(net: FuzzyNetwork, a: float, b: float, concept: str = DEFAULT_CONCEPT) -> float:
    return infer(net, [a, b])[_concept(net, concept)]


def fuzzy_xor_batch(net: FuzzyNetwork, a, b, concept: str = DEFAULT_CONCEPT) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"Pair operands differ in length: {a.shape} != {b.shape}")

    return infer_batch(net, np.column_stack((a, b)))[_concept(net, concept)]


def inference_surface(net: FuzzyNetwork, resolution: int, concept: str = DEFAULT_CONCEPT) -> np.ndarray:
    """surface[i, j] = fuzzy_xor(a_i, b_j) on uniform samples of both universes"""
    if resolution < 2:
        raise InvalidParamsException(f"Surface resolution must be >= 2: {resolution}")
    if len(net.variables) != 2:
        raise InvalidParamsException("Inference surface needs a two-input network")

    ua = net.variables[0].universe
    ub = net.variables[1].universe
    a, b = np.meshgrid(
        np.linspace(ua.lo, ua.hi, resolution),
        np.linspace(ub.lo, ub.hi, resolution),
        indexing="ij")

    return fuzzy_xor_batch(net, a, b, concept).reshape(resolution, resolution)


def normalize_surface(surface: np.ndarray) -> np.ndarray:
    """Min-max map to [0, 255]; a constant surface maps to zeros"""
    lo = surface.min()
    span = surface.max() - lo
    if span <= 0.0:
        return np.zeros_like(surface, dtype=np.float64)

    return (surface - lo) / span * MAX_INTENSITY


def network_to_dict(net: FuzzyNetwork) -> dict:
    Mt = net.minterms.Mt
    return {
        "format": NETWORK_FORMAT,
        "version": NETWORK_VERSION,
        "exponent": net.minterms.n,
        "output": net.output,
        "variables": [
            {
                "name": var.name,
                "lo": var.universe.lo,
                "hi": var.universe.hi,
                "k": var.universe.k,
                "terms": [
                    {"name": term.name, "anchor": term.anchor, "samples": term.samples.tolist()}
                    for term in var.terms
                ],
            }
            for var in net.variables
        ],
        "rules": [
            {"antecedent": [list(pair) for pair in rule.antecedent], "consequent": rule.consequent}
            for rule in net.rules
        ],
        "minterms": [Mt[:, j].tolist() for j in range(Mt.shape[1])],
        "groups": {label: list(indices) for label, indices in net.agg.groups.items()},
    }


def network_from_dict(data: dict) -> FuzzyNetwork:
    try:
        if data.get("format") != NETWORK_FORMAT or data.get("version") != NETWORK_VERSION:
            raise InvalidParamsException("Not a memfuzzy network document")

        variables = []
        for item in data["variables"]:
            universe = Universe(float(item["lo"]), float(item["hi"]), int(item["k"]))
            terms = tuple(
                Term(t["name"], float(t["anchor"]), _frozen(t["samples"]))
                for t in item["terms"]
            )
            variables.append(Variable(item["name"], universe, terms))

        rules = tuple(
            MintermSpec(tuple((v, t) for v, t in rule["antecedent"]), rule["consequent"])
            for rule in data["rules"]
        )
        net = build_network(variables, rules, float(data["exponent"]), data["output"])

        Mt = _frozen(np.asarray(data["minterms"], dtype=np.float64).T)
        groups = {label: tuple(int(i) for i in idx) for label, idx in data["groups"].items()}
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidParamsException(f"Malformed network document: {e}")

    return replace(net, minterms=MintermLayer(Mt, net.minterms.n), agg=AggregationLayer(groups))


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


def dump_network(net: FuzzyNetwork) -> str:
    return json.dumps(network_to_dict(net), indent=2)


def load_network(text: str) -> FuzzyNetwork:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParamsException(f"Invalid network JSON: {e}")

    return network_from_dict(data)
