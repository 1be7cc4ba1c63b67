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

import os
import unittest

import numpy as np

import memfuzzy
from memfuzzy.constants import BACKEND_DEVICE, BACKEND_IDEAL
from memfuzzy.device import DeviceParams
from memfuzzy.exception import (
    InvalidParamsException, DimensionMismatch, OutOfUniverse,
)
from memfuzzy.fuzzy import (
    Universe, MembershipFunction, Term, Variable, MintermSpec, FuzzyNetwork,
    discretize, complement_encode, build_network, fuzzify, minterm_activations, aggregate,
    infer, infer_batch, fuzzy_xor, fuzzy_xor_batch, inference_surface, normalize_surface,
    dump_network, load_network,
)
from memfuzzy.rulebase import parse, compile_to_network

XOR_RULES = os.path.join(os.path.dirname(memfuzzy.__file__), "samples", "xor.rules")


def xor_network(k: int = 16, n: float = 2.0) -> FuzzyNetwork:
    with open(XOR_RULES, "r") as f:
        return compile_to_network(parse(f.read()), k, n)


def ramp_xor(a, b, k: int) -> np.ndarray:
    """Closed form of the XOR network with complementary ramps and n = 2"""
    g = np.linspace(0.0, 1.0, k)
    A = np.sum(g * g)
    B = np.sum(g * (1.0 - g))
    d = np.asarray(a) - np.asarray(b)
    return 2.0 * (A + B) ** 2 + 2.0 * d * d * (A - B) ** 2


class TestMembership(unittest.TestCase):
    def test_discretize_triangles(self):
        u = Universe(0.0, 1.0, 3)
        np.testing.assert_allclose(discretize(MembershipFunction.triangular(0, 0, 1), u), [1.0, 0.5, 0.0])
        np.testing.assert_allclose(discretize(MembershipFunction.triangular(0, 1, 1), u), [0.0, 0.5, 1.0])

    def test_discretize_sampled(self):
        u = Universe(0.0, 1.0, 4)
        mf = MembershipFunction.sampled([0.0, 0.2, 1.0, 0.3])
        np.testing.assert_array_equal(discretize(mf, u), [0.0, 0.2, 1.0, 0.3])
        self.assertAlmostEqual(mf.anchor(u), 2.0 / 3.0)

        with self.assertRaises(DimensionMismatch):
            discretize(MembershipFunction.sampled([0.5, 0.5]), u)
        with self.assertRaises(InvalidParamsException):
            discretize(MembershipFunction.sampled([0.0, 1.5, 0.0, 0.0]), u)

    def test_empty_support(self):
        with self.assertRaises(InvalidParamsException):
            discretize(MembershipFunction.triangular(2, 3, 4), Universe(0.0, 1.0, 8))

    def test_invalid_shapes(self):
        with self.assertRaises(InvalidParamsException):
            MembershipFunction.triangular(0, 1, 0.5)
        with self.assertRaises(InvalidParamsException):
            Universe(1.0, 1.0, 4)
        with self.assertRaises(InvalidParamsException):
            Universe(0.0, 1.0, 1)

    def test_anchor_of_triangle(self):
        u = Universe(0.0, 255.0, 16)
        self.assertEqual(MembershipFunction.triangular(0, 0, 255).anchor(u), 0.0)
        self.assertEqual(MembershipFunction.triangular(0, 255, 255).anchor(u), 1.0)
        self.assertAlmostEqual(MembershipFunction.triangular(0, 127.5, 255).anchor(u), 0.5)

    def test_complement_encode(self):
        d, c = complement_encode(0.3, Universe(0.0, 1.0, 3))
        self.assertAlmostEqual(d, 0.3)
        self.assertAlmostEqual(c, 0.7)
        self.assertEqual(complement_encode(3.0, Universe(2.0, 6.0, 5)), (1.0, 3.0))

        with self.assertRaises(OutOfUniverse):
            complement_encode(1.5, Universe(0.0, 1.0, 3))


class TestXorNetwork(unittest.TestCase):
    def test_layout(self):
        net = xor_network(k=3)
        self.assertEqual(net.fuzz.S.shape, (6, 4))
        self.assertEqual(net.minterms.Mt.shape, (6, 4))
        self.assertEqual(net.rule_count, 4)
        self.assertEqual(sorted(net.concepts), ["big", "small"])
        self.assertEqual(net.agg.groups["big"], (1, 2))
        self.assertEqual(net.backend, BACKEND_IDEAL)

    def test_fuzzify(self):
        net = xor_network(k=3)
        np.testing.assert_allclose(fuzzify(net, [1.0, 0.0]), [0.0, 0.5, 1.0, 1.0, 0.5, 0.0])
        np.testing.assert_allclose(fuzzify(net, [0.5, 0.5]), [0.5] * 6)

    def test_corner_values(self):
        net = xor_network(k=3)
        self.assertAlmostEqual(fuzzy_xor(net, 1.0, 0.0), 6.5)
        self.assertAlmostEqual(fuzzy_xor(net, 0.0, 1.0), 6.5)
        self.assertAlmostEqual(fuzzy_xor(net, 0.0, 0.0), 4.5)
        self.assertAlmostEqual(fuzzy_xor(net, 1.0, 1.0), 4.5)

    def test_stages(self):
        net = xor_network(k=3)
        v = fuzzify(net, [1.0, 0.0])
        m = minterm_activations(net, v)
        np.testing.assert_allclose(m, [(1.25 + 0.25) ** 2, 0.25, 6.25, (0.25 + 1.25) ** 2])
        result = aggregate(net, m)
        self.assertAlmostEqual(result["big"], 6.5)
        self.assertAlmostEqual(result["small"], 4.5)
        self.assertEqual(infer(net, [1.0, 0.0]), result)

        with self.assertRaises(InvalidParamsException):
            minterm_activations(net, -v)
        with self.assertRaises(DimensionMismatch):
            minterm_activations(net, v[:4])
        with self.assertRaises(DimensionMismatch):
            aggregate(net, m[:3])

    def test_closed_form(self):
        net = xor_network(k=16)
        rng = np.random.default_rng(1)
        a = rng.uniform(0.0, 1.0, 200)
        b = rng.uniform(0.0, 1.0, 200)
        np.testing.assert_allclose(fuzzy_xor_batch(net, a, b), ramp_xor(a, b, 16), rtol=1e-12)

    def test_swap_symmetry_is_exact(self):
        net = xor_network(k=16)
        rng = np.random.default_rng(2)
        a = rng.uniform(0.0, 1.0, 500)
        b = rng.uniform(0.0, 1.0, 500)
        np.testing.assert_array_equal(fuzzy_xor_batch(net, a, b), fuzzy_xor_batch(net, b, a))

    def test_translation_invariance(self):
        net = xor_network(k=16)
        rng = np.random.default_rng(3)
        a = rng.uniform(0.0, 0.5, 100)
        b = rng.uniform(0.0, 0.5, 100)
        t = rng.uniform(0.0, 0.5, 100)
        np.testing.assert_allclose(fuzzy_xor_batch(net, a + t, b + t), fuzzy_xor_batch(net, a, b), rtol=1e-12)

    def test_difference_profile(self):
        net = xor_network(k=16)
        d = np.linspace(0.0, 0.5, 11)
        values = fuzzy_xor_batch(net, np.full_like(d, 0.5), 0.5 + d)
        self.assertTrue(np.all(np.diff(values) > 0.0))
        np.testing.assert_allclose(values, fuzzy_xor_batch(net, np.full_like(d, 0.5), 0.5 - d), rtol=1e-12)

    def test_exponent_sharpens_contrast(self):
        net = xor_network(k=16)
        ratios = []
        for n in (2.0, 4.0, 7.0):
            sharp = net.with_exponent(n)
            ratios.append(fuzzy_xor(sharp, 0.0, 1.0) / fuzzy_xor(sharp, 0.0, 0.0))

        self.assertLess(ratios[0], ratios[1])
        self.assertLess(ratios[1], ratios[2])

        with self.assertRaises(InvalidParamsException):
            net.with_exponent(0.5)

    def test_input_errors(self):
        net = xor_network(k=3)
        with self.assertRaises(OutOfUniverse):
            fuzzy_xor(net, 1.2, 0.0)
        with self.assertRaises(DimensionMismatch):
            infer(net, [0.1, 0.2, 0.3])
        with self.assertRaises(DimensionMismatch):
            fuzzy_xor_batch(net, [0.1, 0.2], [0.3])
        with self.assertRaises(InvalidParamsException):
            fuzzy_xor(net, 0.0, 1.0, concept="medium")

    def test_batch_matches_single(self):
        net = xor_network(k=8)
        X = np.array([[0.0, 1.0], [0.25, 0.75], [0.6, 0.6]])
        batch = infer_batch(net, X)
        for i, row in enumerate(X):
            single = infer(net, row)
            for concept in net.concepts:
                self.assertAlmostEqual(batch[concept][i], single[concept], places=12)


class TestSurface(unittest.TestCase):
    def test_surface(self):
        net = xor_network(k=16)
        surface = inference_surface(net, 9)

        self.assertEqual(surface.shape, (9, 9))
        np.testing.assert_array_equal(surface, surface.T)
        np.testing.assert_allclose(np.diag(surface), np.full(9, surface[0, 0]), rtol=1e-12)
        self.assertEqual(surface.max(), surface[0, 8])
        self.assertEqual(surface[0, 8], surface[8, 0])

        normalized = normalize_surface(surface)
        np.testing.assert_allclose(np.diag(normalized), 0.0, atol=1e-9)
        self.assertAlmostEqual(normalized[0, 8], 255.0)

    def test_surface_at_resolution_64(self):
        net = xor_network(k=16)
        surface = inference_surface(net, 64)

        self.assertEqual(surface.shape, (64, 64))
        np.testing.assert_array_equal(surface, surface.T)
        np.testing.assert_allclose(np.diag(surface), np.full(64, surface[0, 0]), rtol=1e-12)
        self.assertEqual(surface.max(), surface[0, 63])

        normalized = normalize_surface(surface)
        self.assertGreaterEqual(normalized.min(), 0.0)
        self.assertAlmostEqual(normalized[0, 63], 255.0)
        self.assertAlmostEqual(normalized[63, 0], 255.0)
        np.testing.assert_allclose(np.diag(normalized), 0.0, atol=1e-9)

    def test_extremes_and_ranks_survive_exponent(self):
        net = xor_network(k=16)
        anti = np.arange(64)

        argmax, argmin, ranks = set(), set(), set()
        for n in (2.0, 4.0, 7.0):
            surface = inference_surface(net.with_exponent(n), 64)
            argmax.add(np.unravel_index(np.argmax(surface), surface.shape))
            argmin.add(np.unravel_index(np.argmin(surface), surface.shape))
            ranks.add(tuple(np.argsort(surface[anti, 63 - anti], kind="stable")))

        self.assertEqual(argmax, {(0, 63)})
        self.assertEqual(len(argmin), 1)
        i, j = argmin.pop()
        self.assertEqual(i, j)
        self.assertEqual(len(ranks), 1)

    def test_sweep_is_monotone(self):
        net = xor_network(k=16)
        b = np.linspace(0.0, 1.0, 256)
        values = fuzzy_xor_batch(net, np.zeros_like(b), b)
        self.assertTrue(np.all(np.diff(values) > 0.0))

    def test_corners_at_resolution_two(self):
        net = xor_network(k=3)
        np.testing.assert_allclose(inference_surface(net, 2), [[4.5, 6.5], [6.5, 4.5]])

    def test_constant_surface_normalizes_to_zero(self):
        np.testing.assert_array_equal(normalize_surface(np.full((3, 3), 7.0)), np.zeros((3, 3)))

    def test_resolution(self):
        with self.assertRaises(InvalidParamsException):
            inference_surface(xor_network(k=3), 1)


class TestGeneralNetworks(unittest.TestCase):
    def test_non_unit_universe(self):
        source = """
        var x1: 0 .. 255 { small = tri(0, 0, 255), big = tri(0, 255, 255) }
        var x2: 0 .. 255 { small = tri(0, 0, 255), big = tri(0, 255, 255) }
        out y: 0 .. 1 { small = tri(0, 0, 1), big = tri(0, 1, 1) }
        IF x1 is small AND x2 is small THEN y is small
        IF x1 is small AND x2 is big THEN y is big
        IF x1 is big AND x2 is small THEN y is big
        IF x1 is big AND x2 is big THEN y is small
        """
        wide = compile_to_network(parse(source), 16, 2.0)
        unit = xor_network(k=16)

        rng = np.random.default_rng(4)
        a = rng.uniform(0.0, 1.0, 50)
        b = rng.uniform(0.0, 1.0, 50)
        np.testing.assert_allclose(
            fuzzy_xor_batch(wide, 255.0 * a, 255.0 * b), fuzzy_xor_batch(unit, a, b), rtol=1e-9)

    def test_three_terms(self):
        source = """
        var x: 0 .. 1 { low = tri(0, 0, 0.5), mid = tri(0, 0.5, 1), high = tri(0.5, 1, 1) }
        out y: 0 .. 1 { a = tri(0, 0, 0.5), b = tri(0, 0.5, 1), c = tri(0.5, 1, 1) }
        IF x is low THEN y is a
        IF x is mid THEN y is b
        IF x is high THEN y is c
        """
        net = compile_to_network(parse(source), 21, 2.0)
        np.testing.assert_allclose(net.fuzz.anchors, [0.0, 0.5, 1.0])

        xs = np.linspace(0.0, 1.0, 11)
        out = infer_batch(net, xs.reshape(-1, 1))
        self.assertTrue(np.all(np.diff(out["a"]) < 0.0))
        self.assertTrue(np.all(np.diff(out["c"]) > 0.0))
        np.testing.assert_allclose(out["a"], out["c"][::-1], rtol=1e-12)

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(5)

        for trial in range(100):
            variables = []
            for i in range(int(rng.integers(1, 5))):
                lo = float(rng.uniform(-2.0, 2.0))
                u = Universe(lo, lo + float(rng.uniform(0.5, 3.0)), int(rng.integers(2, 33)))
                terms = tuple(
                    Term(f"t{j}", float(rng.uniform()), rng.uniform(0.05, 1.0, u.k))
                    for j in range(int(rng.integers(1, 4)))
                )
                variables.append(Variable(f"x{i}", u, terms))

            rules = []
            for _ in range(int(rng.integers(1, 6))):
                chosen = [var for var in variables if rng.uniform() < 0.7] or variables[:1]
                antecedent = tuple(
                    (var.name, var.terms[int(rng.integers(len(var.terms)))].name) for var in chosen)
                rules.append(MintermSpec(antecedent, str(rng.choice(["p", "q"]))))

            n = float(rng.choice([1.0, 2.0, 3.0, 4.5]))
            net = build_network(variables, rules, n)
            x = [float(rng.uniform(var.universe.lo, var.universe.hi)) for var in variables]

            # dense layout built independently of the network
            blocks_v = []
            for var, value in zip(variables, x):
                u = var.universe
                direct = (value - u.lo) / u.span
                complement = (u.hi - value) / u.span
                block = np.zeros(u.k)
                for term in var.terms:
                    block += (term.anchor * direct + (1.0 - term.anchor) * complement) * term.samples
                blocks_v.append(block)
            v = np.concatenate(blocks_v)

            expected = {}
            for rule in rules:
                named = dict(rule.antecedent)
                column = []
                for var in variables:
                    if var.name in named:
                        column.append(next(t.samples for t in var.terms if t.name == named[var.name]))
                    else:
                        column.append(np.full(var.universe.k, 1.0 / var.universe.k))
                raw = float(np.dot(np.concatenate(column), v))
                expected[rule.consequent] = expected.get(rule.consequent, 0.0) + raw ** n

            actual = infer(net, x)
            self.assertEqual(sorted(actual), sorted(expected), msg=f"trial {trial}")
            for concept in expected:
                np.testing.assert_allclose(actual[concept], expected[concept], rtol=1e-12,
                                           err_msg=f"trial {trial}")

    def test_invalid_networks(self):
        u = Universe(0.0, 1.0, 3)
        var = Variable("x", u, (Term("lo", 0.0, np.array([1.0, 0.5, 0.0])),))

        with self.assertRaises(DimensionMismatch):
            build_network([var], [], 2.0)
        with self.assertRaises(InvalidParamsException):
            build_network([var], [MintermSpec((("x", "hi"),), "p")], 2.0)
        with self.assertRaises(InvalidParamsException):
            build_network([var], [MintermSpec((("z", "lo"),), "p")], 2.0)
        with self.assertRaises(InvalidParamsException):
            build_network([var], [MintermSpec((("x", "lo"),), "p")], 0.5)


class TestSerialization(unittest.TestCase):
    def test_round_trip(self):
        net = xor_network(k=16, n=4.0)
        loaded = load_network(dump_network(net))

        np.testing.assert_array_equal(loaded.fuzz.S, net.fuzz.S)
        np.testing.assert_array_equal(loaded.minterms.Mt, net.minterms.Mt)
        np.testing.assert_array_equal(loaded.fuzz.anchors, net.fuzz.anchors)
        self.assertEqual(loaded.exponent, 4.0)
        self.assertEqual(loaded.agg.groups, net.agg.groups)
        self.assertEqual(loaded.rules, net.rules)
        self.assertEqual(loaded.output, "y")
        self.assertEqual(fuzzy_xor(loaded, 0.2, 0.9), fuzzy_xor(net, 0.2, 0.9))

    def test_bad_documents(self):
        with self.assertRaises(InvalidParamsException):
            load_network("{not json")
        with self.assertRaises(InvalidParamsException):
            load_network('{"format": "other", "version": 1}')
        with self.assertRaises(InvalidParamsException):
            load_network('{"format": "memfuzzy-network", "version": 1}')


class TestDeviceBackend(unittest.TestCase):
    def test_device_matches_ideal(self):
        net = xor_network(k=16)
        device_net, reports = net.to_device(DeviceParams(), tol=0.001)

        self.assertEqual(device_net.backend, BACKEND_DEVICE)
        self.assertEqual(len(reports), net.fuzz.S.size + net.minterms.Mt.size)
        self.assertTrue(all(r.residual <= 0.001 for r in reports))

        rng = np.random.default_rng(6)
        a = rng.uniform(0.0, 1.0, 300)
        b = rng.uniform(0.0, 1.0, 300)
        expected = fuzzy_xor_batch(net, a, b)
        actual = fuzzy_xor_batch(device_net, a, b)
        self.assertLess(np.max(np.abs(actual - expected) / expected), 0.01)

        self.assertEqual(device_net.to_ideal().backend, BACKEND_IDEAL)

    def test_default_tolerance_on_default_grid(self):
        net = xor_network(k=16)
        device_net, reports = net.to_device(DeviceParams(), tol=0.005)
        self.assertTrue(all(r.residual <= 0.005 for r in reports))

        rng = np.random.default_rng(7)
        a = rng.uniform(0.0, 1.0, 1000)
        b = rng.uniform(0.0, 1.0, 1000)
        expected = fuzzy_xor_batch(net, a, b)
        actual = fuzzy_xor_batch(device_net, a, b)
        self.assertLessEqual(np.max(np.abs(actual - expected) / expected), 0.01)
