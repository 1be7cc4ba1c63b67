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

"""Fuzzy rule-base DSL

    # comment
    var x1: 0 .. 1 { small = tri(0, 0, 1), big = tri(0, 1, 1) }
    out y: 0 .. 1 { small = tri(0, 0, 1), big = tri(0, 1, 1) }
    IF x1 is small AND x2 is big THEN y is big
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedCharacters, VisitError

from .constants import BACKEND_IDEAL, BACKEND_DEVICE, DEFAULT_TOLERANCE
from .device import DeviceParams
from .exception import (
    MemfuzzyException, InvalidParamsException, RuleSyntaxError, UnknownName,
    DuplicateName, RuleConflict,
)
from .fuzzy import (
    FuzzyNetwork, MembershipFunction, MintermSpec, Term, Universe, Variable,
    build_network, discretize,
)

GRAMMAR = r"""
start: decl+ rule+

decl: (VAR | OUT) IDENT ":" NUMBER ".." NUMBER "{" term ("," term)* "}"
term: IDENT "=" "tri" "(" NUMBER "," NUMBER "," NUMBER ")"
rule: "IF" cond ("AND" cond)* "THEN" IDENT "is" IDENT
cond: IDENT "is" IDENT

VAR: "var"
OUT: "out"
IDENT: /[A-Za-z_][A-Za-z0-9_]*/
NUMBER: /[+-]?(\d+(\.\d+)?|\.\d+)([eE][+-]?\d+)?/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, start="start", parser="lalr", propagate_positions=True)

MAX_COVERAGE_COMBINATIONS = 10000


@dataclass(frozen=True)
class VariableDecl:
    name: str
    lo: float
    hi: float
    terms: Dict[str, MembershipFunction]
    kind: str = "var"

    def universe(self, k: int) -> Universe:
        return Universe(self.lo, self.hi, k)


@dataclass(frozen=True)
class Rule:
    antecedent: Tuple[Tuple[str, str], ...]
    consequent: Tuple[str, str]


@dataclass(frozen=True)
class RuleBase:
    inputs: Tuple[VariableDecl, ...]
    output: VariableDecl
    rules: Tuple[Rule, ...]

    def input(self, name: str) -> Optional[VariableDecl]:
        return next((decl for decl in self.inputs if decl.name == name), None)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    rule_index: Optional[int] = None
    combination: Optional[Tuple[str, ...]] = None

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


@v_args(inline=True)
class _RuleBaseBuilder(Transformer):
    def term(self, name: Token, a: Token, b: Token, c: Token):
        values = (float(a), float(b), float(c))
        if not values[0] <= values[1] <= values[2]:
            raise InvalidParamsException(
                f"{name.line}:{name.column}: tri{values} requires a <= b <= c")
        return name, MembershipFunction.triangular(*values)

    def decl(self, kind: Token, name: Token, lo: Token, hi: Token, *terms):
        if not float(lo) < float(hi):
            raise InvalidParamsException(f"{name.line}:{name.column}: empty universe [{lo}, {hi}]")

        named: Dict[str, MembershipFunction] = {}
        for term_name, mf in terms:
            if term_name in named:
                raise DuplicateName(str(term_name), term_name.line, term_name.column)
            named[str(term_name)] = mf

        return name, VariableDecl(str(name), float(lo), float(hi), named, str(kind))

    def cond(self, var: Token, term: Token):
        return var, term

    def rule(self, *items):
        *conds, out_var, out_term = items
        return tuple(conds), (out_var, out_term)

    def start(self, *items):
        return items


def _unwrap(e: VisitError) -> Exception:
    return e.orig_exc if isinstance(e.orig_exc, MemfuzzyException) else e


def _syntax_error(e: UnexpectedInput, text: str) -> RuleSyntaxError:
    line = getattr(e, "line", -1)
    column = getattr(e, "column", -1)
    if line is None or line < 1:
        # end of input
        lines = text.split("\n")
        line, column = len(lines), len(lines[-1]) + 1
        if not text.strip():
            line, column = 1, 1

    if isinstance(e, UnexpectedCharacters):
        expected = e.allowed or ()
        found = text[e.pos_in_stream] if 0 <= e.pos_in_stream < len(text) else ""
    else:
        expected = getattr(e, "expected", None) or ()
        token = getattr(e, "token", None)
        found = "end of input" if token is None or token.type == "$END" else str(token)

    return RuleSyntaxError(line, column, expected, found)


def parse(text: str) -> RuleBase:
    try:
        items = _RuleBaseBuilder().transform(_parser.parse(text))
    except UnexpectedInput as e:
        raise _syntax_error(e, text)
    except VisitError as e:
        raise _unwrap(e)

    decls: Dict[str, VariableDecl] = {}
    inputs: List[VariableDecl] = []
    outputs: List[VariableDecl] = []
    raw_rules = []
    for item in items:
        first = item[0]
        if isinstance(first, Token):
            name, decl = item
            if decl.name in decls:
                raise DuplicateName(decl.name, name.line, name.column)
            decls[decl.name] = decl
            (outputs if decl.kind == "out" else inputs).append(decl)
        else:
            raw_rules.append(item)

    if len(outputs) != 1:
        raise InvalidParamsException(f"Rule base needs exactly one output declaration, got {len(outputs)}")
    if not inputs:
        raise InvalidParamsException("Rule base declares no input variables")
    output = outputs[0]

    rules = []
    for index, (conds, (out_var, out_term)) in enumerate(raw_rules):
        antecedent = []
        seen = set()
        for var, term in conds:
            decl = decls.get(str(var))
            if decl is None or decl.kind != "var":
                raise UnknownName(str(var), index, "input variable")
            if str(term) not in decl.terms:
                raise UnknownName(str(term), index, f"term of {decl.name!r}")
            if decl.name in seen:
                raise DuplicateName(decl.name, var.line, var.column)
            seen.add(decl.name)
            antecedent.append((decl.name, str(term)))

        if str(out_var) != output.name:
            raise UnknownName(str(out_var), index, "output variable")
        if str(out_term) not in output.terms:
            raise UnknownName(str(out_term), index, f"term of {output.name!r}")

        rules.append(Rule(tuple(antecedent), (output.name, str(out_term))))

    logging.debug(f"parse() {len(inputs)} inputs, {len(rules)} rules")
    return RuleBase(tuple(inputs), output, tuple(rules))


def validate(rb: RuleBase) -> List[Diagnostic]:
    diagnostics: List[Diagnostic] = []

    # identical antecedents
    seen: Dict[frozenset, int] = {}
    for index, rule in enumerate(rb.rules):
        key = frozenset(rule.antecedent)
        if key in seen:
            first = rb.rules[seen[key]]
            if first.consequent != rule.consequent:
                diagnostics.append(Diagnostic(
                    "error",
                    f"rules {seen[key]} and {index} share an antecedent but conclude "
                    f"{first.consequent[1]!r} and {rule.consequent[1]!r}",
                    index))
            else:
                diagnostics.append(Diagnostic("warning", f"rule {index} repeats rule {seen[key]}", index))
        else:
            seen[key] = index

    # unused input terms
    used = {pair for rule in rb.rules for pair in rule.antecedent}
    for decl in rb.inputs:
        for term in decl.terms:
            if (decl.name, term) not in used:
                diagnostics.append(Diagnostic("warning", f"term {term!r} of {decl.name!r} is never used"))

    # uncovered minterms
    total = int(np.prod([len(decl.terms) for decl in rb.inputs]))
    if total > MAX_COVERAGE_COMBINATIONS:
        diagnostics.append(Diagnostic("warning", f"coverage of {total} term combinations not checked"))
        return diagnostics

    covered = set()
    for rule in rb.rules:
        named = dict(rule.antecedent)
        choices = [[named[d.name]] if d.name in named else list(d.terms) for d in rb.inputs]
        covered.update(itertools.product(*choices))

    for combination in itertools.product(*[list(decl.terms) for decl in rb.inputs]):
        if combination not in covered:
            diagnostics.append(Diagnostic(
                "warning",
                f"uncovered combination ({', '.join(combination)})",
                combination=combination))

    return diagnostics


def compile_to_network(rb: RuleBase, k: int, n: float, backend: str = BACKEND_IDEAL,
                       params: DeviceParams = DeviceParams(),
                       tol: float = DEFAULT_TOLERANCE) -> FuzzyNetwork:
    net, _ = compile_with_diagnostics(rb, k, n, backend, params, tol)
    return net


def compile_with_diagnostics(rb: RuleBase, k: int, n: float, backend: str = BACKEND_IDEAL,
                             params: DeviceParams = DeviceParams(),
                             tol: float = DEFAULT_TOLERANCE) -> Tuple[FuzzyNetwork, List[Diagnostic]]:
    """Lay out one fuzzification column per input term and one minterm column per rule

    Returns the network and the non-fatal diagnostics. Errors raise RuleConflict.

    :param rb: parsed rule base
    :param k: grid points per input universe
    :param n: minterm activation exponent
    :param backend: ideal or device
    :param params: device parameters (device backend only)
    :param tol: programming tolerance as a fraction of w_max (device backend only)
    """
    if k < 2:
        raise InvalidParamsException(f"Grid needs at least 2 points: k={k}")
    if n < 1.0:
        raise InvalidParamsException(f"Activation exponent must be >= 1: n={n}")
    if backend not in (BACKEND_IDEAL, BACKEND_DEVICE):
        raise InvalidParamsException(f"Invalid backend: {backend}")

    diagnostics = validate(rb)
    for diagnostic in diagnostics:
        if not diagnostic.is_error:
            logging.warning(str(diagnostic))
    errors = [str(d) for d in diagnostics if d.is_error]
    if errors:
        raise RuleConflict("; ".join(errors))

    variables = []
    for decl in rb.inputs:
        u = decl.universe(k)
        terms = []
        for name, mf in decl.terms.items():
            samples = discretize(mf, u)
            samples.setflags(write=False)
            terms.append(Term(name, mf.anchor(u), samples))
        variables.append(Variable(decl.name, u, tuple(terms)))

    rules = [MintermSpec(rule.antecedent, rule.consequent[1]) for rule in rb.rules]
    net = build_network(variables, rules, n, rb.output.name)

    if backend == BACKEND_DEVICE:
        net, _ = net.to_device(params, tol)

    return net, [d for d in diagnostics if not d.is_error]
