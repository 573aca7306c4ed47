# SPDX-FileCopyrightText: Copyright (c) 2025 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
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

from dataclasses import dataclass

import pytest

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.model_theory import FiniteStructure
from situs_lab.model_theory import indiscernibility_grade
from situs_lab.model_theory import is_homogeneous
from situs_lab.model_theory import kolmogorov_quotient
from situs_lab.model_theory import linear_order
from situs_lab.model_theory import parse_formula
from situs_lab.model_theory import pure_set
from situs_lab.model_theory import qf_types
from situs_lab.model_theory import stone_hausdorff_quotient
from situs_lab.model_theory import stone_situs
from situs_lab.situs import validate_situs
from situs_lab.spaces import FiniteTopSpace

POSITION_OF_TWO = ["(< x1 @2)", "(= x1 @2)", "(< @2 x1)"]


@dataclass
class ParseCase:
    text: str
    reason: str


BAD_FORMULAS = [
    ParseCase("(and (< x1 x2)", "unbalanced"),
    ParseCase("x1", "bare term"),
    ParseCase("(< y1 x2)", "not a variable"),
    ParseCase("( )", "missing operator"),
    ParseCase("(not true false)", "not takes one formula"),
    ParseCase("(= x1)", "equality takes two terms"),
    ParseCase("(< x1 x2) true", "trailing input"),
]


@pytest.mark.parametrize("case", BAD_FORMULAS, ids=[case.reason for case in BAD_FORMULAS])
def test_parse_errors(case):
    with pytest.raises(DomainError):
        parse_formula(case.text)


def test_parse_formula():
    phi = parse_formula("(or (not (< x1 x3)) (= x2   @a))")
    assert phi.op == "or"
    assert phi.arity == 3
    assert phi.parameters == frozenset({"a"})
    assert str(phi) == "(or (not (< x1 x3)) (= x2 @a))"


def test_structure_validation():
    with pytest.raises(DomainError):
        FiniteStructure((1, 1))
    with pytest.raises(DomainError):
        FiniteStructure((1, 2), {"R": [(1, ), (1, 2)]})
    with pytest.raises(DomainError):
        FiniteStructure((1, 2), {"R": [(1, 3)]})
    with pytest.raises(DomainError):
        FiniteStructure((1, 2), {"=": [(1, 1)]})
    M = FiniteStructure((1, 2), {}, {"P": 1})
    assert not M.holds("P", (1, ))


def test_evaluation():
    M = linear_order(3)
    phi = parse_formula("(and (< x1 x2) (not (= x2 @3)))")
    assert phi.evaluate(M, (1, 2))
    assert not phi.evaluate(M, (1, 3))
    with pytest.raises(DomainError):
        phi.evaluate(M, (1, ))
    with pytest.raises(DomainError):
        parse_formula("(< x1 @9)").evaluate(M, (1, ))


def test_indiscernible_sequences():
    M = linear_order(4)
    phi = parse_formula("(< x1 x2)")
    assert is_homogeneous(M, phi, (1, 2, 3))
    assert is_homogeneous(M, phi, (3, 2, 1))
    assert not is_homogeneous(M, phi, (1, 3, 2))
    # repeated entries are skipped
    assert is_homogeneous(M, phi, (1, 1, 2))
    grade = indiscernibility_grade(M, phi, 2)
    assert grade == frozenset((a, b) for a in M.universe for b in M.universe)
    assert indiscernibility_grade(pure_set(3), "(= x1 x2)", 3) == frozenset(
        (a, b, c) for a in (1, 2, 3) for b in (1, 2, 3) for c in (1, 2, 3))


def test_unknown_symbols_are_rejected():
    with pytest.raises(DomainError):
        indiscernibility_grade(linear_order(2), "(R x1)", 1)
    with pytest.raises(DomainError):
        indiscernibility_grade(linear_order(2), "(< x1)", 1)


def test_stone_situs_guards():
    M = linear_order(4)
    with pytest.raises(DomainError):
        stone_situs(M, set(), ["(= x1 @2)"], 2)
    with pytest.raises(DegreeBudgetError):
        stone_situs(M, set(), ["(< x1 x3)"], 2)
    with pytest.raises(DomainError):
        qf_types(M, {7}, [])


def test_stone_situs_without_formulas_is_antidiscrete():
    S = stone_situs(pure_set(2), set(), [], 2)
    assert S.core(2) == frozenset(S.carrier(2))


def test_stone_situs_of_linear_order():
    S = stone_situs(linear_order(4), {2}, POSITION_OF_TWO, 3)
    assert validate_situs(S)
    assert S.name == "Stone(M/A)"
    assert (3, 4) in S.core(2)
    assert (1, 3) not in S.core(2)


@pytest.mark.parametrize("D", [2, 3])
def test_hausdorff_quotient_matches_types(D):
    """Points of the quotient are the types over {2}: below, equal, above."""
    S = stone_situs(linear_order(4), {2}, POSITION_OF_TWO, D)
    result = stone_hausdorff_quotient(S)
    assert result.agrees
    assert set(result.classes) == {frozenset({1}), frozenset({2}), frozenset({3, 4})}
    assert set(result.types) == set(result.classes)
    assert len(result.space.points) == 3


def test_types_ignore_binary_formulas():
    assert qf_types(linear_order(3), set(), ["(< x1 x2)"]) == [frozenset({1, 2, 3})]


def test_kolmogorov_quotient():
    space, classes = kolmogorov_quotient(FiniteTopSpace.antidiscrete(("a", "b")))
    assert classes == [frozenset({"a", "b"})]
    assert len(space.points) == 1
    space, classes = kolmogorov_quotient(FiniteTopSpace.sierpinski())
    assert len(classes) == 2
    assert space.U((1, )) == frozenset({(1, )})
