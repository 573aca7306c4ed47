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

import itertools
import logging
from fractions import Fraction

import pytest

from situs_lab.errors import DomainError
from situs_lab.lifting import enumerate_morphisms
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import all_topologies
from situs_lab.spaces import embed_metric
from situs_lab.spaces import embed_top
from situs_lab.spaces import is_continuous
from situs_lab.spaces import point_situs
from situs_lab.spaces import topologise
from situs_lab.spaces import two_point_situs
from situs_lab.situs import validate_situs

logger = logging.getLogger(__name__)


def test_topology_counts():
    # number of preorders on n points
    assert [len(list(all_topologies(range(n)))) for n in range(1, 4)] == [1, 4, 29]


def test_from_opens_validates_axioms():
    with pytest.raises(DomainError):
        FiniteTopSpace.from_opens((0, 1), [set(), {0, 1}, {0}, {1, 2}])
    with pytest.raises(DomainError):
        FiniteTopSpace.from_opens((0, 1, 2), [set(), {0, 1, 2}, {0}, {1}])
    X = FiniteTopSpace.from_opens((0, 1), [set(), {1}, {0, 1}])
    assert X == FiniteTopSpace.sierpinski()


def test_minimal_opens_must_be_consistent():
    with pytest.raises(DomainError):
        FiniteTopSpace((0, 1), {0: {0, 1}, 1: {0, 1, 2}})
    with pytest.raises(DomainError):
        FiniteTopSpace((0, 1), {0: {0}, 1: {0}})


def test_opens_and_subspace():
    S = FiniteTopSpace.sierpinski()
    assert S.opens() == [frozenset(), frozenset({1}), frozenset({0, 1})]
    assert S.subspace({0}).opens() == [frozenset(), frozenset({0})]
    product = S.product(FiniteTopSpace.discrete(("a", )))
    assert product.U((0, "a")) == frozenset({(0, "a"), (1, "a")})


def test_continuity_on_sierpinski():
    S = FiniteTopSpace.sierpinski()
    assert is_continuous({0: 0, 1: 1}, S, S)
    assert not is_continuous({0: 1, 1: 0}, S, S)


def test_embed_top_grades():
    S = embed_top(FiniteTopSpace.sierpinski(), 3)
    assert validate_situs(S)
    assert S.core(2) == frozenset({(0, 0), (0, 1), (1, 1)})
    assert (0, 1, 1) in S.core(3)
    assert (1, 0, 0) not in S.core(3)


def test_point_situses():
    assert point_situs(2).carrier(1) == ((0, ), )
    assert two_point_situs(2).core(2) == frozenset({(0, 0), (1, 1)})


def continuous_maps(X: FiniteTopSpace, Y: FiniteTopSpace) -> set[tuple]:
    maps = set()
    for values in itertools.product(Y.points, repeat=len(X.points)):
        f = dict(zip(X.points, values))
        if is_continuous(f, X, Y):
            maps.add(values)
    return maps


def test_topological_faithfulness_on_small_spaces():
    """
    For all topologies on at most three points, morphisms X_pa -> Y_pa are
    exactly the continuous maps, and topologising X_pa gives X back.
    """
    spaces = [X for n in range(1, 4) for X in all_topologies(tuple(range(n)))]
    embedded = {id(X): embed_top(X, 2) for X in spaces}
    for X in spaces:
        assert topologise(embedded[id(X)]) == X
    pairs = 0
    for X, Y in itertools.product(spaces, repeat=2):
        morphisms = enumerate_morphisms(embedded[id(X)], embedded[id(Y)])
        situs_maps = {tuple(f(1, (x, ))[0] for x in X.points) for f in morphisms}
        assert len(situs_maps) == len(morphisms)
        assert situs_maps == continuous_maps(X, Y)
        pairs += 1
    logger.info(f"Checked {pairs} pairs of spaces")


def test_metric_space_validation():
    with pytest.raises(DomainError):
        FiniteMetricSpace((0, 1), ((0, 1), (2, 0)), (1, ))
    with pytest.raises(DomainError):
        FiniteMetricSpace((0, 1, 2), ((0, 1, 5), (1, 0, 1), (5, 1, 0)), (1, ))
    with pytest.raises(DomainError):
        FiniteMetricSpace((0, 1), ((0, 1), (1, 0)), (1, 2))
    with pytest.raises(DomainError):
        FiniteMetricSpace((0, 1), ((0, 1), (1, 0)), (0.5, ))


def test_points_on_line():
    M = FiniteMetricSpace.from_points_on_line({"a": 0, "b": "1/2", "c": 2}, ("1", "1/4"))
    assert M.d("a", "b") == Fraction(1, 2)
    assert M.d("c", "a") == 2
    assert M.grid == (Fraction(1), Fraction(1, 4))
    assert M.min_positive_distance == Fraction(1, 2)
    assert M.diameter == 2
    assert M.restrict({"a", "c"}).points == ("a", "c")


def test_embed_metric_grades():
    M = FiniteMetricSpace.from_points_on_line({0: 0, 1: 1, 2: 3}, (4, 2))
    S = embed_metric(M, 2)
    assert validate_situs(S)
    assert S.filter(2).grades[0] == frozenset(S.carrier(2))
    assert S.core(2) == frozenset({(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)})


def test_topologise_metric():
    M = FiniteMetricSpace.from_points_on_line({0: 0, 1: 1, 2: 3}, (4, 2))
    T = topologise(embed_metric(M, 2))
    assert T.U(0) == frozenset({0, 1})
    assert T.U(2) == frozenset({2})
