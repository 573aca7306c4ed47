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

import pytest
from hypothesis import given
from hypothesis import strategies as st

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.simplicial import MonotoneMap
from situs_lab.simplicial import SSetMap
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import check_functoriality
from situs_lab.simplicial import check_simplicial_identities
from situs_lab.simplicial import compose_maps
from situs_lab.simplicial import connected_components
from situs_lab.simplicial import constant_sset
from situs_lab.simplicial import disjoint_union
from situs_lab.simplicial import grayson_sset_map
from situs_lab.simplicial import grayson_subdivide
from situs_lab.simplicial import is_sset_map
from situs_lab.simplicial import monotone_maps
from situs_lab.simplicial import nerve_of_order
from situs_lab.simplicial import product_sset
from situs_lab.simplicial import representable_sset
from situs_lab.simplicial import shift_counit
from situs_lab.simplicial import shift_plus1
from situs_lab.simplicial import shift_sset_map
from situs_lab.simplicial import standard_simplex
from situs_lab.simplicial import sub_sset
from situs_lab.simplicial import truncate


def monotone(max_size: int = 4):
    return st.tuples(st.integers(1, max_size), st.integers(1, max_size)).flatmap(
        lambda sizes: st.lists(st.integers(0, sizes[1] - 1), min_size=sizes[0], max_size=sizes[0]).map(
            lambda values: MonotoneMap(sizes[0], sizes[1], tuple(sorted(values)))))


def test_monotone_map_validation():
    with pytest.raises(DomainError):
        MonotoneMap(2, 2, (1, 0))
    with pytest.raises(DomainError):
        MonotoneMap(1, 2, (2, ))
    with pytest.raises(DomainError):
        MonotoneMap(0, 2, ())


@given(monotone())
def test_key_parses_back(theta):
    assert MonotoneMap.parse(theta.key) == theta


def test_parse_rejects_garbage():
    with pytest.raises(DomainError):
        MonotoneMap.parse("2->x:0,1")


def test_monotone_map_counts():
    # C(n + m - 1, m)
    assert len(list(monotone_maps(2, 3))) == 6
    assert len(list(monotone_maps(3, 2))) == 4


@pytest.mark.parametrize("build", [
    lambda: representable_sset((0, 1), 3),
    lambda: nerve_of_order(("a", "b", "c"), 3),
    lambda: standard_simplex(1, 3),
    lambda: constant_sset(("p", "q"), 3),
    lambda: disjoint_union(standard_simplex(0, 3), standard_simplex(1, 3)),
    lambda: product_sset(standard_simplex(1, 3), representable_sset((0, 1), 3)),
])
def test_constructions_are_functorial(build):
    X = build()
    assert check_functoriality(X) is None
    assert check_simplicial_identities(X) is None


def test_tabulate_checks_closure():
    with pytest.raises(DomainError):
        TruncatedSSet.tabulate(2, lambda n: [(0, ) * n], lambda theta, x: (1, ) * theta.source_size)


def test_carrier_outside_truncation():
    X = standard_simplex(1, 2)
    with pytest.raises(DegreeBudgetError):
        X.carrier(3)


def test_standard_simplex_shape():
    X = standard_simplex(2, 2)
    assert X.carrier(1) == ((0, ), (1, ), (2, ))
    assert len(X.carrier(2)) == 6
    assert X.non_degenerate(2) == ((0, 1), (0, 2), (1, 2))


def test_vertices_and_faces():
    X = nerve_of_order(("a", "b", "c"), 3)
    assert X.vertices(3, ("a", "b", "c")) == (("a", ), ("b", ), ("c", ))
    assert X.face(("a", "b", "c"), 3, (0, 2)) == ("a", "c")
    assert X.vertex_index[1][(("a", ), ("c", ))] == [("a", "c")]


def test_degeneracy_detection():
    X = representable_sset((0, 1), 3)
    assert not X.is_non_degenerate(2, (0, 0))
    assert X.is_non_degenerate(2, (1, 0))
    assert X.is_non_degenerate(3, (0, 1, 0))


def test_truncate_and_sub_sset():
    X = standard_simplex(1, 3)
    T = truncate(X, 2)
    assert T.truncation == 2
    assert check_functoriality(T) is None
    with pytest.raises(DegreeBudgetError):
        truncate(T, 3)
    vertex = sub_sset(T, [[(0, )], [(0, 0)]])
    assert vertex.carrier(2) == ((0, 0), )
    with pytest.raises(DomainError):
        sub_sset(T, [[(0, )], [(0, 1)]])


def test_shift_and_counit():
    X = standard_simplex(1, 3)
    shifted = shift_plus1(X)
    assert shifted.truncation == 2
    assert shifted.carrier(1) == X.carrier(2)
    assert check_functoriality(shifted) is None
    counit = shift_counit(X)
    assert is_sset_map(counit)
    assert counit(1, (0, 1)) == (1, )


def test_maps_compose_and_shift():
    X = standard_simplex(1, 3)
    Y = standard_simplex(0, 3)
    collapse = SSetMap.tabulate(X, Y, lambda n, x: (0, ) * n)
    assert is_sset_map(collapse)
    identity = SSetMap.identity(X)
    assert compose_maps(collapse, identity).key == collapse.key
    assert is_sset_map(shift_sset_map(collapse))


def test_non_simplicial_map_detected():
    X = standard_simplex(1, 2)
    collapse_edges = SSetMap.tabulate(X, X, lambda n, x: x if n == 1 else (0, 0))
    assert not is_sset_map(collapse_edges)


def test_grayson_subdivision():
    X = standard_simplex(1, 4)
    E = grayson_subdivide(X)
    assert E.truncation == 2
    assert check_functoriality(E) is None
    f = SSetMap.identity(X)
    assert is_sset_map(grayson_sset_map(f))


def test_connected_components_of_union():
    X = disjoint_union(standard_simplex(1, 2), standard_simplex(0, 2), standard_simplex(2, 2))
    blocks = connected_components(X)
    assert len(blocks) == 3
    assert blocks[0] == frozenset({(0, (0, )), (0, (1, ))})
