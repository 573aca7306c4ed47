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

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.filters import antidiscrete_filter
from situs_lab.simplicial import nerve_of_order
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import embed_diag
from situs_lab.subdivision import SubdivisionVariant
from situs_lab.subdivision import archimedean_simplices
from situs_lab.subdivision import interval_situs
from situs_lab.subdivision import subdivision_filter
from situs_lab.subdivision import windows

ORDER = (0, 1, 2, 3)


def test_windows():
    plain = windows(3, 2, 1, SubdivisionVariant.PLAIN)
    assert {t.values for t in plain} == {(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)}
    left = windows(3, 1, 1, SubdivisionVariant.LEFT)
    assert {t.values for t in left} == {(0, ), (1, )}
    right = windows(3, 1, 1, SubdivisionVariant.RIGHT)
    assert {t.values for t in right} == {(2, )}
    with pytest.raises(DomainError):
        windows(3, 1, 1, SubdivisionVariant.BOTH)


def test_interval_core_is_adjacent_pairs():
    I = interval_situs(ORDER, 2)
    assert I.truncation == 2
    assert I.core(2) == frozenset((a, b) for a in ORDER for b in ORDER if a <= b and b - a <= 1)
    assert I.core(1) == frozenset((a, ) for a in ORDER)


def test_interval_variants_refine_plain():
    plain = interval_situs(ORDER, 2)
    for variant in (SubdivisionVariant.LEFT, SubdivisionVariant.RIGHT, SubdivisionVariant.BOTH):
        refined = interval_situs(ORDER, 2, variant)
        assert refined.core(2) <= frozenset(refined.carrier(2))
        assert refined.name.endswith(variant.value)
    assert plain.name == "[0,1]_<="


def test_interval_needs_two_points():
    with pytest.raises(DomainError):
        interval_situs((0, ), 2)


def test_subdivision_needs_room():
    with pytest.raises(DegreeBudgetError):
        subdivision_filter(standard_simplex(1, 1))
    with pytest.raises(DegreeBudgetError):
        subdivision_filter(standard_simplex(1, 2), truncation=3)
    with pytest.raises(DegreeBudgetError):
        subdivision_filter(standard_simplex(1, 3), seed_degree=4)


def test_subdivision_of_nerve_shape():
    S = subdivision_filter(nerve_of_order(ORDER, 3))
    assert S.truncation == 2
    assert S.name.endswith("_subd")
    for n in range(1, 3):
        assert S.filter(n).depth == 2


def test_archimedean_simplices_of_interval():
    I = interval_situs(ORDER, 2)
    result = archimedean_simplices(I)
    assert result.contains(2, (1, 2))
    assert not result.contains(2, (0, 2))
    assert result.sset.carrier(1) == I.carrier(1)
    assert result.witnesses[(2, (1, 2))][2] == (2, (1, 2))


def test_archimedean_simplices_of_antidiscrete():
    S = antidiscrete_situs(standard_simplex(1, 2))
    result = archimedean_simplices(S)
    assert result.simplices[1] == frozenset(S.carrier(2))


def test_archimedean_simplices_of_discrete_diag():
    S = embed_diag(antidiscrete_filter((0, 1)), 2)
    result = archimedean_simplices(S)
    assert result.simplices[1] == frozenset({(0, 0), (1, 1)})


def test_refinement_budget_bounded_by_truncation():
    with pytest.raises(DegreeBudgetError):
        archimedean_simplices(interval_situs(ORDER, 2), refinement_budget=3)
