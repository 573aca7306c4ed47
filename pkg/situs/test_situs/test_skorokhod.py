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
from fractions import Fraction

import pytest

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.errors import PreconditionError
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import antidiscrete_situs
from situs_lab.skorokhod import GridPath
from situs_lab.skorokhod import HomSet
from situs_lab.skorokhod import all_grid_paths
from situs_lab.skorokhod import embedding_distortion
from situs_lab.skorokhod import evaluation_bijection
from situs_lab.skorokhod import jump_distance
from situs_lab.skorokhod import mapping_space
from situs_lab.skorokhod import realize_simplex
from situs_lab.skorokhod import skorokhod_distance
from situs_lab.skorokhod import skorokhod_homotopic
from situs_lab.skorokhod import skorokhod_neighbourhood

GRID = 8


@pytest.fixture
def point():
    return antidiscrete_situs(standard_simplex(0, 2))


@pytest.fixture
def interval():
    return antidiscrete_situs(standard_simplex(1, 2))


def test_grid_path_validation():
    with pytest.raises(DomainError):
        GridPath(2, 4, (3, 1))
    with pytest.raises(DomainError):
        GridPath(1, 4, (5, ))
    with pytest.raises(DomainError):
        GridPath(2, 4, (1, ))
    with pytest.raises(DomainError):
        GridPath.from_coordinates(["1/3"], 4)


def test_grid_path_values():
    path = GridPath(2, 4, (1, 3))
    assert path.values() == (0, 1, 1, 2, 2)
    assert path.coordinates == (Fraction(1, 4), Fraction(3, 4))
    assert path.interval(1) == (1, 3)
    assert GridPath.from_coordinates(["1/4", "3/4"], 4) == path


def test_extreme_jumps_are_one_apart():
    assert skorokhod_distance(GridPath(1, 4, (0, )), GridPath(1, 4, (4, ))) == 1


def test_paths_on_different_grids():
    with pytest.raises(DomainError):
        jump_distance(GridPath(1, 4, (0, )), GridPath(1, 8, (0, )))


@pytest.mark.parametrize("N", [0, 1, 2])
def test_realisation_matches_jump_metric(N):
    """The realised distance equals the sup-distance of jump times, within 1/k."""
    space = realize_simplex(N, GRID)
    paths = all_grid_paths(N, GRID)
    assert len(space.points) == len(paths)
    for f, g in itertools.combinations(paths, 2):
        assert space.d(f.jumps, g.jumps) == jump_distance(f, g)
    assert embedding_distortion(space, GRID) <= Fraction(1, GRID)
    assert space.grid[0] == 1
    assert space.grid[-1] == Fraction(1, GRID)


def test_realize_needs_a_grid():
    with pytest.raises(DomainError):
        realize_simplex(1, 0)


def test_skorokhod_neighbourhood(interval):
    X = interval.sset
    homset = HomSet.enumerate(X, X)
    assert len(homset) == 3
    # maps sending the last vertex to 1
    members = skorokhod_neighbourhood(homset, X.carrier(2), {(1, )}, 2, 1)
    assert len(members) == 2
    assert all(f(1, (1, )) == (1, ) for f in members)


def test_neighbourhood_window(interval):
    homset = HomSet.enumerate(interval.sset, interval.sset)
    with pytest.raises(PreconditionError):
        skorokhod_neighbourhood(homset, (), (), 2, 2)
    with pytest.raises(DegreeBudgetError):
        skorokhod_neighbourhood(homset, (), (), 3, 1)


def test_mapping_space_out_of_a_point(point, interval):
    space = mapping_space(point, interval)
    for n in (1, 2):
        assert len(space.carrier(n)) == len(interval.carrier(n))
    assert space.name == f"Map({point.name},{interval.name})"


def test_mapping_space_truncations_must_agree(point):
    with pytest.raises(DomainError):
        mapping_space(point, antidiscrete_situs(standard_simplex(1, 3)))


def test_evaluation_is_bijective(point, interval):
    result = evaluation_bijection(point, point, interval)
    assert result.bijective
    assert result.domain_size == result.codomain_size
    assert result.continuity_preserved


def test_skorokhod_homotopy_between_constants(point, interval):
    space = mapping_space(point, interval)

    def constant(value):
        return next(label for label in space.carrier(1) if space.element(1, label)(1, ((0, ), (0, ))) == (value, ))

    zero, one = constant(0), constant(1)
    assert skorokhod_homotopic(zero, one, space)
    # Delta_1 has no edge from 1 back to 0
    assert not skorokhod_homotopic(one, zero, space)
