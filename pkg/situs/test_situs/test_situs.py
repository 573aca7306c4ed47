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

from situs_lab.errors import DomainError
from situs_lab.errors import UnsupportedShapeError
from situs_lab.filters import GradedFilter
from situs_lab.filters import antidiscrete_filter
from situs_lab.filters import principal_filter
from situs_lab.simplicial import representable_sset
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import check_morphism
from situs_lab.situs import compose
from situs_lab.situs import coproduct_injection
from situs_lab.situs import coproduct_situs
from situs_lab.situs import embed_cart
from situs_lab.situs import embed_const
from situs_lab.situs import embed_diag
from situs_lab.situs import empty_situs
from situs_lab.situs import is_symmetric
from situs_lab.situs import product_situs
from situs_lab.situs import semidirect_product
from situs_lab.situs import shift_counit_morphism
from situs_lab.situs import shift_morphism
from situs_lab.situs import shift_situs
from situs_lab.situs import truncate_situs
from situs_lab.situs import validate_situs


@pytest.fixture
def half():
    """{0, 1} with the neighbourhood {0}."""
    return principal_filter((0, 1), {0})


def test_embeddings_validate(half):
    for embed in (embed_diag, embed_cart, embed_const):
        S = embed(half, 3)
        assert validate_situs(S)
        assert S.truncation == 3


def test_embedding_cores(half):
    assert embed_diag(half, 2).core(2) == frozenset({(0, 0)})
    assert embed_cart(half, 2).core(2) == frozenset({(0, 0)})
    assert embed_cart(antidiscrete_filter((0, 1)), 2).core(2) == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    assert embed_const(half, 2).core(2) == frozenset({0})


def test_discontinuous_structure_map_is_rejected():
    X = representable_sset((0, 1), 2)
    filters = [principal_filter(X.carrier(1), {(0, )}), antidiscrete_filter(X.carrier(2))]
    # the vertex maps X(2) -> X(1) leave the degree-1 core
    with pytest.raises(DomainError):
        Situs(X, filters)
    S = Situs(X, filters, validate=False)
    result = validate_situs(S)
    assert not result
    assert result.theta.source_size == 1


def test_filter_carrier_mismatch():
    X = representable_sset((0, 1), 2)
    with pytest.raises(DomainError):
        Situs(X, [antidiscrete_filter((0, 1)), antidiscrete_filter(X.carrier(2))])


def test_morphism_check_reports_continuity(half):
    source = embed_cart(antidiscrete_filter((0, 1)), 2)
    target = embed_cart(half, 2)
    identity = SitusMorphism.from_vertex_map(source, target, {0: 0, 1: 1})
    result = check_morphism(identity)
    assert not result
    assert result.reason == "not continuous"
    assert result.degree == 1

    constant = SitusMorphism.from_vertex_map(source, target, {0: 0, 1: 0})
    result = check_morphism(constant)
    assert result
    assert set(result.witnesses) == {1, 2}


def test_morphism_check_reports_non_simplicial():
    X = antidiscrete_situs(standard_simplex(1, 2))
    f = SitusMorphism.tabulate(X, X, lambda n, x: x if n == 1 else (0, 0))
    result = check_morphism(f)
    assert not result
    assert result.reason == "not simplicial"


def test_compose_and_identity(half):
    S = embed_diag(half, 2)
    identity = SitusMorphism.identity(S)
    assert compose(identity, identity).key == identity.key
    assert check_morphism(identity)


def test_vertex_map_must_be_total(half):
    S = embed_cart(half, 2)
    with pytest.raises(DomainError):
        SitusMorphism.from_vertex_map(S, S, {0: 0})


def test_shift_counit_is_a_morphism(half):
    S = embed_cart(half, 3)
    counit = shift_counit_morphism(S)
    assert counit.source.truncation == 2
    assert check_morphism(counit)
    assert counit(1, (1, 0)) == (0, )


def test_shift_of_morphism(half):
    S = embed_cart(half, 3)
    f = SitusMorphism.identity(S)
    shifted = shift_morphism(f)
    assert shifted.source.sset.same_as(shift_situs(S).sset)
    assert check_morphism(shifted)


def test_product_and_coproduct(half):
    A = embed_cart(half, 2)
    B = embed_cart(antidiscrete_filter(("a", )), 2)
    P = product_situs(A, B)
    assert validate_situs(P)
    assert P.core(1) == frozenset({((0, ), ("a", ))})
    C = coproduct_situs(A, B)
    assert validate_situs(C)
    inject = coproduct_injection([A, B], 1, C)
    assert check_morphism(inject)
    assert inject(1, ("a", )) == (1, ("a", ))


def test_empty_and_truncate(half):
    E = empty_situs(2)
    assert E.carrier(1) == ()
    assert validate_situs(E)
    S = truncate_situs(embed_cart(half, 3), 2)
    assert S.truncation == 2


def test_semidirect_product_grades(half):
    A = embed_cart(half, 2)
    X = embed_cart(antidiscrete_filter(("a", "b")), 2)
    S = semidirect_product(A, X)
    assert S.carrier(1) == tuple((a, x) for a in A.carrier(1) for x in X.carrier(1))
    assert S.core(1) <= frozenset(e for e in S.carrier(1) if e[0] == (0, ))


def test_symmetry():
    assert is_symmetric(embed_cart(principal_filter((0, 1), {0}), 3))
    X = representable_sset((0, 1), 2)
    ordered = Situs.from_grades(X, lambda n, carrier: [carrier, {x for x in carrier if list(x) == sorted(x)}],
                                validate=False)
    assert not is_symmetric(ordered)
    with pytest.raises(UnsupportedShapeError):
        is_symmetric(antidiscrete_situs(standard_simplex(1, 2)))


def test_graded_filter_repr_is_stable():
    F = GradedFilter((1, 0), ({0, 1}, {0}))
    assert repr(F) == "GradedFilter(carrier=[1, 0], grades=[{1, 0}, {0}])"
