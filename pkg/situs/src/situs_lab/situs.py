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
"""
Situses: truncated simplicial sets with a graded filter in every degree.

Every structural map ``X(n) → X(m)`` must be continuous between the degree
filters. Morphisms are sset maps that are continuous degree-wise.
"""

import itertools
import logging
from collections.abc import Callable
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from situs_lab.config import get_settings
from situs_lab.errors import DomainError
from situs_lab.errors import UnsupportedShapeError
from situs_lab.filters import FilterSemantics
from situs_lab.filters import GradedFilter
from situs_lab.filters import antidiscrete_filter
from situs_lab.filters import check_continuous
from situs_lab.filters import coproduct_filter
from situs_lab.filters import product_filter
from situs_lab.simplicial import MonotoneMap
from situs_lab.simplicial import SSetMap
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import check_sset_map
from situs_lab.simplicial import constant_sset
from situs_lab.simplicial import counit_map
from situs_lab.simplicial import disjoint_union
from situs_lab.simplicial import product_sset
from situs_lab.simplicial import representable_sset
from situs_lab.simplicial import shift_plus1
from situs_lab.simplicial import truncate

logger = logging.getLogger(__name__)

Label = Hashable


class Situs:
    """
    A truncated sset with one graded filter per degree.

    Args:
        sset: the underlying simplicial set
        filters: ``filters[n-1]`` lives on ``sset.carrier(n)``
        semantics: how grade chains are read
        name: label used in logs and reports
        validate: check every structural map for continuity and raise on failure
    """

    def __init__(self,
                 sset: TruncatedSSet,
                 filters: Sequence[GradedFilter],
                 semantics: FilterSemantics = FilterSemantics.GRADED,
                 name: str = "",
                 validate: bool = True):
        if len(filters) != sset.truncation:
            raise DomainError(f"Expected {sset.truncation} degree filters, got {len(filters)}")
        for n, F in enumerate(filters, start=1):
            if F.carrier_set != frozenset(sset.carrier(n)):
                raise DomainError(f"Filter at degree {n} is not on the carrier X({n})")
        self.sset = sset
        self.filters = tuple(filters)
        self.semantics = FilterSemantics(semantics)
        self.name = name or sset.name
        if validate:
            result = validate_situs(self)
            if not result:
                raise DomainError(f"Structural map {result.theta.key} is not continuous "
                                  f"(grade {result.grade_index}) in situs {self.name!r}")

    def __repr__(self) -> str:
        depths = ", ".join(str(F.depth) for F in self.filters)
        return f"<Situs {self.name} D={self.truncation} depths=[{depths}] {self.semantics.value}>"

    @property
    def truncation(self) -> int:
        return self.sset.truncation

    def carrier(self, n: int) -> tuple:
        return self.sset.carrier(n)

    def filter(self, n: int) -> GradedFilter:
        return self.filters[n - 1]

    def core(self, n: int) -> frozenset:
        return self.filters[n - 1].core

    @classmethod
    def from_grades(cls,
                    sset: TruncatedSSet,
                    grades_fn: Callable[[int, tuple], Iterable[Iterable[Label]]],
                    semantics: FilterSemantics = FilterSemantics.GRADED,
                    name: str = "",
                    validate: bool = True) -> "Situs":
        """Build the degree filters from ``grades_fn(n, carrier)``."""
        filters = []
        for n in range(1, sset.truncation + 1):
            carrier = sset.carrier(n)
            filters.append(GradedFilter(carrier, tuple(frozenset(g) for g in grades_fn(n, carrier))))
        return cls(sset, filters, semantics=semantics, name=name, validate=validate)


@dataclass(frozen=True)
class SitusValidation:
    ok: bool
    theta: MonotoneMap | None = None
    grade_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_situs(S: Situs) -> SitusValidation:
    """Check that every structural map is continuous; report the first failing map and grade."""
    for theta, table in S.sset.action.items():
        F_n, F_m = S.filter(theta.target_size), S.filter(theta.source_size)
        result = check_continuous(table, F_n, F_m, S.semantics, check_total=False)
        if not result:
            logger.debug(f"Situs {S.name!r} fails at {theta.key}, grade {result.failing_grade}")
            return SitusValidation(False, theta, result.failing_grade)
    return SitusValidation(True)


@dataclass(frozen=True, eq=False)
class SitusMorphism:
    """Degree-wise maps between two situses."""
    source: Situs
    target: Situs
    components: tuple[dict, ...]

    def __post_init__(self):
        if self.source.truncation != self.target.truncation:
            raise DomainError(f"Truncations differ: {self.source.truncation} vs {self.target.truncation}")
        if len(self.components) != self.source.truncation:
            raise DomainError("Morphism components must cover every degree")

    def __call__(self, n: int, x: Label) -> Label:
        return self.components[n - 1][x]

    @cached_property
    def sset_map(self) -> SSetMap:
        return SSetMap(self.source.sset, self.target.sset, self.components)

    @property
    def key(self) -> tuple:
        return self.sset_map.key

    @classmethod
    def tabulate(cls, source: Situs, target: Situs, fn: Callable[[int, Label], Label]) -> "SitusMorphism":
        return cls(source, target,
                   tuple({x: fn(n, x) for x in source.carrier(n)} for n in range(1, source.truncation + 1)))

    @classmethod
    def from_vertex_map(cls, source: Situs, target: Situs, vertex_map: Mapping) -> "SitusMorphism":
        """Coordinate-wise map between situses whose simplices are tuples of points."""
        try:
            return cls.tabulate(source, target, lambda n, x: tuple(vertex_map[a] for a in x))
        except KeyError as e:
            raise DomainError(f"Vertex map is not total: missing {e.args[0]!r}") from None

    @classmethod
    def identity(cls, S: Situs) -> "SitusMorphism":
        return cls.tabulate(S, S, lambda n, x: x)


def compose(g: SitusMorphism, f: SitusMorphism) -> SitusMorphism:
    """``g ∘ f``."""
    return SitusMorphism(f.source, g.target,
                         tuple({x: gc[fc[x]] for x in fc} for fc, gc in zip(f.components, g.components)))


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    reason: str | None = None
    degree: int | None = None
    theta: MonotoneMap | None = None
    simplex: Label | None = None
    grade_index: int | None = None
    witnesses: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_morphism(f: SitusMorphism, semantics: FilterSemantics | None = None) -> MorphismCheck:
    """
    Check that ``f`` commutes with the Δ-action and is graded-continuous in every degree.

    The semantics defaults to the target's. Graded witnesses are returned per degree.
    """
    S, T = f.source, f.target
    sem = FilterSemantics(semantics or T.semantics)
    failure = check_sset_map(f.sset_map)
    if failure is not None:
        theta, x = failure
        return MorphismCheck(False, "not simplicial", theta.target_size, theta, x)
    witnesses = {}
    for n in range(1, S.truncation + 1):
        result = check_continuous(f.components[n - 1], S.filter(n), T.filter(n), sem, check_total=False)
        if not result:
            return MorphismCheck(False, "not continuous", n, grade_index=result.failing_grade)
        witnesses[n] = result.witness
    return MorphismCheck(True, witnesses=witnesses)


def antidiscrete_situs(X: TruncatedSSet, name: str = "") -> Situs:
    return Situs(X, [antidiscrete_filter(X.carrier(n)) for n in range(1, X.truncation + 1)],
                 name=name or X.name,
                 validate=False)


def embed_diag(F: GradedFilter, D: int | None = None) -> Situs:
    """Finest structure making the diagonal continuous: grade ``i`` at degree ``n`` is ``{(x,…,x): x ∈ B_i}``."""
    D = D or get_settings().truncation
    X = representable_sset(F.carrier, D, name="diag")
    return Situs.from_grades(X, lambda n, carrier: [{(x, ) * n for x in grade} for grade in F.grades], name="diag")


def embed_cart(F: GradedFilter, D: int | None = None) -> Situs:
    """Grade ``i`` at degree ``n`` is ``B_iⁿ``."""
    D = D or get_settings().truncation
    X = representable_sset(F.carrier, D, name="cart")
    return Situs.from_grades(X,
                             lambda n, carrier: [set(itertools.product(grade, repeat=n)) for grade in F.grades],
                             name="cart")


def embed_const(F: GradedFilter, D: int | None = None) -> Situs:
    """The constant functor at ``F``."""
    D = D or get_settings().truncation
    X = constant_sset(F.carrier, D, name="const")
    return Situs(X, [F] * D, name="const")


def empty_situs(D: int) -> Situs:
    return antidiscrete_situs(representable_sset((), D, name="empty"))


def truncate_situs(S: Situs, D: int) -> Situs:
    if D == S.truncation:
        return S
    return Situs(truncate(S.sset, D), S.filters[:D], S.semantics, name=S.name, validate=False)


def shift_situs(S: Situs) -> Situs:
    """``S[+1]``: the shifted sset with ``F[+1](n) = F(n+1)``."""
    shifted = shift_plus1(S.sset)
    return Situs(shifted, S.filters[1:], S.semantics, name=f"{S.name}[+1]", validate=False)


def shift_counit_morphism(S: Situs) -> SitusMorphism:
    """The counit ``S[+1] → S`` forgetting the new minimal coordinate (target cut to ``D-1``)."""
    shifted = shift_situs(S)
    base = truncate_situs(S, shifted.truncation)
    return SitusMorphism.tabulate(shifted, base, lambda n, x: S.sset.act(counit_map(n), x))


def shift_morphism(f: SitusMorphism) -> SitusMorphism:
    """``f[+1]``."""
    source, target = shift_situs(f.source), shift_situs(f.target)
    return SitusMorphism(source, target, f.components[1:])


def product_situs(*factors: Situs) -> Situs:
    if not factors:
        raise DomainError("product_situs needs at least one factor")
    X = product_sset(*(S.sset for S in factors))
    filters = [product_filter(*(S.filter(n) for S in factors)) for n in range(1, X.truncation + 1)]
    return Situs(X, filters, factors[0].semantics, name=" x ".join(S.name for S in factors), validate=False)


def coproduct_situs(*parts: Situs) -> Situs:
    X = disjoint_union(*(S.sset for S in parts))
    filters = [coproduct_filter(*(S.filter(n) for S in parts)) for n in range(1, X.truncation + 1)]
    return Situs(X, filters, parts[0].semantics, name=" + ".join(S.name for S in parts), validate=False)


def coproduct_injection(parts: Sequence[Situs], k: int, total: Situs | None = None) -> SitusMorphism:
    total = total or coproduct_situs(*parts)
    return SitusMorphism.tabulate(parts[k], total, lambda n, x: (k, x))


def semidirect_product(A: Situs, X: Situs, max_families: int | None = None) -> Situs:
    """
    ``A ⋉ X`` on the product sset.

    A grade is ``⋃_{a ∈ α} {a} × δ_{c(a)}`` for a grade ``α`` of ``A_n`` and a
    choice function ``c`` picking a grade of ``X_n`` per point. When the
    family count exceeds ``max_families`` only constant choices are kept.
    """
    max_families = max_families or get_settings().semidirect_families
    sset = product_sset(A.sset, X.sset)
    filters = []
    for n in range(1, sset.truncation + 1):
        FA, FX = A.filter(n), X.filter(n)
        count = sum(FX.depth**len(grade) for grade in FA.grades)
        uniform = count > max_families
        if uniform:
            logger.warning(f"Semidirect product at degree {n}: {count} grade families exceed {max_families}, "
                           f"keeping constant choice functions only")
        grades = []
        for index in range(FA.depth):
            points = FA.sorted_grade(index)
            choices = ((j, ) * len(points) for j in range(FX.depth)) if uniform else itertools.product(
                range(FX.depth), repeat=len(points))
            for choice in choices:
                grades.append({(a, x) for a, j in zip(points, choice) for x in FX.grades[j]})
        filters.append(GradedFilter(sset.carrier(n), tuple(frozenset(g) for g in grades)))
    return Situs(sset, filters, A.semantics, name=f"{A.name} |x {X.name}", validate=False)


def is_symmetric(S: Situs) -> bool:
    """True iff every grade of every degree filter is invariant under coordinate permutations."""
    if S.sset.kind != "representable":
        raise UnsupportedShapeError(f"is_symmetric needs a representable sset, got {S.sset.kind!r}")
    for n in range(2, S.truncation + 1):
        perms = list(itertools.permutations(range(n)))
        for index, grade in enumerate(S.filter(n).grades):
            for x in grade:
                for perm in perms:
                    if tuple(x[p] for p in perm) not in grade:
                        logger.debug(f"{S.name}: {x!r} permuted by {perm} leaves grade {index} at degree {n}")
                        return False
    return True
