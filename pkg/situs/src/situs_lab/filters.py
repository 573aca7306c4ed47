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
Graded filters on finite carriers.

A graded filter is a finite carrier with a descending chain of grades
``B_1 ⊇ … ⊇ B_k``. In ``GENERATED`` mode the chain is read as a filter
base, so only the minimal grade (the *core*) matters. In ``GRADED`` mode
the chain index is kept, and continuity checks return a witness index map.

On a finite chain both readings decide continuity the same way: ``f`` is
continuous iff it maps the core of the source into the core of the target.
Graded mode adds the witness.
"""

import itertools
import logging
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from functools import cached_property

from situs_lab.config import get_settings
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError

logger = logging.getLogger(__name__)

Label = Hashable


class FilterSemantics(str, Enum):
    GENERATED = "generated"
    GRADED = "graded"


def normalize_grades(grades: Iterable[Iterable[Label]]) -> tuple[frozenset, ...]:
    """Replace each grade by the intersection of all grades up to it."""
    normalized = []
    running = None
    for grade in grades:
        running = frozenset(grade) if running is None else running & frozenset(grade)
        normalized.append(running)
    return tuple(normalized)


@dataclass(frozen=True)
class GradedFilter:
    """
    A finite carrier with a descending chain of neighbourhood grades.

    The carrier may be empty and ``∅`` is a legal grade. Construction
    normalizes the chain by cumulative intersection.
    """
    carrier: tuple
    grades: tuple[frozenset, ...] = field(default=())

    def __post_init__(self):
        carrier = tuple(self.carrier)
        if len(set(carrier)) != len(carrier):
            raise DomainError(f"Carrier labels are not pairwise distinct: {carrier}")
        grades = self.grades if self.grades else (frozenset(carrier), )
        normalized = normalize_grades(grades)
        carrier_set = frozenset(carrier)
        for index, grade in enumerate(normalized):
            stray = grade - carrier_set
            if stray:
                raise DomainError(f"Grade {index} contains elements outside the carrier: {sorted(map(repr, stray))}")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "grades", normalized)

    @cached_property
    def carrier_set(self) -> frozenset:
        return frozenset(self.carrier)

    @cached_property
    def positions(self) -> dict:
        return {x: i for i, x in enumerate(self.carrier)}

    @property
    def core(self) -> frozenset:
        """The minimal grade."""
        return self.grades[-1]

    @property
    def depth(self) -> int:
        return len(self.grades)

    def padded(self, depth: int) -> tuple[frozenset, ...]:
        """Grades padded to ``depth`` by repeating the last one."""
        if depth <= len(self.grades):
            return self.grades
        return self.grades + (self.core, ) * (depth - len(self.grades))

    def sorted_grade(self, index: int) -> list:
        return sorted(self.grades[index], key=self.positions.__getitem__)

    def __repr__(self) -> str:
        grades = ", ".join("{" + ", ".join(map(repr, self.sorted_grade(i))) + "}" for i in range(self.depth))
        return f"GradedFilter(carrier={list(self.carrier)!r}, grades=[{grades}])"


@dataclass(frozen=True)
class ContinuityResult:
    """Verdict of a continuity check with its witness index map (grade of G -> grade of F)."""
    ok: bool
    witness: dict[int, int] | None = None
    failing_grade: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def antidiscrete_filter(carrier: Iterable[Label]) -> GradedFilter:
    """The filter whose only neighbourhood is the carrier."""
    carrier = tuple(carrier)
    return GradedFilter(carrier, (frozenset(carrier), ))


def discrete_filter(carrier: Iterable[Label]) -> GradedFilter:
    """The improper filter: ``∅`` is a neighbourhood."""
    carrier = tuple(carrier)
    return GradedFilter(carrier, (frozenset(carrier), frozenset()))


def principal_filter(carrier: Iterable[Label], points: Iterable[Label]) -> GradedFilter:
    """The filter generated by ``points``, with the carrier as coarsest grade."""
    carrier = tuple(carrier)
    return GradedFilter(carrier, (frozenset(carrier), frozenset(points)))


def _check_subset(F: GradedFilter, S: Iterable[Label]) -> frozenset:
    S = frozenset(S)
    stray = S - F.carrier_set
    if stray:
        raise DomainError(f"Elements not in carrier: {sorted(map(repr, stray))}")
    return S


def is_neighbourhood(F: GradedFilter, S: Iterable[Label], sem: FilterSemantics = FilterSemantics.GRADED) -> bool:
    S = _check_subset(F, S)
    if sem == FilterSemantics.GENERATED:
        return F.core <= S
    return any(grade <= S for grade in F.grades)


def _check_total(f: Mapping, F: GradedFilter, G: GradedFilter):
    missing = [x for x in F.carrier if x not in f]
    if missing:
        raise DomainError(f"Map is not total on the source carrier, missing {missing[:5]!r}")
    stray = [f[x] for x in F.carrier if f[x] not in G.carrier_set]
    if stray:
        raise DomainError(f"Map leaves the target carrier: {stray[:5]!r}")


def image(f: Mapping, S: Iterable[Label]) -> frozenset:
    return frozenset(f[x] for x in S)


def check_continuous(f: Mapping,
                     F: GradedFilter,
                     G: GradedFilter,
                     sem: FilterSemantics = FilterSemantics.GRADED,
                     check_total: bool = True) -> ContinuityResult:
    """
    Decide whether ``f`` maps neighbourhoods of ``F`` into neighbourhoods of ``G``.

    In ``GRADED`` mode the witness maps each grade index ``i`` of ``G`` to the
    least grade index ``j`` of ``F`` with ``f(B_j) ⊆ A_i``.
    """
    if check_total:
        _check_total(f, F, G)
    if sem == FilterSemantics.GENERATED:
        ok = image(f, F.core) <= G.core
        return ContinuityResult(ok, {0: 0} if ok else None, None if ok else G.depth - 1)

    images = [image(f, grade) for grade in F.grades]
    witness = {}
    for i, target in enumerate(G.grades):
        j = next((j for j, img in enumerate(images) if img <= target), None)
        if j is None:
            return ContinuityResult(False, None, i)
        witness[i] = j
    return ContinuityResult(True, witness, None)


def finer(F: GradedFilter, G: GradedFilter, sem: FilterSemantics = FilterSemantics.GENERATED) -> bool:
    """True iff every neighbourhood of ``G`` is a neighbourhood of ``F`` (same carrier)."""
    if F.carrier_set != G.carrier_set:
        raise DomainError("Fineness is only defined between filters on the same carrier")
    if sem == FilterSemantics.GENERATED:
        return F.core <= G.core
    return all(any(b <= a for b in F.grades) for a in G.grades)


def product_filter(*filters: GradedFilter) -> GradedFilter:
    """Grade-wise Cartesian product, padding shorter chains with their last grade."""
    if not filters:
        raise DomainError("product_filter needs at least one factor")
    depth = max(F.depth for F in filters)
    carrier = tuple(itertools.product(*(F.carrier for F in filters)))
    grades = [frozenset(itertools.product(*parts)) for parts in zip(*(F.padded(depth) for F in filters))]
    return GradedFilter(carrier, tuple(grades))


def pullback_filter(carrier: Sequence[Label], maps: Sequence[tuple[Mapping, GradedFilter]]) -> GradedFilter:
    """
    Coarsest graded filter on ``carrier`` making every ``f_k: carrier -> G_k`` continuous.

    Grade ``i`` is the intersection of the preimages of the ``i``-th grades.
    """
    carrier = tuple(carrier)
    if not maps:
        return antidiscrete_filter(carrier)
    for f, G in maps:
        if set(f.keys()) != set(carrier):
            raise DomainError("Pullback maps must all be defined exactly on the source carrier")
        _check_total(f, GradedFilter(carrier), G)
    depth = max(G.depth for _, G in maps)
    grades = []
    for i in range(depth):
        grade = frozenset(carrier)
        for f, G in maps:
            target = G.padded(depth)[i]
            grade &= frozenset(x for x in carrier if f[x] in target)
        grades.append(grade)
    return GradedFilter(carrier, tuple(grades))


def pushforward_filter(f: Mapping, F: GradedFilter, target_carrier: Sequence[Label]) -> GradedFilter:
    """Finest graded filter on ``target_carrier`` making ``f`` continuous: grades are images."""
    target = GradedFilter(tuple(target_carrier))
    _check_total(f, F, target)
    return GradedFilter(target.carrier, tuple(image(f, grade) for grade in F.grades))


def coproduct_filter(*filters: GradedFilter) -> GradedFilter:
    """Tagged disjoint union; a set is a neighbourhood iff each part is."""
    depth = max((F.depth for F in filters), default=1)
    carrier = tuple((k, x) for k, F in enumerate(filters) for x in F.carrier)
    grades = []
    for i in range(depth):
        grades.append(frozenset((k, x) for k, F in enumerate(filters) for x in F.padded(depth)[i]))
    return GradedFilter(carrier, tuple(grades))


def _colouring_test(F: GradedFilter) -> bool:
    for bits in itertools.product((0, 1), repeat=len(F.carrier)):
        zeros = frozenset(x for x, b in zip(F.carrier, bits) if b == 0)
        if not (F.core <= zeros or F.core <= F.carrier_set - zeros):
            return False
    return True


def is_ultrafilter(F: GradedFilter, max_colouring_carrier: int | None = None) -> bool:
    """
    True iff for every 2-colouring one colour class is a neighbourhood and the filter is proper.

    On a finite carrier this is "the core is a singleton". Both tests run on
    carriers up to ``max_colouring_carrier`` and must agree.
    """
    if max_colouring_carrier is None:
        max_colouring_carrier = get_settings().max_colouring_carrier

    singleton = len(F.core) == 1
    if not F.core:
        return False
    if len(F.carrier) <= max_colouring_carrier:
        coloured = _colouring_test(F)
        if coloured != singleton:
            raise OracleMismatchError(f"Ultrafilter tests disagree on {F!r}: colouring={coloured}, "
                                      f"singleton={singleton}")
    return singleton


def all_graded_filters(carrier: Sequence[Label], max_depth: int = 2) -> Iterable[GradedFilter]:
    """
    Every normalized graded filter on ``carrier`` with at most ``max_depth`` grades.

    Chains are strictly descending, so distinct chains give distinct filters.
    """
    carrier = tuple(carrier)
    subsets = [frozenset(c) for r in range(len(carrier) + 1) for c in itertools.combinations(carrier, r)]

    def chains(prefix: tuple, remaining: int):
        yield prefix
        if remaining == 0:
            return
        for subset in subsets:
            if subset < prefix[-1]:
                yield from chains(prefix + (subset, ), remaining - 1)

    for first in subsets:
        for chain in chains((first, ), max_depth - 1):
            yield GradedFilter(carrier, chain)
