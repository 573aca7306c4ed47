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
Subdivision neighbourhoods, the interval object and Archimedean simplices.

Window positions are 0-based inside an extension ``ε' ∈ X(p)``. Windows
that would run past the end of ``ε'`` are clipped, which is the same as
padding ``ε'`` with degenerate copies of its last (or, for ``>``, first)
vertex.
"""

import logging
from collections.abc import Hashable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from functools import lru_cache

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.filters import GradedFilter
from situs_lab.simplicial import MonotoneMap
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import monotone_maps
from situs_lab.simplicial import nerve_of_order
from situs_lab.simplicial import sub_sset
from situs_lab.simplicial import truncate
from situs_lab.situs import Situs

logger = logging.getLogger(__name__)

Label = Hashable


class SubdivisionVariant(str, Enum):
    PLAIN = "plain"
    LEFT = "<"
    RIGHT = ">"
    BOTH = "pm"


def _in_window(t: MonotoneMap, p: int, m: int, variant: SubdivisionVariant) -> bool:
    if variant == SubdivisionVariant.PLAIN:
        return t.values[-1] <= t.values[0] + m
    if variant == SubdivisionVariant.LEFT:
        return t.values[-1] <= m
    if variant == SubdivisionVariant.RIGHT:
        return t.values[0] > p - 1 - m
    raise DomainError("The pm variant is the intersection of the < and > variants, not a window")


@lru_cache(maxsize=None)
def windows(p: int, n: int, m: int, variant: SubdivisionVariant) -> tuple[MonotoneMap, ...]:
    """Monotone ``t: n → p`` satisfying the variant's window condition for width ``m``."""
    variant = SubdivisionVariant(variant)
    return tuple(t for t in monotone_maps(n, p) if _in_window(t, p, m, variant))


def _extensions(X: TruncatedSSet, seed_degree: int) -> list[tuple[int, Label, frozenset]]:
    """Every ``(p, ε', seeds)`` with ``seeds`` the degree-``seed_degree`` faces of ``ε'``."""
    result = []
    for p in range(1, X.truncation + 1):
        maps = list(monotone_maps(seed_degree, p))
        for e in X.carrier(p):
            result.append((p, e, frozenset(X.act(psi, e) for psi in maps)))
    return result


def _subdivision_grades(X: TruncatedSSet, D: int, variant: SubdivisionVariant, seed_degree: int) -> list[list[set]]:
    extensions = _extensions(X, seed_degree)
    seeds = X.carrier(seed_degree)
    per_degree = []
    for n in range(1, D + 1):
        grades = []
        for m in range(X.truncation - 1, 0, -1):
            grade = set(X.carrier(n))
            for seed in seeds:
                reachable = set()
                for p, e, faces in extensions:
                    if seed in faces:
                        reachable.update(X.act(t, e) for t in windows(p, n, m, variant))
                grade &= reachable
            grades.append(grade)
        per_degree.append(grades)
    return per_degree


def subdivision_filter(X: TruncatedSSet,
                       variant: SubdivisionVariant | str = SubdivisionVariant.PLAIN,
                       truncation: int | None = None,
                       seed_degree: int = 1,
                       name: str = "") -> Situs:
    """
    ``X`` with the subdivision neighbourhood structure.

    Grade ``m`` (from ``D_X - 1`` down to 1) at degree ``n`` is the
    intersection over seeds ``ε`` of the windowed degree-``n`` faces of
    extensions of ``ε`` within the truncation ``D_X`` of ``X``. The output is
    truncated to ``D_X - 1`` by default so every output degree has room for
    a strictly larger extension.
    """
    variant = SubdivisionVariant(variant)
    if X.truncation < 2:
        raise DegreeBudgetError("Subdivision needs extensions of degree at least 2", needed=2, available=X.truncation)
    D = truncation or X.truncation - 1
    if D > X.truncation:
        raise DegreeBudgetError(f"Cannot subdivide to truncation {D} from {X.truncation}",
                                needed=D,
                                available=X.truncation)
    if D >= X.truncation:
        logger.warning(f"Subdivision grades of {X.name!r} at degree {D} are computed over extensions within "
                       f"truncation {X.truncation} only")
    if not 1 <= seed_degree <= X.truncation:
        raise DegreeBudgetError(f"Seed degree {seed_degree} outside 1..{X.truncation}",
                                needed=seed_degree,
                                available=X.truncation)

    if variant == SubdivisionVariant.BOTH:
        left = _subdivision_grades(X, D, SubdivisionVariant.LEFT, seed_degree)
        right = _subdivision_grades(X, D, SubdivisionVariant.RIGHT, seed_degree)
        per_degree = [[a & b for a, b in zip(ls, rs)] for ls, rs in zip(left, right)]
    else:
        per_degree = _subdivision_grades(X, D, variant, seed_degree)

    base = truncate(X, D)
    filters = [GradedFilter(base.carrier(n), tuple(frozenset(g) for g in grades))
               for n, grades in enumerate(per_degree, start=1)]
    logger.debug(f"Subdivision ({variant.value}) of {X.name!r}: core sizes {[len(F.core) for F in filters]}")
    default_name = f"{X.name}_subd" if variant == SubdivisionVariant.PLAIN else f"{X.name}_subd{variant.value}"
    return Situs(base, filters, name=name or default_name, validate=False)


def interval_situs(order: Sequence[Label],
                   D: int,
                   variant: SubdivisionVariant | str = SubdivisionVariant.PLAIN) -> Situs:
    """
    The interval object on a finite linear order.

    The nerve is built one degree higher and subdivided down to ``D``, so the
    degree-2 core is the pairs of index distance at most 1.
    """
    order = tuple(order)
    if len(order) < 2:
        raise DomainError(f"The interval needs at least two points, got {order}")
    X = nerve_of_order(order, D + 1, name="[0,1]")
    variant = SubdivisionVariant(variant)
    name = "[0,1]_<=" if variant == SubdivisionVariant.PLAIN else f"[0,1]_<={variant.value}"
    return subdivision_filter(X, variant, truncation=D, name=name)


@dataclass
class ArchimedeanResult:
    """Per-degree Archimedean simplices with the fine refinement used for each grade degree."""
    simplices: tuple[frozenset, ...]
    witnesses: dict = field(default_factory=dict)
    sset: TruncatedSSet | None = None

    def contains(self, n: int, x: Label) -> bool:
        return x in self.simplices[n - 1]


def _spread_windows(p: int, k: int) -> list[MonotoneMap]:
    return [t for t in monotone_maps(k, p) if t.values[-1] <= t.values[0] + 1]


def archimedean_simplices(S: Situs, refinement_budget: int | None = None) -> ArchimedeanResult:
    """
    Simplices that are faces of an ε/1-fine simplex of size at most ``R`` for every degree ``k``.

    ``s'`` is ε/1-fine for the degree-``k`` core when every face
    ``s'[t_1 ≤ … ≤ t_k]`` with ``t_k ≤ t_1 + 1`` lies in the core. Fineness
    for wider windows follows by repeating every vertex of ``s'``.
    """
    D = S.truncation
    R = refinement_budget or D
    if R > D:
        raise DegreeBudgetError(f"Refinement budget {R} exceeds the truncation {D}", needed=R, available=D)
    X = S.sset

    per_k = []
    for k in range(1, D + 1):
        core = S.core(k)
        fine = [(p, s) for p in range(1, R + 1) for s in X.carrier(p)
                if all(X.act(t, s) in core for t in _spread_windows(p, k))]
        reached: list[dict] = [{} for _ in range(D)]
        for p, s in fine:
            for n in range(1, D + 1):
                for psi in monotone_maps(n, p):
                    reached[n - 1].setdefault(X.act(psi, s), (p, s))
        per_k.append(reached)
        logger.debug(f"Archimedean search on {S.name!r}: {len(fine)} fine simplices for degree {k}")

    simplices = []
    witnesses = {}
    for n in range(1, D + 1):
        keep = []
        for x in X.carrier(n):
            if all(x in reached[n - 1] for reached in per_k):
                keep.append(x)
                witnesses[(n, x)] = {k: reached[n - 1][x] for k, reached in enumerate(per_k, start=1)}
        simplices.append(frozenset(keep))
    return ArchimedeanResult(tuple(simplices), witnesses, sub_sset(X, simplices))
