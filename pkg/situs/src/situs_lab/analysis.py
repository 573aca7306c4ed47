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
Sequences and function families over finite towers.

A tower is the index set ``{0..N}`` with the tails ``{i..N}`` as grades.
Cauchy sequences, limits, equicontinuity and uniform convergence are all
morphism checks out of a tower situs (or its product with a source space).
Only the last tail decides continuity, so every Cauchy tower converges to
its horizon term.
"""

import logging
from collections.abc import Hashable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from enum import Enum

from situs_lab.config import get_settings
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError
from situs_lab.filters import GradedFilter
from situs_lab.homotopy import is_quasi_compact_concise
from situs_lab.lifting import LiftingProblem
from situs_lab.lifting import find_lift
from situs_lab.lifting import initial_morphism
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import check_morphism
from situs_lab.situs import embed_cart
from situs_lab.situs import embed_const
from situs_lab.situs import embed_diag
from situs_lab.situs import product_situs
from situs_lab.situs import shift_counit_morphism
from situs_lab.situs import shift_situs
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import embed_metric
from situs_lab.spaces import embed_top
from situs_lab.spaces import topologise

logger = logging.getLogger(__name__)

Label = Hashable


class TowerFlavor(str, Enum):
    DIAG = "diag"
    CART = "cart"
    CONST = "const"


class SourceMode(str, Enum):
    PA = "pa"
    MI = "mi"


@dataclass(frozen=True)
class SequenceTower:
    """``{0..N}`` with tail grades ``T_i = {i..N}``, stopping at tails of length ``min_tail``."""
    horizon: int
    flavor: TowerFlavor = TowerFlavor.CART
    min_tail: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "flavor", TowerFlavor(self.flavor))
        object.__setattr__(self, "min_tail", self.min_tail or get_settings().min_tail)
        if self.horizon < 0:
            raise DomainError(f"Tower horizon must be non-negative, got {self.horizon}")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(self.horizon + 1))

    @property
    def last_tail(self) -> frozenset:
        return self.filter.core

    @property
    def filter(self) -> GradedFilter:
        last = max(self.horizon + 1 - self.min_tail, 0)
        return GradedFilter(self.indices, tuple(frozenset(range(i, self.horizon + 1)) for i in range(last + 1)))

    def situs(self, D: int) -> Situs:
        embed = {TowerFlavor.DIAG: embed_diag, TowerFlavor.CART: embed_cart, TowerFlavor.CONST: embed_const}
        S = embed[self.flavor](self.filter, D)
        S.name = f"N_cof[{self.horizon}]_{self.flavor.value}"
        return S


def _check_sequence(a: Sequence[Label], M: FiniteMetricSpace, tower: SequenceTower) -> None:
    if len(a) != tower.horizon + 1:
        raise DomainError(f"Sequence has {len(a)} terms, the tower expects {tower.horizon + 1}")
    for x in a:
        M.d(x, x)


def sequence_morphism(a: Sequence[Label], M: FiniteMetricSpace, tower: SequenceTower, D: int = 2) -> SitusMorphism:
    """``(i_1..i_n) ↦ (a_{i_1}..a_{i_n})`` from the cart tower into ``M_mi``."""
    _check_sequence(a, M, tower)
    source = SequenceTower(tower.horizon, TowerFlavor.CART, tower.min_tail).situs(D)
    return SitusMorphism.tabulate(source, embed_metric(M, D), lambda n, idx: tuple(a[i] for i in idx))


def is_cauchy(a: Sequence[Label], M: FiniteMetricSpace, tower: SequenceTower | None = None, D: int = 2) -> bool:
    tower = tower or SequenceTower(len(a) - 1)
    return bool(check_morphism(sequence_morphism(a, M, tower, D)))


@dataclass
class LimitResult:
    """A deterministic representative with every qualifying limit point."""
    limit: Label | None
    candidates: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.limit is not None


def find_limit(a: Sequence[Label], M: FiniteMetricSpace, tower: SequenceTower | None = None, D: int = 3) -> LimitResult:
    """Points ``c`` with ``(i_1..i_n) ↦ (c, a_{i_1}..a_{i_n})`` continuous into ``M_mi[+1]``."""
    tower = tower or SequenceTower(len(a) - 1)
    _check_sequence(a, M, tower)
    target = shift_situs(embed_metric(M, D))
    source = tower.situs(target.truncation)
    if tower.flavor == TowerFlavor.CONST:
        raise DomainError("Limits are read off the diag or cart tower")
    found = []
    for c in M.points:
        f = SitusMorphism.tabulate(source, target, lambda n, idx, c=c: (c, ) + tuple(a[i] for i in idx))
        if check_morphism(f):
            found.append(c)
    logger.debug(f"Limits of {list(a)!r}: {found!r}")
    return LimitResult(found[0] if found else None, found)


@dataclass
class CompletenessResult:
    complete: bool
    checked: int = 0
    failing: int | None = None

    def __bool__(self) -> bool:
        return self.complete


def check_completeness_lift(M: FiniteMetricSpace,
                            sequences: Sequence[Sequence[Label]],
                            min_tail: int | None = None,
                            D: int = 3) -> CompletenessResult:
    """
    ``∅ → tower ⋔ M_mi[+1] → M_mi`` for every supplied Cauchy sequence.

    Non-Cauchy sequences are skipped. Each lift is cross-checked with :func:`find_limit`.
    """
    M_mi = embed_metric(M, D)
    counit = shift_counit_morphism(M_mi)
    checked = 0
    for k, a in enumerate(sequences):
        tower = SequenceTower(len(a) - 1, TowerFlavor.CART, min_tail)
        g = sequence_morphism(a, M, tower, counit.target.truncation)
        if not check_morphism(g):
            continue
        checked += 1
        g = SitusMorphism(g.source, counit.target, g.components)
        i = initial_morphism(g.source)
        f = SitusMorphism(i.source, counit.source, i.components)
        lift = find_lift(LiftingProblem(i, counit, f, g))
        limit = find_limit(a, M, tower, D)
        if (lift is None) == bool(limit):
            raise OracleMismatchError(f"Completeness lift and limit search disagree on sequence {k}")
        if lift is None:
            logger.info(f"Cauchy sequence {k} has no limit in M")
            return CompletenessResult(False, checked, k)
    if checked:
        logger.warning("Every Cauchy tower converges to its horizon term; completeness over finite towers is vacuous "
                       "beyond the grid")
    return CompletenessResult(True, checked)


@dataclass(frozen=True)
class FunctionFamily:
    """Maps ``f_0..f_N`` from a source space to a metric target."""
    source: FiniteMetricSpace | FiniteTopSpace
    target: FiniteMetricSpace
    maps: tuple[Mapping, ...]

    def __post_init__(self):
        maps = tuple(dict(f) for f in self.maps)
        if not maps:
            raise DomainError("A function family needs at least one map")
        for i, f in enumerate(maps):
            if set(f) != set(self.source.points):
                raise DomainError(f"f_{i} is not total on the source points")
            for y in f.values():
                self.target.d(y, y)
        object.__setattr__(self, "maps", maps)

    @property
    def horizon(self) -> int:
        return len(self.maps) - 1

    def sequence_at(self, x: Label) -> list:
        return [f[x] for f in self.maps]


def source_situs(space: FiniteMetricSpace | FiniteTopSpace, mode: SourceMode | str, D: int) -> Situs:
    """``X_mi`` or ``X_pa``; a metric source read as ``pa`` goes through its topologisation."""
    mode = SourceMode(mode)
    if mode == SourceMode.MI:
        if not isinstance(space, FiniteMetricSpace):
            raise DomainError("The mi source mode needs a metric space")
        return embed_metric(space, D)
    if isinstance(space, FiniteMetricSpace):
        return embed_top(topologise(embed_metric(space, max(D, 2))), D)
    return embed_top(space, D)


def family_morphism(family: FunctionFamily,
                    source_mode: SourceMode | str,
                    index_mode: TowerFlavor | str,
                    D: int = 2,
                    min_tail: int | None = None) -> SitusMorphism:
    """``(x_1..x_n), (i_1..i_n) ↦ (f_{i_1}(x_1)..f_{i_n}(x_n))``; the const index carries one ``i``."""
    index_mode = TowerFlavor(index_mode)
    tower = SequenceTower(family.horizon, index_mode, min_tail).situs(D)
    source = product_situs(source_situs(family.source, source_mode, D), tower)
    target = embed_metric(family.target, D)
    maps = family.maps
    if index_mode == TowerFlavor.CONST:
        return SitusMorphism.tabulate(source, target, lambda n, e: tuple(maps[e[1]][x] for x in e[0]))
    return SitusMorphism.tabulate(source, target, lambda n, e: tuple(maps[i][x] for x, i in zip(*e)))


def check_family(family: FunctionFamily,
                 source_mode: SourceMode | str = SourceMode.PA,
                 index_mode: TowerFlavor | str = TowerFlavor.DIAG,
                 D: int = 2,
                 min_tail: int | None = None) -> bool:
    """
    Equicontinuity notions as morphism checks.

    ``pa`` + ``const``/``diag``: equicontinuous; ``mi`` + ``diag``: uniformly
    equicontinuous; ``cart``: uniformly Cauchy.
    """
    return bool(check_morphism(family_morphism(family, source_mode, index_mode, D, min_tail)))


def is_equicontinuous_at(family: FunctionFamily,
                         x: Label,
                         source_mode: SourceMode | str = SourceMode.PA,
                         D: int = 2,
                         min_tail: int | None = None) -> bool:
    """The diag-mode condition on the minimal grades, restricted to simplices starting at ``x``."""
    f = family_morphism(family, source_mode, TowerFlavor.DIAG, D, min_tail)
    for n in range(1, D + 1):
        core = f.target.core(n)
        for e in f.source.core(n):
            if e[0][0] == x and f(n, e) not in core:
                return False
    return True


def uniform_limit_morphism(family: FunctionFamily,
                           f_inf: Mapping,
                           source_mode: SourceMode | str = SourceMode.MI,
                           D: int = 2,
                           min_tail: int | None = None) -> SitusMorphism:
    """``((x_0, x_1..x_n), (i_1..i_n)) ↦ (f∞(x_0), f_{i_1}(x_1)..f_{i_n}(x_n))`` into ``M_mi[+1]``."""
    source = product_situs(shift_situs(source_situs(family.source, source_mode, D + 1)),
                           SequenceTower(family.horizon, TowerFlavor.DIAG, min_tail).situs(D))
    target = shift_situs(embed_metric(family.target, D + 1))
    maps = family.maps

    def evaluate(n: int, e: tuple) -> tuple:
        xs, idx = e
        return (f_inf[xs[0]], ) + tuple(maps[i][x] for x, i in zip(xs[1:], idx))

    return SitusMorphism.tabulate(source, target, evaluate)


def check_uniform_convergence(family: FunctionFamily,
                              f_inf: Mapping,
                              source_mode: SourceMode | str = SourceMode.MI,
                              D: int = 2,
                              min_tail: int | None = None) -> bool:
    return bool(check_morphism(uniform_limit_morphism(family, f_inf, source_mode, D, min_tail)))


def find_uniform_limit(family: FunctionFamily,
                       source_mode: SourceMode | str = SourceMode.MI,
                       D: int = 2,
                       min_tail: int | None = None) -> LimitResult:
    """Candidates are the family members on the last tail, in index order."""
    tail = sorted(SequenceTower(family.horizon, TowerFlavor.DIAG, min_tail).last_tail)
    found = []
    for j in tail:
        if family.maps[j] in found:
            continue
        if check_uniform_convergence(family, family.maps[j], source_mode, D, min_tail):
            found.append(family.maps[j])
    return LimitResult(found[0] if found else None, found)


def is_convergent_pointwise(family: FunctionFamily, f_inf: Mapping, min_tail: int | None = None) -> bool:
    """Every sequence ``f_i(x)`` has ``f∞(x)`` among its limits."""
    tower = SequenceTower(family.horizon, TowerFlavor.CART, min_tail)
    return all(f_inf[x] in find_limit(family.sequence_at(x), family.target, tower).candidates
               for x in family.source.points)


def arzela_ascoli_report(family: FunctionFamily,
                         source_mode: SourceMode | str = SourceMode.MI,
                         D: int = 2,
                         min_tail: int | None = None) -> dict:
    """
    Evaluate the compactness, completeness, precompactness and convergence squares.

    Statements: (i) a subsequence converges uniformly; (ii) uniformly
    equicontinuous and pointwise precompact; (iii) equicontinuous and
    pointwise precompact.
    """
    X, M = family.source, family.target
    tower = SequenceTower(family.horizon, TowerFlavor.CART, min_tail)
    X_situs = source_situs(X, source_mode, max(D, 2))

    pointwise = {}
    for x in X.points:
        limit = find_limit(family.sequence_at(x), M, tower)
        witnesses = [j for j in sorted(tower.last_tail)
                     if limit and M.d(family.maps[j][x], limit.limit) < M.grid[-1]]
        pointwise[x] = {"limits": limit.candidates, "tail_witnesses": witnesses}
    precompact = all(entry["limits"] for entry in pointwise.values())

    uniformly_equicontinuous = check_family(family, source_mode, TowerFlavor.DIAG, D, min_tail)
    equicontinuous_points = {x: is_equicontinuous_at(family, x, SourceMode.PA, D, min_tail) for x in X.points}
    equicontinuous = all(equicontinuous_points.values())
    uniform = find_uniform_limit(family, source_mode, D, min_tail)

    subsequence = None
    for j in sorted(tower.last_tail):
        if check_uniform_convergence(family, family.maps[j], source_mode, D, min_tail):
            subsequence = j
            break

    statement_i = subsequence is not None
    statement_ii = uniformly_equicontinuous and precompact
    statement_iii = equicontinuous and precompact
    report = {
        "compactness_of_X": is_quasi_compact_concise(X_situs),
        "completeness_of_M": bool(check_completeness_lift(M, [family.sequence_at(x) for x in X.points], min_tail)),
        "pointwise_precompactness": pointwise,
        "uniformly_equicontinuous": uniformly_equicontinuous,
        "equicontinuous": equicontinuous_points,
        "uniform_convergence_square": {
            "holds": (not uniformly_equicontinuous) or bool(uniform),
            "limit": uniform.limit,
        },
        "equicontinuity_square": {
            "holds": (not equicontinuous) or uniformly_equicontinuous
        },
        "subsequence": subsequence,
        "statements": {
            "i": statement_i, "ii": statement_ii, "iii": statement_iii
        },
        "implications": {
            "i=>ii": (not statement_i) or statement_ii,
            "ii=>i": (not statement_ii) or statement_i,
            "ii=>iii": (not statement_ii) or statement_iii,
            "iii=>ii": (not statement_iii) or statement_ii,
        },
    }
    logger.info(f"Arzela-Ascoli statements: i={statement_i} ii={statement_ii} iii={statement_iii}")
    return report
