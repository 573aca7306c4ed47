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
Skorokhod neighbourhoods on hom-sets, the mapping space, and the Skorokhod
distance on grid paths with the realisation of ``Δ_N``.

A grid path with ``N`` jumps on a ``k``-grid is the monotone map
``{0..k} → {0..N}`` counting the jumps at or before each time. At a jump
time the path may take either adjacent value (the completed graph).
"""

import itertools
import logging
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from fractions import Fraction
from functools import cached_property

from joblib import Parallel
from joblib import delayed
from tqdm import tqdm

from situs_lab.config import get_settings
from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError
from situs_lab.errors import PreconditionError
from situs_lab.errors import SearchBudgetError
from situs_lab.filters import GradedFilter
from situs_lab.lifting import MorphismSearch
from situs_lab.simplicial import MonotoneMap
from situs_lab.simplicial import SSetMap
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import check_sset_map
from situs_lab.simplicial import monotone_maps
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import check_morphism
from situs_lab.situs import product_situs
from situs_lab.situs import validate_situs
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.subdivision import archimedean_simplices

logger = logging.getLogger(__name__)

Label = Hashable


@dataclass
class HomSet:
    """Every sset map ``source → target`` in search order."""
    source: TruncatedSSet
    target: TruncatedSSet
    maps: list[SSetMap] = field(default_factory=list)

    @classmethod
    def enumerate(cls, source: TruncatedSSet, target: TruncatedSSet, max_homset: int | None = None) -> "HomSet":
        max_homset = max_homset or get_settings().max_homset
        maps = []
        for components in MorphismSearch(source, target).solutions():
            maps.append(SSetMap(source, target, components))
            if len(maps) > max_homset:
                raise SearchBudgetError(f"Hom-set {source.name!r} -> {target.name!r} exceeds {max_homset} maps",
                                        bound=len(maps),
                                        limit=max_homset)
        return cls(source, target, maps)

    def __len__(self) -> int:
        return len(self.maps)


def head_map(n: int, N_prime: int) -> MonotoneMap:
    """``x'[1..n]``."""
    return MonotoneMap(n, N_prime, tuple(range(n)))


def tail_map(n: int, N_prime: int) -> MonotoneMap:
    """``x'[N'-n+1..N']``."""
    return MonotoneMap(n, N_prime, tuple(range(N_prime - n, N_prime)))


def _check_window(n: int, N_prime: int, truncation: int) -> None:
    if not 0 < 2 * n <= N_prime:
        raise PreconditionError(f"Skorokhod neighbourhoods need N' >= 2n > 0, got N'={N_prime}, n={n}")
    if N_prime > truncation:
        raise DegreeBudgetError(f"Continuations of length {N_prime} exceed truncation {truncation}",
                                needed=N_prime,
                                available=truncation)


def skorokhod_neighbourhood(homset: HomSet,
                            delta: Iterable[Label],
                            epsilon: Iterable[Label],
                            N_prime: int,
                            n: int,
                            delta0: Iterable[Label] | None = None) -> list[SSetMap]:
    """
    Maps ``f`` such that every ``x ∈ δ_0`` has a continuation ``x' ∈ δ``
    with ``x = x'[1..n]`` and ``f(x'[N'-n+1..N']) ∈ ε``.

    ``δ_0`` defaults to all of ``X(n)``; pass the minimal grade of the source.
    """
    X = homset.source
    _check_window(n, N_prime, X.truncation)
    delta, epsilon = frozenset(delta), frozenset(epsilon)
    delta0 = X.carrier(n) if delta0 is None else tuple(delta0)
    head, tail = head_map(n, N_prime), tail_map(n, N_prime)

    continuations: dict = {}
    for x_long in X.carrier(N_prime):
        if x_long in delta:
            continuations.setdefault(X.act(head, x_long), []).append(X.act(tail, x_long))

    result = []
    for f in homset.maps:
        component = f.components[n - 1]
        if all(any(component[t] in epsilon for t in continuations.get(x, ())) for x in delta0):
            result.append(f)
    return result


class MappingVariant(str, Enum):
    SKOROKHOD = "skorokhod"
    UNIFORM = "uniform"


class MappingSpace(Situs):
    """
    A situs whose degree-``n`` simplices are sset maps ``X × Δ_{n-1} → Y``.

    Labels are map keys; :attr:`elements` resolves them back to maps.
    """

    def __init__(self, sset: TruncatedSSet, filters, elements: Sequence[dict], name: str = ""):
        super().__init__(sset, filters, name=name, validate=False)
        self.elements = tuple(elements)

    def element(self, n: int, label: Label) -> SSetMap:
        return self.elements[n - 1][label]


def _delta_map(theta: MonotoneMap, D: int) -> SSetMap:
    """``Δ(θ): Δ_{m-1} → Δ_{n-1}`` on vertices."""
    source, target = standard_simplex(theta.source_size - 1, D), standard_simplex(theta.target_size - 1, D)
    return SSetMap.tabulate(source, target, lambda k, v: tuple(theta(i) for i in v))


def _source_situs(X: Situs, n: int) -> Situs:
    return product_situs(X, antidiscrete_situs(standard_simplex(n - 1, X.truncation)))


def _grade(S: Situs, degree: int, index: int) -> frozenset:
    return S.filter(degree).padded(index + 1)[index]


def mapping_space(X: Situs,
                  Y: Situs,
                  variant: MappingVariant | str = MappingVariant.SKOROKHOD,
                  max_homset: int | None = None) -> MappingSpace:
    """
    The inner hom ``Map(X, Y)``.

    Grade ``i`` at degree ``n`` intersects the Skorokhod neighbourhoods
    ``W(grade_i(S_n, N'), grade_i(Y, k))`` over every legal ``(N', k)``,
    where ``S_n = X × Δ_{n-1}``. Without a legal pair the degree is antidiscrete.
    """
    variant = MappingVariant(variant)
    if X.truncation != Y.truncation:
        raise DomainError(f"Truncations differ: {X.truncation} vs {Y.truncation}")
    D = X.truncation
    sources = [_source_situs(X, n) for n in range(1, D + 1)]
    homsets = [HomSet.enumerate(S.sset, Y.sset, max_homset) for S in sources]
    labels = [[f.key for f in H.maps] for H in homsets]
    elements = [{f.key: f for f in H.maps} for H in homsets]

    action = {}
    for m in range(1, D + 1):
        for n in range(1, D + 1):
            for theta in monotone_maps(m, n):
                delta = _delta_map(theta, D)
                S_m = sources[m - 1].sset
                precompose = [{(x, v): (x, delta(k, v)) for x, v in S_m.carrier(k)} for k in range(1, D + 1)]
                table = {}
                for f in homsets[n - 1].maps:
                    composite = SSetMap(S_m, Y.sset, tuple({e: f.components[k][pre[e]]
                                                            for e in pre} for k, pre in enumerate(precompose)))
                    table[f.key] = composite.key
                action[theta] = table
    sset = TruncatedSSet(D, labels, action, kind="mapping", name=f"Map({X.name},{Y.name})")

    depth = max(max(F.depth for F in X.filters), max(F.depth for F in Y.filters))
    pairs = [(N_prime, k) for N_prime in range(2, D + 1) for k in range(1, N_prime // 2 + 1)]
    filters = []
    for n in range(1, D + 1):
        S, H = sources[n - 1], homsets[n - 1]
        grades = []
        for i in range(depth):
            if variant == MappingVariant.UNIFORM:
                members = [f for f in H.maps if all(
                    f.components[k - 1][e] in _grade(Y, k, i) for k in range(1, D + 1) for e in _grade(S, k, i))]
            elif pairs:
                members = set(H.maps)
                for N_prime, k in pairs:
                    members &= set(
                        skorokhod_neighbourhood(H, _grade(S, N_prime, i), _grade(Y, k, i), N_prime, k, S.core(k)))
            else:
                members = H.maps
            grades.append(frozenset(f.key for f in members))
        filters.append(GradedFilter(tuple(labels[n - 1]), tuple(grades)))

    space = MappingSpace(sset, filters, elements, name=f"Map({X.name},{Y.name})")
    validation = validate_situs(space)
    if not validation:
        logger.warning(f"{space.name} ({variant.value}) fails continuity at {validation.theta.key}, "
                       f"grade {validation.grade_index}")
    return space


@dataclass
class EvaluationResult:
    """The currying map ``Hom(A, Map(X, Y)) → Hom(A × X, Y)``."""
    bijective: bool
    mapping: dict
    domain_size: int
    codomain_size: int
    continuity_preserved: bool


def evaluation_bijection(A: Situs, X: Situs, Y: Situs, max_homset: int | None = None) -> EvaluationResult:
    """
    ``φ ↦ ((a, x) ↦ φ_d(a)(x, ι_d))`` with ``ι_d = (0..d-1)`` the top simplex of ``Δ_{d-1}``.

    Continuity is reported, not required: every continuous ``φ`` is checked
    to evaluate to a continuous map.
    """
    space = mapping_space(X, Y, max_homset=max_homset)
    AX = product_situs(A, X)
    domain = HomSet.enumerate(A.sset, space.sset, max_homset)
    codomain = {f.key: f for f in HomSet.enumerate(AX.sset, Y.sset, max_homset).maps}
    D = A.truncation
    mapping = {}
    continuity_preserved = True
    for phi in domain.maps:

        def evaluate(d: int, e: tuple, phi=phi) -> Label:
            a, x = e
            top = tuple(range(d))
            return space.element(d, phi(d, a))(d, (x, top))

        image = SSetMap.tabulate(AX.sset, Y.sset, evaluate)
        if check_sset_map(image) is not None:
            raise OracleMismatchError("Evaluation of a map into Map(X, Y) is not simplicial")
        mapping[phi.key] = image.key
        if check_morphism(SitusMorphism(A, space, phi.components)):
            if not check_morphism(SitusMorphism(AX, Y, image.components)):
                continuity_preserved = False
    bijective = len(set(mapping.values())) == len(mapping) == len(codomain) and set(mapping.values()) <= set(codomain)
    logger.info(f"Evaluation Hom(A, Map) -> Hom(A x X, Y): {len(mapping)} -> {len(codomain)} maps, "
                f"bijective={bijective}, truncation {D}")
    return EvaluationResult(bijective, mapping, len(mapping), len(codomain), continuity_preserved)


@dataclass(frozen=True)
class GridPath:
    """``N`` jumps at grid times ``0 ≤ jumps_1 ≤ … ≤ jumps_N ≤ k``."""
    N: int
    k: int
    jumps: tuple[int, ...]

    def __post_init__(self):
        jumps = tuple(int(j) for j in self.jumps)
        if self.k < 1 or self.N < 0:
            raise DomainError(f"Grid paths need k >= 1 and N >= 0, got k={self.k}, N={self.N}")
        if len(jumps) != self.N:
            raise DomainError(f"Expected {self.N} jump times, got {jumps}")
        if any(j < 0 or j > self.k for j in jumps) or any(a > b for a, b in zip(jumps, jumps[1:])):
            raise DomainError(f"Jump times {jumps} must be non-decreasing in 0..{self.k}")
        object.__setattr__(self, "jumps", jumps)

    @property
    def coordinates(self) -> tuple[Fraction, ...]:
        """``s_j = jumps_j / k``."""
        return tuple(Fraction(j, self.k) for j in self.jumps)

    def value(self, t: int) -> int:
        return sum(1 for j in self.jumps if j <= t)

    def values(self) -> tuple[int, ...]:
        return tuple(self.value(t) for t in range(self.k + 1))

    def interval(self, v: int) -> tuple[int, int]:
        """Times at which the completed graph attains ``v``."""
        bounds = (0, ) + self.jumps + (self.k, )
        return bounds[v], bounds[v + 1]

    @cached_property
    def graph(self) -> tuple[tuple[int, int], ...]:
        """Points ``(t, v)`` of the completed graph, ordered by time then value."""
        return tuple((t, v) for t in range(self.k + 1) for v in range(self.N + 1)
                     if self.interval(v)[0] <= t <= self.interval(v)[1])

    @classmethod
    def from_coordinates(cls, coordinates: Sequence, k: int) -> "GridPath":
        jumps = []
        for s in coordinates:
            scaled = Fraction(s) * k
            if scaled.denominator != 1:
                raise DomainError(f"Jump coordinate {s} is not on the {k}-grid")
            jumps.append(int(scaled))
        return cls(len(jumps), k, tuple(jumps))


def all_grid_paths(N: int, k: int) -> list[GridPath]:
    return [GridPath(N, k, jumps) for jumps in itertools.combinations_with_replacement(range(k + 1), N)]


def jump_distance(f: GridPath, g: GridPath) -> Fraction:
    """``max_j |s_j(f) - s_j(g)|``."""
    _check_comparable(f, g)
    return max((abs(a - b) for a, b in zip(f.coordinates, g.coordinates)), default=Fraction(0))


def _check_comparable(f: GridPath, g: GridPath) -> None:
    if f.N != g.N or f.k != g.k:
        raise DomainError(f"Paths live on different grids: N={f.N},k={f.k} vs N={g.N},k={g.k}")


def _chains(points: Sequence[tuple[int, int]], length: int) -> Iterable[tuple]:
    for chain in itertools.combinations_with_replacement(points, length):
        if all(a[1] <= b[1] for a, b in zip(chain, chain[1:])):
            yield chain


def _shadow_exists(chain: Sequence[tuple[int, int]], g: GridPath, d: int) -> bool:
    """Greedy choice of ``t'_1 ≤ … ≤ t'_n`` with ``(t'_i, v_i)`` on ``g`` and ``|t_i - t'_i| ≤ d``."""
    previous = 0
    for t, v in chain:
        low, high = g.interval(v)
        lower = max(low, t - d, previous)
        upper = min(high, t + d)
        if lower > upper:
            return False
        previous = lower
    return True


def skorokhod_distance(f: GridPath, g: GridPath) -> Fraction:
    """
    Least grid-quantized ``ε`` such that every monotone vector of points on
    the graph of ``f`` is shadowed on the graph of ``g`` within ``ε``.

    Vectors up to length ``N + 1`` are enumerated; the result is checked
    against :func:`jump_distance`.
    """
    _check_comparable(f, g)
    chains = [chain for n in range(1, f.N + 2) for chain in _chains(f.graph, n)]
    distance = None
    for d in range(f.k + 1):
        if all(_shadow_exists(chain, g, d) for chain in chains):
            distance = Fraction(d, f.k)
            break
    closed_form = jump_distance(f, g)
    if distance != closed_form:
        raise OracleMismatchError(f"Skorokhod distance {distance} disagrees with the jump metric {closed_form} "
                                  f"for {f.jumps} and {g.jumps}")
    return distance


def _distance_row(path: GridPath, paths: Sequence[GridPath]) -> tuple[Fraction, ...]:
    return tuple(skorokhod_distance(path, other) for other in paths)


def realize_simplex(N: int, k: int, n_jobs: int | None = None) -> FiniteMetricSpace:
    """
    Grid paths with ``N`` jumps on a ``k``-grid under the Skorokhod distance.

    Points are labelled by jump tuples; the ε-grid is ``1, (k-1)/k, …, 1/k``.
    """
    if k < 1:
        raise DomainError(f"Grid size must be at least 1, got {k}")
    settings = get_settings()
    n_jobs = n_jobs or settings.n_jobs
    paths = all_grid_paths(N, k)
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_distance_row)(path, paths)
        for path in tqdm(paths, desc=f"realize Delta_{N}", disable=not settings.show_progress))
    space = FiniteMetricSpace(tuple(p.jumps for p in paths), tuple(rows), tuple(Fraction(j, k) for j in range(k, 0, -1)))
    distortion = embedding_distortion(space, k)
    if distortion > Fraction(1, k):
        raise OracleMismatchError(f"Realisation of Delta_{N} has distortion {distortion} > 1/{k}")
    return space


def embedding_distortion(space: FiniteMetricSpace, k: int) -> Fraction:
    """``max |d(f, g) - ‖s(f) - s(g)‖_∞|`` over pairs of realised paths."""
    worst = Fraction(0)
    for a, b in itertools.combinations(space.points, 2):
        flat = max((abs(Fraction(x - y, k)) for x, y in zip(a, b)), default=Fraction(0))
        worst = max(worst, abs(space.d(a, b) - flat))
    return worst


def skorokhod_homotopic(f: Label, g: Label, space: MappingSpace, refinement_budget: int | None = None) -> bool:
    """``(f, g)`` spans a degree-2 simplex of ``Map(X, Y)`` that is Archimedean."""
    if space.truncation < 2:
        raise DegreeBudgetError("Homotopies live in degree 2", needed=2, available=space.truncation)
    edges = space.sset.vertex_index[1].get((f, g), [])
    if not edges:
        logger.debug("No degree-2 simplex of the mapping space joins the two maps")
        return False
    archimedean = archimedean_simplices(space, refinement_budget)
    return any(archimedean.contains(2, e) for e in edges)

