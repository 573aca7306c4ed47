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
Finite metric and topological spaces and their situses.

A finite topological space is stored by its minimal open neighbourhoods
``U_x``; equivalently by the specialization preorder ``x ≤ y ⟺ y ∈ U_x``.
"""

import itertools
import logging
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx

from situs_lab.config import get_settings
from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.filters import FilterSemantics
from situs_lab.simplicial import representable_sset
from situs_lab.situs import Situs

logger = logging.getLogger(__name__)

Label = Hashable


def as_fraction(value) -> Fraction:
    """Exact rational from an int, a Fraction or a ``"p/q"`` / decimal string."""
    if isinstance(value, float):
        raise DomainError(f"Floats are not exact, pass {value!r} as a string or Fraction")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise DomainError(f"Not a rational number: {value!r}") from e


@dataclass(frozen=True)
class FiniteMetricSpace:
    """
    Points with a symmetric distance table and a strictly decreasing grid ``ε_1 > … > ε_k > 0``.

    Distances are exact rationals. Zero distances between distinct points are
    allowed (pseudometrics arise from path spaces).
    """
    points: tuple
    dist: tuple[tuple[Fraction, ...], ...]
    grid: tuple[Fraction, ...]

    def __post_init__(self):
        points = tuple(self.points)
        if len(set(points)) != len(points):
            raise DomainError(f"Metric space points are not distinct: {points}")
        dist = tuple(tuple(as_fraction(v) for v in row) for row in self.dist)
        grid = tuple(as_fraction(v) for v in self.grid)
        n = len(points)
        if len(dist) != n or any(len(row) != n for row in dist):
            raise DomainError(f"Distance table must be {n}x{n}")
        for i in range(n):
            if dist[i][i] != 0:
                raise DomainError(f"Nonzero self-distance at {points[i]!r}")
            for j in range(n):
                if dist[i][j] < 0 or dist[i][j] != dist[j][i]:
                    raise DomainError(f"Distance between {points[i]!r} and {points[j]!r} is negative or asymmetric")
        for i, j, k in itertools.product(range(n), repeat=3):
            if dist[i][k] > dist[i][j] + dist[j][k]:
                raise DomainError(f"Triangle inequality fails at {points[i]!r}, {points[j]!r}, {points[k]!r}")
        if not grid:
            raise DomainError("The ε-grid must be nonempty")
        if any(e <= 0 for e in grid) or any(a <= b for a, b in zip(grid, grid[1:])):
            raise DomainError(f"The ε-grid must be positive and strictly decreasing, got {grid}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "grid", grid)

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    def d(self, x: Label, y: Label) -> Fraction:
        try:
            return self.dist[self.index[x]][self.index[y]]
        except KeyError as e:
            raise DomainError(f"{e.args[0]!r} is not a point of the metric space") from None

    @property
    def min_positive_distance(self) -> Fraction | None:
        values = [v for row in self.dist for v in row if v > 0]
        return min(values, default=None)

    @property
    def diameter(self) -> Fraction:
        return max((v for row in self.dist for v in row), default=Fraction(0))

    def small(self, points: Iterable[Label], epsilon: Fraction) -> bool:
        """True iff the points are pairwise closer than ``epsilon``."""
        points = list(points)
        return all(self.d(x, y) < epsilon for x, y in itertools.combinations(points, 2))

    def restrict(self, points: Iterable[Label]) -> "FiniteMetricSpace":
        keep = [x for x in self.points if x in set(points)]
        return FiniteMetricSpace(tuple(keep), tuple(tuple(self.d(x, y) for y in keep) for x in keep), self.grid)

    @classmethod
    def from_points_on_line(cls, coordinates: Mapping[Label, object], grid: Sequence) -> "FiniteMetricSpace":
        """Points of the real line with ``d(x, y) = |x - y|``."""
        labels = tuple(coordinates)
        values = [as_fraction(coordinates[x]) for x in labels]
        return cls(labels, tuple(tuple(abs(a - b) for b in values) for a in values), tuple(grid))


def embed_metric(M: FiniteMetricSpace, D: int | None = None) -> Situs:
    """``M_mi``: grade ``i`` at degree ``n`` is the tuples that are pairwise ``ε_i``-close."""
    D = D or get_settings().truncation
    X = representable_sset(M.points, D, name="mi")
    return Situs.from_grades(X,
                             lambda n, carrier: [{x for x in carrier if M.small(x, e)} for e in M.grid],
                             name="M_mi")


class FiniteTopSpace:
    """A finite topological space given by its minimal open sets."""

    def __init__(self, points: Sequence[Label], minimal_opens: Mapping[Label, Iterable[Label]]):
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise DomainError(f"Space points are not distinct: {self.points}")
        members = frozenset(self.points)
        if set(minimal_opens) != members:
            raise DomainError("Minimal open sets must be given for exactly the points of the space")
        self.minimal_opens = {x: frozenset(minimal_opens[x]) for x in self.points}
        for x, U in self.minimal_opens.items():
            if x not in U or not U <= members:
                raise DomainError(f"U_{x!r} must contain {x!r} and lie in the space")
            for y in U:
                if not self.minimal_opens[y] <= U:
                    raise DomainError(f"U_{y!r} is not contained in U_{x!r} although {y!r} ∈ U_{x!r}")

    def __repr__(self) -> str:
        opens = ", ".join(f"{x!r}: {sorted(map(repr, U))}" for x, U in self.minimal_opens.items())
        return f"FiniteTopSpace({{{opens}}})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteTopSpace) and self.minimal_opens == other.minimal_opens

    def __hash__(self) -> int:
        return hash(frozenset(self.minimal_opens.items()))

    def U(self, x: Label) -> frozenset:
        try:
            return self.minimal_opens[x]
        except KeyError:
            raise DomainError(f"{x!r} is not a point of the space") from None

    def is_open(self, subset: Iterable[Label]) -> bool:
        subset = frozenset(subset)
        return all(self.U(x) <= subset for x in subset)

    def opens(self) -> list[frozenset]:
        """Every open set, smallest first."""
        subsets = (frozenset(c) for r in range(len(self.points) + 1) for c in itertools.combinations(self.points, r))
        return [U for U in subsets if self.is_open(U)]

    def specialization_graph(self) -> nx.DiGraph:
        """Edge ``x → y`` iff ``y ∈ U_x``."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.points)
        graph.add_edges_from((x, y) for x, U in self.minimal_opens.items() for y in U)
        return graph

    def subspace(self, points: Iterable[Label]) -> "FiniteTopSpace":
        keep = frozenset(points)
        return FiniteTopSpace([x for x in self.points if x in keep], {x: self.U(x) & keep for x in keep})

    def product(self, other: "FiniteTopSpace") -> "FiniteTopSpace":
        points = list(itertools.product(self.points, other.points))
        return FiniteTopSpace(points, {(a, b): frozenset(itertools.product(self.U(a), other.U(b))) for a, b in points})

    @classmethod
    def from_opens(cls, points: Sequence[Label], opens: Iterable[Iterable[Label]]) -> "FiniteTopSpace":
        """Validate the topology axioms and compute minimal open sets."""
        points = tuple(points)
        members = frozenset(points)
        family = {frozenset(U) for U in opens}
        if any(not U <= members for U in family):
            raise DomainError("An open set leaves the space")
        if frozenset() not in family or members not in family:
            raise DomainError("Opens must contain the empty set and the whole space")
        for U, V in itertools.combinations(family, 2):
            if U | V not in family or U & V not in family:
                raise DomainError(f"Opens are not closed under union and intersection: {sorted(U)}, {sorted(V)}")
        minimal = {x: frozenset.intersection(*(U for U in family if x in U)) for x in points}
        return cls(points, minimal)

    @classmethod
    def from_preorder(cls, points: Sequence[Label], relation: Iterable[tuple[Label, Label]]) -> "FiniteTopSpace":
        """The topology whose opens are up-sets of the reflexive transitive closure of ``relation``."""
        graph = nx.DiGraph()
        graph.add_nodes_from(points)
        for x, y in relation:
            if x not in graph or y not in graph:
                raise DomainError(f"Relation pair ({x!r}, {y!r}) leaves the space")
            graph.add_edge(x, y)
        closure = nx.transitive_closure(graph, reflexive=True)
        return cls(points, {x: frozenset(closure.successors(x)) | {x} for x in points})

    @classmethod
    def discrete(cls, points: Sequence[Label]) -> "FiniteTopSpace":
        return cls(points, {x: {x} for x in points})

    @classmethod
    def antidiscrete(cls, points: Sequence[Label]) -> "FiniteTopSpace":
        return cls(points, {x: set(points) for x in points})

    @classmethod
    def sierpinski(cls) -> "FiniteTopSpace":
        """``{0, 1}`` with opens ``∅, {1}, {0, 1}``."""
        return cls((0, 1), {0: {0, 1}, 1: {1}})


def is_continuous(f: Mapping, X: FiniteTopSpace, Y: FiniteTopSpace) -> bool:
    """Open-preimage test."""
    for V in Y.opens():
        if not X.is_open(x for x in X.points if f[x] in V):
            return False
    return True


def all_topologies(points: Sequence[Label]) -> Iterator[FiniteTopSpace]:
    """Every topology on ``points``, one per preorder."""
    points = tuple(points)
    pairs = [(x, y) for x in points for y in points if x != y]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        relation = {pair for pair, bit in zip(pairs, bits) if bit}
        if all((x, z) in relation for (x, y) in relation for (w, z) in relation if y == w and x != z):
            yield FiniteTopSpace(points, {x: {x} | {y for (w, y) in relation if w == x} for x in points})


def embed_top(X: FiniteTopSpace, D: int | None = None) -> Situs:
    """
    ``X_pa``.

    Degree 1 is antidiscrete; degree 2 has the single grade ``E = ⋃ {x} × U_x``;
    degree ``n ≥ 3`` keeps the tuples whose consecutive pairs lie in ``E``.
    """
    D = D or get_settings().truncation
    E = frozenset((x, y) for x in X.points for y in X.U(x))

    def grades(n: int, carrier: tuple):
        if n == 1:
            return [carrier]
        return [{x for x in carrier if all(pair in E for pair in zip(x, x[1:]))}]

    return Situs.from_grades(representable_sset(X.points, D, name="pa"), grades, name="X_pa")


def point_situs(D: int | None = None) -> Situs:
    """``{0=1}_pa``."""
    return embed_top(FiniteTopSpace.antidiscrete((0, )), D)


def two_point_situs(D: int | None = None) -> Situs:
    """``{0,1}_pa``: the discrete two-point space."""
    return embed_top(FiniteTopSpace.discrete((0, 1)), D)


def vertex_point(S: Situs, v: Label) -> Label:
    """Name a vertex by its point when the simplices are tuples of points."""
    if S.sset.kind in ("representable", "nerve"):
        return v[0]
    return v


def topologise(S: Situs) -> FiniteTopSpace:
    """
    ``S_pa⁻¹``: points are the minimal degree-1 grade; ``x ≤ y`` when some
    degree-2 simplex of the minimal grade runs from ``x`` to ``y``.
    """
    if S.truncation < 2:
        raise DegreeBudgetError("topologise needs degree-2 data", needed=2, available=S.truncation)
    if S.semantics != FilterSemantics.GENERATED:
        logger.debug(f"topologise reads {S.name!r} through its minimal grades")
    core_1 = S.core(1)
    vertices = [v for v in S.carrier(1) if v in core_1]
    relation = []
    for x in S.core(2):
        a, b = S.sset.vertices(2, x)
        if a in core_1 and b in core_1:
            relation.append((vertex_point(S, a), vertex_point(S, b)))
    return FiniteTopSpace.from_preorder([vertex_point(S, v) for v in vertices], relation)
