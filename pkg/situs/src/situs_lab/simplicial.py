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
Truncated simplicial sets stored extensionally.

Degrees are carrier sizes: ``X(n)`` holds the simplices indexed by the
linear order ``n_≤ = {0, …, n-1}``, so a vertex lives in ``X(1)``. A
monotone map ``θ: m_≤ → n_≤`` acts contravariantly as ``X(n) → X(m)``.
Every action table for ``m, n ≤ D`` is materialized at construction.
"""

import itertools
import logging
from collections.abc import Callable
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError

logger = logging.getLogger(__name__)

Label = Hashable


@dataclass(frozen=True, order=True)
class MonotoneMap:
    """A non-decreasing map ``source_size_≤ → target_size_≤``."""
    source_size: int
    target_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        if self.source_size < 1 or self.target_size < 1:
            raise DomainError(f"Linear orders must be nonempty, got {self.source_size}->{self.target_size}")
        if len(values) != self.source_size:
            raise DomainError(f"Expected {self.source_size} values, got {values}")
        if any(v < 0 or v >= self.target_size for v in values):
            raise DomainError(f"Values {values} out of range for target size {self.target_size}")
        if any(a > b for a, b in zip(values, values[1:])):
            raise DomainError(f"Values {values} are not non-decreasing")
        object.__setattr__(self, "values", values)

    def __call__(self, i: int) -> int:
        return self.values[i]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ other``: apply ``other`` first."""
        if other.target_size != self.source_size:
            raise DomainError(f"Cannot compose {self} after {other}")
        return MonotoneMap(other.source_size, self.target_size, tuple(self.values[v] for v in other.values))

    def shifted(self) -> "MonotoneMap":
        """``[+1]θ``: add a new minimal element to both orders and fix it."""
        return MonotoneMap(self.source_size + 1, self.target_size + 1, (0, ) + tuple(v + 1 for v in self.values))

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == self.source_size

    @property
    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target_size

    @property
    def key(self) -> str:
        return f"{self.source_size}->{self.target_size}:{','.join(map(str, self.values))}"

    @classmethod
    def identity(cls, n: int) -> "MonotoneMap":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def parse(cls, key: str) -> "MonotoneMap":
        """Inverse of :attr:`key`."""
        try:
            sizes, values = key.split(":")
            m, n = (int(part) for part in sizes.split("->"))
            return cls(m, n, tuple(int(v) for v in values.split(",")) if values else ())
        except ValueError as e:
            raise DomainError(f"Malformed monotone map key {key!r}: {e}") from e


def monotone_maps(m: int, n: int) -> Iterator[MonotoneMap]:
    """All monotone maps ``m_≤ → n_≤`` in lexicographic order."""
    for values in itertools.combinations_with_replacement(range(n), m):
        yield MonotoneMap(m, n, values)


def face_map(n: int, i: int) -> MonotoneMap:
    """``δ_i: (n-1)_≤ → n_≤`` skipping ``i``."""
    return MonotoneMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n - 1)))


def degeneracy_map(n: int, i: int) -> MonotoneMap:
    """``σ_i: (n+1)_≤ → n_≤`` hitting ``i`` twice."""
    return MonotoneMap(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 1)))


def vertex_map(n: int, i: int) -> MonotoneMap:
    return MonotoneMap(1, n, (i, ))


class TruncatedSSet:
    """
    A simplicial set on degrees ``1..D`` with every action table materialized.

    ``kind`` records how the sset was built ("representable", "nerve",
    "constant" or "general"); constructions that only make sense for one
    shape check it.
    """

    def __init__(self,
                 truncation: int,
                 carriers: Sequence[Sequence[Label]],
                 action: Mapping[MonotoneMap, Mapping[Label, Label]],
                 kind: str = "general",
                 name: str = ""):
        if truncation < 1:
            raise DegreeBudgetError(f"Truncation must be at least 1, got {truncation}", needed=1, available=truncation)
        if len(carriers) != truncation:
            raise DomainError(f"Expected {truncation} carriers, got {len(carriers)}")
        self.truncation = truncation
        self.carriers = tuple(tuple(c) for c in carriers)
        for n, carrier in enumerate(self.carriers, start=1):
            if len(set(carrier)) != len(carrier):
                raise DomainError(f"Carrier X({n}) has repeated labels")
        self.action = {theta: dict(table) for theta, table in action.items()}
        self.kind = kind
        self.name = name

    def __repr__(self) -> str:
        sizes = ", ".join(str(len(c)) for c in self.carriers)
        label = f"{self.name} " if self.name else ""
        return f"<TruncatedSSet {label}{self.kind} D={self.truncation} sizes=[{sizes}]>"

    @classmethod
    def tabulate(cls,
                 truncation: int,
                 carrier_fn: Callable[[int], Iterable[Label]],
                 act_fn: Callable[[MonotoneMap, Label], Label],
                 kind: str = "general",
                 name: str = "") -> "TruncatedSSet":
        """Build an sset from a carrier function and an action function, checking closure."""
        carriers = [tuple(carrier_fn(n)) for n in range(1, truncation + 1)]
        members = [frozenset(c) for c in carriers]
        action = {}
        for n in range(1, truncation + 1):
            for m in range(1, truncation + 1):
                for theta in monotone_maps(m, n):
                    table = {}
                    for x in carriers[n - 1]:
                        y = act_fn(theta, x)
                        if y not in members[m - 1]:
                            raise DomainError(f"Action of {theta.key} sends {x!r} outside X({m}): {y!r}")
                        table[x] = y
                    action[theta] = table
        return cls(truncation, carriers, action, kind=kind, name=name)

    def carrier(self, n: int) -> tuple:
        if n < 1 or n > self.truncation:
            raise DegreeBudgetError(f"Degree {n} is outside 1..{self.truncation}", needed=n, available=self.truncation)
        return self.carriers[n - 1]

    @cached_property
    def _positions(self) -> tuple[dict, ...]:
        return tuple({x: i for i, x in enumerate(c)} for c in self.carriers)

    def position(self, n: int, x: Label) -> int:
        return self._positions[n - 1][x]

    def contains(self, n: int, x: Label) -> bool:
        return 1 <= n <= self.truncation and x in self._positions[n - 1]

    def act(self, theta: MonotoneMap, x: Label) -> Label:
        """``x[θ]``, the image of ``x ∈ X(θ.target_size)`` in ``X(θ.source_size)``."""
        try:
            return self.action[theta][x]
        except KeyError:
            if theta not in self.action:
                raise DegreeBudgetError(f"No action table for {theta.key} at truncation {self.truncation}",
                                        needed=max(theta.source_size, theta.target_size),
                                        available=self.truncation) from None
            raise DomainError(f"{x!r} is not a simplex of X({theta.target_size})") from None

    def face(self, x: Label, n: int, indices: Sequence[int]) -> Label:
        """``x[t_1 ≤ … ≤ t_k]`` for ``x ∈ X(n)``."""
        return self.act(MonotoneMap(len(indices), n, tuple(indices)), x)

    def vertices(self, n: int, x: Label) -> tuple:
        return tuple(self.act(vertex_map(n, i), x) for i in range(n))

    @cached_property
    def vertex_index(self) -> tuple[dict, ...]:
        """Per degree, the simplices grouped by their vertex tuple."""
        index = []
        for n, carrier in enumerate(self.carriers, start=1):
            groups: dict[tuple, list] = {}
            for x in carrier:
                groups.setdefault(self.vertices(n, x), []).append(x)
            index.append(groups)
        return tuple(index)

    def maps(self) -> Iterator[MonotoneMap]:
        return iter(self.action)

    def is_non_degenerate(self, n: int, x: Label) -> bool:
        """True iff ``x`` is not the image of a degeneracy ``X(n-1) → X(n)``."""
        if n == 1:
            return True
        for i in range(n - 1):
            sigma = degeneracy_map(n - 1, i)
            delta = face_map(n, i + 1)
            # x = s_i(y) iff x = s_i(d_{i+1} x)
            if self.act(sigma, self.act(delta, x)) == x:
                return False
        return True

    def non_degenerate(self, n: int) -> tuple:
        return tuple(x for x in self.carrier(n) if self.is_non_degenerate(n, x))

    def same_as(self, other: "TruncatedSSet") -> bool:
        """Structural equality of carriers (as sets) and action tables."""
        if self.truncation != other.truncation:
            return False
        if any(set(a) != set(b) for a, b in zip(self.carriers, other.carriers)):
            return False
        return all(self.action[theta] == other.action.get(theta) for theta in self.action)


def check_functoriality(X: TruncatedSSet) -> tuple[MonotoneMap, MonotoneMap, Label] | None:
    """
    First ``(θ, ψ, x)`` with ``x[θ∘ψ] ≠ x[θ][ψ]``, or an identity that acts non-trivially.

    Returns ``None`` when the action is functorial.
    """
    for n in range(1, X.truncation + 1):
        ident = MonotoneMap.identity(n)
        for x in X.carrier(n):
            if X.act(ident, x) != x:
                return ident, ident, x
    for theta in X.maps():
        for psi in X.maps():
            if psi.target_size != theta.source_size:
                continue
            composite = theta.compose(psi)
            for x in X.carrier(theta.target_size):
                if X.act(composite, x) != X.act(psi, X.act(theta, x)):
                    return theta, psi, x
    return None


def check_simplicial_identities(X: TruncatedSSet) -> str | None:
    """Check the face/degeneracy identities on generators; returns a description of the first failure."""
    D = X.truncation
    for n in range(3, D + 1):
        for j in range(n):
            for i in range(j):
                # d_i d_j = d_{j-1} d_i on X(n)
                for x in X.carrier(n):
                    lhs = X.act(face_map(n - 1, i), X.act(face_map(n, j), x))
                    rhs = X.act(face_map(n - 1, j - 1), X.act(face_map(n, i), x))
                    if lhs != rhs:
                        return f"d_{i} d_{j} != d_{j - 1} d_{i} on {x!r}"
    for n in range(1, D):
        for i in range(n):
            for x in X.carrier(n):
                y = X.act(degeneracy_map(n, i), x)
                # d_i s_i = d_{i+1} s_i = id
                for k in (i, i + 1):
                    if X.act(face_map(n + 1, k), y) != x:
                        return f"d_{k} s_{i} != id on {x!r}"
    return None


def _nerve_tuples(order: Sequence[Label], n: int) -> Iterator[tuple]:
    for positions in itertools.combinations_with_replacement(range(len(order)), n):
        yield tuple(order[p] for p in positions)


def _reselect(theta: MonotoneMap, x: tuple) -> tuple:
    return tuple(x[v] for v in theta.values)


def representable_sset(S: Sequence[Label], D: int, name: str = "") -> TruncatedSSet:
    """``X(n) = Sⁿ`` with the action reselecting coordinates."""
    S = tuple(S)
    return TruncatedSSet.tabulate(D,
                                  lambda n: itertools.product(S, repeat=n),
                                  _reselect,
                                  kind="representable",
                                  name=name or "representable")


def nerve_of_order(order: Sequence[Label], D: int, name: str = "") -> TruncatedSSet:
    """``X(n)`` = monotone maps ``n_≤ → order``, stored as non-decreasing tuples."""
    order = tuple(order)
    return TruncatedSSet.tabulate(D,
                                  lambda n: _nerve_tuples(order, n),
                                  _reselect,
                                  kind="nerve",
                                  name=name or "nerve")


def standard_simplex(N: int, D: int) -> TruncatedSSet:
    """``Δ_N``: monotone maps into ``(N+1)_≤``."""
    if N < 0:
        raise DomainError(f"Standard simplex dimension must be non-negative, got {N}")
    return nerve_of_order(tuple(range(N + 1)), D, name=f"Delta_{N}")


def constant_sset(S: Sequence[Label], D: int, name: str = "") -> TruncatedSSet:
    """``X(n) = S`` with every structure map the identity."""
    S = tuple(S)
    return TruncatedSSet.tabulate(D, lambda n: S, lambda theta, x: x, kind="constant", name=name or "constant")


def disjoint_union(*parts: TruncatedSSet) -> TruncatedSSet:
    """Coproduct; elements are tagged ``(k, x)``."""
    if not parts:
        raise DomainError("disjoint_union needs at least one part")
    D = _common_truncation(parts)
    carriers = [[(k, x) for k, X in enumerate(parts) for x in X.carrier(n)] for n in range(1, D + 1)]
    action = {}
    for theta in parts[0].maps():
        action[theta] = {(k, x): (k, X.act(theta, x)) for k, X in enumerate(parts) for x in X.carrier(theta.target_size)}
    return TruncatedSSet(D, carriers, action, name=" + ".join(X.name for X in parts))


def product_sset(*factors: TruncatedSSet) -> TruncatedSSet:
    """Degree-wise product; elements are tuples with one entry per factor."""
    if not factors:
        raise DomainError("product_sset needs at least one factor")
    D = _common_truncation(factors)
    carriers = [list(itertools.product(*(X.carrier(n) for X in factors))) for n in range(1, D + 1)]
    action = {}
    for theta in factors[0].maps():
        tables = [X.action[theta] for X in factors]
        action[theta] = {x: tuple(t[c] for t, c in zip(tables, x)) for x in carriers[theta.target_size - 1]}
    return TruncatedSSet(D, carriers, action, name=" x ".join(X.name for X in factors))


def _common_truncation(ssets: Sequence[TruncatedSSet]) -> int:
    truncations = {X.truncation for X in ssets}
    if len(truncations) != 1:
        raise DomainError(f"Truncations differ: {sorted(truncations)}")
    return truncations.pop()


def truncate(X: TruncatedSSet, D: int) -> TruncatedSSet:
    """``X`` restricted to degrees ``1..D``."""
    if D > X.truncation:
        raise DegreeBudgetError(f"Cannot extend truncation {X.truncation} to {D}", needed=D, available=X.truncation)
    if D == X.truncation:
        return X
    action = {theta: table for theta, table in X.action.items() if theta.source_size <= D and theta.target_size <= D}
    return TruncatedSSet(D, X.carriers[:D], action, kind=X.kind, name=X.name)


def sub_sset(X: TruncatedSSet, simplices: Sequence[Iterable[Label]]) -> TruncatedSSet:
    """The simplicial subset on the given per-degree simplices; raises if not closed under the action."""
    chosen = [frozenset(s) for s in simplices]
    carriers = [tuple(x for x in X.carrier(n) if x in chosen[n - 1]) for n in range(1, X.truncation + 1)]
    action = {}
    for theta, table in X.action.items():
        restricted = {}
        for x in carriers[theta.target_size - 1]:
            y = table[x]
            if y not in chosen[theta.source_size - 1]:
                raise DomainError(f"Subset is not closed under {theta.key}: {x!r} -> {y!r}")
            restricted[x] = y
        action[theta] = restricted
    return TruncatedSSet(X.truncation, carriers, action, name=f"sub({X.name})")


def shift_plus1(X: TruncatedSSet) -> TruncatedSSet:
    """``X[+1](n) = X(n+1)``, acting through ``θ ↦ [+1]θ``; truncation drops by one."""
    if X.truncation < 2:
        raise DegreeBudgetError("shift_plus1 needs truncation at least 2", needed=2, available=X.truncation)
    D = X.truncation - 1
    carriers = [X.carrier(n + 1) for n in range(1, D + 1)]
    action = {}
    for theta in X.maps():
        if theta.source_size <= D and theta.target_size <= D:
            action[theta] = X.action[theta.shifted()]
    return TruncatedSSet(D, carriers, action, kind=f"shift({X.kind})", name=f"{X.name}[+1]")


def counit_map(n: int) -> MonotoneMap:
    """``n_≤ → (n+1)_≤, i ↦ i+1``: forgets the added minimal coordinate."""
    return MonotoneMap(n, n + 1, tuple(range(1, n + 1)))


@dataclass(frozen=True, eq=False)
class SSetMap:
    """Degree-wise maps ``f_n: X(n) → Y(n)``, stored as tables."""
    source: TruncatedSSet
    target: TruncatedSSet
    components: tuple[dict, ...]

    def __post_init__(self):
        if len(self.components) != self.source.truncation or self.source.truncation != self.target.truncation:
            raise DomainError("Map components must cover every degree of matching truncations")

    def __call__(self, n: int, x: Label) -> Label:
        return self.components[n - 1][x]

    @cached_property
    def key(self) -> tuple:
        """Hashable image table in source carrier order."""
        return tuple(tuple(comp[x] for x in self.source.carrier(n)) for n, comp in enumerate(self.components, 1))

    @classmethod
    def tabulate(cls, source: TruncatedSSet, target: TruncatedSSet, fn: Callable[[int, Label], Label]) -> "SSetMap":
        return cls(source, target,
                   tuple({x: fn(n, x) for x in source.carrier(n)} for n in range(1, source.truncation + 1)))

    @classmethod
    def identity(cls, X: TruncatedSSet) -> "SSetMap":
        return cls.tabulate(X, X, lambda n, x: x)


def compose_maps(g: SSetMap, f: SSetMap) -> SSetMap:
    """``g ∘ f``."""
    return SSetMap(f.source, g.target, tuple({x: gc[fc[x]] for x in fc} for fc, gc in zip(f.components, g.components)))


def check_sset_map(f: SSetMap) -> tuple[MonotoneMap, Label] | None:
    """First ``(θ, x)`` where ``f`` fails to commute with the action, else ``None``."""
    X, Y = f.source, f.target
    for n, comp in enumerate(f.components, start=1):
        for x in X.carrier(n):
            if x not in comp:
                raise DomainError(f"Map is not total at degree {n}: missing {x!r}")
            if not Y.contains(n, comp[x]):
                raise DomainError(f"Map leaves Y({n}): {x!r} -> {comp[x]!r}")
    for theta in X.maps():
        src, dst = f.components[theta.source_size - 1], f.components[theta.target_size - 1]
        for x in X.carrier(theta.target_size):
            if src[X.act(theta, x)] != Y.act(theta, dst[x]):
                return theta, x
    return None


def is_sset_map(f: SSetMap) -> bool:
    return check_sset_map(f) is None


def shift_counit(X: TruncatedSSet) -> SSetMap:
    """The counit ``X[+1] → X`` (into ``X`` cut to truncation ``D-1``)."""
    shifted = shift_plus1(X)
    base = truncate(X, shifted.truncation)
    return SSetMap.tabulate(shifted, base, lambda n, x: X.act(counit_map(n), x))


def shift_sset_map(f: SSetMap) -> SSetMap:
    """``f[+1]`` with components ``f_{n+1}``."""
    source, target = shift_plus1(f.source), shift_plus1(f.target)
    return SSetMap(source, target, tuple(f.components[n] for n in range(1, source.truncation + 1)))


def grayson_map(theta: MonotoneMap) -> MonotoneMap:
    """``e(θ): 2m → 2n`` with ``m+i ↦ n+θ(i)`` and ``m-1-i ↦ n-1-θ(i)``."""
    m, n = theta.source_size, theta.target_size
    values = [0] * (2 * m)
    for i in range(m):
        values[m + i] = n + theta(i)
        values[m - 1 - i] = n - 1 - theta(i)
    return MonotoneMap(2 * m, 2 * n, tuple(values))


def grayson_subdivide(X: TruncatedSSet) -> TruncatedSSet:
    """``(X∘e)(n) = X(2n)``; truncation becomes ``⌊D/2⌋``."""
    D = X.truncation // 2
    if D < 1:
        raise DegreeBudgetError("Grayson subdivision needs truncation at least 2", needed=2, available=X.truncation)
    carriers = [X.carrier(2 * n) for n in range(1, D + 1)]
    action = {}
    for m in range(1, D + 1):
        for n in range(1, D + 1):
            for theta in monotone_maps(m, n):
                action[theta] = X.action[grayson_map(theta)]
    return TruncatedSSet(D, carriers, action, kind=f"grayson({X.kind})", name=f"e*{X.name}")


def grayson_sset_map(f: SSetMap) -> SSetMap:
    source, target = grayson_subdivide(f.source), grayson_subdivide(f.target)
    return SSetMap(source, target, tuple(f.components[2 * n - 1] for n in range(1, source.truncation + 1)))


def connected_components(X: TruncatedSSet) -> list[frozenset]:
    """
    Finest partition of ``X(1)`` joining the two vertices of every ``x ∈ X(2)``.

    Blocks are ordered by their first vertex in carrier order.
    """
    graph = nx.Graph()
    graph.add_nodes_from(X.carrier(1))
    if X.truncation >= 2:
        for x in X.carrier(2):
            a, b = X.vertices(2, x)
            graph.add_edge(a, b)
    blocks = [frozenset(c) for c in nx.connected_components(graph)]
    return sorted(blocks, key=lambda block: min(X.position(1, v) for v in block))


def component_of(X: TruncatedSSet, components: Sequence[frozenset]) -> dict:
    """Map each vertex to the index of its block."""
    return {v: k for k, block in enumerate(components) for v in block}
