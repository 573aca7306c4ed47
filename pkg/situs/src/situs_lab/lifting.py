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
Morphism search and Quillen lifting properties.

Every search in the package goes through :class:`MorphismSearch`: an
iterative backtracking over the simplices of the source, ordered so that
the vertices of a simplex are assigned before the simplex itself.
Candidates for a higher simplex are the target simplices with the already
chosen vertices, and every Δ-action constraint is checked as soon as both
ends are assigned. Candidates are tried in target carrier order, so the
first solution is deterministic.
"""

import logging
import math
from collections.abc import Callable
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field

from situs_lab.config import get_settings
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError
from situs_lab.errors import SearchBudgetError
from situs_lab.filters import GradedFilter
from situs_lab.filters import antidiscrete_filter
from situs_lab.simplicial import TruncatedSSet
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import check_morphism
from situs_lab.situs import compose
from situs_lab.situs import coproduct_situs
from situs_lab.situs import embed_cart
from situs_lab.situs import empty_situs

logger = logging.getLogger(__name__)

Label = Hashable
Variable = tuple[int, Label]


class MorphismSearch:
    """
    Enumerate sset maps ``X → Y`` in a fixed lexicographic order.

    Args:
        source: source simplicial set
        target: target simplicial set
        fixed: prescribed values ``(n, x) -> y``
        allowed: extra per-simplex predicate ``(n, x, y) -> bool``
        source_cores: per degree, simplices that must land in ``target_cores``
        target_cores: per degree, the target's minimal grades
        max_candidates: guard on the number of candidate values tried
    """

    def __init__(self,
                 source: TruncatedSSet,
                 target: TruncatedSSet,
                 fixed: Mapping[Variable, Label] | None = None,
                 allowed: Callable[[int, Label, Label], bool] | None = None,
                 source_cores: Sequence[frozenset] | None = None,
                 target_cores: Sequence[frozenset] | None = None,
                 max_candidates: int | None = None):
        if source.truncation != target.truncation:
            raise DomainError(f"Truncations differ: {source.truncation} vs {target.truncation}")
        self.source = source
        self.target = target
        self.fixed = dict(fixed or {})
        self.allowed = allowed
        self.source_cores = source_cores
        self.target_cores = target_cores
        self.max_candidates = max_candidates or get_settings().max_candidates
        self.tried = 0

        X = source
        variables = [(n, x) for n in range(1, X.truncation + 1) for x in X.carrier(n)]

        def rank(var: Variable) -> tuple:
            n, x = var
            top = max((X.position(1, v) for v in X.vertices(n, x)), default=-1)
            return top, n, X.position(n, x)

        self.order: list[Variable] = sorted(variables, key=rank)
        self.index = {var: i for i, var in enumerate(self.order)}
        self.vertex_slots = [[self.index[(1, v)] for v in X.vertices(n, x)] for n, x in self.order]
        self.checks = self._constraints()

    def _constraints(self) -> list[list[tuple]]:
        """Per variable, the action constraints whose other end is assigned no later."""
        X = self.source
        checks: list[list[tuple]] = [[] for _ in self.order]
        for theta, table in X.action.items():
            m, n = theta.source_size, theta.target_size
            if m == n and theta.values == tuple(range(n)):
                continue
            for x, face in table.items():
                upper, lower = self.index[(n, x)], self.index[(m, face)]
                # h_m(x[θ]) = h_n(x)[θ]
                if upper >= lower:
                    checks[upper].append(("down", theta, lower))
                else:
                    checks[lower].append(("up", theta, upper))
        return checks

    @property
    def bound(self) -> int:
        """Size of the unpruned assignment space."""
        X, Y = self.source, self.target
        return math.prod(len(Y.carrier(n))**len(X.carrier(n)) for n in range(1, X.truncation + 1))

    def _candidates(self, i: int, values: list) -> Iterable[Label]:
        n, x = self.order[i]
        if (n, x) in self.fixed:
            candidates = [self.fixed[(n, x)]]
        elif n == 1:
            candidates = self.target.carrier(1)
        else:
            key = tuple(values[j] for j in self.vertex_slots[i])
            candidates = self.target.vertex_index[n - 1].get(key, ())
        if self.source_cores is not None and x in self.source_cores[n - 1]:
            core = self.target_cores[n - 1]
            candidates = [y for y in candidates if y in core]
        if self.allowed is not None:
            candidates = [y for y in candidates if self.allowed(n, x, y)]
        return candidates

    def _consistent(self, i: int, y: Label, values: list) -> bool:
        Y = self.target
        if not Y.contains(self.order[i][0], y):
            return False
        for kind, theta, j in self.checks[i]:
            if kind == "down":
                other = y if j == i else values[j]
                if other != Y.act(theta, y):
                    return False
            elif Y.act(theta, values[j]) != y:
                return False
        return True

    def _components(self, values: list) -> tuple[dict, ...]:
        components = tuple({} for _ in range(self.source.truncation))
        for (n, x), y in zip(self.order, values):
            components[n - 1][x] = y
        return components

    def solutions(self) -> Iterator[tuple[dict, ...]]:
        """Yield component tables of every solution."""
        size = len(self.order)
        if size == 0:
            yield self._components([])
            return
        values: list = [None] * size
        iterators: list = [None] * size
        iterators[0] = iter(self._candidates(0, values))
        i = 0
        while i >= 0:
            for y in iterators[i]:
                self.tried += 1
                if self.tried > self.max_candidates:
                    raise SearchBudgetError(f"Morphism search from {self.source.name!r} to {self.target.name!r} "
                                            f"tried more than {self.max_candidates} candidates",
                                            bound=self.bound,
                                            limit=self.max_candidates)
                if self._consistent(i, y, values):
                    values[i] = y
                    break
            else:
                values[i] = None
                i -= 1
                continue
            if i == size - 1:
                yield self._components(values)
                continue
            i += 1
            iterators[i] = iter(self._candidates(i, values))

    def first(self) -> tuple[dict, ...] | None:
        return next(self.solutions(), None)


def search_morphisms(source: Situs,
                     target: Situs,
                     fixed: Mapping[Variable, Label] | None = None,
                     allowed: Callable[[int, Label, Label], bool] | None = None,
                     max_candidates: int | None = None) -> Iterator[SitusMorphism]:
    """Situs morphisms ``source → target``; continuity is enforced through the minimal grades."""
    search = MorphismSearch(source.sset,
                            target.sset,
                            fixed=fixed,
                            allowed=allowed,
                            source_cores=[F.core for F in source.filters],
                            target_cores=[F.core for F in target.filters],
                            max_candidates=max_candidates)
    for components in search.solutions():
        yield SitusMorphism(source, target, components)


def enumerate_morphisms(source: Situs,
                        target: Situs,
                        max_homset: int | None = None,
                        max_candidates: int | None = None,
                        **kwargs) -> list[SitusMorphism]:
    """All situs morphisms in search order; raises once more than ``max_homset`` are found."""
    max_homset = max_homset or get_settings().max_homset
    result = []
    for f in search_morphisms(source, target, max_candidates=max_candidates, **kwargs):
        result.append(f)
        if len(result) > max_homset:
            raise SearchBudgetError(f"Hom-set {source.name!r} -> {target.name!r} exceeds {max_homset} morphisms",
                                    bound=len(result),
                                    limit=max_homset)
    return result


def _same_situs(a: Situs, b: Situs) -> bool:
    return a is b or (a.sset.same_as(b.sset) and all(
        F.carrier_set == G.carrier_set and F.grades == G.grades for F, G in zip(a.filters, b.filters)))


@dataclass
class LiftingProblem:
    """A commutative square ``p ∘ f = g ∘ i`` with ``i: A → B`` and ``p: X → Y``."""
    i: SitusMorphism
    p: SitusMorphism
    f: SitusMorphism
    g: SitusMorphism

    def __post_init__(self):
        i, p, f, g = self.i, self.p, self.f, self.g
        if not (_same_situs(f.source, i.source) and _same_situs(g.source, i.target)
                and _same_situs(f.target, p.source) and _same_situs(g.target, p.target)):
            raise DomainError("Lifting square sides do not share their corners")
        for n in range(1, i.source.truncation + 1):
            for a in i.source.carrier(n):
                if p(n, f(n, a)) != g(n, i(n, a)):
                    raise DomainError(f"Square does not commute at degree {n} on {a!r}")


def find_lift(problem: LiftingProblem, max_candidates: int | None = None) -> SitusMorphism | None:
    """
    A diagonal ``h: B → X`` with ``h ∘ i = f`` and ``p ∘ h = g``, or ``None``.

    Every returned lift is re-checked; a failing re-check is a bug and raises.
    """
    i, p, f, g = problem.i, problem.p, problem.f, problem.g
    B, X = i.target, p.source
    fixed = {}
    for n in range(1, i.source.truncation + 1):
        for a in i.source.carrier(n):
            var, value = (n, i(n, a)), f(n, a)
            if fixed.setdefault(var, value) != value:
                logger.debug(f"No lift: i identifies simplices that f separates at degree {n}")
                return None

    def over_g(n: int, b: Label, y: Label) -> bool:
        return p(n, y) == g(n, b)

    h = next(search_morphisms(B, X, fixed=fixed, allowed=over_g, max_candidates=max_candidates), None)
    if h is None:
        logger.debug(f"No lift of {B.name!r} -> {X.name!r}")
        return None
    if not check_morphism(h) or compose(h, i).key != f.key or compose(p, h).key != g.key:
        raise OracleMismatchError(f"Lift {B.name!r} -> {X.name!r} fails its own triangle identities")
    return h


@dataclass
class MorphismClass:
    """A finite class of morphisms tagged as a left (``l``) or right (``r``) side."""
    members: tuple[SitusMorphism, ...]
    side: str = "r"

    def __post_init__(self):
        self.members = tuple(self.members)
        if self.side not in ("l", "r"):
            raise DomainError(f"Morphism class side must be 'l' or 'r', got {self.side!r}")

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class LiftingVerdict:
    """Outcome of a lifting-property check, with the first square that has no lift."""
    ok: bool
    squares: int = 0
    witness: LiftingProblem | None = None
    lifts: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def lifts_against(i: SitusMorphism, p: SitusMorphism, max_candidates: int | None = None) -> LiftingVerdict:
    """``i ⋔ p``: every commutative square from ``i`` to ``p`` has a diagonal."""
    A, B = i.source, i.target
    X, Y = p.source, p.target
    squares = 0
    lifts = []
    for f in enumerate_morphisms(A, X, max_candidates=max_candidates):
        fixed = {}
        consistent = True
        for n in range(1, A.truncation + 1):
            for a in A.carrier(n):
                var, value = (n, i(n, a)), p(n, f(n, a))
                if fixed.setdefault(var, value) != value:
                    consistent = False
        if not consistent:
            continue
        for g in search_morphisms(B, Y, fixed=fixed, max_candidates=max_candidates):
            squares += 1
            problem = LiftingProblem(i, p, f, g)
            h = find_lift(problem, max_candidates=max_candidates)
            if h is None:
                logger.debug(f"{i.source.name!r} -> {i.target.name!r} does not lift against "
                             f"{p.source.name!r} -> {p.target.name!r} (square {squares})")
                return LiftingVerdict(False, squares, problem, lifts)
            lifts.append(h)
    return LiftingVerdict(True, squares, None, lifts)


def _members(P: MorphismClass | Iterable[SitusMorphism]) -> tuple[SitusMorphism, ...]:
    return P.members if isinstance(P, MorphismClass) else tuple(P)


def has_llp(i: SitusMorphism,
            P: MorphismClass | Iterable[SitusMorphism],
            max_candidates: int | None = None) -> LiftingVerdict:
    """``i ∈ P^l``; true for the empty class."""
    squares = 0
    for p in _members(P):
        verdict = lifts_against(i, p, max_candidates=max_candidates)
        squares += verdict.squares
        if not verdict:
            return LiftingVerdict(False, squares, verdict.witness)
    return LiftingVerdict(True, squares)


def has_rlp(p: SitusMorphism,
            P: MorphismClass | Iterable[SitusMorphism],
            max_candidates: int | None = None) -> LiftingVerdict:
    """``p ∈ P^r``; true for the empty class."""
    squares = 0
    for i in _members(P):
        verdict = lifts_against(i, p, max_candidates=max_candidates)
        squares += verdict.squares
        if not verdict:
            return LiftingVerdict(False, squares, verdict.witness)
    return LiftingVerdict(True, squares)


def ultrafilter_test_map(D: int | None = None) -> SitusMorphism:
    """``q: {o<1}_cart ⊔ {o>1}_cart → {o↔1}_cart``, forgetting the summand."""
    carrier = ("o", "1")
    low = embed_cart(GradedFilter(carrier, (frozenset(carrier), frozenset({"o"}))), D)
    high = embed_cart(GradedFilter(carrier, (frozenset(carrier), frozenset({"1"}))), D)
    source = coproduct_situs(low, high)
    target = embed_cart(antidiscrete_filter(carrier), D)
    return SitusMorphism.tabulate(source, target, lambda n, x: x[1])


def initial_morphism(S: Situs) -> SitusMorphism:
    """The unique map from the empty situs."""
    return SitusMorphism(empty_situs(S.truncation), S, tuple({} for _ in range(S.truncation)))
