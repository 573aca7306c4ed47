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
Connectedness, π₀, convergence of ultrafilters and locally trivial bundles,
each phrased as a lifting or factorization problem.
"""

import itertools
import logging
from collections.abc import Hashable
from collections.abc import Iterator
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field

import networkx as nx

from situs_lab.constants import BUNDLE_TRUNCATION
from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import OracleMismatchError
from situs_lab.errors import PreconditionError
from situs_lab.errors import UnsupportedShapeError
from situs_lab.filters import GradedFilter
from situs_lab.filters import antidiscrete_filter
from situs_lab.lifting import LiftingProblem
from situs_lab.lifting import MorphismClass
from situs_lab.lifting import find_lift
from situs_lab.lifting import has_llp
from situs_lab.lifting import has_rlp
from situs_lab.lifting import search_morphisms
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import component_of
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import check_morphism
from situs_lab.situs import embed_diag
from situs_lab.situs import shift_counit_morphism
from situs_lab.situs import shift_situs
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import embed_top
from situs_lab.spaces import is_continuous
from situs_lab.spaces import point_situs
from situs_lab.spaces import two_point_situs

logger = logging.getLogger(__name__)

Label = Hashable


def _as_situs(X: Situs | TruncatedSSet) -> Situs:
    return X if isinstance(X, Situs) else antidiscrete_situs(X)


def to_point(S: Situs) -> SitusMorphism:
    """The unique map ``S → {0=1}_pa``."""
    return SitusMorphism.tabulate(S, point_situs(S.truncation), lambda n, x: (0, ) * n)


def two_point_collapse(D: int) -> SitusMorphism:
    """``{0,1}_pa → {0=1}_pa``."""
    return to_point(two_point_situs(D))


def situs_components(S: Situs) -> list[frozenset]:
    """
    Blocks of ``X(1)`` joined by the vertex pairs of the degree-2 core.

    For an antidiscrete situs these are the components of the underlying sset.
    """
    graph = nx.Graph()
    graph.add_nodes_from(S.carrier(1))
    if S.truncation >= 2:
        for x in S.core(2):
            graph.add_edge(*S.sset.vertices(2, x))
    blocks = [frozenset(c) for c in nx.connected_components(graph)]
    return sorted(blocks, key=lambda block: min(S.sset.position(1, v) for v in block))


@dataclass
class ConnectednessResult:
    connected: bool
    components: list[frozenset]
    lift: SitusMorphism | None = None

    def __bool__(self) -> bool:
        return self.connected


def _component_map(S: Situs, target: Situs, label) -> SitusMorphism:
    block = component_of(S.sset, situs_components(S))
    return SitusMorphism.tabulate(S, target, lambda n, x: tuple(label(block[v]) for v in S.sset.vertices(n, x)))


def is_connected(X: Situs | TruncatedSSet) -> ConnectednessResult:
    """
    ``X → {0=1}_pa`` lifts against ``{0,1}_pa → {0=1}_pa``.

    Besides the full lifting check, the square sending the first component to
    0 and every other one to 1 is solved; its lift exists iff there is a
    single component.
    """
    S = _as_situs(X)
    if S.truncation < 2:
        raise DegreeBudgetError("Connectedness needs degree-2 simplices", needed=2, available=S.truncation)
    components = situs_components(S)
    i = to_point(S)
    p = two_point_collapse(S.truncation)
    verdict = has_llp(i, [p])

    f = _component_map(S, p.source, lambda k: 0 if k == 0 else 1)
    g = SitusMorphism.tabulate(i.target, p.target, lambda n, x: x)
    lift = find_lift(LiftingProblem(i, p, f, g))
    single = len(components) <= 1
    if bool(verdict) != single or (lift is not None) != single:
        raise OracleMismatchError(f"Connectedness of {S.name!r}: lifting says {bool(verdict)}, "
                                  f"{len(components)} components found")
    logger.info(f"{S.name!r} has {len(components)} components")
    return ConnectednessResult(bool(verdict), components, lift)


@dataclass
class Pi0Result:
    """``X → π₀(X) → {0=1}_pa`` with the membership verdicts of both factors."""
    situs: Situs
    left: SitusMorphism
    right: SitusMorphism
    components: list[frozenset]
    left_in_l: bool
    right_in_lr: bool


def pi0(X: Situs | TruncatedSSet) -> Pi0Result:
    """
    π₀ as the diagonal situs of the antidiscrete filter on the component set.

    The left factor sends every vertex to its component. ``left_in_l`` checks
    it against ``{0,1}_pa → {0=1}_pa``; ``right_in_lr`` checks the right
    factor against the left one, which lies in that left class.
    """
    S = _as_situs(X)
    components = situs_components(S)
    P = embed_diag(antidiscrete_filter(range(len(components))), S.truncation)
    P.name = "pi0"
    left = _component_map(S, P, lambda k: k)
    right = to_point(P)
    test = two_point_collapse(S.truncation)
    left_in_l = bool(has_llp(left, [test]))
    right_in_lr = bool(has_rlp(right, MorphismClass((left, ), side="l")))
    if not (left_in_l and right_in_lr):
        logger.warning(f"pi0 factorization of {S.name!r}: left in l = {left_in_l}, right in lr = {right_in_lr}")
    return Pi0Result(P, left, right, components, left_in_l, right_in_lr)


def _principal_diag(S: Situs, u: Label, D: int) -> Situs:
    points = tuple(v[0] for v in S.carrier(1))
    return embed_diag(GradedFilter(points, (frozenset(points), frozenset({u}))), D)


def _limit_lifts(S: Situs, u: Label) -> Iterator[SitusMorphism] | None:
    """
    Factorizations of ``u_diag → S`` through the counit ``S[+1] → S``.

    Returns ``None`` when ``u_diag`` does not map to ``S``, i.e. ``u`` is not a point.
    """
    counit = shift_counit_morphism(S)
    D = counit.source.truncation
    U = _principal_diag(S, u, D)
    g = SitusMorphism.tabulate(U, counit.target, lambda n, x: x)
    if not check_morphism(g):
        logger.debug(f"{u!r} is not a point of {S.name!r}: its diagonal does not map in")
        return None

    def over_g(n: int, b: Label, y: Label) -> bool:
        return counit(n, y) == g(n, b)

    return search_morphisms(U, counit.source, allowed=over_g)


def _require_representable(S: Situs) -> None:
    if S.sset.kind != "representable":
        raise UnsupportedShapeError(f"Ultrafilter convergence needs a representable situs, got {S.sset.kind!r}")
    if S.truncation < 2:
        raise DegreeBudgetError("Convergence uses S[+1], which needs truncation at least 2",
                                needed=2,
                                available=S.truncation)


def limit_points(S: Situs, u: Label) -> list[Label]:
    """Every ``c`` such that the principal ultrafilter at ``u`` converges to ``c``."""
    _require_representable(S)
    limits = []
    for h in _limit_lifts(S, u) or ():
        c = h(1, (u, ))[0]
        if c not in limits:
            limits.append(c)
    return limits


def is_quasi_compact_concise(X: Situs | FiniteTopSpace, D: int | None = None) -> bool:
    """Every principal ultrafilter on a point converges."""
    S = embed_top(X, D or 3) if isinstance(X, FiniteTopSpace) else X
    _require_representable(S)
    for v in S.carrier(1):
        lifts = _limit_lifts(S, v[0])
        if lifts is not None and next(lifts, None) is None:
            logger.info(f"Ultrafilter at {v[0]!r} does not converge in {S.name!r}")
            return False
    return True


@dataclass
class BundleResult:
    """Local triviality verdict with one fibre bijection ``φ_b: X → F`` per base point."""
    locally_trivial: bool
    family: dict = field(default_factory=dict)
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.locally_trivial


def _fibres(p: Mapping, X: FiniteTopSpace, B: FiniteTopSpace) -> dict:
    return {b: [x for x in X.points if p[x] == b] for b in B.points}


def _fibrewise_bijections(points_by_base: Mapping, F: FiniteTopSpace) -> Iterator[dict]:
    bases = list(points_by_base)
    for perms in itertools.product(itertools.permutations(F.points), repeat=len(bases)):
        psi = {}
        for b, perm in zip(bases, perms):
            psi.update(zip(points_by_base[b], perm))
        yield psi


def _bundle_situses(p: Mapping, X: FiniteTopSpace, B: FiniteTopSpace, F: FiniteTopSpace, base: Label):
    """
    The slices over ``base`` of ``P = B_pa[+1] ×_{B_pa} X_pa`` and
    ``Q = B_pa[+1] × F_pa`` at the bundle truncation.

    The shift keeps the added minimal coordinate, so fixing it to ``base``
    gives sub-situses; their cores see exactly the points over ``U_base``.
    """
    D = BUNDLE_TRUNCATION
    B_shift = shift_situs(embed_top(B, D + 1))
    X_pa, F_pa = embed_top(X, D), embed_top(F, D)

    P_sset = TruncatedSSet.tabulate(D,
                                    lambda n: [(base, x) for x in X_pa.carrier(n)],
                                    lambda theta, e: (e[0], tuple(e[1][v] for v in theta.values)),
                                    kind="fibre-product",
                                    name=f"B[+1]xX|{base!r}")
    P_filters = []
    for n in range(1, D + 1):
        core = frozenset((b0, x) for b0, x in P_sset.carrier(n)
                         if (b0, ) + tuple(p[a] for a in x) in B_shift.core(n) and x in X_pa.core(n))
        P_filters.append(GradedFilter(P_sset.carrier(n), (frozenset(P_sset.carrier(n)), core)))
    P = Situs(P_sset, P_filters, name=f"B[+1]xX|{base!r}", validate=False)

    Q_sset = TruncatedSSet.tabulate(
        D,
        lambda n: [(beta, y) for beta in B_shift.carrier(n) if beta[0] == base for y in F_pa.carrier(n)],
        lambda theta, e: (B_shift.sset.act(theta, e[0]), F_pa.sset.act(theta, e[1])),
        kind="product",
        name=f"B[+1]xF|{base!r}")
    Q_filters = []
    for n in range(1, D + 1):
        core = frozenset((beta, y) for beta, y in Q_sset.carrier(n) if beta in B_shift.core(n) and y in F_pa.core(n))
        Q_filters.append(GradedFilter(Q_sset.carrier(n), (frozenset(Q_sset.carrier(n)), core)))
    Q = Situs(Q_sset, Q_filters, name=f"B[+1]xF|{base!r}", validate=False)
    return P, Q


def _is_situs_isomorphism(forward: SitusMorphism) -> bool:
    """``forward`` is bijective in every degree and both it and its inverse are morphisms."""
    inverse_tables = []
    for n, comp in enumerate(forward.components, start=1):
        inverse = {y: e for e, y in comp.items()}
        if len(inverse) != len(comp) or set(inverse) != set(forward.target.carrier(n)):
            return False
        inverse_tables.append(inverse)
    if not check_morphism(forward):
        return False
    return bool(check_morphism(SitusMorphism(forward.target, forward.source, tuple(inverse_tables))))


def _trivializes(psi: Mapping, p: Mapping, P: Situs, Q: Situs) -> bool:
    """``τ(b0, x) = ((b0, p(x)), ψ(x))`` is an isomorphism of the slices."""

    def tau(n: int, e: tuple) -> tuple:
        b0, x = e
        return (b0, ) + tuple(p[a] for a in x), tuple(psi[a] for a in x)

    return _is_situs_isomorphism(SitusMorphism.tabulate(P, Q, tau))


def classical_local_triviality(p: Mapping, X: FiniteTopSpace, B: FiniteTopSpace, F: FiniteTopSpace) -> bool:
    """Each ``b`` has the open ``U_b`` with ``p⁻¹(U_b) ≅ U_b × F`` over ``U_b`` (open-preimage checks)."""
    fibres = _fibres(p, X, B)
    if any(len(fibre) != len(F.points) for fibre in fibres.values()):
        return False
    for b in B.points:
        U = B.subspace(B.U(b))
        region = [x for x in X.points if p[x] in B.U(b)]
        total = X.subspace(region)
        product = U.product(F)
        found = False
        for psi in _fibrewise_bijections({c: fibres[c] for c in U.points}, F):
            h = {x: (p[x], psi[x]) for x in region}
            h_inv = {y: x for x, y in h.items()}
            if is_continuous(h, total, product) and is_continuous(h_inv, product, total):
                found = True
                break
        if not found:
            return False
    return True


def is_locally_trivial(p: Mapping, X: FiniteTopSpace, B: FiniteTopSpace, F: FiniteTopSpace) -> BundleResult:
    """
    Decide whether ``p: X → B`` is a locally trivial bundle with fibre ``F``.

    Over every base point ``b`` the fibrewise bijections ``φ_b`` are tried
    until one gives a situs isomorphism between the slices over ``b`` of
    ``B_pa[+1] ×_{B_pa} X_pa`` and ``B_pa[+1] × F_pa``. The verdict is
    cross-checked with the classical open-set criterion.
    """
    if not is_continuous(p, X, B):
        raise PreconditionError("The bundle projection is not continuous")
    fibres = _fibres(p, X, B)
    for b, fibre in fibres.items():
        if len(fibre) != len(F.points):
            logger.info(f"Fibre over {b!r} has {len(fibre)} points, F has {len(F.points)}")
            return BundleResult(False, reason=f"fibre over {b!r} has {len(fibre)} points")

    family = {}
    for b in B.points:
        P, Q = _bundle_situses(p, X, B, F, b)
        # points off U_b only reach non-core simplices, any bijection there will do
        rest = next(_fibrewise_bijections({c: fibres[c] for c in B.points if c not in B.U(b)}, F))
        local = {c: fibres[c] for c in B.points if c in B.U(b)}
        found = next((psi | rest for psi in _fibrewise_bijections(local, F) if _trivializes(psi | rest, p, P, Q)),
                     None)
        if found is None:
            result = BundleResult(False, reason=f"no trivialization over U_{b!r}")
            break
        family[b] = found
    else:
        result = BundleResult(True, family)

    classical = classical_local_triviality(p, X, B, F)
    if classical != result.locally_trivial:
        raise OracleMismatchError(f"Bundle check disagrees with the open-set criterion: {result.locally_trivial} "
                                  f"vs {classical}")
    logger.debug(f"Local triviality of {len(X.points)} points over {len(B.points)}: {result.locally_trivial}")
    return result


def global_trivialization(p: Mapping, X: FiniteTopSpace, B: FiniteTopSpace, F: FiniteTopSpace) -> dict | None:
    """A homeomorphism ``X ≅ B × F`` over ``B``, or ``None``."""
    fibres = _fibres(p, X, B)
    if any(len(fibre) != len(F.points) for fibre in fibres.values()):
        return None
    product = B.product(F)
    for psi in _fibrewise_bijections(fibres, F):
        h = {x: (p[x], psi[x]) for x in X.points}
        if all(frozenset(h[y] for y in X.U(x)) == product.U(h[x]) for x in X.points):
            return h
    return None
