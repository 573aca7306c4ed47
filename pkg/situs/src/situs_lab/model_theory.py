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
Finite relational structures, quantifier-free formulas, indiscernibility
grades and the Stone situs with its Hausdorff quotient.

Formulas use a prefix grammar, see ``docs/formula-grammar.md``::

    (and (< x1 x2) (not (= x2 @3)))
"""

import itertools
import logging
import re
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError
from situs_lab.filters import GradedFilter
from situs_lab.filters import antidiscrete_filter
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import representable_sset
from situs_lab.situs import Situs
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import topologise

logger = logging.getLogger(__name__)

Label = Hashable

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VARIABLE = re.compile(r"x([1-9][0-9]*)$")


class FiniteStructure:
    """A finite universe with relation tables; equality is built in."""

    def __init__(self,
                 universe: Sequence[Label],
                 relations: Mapping[str, Iterable[Sequence[Label]]] | None = None,
                 arities: Mapping[str, int] | None = None):
        self.universe = tuple(universe)
        if len(set(self.universe)) != len(self.universe):
            raise DomainError(f"Universe elements are not distinct: {self.universe}")
        members = frozenset(self.universe)
        self.relations: dict[str, frozenset] = {}
        self.arities: dict[str, int] = dict(arities or {})
        for symbol, rows in (relations or {}).items():
            if symbol == "=":
                raise DomainError("Equality is built in and cannot be redefined")
            table = frozenset(tuple(row) for row in rows)
            sizes = {len(row) for row in table}
            if symbol in self.arities:
                sizes.add(self.arities[symbol])
            if len(sizes) > 1:
                raise DomainError(f"Relation {symbol!r} mixes arities {sorted(sizes)}")
            for row in table:
                if not set(row) <= members:
                    raise DomainError(f"Relation {symbol!r} row {row} leaves the universe")
            self.arities.setdefault(symbol, sizes.pop() if sizes else 0)
            self.relations[symbol] = table
        for symbol in self.arities:
            self.relations.setdefault(symbol, frozenset())

    def __repr__(self) -> str:
        return f"FiniteStructure(|M|={len(self.universe)}, signature={self.arities})"

    @cached_property
    def _by_name(self) -> dict:
        return {str(a): a for a in self.universe}

    def element(self, name: str) -> Label:
        """Resolve a parameter name (``@name`` without the ``@``) to a universe element."""
        try:
            return self._by_name[name]
        except KeyError:
            raise DomainError(f"Parameter {name!r} is not an element of the universe") from None

    def holds(self, symbol: str, args: Sequence[Label]) -> bool:
        if symbol not in self.relations:
            raise DomainError(f"Unknown relation symbol {symbol!r}")
        if len(args) != self.arities[symbol]:
            raise DomainError(f"{symbol!r} has arity {self.arities[symbol]}, got {len(args)} arguments")
        return tuple(args) in self.relations[symbol]


def linear_order(n: int) -> FiniteStructure:
    """``{1..n}`` with ``<``."""
    points = tuple(range(1, n + 1))
    return FiniteStructure(points, {"<": [(a, b) for a in points for b in points if a < b]}, {"<": 2})


def pure_set(n: int) -> FiniteStructure:
    """``{1..n}`` in the language of equality."""
    return FiniteStructure(tuple(range(1, n + 1)))


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Param:
    name: str


Term = Var | Param


@dataclass(frozen=True)
class QFFormula:
    """
    One node of a quantifier-free formula.

    ``op`` is a relation symbol, ``"="``, ``"and"``, ``"or"``, ``"not"``,
    ``"true"`` or ``"false"``; atoms carry ``terms``, connectives carry ``parts``.
    """
    op: str
    terms: tuple[Term, ...] = ()
    parts: tuple["QFFormula", ...] = ()
    source: str = ""

    @property
    def is_atom(self) -> bool:
        return self.op not in ("and", "or", "not", "true", "false")

    @cached_property
    def arity(self) -> int:
        own = max((t.index for t in self.terms if isinstance(t, Var)), default=0)
        return max([own] + [p.arity for p in self.parts])

    @cached_property
    def parameters(self) -> frozenset[str]:
        own = {t.name for t in self.terms if isinstance(t, Param)}
        return frozenset(own).union(*(p.parameters for p in self.parts))

    def evaluate(self, M: FiniteStructure, assignment: Sequence[Label]) -> bool:
        if len(assignment) < self.arity:
            raise DomainError(f"{self} needs {self.arity} values, got {len(assignment)}")
        if self.op == "true":
            return True
        if self.op == "false":
            return False
        if self.op == "not":
            return not self.parts[0].evaluate(M, assignment)
        if self.op == "and":
            return all(p.evaluate(M, assignment) for p in self.parts)
        if self.op == "or":
            return any(p.evaluate(M, assignment) for p in self.parts)
        values = [assignment[t.index - 1] if isinstance(t, Var) else M.element(t.name) for t in self.terms]
        if self.op == "=":
            return values[0] == values[1]
        return M.holds(self.op, values)

    def __str__(self) -> str:
        return self.source or self.op


def _parse_term(token: str) -> Term:
    if token.startswith("@") and len(token) > 1:
        return Param(token[1:])
    match = _VARIABLE.match(token)
    if match is None:
        raise DomainError(f"Expected a variable x1, x2, ... or a parameter @name, got {token!r}")
    return Var(int(match.group(1)))


def _parse(tokens: list[str], pos: int) -> tuple[QFFormula, int]:
    if pos >= len(tokens):
        raise DomainError("Formula ends early")
    token = tokens[pos]
    if token in ("true", "false"):
        return QFFormula(token), pos + 1
    if token != "(":
        raise DomainError(f"Unexpected token {token!r} at position {pos}")
    if pos + 1 >= len(tokens) or tokens[pos + 1] in ("(", ")"):
        raise DomainError(f"Expected an operator after '(' at position {pos}")
    op = tokens[pos + 1]
    pos += 2
    if op in ("and", "or", "not"):
        parts = []
        while pos < len(tokens) and tokens[pos] != ")":
            part, pos = _parse(tokens, pos)
            parts.append(part)
        if op == "not" and len(parts) != 1:
            raise DomainError(f"'not' takes one formula, got {len(parts)}")
        node = QFFormula(op, parts=tuple(parts))
    else:
        terms = []
        while pos < len(tokens) and tokens[pos] != ")":
            terms.append(_parse_term(tokens[pos]))
            pos += 1
        if op == "=" and len(terms) != 2:
            raise DomainError(f"'=' takes two terms, got {len(terms)}")
        node = QFFormula(op, terms=tuple(terms))
    if pos >= len(tokens):
        raise DomainError("Unbalanced parentheses")
    return node, pos + 1


def parse_formula(text: str) -> QFFormula:
    tokens = _TOKEN.findall(text)
    formula, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise DomainError(f"Trailing input after formula: {' '.join(tokens[pos:])}")
    return QFFormula(formula.op, formula.terms, formula.parts, source=" ".join(text.split()))


def as_formula(phi: QFFormula | str) -> QFFormula:
    return phi if isinstance(phi, QFFormula) else parse_formula(phi)


def check_signature(M: FiniteStructure, phi: QFFormula) -> None:
    """Raise unless every symbol and parameter of ``phi`` exists in ``M``."""
    if phi.is_atom and phi.op != "=":
        if phi.op not in M.arities:
            raise DomainError(f"Unknown relation symbol {phi.op!r} in {phi}")
        if len(phi.terms) != M.arities[phi.op]:
            raise DomainError(f"{phi.op!r} has arity {M.arities[phi.op]} in {phi}")
    for name in phi.parameters:
        M.element(name)
    for part in phi.parts:
        check_signature(M, part)


def is_homogeneous(M: FiniteStructure, phi: QFFormula, sequence: Sequence[Label]) -> bool:
    """``phi`` takes one truth value on every increasing index tuple with pairwise-distinct entries."""
    k = phi.arity
    seen = set()
    for indices in itertools.combinations(range(len(sequence)), k):
        values = tuple(sequence[i] for i in indices)
        if len(set(values)) < k:
            continue
        seen.add(phi.evaluate(M, values))
        if len(seen) > 1:
            return False
    return True


def indiscernibility_grade(M: FiniteStructure, phi: QFFormula | str, length: int) -> frozenset:
    """The ``phi``-homogeneous sequences in ``M^length``."""
    phi = as_formula(phi)
    check_signature(M, phi)
    return frozenset(x for x in itertools.product(M.universe, repeat=length) if is_homogeneous(M, phi, x))


class StoneSitus(Situs):
    """The indiscernibility situs of ``structure`` over ``parameters`` for an ordered formula list."""

    def __init__(self,
                 sset: TruncatedSSet,
                 filters: Sequence[GradedFilter],
                 structure: FiniteStructure,
                 parameters: Iterable[Label],
                 formulas: Sequence[QFFormula],
                 name: str = ""):
        super().__init__(sset, filters, name=name)
        self.structure = structure
        self.parameters = frozenset(parameters)
        self.formulas = tuple(formulas)


def stone_situs(M: FiniteStructure,
                parameters: Iterable[Label],
                formulas: Sequence[QFFormula | str],
                D: int) -> StoneSitus:
    """
    ``n ↦ Mⁿ`` with grade ``i`` the sequences homogeneous for the first ``i+1``
    formulas. No formulas gives the antidiscrete situs.
    """
    parameters = frozenset(parameters)
    formulas = [as_formula(phi) for phi in formulas]
    for phi in formulas:
        check_signature(M, phi)
        outside = {M.element(name) for name in phi.parameters} - parameters
        if outside:
            raise DomainError(f"{phi} uses parameters {sorted(map(str, outside))} outside A")
        if phi.arity > D:
            raise DegreeBudgetError(f"{phi} has arity {phi.arity} above truncation {D}", needed=phi.arity, available=D)
    X = representable_sset(M.universe, D, name="M")
    filters = []
    for n in range(1, D + 1):
        if not formulas:
            filters.append(antidiscrete_filter(X.carrier(n)))
            continue
        grades = [indiscernibility_grade(M, phi, n) for phi in formulas]
        filters.append(GradedFilter(X.carrier(n), tuple(grades)))
    S = StoneSitus(X, filters, M, parameters, formulas, name="Stone(M/A)")
    logger.info(f"Stone situs over {len(parameters)} parameters and {len(formulas)} formulas: "
                f"core sizes {[len(S.core(n)) for n in range(1, D + 1)]}")
    return S


def qf_types(M: FiniteStructure, parameters: Iterable[Label], formulas: Sequence[QFFormula | str]) -> list[frozenset]:
    """Elements grouped by the formulas of arity at most one they satisfy."""
    missing = set(parameters) - set(M.universe)
    if missing:
        raise DomainError(f"Parameters {sorted(map(str, missing))} are not elements of the structure")
    unary = []
    for phi in map(as_formula, formulas):
        if phi.arity > 1:
            logger.debug(f"{phi} has arity {phi.arity} and does not separate single elements")
            continue
        unary.append(phi)
    classes: dict[tuple, list] = {}
    for a in M.universe:
        classes.setdefault(tuple(phi.evaluate(M, (a, )) for phi in unary), []).append(a)
    return [frozenset(c) for c in classes.values()]


@dataclass
class QuotientResult:
    space: FiniteTopSpace
    classes: list[frozenset]
    types: list[frozenset]
    agrees: bool


def _class_label(points: Iterable[Label]) -> tuple:
    return tuple(sorted(points, key=repr))


def kolmogorov_quotient(T: FiniteTopSpace) -> tuple[FiniteTopSpace, list[frozenset]]:
    """Identify topologically indistinguishable points."""
    graph = nx.Graph()
    graph.add_nodes_from(T.points)
    graph.add_edges_from((x, y) for x in T.points for y in T.U(x) if x in T.U(y))
    classes = sorted((frozenset(c) for c in nx.connected_components(graph)), key=_class_label)
    owner = {x: _class_label(c) for c in classes for x in c}
    opens = {}
    for c in classes:
        x = next(iter(c))
        opens[_class_label(c)] = frozenset(owner[y] for y in T.U(x))
    return FiniteTopSpace([_class_label(c) for c in classes], opens), classes


def stone_hausdorff_quotient(stone: StoneSitus) -> QuotientResult:
    """
    Topologise ``stone``, quotient by indistinguishability and compare the
    classes with the qf-types computed directly from the structure.
    """
    space, classes = kolmogorov_quotient(topologise(stone))
    types = qf_types(stone.structure, stone.parameters, stone.formulas)
    agrees = {frozenset(c) for c in classes} == set(types)
    if not agrees:
        raise OracleMismatchError(f"Quotient classes {classes} differ from qf-types {types}")
    logger.info(f"Hausdorff quotient of {stone.name!r} has {len(classes)} points")
    return QuotientResult(space, classes, types, agrees)
