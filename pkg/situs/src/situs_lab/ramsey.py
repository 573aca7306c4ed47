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
"""Colourings of non-degenerate simplices, homogeneous subssets and exhaustive Ramsey checks."""

import logging
from collections.abc import Callable
from collections.abc import Hashable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field

from joblib import Parallel
from joblib import delayed
from tqdm import tqdm

from situs_lab.config import get_settings
from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import DomainError
from situs_lab.errors import OracleMismatchError
from situs_lab.errors import SearchBudgetError
from situs_lab.simplicial import TruncatedSSet
from situs_lab.simplicial import monotone_maps
from situs_lab.simplicial import nerve_of_order
from situs_lab.simplicial import sub_sset

logger = logging.getLogger(__name__)

Label = Hashable

_BLOCKS_PER_JOB = 4


def non_degenerate_simplices(X: TruncatedSSet, n: int) -> tuple:
    return X.non_degenerate(n)


@dataclass(frozen=True)
class Colouring:
    """A colour for every non-degenerate degree-``n`` simplex of ``sset``."""
    sset: TruncatedSSet
    n: int
    colours: dict
    palette: tuple = ()

    def __post_init__(self):
        expected = frozenset(non_degenerate_simplices(self.sset, self.n))
        if frozenset(self.colours) != expected:
            raise DomainError(f"A colouring must cover exactly the non-degenerate simplices of degree {self.n}")
        palette = tuple(self.palette) or tuple(dict.fromkeys(self.colours.values()))
        if not set(self.colours.values()) <= set(palette):
            raise DomainError(f"Colours {set(self.colours.values()) - set(palette)} are outside the palette")
        object.__setattr__(self, "palette", palette)

    def __call__(self, x: Label) -> Label:
        return self.colours[x]

    @classmethod
    def from_function(cls,
                      X: TruncatedSSet,
                      n: int,
                      fn: Callable[[Label], Label],
                      palette: Sequence[Label] = ()) -> "Colouring":
        return cls(X, n, {x: fn(x) for x in non_degenerate_simplices(X, n)}, tuple(palette))


def non_degenerate_faces(X: TruncatedSSet, x: Label, m: int, n: int) -> frozenset:
    """The non-degenerate degree-``n`` faces of ``x ∈ X(m)``."""
    faces = (X.act(t, x) for t in monotone_maps(n, m))
    return frozenset(y for y in faces if X.is_non_degenerate(n, y))


@dataclass
class HomogeneousSubsset:
    """
    ``c(X)``: the simplices whose non-degenerate degree-``n`` faces share one colour.

    ``colour_of`` maps ``(m, x)`` to that colour, or ``None`` when ``x`` has
    no non-degenerate face of degree ``n``.
    """
    sset: TruncatedSSet
    colour_of: dict = field(default_factory=dict)

    def by_colour(self, m: int) -> dict:
        classes: dict = {}
        for x in self.sset.carrier(m):
            classes.setdefault(self.colour_of[(m, x)], []).append(x)
        return classes

    def non_degenerate(self, m: int) -> tuple:
        return self.sset.non_degenerate(m)


def homogeneous_subsset(X: TruncatedSSet, c: Colouring) -> HomogeneousSubsset:
    if c.sset is not X and not c.sset.same_as(X):
        raise DomainError("The colouring belongs to another simplicial set")
    n = c.n
    chosen = []
    colour_of = {}
    for m in range(1, X.truncation + 1):
        keep = []
        for x in X.carrier(m):
            if m < n:
                # no face of degree n
                colour_of[(m, x)] = None
                keep.append(x)
                continue
            seen = {c(y) for y in non_degenerate_faces(X, x, m, n)}
            if len(seen) <= 1:
                colour_of[(m, x)] = next(iter(seen), None)
                keep.append(x)
        chosen.append(keep)
    sub = sub_sset(X, chosen)
    sub.name = f"c({X.name})"
    logger.debug(f"Homogeneous subsset of {X.name!r}: sizes {[len(k) for k in chosen]}")
    return HomogeneousSubsset(sub, colour_of)


@dataclass
class RamseyResult:
    """Verdict of an exhaustive colouring sweep; ``witness`` is the first colouring without a homogeneous simplex."""
    holds: bool
    checked: int
    total: int
    witness: Colouring | None = None

    def __bool__(self) -> bool:
        return self.holds


def _decode(index: int, colours: int, count: int) -> list[int]:
    digits = [0] * count
    for position in range(count - 1, -1, -1):
        index, digits[position] = divmod(index, colours)
    return digits


def _scan_block(start: int, stop: int, colours: int, count: int, faces: Sequence[tuple[int, ...]]) -> int | None:
    """First colouring index in ``[start, stop)`` with no monochromatic target, else ``None``."""
    for index in range(start, stop):
        digits = _decode(index, colours, count)
        if not any(len({digits[i] for i in face}) == 1 for face in faces):
            return index
    return None


def ramsey_check(size: int,
                 colours: int,
                 arity: int,
                 target: int,
                 n_jobs: int | None = None,
                 budget: int | None = None) -> RamseyResult:
    """
    Exhaust every ``colours``-colouring of the non-degenerate degree-``arity``
    simplices of the nerve of ``{0..size-1}`` and look for a non-degenerate
    homogeneous simplex of degree ``target``.

    Colourings are indexed lexicographically; the reported counterexample is
    the one of least index.
    """
    if colours < 1 or size < 1 or arity < 1:
        raise DomainError(f"Need positive size, colours and arity, got {size}, {colours}, {arity}")
    if target < arity:
        raise DegreeBudgetError(f"Target degree {target} is below the coloured degree {arity}",
                                needed=arity,
                                available=target)
    settings = get_settings()
    budget = budget or settings.ramsey_budget
    n_jobs = n_jobs or settings.n_jobs

    X = nerve_of_order(tuple(range(size)), target, name=f"N({size})")
    coloured = non_degenerate_simplices(X, arity)
    position = {x: i for i, x in enumerate(coloured)}
    faces = [tuple(sorted(position[y] for y in non_degenerate_faces(X, x, target, arity)))
             for x in non_degenerate_simplices(X, target)]
    total = colours**len(coloured)
    if total > budget:
        raise SearchBudgetError(f"{total} colourings exceed the Ramsey budget {budget}", bound=total, limit=budget)

    if not faces:
        logger.info(f"No non-degenerate simplex of degree {target} on {size} vertices")
        first = 0
    else:
        block = max(1, -(-total // (max(n_jobs, 1) * _BLOCKS_PER_JOB)))
        starts = range(0, total, block)
        found = Parallel(n_jobs=n_jobs)(
            delayed(_scan_block)(start, min(start + block, total), colours, len(coloured), faces)
            for start in tqdm(starts, desc="colourings", disable=not settings.show_progress))
        misses = [index for index in found if index is not None]
        first = min(misses) if misses else None

    if first is None:
        logger.info(f"Every {colours}-colouring of degree {arity} on {size} vertices has a homogeneous "
                    f"degree-{target} simplex ({total} checked)")
        return RamseyResult(True, total, total)

    digits = _decode(first, colours, len(coloured))
    witness = Colouring(X, arity, {x: digits[i] for i, x in enumerate(coloured)}, tuple(range(colours)))
    homogeneous = homogeneous_subsset(X, witness)
    if any(homogeneous.sset.contains(target, x) for x in non_degenerate_simplices(X, target)):
        raise OracleMismatchError(f"Colouring {first} was reported free of homogeneous simplices but is not")
    logger.info(f"Colouring {first} of {total} has no homogeneous degree-{target} simplex on {size} vertices")
    return RamseyResult(False, first + 1, total, witness)
