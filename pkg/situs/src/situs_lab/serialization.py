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
Conversion between core values and the JSON models in :mod:`situs_lab.schema`.

Labels are strings, integers or tuples (written as arrays). Where a label
is a JSON object key it is written as its canonical JSON text; keys are
decoded against the known carrier, so no key is ever guessed.
"""

import hashlib
import logging
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

import orjson
from pydantic import BaseModel

from situs_lab.errors import DomainError
from situs_lab.filters import FilterSemantics
from situs_lab.filters import GradedFilter
from situs_lab.model_theory import FiniteStructure
from situs_lab.schema import FiniteMetricSpaceModel
from situs_lab.schema import FiniteStructureModel
from situs_lab.schema import FiniteTopSpaceModel
from situs_lab.schema import GradedFilterModel
from situs_lab.schema import MorphismModel
from situs_lab.schema import SitusModel
from situs_lab.schema import TruncatedSSetModel
from situs_lab.simplicial import MonotoneMap
from situs_lab.simplicial import TruncatedSSet
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import as_fraction

logger = logging.getLogger(__name__)

DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


def encode_label(label: Any) -> Any:
    if isinstance(label, bool):
        raise DomainError(f"Booleans are not labels: {label!r}")
    if isinstance(label, (str, int)):
        return label
    if isinstance(label, tuple):
        return [encode_label(x) for x in label]
    raise DomainError(f"Cannot serialize label {label!r} of type {type(label).__name__}")


def decode_label(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(decode_label(x) for x in value)
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DomainError(f"Labels are strings, integers or arrays, got {value!r}")
    return value


def label_key(label: Any) -> str:
    """JSON object key for ``label``: strings as themselves, anything else as canonical JSON."""
    if isinstance(label, str):
        return label
    return orjson.dumps(encode_label(label)).decode()


def _key_lookup(labels: Iterable[Any]) -> dict[str, Any]:
    lookup = {}
    for x in labels:
        key = label_key(x)
        if key in lookup:
            raise DomainError(f"Labels {lookup[key]!r} and {x!r} share the key {key!r}")
        lookup[key] = x
    return lookup


def _resolve(lookup: Mapping[str, Any], key: str, where: str) -> Any:
    try:
        return lookup[key]
    except KeyError:
        raise DomainError(f"{key!r} is not a label of {where}") from None


def encode_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def decode_rational(value: str | int) -> Fraction:
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise DomainError(f"{value!r} is not an exact rational") from None
    return as_fraction(value)


def parse_rationals(text: str) -> list[Fraction]:
    """``"1/4, 3/4"`` → rationals; the empty string is the empty list."""
    return [decode_rational(part) for part in text.split(",") if part.strip()]


def parse_labels(text: str) -> list:
    """Comma-separated labels; integer-looking entries become ints."""
    labels = []
    for part in text.split(","):
        part = part.strip()
        if part:
            labels.append(int(part) if part.lstrip("-").isdigit() else part)
    return labels


def _degrees(table: Mapping[str, Any], D: int, what: str) -> list:
    expected = {str(n) for n in range(1, D + 1)}
    if set(table) != expected:
        raise DomainError(f"{what} must list degrees {sorted(expected, key=int)}, got {sorted(table)}")
    return [table[str(n)] for n in range(1, D + 1)]


def filter_to_model(F: GradedFilter) -> GradedFilterModel:
    return GradedFilterModel(carrier=[encode_label(x) for x in F.carrier],
                             grades=[[encode_label(x) for x in F.sorted_grade(i)] for i in range(F.depth)])


def filter_from_model(model: GradedFilterModel) -> GradedFilter:
    carrier = [decode_label(x) for x in model.carrier]
    return GradedFilter(tuple(carrier), tuple(frozenset(decode_label(x) for x in g) for g in model.grades))


def sset_to_model(X: TruncatedSSet) -> TruncatedSSetModel:
    return TruncatedSSetModel(
        truncation=X.truncation,
        carriers={str(n): [encode_label(x) for x in X.carrier(n)] for n in range(1, X.truncation + 1)},
        action={theta.key: {label_key(x): encode_label(y) for x, y in table.items()}
                for theta, table in sorted(X.action.items())},
        kind=X.kind,
        name=X.name)


def sset_from_model(model: TruncatedSSetModel) -> TruncatedSSet:
    D = model.truncation
    carriers = [[decode_label(x) for x in labels] for labels in _degrees(model.carriers, D, "carriers")]
    lookups = [_key_lookup(c) for c in carriers]
    members = [frozenset(c) for c in carriers]
    action = {}
    for key, table in model.action.items():
        theta = MonotoneMap.parse(key)
        if theta.source_size > D or theta.target_size > D:
            raise DomainError(f"Action {key} lies above truncation {D}")
        decoded = {}
        for x_key, y in table.items():
            x = _resolve(lookups[theta.target_size - 1], x_key, f"X({theta.target_size})")
            y = decode_label(y)
            if y not in members[theta.source_size - 1]:
                raise DomainError(f"Action {key} sends {x!r} outside X({theta.source_size})")
            decoded[x] = y
        if set(decoded) != members[theta.target_size - 1]:
            raise DomainError(f"Action {key} is not total on X({theta.target_size})")
        action[theta] = decoded
    return TruncatedSSet(D, carriers, action, kind=model.kind, name=model.name)


def situs_to_model(S: Situs) -> SitusModel:
    return SitusModel(sset=sset_to_model(S.sset),
                      filters={str(n): filter_to_model(S.filter(n)) for n in range(1, S.truncation + 1)},
                      semantics=S.semantics.value,
                      name=S.name)


def situs_from_model(model: SitusModel, validate: bool = True) -> Situs:
    X = sset_from_model(model.sset)
    filters = [filter_from_model(m) for m in _degrees(model.filters, X.truncation, "filters")]
    return Situs(X, filters, FilterSemantics(model.semantics), name=model.name or X.name, validate=validate)


def morphism_to_model(f: SitusMorphism) -> MorphismModel:
    return MorphismModel(source=situs_to_model(f.source),
                         target=situs_to_model(f.target),
                         components={str(n): {label_key(x): encode_label(y) for x, y in comp.items()}
                                     for n, comp in enumerate(f.components, start=1)})


def morphism_from_model(model: MorphismModel) -> SitusMorphism:
    source, target = situs_from_model(model.source), situs_from_model(model.target)
    components = []
    for n, table in enumerate(_degrees(model.components, source.truncation, "components"), start=1):
        lookup = _key_lookup(source.carrier(n))
        components.append({_resolve(lookup, k, f"X({n})"): decode_label(y) for k, y in table.items()})
    return SitusMorphism(source, target, tuple(components))


def top_to_model(X: FiniteTopSpace) -> FiniteTopSpaceModel:
    return FiniteTopSpaceModel(points=[encode_label(x) for x in X.points],
                               opens=[[encode_label(x) for x in X.points if x in U] for U in X.opens()])


def top_from_model(model: FiniteTopSpaceModel) -> FiniteTopSpace:
    return FiniteTopSpace.from_opens([decode_label(x) for x in model.points],
                                     [[decode_label(x) for x in U] for U in model.opens])


def metric_to_model(M: FiniteMetricSpace) -> FiniteMetricSpaceModel:
    return FiniteMetricSpaceModel(points=[encode_label(x) for x in M.points],
                                  dist=[[encode_rational(v) for v in row] for row in M.dist],
                                  grid=[encode_rational(v) for v in M.grid])


def metric_from_model(model: FiniteMetricSpaceModel) -> FiniteMetricSpace:
    return FiniteMetricSpace(tuple(decode_label(x) for x in model.points),
                             tuple(tuple(decode_rational(v) for v in row) for row in model.dist),
                             tuple(decode_rational(v) for v in model.grid))


def structure_from_model(model: FiniteStructureModel) -> FiniteStructure:
    return FiniteStructure([decode_label(x) for x in model.universe],
                           {symbol: [tuple(decode_label(x) for x in row) for row in rows]
                            for symbol, rows in model.relations.items()},
                           model.arities)


def point_map_from_table(table: Mapping[str, Any], points: Sequence[Any]) -> dict:
    """Decode a JSON point table against the source points; it must be total."""
    lookup = _key_lookup(points)
    mapping = {_resolve(lookup, k, "the source space"): decode_label(v) for k, v in table.items()}
    missing = set(points) - set(mapping)
    if missing:
        raise DomainError(f"Point map misses {sorted(map(repr, missing))}")
    return mapping


def to_jsonable(value: Any) -> Any:
    """Witness values as JSON: rationals as strings, sets sorted, tuples as arrays."""
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, Fraction):
        return encode_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, float, str)):
        return value
    if isinstance(value, Mapping):
        return {label_key(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((to_jsonable(v) for v in value), key=lambda v: orjson.dumps(v, option=orjson.OPT_SORT_KEYS))
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise DomainError(f"Cannot serialize {type(value).__name__}")


def dumps(value: Any) -> bytes:
    return orjson.dumps(to_jsonable(value), option=DUMP_OPTIONS)


def loads(data: bytes | str) -> Any:
    return orjson.loads(data)


def read_json(path: str | Path) -> tuple[Any, bytes]:
    """Parsed JSON and the raw bytes it came from."""
    with open(path, 'rb') as f:
        raw = f.read()
    return orjson.loads(raw), raw


def inputs_digest(*chunks: bytes) -> str:
    """sha256 over the input chunks, length-prefixed so concatenations stay distinct."""
    sha256 = hashlib.sha256()
    for chunk in chunks:
        sha256.update(len(chunk).to_bytes(8, "big"))
        sha256.update(chunk)
    return sha256.hexdigest()
