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

from typing import Any
from typing import Literal

from pydantic import BaseModel
from pydantic import Field
from pydantic import field_validator

# A label is a string, an integer, or a nested array of labels
JsonLabel = Any
# Rationals are "p/q" strings or integers
JsonRational = str | int


def _check_label(value: Any) -> Any:
    if isinstance(value, bool) or not isinstance(value, (str, int, list)):
        raise ValueError(f"Labels are strings, integers or arrays, got {type(value).__name__}")
    if isinstance(value, list):
        for item in value:
            _check_label(item)
    return value


class GradedFilterModel(BaseModel):
    """A finite carrier with a descending chain of grades."""
    carrier: list[JsonLabel] = Field(..., description="Carrier labels, pairwise distinct")
    grades: list[list[JsonLabel]] = Field(default_factory=list, description="Grades, largest first")

    @field_validator('carrier')
    @classmethod
    def validate_carrier(cls, v):
        return [_check_label(x) for x in v]


class TruncatedSSetModel(BaseModel):
    """A simplicial set on degrees 1..truncation with every action table listed."""
    truncation: int = Field(..., ge=1, description="Top degree D")
    carriers: dict[str, list[JsonLabel]] = Field(..., description="Degree (as a string) to simplex labels")
    action: dict[str, dict[str, JsonLabel]] = Field(
        ..., description="Monotone map key 'm->n:v1,..,vm' to a table from X(n) keys to X(m) labels")
    kind: str = Field("general", description="representable, nerve, constant or general")
    name: str = Field("", description="Display name")

    @field_validator('carriers')
    @classmethod
    def validate_carriers(cls, v):
        for labels in v.values():
            for x in labels:
                _check_label(x)
        return v


class SitusModel(BaseModel):
    """A simplicial set with one graded filter per degree."""
    sset: TruncatedSSetModel
    filters: dict[str, GradedFilterModel] = Field(..., description="Degree (as a string) to its filter")
    semantics: Literal["graded", "generated"] = Field("graded", description="How grade chains are read")
    name: str = Field("", description="Display name")


class MorphismModel(BaseModel):
    """Degree-wise tables of a map between two situses."""
    source: SitusModel
    target: SitusModel
    components: dict[str, dict[str, JsonLabel]] = Field(..., description="Degree to a table from source keys")


class FiniteTopSpaceModel(BaseModel):
    points: list[JsonLabel] = Field(..., description="Points of the space")
    opens: list[list[JsonLabel]] = Field(..., description="Every open set, including the empty set and the space")


class FiniteMetricSpaceModel(BaseModel):
    points: list[JsonLabel] = Field(..., description="Points of the space")
    dist: list[list[JsonRational]] = Field(..., description="Symmetric distance table as exact rationals")
    grid: list[JsonRational] = Field(..., description="Strictly decreasing positive ε-grid")


class FiniteStructureModel(BaseModel):
    universe: list[JsonLabel] = Field(..., description="Universe elements")
    relations: dict[str, list[list[JsonLabel]]] = Field(default_factory=dict, description="Symbol to its rows")
    arities: dict[str, int] = Field(default_factory=dict, description="Arities of relations with no rows")


class PointMapModel(BaseModel):
    """A map of points, keyed by the source point keys."""
    mapping: dict[str, JsonLabel] = Field(..., description="Source point key to target point")


class FunctionFamilyModel(BaseModel):
    maps: list[dict[str, JsonLabel]] = Field(..., min_length=1, description="f_0..f_N as point tables")


class Report(BaseModel):
    """The output of one command."""
    command: list[str] = Field(..., description="The command line echoed back")
    inputs_digest: str = Field(..., description="sha256 of the canonical input bytes")
    verdict: bool | None = Field(None, description="True, false, or absent for generators")
    witnesses: dict[str, Any] = Field(default_factory=dict, description="Witnesses and computed values")
    timing: dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per phase")
