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
"""Exception hierarchy shared by every situs_lab module.

All errors derive from ``ValueError`` so callers that only care about bad
input can keep catching the builtin.
"""


class SitusError(ValueError):
    """Base class for all situs_lab errors."""


class DomainError(SitusError):
    """An element, map or arity does not match the carrier it is used with."""


class PreconditionError(SitusError):
    """An operation was called outside of its documented preconditions."""


class UnsupportedShapeError(SitusError):
    """The operation is only defined for a specific shape of simplicial set."""


class DegreeBudgetError(SitusError):
    """The operation needs simplices above (or below) the available truncation."""

    def __init__(self, message: str, needed: int | None = None, available: int | None = None):
        super().__init__(message)
        self.needed = needed
        self.available = available


class SearchBudgetError(SitusError):
    """An exhaustive search would exceed its configured guard."""

    def __init__(self, message: str, bound: int | None = None, limit: int | None = None):
        super().__init__(message)
        self.bound = bound
        self.limit = limit


class OracleMismatchError(SitusError):
    """Two independent computations of the same quantity disagreed."""
