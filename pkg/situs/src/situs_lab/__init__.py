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

from .filters import GradedFilter
from .simplicial import TruncatedSSet
from .situs import Situs
from .situs import SitusMorphism
from .situs import check_morphism
from .situs import validate_situs

__all__ = ["GradedFilter", "TruncatedSSet", "Situs", "SitusMorphism", "check_morphism", "validate_situs"]
