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

import os

# Environment variables that override configs/config.yml
ENV_MAX_CANDIDATES = "SITUS_MAX_CANDIDATES"
ENV_MAX_HOMSET = "SITUS_MAX_HOMSET"
ENV_RAMSEY_BUDGET = "SITUS_RAMSEY_BUDGET"
ENV_N_JOBS = "SITUS_N_JOBS"
ENV_TRUNCATION = "SITUS_TRUNCATION"
ENV_CONFIG_PATH = "SITUS_CONFIG"

DEFAULT_TRUNCATION = 3
DEFAULT_MAX_CANDIDATES = 10_000_000
DEFAULT_MAX_HOMSET = 100_000
DEFAULT_RAMSEY_BUDGET = 2**20
DEFAULT_N_JOBS = 1

# Carriers above this size skip the 2-colouring cross-check in is_ultrafilter
DEFAULT_MAX_COLOURING_CARRIER = 12

# Shortest tail kept by a SequenceTower
DEFAULT_MIN_TAIL = 2

# Truncation of the fibre products built by the bundle check (degree 2 carries the topology)
BUNDLE_TRUNCATION = 2

# Cap on the (grade, choice function) families enumerated by the semidirect product
DEFAULT_SEMIDIRECT_FAMILIES = 4096

CONFIG_PATH = os.getenv(ENV_CONFIG_PATH, "")

# Exit codes of the command line
EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET_ERROR = 3
