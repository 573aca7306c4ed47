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

import pytest
from hypothesis import settings

from situs_lab.config import SitusSettings
from situs_lab.config import use_settings

settings.register_profile("situs", derandomize=True, max_examples=200, deadline=None)
settings.load_profile("situs")


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from the built-in defaults, independent of configs/config.yml."""
    use_settings(SitusSettings())
    yield
    use_settings(None)
