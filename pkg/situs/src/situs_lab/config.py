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

import logging
import os
from pathlib import Path

import yaml
from pydantic import BaseModel
from pydantic import Field
from pydantic import ValidationError

from situs_lab import constants

logger = logging.getLogger(__name__)

_DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent.parent / "configs" / "config.yml"

_ENV_OVERRIDES = {
    "max_candidates": constants.ENV_MAX_CANDIDATES,
    "max_homset": constants.ENV_MAX_HOMSET,
    "ramsey_budget": constants.ENV_RAMSEY_BUDGET,
    "n_jobs": constants.ENV_N_JOBS,
    "truncation": constants.ENV_TRUNCATION,
}


class SitusSettings(BaseModel):
    """Budgets and defaults shared by the library and the command line."""
    truncation: int = Field(constants.DEFAULT_TRUNCATION, ge=1, description="Default truncation D of built ssets")
    max_candidates: int = Field(constants.DEFAULT_MAX_CANDIDATES,
                                ge=1,
                                description="Guard on candidate assignments tried by the morphism search")
    max_homset: int = Field(constants.DEFAULT_MAX_HOMSET, ge=1, description="Guard on enumerated hom-set sizes")
    ramsey_budget: int = Field(constants.DEFAULT_RAMSEY_BUDGET, ge=1, description="Guard on exhausted colourings")
    n_jobs: int = Field(constants.DEFAULT_N_JOBS, description="Worker count for joblib sweeps")
    max_colouring_carrier: int = Field(constants.DEFAULT_MAX_COLOURING_CARRIER,
                                       ge=0,
                                       description="Largest carrier cross-checked by 2-colourings")
    min_tail: int = Field(constants.DEFAULT_MIN_TAIL, ge=1, description="Shortest tail grade of a sequence tower")
    semidirect_families: int = Field(constants.DEFAULT_SEMIDIRECT_FAMILIES,
                                     ge=1,
                                     description="Cap on enumerated semidirect-product grade families")
    show_progress: bool = Field(False, description="Show tqdm progress bars on long sweeps")


def _load_yaml(path: Path) -> dict:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f) or {}
    except (FileNotFoundError, yaml.YAMLError) as e:
        logger.debug(f"Falling back to default settings, could not read {path}: {e}")
        return {}
    return config.get("situs", config)


def load_settings(path: str | Path | None = None, **overrides) -> SitusSettings:
    """
    Load settings from YAML, apply environment overrides, then explicit overrides.

    Args:
        path: YAML file; defaults to ``$SITUS_CONFIG`` or ``configs/config.yml``
        overrides: keyword values that win over file and environment (``None`` values are ignored)

    Returns:
        Validated settings
    """
    config_path = Path(path or constants.CONFIG_PATH or _DEFAULT_CONFIG_PATH)
    values = _load_yaml(config_path)
    for key, env_name in _ENV_OVERRIDES.items():
        env_value = os.getenv(env_name)
        if env_value:
            values[key] = env_value
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SitusSettings.model_validate(values)
    except ValidationError as e:
        logger.warning(f"Invalid settings in {config_path}, using defaults: {e}")
        return SitusSettings()


_settings: SitusSettings | None = None


def get_settings() -> SitusSettings:
    """Process-wide settings, read once."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def use_settings(settings: SitusSettings | None) -> None:
    """Install ``settings`` process-wide; ``None`` re-reads the file on next use."""
    global _settings
    _settings = settings
