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

import pytest

from situs_lab import constants
from situs_lab.config import SitusSettings
from situs_lab.config import get_settings
from situs_lab.config import load_settings
from situs_lab.config import use_settings


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("situs:\n  truncation: 4\n  max_homset: 50\n  min_tail: 3\n")
    return path


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (constants.ENV_MAX_CANDIDATES, constants.ENV_MAX_HOMSET, constants.ENV_RAMSEY_BUDGET,
                 constants.ENV_N_JOBS, constants.ENV_TRUNCATION):
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    settings = SitusSettings()
    assert settings.truncation == constants.DEFAULT_TRUNCATION
    assert settings.min_tail == 2
    assert not settings.show_progress


def test_yaml_section(config_file):
    settings = load_settings(config_file)
    assert settings.truncation == 4
    assert settings.max_homset == 50
    assert settings.min_tail == 3


def test_missing_file_falls_back(tmp_path):
    assert load_settings(tmp_path / "absent.yml") == SitusSettings()


def test_environment_overrides_file(config_file, monkeypatch):
    monkeypatch.setenv(constants.ENV_MAX_HOMSET, "7")
    monkeypatch.setenv(constants.ENV_N_JOBS, "2")
    settings = load_settings(config_file)
    assert settings.max_homset == 7
    assert settings.n_jobs == 2
    assert settings.truncation == 4


def test_explicit_overrides_win(config_file, monkeypatch):
    monkeypatch.setenv(constants.ENV_TRUNCATION, "5")
    settings = load_settings(config_file, truncation=2, max_candidates=None)
    assert settings.truncation == 2
    assert settings.max_candidates == constants.DEFAULT_MAX_CANDIDATES


def test_invalid_settings_fall_back(tmp_path, caplog):
    path = tmp_path / "config.yml"
    path.write_text("situs:\n  truncation: 0\n")
    with caplog.at_level(logging.WARNING):
        settings = load_settings(path)
    assert settings == SitusSettings()
    assert "Invalid settings" in caplog.text


def test_use_settings():
    custom = SitusSettings(max_homset=3)
    use_settings(custom)
    assert get_settings() is custom
