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
Drive the ``situs`` command line end to end.

Input files are written with the library's own serializers; every case
checks the exit code and, where the report is JSON, its verdict.
"""

from dataclasses import dataclass
from dataclasses import field
from pathlib import Path

import orjson
import pytest
from click.testing import CliRunner

from situs_lab.cli import cli
from situs_lab.cli import run
from situs_lab.config import SitusSettings
from situs_lab.config import use_settings
from situs_lab.filters import antidiscrete_filter
from situs_lab.filters import principal_filter
from situs_lab.schema import FiniteMetricSpaceModel
from situs_lab.schema import FiniteTopSpaceModel
from situs_lab.schema import SitusModel
from situs_lab.serialization import dumps
from situs_lab.serialization import metric_to_model
from situs_lab.serialization import morphism_to_model
from situs_lab.serialization import situs_to_model
from situs_lab.serialization import top_to_model
from situs_lab.simplicial import disjoint_union
from situs_lab.simplicial import representable_sset
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import Situs
from situs_lab.situs import SitusMorphism
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import embed_cart
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import embed_top
from situs_lab.spaces import point_situs
from situs_lab.spaces import two_point_situs


@dataclass
class TestCase:
    __test__ = False
    name: str
    args: list[str]
    exit_code: int
    verdict: bool | None = None
    witnesses: dict = field(default_factory=dict)


def write(directory: Path, name: str, artifact) -> str:
    path = directory / name
    path.write_bytes(dumps(artifact))
    return str(path)


@pytest.fixture(scope="module")
def files(tmp_path_factory) -> dict[str, str]:
    """Every input file the cases refer to, keyed by a short name."""
    d = tmp_path_factory.mktemp("inputs")
    use_settings(SitusSettings())
    paths = {}

    paths["sierpinski_situs"] = write(d, "sierpinski_situs.json", situs_to_model(embed_top(FiniteTopSpace.sierpinski(),
                                                                                           2)))
    X = representable_sset((0, 1), 2)
    broken = Situs(X, [principal_filter(X.carrier(1), {(0, )}), antidiscrete_filter(X.carrier(2))], validate=False)
    paths["broken_situs"] = write(d, "broken_situs.json", situs_to_model(broken))
    paths["union_situs"] = write(
        d, "union_situs.json",
        situs_to_model(antidiscrete_situs(disjoint_union(standard_simplex(1, 2), standard_simplex(0, 2)))))

    # a lifting square with no diagonal: i collapses the discrete two points that f keeps apart
    discrete, point = two_point_situs(2), point_situs(2)
    paths["i_collapse"] = write(d, "i_collapse.json",
                                morphism_to_model(SitusMorphism.tabulate(discrete, point, lambda n, x: (0, ) * n)))
    paths["p_collapse"] = paths["i_collapse"]
    paths["f_identity"] = write(d, "f_identity.json", morphism_to_model(SitusMorphism.identity(discrete)))
    paths["g_identity"] = write(d, "g_identity.json", morphism_to_model(SitusMorphism.identity(point)))
    # and one with a diagonal: the point into the discrete two points
    single = antidiscrete_situs(standard_simplex(0, 2))
    paths["i_point"] = write(d, "i_point.json",
                             morphism_to_model(SitusMorphism.tabulate(single, point, lambda n, x: (0, ) * n)))
    paths["f_point"] = write(d, "f_point.json",
                             morphism_to_model(SitusMorphism.tabulate(single, discrete, lambda n, x: (0, ) * n)))

    half = embed_cart(principal_filter((0, 1), {0}), 2)
    whole = embed_cart(antidiscrete_filter((0, 1)), 2)
    paths["discontinuous"] = write(d, "discontinuous.json",
                                   morphism_to_model(SitusMorphism.from_vertex_map(whole, half, {0: 0, 1: 1})))

    line = FiniteMetricSpace.from_points_on_line({0: 0, 1: 1, 2: 3}, ("1/2", ))
    paths["line"] = write(d, "line.json", metric_to_model(line))
    paths["sierpinski"] = write(d, "sierpinski.json", top_to_model(FiniteTopSpace.sierpinski()))

    B = FiniteTopSpace.sierpinski()
    F = FiniteTopSpace.discrete(("a", "b"))
    total = B.product(F)
    paths["bundle_x"] = write(d, "bundle_x.json", top_to_model(total))
    paths["bundle_b"] = paths["sierpinski"]
    paths["bundle_f"] = write(d, "bundle_f.json", top_to_model(F))
    paths["bundle_p"] = write(d, "bundle_p.json", {"mapping": {x: x[0] for x in total.points}})

    order = {"universe": [1, 2, 3, 4], "relations": {"<": [[a, b] for a in range(1, 5) for b in range(1, 5) if a < b]}}
    paths["order"] = write(d, "order.json", order)

    source = FiniteMetricSpace.from_points_on_line({"p": 0, "q": 1}, (2, "1/2"))
    target = FiniteMetricSpace.from_points_on_line({"a": 0, "b": 1, "c": 3, "d": 4}, ("1/2", ))
    paths["family_x"] = write(d, "family_x.json", metric_to_model(source))
    paths["family_m"] = write(d, "family_m.json", metric_to_model(target))
    paths["family"] = write(d, "family.json",
                            {"maps": [{"p": "a", "q": "c"}, {"p": "b", "q": "d"}, {"p": "b", "q": "d"}]})

    bad = d / "bad.json"
    bad.write_text("{not json")
    paths["bad"] = str(bad)
    use_settings(None)
    return paths


def resolve(args: list[str], files: dict[str, str]) -> list[str]:
    return [files[a[1:]] if a.startswith("@") else a for a in args]


def invoke(*args: str):
    return CliRunner().invoke(cli, ["--log-level", "ERROR", *args])


VERDICT_CASES = [
    TestCase("validate", ["validate", "@sierpinski_situs"], 0, True),
    TestCase("validate broken", ["validate", "@broken_situs"], 1, False),
    TestCase("discontinuous morphism", ["check-morphism", "@discontinuous"], 1, False, {"reason": "not continuous"}),
    TestCase("no lift", ["lift", "--i", "@i_collapse", "--p", "@p_collapse", "--f", "@f_identity", "--g", "@g_identity"],
             1, False, {"lift": "none"}),
    TestCase("lift", ["lift", "--i", "@i_point", "--p", "@p_collapse", "--f", "@f_point", "--g", "@g_identity"], 0,
             True),
    TestCase("lift over budget",
             ["--max-candidates", "1", "lift", "--i", "@i_point", "--p", "@p_collapse", "--f", "@f_point", "--g",
              "@g_identity"], 3),
    TestCase("pi0", ["pi0", "@union_situs"], 0, True, {"count": 2}),
    TestCase("limit", ["limit", "--space", "@line", "--seq", "0,1,1"], 0, True, {"limit": 1}),
    TestCase("no limit", ["limit", "--space", "@line", "--seq", "0,1,2"], 1, False, {"limit": None}),
    TestCase("complete", ["complete", "--space", "@line", "--horizon", "2"], 0, True),
    TestCase("compact", ["compact", "--space", "@sierpinski"], 0, True, {"points": 2}),
    TestCase("bundle", ["bundle", "--x", "@bundle_x", "--b", "@bundle_b", "--f", "@bundle_f", "--p", "@bundle_p"], 0,
             True, {"globally_trivial": True}),
    TestCase("skorokhod", ["skorokhod-dist", "--n", "2", "--grid", "4", "--f", "0,1/2", "--g", "1/4,1"], 0, True,
             {"distance": "1/2"}),
    TestCase("ramsey six", ["ramsey", "--size", "6"], 0, True, {"total": 32768}),
    TestCase("ramsey five", ["ramsey", "--size", "5"], 1, False),
    TestCase("ramsey over budget", ["ramsey", "--size", "7"], 3),
    TestCase("ramsey bad arity", ["ramsey", "--size", "4", "--arity", "3", "--target", "2"], 3),
    TestCase("stone", ["stone", "--structure", "@order", "--param", "2", "--formula", "(< x1 @2)", "--formula",
                       "(= x1 @2)", "--formula", "(< @2 x1)"], 0, True, {"points": 3}),
    TestCase("stone parse error", ["stone", "--structure", "@order", "--formula", "(< x1"], 2),
    TestCase("aa-report", ["aa-report", "--x", "@family_x", "--m", "@family_m", "--family", "@family"], 0, True,
             {"subsequence": 1}),
    TestCase("malformed json", ["validate", "@bad"], 2),
    TestCase("wrong schema", ["validate", "@line"], 2),
]


@pytest.mark.parametrize("case", VERDICT_CASES, ids=[case.name for case in VERDICT_CASES])
def test_verdict_commands(case, files):
    result = invoke(*resolve(case.args, files))
    assert result.exit_code == case.exit_code, result.output
    report = orjson.loads(result.stdout)
    assert set(report) == {"command", "inputs_digest", "verdict", "witnesses", "timing"}
    assert report["verdict"] == case.verdict
    for key, value in case.witnesses.items():
        assert report["witnesses"][key] == value
    if case.exit_code >= 2:
        assert "error" in report["witnesses"]


def test_reports_are_reproducible(files):
    first = orjson.loads(invoke("validate", files["sierpinski_situs"]).stdout)
    second = orjson.loads(invoke("validate", files["sierpinski_situs"]).stdout)
    assert first["inputs_digest"] == second["inputs_digest"]
    other = orjson.loads(invoke("validate", files["broken_situs"]).stdout)
    assert other["inputs_digest"] != first["inputs_digest"]


def test_text_format(files):
    result = invoke("--format", "text", "skorokhod-dist", "--n", "1", "--grid", "4", "--f", "0", "--g", "1")
    assert result.exit_code == 0
    assert result.stdout.strip() == "1"
    result = invoke("--format", "text", "lift", *resolve(
        ["--i", "@i_collapse", "--p", "@p_collapse", "--f", "@f_identity", "--g", "@g_identity"], files))
    assert result.exit_code == 1
    assert result.stdout.strip() == "none"
    result = invoke("--format", "text", "compact", "--space", files["sierpinski"])
    assert "verdict: true" in result.stdout


def test_usage_errors(files):
    assert invoke("skorokhod-dist", "--n", "2", "--grid", "4", "--f", "0", "--g", "1").exit_code == 2
    assert invoke("validate", "missing.json").exit_code == 2
    assert invoke("no-such-command").exit_code == 2
    assert invoke("limit", "--space", files["line"], "--seq", "0,7").exit_code == 2


def test_generators_emit_loadable_json(tmp_path):
    result = invoke("--truncation", "2", "gen-simplex", "--n", "1", "--as-situs")
    assert result.exit_code == 0
    model = SitusModel.model_validate(orjson.loads(result.stdout))
    assert model.sset.carriers["1"] == [[0], [1]]
    path = tmp_path / "simplex.json"
    path.write_text(result.stdout)
    assert invoke("validate", str(path)).exit_code == 0

    result = invoke("gen-metric", "--coords", "0,1/2,2", "--grid", "1,1/4")
    metric = FiniteMetricSpaceModel.model_validate(orjson.loads(result.stdout))
    assert metric.dist[0] == ["0", "1/2", "2"]

    result = invoke("gen-top", "--kind", "sierpinski")
    top = FiniteTopSpaceModel.model_validate(orjson.loads(result.stdout))
    assert top.opens == [[], [1], [0, 1]]

    result = invoke("--truncation", "2", "gen-representable", "--points", "a,b")
    assert orjson.loads(result.stdout)["carriers"]["2"] == [["a", "a"], ["a", "b"], ["b", "a"], ["b", "b"]]


def test_artifact_commands(files, tmp_path):
    result = invoke("realize", "--n", "1", "--grid", "2")
    assert result.exit_code == 0
    space = FiniteMetricSpaceModel.model_validate(orjson.loads(result.stdout))
    assert space.points == [[0], [1], [2]]
    assert space.grid == ["1", "1/2"]

    point = tmp_path / "point.json"
    point.write_bytes(dumps(situs_to_model(antidiscrete_situs(standard_simplex(0, 2)))))
    interval = tmp_path / "interval.json"
    interval.write_bytes(dumps(situs_to_model(antidiscrete_situs(standard_simplex(1, 2)))))
    result = invoke("mapping-space", "--x", str(point), "--y", str(interval))
    assert result.exit_code == 0
    mapping = SitusModel.model_validate(orjson.loads(result.stdout))
    assert len(mapping.sset.carriers["2"]) == 3

    assert invoke("realize", "--n", "1", "--grid", "0").exit_code == 2


def test_run_returns_exit_codes(capsys):
    assert run(["--log-level", "ERROR", "ramsey", "--size", "5"]) == 1
    assert run(["--log-level", "ERROR", "ramsey", "--size", "3", "--colours", "1"]) == 0
    assert run(["--log-level", "ERROR", "ramsey", "--size", "x"]) == 2
    capsys.readouterr()
