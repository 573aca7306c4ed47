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
The ``situs`` command line.

Every verdict command prints a JSON report and exits 0 (true / found),
1 (false / none), 2 (input error) or 3 (size or budget error). Artifact
commands (``realize``, ``mapping-space`` and the ``gen-*`` generators)
print the artifact itself.
"""

import functools
import itertools
import logging
import sys
import time
from collections.abc import Callable
from collections.abc import Sequence
from typing import Any

import click
import orjson
from dotenv import load_dotenv
from pydantic import BaseModel
from pydantic import ValidationError

from situs_lab import constants
from situs_lab.analysis import FunctionFamily
from situs_lab.analysis import SequenceTower
from situs_lab.analysis import SourceMode
from situs_lab.analysis import TowerFlavor
from situs_lab.analysis import arzela_ascoli_report
from situs_lab.analysis import check_completeness_lift
from situs_lab.analysis import find_limit
from situs_lab.config import get_settings
from situs_lab.config import load_settings
from situs_lab.config import use_settings
from situs_lab.errors import DegreeBudgetError
from situs_lab.errors import OracleMismatchError
from situs_lab.errors import SearchBudgetError
from situs_lab.errors import SitusError
from situs_lab.homotopy import global_trivialization
from situs_lab.homotopy import is_locally_trivial
from situs_lab.homotopy import is_quasi_compact_concise
from situs_lab.homotopy import pi0
from situs_lab.lifting import LiftingProblem
from situs_lab.lifting import find_lift
from situs_lab.model_theory import stone_hausdorff_quotient
from situs_lab.model_theory import stone_situs
from situs_lab.ramsey import ramsey_check
from situs_lab.schema import FiniteMetricSpaceModel
from situs_lab.schema import FiniteStructureModel
from situs_lab.schema import FiniteTopSpaceModel
from situs_lab.schema import FunctionFamilyModel
from situs_lab.schema import MorphismModel
from situs_lab.schema import PointMapModel
from situs_lab.schema import Report
from situs_lab.schema import SitusModel
from situs_lab.serialization import dumps
from situs_lab.serialization import inputs_digest
from situs_lab.serialization import label_key
from situs_lab.serialization import metric_from_model
from situs_lab.serialization import metric_to_model
from situs_lab.serialization import morphism_from_model
from situs_lab.serialization import parse_labels
from situs_lab.serialization import parse_rationals
from situs_lab.serialization import point_map_from_table
from situs_lab.serialization import read_json
from situs_lab.serialization import situs_from_model
from situs_lab.serialization import situs_to_model
from situs_lab.serialization import sset_to_model
from situs_lab.serialization import structure_from_model
from situs_lab.serialization import to_jsonable
from situs_lab.serialization import top_from_model
from situs_lab.serialization import top_to_model
from situs_lab.simplicial import representable_sset
from situs_lab.simplicial import standard_simplex
from situs_lab.situs import antidiscrete_situs
from situs_lab.situs import check_morphism
from situs_lab.situs import validate_situs
from situs_lab.skorokhod import GridPath
from situs_lab.skorokhod import mapping_space
from situs_lab.skorokhod import realize_simplex
from situs_lab.skorokhod import skorokhod_distance
from situs_lab.spaces import FiniteMetricSpace
from situs_lab.spaces import FiniteTopSpace
from situs_lab.spaces import embed_top

logger = logging.getLogger(__name__)

_PATH = click.Path(exists=True, dir_okay=False)


class Outcome:
    """What a verdict command hands back to the report writer."""

    def __init__(self, verdict: bool | None, witnesses: dict | None = None, text: str | None = None):
        self.verdict = verdict
        self.witnesses = witnesses or {}
        self.text = text


def _exit_code(error: Exception) -> int:
    if isinstance(error, (DegreeBudgetError, SearchBudgetError)):
        return constants.EXIT_BUDGET_ERROR
    if isinstance(error, OracleMismatchError):
        return constants.EXIT_FALSE
    return constants.EXIT_INPUT_ERROR


def _error_witness(error: Exception) -> dict:
    witness: dict[str, Any] = {"error": type(error).__name__, "message": str(error)}
    if isinstance(error, ValidationError):
        witness["locations"] = [".".join(str(p) for p in e["loc"]) for e in error.errors()]
        witness["message"] = "; ".join(e["msg"] for e in error.errors())
    for attr in ("bound", "limit", "needed", "available"):
        if getattr(error, attr, None) is not None:
            witness[attr] = getattr(error, attr)
    return witness


def _echo_report(ctx: click.Context, report: Report, text: str | None) -> None:
    if ctx.obj["format"] == "json":
        click.echo(dumps(report).decode())
        return
    if text is not None:
        click.echo(text)
        return
    verdict = "none" if report.verdict is None else str(report.verdict).lower()
    click.echo(f"verdict: {verdict}")
    for key, value in sorted(report.witnesses.items()):
        click.echo(f"{key}: {orjson.dumps(value, option=orjson.OPT_SORT_KEYS).decode()}")


def _command_echo(ctx: click.Context) -> list[str]:
    params = [f"--{k.replace('_', '-')}={v}" for k, v in sorted(ctx.params.items()) if v not in (None, (), False)]
    return [ctx.command_path] + params


def verdict_command(fn: Callable[..., Outcome]) -> Callable:
    """
    Run ``fn``, then write the report and exit with the matching code.

    ``fn`` receives an ``inputs`` list to which it appends the raw bytes it reads.
    """

    @functools.wraps(fn)
    @click.pass_context
    def wrapper(ctx: click.Context, **kwargs):
        inputs: list[bytes] = []
        start = time.perf_counter()
        try:
            outcome = fn(inputs=inputs, **kwargs)
        except (SitusError, ValidationError, orjson.JSONDecodeError, OSError) as e:
            logger.debug(f"{ctx.command_path} failed", exc_info=True)
            outcome = Outcome(None, _error_witness(e))
            code = _exit_code(e)
        else:
            code = constants.EXIT_TRUE if outcome.verdict else constants.EXIT_FALSE
        params = orjson.dumps(to_jsonable(dict(ctx.params)), option=orjson.OPT_SORT_KEYS)
        report = Report(command=_command_echo(ctx),
                        inputs_digest=inputs_digest(params, *inputs),
                        verdict=outcome.verdict,
                        witnesses=to_jsonable(outcome.witnesses),
                        timing={"total": round(time.perf_counter() - start, 6)})
        _echo_report(ctx, report, outcome.text if code in (constants.EXIT_TRUE, constants.EXIT_FALSE) else None)
        ctx.exit(code)

    return wrapper


def artifact_command(fn: Callable[..., BaseModel]) -> Callable:
    """Print the artifact ``fn`` returns as canonical JSON; errors exit like verdict commands."""

    @functools.wraps(fn)
    @click.pass_context
    def wrapper(ctx: click.Context, **kwargs):
        try:
            artifact = fn(**kwargs)
        except (SitusError, ValidationError, orjson.JSONDecodeError, OSError) as e:
            click.echo(dumps(_error_witness(e)).decode(), err=True)
            ctx.exit(_exit_code(e))
        click.echo(dumps(artifact).decode())
        ctx.exit(constants.EXIT_TRUE)

    return wrapper


def _load(path: str, model: type[BaseModel], inputs: list[bytes]) -> BaseModel:
    data, raw = read_json(path)
    inputs.append(raw)
    return model.model_validate(data)


def _load_situs(path: str, inputs: list[bytes], validate: bool = True):
    return situs_from_model(_load(path, SitusModel, inputs), validate=validate)


def _load_morphism(path: str, inputs: list[bytes]):
    return morphism_from_model(_load(path, MorphismModel, inputs))


def _load_top(path: str, inputs: list[bytes]) -> FiniteTopSpace:
    return top_from_model(_load(path, FiniteTopSpaceModel, inputs))


def _load_metric(path: str, inputs: list[bytes]) -> FiniteMetricSpace:
    return metric_from_model(_load(path, FiniteMetricSpaceModel, inputs))


def _load_space(path: str, inputs: list[bytes]) -> FiniteMetricSpace | FiniteTopSpace:
    data, raw = read_json(path)
    inputs.append(raw)
    if isinstance(data, dict) and "dist" in data:
        return metric_from_model(FiniteMetricSpaceModel.model_validate(data))
    return top_from_model(FiniteTopSpaceModel.model_validate(data))


def _points_from_text(text: str, points: Sequence) -> list:
    lookup = {label_key(x): x for x in points}
    result = []
    for part in text.split(","):
        part = part.strip()
        if part not in lookup:
            raise click.BadParameter(f"{part!r} is not a point of the space")
        result.append(lookup[part])
    return result


@click.group()
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--log-level",
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default="WARNING",
              show_default=True)
@click.option("--max-candidates", type=int, default=None, help="Guard on candidate values tried by searches")
@click.option("--truncation", type=int, default=None, help="Default truncation D")
@click.option("--jobs", type=int, default=None, help="Worker count for parallel sweeps")
@click.pass_context
def cli(ctx: click.Context, output_format: str, log_level: str, max_candidates: int | None, truncation: int | None,
        jobs: int | None):
    """Simplicial filters over finite presentations."""
    logging.basicConfig(level=getattr(logging, log_level.upper()), stream=sys.stderr, force=True)
    use_settings(load_settings(max_candidates=max_candidates, truncation=truncation, n_jobs=jobs))
    ctx.ensure_object(dict)
    ctx.obj["format"] = output_format


@cli.command()
@click.argument("situs_file", type=_PATH)
@verdict_command
def validate(situs_file: str, inputs: list[bytes]) -> Outcome:
    """Check every structural map of a situs for continuity."""
    S = _load_situs(situs_file, inputs, validate=False)
    result = validate_situs(S)
    if result:
        return Outcome(True, {"name": S.name})
    return Outcome(False, {"map": result.theta.key, "grade": result.grade_index})


@cli.command("check-morphism")
@click.argument("morphism_file", type=_PATH)
@verdict_command
def check_morphism_command(morphism_file: str, inputs: list[bytes]) -> Outcome:
    """Check that a map of situses is simplicial and continuous."""
    result = check_morphism(_load_morphism(morphism_file, inputs))
    witnesses = {} if result else {
        "reason": result.reason,
        "degree": result.degree,
        "map": result.theta.key if result.theta else None,
        "simplex": result.simplex,
        "grade": result.grade_index,
    }
    return Outcome(result.ok, witnesses)


@cli.command()
@click.option("--i", "i_file", type=_PATH, required=True, help="Left map i: A -> B")
@click.option("--p", "p_file", type=_PATH, required=True, help="Right map p: X -> Y")
@click.option("--f", "f_file", type=_PATH, required=True, help="Top map f: A -> X")
@click.option("--g", "g_file", type=_PATH, required=True, help="Bottom map g: B -> Y")
@verdict_command
def lift(i_file: str, p_file: str, f_file: str, g_file: str, inputs: list[bytes]) -> Outcome:
    """Search a diagonal h: B -> X with h i = f and p h = g."""
    maps = [_load_morphism(path, inputs) for path in (i_file, p_file, f_file, g_file)]
    h = find_lift(LiftingProblem(*maps))
    if h is None:
        return Outcome(False, {"lift": "none"}, text="none")
    table = {str(n): {label_key(x): y for x, y in comp.items()} for n, comp in enumerate(h.components, start=1)}
    return Outcome(True, {"lift": table})


@cli.command("pi0")
@click.argument("situs_file", type=_PATH)
@verdict_command
def pi0_command(situs_file: str, inputs: list[bytes]) -> Outcome:
    """Factor X -> pi0(X) -> point and check both factors."""
    result = pi0(_load_situs(situs_file, inputs))
    return Outcome(
        result.left_in_l and result.right_in_lr, {
            "count": len(result.components),
            "components": result.components,
            "left_in_l": result.left_in_l,
            "right_in_lr": result.right_in_lr,
        })


@cli.command()
@click.option("--space", "space_file", type=_PATH, required=True, help="Finite metric space JSON")
@click.option("--seq", "sequence", required=True, help="Comma-separated points a_0,..,a_N")
@click.option("--flavor", type=click.Choice([f.value for f in TowerFlavor if f != TowerFlavor.CONST]), default="cart")
@click.option("--min-tail", type=int, default=None)
@verdict_command
def limit(space_file: str, sequence: str, flavor: str, min_tail: int | None, inputs: list[bytes]) -> Outcome:
    """Find a limit of a finite sequence through the shift counit."""
    M = _load_metric(space_file, inputs)
    a = _points_from_text(sequence, M.points)
    result = find_limit(a, M, SequenceTower(len(a) - 1, TowerFlavor(flavor), min_tail))
    return Outcome(bool(result), {"limit": result.limit, "candidates": result.candidates})


@cli.command()
@click.option("--space", "space_file", type=_PATH, required=True, help="Finite metric space JSON")
@click.option("--horizon", type=int, default=3, show_default=True, help="Sequences a_0..a_N are enumerated")
@click.option("--min-tail", type=int, default=None)
@verdict_command
def complete(space_file: str, horizon: int, min_tail: int | None, inputs: list[bytes]) -> Outcome:
    """Completeness as a lifting property, over every sequence up to the horizon."""
    M = _load_metric(space_file, inputs)
    count = len(M.points)**(horizon + 1)
    guard = get_settings().max_homset
    if count > guard:
        raise SearchBudgetError(f"{count} sequences exceed the hom-set guard {guard}", bound=count, limit=guard)
    sequences = list(itertools.product(M.points, repeat=horizon + 1))
    result = check_completeness_lift(M, sequences, min_tail)
    return Outcome(result.complete, {"cauchy_checked": result.checked, "failing": result.failing})


@cli.command()
@click.option("--space", "space_file", type=_PATH, required=True, help="Finite topological space JSON")
@verdict_command
def compact(space_file: str, inputs: list[bytes]) -> Outcome:
    """Quasi-compactness: every principal ultrafilter converges."""
    X = _load_top(space_file, inputs)
    return Outcome(is_quasi_compact_concise(X, get_settings().truncation), {"points": len(X.points)})


@cli.command()
@click.option("--x", "x_file", type=_PATH, required=True, help="Total space JSON")
@click.option("--b", "b_file", type=_PATH, required=True, help="Base space JSON")
@click.option("--f", "f_file", type=_PATH, required=True, help="Fibre space JSON")
@click.option("--p", "p_file", type=_PATH, required=True, help="Projection as a point map JSON")
@verdict_command
def bundle(x_file: str, b_file: str, f_file: str, p_file: str, inputs: list[bytes]) -> Outcome:
    """Local triviality of p: X -> B with fibre F, plus a global trivialization search."""
    X, B, F = (_load_top(path, inputs) for path in (x_file, b_file, f_file))
    p = point_map_from_table(_load(p_file, PointMapModel, inputs).mapping, X.points)
    result = is_locally_trivial(p, X, B, F)
    globally = global_trivialization(p, X, B, F) if result else None
    return Outcome(result.locally_trivial, {
        "reason": result.reason,
        "globally_trivial": globally is not None,
        "trivialization": globally,
    })


@cli.command("skorokhod-dist")
@click.option("--n", "jumps", type=int, required=True, help="Number of jumps N")
@click.option("--grid", type=int, required=True, help="Grid size k")
@click.option("--f", "f_coords", required=True, help="Jump coordinates s1,..,sN of f")
@click.option("--g", "g_coords", required=True, help="Jump coordinates s1,..,sN of g")
@verdict_command
def skorokhod_dist(jumps: int, grid: int, f_coords: str, g_coords: str, inputs: list[bytes]) -> Outcome:
    """Skorokhod distance of two grid paths, as an exact rational."""
    f, g = (GridPath.from_coordinates(parse_rationals(text), grid) for text in (f_coords, g_coords))
    if f.N != jumps or g.N != jumps:
        raise click.BadParameter(f"Expected {jumps} jump coordinates per path")
    distance = skorokhod_distance(f, g)
    return Outcome(True, {"distance": distance}, text=to_jsonable(distance))


@cli.command()
@click.option("--n", "jumps", type=int, required=True, help="Simplex dimension N")
@click.option("--grid", type=int, required=True, help="Grid size k")
@artifact_command
def realize(jumps: int, grid: int) -> BaseModel:
    """Grid paths into (N+1) under the Skorokhod distance, as a metric space."""
    return metric_to_model(realize_simplex(jumps, grid, get_settings().n_jobs))


@cli.command("mapping-space")
@click.option("--x", "x_file", type=_PATH, required=True, help="Source situs JSON")
@click.option("--y", "y_file", type=_PATH, required=True, help="Target situs JSON")
@click.option("--variant", type=click.Choice(["skorokhod", "uniform"]), default="skorokhod", show_default=True)
@artifact_command
def mapping_space_command(x_file: str, y_file: str, variant: str) -> BaseModel:
    """The Skorokhod mapping space Map(X, Y) as a situs."""
    inputs: list[bytes] = []
    X, Y = _load_situs(x_file, inputs), _load_situs(y_file, inputs)
    return situs_to_model(mapping_space(X, Y, variant))


@cli.command()
@click.option("--size", type=int, required=True, help="Number of vertices")
@click.option("--colours", type=int, default=2, show_default=True)
@click.option("--arity", type=int, default=2, show_default=True, help="Degree of the coloured simplices")
@click.option("--target", type=int, default=3, show_default=True, help="Degree of the homogeneous simplex")
@verdict_command
def ramsey(size: int, colours: int, arity: int, target: int, inputs: list[bytes]) -> Outcome:
    """Exhaust colourings and look for a homogeneous simplex in each."""
    result = ramsey_check(size, colours, arity, target, get_settings().n_jobs)
    witness = None
    if result.witness is not None:
        witness = [[x, c] for x, c in result.witness.colours.items()]
    return Outcome(result.holds, {"checked": result.checked, "total": result.total, "counterexample": witness})


@cli.command()
@click.option("--structure", "structure_file", type=_PATH, required=True, help="Finite structure JSON")
@click.option("--param", "params", multiple=True, help="Parameter element, repeatable")
@click.option("--formula", "formulas", multiple=True, help="QF formula in prefix syntax, repeatable and ordered")
@verdict_command
def stone(structure_file: str, params: tuple[str, ...], formulas: tuple[str, ...], inputs: list[bytes]) -> Outcome:
    """Stone situs of a finite structure and its Hausdorff quotient."""
    M = structure_from_model(_load(structure_file, FiniteStructureModel, inputs))
    D = max(2, get_settings().truncation)
    S = stone_situs(M, [M.element(name) for name in params], list(formulas), D)
    result = stone_hausdorff_quotient(S)
    return Outcome(result.agrees, {
        "points": len(result.classes),
        "classes": result.classes,
        "qf_types": result.types,
    })


@cli.command("aa-report")
@click.option("--x", "x_file", type=_PATH, required=True, help="Source space JSON (metric or topological)")
@click.option("--m", "m_file", type=_PATH, required=True, help="Target metric space JSON")
@click.option("--family", "family_file", type=_PATH, required=True, help="Function family JSON")
@click.option("--source-mode", type=click.Choice([m.value for m in SourceMode]), default=None)
@click.option("--min-tail", type=int, default=None)
@verdict_command
def aa_report(x_file: str, m_file: str, family_file: str, source_mode: str | None, min_tail: int | None,
              inputs: list[bytes]) -> Outcome:
    """Arzela-Ascoli squares and implications for a finite function family."""
    X = _load_space(x_file, inputs)
    M = _load_metric(m_file, inputs)
    tables = _load(family_file, FunctionFamilyModel, inputs).maps
    family = FunctionFamily(X, M, tuple(point_map_from_table(t, X.points) for t in tables))
    mode = source_mode or (SourceMode.MI if isinstance(X, FiniteMetricSpace) else SourceMode.PA)
    report = arzela_ascoli_report(family, mode, min_tail=min_tail)
    return Outcome(all(report["implications"].values()), report)


@cli.command("gen-representable")
@click.option("--points", required=True, help="Comma-separated points")
@click.option("--as-situs", is_flag=True, help="Emit the antidiscrete situs instead of the bare sset")
@artifact_command
def gen_representable(points: str, as_situs: bool) -> BaseModel:
    """The representable sset n -> S^n."""
    X = representable_sset(parse_labels(points), get_settings().truncation)
    return situs_to_model(antidiscrete_situs(X)) if as_situs else sset_to_model(X)


@cli.command("gen-simplex")
@click.option("--n", "dimension", type=int, required=True, help="Dimension N of Delta_N")
@click.option("--as-situs", is_flag=True, help="Emit the antidiscrete situs instead of the bare sset")
@artifact_command
def gen_simplex(dimension: int, as_situs: bool) -> BaseModel:
    """The standard simplex Delta_N."""
    X = standard_simplex(dimension, get_settings().truncation)
    return situs_to_model(antidiscrete_situs(X)) if as_situs else sset_to_model(X)


@cli.command("gen-metric")
@click.option("--coords", required=True, help="Comma-separated rational coordinates on the line")
@click.option("--grid", required=True, help="Comma-separated strictly decreasing ε-grid")
@artifact_command
def gen_metric(coords: str, grid: str) -> BaseModel:
    """Points on the real line with the absolute-value distance; point i sits at the i-th coordinate."""
    coordinates = dict(enumerate(parse_rationals(coords)))
    return metric_to_model(FiniteMetricSpace.from_points_on_line(coordinates, parse_rationals(grid)))


@cli.command("gen-top")
@click.option("--kind", type=click.Choice(["discrete", "antidiscrete", "sierpinski"]), required=True)
@click.option("--points", default="0,1", show_default=True, help="Comma-separated points")
@click.option("--as-situs", is_flag=True, help="Emit X_pa instead of the space")
@artifact_command
def gen_top(kind: str, points: str, as_situs: bool) -> BaseModel:
    """A named finite topological space."""
    if kind == "sierpinski":
        X = FiniteTopSpace.sierpinski()
    else:
        X = getattr(FiniteTopSpace, kind)(parse_labels(points))
    return situs_to_model(embed_top(X, get_settings().truncation)) if as_situs else top_to_model(X)


def run(argv: Sequence[str] | None = None) -> int:
    """Run the command line on ``argv`` and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        result = cli.main(args=argv, prog_name="situs", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return constants.EXIT_INPUT_ERROR
    except click.Abort:
        return constants.EXIT_INPUT_ERROR
    return result if isinstance(result, int) else constants.EXIT_TRUE


def run_cli():
    load_dotenv()
    sys.exit(run())
