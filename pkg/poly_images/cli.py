import json
import random
import logging
import functools
from typing import Any, Optional, TextIO

import click

from poly_images.classifier import RegimeHint, Verdict, classify
from poly_images.config import Config, setup_logging
from poly_images.errors import EXIT_INCONCLUSIVE, EXIT_OK, InvalidInput, PolyImagesError
from poly_images.fields import FieldDescriptor
from poly_images.jordan import JordanData, jordan_form
from poly_images.matrices import Matrix
from poly_images.oracle import EnumerationMode, cross_check, enumerate_image, is_linear_subspace
from poly_images.paths.base import SolveContext
from poly_images.polynomials import MultilinearCubic
from poly_images.solver import solve_general, solve_jordan
from poly_images.structured import check_root_condition

log = logging.getLogger(__name__)

SEED_ENVVAR = "PIM_SEED"


def _emit(document: dict[str, Any], output: TextIO):
    output.write(json.dumps(document, sort_keys=True, indent=2) + "\n")


def _reports_errors(command):
    """
    Commands return (document, exit code); library errors become an error document with the error's exit code
    """

    @functools.wraps(command)
    def wrapper(*args, output: TextIO, **kwargs):
        try:
            document, exit_code = command(*args, **kwargs)
        except PolyImagesError as e:
            log.debug("%s failed", command.__name__, exc_info=True)
            document, exit_code = {"error": e.to_primitive()}, e.exit_code
        _emit(document, output)
        if exit_code != EXIT_OK:
            click.get_current_context().exit(exit_code)

    return wrapper


def _output_option(command):
    return click.option("--output", type=click.File("w"), default="-", help="Where to write the JSON document (default stdout)")(command)


def _load_json(file: TextIO, location: str) -> Any:
    try:
        return json.load(file)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"not valid JSON: {e}", location=location) from e


def _parse_field(text: Optional[str]) -> Optional[FieldDescriptor]:
    return None if text is None else FieldDescriptor.parse(text)


def _load_poly(poly_file: TextIO, field: Optional[FieldDescriptor]) -> MultilinearCubic:
    return MultilinearCubic.from_primitive(_load_json(poly_file, "--poly"), field=field, location="poly")


@click.group()
@click.option("--config", "configpaths", multiple=True, type=click.Path(dir_okay=False), help="Extra TOML configuration; later files win")
@click.pass_context
def main(ctx, configpaths: tuple[str, ...]):
    setup_logging()
    try:
        ctx.obj = Config.load_from_files(list(configpaths))
    except PolyImagesError as e:
        _emit({"error": e.to_primitive()}, click.get_text_stream("stdout"))
        ctx.exit(e.exit_code)


@main.command(name="classify")
@click.option("--poly", "poly_file", type=click.File("r"), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--field", "field_text", default=None, help="Q, cyclotomic:N, gf:P or gf:P^K")
@click.option("--regime-hint", type=click.Choice([hint.value for hint in RegimeHint]), default=RegimeHint.CLOSURE.value)
@_output_option
@_reports_errors
def classify_command(poly_file: TextIO, n: int, field_text: Optional[str], regime_hint: str):
    """
    Classify the image of the cubic in POLY on n x n matrices
    """
    f = _load_poly(poly_file, _parse_field(field_text))
    classification = classify(f, n, regime_hint=RegimeHint(regime_hint))
    exit_code = EXIT_INCONCLUSIVE if classification.verdict == Verdict.UNDETERMINED else EXIT_OK
    return classification.to_primitive(), exit_code


@main.command(name="solve")
@click.option("--poly", "poly_file", type=click.File("r"), required=True)
@click.option("--target", "target_file", type=click.File("r"), required=True)
@click.option("--field", "field_text", default=None)
@click.option("--n", "n", type=int, default=None, help="Expected size of the target")
@click.option("--seed", type=int, default=0, envvar=SEED_ENVVAR, show_default=True)
@click.option("--jordan", "jordan", is_flag=True, help="TARGET is given in Jordan coordinates as {d, nu}")
@_output_option
@click.pass_obj
@_reports_errors
def solve_command(config: Config, poly_file: TextIO, target_file: TextIO, field_text: Optional[str], n: Optional[int], seed: int, jordan: bool):
    """
    Find X, Y, Z with f(X, Y, Z) equal to the target
    """
    f = _load_poly(poly_file, _parse_field(field_text))
    primitive = _load_json(target_file, "--target")
    context = SolveContext(rng=random.Random(seed), budgets=config.budgets, paths=config.paths)
    if jordan:
        data = JordanData.from_primitive(primitive, f.field, location="target")
        size = data.n
    else:
        target = Matrix.from_primitive(primitive, field=f.field, location="target")
        if not target.is_square:
            raise InvalidInput(f"target is {target.rows}x{target.cols}", location="target")
        size = target.rows
    if n is not None and n != size:
        raise InvalidInput(f"target is {size}x{size} but --n is {n}", location="--n")
    witness = solve_jordan(f, data, context.rng, context) if jordan else solve_general(f, target, context.rng, context)
    return witness.to_primitive(), EXIT_OK


@main.command(name="check-cond")
@click.option("--field", "field_text", required=True)
@click.option("--n", "n", type=int, required=True)
@_output_option
@_reports_errors
def check_cond_command(field_text: str, n: int):
    """
    Check the root-of-unity condition for n-th roots of unity in FIELD
    """
    field = FieldDescriptor.parse(field_text)
    return check_root_condition(field, n).to_primitive(), EXIT_OK


@main.command(name="oracle")
@click.option("--poly", "poly_file", type=click.File("r"), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--exhaustive", "exhaustive", is_flag=True, help="Enumerate every triple (the default without --samples)")
@click.option("--samples", type=int, default=None, help="Draw this many random triples instead")
@click.option("--seed", type=int, default=0, envvar=SEED_ENVVAR, show_default=True)
@_output_option
@click.pass_obj
@_reports_errors
def oracle_command(config: Config, poly_file: TextIO, n: int, q: int, exhaustive: bool, samples: Optional[int], seed: int):
    """
    Enumerate the image over GF(q) by brute force and compare it with the classification
    """
    if exhaustive and samples is not None:
        raise InvalidInput("--exhaustive and --samples exclude each other", location="--samples")
    field = FieldDescriptor.from_order(q)
    f = _load_poly(poly_file, field)
    mode = EnumerationMode.SAMPLED if samples is not None else EnumerationMode.EXHAUSTIVE
    image = enumerate_image(f, n, q, mode=mode, samples=samples, seed=seed, budgets=config.budgets)
    document = image.to_primitive()
    if mode == EnumerationMode.EXHAUSTIVE:
        document["is_subspace"] = is_linear_subspace(image)
        document["verdict_comparison"] = cross_check(image, classify(f, n), f)
    return document, EXIT_OK


@main.command(name="jordan")
@click.option("--target", "target_file", type=click.File("r"), required=True)
@click.option("--field", "field_text", default=None)
@_output_option
@_reports_errors
def jordan_command(target_file: TextIO, field_text: Optional[str]):
    """
    Jordan form J and basis P of the target, with target = P J P^-1
    """
    target = Matrix.from_primitive(_load_json(target_file, "--target"), field=_parse_field(field_text), location="target")
    return jordan_form(target).to_primitive(), EXIT_OK


@main.command(name="config")
@_output_option
@click.pass_obj
@_reports_errors
def print_config(config: Config):
    """
    Show the loaded configuration
    """
    return config.to_primitive(), EXIT_OK


if __name__ == "__main__":
    main()
