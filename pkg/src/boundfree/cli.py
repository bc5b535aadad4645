"""Command-line front end.

Exit codes: 0 success (whatever the verdict), 2 parse or validation error,
3 instance outside the decidable class (singular z image), 4 compiled gadget
would exceed the dimension cap.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import RationalFormatError, parse_rational
from .automata import equality_automaton, to_dot
from .decider import InstanceFormatError, UnsupportedInstance, decide, instance_from_json
from .encoder import MAX_DIMENSION, NonIntegerCoefficient, compile_polynomial, compiled_dimension, evaluate_gadget, lemma7_check
from .numeration import BadBase
from .oracle import search_collisions
from .polynomial import Polynomial, PolynomialFormatError

EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_TOO_LARGE = 4


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read {path}: {exc}", EXIT_INPUT)


def _load_instance(path: str, strict: bool = True):
    data = _read_json(path)
    try:
        return instance_from_json(data, strict=strict)
    except UnsupportedInstance as exc:
        _fail(str(exc), EXIT_UNSUPPORTED)
    except (InstanceFormatError, ValueError) as exc:
        _fail(str(exc), EXIT_INPUT)


def _load_polynomial(path: str) -> Polynomial:
    try:
        return Polynomial.from_json(_read_json(path))
    except (PolynomialFormatError, ValueError) as exc:
        _fail(str(exc), EXIT_INPUT)


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        _fail(f"{what} must be a comma-separated list of integers", EXIT_INPUT)


@click.group()
def main():
    """Decide injectivity of 2x2 upper-triangular morphisms on bounded languages."""


@main.command("decide")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--witness", is_flag=True, help="Show the colliding exponent vectors.")
@click.option("--json", "as_json", is_flag=True, help="Print the verdict as JSON.")
def cmd_decide(input_path, witness, as_json):
    inst = _load_instance(input_path)
    try:
        verdict = decide(inst)
    except UnsupportedInstance as exc:
        _fail(str(exc), EXIT_UNSUPPORTED)
    if as_json:
        click.echo(_dump(verdict.to_json()))
        return
    status = "injective" if verdict.injective else "not injective"
    click.echo(f"{status} on L_{inst.t} (branch {verdict.branch.value})")
    if witness and verdict.witness is not None:
        left, right = verdict.witness
        click.echo(f"witness: {list(left)} vs {list(right)}")


@main.command("oracle")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--bound", default=6, show_default=True, type=click.IntRange(min=0))
def cmd_oracle(input_path, bound):
    inst = _load_instance(input_path, strict=False)
    click.echo(_dump(search_collisions(inst, bound).to_json()))


@main.command("automaton")
@click.option("--base", required=True, help="Base as U/V.")
@click.option("--digits", required=True, help="Comma-separated integer digits.")
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False), help="Write Graphviz output here.")
def cmd_automaton(base, digits, dot_path):
    try:
        r = parse_rational(base)
    except RationalFormatError as exc:
        _fail(str(exc), EXIT_INPUT)
    digit_list = _int_list(digits, "--digits")
    if not digit_list:
        _fail("--digits must not be empty", EXIT_INPUT)
    try:
        aut = equality_automaton(r, digit_list)
    except BadBase as exc:
        _fail(str(exc), EXIT_INPUT)
    if dot_path:
        Path(dot_path).write_text(to_dot(aut, name="equality"))
    click.echo(f"states: {len(aut.states)}")


@main.command("encode")
@click.option("--poly", "poly_path", required=True, type=click.Path(dir_okay=False))
@click.option("--eval", "eval_at", help="Comma-separated nonnegative integers a1,a2,...")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write the gadget JSON here.")
def cmd_encode(poly_path, eval_at, out_path):
    p = _load_polynomial(poly_path)
    if not p.is_integral():
        _fail("polynomial has a non-integer coefficient", EXIT_INPUT)
    dim = compiled_dimension(p)
    if dim > MAX_DIMENSION:
        _fail(f"compiled dimension {dim} exceeds the cap {MAX_DIMENSION}", EXIT_TOO_LARGE)
    try:
        gadget = compile_polynomial(p)
    except NonIntegerCoefficient as exc:
        _fail(str(exc), EXIT_INPUT)
    if out_path:
        Path(out_path).write_text(json.dumps(gadget.to_json()) + "\n")
    if eval_at is not None:
        point = _int_list(eval_at, "--eval")
        if len(point) != p.arity or any(x < 0 for x in point):
            _fail(f"--eval needs {p.arity} nonnegative integers", EXIT_INPUT)
        click.echo(f"gadget: {evaluate_gadget(gadget, point)}, polynomial: {p(*point)}")
    elif not out_path:
        click.echo(json.dumps(gadget.to_json()))


@main.command("lemma7")
@click.option("--poly", "poly_path", required=True, type=click.Path(dir_okay=False))
@click.option("--a", "a", required=True, type=click.IntRange(min=1))
@click.option("--bound", default=6, show_default=True, type=click.IntRange(min=0))
def cmd_lemma7(poly_path, a, bound):
    p = _load_polynomial(poly_path)
    if not p.is_integral():
        _fail("polynomial has a non-integer coefficient", EXIT_INPUT)
    hit = lemma7_check(p, a, bound)
    collision = None if hit is None else {"left": list(hit[0]), "right": list(hit[1])}
    click.echo(_dump({"a": a, "bound": bound, "found": hit is not None, "collision": collision}))


if __name__ == "__main__":
    main()
