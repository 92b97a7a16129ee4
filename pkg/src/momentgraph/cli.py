"""Command-line front end: a thin client of the service layer.

Every subcommand assembles the same request payload the HTTP API takes,
dispatches it (in-process by default, or to a running service via
--server), and prints canonical JSON on stdout.  Exit codes: 0 success,
1 validation failure, 2 mathematical error, 3 I/O or schema error.
"""

from __future__ import annotations

import json
import sys

import click
import httpx
from pydantic import ValidationError

from . import service
from .errors import MathError, SchemaError, ValidationFailure

EXIT_VALIDATION = 1
EXIT_MATH = 2
EXIT_SCHEMA = 3


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)


def _dispatch(ctx, path: str, payload: dict) -> dict:
    server = ctx.obj.get("server")
    if server:
        return _dispatch_remote(server, path, payload)
    try:
        return service.HANDLERS[path](payload)
    except ValidationError as exc:
        click.echo(f"error: bad request: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except SchemaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except ValidationFailure as exc:
        _echo_report(exc)
        sys.exit(EXIT_VALIDATION)
    except MathError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_MATH)


def _echo_report(exc: ValidationFailure):
    click.echo(f"error: {exc}", err=True)
    if exc.report is not None:
        for v in exc.report.violations:
            click.echo(f"  [{v.axiom}] {v.message}", err=True)


def _dispatch_remote(server: str, path: str, payload: dict) -> dict:
    try:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=300.0)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach {server}: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    if resp.status_code == 200:
        return resp.json()
    detail = {}
    try:
        detail = resp.json().get("detail", {})
    except json.JSONDecodeError:
        pass
    kind = detail.get("error_kind", "schema") if isinstance(detail, dict) else "schema"
    message = detail.get("message", resp.text) if isinstance(detail, dict) else resp.text
    click.echo(f"error: {message}", err=True)
    sys.exit({"validation": EXIT_VALIDATION, "math": EXIT_MATH}.get(kind, EXIT_SCHEMA))


def _emit(result: dict, output: str | None):
    text = canonical_json(result)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    click.echo(text, nl=False)


output_option = click.option("-o", "--output", default=None, help="Also write the JSON to a file.")


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default is in-process.")
@click.version_option()
@click.pass_context
def main(ctx, server):
    """Exact moment-graph calculus: generate, validate, compute, verify."""
    ctx.obj = {"server": server}


@main.command()
@click.option("--type", "type_", required=True, help="Root-system type letter (A, B, C, D, G).")
@click.option("--rank", required=True, type=int)
@click.option("--parabolic", multiple=True, type=int, help="1-based simple-root indices.")
@click.option("--emit", type=click.Choice(["graph", "bundle"]), default="graph")
@output_option
@click.pass_context
def bruhat(ctx, type_, rank, parabolic, emit, output):
    """Emit a Bruhat or parabolic Bruhat graph, or the coset fiber bundle."""
    payload = {"type": type_, "rank": rank, "parabolic": list(parabolic), "emit": emit}
    _emit(_dispatch(ctx, "/v1/bruhat", payload), output)


@main.command()
@click.option("--kind", type=click.Choice(["graph", "relation", "morphism", "monodromy", "bundle"]), required=True)
@click.option("-i", "--input", "input_", required=True, help="Object to validate.")
@click.option("--graph", default=None, help="Companion graph (relation/monodromy kinds).")
@click.option("--source", default=None, help="Source graph (morphism kind).")
@click.option("--target", default=None, help="Target graph (morphism kind).")
@output_option
@click.pass_context
def validate(ctx, kind, input_, graph, source, target, output):
    """Run the axiom checkers; exit 1 when any axiom fails."""
    payload = {"kind": kind, kind: _read_json(input_)}
    if graph:
        payload["graph"] = _read_json(graph)
    if source:
        payload["source"] = _read_json(source)
    if target:
        payload["target"] = _read_json(target)
    result = _dispatch(ctx, "/v1/validate", payload)
    _emit(result, output)
    if not result.get("ok", False):
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.option("--graph", required=True)
@click.option("--relation", required=True)
@output_option
@click.pass_context
def quotient(ctx, graph, relation, output):
    """Quotient a graph by a compatible equivalence relation."""
    payload = {"graph": _read_json(graph), "relation": _read_json(relation)}
    _emit(_dispatch(ctx, "/v1/quotient", payload), output)


@main.command()
@click.option("--element", required=True, help="Element on the target graph.")
@click.option("--morphism", required=True)
@click.option("--source", required=True)
@click.option("--target", required=True)
@click.option("--monodromy", default=None, help="Twist; defaults to the trivial one.")
@output_option
@click.pass_context
def pullback(ctx, element, morphism, source, target, monodromy, output):
    """Twisted pullback of a structure element along a morphism."""
    payload = {
        "element": _read_json(element),
        "morphism": _read_json(morphism),
        "source": _read_json(source),
        "target": _read_json(target),
    }
    if monodromy:
        payload["monodromy"] = _read_json(monodromy)
    _emit(_dispatch(ctx, "/v1/pullback", payload), output)


@main.command()
@click.option("--bundle", required=True)
@click.option("--element", required=True)
@click.option("--flavor", type=click.Choice(["mult", "add"]), default="mult")
@output_option
@click.pass_context
def pushforward(ctx, bundle, element, flavor, output):
    """Push a structure element forward onto the quotient graph."""
    payload = {
        "bundle": _read_json(bundle),
        "element": _read_json(element),
        "flavor": flavor,
    }
    _emit(_dispatch(ctx, "/v1/pushforward", payload), output)


@main.command()
@click.option("--graph", required=True)
@click.option("--element", required=True)
@click.option("--degree", required=True, type=int)
@output_option
@click.pass_context
def chern(ctx, graph, element, degree, output):
    """Localized truncated Chern character of a mult-flavor element."""
    payload = {
        "graph": _read_json(graph),
        "element": _read_json(element),
        "degree": degree,
    }
    _emit(_dispatch(ctx, "/v1/chern", payload), output)


@main.command()
@click.option("--bundle", required=True)
@click.option("--degree", required=True, type=int)
@click.option("--convention", type=click.Choice(["exact", "paper", "flipped"]), default="exact")
@output_option
@click.pass_context
def todd(ctx, bundle, degree, convention, output):
    """Todd genus of a bundle under the chosen convention."""
    payload = {"bundle": _read_json(bundle), "degree": degree, "convention": convention}
    _emit(_dispatch(ctx, "/v1/todd", payload), output)


@main.command()
@click.option("--bundle", required=True)
@click.option("--element", required=True)
@click.option("--degree", required=True, type=int)
@click.option("--convention", type=click.Choice(["exact", "paper", "flipped"]), default="exact")
@output_option
@click.pass_context
def rr(ctx, bundle, element, degree, convention, output):
    """Riemann-Roch comparison: per-class, per-degree agreement report."""
    payload = {
        "bundle": _read_json(bundle),
        "element": _read_json(element),
        "degree": degree,
        "convention": convention,
    }
    _emit(_dispatch(ctx, "/v1/rr", payload), output)


@main.command()
@click.option("--bundle", required=True)
@click.option("--element", required=True)
@output_option
@click.pass_context
def demazure(ctx, bundle, element, output):
    """Push-pull operator (divided difference) applied to an element."""
    payload = {"bundle": _read_json(bundle), "element": _read_json(element)}
    _emit(_dispatch(ctx, "/v1/demazure", payload), output)


@main.command()
@click.option("--bundle", required=True)
@click.option("--elements", default=None, help="JSON file with a list of elements.")
@click.option("--generate", default=None, type=int, help="Generate N random members instead.")
@click.option("--seed", default=0, type=int)
@click.option("--degree", required=True, type=int)
@output_option
@click.pass_context
def report(ctx, bundle, elements, generate, seed, degree, output):
    """Agreement table over elements for all three Todd conventions."""
    payload = {"bundle": _read_json(bundle), "seed": seed, "degree": degree}
    if elements:
        payload["elements"] = _read_json(elements)
    if generate:
        payload["generate"] = generate
    _emit(_dispatch(ctx, "/v1/report", payload), output)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("momentgraph.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
