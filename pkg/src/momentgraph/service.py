"""FastAPI service wrapping the core package.

Every operation is a stateless POST endpoint under /v1 with pydantic
request/response models; the CLI dispatches to the same handler
functions in-process, so both surfaces compute identically.
"""

from __future__ import annotations

from random import Random
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import ValidationError

from . import __version__
from .chern import EXACT, RRReport, chern_localized, rr_check, rr_report, todd_genus
from .coxeter import build_root_system, bruhat_graph, parabolic_graph, weyl_fibration
from .errors import MathError, MomentGraphError, SchemaError, ValidationFailure
from .fibration import (
    check_compatibility,
    check_regularity,
    push_pull,
    pushforward_add,
    pushforward_mult,
)
from .graphs import (
    Monodromy,
    ValidationReport,
    build_quotient,
    check_monodromy,
    check_relation,
    validate_graph,
    validate_morphism,
)
from .sampling import random_member
from .schemas import (
    BundleModel,
    ElementModel,
    GraphModel,
    MonodromyModel,
    MorphismModel,
    RelationModel,
    StrictModel,
    decode_bundle,
    decode_element,
    decode_graph,
    decode_monodromy,
    decode_morphism,
    decode_relation,
    encode_bundle,
    encode_element,
    encode_graph,
    encode_morphism,
    encode_report,
)
from .structure import MULT, twisted_pullback


class BruhatRequest(StrictModel):
    type: str
    rank: int
    parabolic: list[int] = []
    emit: Literal["graph", "bundle"] = "graph"


class ValidateRequest(StrictModel):
    kind: Literal["graph", "relation", "morphism", "monodromy", "bundle"]
    graph: Optional[GraphModel] = None
    relation: Optional[RelationModel] = None
    morphism: Optional[MorphismModel] = None
    monodromy: Optional[MonodromyModel] = None
    bundle: Optional[BundleModel] = None
    source: Optional[GraphModel] = None
    target: Optional[GraphModel] = None


class QuotientRequest(StrictModel):
    graph: GraphModel
    relation: RelationModel


class QuotientResponse(StrictModel):
    graph: GraphModel
    morphism: MorphismModel


class PullbackRequest(StrictModel):
    element: ElementModel
    morphism: MorphismModel
    source: GraphModel
    target: GraphModel
    monodromy: Optional[MonodromyModel] = None


class PushforwardRequest(StrictModel):
    bundle: BundleModel
    element: ElementModel
    flavor: Literal["mult", "add"] = "mult"


class ChernRequest(StrictModel):
    graph: GraphModel
    element: ElementModel
    degree: int


class ToddRequest(StrictModel):
    bundle: BundleModel
    degree: int
    convention: Literal["exact", "paper", "flipped"] = EXACT


class RRRequest(StrictModel):
    bundle: BundleModel
    element: ElementModel
    degree: int
    convention: Literal["exact", "paper", "flipped"] = EXACT


class DemazureRequest(StrictModel):
    bundle: BundleModel
    element: ElementModel


class ReportRequest(StrictModel):
    bundle: BundleModel
    elements: Optional[list[ElementModel]] = None
    generate: Optional[int] = None
    seed: int = 0
    degree: int


class ClassVerdictModel(StrictModel):
    agree_through_degree: int
    first_mismatch: Optional[dict] = None


class RRResponse(StrictModel):
    convention: str
    degree: int
    per_class: dict[str, ClassVerdictModel]


class ReportRow(StrictModel):
    element: int
    convention: str
    agree_through_degree: int


class ReportResponse(StrictModel):
    degree_max: int
    rows: list[ReportRow]


def _encode_rr(report: RRReport) -> RRResponse:
    return RRResponse(
        convention=report.convention,
        degree=report.degree,
        per_class={
            name: ClassVerdictModel(
                agree_through_degree=v.agree_through_degree, first_mismatch=v.first_mismatch
            )
            for name, v in sorted(report.per_class.items())
        },
    )


# ---------------------------------------------------------------------------
# handlers (shared by HTTP endpoints and the CLI)


def handle_bruhat(payload: dict) -> dict:
    req = BruhatRequest.model_validate(payload)
    rs = build_root_system(req.type, req.rank)
    if req.emit == "bundle":
        return encode_bundle(weyl_fibration(rs, req.parabolic)).model_dump(by_alias=True)
    g = parabolic_graph(rs, req.parabolic) if req.parabolic else bruhat_graph(rs)
    return encode_graph(g).model_dump(by_alias=True)


def _need(req, field):
    value = getattr(req, field)
    if value is None:
        raise SchemaError(f"validate kind={req.kind!r} needs the {field!r} input")
    return value


def handle_validate(payload: dict) -> dict:
    req = ValidateRequest.model_validate(payload)
    try:
        if req.kind == "graph":
            report = validate_graph(decode_graph(_need(req, "graph")))
        elif req.kind == "relation":
            g = decode_graph(_need(req, "graph"))
            report = check_relation(decode_relation(_need(req, "relation")), g)
        elif req.kind == "morphism":
            src = decode_graph(_need(req, "source"))
            dst = decode_graph(_need(req, "target"))
            report = validate_morphism(decode_morphism(_need(req, "morphism"), src.rank), src, dst)
        elif req.kind == "monodromy":
            g = decode_graph(_need(req, "graph"))
            report = check_monodromy(decode_monodromy(_need(req, "monodromy"), g.rank), g)
        else:
            b = decode_bundle(_need(req, "bundle"))
            report = ValidationReport()
            report.extend(b.validate())
            report.extend(check_compatibility(b))
            report.extend(check_regularity(b))
    except ValidationFailure as exc:
        report = exc.report or ValidationReport()
        if not report.violations:
            report.add("PRE", str(exc))
    return encode_report(report).model_dump(by_alias=True)


def handle_quotient(payload: dict) -> dict:
    req = QuotientRequest.model_validate(payload)
    g = decode_graph(req.graph)
    quotient, projection = build_quotient(g, decode_relation(req.relation))
    return QuotientResponse(
        graph=encode_graph(quotient), morphism=encode_morphism(projection)
    ).model_dump(by_alias=True)


def handle_pullback(payload: dict) -> dict:
    req = PullbackRequest.model_validate(payload)
    src = decode_graph(req.source)
    dst = decode_graph(req.target)
    f = decode_morphism(req.morphism, src.rank)
    xi = (
        decode_monodromy(req.monodromy, src.rank)
        if req.monodromy is not None
        else Monodromy.trivial(src)
    )
    z = decode_element(req.element, dst)
    return encode_element(twisted_pullback(z, f, src, dst, xi)).model_dump(by_alias=True, exclude_none=True)


def handle_pushforward(payload: dict) -> dict:
    req = PushforwardRequest.model_validate(payload)
    b = decode_bundle(req.bundle)
    z = decode_element(req.element, b.graph)
    if req.flavor == "mult":
        out = pushforward_mult(b, z)
    else:
        out = pushforward_add(b, z)
    return encode_element(out).model_dump(by_alias=True, exclude_none=True)


def handle_chern(payload: dict) -> dict:
    req = ChernRequest.model_validate(payload)
    g = decode_graph(req.graph)
    z = decode_element(req.element, g)
    return encode_element(chern_localized(z, req.degree)).model_dump(by_alias=True, exclude_none=True)


def handle_todd(payload: dict) -> dict:
    req = ToddRequest.model_validate(payload)
    b = decode_bundle(req.bundle)
    b.require_valid()
    return encode_element(todd_genus(b, req.degree, req.convention)).model_dump(by_alias=True, exclude_none=True)


def handle_rr(payload: dict) -> dict:
    req = RRRequest.model_validate(payload)
    b = decode_bundle(req.bundle)
    z = decode_element(req.element, b.graph)
    report = rr_check(b, z, req.degree, req.convention)
    return _encode_rr(report).model_dump(by_alias=True)


def handle_demazure(payload: dict) -> dict:
    req = DemazureRequest.model_validate(payload)
    b = decode_bundle(req.bundle)
    z = decode_element(req.element, b.graph)
    return encode_element(push_pull(b, z)).model_dump(by_alias=True, exclude_none=True)


def handle_report(payload: dict) -> dict:
    req = ReportRequest.model_validate(payload)
    b = decode_bundle(req.bundle)
    if req.elements is not None:
        elements = [decode_element(e, b.graph) for e in req.elements]
    elif req.generate:
        rng = Random(req.seed)
        elements = [
            random_member(b.graph, b.monodromy, MULT, rng) for _ in range(req.generate)
        ]
    else:
        elements = []
    rows = rr_report(b, elements, req.degree)
    return ReportResponse(
        degree_max=req.degree, rows=[ReportRow(**row) for row in rows]
    ).model_dump(by_alias=True)


HANDLERS = {
    "/v1/bruhat": handle_bruhat,
    "/v1/validate": handle_validate,
    "/v1/quotient": handle_quotient,
    "/v1/pullback": handle_pullback,
    "/v1/pushforward": handle_pushforward,
    "/v1/chern": handle_chern,
    "/v1/todd": handle_todd,
    "/v1/rr": handle_rr,
    "/v1/demazure": handle_demazure,
    "/v1/report": handle_report,
}


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, ValidationFailure):
        detail = {"error_kind": "validation", "message": str(exc)}
        if exc.report is not None:
            detail["report"] = encode_report(exc.report).model_dump()
        return HTTPException(status_code=422, detail=detail)
    if isinstance(exc, SchemaError):
        return HTTPException(status_code=400, detail={"error_kind": "schema", "message": str(exc)})
    if isinstance(exc, MathError):
        return HTTPException(status_code=409, detail={"error_kind": "math", "message": str(exc)})
    return HTTPException(status_code=400, detail={"error_kind": "schema", "message": str(exc)})


def create_app() -> FastAPI:
    app = FastAPI(title="momentgraph", version=__version__)

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    def register(path: str, handler):
        @app.post(path, name=handler.__name__)
        def endpoint(payload: dict):
            try:
                return handler(payload)
            except ValidationError as exc:
                raise HTTPException(
                    status_code=400, detail={"error_kind": "schema", "message": str(exc)}
                ) from exc
            except MomentGraphError as exc:
                raise _http_error(exc) from exc

    for path, handler in HANDLERS.items():
        register(path, handler)
    return app


app = create_app()
