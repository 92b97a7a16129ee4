"""Pydantic models and converters for every wire/file format.

One JSON object per mathematical value.  Polynomials are arrays of
``{"coeff": decimal-or-fraction string, "exp": [ints]}`` terms in the
canonical graded-lex order; structure elements carry their flavor (and
bound, for the truncated flavor) next to a vertex-to-polynomial map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .errors import SchemaError
from .fibration import FiberBundle, FiberIso
from .graphs import (
    EquivalenceRelation,
    GraphMorphism,
    MomentGraph,
    Monodromy,
    ValidationReport,
)
from .rings import (
    GradedPolynomial,
    LatticeAutomorphism,
    LaurentPolynomial,
    TruncatedSeries,
    sorted_terms,
)
from .structure import ADD, MULT, StructureElement, TRUNC


class StrictModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class EdgeModel(StrictModel):
    from_: str = Field(alias="from")
    to: str
    label: list[int]


class GraphModel(StrictModel):
    rank: int
    vertices: list[str]
    covers: list[tuple[str, str]]
    edges: list[EdgeModel]


class TermModel(StrictModel):
    coeff: str
    exp: list[int]


class ElementModel(StrictModel):
    flavor: Literal["mult", "add", "trunc"]
    bound: Optional[int] = None
    values: dict[str, list[TermModel]]


class RelationModel(StrictModel):
    classes: list[list[str]]


class MorphismModel(StrictModel):
    vertex_map: dict[str, str]
    lattice_maps: dict[str, list[list[int]]]


class MonodromyModel(StrictModel):
    maps: dict[str, list[list[int]]]


class ClassModel(StrictModel):
    name: str
    members: list[str]


class IsoModel(StrictModel):
    from_class: str
    to_class: str
    vertex_map: dict[str, str]
    lattice_map: list[list[int]]


class BundleModel(StrictModel):
    graph: GraphModel
    classes: list[ClassModel]
    base: str
    isos: list[IsoModel]
    monodromy: MonodromyModel


class ViolationModel(StrictModel):
    axiom: str
    message: str


class ReportModel(StrictModel):
    ok: bool
    violations: list[ViolationModel]


# ---------------------------------------------------------------------------
# converters: core objects <-> models


def encode_graph(g: MomentGraph) -> GraphModel:
    return GraphModel(
        rank=g.rank,
        vertices=list(g.vertices),
        covers=[tuple(c) for c in g.covers],
        edges=[
            EdgeModel.model_validate({"from": t, "to": h, "label": list(lab)})
            for t, h, lab in g.sorted_edges()
        ],
    )


def decode_graph(m: GraphModel) -> MomentGraph:
    try:
        return MomentGraph(
            m.rank,
            m.vertices,
            [tuple(c) for c in m.covers],
            {(e.from_, e.to): tuple(e.label) for e in m.edges},
        )
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"bad graph: {exc}") from exc


def _encode_poly(p) -> list[TermModel]:
    if isinstance(p, TruncatedSeries):
        p = p.poly
    return [TermModel(coeff=str(c), exp=list(e)) for e, c in sorted_terms(p.terms)]


def _decode_terms(terms: list[TermModel], rank: int, rational: bool):
    out = {}
    for t in terms:
        if len(t.exp) != rank:
            raise SchemaError(f"term exponent {t.exp} does not match rank {rank}")
        try:
            c = Fraction(t.coeff)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad coefficient {t.coeff!r}") from exc
        if not rational:
            if c.denominator != 1:
                raise SchemaError(f"non-integer coefficient {t.coeff!r} in integer context")
            c = c.numerator
        out[tuple(t.exp)] = out.get(tuple(t.exp), 0) + c
    return out


def encode_element(z: StructureElement) -> ElementModel:
    return ElementModel(
        flavor=z.flavor.kind,
        bound=z.flavor.bound,
        values={v: _encode_poly(z.values[v]) for v in z.graph.vertices},
    )


def decode_element(m: ElementModel, g: MomentGraph) -> StructureElement:
    unknown = set(m.values) - set(g.vertices)
    if unknown:
        raise SchemaError(f"element mentions unknown vertices {sorted(unknown)}")
    if m.flavor == "mult":
        flavor = MULT
        values = {v: LaurentPolynomial(g.rank, _decode_terms(ts, g.rank, False)) for v, ts in m.values.items()}
    elif m.flavor == "add":
        flavor = ADD
        decoded = {v: _decode_terms(ts, g.rank, True) for v, ts in m.values.items()}
        integral = all(
            all(c.denominator == 1 for c in terms.values()) for terms in decoded.values()
        )
        values = {
            v: GradedPolynomial(
                g.rank,
                {e: (c.numerator if integral else c) for e, c in terms.items()},
                rational=not integral,
            )
            for v, terms in decoded.items()
        }
    else:
        if m.bound is None:
            raise SchemaError("trunc element without a bound")
        flavor = TRUNC(m.bound)
        values = {
            v: TruncatedSeries(
                GradedPolynomial(g.rank, _decode_terms(ts, g.rank, True), rational=True), m.bound
            )
            for v, ts in m.values.items()
        }
    try:
        return StructureElement(g, flavor, values)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad element: {exc}") from exc


def _decode_matrix(rows: list[list[int]], rank: int) -> LatticeAutomorphism:
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise SchemaError(f"matrix is not {rank}x{rank}")
    try:
        return LatticeAutomorphism.from_rows(rows)
    except Exception as exc:
        raise SchemaError(f"bad lattice map: {exc}") from exc


def encode_morphism(f: GraphMorphism) -> MorphismModel:
    return MorphismModel(
        vertex_map=dict(sorted(f.vertex_map.items())),
        lattice_maps={v: [list(r) for r in f.lattice_maps[v].matrix] for v in sorted(f.lattice_maps)},
    )


def decode_morphism(m: MorphismModel, rank: int) -> GraphMorphism:
    return GraphMorphism(
        dict(m.vertex_map),
        {v: _decode_matrix(rows, rank) for v, rows in m.lattice_maps.items()},
    )


def encode_monodromy(xi: Monodromy) -> MonodromyModel:
    return MonodromyModel(
        maps={v: [list(r) for r in xi.maps[v].matrix] for v in sorted(xi.maps)}
    )


def decode_monodromy(m: MonodromyModel, rank: int) -> Monodromy:
    return Monodromy({v: _decode_matrix(rows, rank) for v, rows in m.maps.items()})


def encode_relation(r: EquivalenceRelation) -> RelationModel:
    return RelationModel(classes=[list(block) for block in r.classes])


def decode_relation(m: RelationModel) -> EquivalenceRelation:
    if not m.classes or any(not block for block in m.classes):
        raise SchemaError("relation classes must be nonempty")
    return EquivalenceRelation.from_blocks(m.classes)


def encode_report(rep: ValidationReport) -> ReportModel:
    return ReportModel(
        ok=rep.ok,
        violations=[ViolationModel(axiom=v.axiom, message=v.message) for v in rep.violations],
    )


def encode_bundle(b: FiberBundle) -> BundleModel:
    return BundleModel(
        graph=encode_graph(b.graph),
        classes=[
            ClassModel(name=name, members=list(b.members[name])) for name in sorted(b.members)
        ],
        base=b.base,
        isos=[
            IsoModel(
                from_class=name,
                to_class=b.base,
                vertex_map=dict(sorted(b.to_base[name].vertex_map.items())),
                lattice_map=[list(r) for r in b.to_base[name].lattice_map.matrix],
            )
            for name in sorted(b.to_base)
        ],
        monodromy=encode_monodromy(b.monodromy),
    )


def decode_bundle(m: BundleModel) -> FiberBundle:
    g = decode_graph(m.graph)
    names = {}
    for cm in m.classes:
        block = tuple(sorted(cm.members))
        names[block] = cm.name
    if len(set(names.values())) != len(names):
        raise SchemaError("duplicate class names")
    relation = EquivalenceRelation.from_blocks(names.keys())
    to_base = {}
    extras = []
    for iso in m.isos:
        fiber_iso = FiberIso(dict(iso.vertex_map), _decode_matrix(iso.lattice_map, g.rank))
        if iso.to_class == m.base:
            to_base[iso.from_class] = fiber_iso
        else:
            extras.append((iso.from_class, iso.to_class, fiber_iso))
    missing = set(names.values()) - set(to_base)
    if missing:
        raise SchemaError(f"classes without an iso onto the base: {sorted(missing)}")
    xi = decode_monodromy(m.monodromy, g.rank)
    missing_xi = set(g.vertices) - set(xi.maps)
    if missing_xi:
        raise SchemaError(f"monodromy missing at vertices {sorted(missing_xi)}")

    def namer(block):
        return names[tuple(block)]

    return FiberBundle(g, relation, m.base, to_base, xi, class_name=namer, extra_isos=extras)
