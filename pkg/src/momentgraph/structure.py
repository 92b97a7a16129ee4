"""Structure algebras of moment graphs.

A structure element assigns a ring element to every vertex such that the
difference across each edge is exactly divisible by the element attached
to the edge label: ``x(label) = 1 - e^(-label)`` in the multiplicative
flavor, the label itself as a linear form in the additive and truncated
flavors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    HypothesisViolated,
    InvalidMonodromy,
    NotDivisible,
    NotMember,
    PreconditionFailed,
    RankMismatch,
)
from .graphs import (
    GraphMorphism,
    MomentGraph,
    Monodromy,
    ValidationReport,
    check_monodromy,
    validate_morphism,
)
from .rings import (
    GradedPolynomial,
    LaurentPolynomial,
    TruncatedSeries,
    Vec,
    apply_automorphism,
    exact_divide_laurent,
    exact_divide_linear,
    integer_multiple,
    x_laurent,
)


@dataclass(frozen=True)
class Flavor:
    """Coefficient ring selector: mult = group ring, add = symmetric algebra,
    trunc = degree-bounded rational symmetric algebra."""

    kind: str
    bound: int | None = None

    def __post_init__(self):
        if self.kind not in ("mult", "add", "trunc"):
            raise ValueError(f"unknown flavor {self.kind!r}")
        if (self.kind == "trunc") != (self.bound is not None):
            raise ValueError("exactly the trunc flavor carries a bound")


MULT = Flavor("mult")
ADD = Flavor("add")


def TRUNC(bound: int) -> Flavor:
    return Flavor("trunc", bound)


def flavor_zero(flavor: Flavor, rank: int):
    if flavor.kind == "mult":
        return LaurentPolynomial.zero(rank)
    if flavor.kind == "add":
        return GradedPolynomial.zero(rank)
    return TruncatedSeries.zero(rank, flavor.bound)


def flavor_one(flavor: Flavor, rank: int):
    if flavor.kind == "mult":
        return LaurentPolynomial.one(rank)
    if flavor.kind == "add":
        return GradedPolynomial.one(rank)
    return TruncatedSeries.one(rank, flavor.bound)


def _expected_type(flavor: Flavor):
    return {"mult": LaurentPolynomial, "add": GradedPolynomial, "trunc": TruncatedSeries}[flavor.kind]


class StructureElement:
    """Per-vertex ring elements satisfying edge divisibility."""

    __slots__ = ("graph", "flavor", "values")

    def __init__(self, graph: MomentGraph, flavor: Flavor, values: dict):
        self.graph = graph
        self.flavor = flavor
        want = _expected_type(flavor)
        vals = {}
        for v in graph.vertices:
            z = values.get(v)
            if z is None:
                z = flavor_zero(flavor, graph.rank)
            if isinstance(z, int):
                z = flavor_zero(flavor, graph.rank) + z
            if not isinstance(z, want):
                raise TypeError(f"value at {v} has type {type(z).__name__}, expected {want.__name__}")
            if flavor.kind == "trunc" and z.bound != flavor.bound:
                z = z.truncate(flavor.bound)
                if z.bound != flavor.bound:
                    raise ValueError(f"value at {v} has bound {z.bound} < flavor bound")
            if z.rank != graph.rank:
                raise RankMismatch(f"value at {v} has wrong rank")
            vals[v] = z
        self.values = vals

    @staticmethod
    def constant(graph: MomentGraph, flavor: Flavor, element) -> "StructureElement":
        return StructureElement(graph, flavor, {v: element for v in graph.vertices})

    @staticmethod
    def zero(graph: MomentGraph, flavor: Flavor) -> "StructureElement":
        return StructureElement(graph, flavor, {})

    @staticmethod
    def one(graph: MomentGraph, flavor: Flavor) -> "StructureElement":
        return StructureElement.constant(graph, flavor, flavor_one(flavor, graph.rank))

    def value(self, v: str):
        return self.values[v]

    def _scalar(self, other):
        return isinstance(other, (int, Fraction, LaurentPolynomial, GradedPolynomial, TruncatedSeries))

    def __add__(self, other):
        if isinstance(other, StructureElement):
            if other.flavor != self.flavor:
                raise ValueError("flavor mismatch")
            return StructureElement(
                self.graph, self.flavor, {v: self.values[v] + other.values[v] for v in self.values}
            )
        if self._scalar(other):
            return StructureElement(
                self.graph, self.flavor, {v: z + other for v, z in self.values.items()}
            )
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return StructureElement(self.graph, self.flavor, {v: -z for v, z in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, StructureElement):
            if other.flavor != self.flavor:
                raise ValueError("flavor mismatch")
            return StructureElement(
                self.graph, self.flavor, {v: self.values[v] * other.values[v] for v in self.values}
            )
        if self._scalar(other):
            return StructureElement(
                self.graph, self.flavor, {v: z * other for v, z in self.values.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, StructureElement):
            return NotImplemented
        return self.flavor == other.flavor and self.values == other.values

    def __repr__(self):
        return f"StructureElement({self.flavor.kind}, {len(self.values)} vertices)"


# ---------------------------------------------------------------------------
# membership


def _edge_divides(diff, label: Vec, flavor: Flavor) -> bool:
    try:
        if flavor.kind == "mult":
            exact_divide_laurent(diff, label)
        else:
            exact_divide_linear(diff, label)
    except NotDivisible:
        return False
    return True


def check_membership(z: StructureElement) -> ValidationReport:
    """Per-edge divisibility verdicts."""
    report = ValidationReport()
    g = z.graph
    for (t, h), lab in sorted(g.edges.items()):
        diff = z.values[t] - z.values[h]
        if isinstance(diff, TruncatedSeries) and diff.bound == 0:
            ok = diff.constant_coefficient() == 0
        elif getattr(diff, "is_zero", lambda: False)():
            ok = True
        else:
            ok = _edge_divides(diff, lab, z.flavor)
        if not ok:
            report.add("MEMBER", f"difference across {t}->{h} not divisible by the label element")
    return report


def require_member(z: StructureElement):
    rep = check_membership(z)
    if not rep.ok:
        raise NotMember(rep.violations[0].message, report=rep)


# ---------------------------------------------------------------------------
# characteristic map and pullbacks


def characteristic_map(g: MomentGraph, xi: Monodromy, q, flavor: Flavor) -> StructureElement:
    """Vertexwise image (xi_v(q))_v; a ring homomorphism into the algebra."""
    rep = check_monodromy(xi, g)
    if not rep.ok:
        raise InvalidMonodromy("not a monodromy of the graph", report=rep)
    if isinstance(q, int):
        q = flavor_zero(flavor, g.rank) + q
    if not isinstance(q, _expected_type(flavor)):
        raise TypeError(f"ring element of type {type(q).__name__} does not match flavor")
    return StructureElement(g, flavor, {v: apply_automorphism(xi(v), q) for v in g.vertices})


def twisted_pullback(
    z2: StructureElement, f: GraphMorphism, g: MomentGraph, g2: MomentGraph, xi: Monodromy
) -> StructureElement:
    """Pullback along f twisted by xi: v -> xi_v(z at f(v)).

    Requires xi to be a monodromy of g and, on every non-collapsed edge,
    the image label to be carried into (label)*Z by xi at the endpoints.
    """
    if z2.graph.vertices != g2.vertices:
        raise ValueError("element does not live on the target graph")
    rep = validate_morphism(f, g, g2)
    if not rep.ok:
        raise PreconditionFailed("morphism does not validate", report=rep)
    rep = check_monodromy(xi, g)
    if not rep.ok:
        raise InvalidMonodromy("not a monodromy of the source graph", report=rep)
    for (t, h), lab in sorted(g.edges.items()):
        ft, fh = f.vmap(t), f.vmap(h)
        if ft == fh:
            continue
        lab2 = g2.undirected_label(ft, fh)
        if integer_multiple(xi(t).apply(lab2), lab) is None:
            raise HypothesisViolated(
                f"edge {t}->{h}: twisted image of the target label leaves (label)*Z"
            )
    return StructureElement(
        g,
        z2.flavor,
        {v: apply_automorphism(xi(v), z2.values[f.vmap(v)]) for v in g.vertices},
    )


def point_class(g: MomentGraph, xi: Monodromy, vertex: str, labels) -> StructureElement:
    """Element supported at one vertex with value prod of xi_vertex(x(label)).

    The label multiset must make the tuple a member (verified).
    """
    if vertex not in set(g.vertices):
        raise ValueError(f"unknown vertex {vertex}")
    value = LaurentPolynomial.one(g.rank)
    for lab in labels:
        value = value * apply_automorphism(xi(vertex), x_laurent(tuple(lab)))
    z = StructureElement(g, MULT, {vertex: value})
    require_member(z)
    return z
