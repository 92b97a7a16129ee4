"""Fibrations of moment graphs and push-forwards along them.

A fiber bundle packages a graph, a compatible equivalence relation, the
quotient, one isomorphism from every fiber onto the base fiber, and a
monodromy.  Push-forwards divide the fiberwise weighted sums by the
product of the fiber-label elements; regularity of the bundle makes the
division exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbiguousSign, NotDivisible, PreconditionFailed
from .graphs import (
    EquivalenceRelation,
    GraphMorphism,
    MomentGraph,
    Monodromy,
    SpecialMatching,
    ValidationReport,
    build_quotient,
    check_isomorphism,
    check_monodromy,
    check_relation,
    default_class_name,
    matching_relation,
)
from .rings import (
    GradedPolynomial,
    LatticeAutomorphism,
    LaurentPolynomial,
    TruncatedSeries,
    Vec,
    content,
    exact_divide_laurent,
    exact_divide_linear,
    integer_multiple,
    proportional,
    vec_add,
    vec_neg,
    vec_sub,
)
from .structure import ADD, MULT, StructureElement, TRUNC, require_member, twisted_pullback


@dataclass(frozen=True)
class FiberIso:
    """Single-lattice-map isomorphism between two fibers."""

    vertex_map: dict[str, str]
    lattice_map: LatticeAutomorphism


@dataclass(frozen=True)
class FiberData:
    """Per-vertex fiber labels, negated-label set and the induced sign."""

    fiber_labels: tuple[Vec, ...]
    n_set: tuple[Vec, ...]
    sign: int


class FiberBundle:
    """Quotient map with isomorphic fibers, a base class and a monodromy."""

    def __init__(
        self,
        graph: MomentGraph,
        relation: EquivalenceRelation,
        base: str,
        to_base: dict[str, FiberIso],
        monodromy: Monodromy,
        class_name=default_class_name,
        extra_isos: list[tuple[str, str, FiberIso]] | None = None,
    ):
        self.graph = graph
        self.relation = relation
        self.quotient, self.projection = build_quotient(graph, relation, class_name)
        self.members = {
            class_name(block): block for block in relation.classes
        }
        self.class_of = {v: name for name, block in self.members.items() for v in block}
        if base not in self.members:
            raise ValueError(f"base {base!r} is not a class of the quotient")
        self.base = base
        self.to_base = dict(to_base)
        self.monodromy = monodromy
        self.extra_isos = list(extra_isos or [])
        self._fibers: dict[str, MomentGraph] = {}
        self._validation: ValidationReport | None = None
        self._compat: ValidationReport | None = None
        self._regular: ValidationReport | None = None

    # -- geometry ------------------------------------------------------------

    def fiber(self, name: str) -> MomentGraph:
        if name not in self._fibers:
            self._fibers[name] = self.graph.full_subgraph(self.members[name])
        return self._fibers[name]

    def fiber_labels(self, y: str) -> tuple[Vec, ...]:
        """Multiset of labels of fiber-internal edges at y (sorted)."""
        block = self.class_of[y]
        labels = []
        for (t, h), lab in self.graph.edges.items():
            if (t == y and self.class_of[h] == block) or (h == y and self.class_of[t] == block):
                labels.append(lab)
        return tuple(sorted(labels))

    def class_labels(self, name: str) -> tuple[Vec, ...]:
        """Fiber labels of the class, read off its first member."""
        return self.fiber_labels(self.members[name][0])

    def base_labels(self) -> tuple[Vec, ...]:
        return self.class_labels(self.base)

    def iso(self, src: str, dst: str) -> FiberIso:
        """Fiber isomorphism src -> dst composed through the base."""
        f_src, f_dst = self.to_base[src], self.to_base[dst]
        inv_vertex = {w: v for v, w in f_dst.vertex_map.items()}
        return FiberIso(
            {v: inv_vertex[f_src.vertex_map[v]] for v in f_src.vertex_map},
            f_dst.lattice_map.inverse().compose(f_src.lattice_map),
        )

    # -- validation ----------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._validation is None:
            self._validation = check_fibration(self)
        return self._validation

    def require_valid(self):
        rep = self.validate()
        if not rep.ok:
            raise PreconditionFailed("bundle does not validate", report=rep)

    def compatibility(self) -> ValidationReport:
        if self._compat is None:
            self._compat = check_compatibility(self)
        return self._compat

    def regularity(self) -> ValidationReport:
        if self._regular is None:
            self._regular = check_regularity(self)
        return self._regular

    def __repr__(self):
        return (
            f"FiberBundle({len(self.members)} classes over base {self.base!r}, "
            f"|V|={len(self.graph.vertices)})"
        )


def check_fibration(b: FiberBundle) -> ValidationReport:
    """Relation compatibility, monodromy, and the fiber-isomorphism axioms."""
    report = ValidationReport()
    report.extend(check_relation(b.relation, b.graph))
    report.extend(check_monodromy(b.monodromy, b.graph))
    base_fiber = b.fiber(b.base)
    for name in sorted(b.members):
        iso = b.to_base.get(name)
        if iso is None:
            report.add("FB", f"class {name} has no isomorphism onto the base fiber")
            continue
        fib = b.fiber(name)
        morphism = GraphMorphism.constant_lattice(iso.vertex_map, iso.lattice_map)
        if set(iso.vertex_map) != set(fib.vertices):
            report.add("FB", f"iso of class {name} is not defined on the whole fiber")
            continue
        if not check_isomorphism(morphism, fib, base_fiber):
            report.add("FB2", f"class {name}: map onto the base fiber is not an isomorphism")
    base_iso = b.to_base.get(b.base)
    if base_iso is not None:
        if any(v != w for v, w in base_iso.vertex_map.items()) or not base_iso.lattice_map.is_identity():
            report.add("FB1", "the base fiber is not mapped by the identity")
    for src, dst, iso in b.extra_isos:
        derived = b.iso(src, dst)
        if iso.vertex_map != derived.vertex_map or iso.lattice_map != derived.lattice_map:
            report.add("FB1", f"iso {src}->{dst} breaks the cocycle rule")
    return report


def compute_fiber_data(b: FiberBundle) -> dict[str, FiberData]:
    """Per-vertex negated-label sets and signs.

    A base label beta lands in the set at y when the twisted image
    xi_y(f_l(beta-preimage)) is the negative of a fiber label at y.
    """
    out: dict[str, FiberData] = {}
    for name in sorted(b.members):
        f_l = b.to_base[name].lattice_map
        for y in b.members[name]:
            labels = b.fiber_labels(y)
            lab_set = set(labels)
            neg_set = {vec_neg(l) for l in labels}
            clash = lab_set & neg_set
            if clash:
                raise AmbiguousSign(
                    f"labels {sorted(clash)} occur with both signs at {y}"
                )
            n_set = []
            xi_y = b.monodromy(y)
            for gamma in labels:
                beta = f_l.apply(gamma)
                if xi_y.apply(beta) in neg_set:
                    n_set.append(beta)
            n_set.sort()
            out[y] = FiberData(labels, tuple(n_set), (-1) ** len(n_set))
    return out


def check_compatibility(b: FiberBundle) -> ValidationReport:
    """The product, parity and congruence conditions tying xi to the base fiber."""
    report = ValidationReport()
    data = compute_fiber_data(b)
    for name in sorted(b.members):
        f_l = b.to_base[name].lattice_map
        for y in b.members[name]:
            labels = data[y].fiber_labels
            prod = GradedPolynomial.one(b.graph.rank)
            twisted = GradedPolynomial.one(b.graph.rank)
            xi_y = b.monodromy(y)
            for gamma in labels:
                prod = prod * GradedPolynomial.linear(gamma)
                twisted = twisted * GradedPolynomial.linear(xi_y.apply(f_l.apply(gamma)))
            if twisted != prod and twisted != -prod:
                report.add("CF1", f"twisted label product at {y} is not +-(label product)")
    for (t, h), lab in sorted(b.graph.edges.items()):
        if b.class_of[t] != b.class_of[h]:
            continue
        if len(data[t].n_set) % 2 == len(data[h].n_set) % 2:
            report.add("CF2a", f"fiber edge {t}->{h}: negated-label counts share parity")
        total_t = (0,) * b.graph.rank
        for beta in data[t].n_set:
            total_t = vec_add(total_t, b.monodromy(t).apply(beta))
        total_h = (0,) * b.graph.rank
        for beta in data[h].n_set:
            total_h = vec_add(total_h, b.monodromy(h).apply(beta))
        if integer_multiple(vec_sub(total_t, total_h), lab) is None:
            report.add("CF2b", f"fiber edge {t}->{h}: twisted sums differ by a non-multiple")
    return report


def check_regularity(b: FiberBundle) -> ValidationReport:
    """Constant fiber labels on classes, primitive labels, no proportional pairs."""
    report = ValidationReport()
    for name in sorted(b.members):
        members = b.members[name]
        labels0 = b.fiber_labels(members[0])
        for y in members[1:]:
            if b.fiber_labels(y) != labels0:
                report.add("REG1", f"fiber labels differ inside class {name} (at {y})")
        for gamma in labels0:
            if content(gamma) != 1:
                report.add("REG2", f"label {list(gamma)} in class {name} is imprimitive")
        for i in range(len(labels0)):
            for j in range(i + 1, len(labels0)):
                if proportional(labels0[i], labels0[j]):
                    report.add(
                        "REG3",
                        f"labels {list(labels0[i])} and {list(labels0[j])} in class {name} "
                        "are proportional",
                    )
    return report


# ---------------------------------------------------------------------------
# push-forwards


def _require_ready(b: FiberBundle, z: StructureElement, unsafe: bool):
    if unsafe:
        return
    b.require_valid()
    rep = b.compatibility()
    if not rep.ok:
        raise PreconditionFailed("monodromy is not compatible with the base fiber", report=rep)
    rep = b.regularity()
    if not rep.ok:
        raise PreconditionFailed("bundle is not regular", report=rep)
    require_member(z)


def _unit_factor(b: FiberBundle, y: str):
    """Sign and exponent shift from factoring xi_y(prod x(beta)) over the fiber labels.

    Each base label beta maps under xi_y to +-(some fiber label); the
    negative matches contribute the unit -e^(-xi_y(beta)) whose inverse
    is tracked here as (sign, shift) with shift = sum of those xi_y(beta).
    """
    available = list(b.fiber_labels(y))
    xi_y = b.monodromy(y)
    sign = 1
    shift = (0,) * b.graph.rank
    for beta in b.base_labels():
        delta = xi_y.apply(beta)
        if delta in available:
            available.remove(delta)
        elif vec_neg(delta) in available:
            available.remove(vec_neg(delta))
            sign = -sign
            shift = vec_add(shift, delta)
        else:
            raise NotDivisible(
                f"twisted base label {list(delta)} at {y} is not +-(fiber label)"
            )
    return sign, shift


def pushforward_mult(b: FiberBundle, z: StructureElement, unsafe: bool = False) -> StructureElement:
    """Multiplicative push-forward onto the quotient graph.

    Per class: numerator = sum over fiber vertices of
    sign(y) * z_y * e^(shift(y)), divided exactly by every x(fiber label).
    """
    if z.flavor != MULT:
        raise ValueError("multiplicative push-forward needs a mult-flavor element")
    _require_ready(b, z, unsafe)
    rank = b.graph.rank
    out = {}
    for name in sorted(b.members):
        num = LaurentPolynomial.zero(rank)
        for y in b.members[name]:
            zy = z.values[y]
            if zy.is_zero():
                continue
            sign, shift = _unit_factor(b, y)
            num = num + zy * LaurentPolynomial.exp(shift, sign)
        for gamma in b.class_labels(name):
            num = exact_divide_laurent(num, gamma)
        out[name] = num
    return StructureElement(b.quotient, MULT, out)


def pushforward_add(b: FiberBundle, z: StructureElement, unsafe: bool = False) -> StructureElement:
    """Additive push-forward; accepts add or trunc flavor.

    The twisted label product collapses to sign(y) * (fiber label product),
    so the numerator is the signed sum of the values.  A trunc input of
    bound D yields bound D - (number of base labels).
    """
    if z.flavor.kind not in ("add", "trunc"):
        raise ValueError("additive push-forward needs an add- or trunc-flavor element")
    _require_ready(b, z, unsafe)
    n_labels = len(b.base_labels())
    if z.flavor.kind == "trunc" and z.flavor.bound < n_labels:
        raise ValueError(
            f"bound {z.flavor.bound} too small: dividing by {n_labels} linear forms"
        )
    rank = b.graph.rank
    out = {}
    for name in sorted(b.members):
        if z.flavor.kind == "add":
            num = GradedPolynomial.zero(rank)
        else:
            num = TruncatedSeries.zero(rank, z.flavor.bound)
        for y in b.members[name]:
            sign, _ = _unit_factor(b, y)
            num = num + z.values[y] * sign
        for gamma in b.class_labels(name):
            num = exact_divide_linear(num, gamma)
        out[name] = num
    flavor = ADD if z.flavor.kind == "add" else TRUNC(z.flavor.bound - n_labels)
    return StructureElement(b.quotient, flavor, out)


def pushforward(b: FiberBundle, z: StructureElement, unsafe: bool = False) -> StructureElement:
    return pushforward_mult(b, z, unsafe) if z.flavor == MULT else pushforward_add(b, z, unsafe)


def untwisted_pullback(b: FiberBundle, z_quot: StructureElement) -> StructureElement:
    """Pullback along the projection with the trivial twist (coset-constant tuples)."""
    return twisted_pullback(z_quot, b.projection, b.graph, b.quotient, Monodromy.trivial(b.graph))


def projection_check(
    b: FiberBundle, z_quot: StructureElement, z: StructureElement, unsafe: bool = False
) -> bool:
    """Exact equality of push(pull(z') * z) and z' * push(z)."""
    lhs = pushforward(b, untwisted_pullback(b, z_quot) * z, unsafe)
    rhs = z_quot * pushforward(b, z, unsafe)
    return lhs == rhs


def push_pull(b: FiberBundle, z: StructureElement, unsafe: bool = False) -> StructureElement:
    """Push forward, then pull back untwisted; a projector on the algebra."""
    return untwisted_pullback(b, pushforward_mult(b, z, unsafe))


# ---------------------------------------------------------------------------
# bundles from special matchings


def matching_bundle(g: MomentGraph, xi: Monodromy, m: SpecialMatching) -> FiberBundle:
    """Two-element-fiber bundle induced by a special matching.

    Classes are named after their lower member; the base class is the one
    containing the smallest minimal vertex.  Fiber maps send lower to
    lower and twist the lattice by xi_base o xi_lower^(-1).
    """
    relation = matching_relation(m, g)

    def lower(block: tuple[str, ...]) -> str:
        a, bb = block
        return a if g.less(a, bb) else bb

    base_anchor = min(g.minimal_vertices())
    base_block = next(block for block in relation.classes if base_anchor in block)
    base_lower = lower(base_block)
    xi_base = xi(base_lower)
    to_base = {}
    for block in relation.classes:
        lo = lower(block)
        hi = m.pairing[lo]
        to_base[lo] = FiberIso(
            {lo: base_lower, hi: m.pairing[base_lower]},
            xi_base.compose(xi(lo).inverse()),
        )
    return FiberBundle(
        g,
        relation,
        base_lower,
        to_base,
        xi,
        class_name=lambda block: lower(block),
    )
