"""Schubert-type triangular families and the combinatorial forgetful map.

On a graph with matchings by right multiplication, iterated push-pull
operators applied to the top point class produce one element per vertex,
supported on the up-set of its index.  Expanding an element over that
family by Bruhat-increasing back-substitution and applying the
augmentation yields integer coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDivisible, NotInSpan, NotTriangular
from .fibration import matching_bundle, push_pull
from .graphs import MomentGraph, Monodromy, SpecialMatching
from .structure import MULT, StructureElement, point_class
from .rings import exact_divide_general


@dataclass(frozen=True)
class TriangularBasis:
    """Vertex-indexed family, each element supported on its index's up-set."""

    graph: MomentGraph
    order: tuple[str, ...]  # linear extension, increasing
    elements: dict[str, StructureElement]


def triangular_family(
    g: MomentGraph, xi: Monodromy, matchings: list[SpecialMatching]
) -> TriangularBasis:
    """Generate the family from the top point class via push-pull operators.

    Requires a unique maximal vertex whose incident labels seed the point
    class.  Every vertex below the top must be reachable by a covering
    matching step; results must not depend on the step chosen.
    """
    tops = g.maximal_vertices()
    if len(tops) != 1:
        raise NotTriangular(f"graph has {len(tops)} maximal vertices, need exactly 1")
    top = tops[0]
    top_labels = [lab for _, lab, _ in g.neighbors(top)]
    height = g.height()
    bundles = []
    for m in matchings:
        b = matching_bundle(g, xi, m)
        b.require_valid()
        bundles.append((m, b))

    elements = {top: point_class(g, xi, top, top_labels)}
    for v in sorted(g.vertices, key=lambda u: (-height[u], u)):
        if v == top:
            continue
        candidates = []
        for m, b in bundles:
            w = m(v)
            if g.less(v, w) and w in elements:
                candidates.append(push_pull(b, elements[w], unsafe=True))
        if not candidates:
            raise NotTriangular(f"no matching moves {v} upward to a computed element")
        first = candidates[0]
        for other in candidates[1:]:
            if other != first:
                raise NotTriangular(f"family at {v} depends on the matching used")
        elements[v] = first

    for v, zeta in elements.items():
        if zeta.values[v].is_zero():
            raise NotTriangular(f"element at {v} vanishes on its own vertex")
        for u in g.vertices:
            if not zeta.values[u].is_zero() and not g.leq(v, u):
                raise NotTriangular(f"element at {v} has support outside its up-set (at {u})")

    order = tuple(sorted(g.vertices, key=lambda u: (height[u], u)))
    return TriangularBasis(g, order, elements)


def expand(z: StructureElement, basis: TriangularBasis) -> dict[str, object]:
    """Ring-valued coordinates of z over the family.

    Back-substitution in increasing order, dividing by the diagonal
    values exactly; NotInSpan when no exact expansion exists.
    """
    residual = dict(z.values)
    coords = {}
    for w in basis.order:
        zeta = basis.elements[w]
        try:
            c = exact_divide_general(residual[w], zeta.values[w])
        except NotDivisible as exc:
            raise NotInSpan(f"no exact coefficient at {w}") from exc
        coords[w] = c
        for u in basis.graph.vertices:
            residual[u] = residual[u] - c * zeta.values[u]
    leftovers = [u for u, r in residual.items() if not r.is_zero()]
    if leftovers:
        raise NotInSpan(f"nonzero residual at {sorted(leftovers)[0]} after back-substitution")
    return coords


def forgetful_map(z: StructureElement, basis: TriangularBasis) -> dict[str, int]:
    """Augmented coordinates of z: expand, then send e^lam -> 1."""
    if z.flavor != MULT:
        raise ValueError("the forgetful map is computed for mult-flavor elements")
    coords = expand(z, basis)
    return {w: coords[w].augmentation() for w in basis.order}
