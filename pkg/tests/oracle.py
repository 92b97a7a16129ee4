"""Independent oracles used by the test suites.

The push-forward oracle clears denominators literally: every fiber
vertex contributes the fraction z_y / prod of x(twisted base labels),
fractions are combined pairwise over a common denominator, and the final
quotient is taken by general leading-term division.  No sign or
negated-label bookkeeping is shared with the production path.
"""

from __future__ import annotations

from momentgraph.fibration import FiberBundle
from momentgraph.rings import (
    GradedPolynomial,
    LaurentPolynomial,
    exact_divide_general,
    x_laurent,
)
from momentgraph.structure import ADD, MULT, StructureElement


def pushforward_mult_oracle(b: FiberBundle, z: StructureElement) -> StructureElement:
    out = {}
    for name in sorted(b.members):
        num = LaurentPolynomial.zero(b.graph.rank)
        den = LaurentPolynomial.one(b.graph.rank)
        for y in b.members[name]:
            dy = LaurentPolynomial.one(b.graph.rank)
            for beta in b.base_labels():
                dy = dy * x_laurent(b.monodromy(y).apply(beta))
            num = num * dy + z.values[y] * den
            den = den * dy
        out[name] = exact_divide_general(num, den)
    return StructureElement(b.quotient, MULT, out)


def pushforward_add_oracle(b: FiberBundle, z: StructureElement) -> StructureElement:
    out = {}
    for name in sorted(b.members):
        num = GradedPolynomial.zero(b.graph.rank)
        den = GradedPolynomial.one(b.graph.rank)
        for y in b.members[name]:
            dy = GradedPolynomial.one(b.graph.rank)
            for beta in b.base_labels():
                dy = dy * GradedPolynomial.linear(b.monodromy(y).apply(beta))
            num = num * dy + z.values[y] * den
            den = den * dy
        out[name] = exact_divide_general(num, den)
    return StructureElement(b.quotient, ADD, out)
