"""Deterministic random generators for property suites.

Members of the structure algebra are built from characteristic-map
images of random ring elements, optional seed elements (such as point
classes), ring-scalar multiples and products; membership is preserved by
construction.  All randomness flows through a caller-supplied
``random.Random`` so identical seeds give identical elements.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .graphs import MomentGraph, Monodromy
from .rings import GradedPolynomial, LaurentPolynomial
from .structure import ADD, Flavor, MULT, StructureElement, characteristic_map


def random_vector(rng: Random, rank: int, span: int = 2) -> tuple[int, ...]:
    return tuple(rng.randint(-span, span) for _ in range(rank))


def random_laurent(rng: Random, rank: int, terms: int = 2, span: int = 2, coeff: int = 3):
    z = LaurentPolynomial.zero(rank)
    for _ in range(terms):
        c = rng.randint(-coeff, coeff)
        z = z + LaurentPolynomial.exp(random_vector(rng, rank, span), c)
    return z


def random_graded(rng: Random, rank: int, terms: int = 2, degree: int = 2, coeff: int = 3):
    z = GradedPolynomial.zero(rank)
    for _ in range(terms):
        e = [0] * rank
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(rank)] += 1
        z = z + GradedPolynomial(rank, {tuple(e): rng.randint(-coeff, coeff)})
    return z


def random_member(
    g: MomentGraph,
    xi: Monodromy,
    flavor: Flavor,
    rng: Random,
    seeds: tuple[StructureElement, ...] = (),
    pieces: int = 2,
) -> StructureElement:
    """Random element of the structure algebra of g.

    A sum of ``pieces`` summands, each a characteristic-map image or a
    seed element, scaled by a random ring scalar; occasionally squared.
    """
    if flavor not in (MULT, ADD):
        raise ValueError("sampling covers the mult and add flavors")

    def ring_sample():
        if flavor == MULT:
            return random_laurent(rng, g.rank)
        return random_graded(rng, g.rank)

    total = StructureElement.zero(g, flavor)
    for _ in range(pieces):
        if seeds and rng.random() < 0.35:
            part = seeds[rng.randrange(len(seeds))]
        else:
            part = characteristic_map(g, xi, ring_sample(), flavor)
        if rng.random() < 0.3:
            part = part * part
        total = total + part * ring_sample()
    return total
