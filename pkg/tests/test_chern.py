from __future__ import annotations

from fractions import Fraction
from random import Random

import pytest

from momentgraph.chern import (
    EXACT,
    PAPER_STATED,
    SIGN_FLIPPED,
    chern_localized,
    chern_ring_map,
    rr_check,
    rr_report,
    todd_genus,
)
from momentgraph.coxeter import build_root_system, weyl_fibration
from momentgraph.fibration import compute_fiber_data, untwisted_pullback
from momentgraph.graphs import Monodromy
from momentgraph.rings import (
    GradedPolynomial,
    LaurentPolynomial,
    todd_series,
    truncated_exp,
    x_laurent,
)
from momentgraph.sampling import random_laurent, random_member
from momentgraph.structure import (
    MULT,
    StructureElement,
    TRUNC,
    characteristic_map,
    check_membership,
)


def test_chern_of_constants(a2_bundle):
    z = StructureElement.one(a2_bundle.graph, MULT)
    for d in range(3):
        c = chern_localized(z, d)
        assert all(v == 1 for v in c.values.values())


def test_chern_of_exponential_pair(a1_bundle):
    g = a1_bundle.graph
    z = StructureElement(
        g, MULT, {"e": LaurentPolynomial.exp((1,)), "1": LaurentPolynomial.exp((-1,))}
    )
    c = chern_localized(z, 2)
    assert c.values["e"] == truncated_exp((1,), 2)
    assert c.values["1"] == truncated_exp((-1,), 2)
    assert check_membership(c).ok


def test_chern_of_x_generator():
    z = chern_ring_map(x_laurent((1,)), 2)
    assert z.homogeneous(1) == GradedPolynomial.linear((1,), rational=True)
    assert z.homogeneous(2) == GradedPolynomial(1, {(2,): Fraction(-1, 2)}, True)


def test_chern_is_ring_hom(a2_bundle):
    rng = Random(211)
    g, xi = a2_bundle.graph, a2_bundle.monodromy
    for _ in range(10):
        a = random_member(g, xi, MULT, rng)
        b = random_member(g, xi, MULT, rng)
        assert chern_localized(a * b, 3, unsafe=True) == chern_localized(
            a, 3, unsafe=True
        ) * chern_localized(b, 3, unsafe=True)


def test_chern_commutes_with_characteristic_map(a2_bundle):
    rng = Random(223)
    g, xi = a2_bundle.graph, a2_bundle.monodromy
    for _ in range(20):
        q = random_laurent(rng, 2)
        for d in range(5):
            lhs = chern_localized(characteristic_map(g, xi, q, MULT), d, unsafe=True)
            rhs = characteristic_map(g, xi, chern_ring_map(q, d), TRUNC(d))
            assert lhs == rhs


def test_chern_commutes_with_pullback(a2_bundle):
    rng = Random(227)
    quotient = a2_bundle.quotient
    triv = Monodromy.trivial(quotient)
    for _ in range(20):
        zq = random_member(quotient, triv, MULT, rng)
        lhs = untwisted_pullback(a2_bundle, chern_localized(zq, 3, unsafe=True))
        rhs = chern_localized(untwisted_pullback(a2_bundle, zq), 3, unsafe=True)
        assert lhs == rhs


def test_chern_preserves_augmentation_ideal(a2_bundle):
    rng = Random(229)
    g, xi = a2_bundle.graph, a2_bundle.monodromy
    for _ in range(10):
        z = random_member(g, xi, MULT, rng)
        scaled = z * x_laurent((1, 0))
        c = chern_localized(scaled, 3, unsafe=True)
        assert all(v.constant_coefficient() == 0 for v in c.values.values())


# -- Todd genera -----------------------------------------------------------------------------


def test_todd_paper_trivial_on_empty_n(a2_bundle):
    td = todd_genus(a2_bundle, 3, PAPER_STATED)
    data = compute_fiber_data(a2_bundle)
    for y, d in data.items():
        if not d.n_set:
            assert td.values[y] == 1


def test_todd_paper_a1(a1_bundle):
    td = todd_genus(a1_bundle, 2, PAPER_STATED)
    assert td.values["e"] == 1
    assert td.values["1"] == truncated_exp((1,), 2)


def test_todd_exact_a1(a1_bundle):
    td = todd_genus(a1_bundle, 2, EXACT)
    assert td.values["e"] == todd_series((1,), 2)
    assert td.values["1"] == todd_series((-1,), 2)


def test_todd_exact_vs_flipped_fiber_constant(rr_bundles):
    # exact = (prod of Q over the class labels) * flipped, vertex by vertex
    for label, b in rr_bundles:
        exact = todd_genus(b, 3, EXACT)
        flipped = todd_genus(b, 3, SIGN_FLIPPED)
        for name, members in b.members.items():
            factor = None
            prod = None
            for gamma in b.class_labels(name):
                q = todd_series(gamma, 3)
                prod = q if prod is None else prod * q
            for y in members:
                lhs = exact.values[y]
                rhs = flipped.values[y] * prod if prod is not None else flipped.values[y]
                assert lhs == rhs, (label, y)


# -- the Riemann-Roch identity -----------------------------------------------------------------


def test_rr_exact_a1_unit(a1_bundle):
    z = StructureElement.one(a1_bundle.graph, MULT)
    report = rr_check(a1_bundle, z, 4, EXACT)
    assert report.ok
    assert report.agreement() == 4


def test_rr_paper_a1_unit_mismatch_at_zero(a1_bundle):
    z = StructureElement.one(a1_bundle.graph, MULT)
    report = rr_check(a1_bundle, z, 1, PAPER_STATED)
    verdict = report.per_class["e"]
    assert verdict.agree_through_degree == -1
    assert verdict.first_mismatch["degree"] == 0
    assert verdict.first_mismatch["lhs"] == [["-1", [0]]]
    assert verdict.first_mismatch["rhs"] == [["1", [0]]]


def test_rr_flipped_a1_unit_mismatch_at_one(a1_bundle):
    z = StructureElement.one(a1_bundle.graph, MULT)
    report = rr_check(a1_bundle, z, 1, SIGN_FLIPPED)
    verdict = report.per_class["e"]
    assert verdict.agree_through_degree == 0
    assert verdict.first_mismatch["degree"] == 1


def test_rr_exact_across_bundles(rr_bundles):
    rng = Random(233)
    for label, b in rr_bundles:
        for _ in range(3):
            z = random_member(b.graph, b.monodromy, MULT, rng)
            for degree in (1, 3):
                report = rr_check(b, z, degree, EXACT, unsafe=True)
                assert report.ok, (label, degree)


def test_rr_report_table_a1(a1_bundle):
    z = StructureElement.one(a1_bundle.graph, MULT)
    rows = rr_report(a1_bundle, [z], 3)
    by_conv = {row["convention"]: row["agree_through_degree"] for row in rows}
    assert by_conv["exact"] == 3
    assert by_conv["paper"] == -1
    assert by_conv["flipped"] == 0


def test_rr_report_empty():
    bundle = weyl_fibration(build_root_system("A", 1), [1])
    assert rr_report(bundle, [], 3) == []
