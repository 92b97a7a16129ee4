"""Acceptance criteria, one test per criterion, exact tolerances.

Each test prints a single PASS/FAIL line (visible with pytest -s); the
assertions carry the same condition.  Randomized suites use fixed seeds.
"""

from __future__ import annotations

import json
from random import Random

import pytest
from click.testing import CliRunner

from oracle import pushforward_mult_oracle

from momentgraph.chern import EXACT, PAPER_STATED, SIGN_FLIPPED, rr_check
from momentgraph.cli import main as cli_main
from momentgraph.coxeter import (
    build_root_system,
    bruhat_graph,
    coset_relation,
    parabolic_graph,
    right_matching,
    weyl_fibration,
    weyl_monodromy,
)
from momentgraph.fibration import (
    compute_fiber_data,
    matching_bundle,
    projection_check,
    push_pull,
    pushforward_add,
    pushforward_mult,
    untwisted_pullback,
)
from momentgraph.graphs import (
    GraphMorphism,
    Monodromy,
    build_quotient,
    check_isomorphism,
    check_relation,
    validate_graph,
)
from momentgraph.rings import (
    LatticeAutomorphism,
    LaurentPolynomial,
    content,
    exact_divide_laurent,
    x_laurent,
)
from momentgraph.sampling import random_laurent, random_member, random_vector
from momentgraph.structure import (
    ADD,
    MULT,
    StructureElement,
    TRUNC,
    characteristic_map,
    check_membership,
    point_class,
)
from momentgraph.chern import chern_localized, chern_ring_map

ALL_TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2)]


def report(ok: bool, line: str):
    print(("PASS" if ok else "FAIL") + " " + line)
    assert ok, line


@pytest.fixture(scope="module")
def oracle_bundles():
    bundles = [
        ("A2 theta={1}", weyl_fibration(build_root_system("A", 2), [1])),
        ("B2 theta={1}", weyl_fibration(build_root_system("B", 2), [1])),
        ("B2 theta={2}", weyl_fibration(build_root_system("B", 2), [2])),
        ("A3 theta={1,2}", weyl_fibration(build_root_system("A", 3), [1, 2])),
    ]
    for _, b in bundles:
        b.require_valid()
        assert b.compatibility().ok and b.regularity().ok
    return bundles


@pytest.fixture(scope="module")
def rr_matrix(oracle_bundles):
    a1 = ("A1 theta={1}", weyl_fibration(build_root_system("A", 1), [1]))
    a1[1].require_valid()
    return [a1] + list(oracle_bundles)


def member_suite(b, rng, count):
    """Characteristic-map images, point classes and products."""
    g, xi = b.graph, b.monodromy
    top = g.maximal_vertices()[0]
    top_labels = [lab for _, lab, _ in g.neighbors(top)]
    pclass = point_class(g, xi, top, top_labels)
    out = [StructureElement.one(g, MULT), pclass]
    while len(out) < count:
        q = random_laurent(rng, g.rank, terms=2, span=1, coeff=2)
        img = characteristic_map(g, xi, q, MULT)
        out.append(img)
        if len(out) < count:
            out.append(img * pclass)
        if len(out) < count and rng.random() < 0.5:
            q2 = random_laurent(rng, g.rank, terms=2, span=1, coeff=2)
            out.append(img * characteristic_map(g, xi, q2, MULT))
    return out[:count]


def test_criterion_1_division_roundtrip():
    rng = Random(20240801)
    failures = 0
    for rank in (1, 2, 3):
        done = 0
        while done < 200:
            gamma = random_vector(rng, rank, span=3)
            if content(gamma) != 1:
                continue
            z = random_laurent(rng, rank, terms=3, span=2, coeff=5)
            if exact_divide_laurent(z * x_laurent(gamma), gamma) != z:
                failures += 1
            done += 1
    report(failures == 0, f"criterion 1: division round-trip, 600 pairs, {failures} failures")


def test_criterion_2_axiom_checkers():
    mismatches = 0
    for letter, rank in ALL_TYPES:
        rs = build_root_system(letter, rank)
        g = bruhat_graph(rs)
        if not validate_graph(g).ok:
            mismatches += 1
        ident = LatticeAutomorphism.identity(rank)
        by_id = {w.vertex_id: w for w in rs.weyl_elements()}
        thetas = [[]] + [[i] for i in range(1, rank + 1)] + [
            [i, j] for i in range(1, rank + 1) for j in range(i + 1, rank + 1)
        ]
        for theta in thetas:
            rel = coset_relation(rs, theta)
            if not check_relation(rel, g).ok:
                mismatches += 1
                continue
            quotient, _ = build_quotient(g, rel)
            direct = parabolic_graph(rs, theta)
            vmap = {
                name: min(name.split("|"), key=lambda v: by_id[v].length)
                for name in quotient.vertices
            }
            f = GraphMorphism(vmap, {v: ident for v in quotient.vertices})
            if not check_isomorphism(f, quotient, direct):
                mismatches += 1
    report(mismatches == 0, f"criterion 2: axiom checkers over 9 types, {mismatches} mismatches")


def test_criterion_3_rank1_pushforward_identities():
    b = weyl_fibration(build_root_system("A", 1), [1])
    g = b.graph
    ok = True
    out = pushforward_mult(b, StructureElement.one(g, MULT))
    ok &= out.values["e"] == 1
    out = pushforward_mult(b, StructureElement(g, MULT, {"1": x_laurent((-1,))}))
    ok &= out.values["e"] == 1
    z = StructureElement(g, MULT, {"e": LaurentPolynomial.exp((1,)), "1": LaurentPolynomial.exp((-1,))})
    out = pushforward_mult(b, z)
    ok &= out.values["e"] == LaurentPolynomial.exp((1,)) + 1 + LaurentPolynomial.exp((-1,))
    out = pushforward_add(b, StructureElement.one(g, ADD))
    ok &= out.values["e"].is_zero()
    report(bool(ok), "criterion 3: rank-1 push-forward identities, exact")


@pytest.fixture(scope="module")
def oracle_suite_outputs(oracle_bundles):
    rng = Random(20240802)
    outputs = []
    for label, b in oracle_bundles:
        for z in member_suite(b, rng, 50):
            outputs.append((label, b, z, pushforward_mult(b, z, unsafe=True)))
    return outputs


def test_criterion_4_oracle_equivalence(oracle_suite_outputs):
    failures = 0
    for label, b, z, fast in oracle_suite_outputs:
        if fast != pushforward_mult_oracle(b, z):
            failures += 1
    report(
        failures == 0,
        f"criterion 4: fast push-forward vs denominator-clearing oracle, "
        f"{len(oracle_suite_outputs)} elements, {failures} failures",
    )


def test_criterion_5_output_membership(oracle_suite_outputs):
    failures = sum(0 if check_membership(out).ok else 1 for _, _, _, out in oracle_suite_outputs)
    report(
        failures == 0,
        f"criterion 5: output membership on quotient graphs, "
        f"{len(oracle_suite_outputs)} outputs, {failures} failures",
    )


def test_criterion_6_projection_formula(oracle_bundles):
    rng = Random(20240803)
    failures = 0
    total = 0
    for label, b in oracle_bundles:
        triv = Monodromy.trivial(b.quotient)
        members = member_suite(b, rng, 10)
        quotient_members = [
            random_member(b.quotient, triv, MULT, rng, pieces=1) for _ in range(10)
        ]
        for _ in range(100):
            z = members[rng.randrange(len(members))]
            zq = quotient_members[rng.randrange(len(quotient_members))]
            total += 1
            if not projection_check(b, zq, z, unsafe=True):
                failures += 1
    report(failures == 0, f"criterion 6: projection formula, {total} pairs, {failures} failures")


def test_criterion_7_push_pull_laws():
    rs = build_root_system("A", 2)
    g = bruhat_graph(rs)
    xi = weyl_monodromy(rs, g)
    b1 = matching_bundle(g, xi, right_matching(rs, g, 1))
    b2 = matching_bundle(g, xi, right_matching(rs, g, 2))
    for b in (b1, b2):
        b.require_valid()
        assert b.compatibility().ok and b.regularity().ok
    rng = Random(20240804)
    failures = 0
    for _ in range(50):
        z = random_member(g, xi, MULT, rng)
        d1 = push_pull(b1, z, unsafe=True)
        d2 = push_pull(b2, z, unsafe=True)
        if push_pull(b1, d1, unsafe=True) != d1:
            failures += 1
        if push_pull(b2, d2, unsafe=True) != d2:
            failures += 1
        lhs = push_pull(b1, push_pull(b2, d1, unsafe=True), unsafe=True)
        rhs = push_pull(b2, push_pull(b1, push_pull(b2, z, unsafe=True), unsafe=True), unsafe=True)
        if lhs != rhs:
            failures += 1
    report(failures == 0, f"criterion 7: push-pull laws on 50 members, {failures} failures")


def test_criterion_8_chern_lemmas():
    rs = build_root_system("A", 2)
    b = weyl_fibration(rs, [1])
    g, xi = b.graph, b.monodromy
    rng = Random(20240805)
    failures = 0
    for _ in range(20):
        q = random_laurent(rng, 2)
        d = rng.randint(0, 4)
        lhs = chern_localized(characteristic_map(g, xi, q, MULT), d, unsafe=True)
        rhs = characteristic_map(g, xi, chern_ring_map(q, d), TRUNC(d))
        if lhs != rhs:
            failures += 1
    triv = Monodromy.trivial(b.quotient)
    for _ in range(20):
        zq = random_member(b.quotient, triv, MULT, rng)
        lhs = untwisted_pullback(b, chern_localized(zq, 3, unsafe=True))
        rhs = chern_localized(untwisted_pullback(b, zq), 3, unsafe=True)
        if lhs != rhs:
            failures += 1
    for _ in range(20):
        lam = random_vector(rng, 2)
        if all(c == 0 for c in lam):
            lam = (1, 0)
        z = random_member(g, xi, MULT, rng) * x_laurent(lam)
        c = chern_localized(z, 3, unsafe=True)
        if any(v.constant_coefficient() != 0 for v in c.values.values()):
            failures += 1
    report(failures == 0, f"criterion 8: Chern lemmas, 60 random checks, {failures} failures")


def test_criterion_9_riemann_roch_exact(rr_matrix):
    rng = Random(20240806)
    failures = 0
    total = 0
    for label, b in rr_matrix:
        elements = member_suite(b, rng, 10)
        for z in elements:
            for degree in (1, 2, 3, 4):
                total += 1
                if not rr_check(b, z, degree, EXACT, unsafe=True).ok:
                    failures += 1
    report(
        failures == 0,
        f"criterion 9: Riemann-Roch exact convention, {total} checks, {failures} mismatches",
    )


def test_criterion_10_convention_audit():
    b = weyl_fibration(build_root_system("A", 1), [1])
    one = StructureElement.one(b.graph, MULT)
    paper = rr_check(b, one, 1, PAPER_STATED)
    flipped = rr_check(b, one, 1, SIGN_FLIPPED)
    pv = paper.per_class["e"]
    fv = flipped.per_class["e"]
    ok = (
        pv.first_mismatch is not None
        and pv.first_mismatch["degree"] == 0
        and pv.first_mismatch["lhs"] == [["-1", [0]]]
        and pv.first_mismatch["rhs"] == [["1", [0]]]
        and fv.agree_through_degree == 0
        and fv.first_mismatch is not None
        and fv.first_mismatch["degree"] == 1
    )
    report(ok, "criterion 10: convention audit on the rank-1 bundle")


def test_criterion_11_n_set_lengths(rr_matrix):
    failures = 0
    total = 0
    for label, b in rr_matrix:
        data = compute_fiber_data(b)
        by_len = {v: (0 if v == "e" else len(v)) for v in b.graph.vertices}
        for members in b.members.values():
            base_len = min(by_len[y] for y in members)
            for y in members:
                total += 1
                if len(data[y].n_set) != by_len[y] - base_len:
                    failures += 1
    report(
        failures == 0,
        f"criterion 11: negated-label count equals coset length, {total} vertices, "
        f"{failures} failures",
    )


def test_criterion_12_cli_determinism(tmp_path):
    runner = CliRunner()
    emit = ["bruhat", "--type", "A", "--rank", "2", "--parabolic", "1", "--emit", "bundle"]
    first = runner.invoke(cli_main, emit, catch_exceptions=False)
    second = runner.invoke(cli_main, emit, catch_exceptions=False)
    ok = first.exit_code == 0 and first.output == second.output
    bundle_path = tmp_path / "bundle.json"
    bundle_path.write_text(first.output, encoding="utf-8")
    element = {
        "flavor": "mult",
        "values": {v: [{"coeff": "1", "exp": [0, 0]}] for v in json.loads(first.output)["graph"]["vertices"]},
    }
    element_path = tmp_path / "one.json"
    element_path.write_text(json.dumps(element), encoding="utf-8")
    rr_args = [
        "rr", "--bundle", str(bundle_path), "--element", str(element_path),
        "--degree", "2", "--convention", "exact",
    ]
    r1 = runner.invoke(cli_main, rr_args, catch_exceptions=False)
    r2 = runner.invoke(cli_main, rr_args, catch_exceptions=False)
    ok = ok and r1.exit_code == 0 and r1.output == r2.output
    report(bool(ok), "criterion 12: byte-identical CLI output across repeated runs")
