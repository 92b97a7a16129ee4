"""Moment graphs, morphisms, monodromies, compatible relations and quotients.

A moment graph is a finite poset with directed edges labelled by nonzero
lattice vectors, edge direction respecting the order.  The order is
supplied as cover pairs; its reflexive-transitive closure is computed
once and cached.  All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IncompatibleRelation, NotSpecialMatching, RankMismatch
from .rings import (
    LatticeAutomorphism,
    Vec,
    integer_multiple,
    is_zero_vec,
    vec_neg,
    vec_sub,
)


@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, message: str):
        self.violations.append(Violation(axiom, message))

    def extend(self, other: "ValidationReport"):
        self.violations.extend(other.violations)

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return "ValidationReport(" + "; ".join(f"{v.axiom}: {v.message}" for v in self.violations) + ")"


class MomentGraph:
    """Finite labelled directed graph over a partially ordered vertex set."""

    def __init__(self, rank: int, vertices, covers, edges: dict[tuple[str, str], Vec]):
        self.rank = rank
        self.vertices = tuple(sorted(vertices))
        vset = set(self.vertices)
        for a, b in covers:
            if a not in vset or b not in vset:
                raise ValueError(f"cover ({a},{b}) uses unknown vertex")
        self.covers = tuple(sorted((a, b) for a, b in covers))
        self.edges = {}
        for (t, h), lab in edges.items():
            if t not in vset or h not in vset:
                raise ValueError(f"edge ({t},{h}) uses unknown vertex")
            lab = tuple(int(x) for x in lab)
            if len(lab) != rank:
                raise RankMismatch(f"edge ({t},{h}) label has wrong length")
            self.edges[(t, h)] = lab
        self._up = self._closure()
        self._strict_covers = None

    def _closure(self) -> dict[str, frozenset[str]]:
        """Reflexive-transitive closure of the cover relation (reachability)."""
        succ = {v: set() for v in self.vertices}
        for a, b in self.covers:
            succ[a].add(b)
        up: dict[str, set[str]] = {}

        def visit(v: str) -> set[str]:
            if v in up:
                return up[v]
            up[v] = {v}  # placeholder guards against cycles in bad input
            reach = {v}
            for w in succ[v]:
                reach |= visit(w)
            up[v] = reach
            return reach

        stack = list(self.vertices)
        for v in stack:
            visit(v)
        return {v: frozenset(s) for v, s in up.items()}

    # -- order queries -----------------------------------------------------

    def leq(self, v: str, w: str) -> bool:
        return w in self._up[v]

    def less(self, v: str, w: str) -> bool:
        return v != w and w in self._up[v]

    def comparable(self, v: str, w: str) -> bool:
        return self.leq(v, w) or self.leq(w, v)

    def upset(self, v: str) -> frozenset[str]:
        return self._up[v]

    def interval(self, v: str, w: str) -> frozenset[str]:
        return frozenset(u for u in self._up[v] if w in self._up[u])

    def covers_of(self) -> frozenset[tuple[str, str]]:
        """Covering pairs of the closure (transitive reduction)."""
        if self._strict_covers is None:
            pairs = set()
            for v in self.vertices:
                for w in self._up[v]:
                    if w == v:
                        continue
                    if not any(u != v and u != w and w in self._up[u] for u in self._up[v]):
                        pairs.add((v, w))
            self._strict_covers = frozenset(pairs)
        return self._strict_covers

    def minimal_vertices(self) -> tuple[str, ...]:
        below = {w for v in self.vertices for w in self._up[v] if w != v}
        return tuple(v for v in self.vertices if v not in below)

    def maximal_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self._up[v] == frozenset({v}))

    def height(self) -> dict[str, int]:
        """Longest cover-path length from a minimal vertex."""
        order = sorted(self.vertices, key=lambda v: len(self._up[v]), reverse=True)
        h = {v: 0 for v in self.vertices}
        succ = {v: [] for v in self.vertices}
        for a, b in self.covers:
            succ[a].append(b)
        for v in order:  # decreasing upset size = linear extension
            for w in succ[v]:
                h[w] = max(h[w], h[v] + 1)
        return h

    # -- edge queries --------------------------------------------------------

    def sorted_edges(self) -> list[tuple[str, str, Vec]]:
        return [(t, h, self.edges[(t, h)]) for t, h in sorted(self.edges)]

    def neighbors(self, v: str) -> list[tuple[str, Vec, bool]]:
        """(other endpoint, label, outgoing?) over all edges at v."""
        out = []
        for (t, h), lab in self.edges.items():
            if t == v:
                out.append((h, lab, True))
            elif h == v:
                out.append((t, lab, False))
        return sorted(out)

    def undirected_label(self, v: str, w: str):
        return self.edges.get((v, w)) or self.edges.get((w, v))

    def full_subgraph(self, keep) -> "MomentGraph":
        keep = set(keep)
        return MomentGraph(
            self.rank,
            keep,
            [(a, b) for a, b in self.covers if a in keep and b in keep],
            {(t, h): lab for (t, h), lab in self.edges.items() if t in keep and h in keep},
        )

    def __eq__(self, other):
        if not isinstance(other, MomentGraph):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.vertices == other.vertices
            and self.covers == other.covers
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"MomentGraph(rank={self.rank}, |V|={len(self.vertices)}, |E|={len(self.edges)})"


@dataclass(frozen=True)
class GraphMorphism:
    """Vertex map plus a lattice automorphism attached to every source vertex."""

    vertex_map: dict[str, str]
    lattice_maps: dict[str, LatticeAutomorphism]

    def vmap(self, v: str) -> str:
        return self.vertex_map[v]

    def lmap(self, v: str) -> LatticeAutomorphism:
        return self.lattice_maps[v]

    @staticmethod
    def constant_lattice(vertex_map: dict[str, str], phi: LatticeAutomorphism) -> "GraphMorphism":
        return GraphMorphism(dict(vertex_map), {v: phi for v in vertex_map})


@dataclass(frozen=True)
class Monodromy:
    """Vertex-indexed lattice automorphisms."""

    maps: dict[str, LatticeAutomorphism]

    def __call__(self, v: str) -> LatticeAutomorphism:
        return self.maps[v]

    @staticmethod
    def trivial(g: MomentGraph) -> "Monodromy":
        ident = LatticeAutomorphism.identity(g.rank)
        return Monodromy({v: ident for v in g.vertices})


@dataclass(frozen=True)
class EquivalenceRelation:
    """Partition of the vertex set into disjoint nonempty blocks."""

    classes: tuple[tuple[str, ...], ...]

    @staticmethod
    def from_blocks(blocks) -> "EquivalenceRelation":
        return EquivalenceRelation(tuple(sorted(tuple(sorted(b)) for b in blocks)))

    def class_of(self) -> dict[str, tuple[str, ...]]:
        return {v: block for block in self.classes for v in block}


@dataclass(frozen=True)
class SpecialMatching:
    """Involution pairing each vertex with a covering partner."""

    pairing: dict[str, str]

    def __call__(self, v: str) -> str:
        return self.pairing[v]


# ---------------------------------------------------------------------------
# validation


def validate_graph(g: MomentGraph) -> ValidationReport:
    """Check the moment-graph axioms; an empty report means valid."""
    report = ValidationReport()
    for v in g.vertices:
        for w in g.upset(v):
            if w != v and v in g.upset(w):
                report.add("MG1", f"order not antisymmetric: {v} <= {w} <= {v}")
    for (t, h), lab in sorted(g.edges.items()):
        if is_zero_vec(lab):
            report.add("MG2", f"edge {t}->{h} has zero label")
        if t == h:
            report.add("MG3", f"self-loop at {t}")
        elif not g.less(t, h):
            report.add("MG3", f"edge {t}->{h} does not respect the order")
    return report


def validate_morphism(f: GraphMorphism, g: MomentGraph, g2: MomentGraph) -> ValidationReport:
    """Check the morphism axioms for f : g -> g2 (same lattice)."""
    report = ValidationReport()
    if g.rank != g2.rank:
        report.add("MR1", "graphs live on lattices of different rank")
        return report
    for v in g.vertices:
        if v not in f.vertex_map:
            report.add("MR1", f"vertex {v} has no image")
            return report
        if f.vmap(v) not in set(g2.vertices):
            report.add("MR1", f"image {f.vmap(v)} of {v} is not a vertex")
            return report
        if v not in f.lattice_maps:
            report.add("MR2", f"vertex {v} has no lattice map")
            return report
    for v in g.vertices:
        for w in g.upset(v):
            if not g2.leq(f.vmap(v), f.vmap(w)):
                report.add("MR1", f"not order preserving on {v} <= {w}")
    for (t, h), lab in sorted(g.edges.items()):
        ft, fh = f.vmap(t), f.vmap(h)
        if ft == fh:
            continue
        lab2 = g2.undirected_label(ft, fh)
        if lab2 is None:
            report.add("MR1", f"edge {t}->{h} maps to the non-edge {ft},{fh}")
            continue
        img = f.lmap(t).apply(lab)
        if img != lab2 and img != vec_neg(lab2):
            report.add("MR2a", f"label of {t}->{h} does not map to +-label of {ft}->{fh}")
        for i in range(g.rank):
            basis = tuple(int(i == j) for j in range(g.rank))
            d = vec_sub(f.lmap(t).apply(basis), f.lmap(h).apply(basis))
            if integer_multiple(d, lab2) is None:
                report.add(
                    "MR2b",
                    f"lattice maps at {t},{h} differ by more than multiples of the image label",
                )
                break
    return report


def check_monodromy(xi: Monodromy, g: MomentGraph) -> ValidationReport:
    """Every edge difference xi_v - xi_w must land in (label)*Z."""
    report = ValidationReport()
    for v in g.vertices:
        if v not in xi.maps:
            report.add("MON", f"vertex {v} has no automorphism")
            return report
    for (t, h), lab in sorted(g.edges.items()):
        for i in range(g.rank):
            basis = tuple(int(i == j) for j in range(g.rank))
            d = vec_sub(xi(t).apply(basis), xi(h).apply(basis))
            if integer_multiple(d, lab) is None:
                report.add("MON", f"edge {t}->{h}: difference on basis vector {i} not in label*Z")
    return report


def check_relation(r: EquivalenceRelation, g: MomentGraph) -> ValidationReport:
    """Convexity plus the unique-lift-with-equal-label property."""
    report = ValidationReport()
    seen: set[str] = set()
    for block in r.classes:
        for v in block:
            if v in seen:
                report.add("EQV0", f"vertex {v} occurs in two classes")
            seen.add(v)
    if seen != set(g.vertices):
        report.add("EQV0", "classes do not partition the vertex set")
        return report
    cls = r.class_of()
    for block in r.classes:
        for v in block:
            for w in block:
                if v != w and g.less(v, w):
                    outside = [u for u in g.interval(v, w) if cls[u] is not block]
                    if outside:
                        report.add("EQV1", f"interval [{v},{w}] leaves the class at {outside[0]}")
    for (v1, w1), lab in sorted(g.edges.items()):
        if cls[v1] is cls[w1]:
            continue
        for v2 in cls[v1]:
            partners = [w2 for w2 in cls[w1] if (v2, w2) in g.edges]
            if len(partners) != 1:
                report.add(
                    "EQV2",
                    f"edge {v1}->{w1}: vertex {v2} has {len(partners)} lifts into the head class",
                )
                continue
            if g.edges[(v2, partners[0])] != lab:
                report.add("EQV2", f"lift {v2}->{partners[0]} of {v1}->{w1} changes the label")
    return report


# ---------------------------------------------------------------------------
# quotients


def default_class_name(members: tuple[str, ...]) -> str:
    return "|".join(members)


def build_quotient(
    g: MomentGraph, r: EquivalenceRelation, class_name=default_class_name
) -> tuple[MomentGraph, GraphMorphism]:
    """Quotient graph and projection morphism for a compatible relation.

    Edges between equivalent vertices are dropped; the quotient order is
    the transitive closure of the surviving edges.
    """
    rep = check_relation(r, g)
    if not rep.ok:
        raise IncompatibleRelation("relation is not compatible with the graph", report=rep)
    names = {block: class_name(block) for block in r.classes}
    if len(set(names.values())) != len(names):
        raise IncompatibleRelation("class naming is not injective")
    cls = r.class_of()
    qedges: dict[tuple[str, str], Vec] = {}
    for (t, h), lab in sorted(g.edges.items()):
        bt, bh = cls[t], cls[h]
        if bt is bh:
            continue
        key = (names[bt], names[bh])
        if key in qedges and qedges[key] != lab:
            raise IncompatibleRelation(f"classes {key} joined by edges with different labels")
        qedges[key] = lab
    quotient = MomentGraph(g.rank, names.values(), list(qedges), qedges)
    bad = validate_graph(quotient)
    if not bad.ok:
        raise IncompatibleRelation("quotient is not a moment graph", report=bad)
    ident = LatticeAutomorphism.identity(g.rank)
    proj = GraphMorphism({v: names[cls[v]] for v in g.vertices}, {v: ident for v in g.vertices})
    return quotient, proj


def matching_relation(m: SpecialMatching, g: MomentGraph) -> EquivalenceRelation:
    """Two-element classes {v, M(v)} of a special matching.

    Validates the matching axioms (involution, covering, lifting) and the
    edge hypotheses: cross edges map to edges with equal labels.
    """
    pairing = m.pairing
    if set(pairing) != set(g.vertices):
        raise NotSpecialMatching("pairing is not defined on the whole vertex set")
    covers = g.covers_of()
    for v in g.vertices:
        w = pairing[v]
        if w == v or pairing[w] != v:
            raise NotSpecialMatching(f"pairing is not a fixed-point-free involution at {v}")
        if (v, w) not in covers and (w, v) not in covers:
            raise NotSpecialMatching(f"{v} and its partner {w} are not a covering pair")
    for v, w in covers:
        if pairing[v] != w and not g.leq(pairing[v], pairing[w]):
            raise NotSpecialMatching(f"lifting fails on the cover {v} -| {w}")
    for (t, h), lab in sorted(g.edges.items()):
        if pairing[t] == h:
            continue
        key = (pairing[t], pairing[h])
        if key not in g.edges:
            raise NotSpecialMatching(f"edge {t}->{h} has no matched edge {key[0]}->{key[1]}")
        if g.edges[key] != lab:
            raise NotSpecialMatching(f"matched edge of {t}->{h} changes the label")
    relation = EquivalenceRelation.from_blocks({frozenset((v, pairing[v])) for v in g.vertices})
    rep = check_relation(relation, g)
    if not rep.ok:
        raise NotSpecialMatching("induced relation is not compatible", report=rep)
    return relation


def check_isomorphism(f: GraphMorphism, g: MomentGraph, g2: MomentGraph) -> bool:
    """True iff f is a valid morphism, bijective on vertices and edges."""
    if not validate_morphism(f, g, g2).ok:
        return False
    images = set(f.vertex_map.values())
    if len(images) != len(g.vertices) or images != set(g2.vertices):
        return False
    for t2, h2 in g2.edges:
        preimages = [
            (t, h) for (t, h) in g.edges if f.vmap(t) == t2 and f.vmap(h) == h2
        ]
        if len(preimages) != 1:
            return False
    # every source edge must survive (no collapses under a bijection)
    return all(f.vmap(t) != f.vmap(h) for (t, h) in g.edges)
