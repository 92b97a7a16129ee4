"""Finite root systems and Weyl groups from Cartan matrices.

The lattice is the root lattice with the simple roots as standard basis,
so every simple root is a basis vector and all real roots are primitive.
Weyl elements are stored as integer matrices; the group is enumerated by
breadth-first closure over the simple reflections, which also assigns
every element its shortlex-minimal reduced word as a vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NotFiniteType, SchemaError
from .fibration import FiberBundle, FiberIso
from .graphs import EquivalenceRelation, MomentGraph, Monodromy, SpecialMatching
from .rings import LatticeAutomorphism, Vec, _int_det


@dataclass(frozen=True)
class CartanMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise SchemaError("Cartan matrix is not square")
            if row[i] != 2:
                raise SchemaError("diagonal entries must equal 2")
            for j, a in enumerate(row):
                if i != j and a > 0:
                    raise SchemaError("off-diagonal entries must be nonpositive")
                if i != j and (a == 0) != (self.rows[j][i] == 0):
                    raise SchemaError("zero pattern must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_finite_type(self) -> bool:
        """All principal minors positive (the finite-type criterion)."""
        n = self.rank
        for size in range(1, n + 1):
            for subset in _subsets(n, size):
                sub = [[self.rows[i][j] for j in subset] for i in subset]
                if _int_det(sub) <= 0:
                    return False
        return True


def _subsets(n: int, size: int):
    def rec(start, chosen):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for i in range(start, n):
            yield from rec(i + 1, chosen + [i])

    yield from rec(0, [])


#: rank-indexed Cartan matrices for the supported desk-scale types
CATALOG: dict[tuple[str, int], tuple[tuple[int, ...], ...]] = {
    ("A", 1): ((2,),),
    ("A", 2): ((2, -1), (-1, 2)),
    ("A", 3): ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    ("A", 4): ((2, -1, 0, 0), (-1, 2, -1, 0), (0, -1, 2, -1), (0, 0, -1, 2)),
    ("B", 2): ((2, -2), (-1, 2)),
    ("B", 3): ((2, -1, 0), (-1, 2, -1), (0, -2, 2)),
    ("C", 3): ((2, -1, 0), (-1, 2, -2), (0, -1, 2)),
    ("D", 4): ((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, 0), (0, -1, 0, 2)),
    ("G", 2): ((2, -3), (-1, 2)),
}


def cartan_matrix(type_letter: str, rank: int) -> CartanMatrix:
    key = (type_letter.upper(), rank)
    if key not in CATALOG:
        supported = ", ".join(f"{t}{r}" for t, r in sorted(CATALOG))
        raise NotFiniteType(f"unsupported type {type_letter}{rank}; supported: {supported}")
    return CartanMatrix(CATALOG[key])


@dataclass(frozen=True)
class WeylElement:
    matrix: LatticeAutomorphism
    word: str  # shortlex-minimal reduced word over 1-based generator digits
    length: int

    def act(self, v: Vec) -> Vec:
        return self.matrix.apply(v)

    @property
    def vertex_id(self) -> str:
        return self.word if self.word else "e"


class RootSystem:
    """Positive roots and reflections of a finite-type Cartan matrix."""

    def __init__(self, cartan: CartanMatrix):
        if not cartan.is_finite_type():
            raise NotFiniteType("Cartan matrix is not of finite type")
        self.cartan = cartan
        self.rank = cartan.rank
        n = self.rank
        self.simple_reflections = tuple(
            LatticeAutomorphism.from_rows(
                [
                    [(1 if k == j else 0) - (cartan.rows[i][j] if k == i else 0) for j in range(n)]
                    for k in range(n)
                ]
            )
            for i in range(n)
        )
        self.simple_roots = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.pos_roots, self.reflections = self._close_roots()
        self._weyl: list[WeylElement] | None = None

    def _close_roots(self):
        reflections: dict[Vec, LatticeAutomorphism] = {}
        frontier = []
        for i, alpha in enumerate(self.simple_roots):
            reflections[alpha] = self.simple_reflections[i]
            frontier.append(alpha)
        seen = set(reflections)
        while frontier:
            nxt = []
            for beta in frontier:
                for i, s in enumerate(self.simple_reflections):
                    img = s.apply(beta)
                    pos = img if all(c >= 0 for c in img) else tuple(-c for c in img)
                    if pos not in seen:
                        seen.add(pos)
                        reflections[pos] = s.compose(reflections[beta]).compose(s)
                        nxt.append(pos)
                        if len(seen) > 10000:
                            raise NotFiniteType("root closure does not terminate")
            frontier = nxt
        pos_roots = tuple(sorted(seen))
        return pos_roots, reflections

    def weyl_elements(self) -> list[WeylElement]:
        """Whole Weyl group in shortlex order of reduced words."""
        if self._weyl is not None:
            return self._weyl
        n = self.rank
        ident = LatticeAutomorphism.identity(n)
        found = {ident.matrix: WeylElement(ident, "", 0)}
        frontier = [found[ident.matrix]]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(n):
                    m = w.matrix.compose(self.simple_reflections[i])  # append on the right
                    if m.matrix not in found:
                        elem = WeylElement(m, w.word + str(i + 1), w.length + 1)
                        found[m.matrix] = elem
                        nxt.append(elem)
            nxt.sort(key=lambda e: e.word)
            frontier = nxt
        self._weyl = sorted(found.values(), key=lambda e: (e.length, e.word))
        return self._weyl

    def element_by_matrix(self) -> dict:
        return {w.matrix.matrix: w for w in self.weyl_elements()}

    def length_of(self, m: LatticeAutomorphism) -> int:
        """Count of positive roots sent negative."""
        return sum(1 for beta in self.pos_roots if any(c < 0 for c in m.apply(beta)))


@lru_cache(maxsize=None)
def build_root_system(type_letter: str, rank: int) -> RootSystem:
    return RootSystem(cartan_matrix(type_letter, rank))


def root_system_from_matrix(rows) -> RootSystem:
    return RootSystem(CartanMatrix(tuple(tuple(int(x) for x in row) for row in rows)))


# ---------------------------------------------------------------------------
# Bruhat graphs


def bruhat_graph(rs: RootSystem) -> MomentGraph:
    """Vertices the Weyl group; edges w -> s_beta w for length-increasing
    reflections, labelled by beta; covers are the length-1 steps."""
    elements = rs.weyl_elements()
    lookup = rs.element_by_matrix()
    edges = {}
    covers = []
    for w in elements:
        for beta in rs.pos_roots:
            w2 = lookup[rs.reflections[beta].compose(w.matrix).matrix]
            if w2.length > w.length:
                edges[(w.vertex_id, w2.vertex_id)] = beta
                if w2.length == w.length + 1:
                    covers.append((w.vertex_id, w2.vertex_id))
    return MomentGraph(rs.rank, [w.vertex_id for w in elements], covers, edges)


def minimal_coset_representatives(rs: RootSystem, theta) -> list[WeylElement]:
    """w with w(alpha_i) positive for every i in theta (1-based indices)."""
    idx = sorted({int(i) for i in theta})
    for i in idx:
        if not 1 <= i <= rs.rank:
            raise SchemaError(f"simple-root index {i} out of range")
    out = []
    for w in rs.weyl_elements():
        if all(all(c >= 0 for c in w.act(rs.simple_roots[i - 1])) for i in idx):
            out.append(w)
    return out


def coset_relation(rs: RootSystem, theta) -> EquivalenceRelation:
    """Left cosets w W_theta as vertex classes of the full Bruhat graph."""
    idx = sorted({int(i) for i in theta})
    sub = _subgroup(rs, idx)
    lookup = rs.element_by_matrix()
    blocks = {}
    for w in rs.weyl_elements():
        block = frozenset(lookup[w.matrix.compose(u).matrix].vertex_id for u in sub)
        blocks[block] = None
    return EquivalenceRelation.from_blocks(blocks)


def _subgroup(rs: RootSystem, idx) -> list[LatticeAutomorphism]:
    gens = [rs.simple_reflections[i - 1] for i in idx]
    ident = LatticeAutomorphism.identity(rs.rank)
    found = {ident.matrix: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m.compose(g)
                if prod.matrix not in found:
                    found[prod.matrix] = prod
                    nxt.append(prod)
        frontier = nxt
    return list(found.values())


def parabolic_graph(rs: RootSystem, theta) -> MomentGraph:
    """Directly built graph on the minimal coset representatives."""
    reps = minimal_coset_representatives(rs, theta)
    rep_ids = {w.matrix.matrix: w.vertex_id for w in reps}
    lookup = rs.element_by_matrix()
    idx = sorted({int(i) for i in theta})
    sub = _subgroup(rs, idx)

    def rep_of(m: LatticeAutomorphism) -> WeylElement:
        best = None
        for u in sub:
            cand = lookup[m.compose(u).matrix]
            if best is None or cand.length < best.length:
                best = cand
        return best

    edges = {}
    covers = []
    for w in reps:
        for beta in rs.pos_roots:
            target = rep_of(rs.reflections[beta].compose(w.matrix))
            if target.matrix.matrix not in rep_ids or target.length <= w.length:
                continue
            key = (w.vertex_id, target.vertex_id)
            if key in edges and edges[key] != beta:
                raise SchemaError(f"two labels for parabolic edge {key}")
            edges[key] = beta
            if target.length == w.length + 1:
                covers.append(key)
    return MomentGraph(rs.rank, list(rep_ids.values()), covers, edges)


# ---------------------------------------------------------------------------
# monodromy, fibrations, matchings


def weyl_monodromy(rs: RootSystem, g: MomentGraph) -> Monodromy:
    """xi_w = the action of w itself, for any graph with Weyl-word vertices."""
    by_id = {w.vertex_id: w.matrix for w in rs.weyl_elements()}
    return Monodromy({v: by_id[v] for v in g.vertices})


def weyl_fibration(rs: RootSystem, theta) -> FiberBundle:
    """Coset bundle of the Bruhat graph with the standard Weyl monodromy.

    Fiber maps act by the inverse of the minimal coset representative;
    classes are named by that representative.
    """
    g = bruhat_graph(rs)
    relation = coset_relation(rs, theta)
    lookup = rs.element_by_matrix()
    by_id = {w.vertex_id: w for w in rs.weyl_elements()}

    def min_rep(block: tuple[str, ...]) -> WeylElement:
        return min((by_id[v] for v in block), key=lambda w: w.length)

    names = {block: min_rep(block).vertex_id for block in relation.classes}
    to_base = {}
    base_name = None
    for block in relation.classes:
        rep = min_rep(block)
        name = names[block]
        if rep.length == 0:
            base_name = name
        inv = rep.matrix.inverse()
        vmap = {v: lookup[inv.compose(by_id[v].matrix).matrix].vertex_id for v in block}
        to_base[name] = FiberIso(vmap, inv)
    xi = weyl_monodromy(rs, g)
    return FiberBundle(
        g,
        relation,
        base_name,
        to_base,
        xi,
        class_name=lambda block: names[block],
    )


def right_matching(rs: RootSystem, g: MomentGraph, i: int) -> SpecialMatching:
    """Right multiplication by the i-th simple reflection (1-based)."""
    lookup = rs.element_by_matrix()
    by_id = {w.vertex_id: w for w in rs.weyl_elements()}
    s = rs.simple_reflections[i - 1]
    pairing = {v: lookup[by_id[v].matrix.compose(s).matrix].vertex_id for v in g.vertices}
    return SpecialMatching(pairing)
