"""Constructions on finite simplicial sets.

Standard spaces, products by the shuffle description of nondegenerate
cells, wedge/smash/suspension for pointed spaces, pushouts along
levelwise injections, skeleta, diagonals of bisimplicial sets, and the
combinatorial invariants: components, fundamental groupoid and group,
chains and homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .complexes import ChainComplex, ChainMap, HomologyGroup, ValidationError, group_from_presentation, zero_complex
from .matrices import IntMatrix
from .simplicial import (
    BiSimplexRef,
    BisimplicialSet,
    SimplexRef,
    SimplicialMap,
    SimplicialSet,
    word_face,
    word_insert,
)


# ---------------------------------------------------------------------------
# standard spaces


def _subset_id(vs) -> str:
    return ".".join(str(v) for v in vs)


def _simplex_cells(n: int, include_top: bool, skip: tuple = ()) -> tuple:
    cells = {}
    faces = {}
    for size in range(1, n + 2):
        if size == n + 1 and not include_top:
            continue
        ids = []
        for vs in combinations(range(n + 1), size):
            if vs in skip:
                continue
            ids.append(_subset_id(vs))
            if size > 1:
                for i in range(size):
                    sub = vs[:i] + vs[i + 1 :]
                    faces[(_subset_id(vs), i)] = SimplexRef((), _subset_id(sub))
        if ids:
            cells[size - 1] = ids
    return cells, faces


def simplex(n: int) -> SimplicialSet:
    """The standard n-simplex; cells are the nonempty vertex subsets."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    cells, faces = _simplex_cells(n, include_top=True)
    return SimplicialSet(cells, faces)


def boundary(n: int) -> SimplicialSet:
    """The boundary of the n-simplex (empty for n = 0)."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    cells, faces = _simplex_cells(n, include_top=False)
    return SimplicialSet(cells, faces)


def horn(n: int, k: int) -> SimplicialSet:
    """The (n, k)-horn: all faces of the n-simplex except the k-th.

    For n = 0 this is the empty simplicial set.
    """
    if not (0 <= k <= n):
        raise ValueError("horn indices must satisfy 0 <= k <= n")
    opposite = tuple(v for v in range(n + 1) if v != k)
    cells, faces = _simplex_cells(n, include_top=False, skip=(opposite,))
    return SimplicialSet(cells, faces)


def point() -> SimplicialSet:
    """A pointed one-vertex space."""
    return SimplicialSet({0: ["*"]}, {}, pointed=True, basepoint="*")


def sphere(i: int) -> SimplicialSet:
    """The simplicial i-sphere: the i-simplex modulo its boundary, with a
    single nondegenerate cell in dimensions 0 and i."""
    if i < 0:
        raise ValueError("dimension must be nonnegative")
    if i == 0:
        return SimplicialSet({0: ["*", "p"]}, {}, pointed=True, basepoint="*")
    collapsed = SimplexRef(tuple(range(i - 2, -1, -1)), "*")
    faces = {("c", j): collapsed for j in range(i + 1)}
    return SimplicialSet({0: ["*"], i: ["c"]}, faces, pointed=True, basepoint="*")


def interval_pointed() -> SimplicialSet:
    """The 1-simplex with a disjoint basepoint added."""
    faces = {("01", 0): SimplexRef((), "1"), ("01", 1): SimplexRef((), "0")}
    return SimplicialSet({0: ["*", "0", "1"], 1: ["01"]}, faces, pointed=True, basepoint="*")


def standard_space(kind: str, n: int = 0, k: int = 0) -> SimplicialSet:
    """Dispatcher over the named standard spaces."""
    if kind == "simplex":
        return simplex(n)
    if kind == "boundary":
        return boundary(n)
    if kind == "horn":
        return horn(n, k)
    if kind == "sphere":
        return sphere(n)
    if kind == "point":
        return point()
    if kind == "interval_pointed":
        return interval_pointed()
    raise ValueError("unknown standard space %r" % kind)


# ---------------------------------------------------------------------------
# products


def _compact(ref: SimplexRef) -> str:
    if not ref.word:
        return ref.base
    return "".join("s%d" % i for i in ref.word) + "." + ref.base


def pair_id(ra: SimplexRef, rb: SimplexRef) -> str:
    return "(%s|%s)" % (_compact(ra), _compact(rb))


def strip_common(wa: tuple, wb: tuple):
    """Extract the shared degeneracies of two words: returns
    (word, wa0, wb0) with set(wa0) and set(wb0) disjoint, such that
    applying `word` diagonally to the stripped pair recovers the input."""
    stripped = []
    while True:
        common = set(wa) & set(wb)
        if not common:
            break
        j = max(common)
        wa, ra = word_face(wa, j)
        wb, rb = word_face(wb, j)
        if ra is not None or rb is not None:
            raise AssertionError("stripping a shared degeneracy must cancel")
        stripped.append(j)
    word = ()
    for j in reversed(stripped):
        word = word_insert(word, j)
    return word, wa, wb


def product_pairs(x: SimplicialSet, y: SimplicialSet) -> dict:
    """cell id -> (ref into x, ref into y), for every nondegenerate cell
    of product(x, y), keyed in the product's declaration order."""
    entries = []
    for p in x.dims():
        for q in y.dims():
            for xi, xc in enumerate(x.cells(p)):
                for yi, yc in enumerate(y.cells(q)):
                    for n in range(max(p, q), p + q + 1):
                        for wa in combinations(range(n - 1, -1, -1), n - p):
                            rest = [t for t in range(n - 1, -1, -1) if t not in wa]
                            for wb in combinations(rest, n - q):
                                entries.append((n, p, xi, q, yi, wa, wb, xc, yc))
    entries.sort()
    out = {}
    for n, p, xi, q, yi, wa, wb, xc, yc in entries:
        ra, rb = SimplexRef(wa, xc), SimplexRef(wb, yc)
        out[pair_id(ra, rb)] = (n, ra, rb)
    return out


def product(x: SimplicialSet, y: SimplicialSet) -> SimplicialSet:
    """The categorical product.

    Nondegenerate n-cells are pairs of simplices (a, b) of dimension n
    whose degeneracy words share no index; faces are computed pairwise
    and renormalised by extracting common degeneracies.
    """
    cells = {}
    refs = {}
    for cid, (n, ra, rb) in product_pairs(x, y).items():
        cells.setdefault(n, []).append(cid)
        refs[cid] = (ra, rb)
    faces = {}
    for n, ids in cells.items():
        if n == 0:
            continue
        for cid in ids:
            ra, rb = refs[cid]
            for i in range(n + 1):
                fa = x.face(ra, i)
                fb = y.face(rb, i)
                word, wa0, wb0 = strip_common(fa.word, fb.word)
                base = pair_id(SimplexRef(wa0, fa.base), SimplexRef(wb0, fb.base))
                faces[(cid, i)] = SimplexRef(word, base)
    pointed = x.pointed and y.pointed
    bp = pair_id(SimplexRef((), x.basepoint), SimplexRef((), y.basepoint)) if pointed else None
    return SimplicialSet(cells, faces, pointed=pointed, basepoint=bp)


def product_pair_ref(x: SimplicialSet, y: SimplicialSet, ra: SimplexRef, rb: SimplexRef) -> SimplexRef:
    """The simplex of product(x, y) represented by an arbitrary pair."""
    word, wa0, wb0 = strip_common(ra.word, rb.word)
    return SimplexRef(word, pair_id(SimplexRef(wa0, ra.base), SimplexRef(wb0, rb.base)))


# ---------------------------------------------------------------------------
# pushouts along levelwise injections


class PushoutResult(NamedTuple):
    space: SimplicialSet
    from_x: SimplicialMap
    from_y: SimplicialMap


def pushout_inj(f: SimplicialMap, g: SimplicialMap) -> PushoutResult:
    """The pushout X u_A Y of X <-f- A -g-> Y.

    f must be a levelwise monomorphism (general coequalizers are out of
    scope); cells of the result are Y's cells plus the X-cells outside
    the image of f, with identifications pushed through g.  When Y is a
    point this computes the quotient X/A.
    """
    if f.source is not g.source and f.source._cells != g.source._cells:
        raise ValueError("pushout legs must share their source")
    if not f.is_levelwise_injective():
        raise ValueError("pushout requires the first leg to be a levelwise injection")
    a, x, y = f.source, f.target, g.target
    hit = {}
    for _, cell in a.all_cells():
        hit[f.cell_image(cell).base] = cell

    def translate(ref: SimplexRef) -> SimplexRef:
        """A simplex of X, rewritten as a simplex of the pushout."""
        if ref.base in hit:
            img = g(SimplexRef((), hit[ref.base]))
            word, base = img.word, "y:" + img.base
            for j in reversed(ref.word):
                word = word_insert(word, j)
            return SimplexRef(word, base)
        return SimplexRef(ref.word, "x:" + ref.base)

    cells = {}
    faces = {}
    for n in y.dims():
        cells.setdefault(n, []).extend("y:" + c for c in y.cells(n))
        for c in y.cells(n):
            for i in range(n + 1) if n else ():
                ref = y.stored_face(c, i)
                faces[("y:" + c, i)] = SimplexRef(ref.word, "y:" + ref.base)
    for n in x.dims():
        for c in x.cells(n):
            if c in hit:
                continue
            cells.setdefault(n, []).append("x:" + c)
            for i in range(n + 1) if n else ():
                faces[("x:" + c, i)] = translate(x.stored_face(c, i))
    pointed = y.pointed
    bp = "y:" + y.basepoint if pointed else None
    space = SimplicialSet(cells, faces, pointed=pointed, basepoint=bp)

    from_y = SimplicialMap(
        y, space, {c: SimplexRef((), "y:" + c) for _, c in y.all_cells()}, check=False
    )
    from_x = SimplicialMap(
        x, space, {c: translate(SimplexRef((), c)) for _, c in x.all_cells()}
    )
    for _, cell in a.all_cells():
        if from_x(f.cell_image(cell)) != from_y(g.cell_image(cell)):
            raise ValidationError("pushout square does not commute on %r" % cell)
    return PushoutResult(space, from_x, from_y)


def quotient(f: SimplicialMap) -> PushoutResult:
    """X/A for a levelwise injection f: A -> X."""
    pt = point()
    collapse = SimplicialMap(
        f.source, pt,
        {c: SimplexRef(tuple(range(n - 1, -1, -1)), "*") for n, c in f.source.all_cells()},
        check=False,
    )
    return pushout_inj(f, collapse)


class WedgeResult(NamedTuple):
    space: SimplicialSet
    inl: SimplicialMap
    inr: SimplicialMap


def wedge(x: SimplicialSet, y: SimplicialSet) -> WedgeResult:
    """One-point union of pointed spaces."""
    if not (x.pointed and y.pointed):
        raise ValueError("wedge requires pointed spaces")
    pt = point()
    to_x = SimplicialMap(pt, x, {"*": SimplexRef((), x.basepoint)}, check=False)
    to_y = SimplicialMap(pt, y, {"*": SimplexRef((), y.basepoint)}, check=False)
    space, from_x, from_y = pushout_inj(to_x, to_y)
    return WedgeResult(space, from_x, from_y)


class SmashResult(NamedTuple):
    space: SimplicialSet
    collapse: SimplicialMap  # product(x, y) -> smash


def smash(x: SimplicialSet, y: SimplicialSet) -> SmashResult:
    """(X x Y) / (X v Y) as a pointed simplicial set."""
    if not (x.pointed and y.pointed):
        raise ValueError("smash requires pointed spaces")
    prod = product(x, y)
    w, inl, inr = wedge(x, y)
    assignment = {}
    for n, cell in w.all_cells():
        if cell.startswith("y:"):
            ry = SimplexRef((), cell[2:])
            rx = SimplexRef(tuple(range(n - 1, -1, -1)), x.basepoint)
        else:
            rx = SimplexRef((), cell[2:])
            ry = SimplexRef(tuple(range(n - 1, -1, -1)), y.basepoint)
        assignment[cell] = product_pair_ref(x, y, rx, ry)
    include = SimplicialMap(w, prod, assignment)
    result = quotient(include)
    return SmashResult(result.space, result.from_x)


def suspension(x: SimplicialSet, i: int) -> SimplicialSet:
    """The i-fold suspension: smash with the i-sphere."""
    if not x.pointed:
        raise ValueError("suspension requires a pointed space")
    if i < 0:
        raise ValueError("suspension degree must be nonnegative")
    return smash(x, sphere(i)).space


def skeleton(x: SimplicialSet, n: int) -> SimplicialSet:
    """The subspace generated by nondegenerate cells of dimension <= n."""
    if n < 0:
        return SimplicialSet({}, {})
    cells = {m: list(x.cells(m)) for m in x.dims() if m <= n}
    faces = {}
    for m, ids in cells.items():
        if m == 0:
            continue
        for c in ids:
            for i in range(m + 1):
                faces[(c, i)] = x.stored_face(c, i)
    pointed = x.pointed
    return SimplicialSet(cells, faces, pointed=pointed,
                         basepoint=x.basepoint if pointed else None)


# ---------------------------------------------------------------------------
# bisimplicial sets and diagonals


def diag_id(hw: tuple, vw: tuple, base: str) -> str:
    h = "".join("s%d" % i for i in hw)
    v = "".join("s%d" % i for i in vw)
    return "d(%s;%s)%s" % (h, v, base)


def diagonal(b: BisimplicialSet) -> SimplicialSet:
    """Diagonal simplicial set: degree n is the (n, n)-level, with
    d_i = d_i^h d_i^v; nondegenerate cells are the bisimplices whose
    horizontal and vertical words share no index."""
    entries = []
    for (p, q) in b.bidegrees():
        for ci, cell in enumerate(b.cells(p, q)):
            for n in range(max(p, q), p + q + 1):
                for hw in combinations(range(n - 1, -1, -1), n - p):
                    rest = [t for t in range(n - 1, -1, -1) if t not in hw]
                    for vw in combinations(rest, n - q):
                        entries.append((n, p, q, ci, hw, vw, cell))
    entries.sort()
    cells = {}
    refs = {}
    for n, p, q, ci, hw, vw, cell in entries:
        cid = diag_id(hw, vw, cell)
        cells.setdefault(n, []).append(cid)
        refs[cid] = BiSimplexRef(hw, vw, cell)
    faces = {}
    for n, ids in cells.items():
        if n == 0:
            continue
        for cid in ids:
            ref = refs[cid]
            for i in range(n + 1):
                out = b.vface(b.hface(ref, i), i)
                word, hw0, vw0 = strip_common(out.hword, out.vword)
                faces[(cid, i)] = SimplexRef(word, diag_id(hw0, vw0, out.base))
    pointed = b.pointed
    bp = diag_id((), (), b.basepoint) if pointed else None
    return SimplicialSet(cells, faces, pointed=pointed, basepoint=bp)


def external_product(x: SimplicialSet, y: SimplicialSet) -> BisimplicialSet:
    """The bisimplicial set with (p, q)-level X_p x Y_q."""
    cells = {}
    hfaces = {}
    vfaces = {}
    for p in x.dims():
        for q in y.dims():
            ids = []
            for xc in x.cells(p):
                for yc in y.cells(q):
                    cid = pair_id(SimplexRef((), xc), SimplexRef((), yc))
                    ids.append(cid)
                    if p:
                        for i in range(p + 1):
                            fr = x.stored_face(xc, i)
                            base = pair_id(SimplexRef((), fr.base), SimplexRef((), yc))
                            hfaces[(cid, i)] = BiSimplexRef(fr.word, (), base)
                    if q:
                        for i in range(q + 1):
                            fr = y.stored_face(yc, i)
                            base = pair_id(SimplexRef((), xc), SimplexRef((), fr.base))
                            vfaces[(cid, i)] = BiSimplexRef((), fr.word, base)
            cells[(p, q)] = ids
    pointed = x.pointed and y.pointed
    bp = pair_id(SimplexRef((), x.basepoint), SimplexRef((), y.basepoint)) if pointed else None
    return BisimplicialSet(cells, hfaces, vfaces, pointed=pointed, basepoint=bp)


def constant_vertical(x: SimplicialSet) -> BisimplicialSet:
    """The bisimplicial set that is X in the horizontal direction and
    constant vertically; its diagonal is X again."""
    cells = {}
    hfaces = {}
    for p in x.dims():
        cells[(p, 0)] = list(x.cells(p))
        for c in x.cells(p):
            for i in range(p + 1) if p else ():
                fr = x.stored_face(c, i)
                hfaces[(c, i)] = BiSimplexRef(fr.word, (), fr.base)
    return BisimplicialSet(cells, hfaces, {}, pointed=x.pointed, basepoint=x.basepoint)


# ---------------------------------------------------------------------------
# invariants


def pi0(x: SimplicialSet):
    """Connected components: the coequalizer of the two vertex maps on
    edges, computed by union-find; components are ordered by their first
    vertex in declaration order."""
    verts = list(x.cells(0))
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in x.cells(1):
        a = x.stored_face(e, 0).base
        b = x.stored_face(e, 1).base
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = {}
    for v in verts:
        comps.setdefault(find(v), []).append(v)
    return [tuple(members) for _, members in sorted(
        comps.items(), key=lambda kv: verts.index(kv[1][0])
    )]


def component_map(x: SimplicialSet) -> dict:
    """vertex -> index of its component in pi0(x)."""
    out = {}
    for idx, members in enumerate(pi0(x)):
        for v in members:
            out[v] = idx
    return out


Arrow = tuple  # ("gen", edge_id) or ("id", vertex_id)


def arrow_of(ref: SimplexRef) -> Arrow:
    """The groupoid arrow represented by a 1-simplex: degenerate edges
    are identities."""
    if ref.word:
        return ("id", ref.base)
    return ("gen", ref.base)


@dataclass(frozen=True)
class GroupoidPresentation:
    """Generators and relations of the fundamental groupoid.

    Objects are the 0-cells; each nondegenerate edge e is a generator
    from d1(e) to d0(e); each nondegenerate 2-cell t imposes
    f(d1 t) = f(d0 t) f(d2 t), with degenerate faces recorded as
    identity arrows.
    """

    objects: tuple
    generators: dict  # edge -> (source vertex, target vertex)
    relations: tuple  # triples (d1 arrow, d0 arrow, d2 arrow)

    def normalized_relations(self) -> frozenset:
        """Relations with tautologies dropped (those asserting a = a
        after composing with identity arrows)."""
        out = []
        for a1, a0, a2 in self.relations:
            if a0[0] == "id" and a2 == a1:
                continue
            if a2[0] == "id" and a0 == a1:
                continue
            if a0[0] == "id" and a2[0] == "id" and a1[0] == "id":
                continue
            out.append((a1, a0, a2))
        return frozenset(out)


def groupoid_presentation(x: SimplicialSet) -> GroupoidPresentation:
    generators = {}
    for e in x.cells(1):
        src = x.stored_face(e, 1).base
        dst = x.stored_face(e, 0).base
        generators[e] = (src, dst)
    relations = []
    for t in x.cells(2):
        ref = SimplexRef((), t)
        relations.append(
            (arrow_of(x.face(ref, 1)), arrow_of(x.face(ref, 0)), arrow_of(x.face(ref, 2)))
        )
    return GroupoidPresentation(tuple(x.cells(0)), generators, tuple(relations))


@dataclass(frozen=True)
class GroupPresentation:
    """A finite group presentation; relators are words of (generator,
    exponent) pairs with exponent +1 or -1."""

    generators: tuple
    relators: tuple

    def abelianization(self) -> HomologyGroup:
        gens = list(self.generators)
        index = {g: i for i, g in enumerate(gens)}
        cols = []
        for rel in self.relators:
            col = [0] * len(gens)
            for g, e in rel:
                col[index[g]] += e
            cols.append(col)
        mat = IntMatrix.from_rows(
            [[col[i] for col in cols] for i in range(len(gens))], cols=len(cols)
        )
        return group_from_presentation(len(gens), mat)


def pi1_presentation(x: SimplicialSet, base: str) -> GroupPresentation:
    """Presentation of the vertex group at `base`, by contracting a
    breadth-first spanning tree of its component; the abelianization is
    H_1 of that component."""
    if not x.has_cell(base) or x.cell_dim(base) != 0:
        raise ValueError("basepoint %r is not a 0-cell" % base)
    comp = component_map(x)
    cidx = comp[base]
    # breadth-first tree over nondegenerate edges
    adjacency = {}
    gens = {}
    for e in x.cells(1):
        src = x.stored_face(e, 1).base
        dst = x.stored_face(e, 0).base
        if comp[src] != cidx:
            continue
        gens[e] = (src, dst)
        adjacency.setdefault(src, []).append((e, dst, +1))
        adjacency.setdefault(dst, []).append((e, src, -1))
    tree = set()
    seen = {base}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for e, w, _ in adjacency.get(v, ()):
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    generators = tuple(e for e in gens if e not in tree)

    def letters(arrow: Arrow):
        if arrow[0] == "id":
            return []
        e = arrow[1]
        return [(e, +1)] if e in generators else []

    relators = []
    for t in x.cells(2):
        ref = SimplexRef((), t)
        verts = x.vertices_of(ref)
        if comp.get(verts[0]) != cidx:
            continue
        a1 = arrow_of(x.face(ref, 1))
        a0 = arrow_of(x.face(ref, 0))
        a2 = arrow_of(x.face(ref, 2))
        word = letters(a0) + letters(a2) + [(g, -e) for g, e in reversed(letters(a1))]
        if word:
            relators.append(tuple(word))
    return GroupPresentation(generators, tuple(relators))


# ---------------------------------------------------------------------------
# chains and homology


def chains(x: SimplicialSet, normalized: bool = True, cap: int | None = None) -> ChainComplex:
    """The chain complex of a simplicial set.

    Normalized: one generator per nondegenerate cell, faces that become
    degenerate are dropped.  Unnormalized: one generator per simplex up
    to the dimension cap, which is mandatory because degenerate simplices
    exist in every dimension.  Pointed spaces yield reduced chains (the
    basepoint chain subcomplex is divided out).
    """
    reduced = x.pointed
    if normalized:
        top = x.top_dim()
        if top < 0:
            return zero_complex()
        basis = {n: list(x.cells(n)) for n in range(top + 1)}
    else:
        if cap is None:
            raise ValueError("unnormalized chains require a dimension cap")
        top = cap
        basis = {n: x.simplices(n) for n in range(top + 1)}
    index = {}
    for n, items in basis.items():
        drop = None
        if reduced:
            drop = x.basepoint if normalized else x.basepoint_ref(n)
        kept = [it for it in items if it != drop]
        basis[n] = kept
        index[n] = {it: i for i, it in enumerate(kept)}
    ranks = {n: len(items) for n, items in basis.items() if items}
    d = {}
    for n in range(1, top + 1):
        rows, cols = len(basis.get(n - 1, ())), len(basis.get(n, ()))
        if rows == 0 or cols == 0:
            continue
        out = [[0] * cols for _ in range(rows)]
        for col, item in enumerate(basis[n]):
            ref = SimplexRef((), item) if normalized else item
            for i in range(n + 1):
                fr = x.face(ref, i)
                if normalized:
                    if fr.word:
                        continue
                    row = index[n - 1].get(fr.base)
                else:
                    row = index[n - 1].get(fr)
                if row is None:
                    continue
                out[row][col] += -1 if i % 2 else 1
        d[n] = IntMatrix.from_rows(out, cols=cols)
    if not ranks:
        return zero_complex()
    return ChainComplex(0, top, ranks, d)


def homology_space(x: SimplicialSet, n: int) -> HomologyGroup:
    """Homology of the normalized chains; reduced when x is pointed."""
    return chains(x, normalized=True).homology(n)


def euler_characteristic(x: SimplicialSet) -> int:
    return sum((-1) ** n * x.n_cells(n) for n in x.dims())


def chain_map_of(f: SimplicialMap, top: int | None = None) -> ChainMap:
    """The induced map of normalized chain complexes (reduced on both
    sides when source and target are pointed)."""
    cx = chains(f.source, normalized=True)
    cy = chains(f.target, normalized=True)
    reduced = f.source.pointed and f.target.pointed
    comps = {}
    for n in f.source.dims():
        rows, cols = cy.rank(n), cx.rank(n)
        if rows == 0 or cols == 0:
            continue
        src_cells = [c for c in f.source.cells(n) if not (reduced and c == f.source.basepoint)]
        tgt_index = {}
        i = 0
        for c in f.target.cells(n):
            if reduced and c == f.target.basepoint:
                continue
            tgt_index[c] = i
            i += 1
        out = [[0] * cols for _ in range(rows)]
        for col, cell in enumerate(src_cells):
            img = f.cell_image(cell)
            if img.word:
                continue
            row = tgt_index.get(img.base)
            if row is None:
                continue
            out[row][col] = 1
        comps[n] = IntMatrix.from_rows(out, cols=cols)
    return ChainMap(cx, cy, comps)
