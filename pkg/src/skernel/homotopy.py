"""Homotopy constructions on finite simplicial sets.

The wrapping functor (forget degeneracies, then freely re-add them) with
its counit, the skeletal pushout squares it satisfies, mapping cylinders,
homotopy pushouts built from the concrete wedge/smash formula, and the
desk-scale weak-equivalence certificates: a certificate never decides a
weak equivalence, it records exactly which finite checks passed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import NamedTuple

from .complexes import ChainMap, ValidationError, cone
from .simplicial import BiSimplexRef, BisimplicialSet, SimplexRef, SimplicialMap, SimplicialSet
from .spaces import (
    arrow_of,
    boundary,
    chain_map_of,
    chains,
    component_map,
    diagonal,
    groupoid_presentation,
    homology_space,
    interval_pointed,
    pair_id,
    pi0,
    pi1_presentation,
    point,
    product,
    product_pair_ref,
    product_pairs,
    pushout_inj,
    quotient,
    simplex,
    skeleton,
    smash,
    wedge,
)


def _ref_id(ref: SimplexRef) -> str:
    if not ref.word:
        return ref.base
    return "".join("s%d" % i for i in ref.word) + "." + ref.base


class WrapResult(NamedTuple):
    space: SimplicialSet
    counit: SimplicialMap


def wrap(x: SimplicialSet, trunc_dim: int) -> WrapResult:
    """The wrapping functor, truncated at trunc_dim.

    Nondegenerate n-cells are in bijection with all n-simplices of x;
    faces factor any composite through the face operators of x alone, so
    no face of a cell is ever degenerate.  The counit sends the cell of a
    simplex to that simplex, degeneracy word and all.
    """
    if trunc_dim < 0:
        raise ValueError("truncation must be nonnegative")
    cells = {}
    refs = {}
    for n in range(trunc_dim + 1):
        ids = []
        for r in x.simplices(n):
            cid = _ref_id(r)
            ids.append(cid)
            refs[cid] = r
        if ids:
            cells[n] = ids
    faces = {}
    for n in range(1, trunc_dim + 1):
        for cid in cells.get(n, ()):
            r = refs[cid]
            for i in range(n + 1):
                faces[(cid, i)] = SimplexRef((), _ref_id(x.face(r, i)))
    space = SimplicialSet(cells, faces, pointed=x.pointed,
                          basepoint=x.basepoint if x.pointed else None)
    counit = SimplicialMap(space, x, {cid: refs[cid] for cid in refs})
    return WrapResult(space, counit)


# ---------------------------------------------------------------------------
# skeletal pushout squares of the wrapped space


def _labelled_copies(labels, t: SimplicialSet, tag: str) -> SimplicialSet:
    """Disjoint copies of t indexed by labels, plus a disjoint basepoint:
    the smash of the discrete pointed set (labels + base) with t made
    pointed by a free basepoint."""
    cells = {0: ["*"]}
    faces = {}
    for label in labels:
        for n in t.dims():
            cells.setdefault(n, []).extend("%s%s#%s" % (tag, label, c) for c in t.cells(n))
            for c in t.cells(n):
                for i in range(n + 1) if n else ():
                    fr = t.stored_face(c, i)
                    faces[("%s%s#%s" % (tag, label, c), i)] = SimplexRef(
                        fr.word, "%s%s#%s" % (tag, label, fr.base)
                    )
    return SimplicialSet(cells, faces, pointed=True, basepoint="*")


def _iterated_face(x: SimplicialSet, ref: SimplexRef, keep: tuple) -> SimplexRef:
    """The face of a simplex spanned by the ordered vertex subset `keep`."""
    n = x.dim(ref)
    out = ref
    for v in range(n, -1, -1):
        if v not in keep:
            out = x.face(out, v)
    return out


@dataclass(frozen=True)
class SkeletonPushoutReport:
    holds: bool
    expected_counts: dict
    pushout_counts: dict


def skeleton_pushout_check(x: SimplicialSet, n: int, trunc_dim: int) -> SkeletonPushoutReport:
    """The next skeleton of the wrapped space is the pushout gluing one
    (n+1)-cell per (n+1)-simplex of x along its simplex boundary.

    Builds both sides explicitly (the gluing legs use disjoint copies of
    the (n+1)-simplex and its boundary, one per (n+1)-simplex of x, plus
    a free basepoint) and reports a cellwise isomorphism.
    """
    if not x.pointed:
        raise ValueError("the skeletal squares are stated for pointed spaces")
    if n + 1 > trunc_dim:
        raise ValueError("need n + 1 <= truncation (got n=%d, truncation=%d)" % (n, trunc_dim))
    wr = wrap(x, trunc_dim).space
    sk_lo = skeleton(wr, n)
    sk_hi = skeleton(wr, n + 1)
    labels = [_ref_id(r) for r in x.simplices(n + 1)]
    label_ref = {_ref_id(r): r for r in x.simplices(n + 1)}
    bnd = boundary(n + 1)
    full = simplex(n + 1)
    a = _labelled_copies(labels, bnd, "a|")
    w = _labelled_copies(labels, full, "w|")

    include = SimplicialMap(
        a, w,
        {"*": SimplexRef((), "*"),
         **{
             "a|%s#%s" % (label, c): SimplexRef((), "w|%s#%s" % (label, c))
             for label in labels
             for _, c in bnd.all_cells()
         }},
    )
    attach_assignment = {"*": SimplexRef((), sk_lo.basepoint)}
    for label in labels:
        s = label_ref[label]
        for m, c in bnd.all_cells():
            keep = tuple(int(v) for v in c.split("."))
            face_ref = _iterated_face(x, s, keep)
            attach_assignment["a|%s#%s" % (label, c)] = SimplexRef((), _ref_id(face_ref))
    attach = SimplicialMap(a, sk_lo, attach_assignment)

    po = pushout_inj(include, attach)
    top_id = _subset_all(n + 1)
    comparison = {}
    for m, c in po.space.all_cells():
        if c.startswith("y:"):
            comparison[c] = SimplexRef((), c[2:])
        else:
            label = c[len("x:w|") : -(len(top_id) + 1)]
            comparison[c] = SimplexRef((), label)
    try:
        iso = SimplicialMap(po.space, sk_hi, comparison)
        holds = iso.is_cellwise_iso()
    except ValidationError:
        holds = False
    return SkeletonPushoutReport(
        holds=holds,
        expected_counts=sk_hi.cell_counts(),
        pushout_counts=po.space.cell_counts(),
    )


def _subset_all(n: int) -> str:
    return ".".join(str(v) for v in range(n + 1))


# ---------------------------------------------------------------------------
# cylinders and homotopy pushouts


def _cylinder_object(k: SimplicialSet):
    """k smashed with the pointed interval, with the two end inclusions
    and the projection back to k."""
    iv = interval_pointed()
    sm = smash(k, iv)
    pairs = product_pairs(k, iv)

    def end_map(vertex: str) -> SimplicialMap:
        assignment = {}
        for n, c in k.all_cells():
            ra = SimplexRef((), c)
            rb = SimplexRef(tuple(range(n - 1, -1, -1)), vertex)
            assignment[c] = sm.collapse(product_pair_ref(k, iv, ra, rb))
        return SimplicialMap(k, sm.space, assignment)

    proj_assignment = {}
    for _, c in sm.space.all_cells():
        if c.startswith("x:"):
            _, ra, rb = pairs[c[2:]]
            proj_assignment[c] = ra
        else:
            proj_assignment[c] = SimplexRef((), k.basepoint)
    projection = SimplicialMap(sm.space, k, proj_assignment)
    return sm.space, end_map("0"), end_map("1"), projection


class CylinderResult(NamedTuple):
    space: SimplicialSet
    from_source: SimplicialMap  # K -> cyl(f)
    from_target: SimplicialMap  # L -> cyl(f)
    retraction: SimplicialMap  # cyl(f) -> L, strict one-sided inverse


def cylinder(f: SimplicialMap) -> CylinderResult:
    """Mapping cylinder: glue K ^ (interval)+ to L along the end at 1.

    The target inclusion followed by the retraction is the identity on
    the nose; the other composite is only homotopic to the identity and
    is left to certificates.
    """
    k, l = f.source, f.target
    if not (k.pointed and l.pointed and f.preserves_basepoint()):
        raise ValueError("cylinders need pointed spaces and a pointed map")
    cyl_obj, end0, end1, projection = _cylinder_object(k)
    po = pushout_inj(end1, f)
    from_source = po.from_x.compose(end0)
    from_target = po.from_y
    retraction_assignment = {}
    for _, c in po.space.all_cells():
        if c.startswith("y:"):
            retraction_assignment[c] = SimplexRef((), c[2:])
        else:
            retraction_assignment[c] = f(projection.cell_image(c[2:]))
    retraction = SimplicialMap(po.space, l, retraction_assignment)
    ident = SimplicialMap.identity(l)
    if retraction.compose(from_target) != ident:
        raise ValidationError("cylinder retraction is not a strict section")
    return CylinderResult(po.space, from_source, from_target, retraction)


class HomotopyPushoutResult(NamedTuple):
    space: SimplicialSet
    from_left: SimplicialMap  # L -> K_Q
    from_right: SimplicialMap  # M -> K_Q
    comparison: SimplicialMap | None  # K_Q -> N when a square is supplied


def homotopy_pushout(f: SimplicialMap, g: SimplicialMap, square=None) -> HomotopyPushoutResult:
    """Homotopy pushout of L <-f- K -g-> M: glue M v L to the cylinder
    object K ^ (interval)+ along its two ends (0 towards M, 1 towards L).

    Both structural maps are termwise coprojections.  When a strictly
    commuting cocone (u: L -> N, v: M -> N) is supplied, the induced
    comparison map K_Q -> N is returned as well.
    """
    k = f.source
    l, m = f.target, g.target
    for name, space in (("K", k), ("L", l), ("M", m)):
        if not space.pointed:
            raise ValueError("homotopy pushout needs pointed spaces (%s is unpointed)" % name)
    if not (f.preserves_basepoint() and g.preserves_basepoint()):
        raise ValueError("homotopy pushout needs pointed maps")
    if g.source is not k and g.source._cells != k._cells:
        raise ValueError("the two legs must share their source")
    cyl_obj, end0, end1, projection = _cylinder_object(k)
    kk = wedge(k, k)
    ends_assignment = {}
    for _, c in kk.space.all_cells():
        if c.startswith("x:"):
            ends_assignment[c] = end0.cell_image(c[2:])
        else:
            ends_assignment[c] = end1.cell_image(c[2:])
    ends = SimplicialMap(kk.space, cyl_obj, ends_assignment)
    ml = wedge(m, l)
    to_ml_assignment = {}
    for _, c in kk.space.all_cells():
        if c.startswith("x:"):
            to_ml_assignment[c] = ml.inl(g.cell_image(c[2:]))
        else:
            to_ml_assignment[c] = ml.inr(f.cell_image(c[2:]))
    to_ml = SimplicialMap(kk.space, ml.space, to_ml_assignment)
    po = pushout_inj(ends, to_ml)
    from_left = po.from_y.compose(ml.inr)
    from_right = po.from_y.compose(ml.inl)

    comparison = None
    if square is not None:
        u, v, target = square
        for _, c in k.all_cells():
            if u(f.cell_image(c)) != v(g.cell_image(c)):
                raise ValueError("the supplied square does not commute strictly")
        assignment = {}
        through_k = u.compose(f).compose(projection)
        for _, c in po.space.all_cells():
            if c.startswith("x:"):
                assignment[c] = through_k.cell_image(c[2:])
            else:
                inner = c[2:]
                if inner.startswith("x:"):
                    assignment[c] = v.cell_image(inner[2:])
                else:
                    assignment[c] = u.cell_image(inner[2:])
        comparison = SimplicialMap(po.space, target, assignment)
    return HomotopyPushoutResult(po.space, from_left, from_right, comparison)


def bar_column_bisimplicial(f: SimplicialMap, g: SimplicialMap) -> BisimplicialSet:
    """The two-row bisimplicial object whose columns are M v K^(v n) v L,
    obtained by freely adding degeneracies to the face-only diagram
    K => M v L; its diagonal is the homotopy pushout again."""
    k = f.source
    ml = wedge(g.target, f.target)
    bp0 = "b0|" + ml.space.basepoint
    cells = {}
    hfaces = {}
    vfaces = {}
    for q in ml.space.dims():
        cells[(0, q)] = ["b0|%s" % c for c in ml.space.cells(q)]
        for c in ml.space.cells(q):
            for i in range(q + 1) if q else ():
                fr = ml.space.stored_face(c, i)
                vfaces[("b0|%s" % c, i)] = BiSimplexRef((), fr.word, "b0|" + fr.base)

    def k_row_ref(ref: SimplexRef) -> BiSimplexRef:
        # the K-copy sits inside the wedged column, so its basepoint
        # simplices are the horizontally degenerate base of the 0-row
        if ref.base == k.basepoint:
            return BiSimplexRef((0,), ref.word, bp0)
        return BiSimplexRef((), ref.word, "b1|" + ref.base)

    for q in k.dims():
        row = [c for c in k.cells(q) if c != k.basepoint]
        if row:
            cells[(1, q)] = ["b1|%s" % c for c in row]
        for c in row:
            for i in range(q + 1) if q else ():
                vfaces[("b1|%s" % c, i)] = k_row_ref(k.stored_face(c, i))
            img0 = ml.inr(f.cell_image(c))  # horizontal d_0 lands in L
            img1 = ml.inl(g.cell_image(c))  # horizontal d_1 lands in M
            hfaces[("b1|%s" % c, 0)] = BiSimplexRef((), img0.word, "b0|" + img0.base)
            hfaces[("b1|%s" % c, 1)] = BiSimplexRef((), img1.word, "b0|" + img1.base)
    return BisimplicialSet(cells, hfaces, vfaces, pointed=True, basepoint=bp0)


# ---------------------------------------------------------------------------
# weak-equivalence certificates


def _cyclic(n):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return table


def _klein_four():
    return [[i ^ j for j in range(4)] for i in range(4)]


def _sym3():
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    idx = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            comp = tuple(p[q[i]] for i in range(3))
            row.append(idx[comp])
        table.append(row)
    return table


SMALL_GROUPS = {
    1: [_cyclic(1)],
    2: [_cyclic(2)],
    3: [_cyclic(3)],
    4: [_cyclic(4), _klein_four()],
    5: [_cyclic(5)],
    6: [_cyclic(6), _sym3()],
}

_HOM_COUNT_CAP = 500_000


def count_homs(presentation, table) -> int:
    """Group homomorphisms from a presentation into the group given by a
    multiplication table, by exhaustive assignment."""
    order = len(table)
    gens = presentation.generators
    if order ** len(gens) > _HOM_COUNT_CAP:
        return -1
    inv = [0] * order
    for i in range(order):
        for j in range(order):
            if table[i][j] == 0:
                inv[i] = j
    count = 0
    for values in iproduct(range(order), repeat=len(gens)):
        val = dict(zip(gens, values))
        ok = True
        for rel in presentation.relators:
            acc = 0
            for gname, e in rel:
                x = val[gname] if e > 0 else inv[val[gname]]
                acc = table[acc][x]
            if acc != 0:
                ok = False
                break
        if ok:
            count += 1
    return count


def hom_count_profile(presentation) -> dict:
    out = {}
    for order, tables in SMALL_GROUPS.items():
        total = 0
        for table in tables:
            c = count_homs(presentation, table)
            if c < 0:
                total = -1
                break
            total += c
        out[order] = total
    return out


def push_presentation(f: SimplicialMap, pres):
    """The groupoid presentation of the source, rewritten through f:
    generators become target arrows (degenerate images turn into
    identities), relations translate arrow by arrow."""

    def push_arrow(arrow):
        if arrow[0] == "id":
            return ("id", f(SimplexRef((), arrow[1])).base)
        return arrow_of(f(SimplexRef((), arrow[1])))

    objects = tuple(f(SimplexRef((), v)).base for v in pres.objects)
    gen_arrows = [push_arrow(("gen", e)) for e in pres.generators]
    relations = tuple(
        (push_arrow(a1), push_arrow(a0), push_arrow(a2)) for a1, a0, a2 in pres.relations
    )
    return objects, gen_arrows, relations


def groupoid_comparison(f: SimplicialMap) -> str:
    """"equal" when the pushed presentation of the source matches the
    target presentation syntactically; "abelianized" when only the
    abelianized vertex groups were compared (and they agree);
    "contradicted" when some comparison failed; "skipped" when the
    component structures cannot be matched."""
    src = groupoid_presentation(f.source)
    tgt = groupoid_presentation(f.target)
    objects, gen_arrows, relations = push_presentation(f, src)
    pushed_gens = sorted(a[1] for a in gen_arrows if a[0] == "gen")
    if (
        len(set(objects)) == len(tgt.objects) == len(set(tgt.objects))
        and sorted(set(objects)) == sorted(tgt.objects)
        and pushed_gens == sorted(tgt.generators)
        and _normalize_relations(relations) == tgt.normalized_relations()
    ):
        return "equal"
    # fall back to abelianized vertex groups, componentwise
    src_comps = pi0(f.source)
    tgt_comps = pi0(f.target)
    if len(src_comps) != len(tgt_comps):
        return "skipped"
    tgt_component = component_map(f.target)
    matched = {}
    for members in src_comps:
        v = members[0]
        w = f(SimplexRef((), v)).base
        matched[tgt_component[w]] = v
    if len(matched) != len(tgt_comps):
        return "skipped"
    for tgt_idx, v in sorted(matched.items()):
        w = f(SimplexRef((), v)).base
        a = pi1_presentation(f.source, v).abelianization()
        b = pi1_presentation(f.target, w).abelianization()
        if a != b:
            return "contradicted"
    return "abelianized"


def _normalize_relations(relations) -> frozenset:
    out = []
    for a1, a0, a2 in relations:
        if a0[0] == "id" and a2 == a1:
            continue
        if a2[0] == "id" and a0 == a1:
            continue
        if a0[0] == "id" and a2[0] == "id" and a1[0] == "id":
            continue
        out.append((a1, a0, a2))
    return frozenset(out)


@dataclass(frozen=True)
class WeqCertificate:
    """Desk-scale evidence that a map is a weak equivalence: a bijection
    on components, vanishing mapping-cone homology through the stated
    range, fundamental-groupoid evidence, and counts of homomorphisms
    from the vertex groups into every group of order at most six.

    This is evidence, not a decision: for non-nilpotent fundamental
    groups it is strictly weaker than a genuine weak equivalence.
    """

    range: int
    pi0_bijective: bool
    homology_iso: dict
    groupoid_match: str  # equal | abelianized | skipped
    finite_quotient_counts: dict
    contradiction: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.pi0_bijective
            and all(self.homology_iso.values())
            and self.contradiction is None
        )


def weq_certificate(f: SimplicialMap, range_deg: int) -> WeqCertificate:
    if range_deg < 0:
        raise ValueError("range must be nonnegative")
    src_comps = pi0(f.source)
    tgt_comps = pi0(f.target)
    tgt_component = component_map(f.target)
    images = set()
    for members in src_comps:
        images.add(tgt_component[f(SimplexRef((), members[0])).base])
    pi0_bij = len(src_comps) == len(tgt_comps) == len(images)

    cm = chain_map_of(f)
    mc = cone(cm)
    hom_flags = {i: mc.homology(i).is_zero() for i in range(range_deg + 1)}

    match = groupoid_comparison(f)
    contradiction = "fundamental groupoid abelianizations differ" if match == "contradicted" else None
    if match == "contradicted":
        match = "skipped"

    if f.source.pointed and f.target.pointed and f.preserves_basepoint():
        base_src = f.source.basepoint
    elif f.source.n_cells(0):
        base_src = f.source.cells(0)[0]
    else:
        base_src = None
    counts = {}
    if base_src is not None:
        src_pres = pi1_presentation(f.source, base_src)
        tgt_pres = pi1_presentation(f.target, f(SimplexRef((), base_src)).base)
        src_counts = hom_count_profile(src_pres)
        tgt_counts = hom_count_profile(tgt_pres)
        for order in sorted(SMALL_GROUPS):
            counts[order] = (src_counts[order], tgt_counts[order])
            if (
                contradiction is None
                and src_counts[order] >= 0
                and tgt_counts[order] >= 0
                and src_counts[order] != tgt_counts[order]
            ):
                contradiction = "hom counts into groups of order %d differ" % order
    return WeqCertificate(
        range=range_deg,
        pi0_bijective=pi0_bij,
        homology_iso=hom_flags,
        groupoid_match=match,
        finite_quotient_counts=counts,
        contradiction=contradiction,
    )
