"""Dimension-truncated simplicial abelian groups, levelwise free.

Every object carries its truncation dimension D; structure maps are
integer matrices and all simplicial identities are verified as matrix
equations at construction.  The core functors: the normalization N
(intersection of the kernels of all faces except the zeroth, with
differential the zeroth face), its inverse K built from order-preserving
surjections, the levelwise free reduction of a pointed simplicial set,
the bar construction, and the shuffle/Alexander-Whitney comparison maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complexes import ChainComplex, ChainMap, HomologyGroup, ValidationError, zero_complex
from .matrices import (
    IntMatrix,
    block_diag,
    hstack,
    inverse_unimodular,
    kernel_basis,
    smith_normal_form,
    diagonal_of,
    solve_exact,
    vstack,
)
from .simplicial import SimplicialSet


class SimplicialAbGroup:
    """Levelwise free simplicial abelian group, truncated at dimension D.

    face[(n, i)] is the matrix of the i-th face A_n -> A_{n-1}, and
    degen[(n, j)] the j-th degeneracy A_n -> A_{n+1} (defined for n < D).
    """

    def __init__(self, trunc_dim: int, ranks, face: dict, degen: dict, check: bool = True):
        if trunc_dim < 0:
            raise ValidationError("truncation dimension must be nonnegative")
        self.D = trunc_dim
        if isinstance(ranks, dict):
            ranks = [int(ranks.get(n, ranks.get(str(n), 0))) for n in range(trunc_dim + 1)]
        else:
            ranks = [int(r) for r in ranks]
        if len(ranks) != trunc_dim + 1:
            raise ValidationError("need one rank per level 0..D")
        if any(r < 0 for r in ranks):
            raise ValidationError("negative level rank")
        self._ranks = tuple(ranks)
        self._face = {}
        self._degen = {}
        for (n, i), m in face.items():
            if not isinstance(m, IntMatrix):
                m = IntMatrix.from_rows(m)
            self._face[(int(n), int(i))] = m
        for (n, j), m in degen.items():
            if not isinstance(m, IntMatrix):
                m = IntMatrix.from_rows(m)
            self._degen[(int(n), int(j))] = m
        if check:
            self._validate()

    def rank(self, n: int) -> int:
        if 0 <= n <= self.D:
            return self._ranks[n]
        return 0

    def ranks(self) -> tuple:
        return self._ranks

    def face(self, n: int, i: int) -> IntMatrix:
        if not (1 <= n <= self.D and 0 <= i <= n):
            raise ValueError("face (%d, %d) out of range" % (n, i))
        m = self._face.get((n, i))
        if m is None:
            return IntMatrix.zero(self.rank(n - 1), self.rank(n))
        return m

    def degen(self, n: int, j: int) -> IntMatrix:
        if not (0 <= n < self.D and 0 <= j <= n):
            raise ValueError("degeneracy (%d, %d) out of range" % (n, j))
        m = self._degen.get((n, j))
        if m is None:
            return IntMatrix.zero(self.rank(n + 1), self.rank(n))
        return m

    def _validate(self):
        for (n, i), m in self._face.items():
            if not (1 <= n <= self.D and 0 <= i <= n):
                raise ValidationError("face (%d, %d) out of range" % (n, i))
            if m.shape != (self.rank(n - 1), self.rank(n)):
                raise ValidationError("face (%d, %d) has shape %r" % (n, i, m.shape))
        for (n, j), m in self._degen.items():
            if not (0 <= n < self.D and 0 <= j <= n):
                raise ValidationError("degeneracy (%d, %d) out of range" % (n, j))
            if m.shape != (self.rank(n + 1), self.rank(n)):
                raise ValidationError("degeneracy (%d, %d) has shape %r" % (n, j, m.shape))
        for n in range(2, self.D + 1):
            for j in range(1, n + 1):
                for i in range(j):
                    lhs = self.face(n - 1, i) @ self.face(n, j)
                    rhs = self.face(n - 1, j - 1) @ self.face(n, i)
                    if lhs != rhs:
                        raise ValidationError("identity d_%d d_%d failed at level %d" % (i, j, n))
        for n in range(0, self.D - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self.degen(n + 1, i) @ self.degen(n, j)
                    rhs = self.degen(n + 1, j + 1) @ self.degen(n, i)
                    if lhs != rhs:
                        raise ValidationError("identity s_%d s_%d failed at level %d" % (i, j, n))
        for n in range(0, self.D):
            for j in range(n + 1):
                s = self.degen(n, j)
                for i in range(n + 2):
                    out = self.face(n + 1, i) @ s
                    if i == j or i == j + 1:
                        expected = IntMatrix.identity(self.rank(n))
                    elif i < j:
                        expected = self.degen(n - 1, j - 1) @ self.face(n, i)
                    else:
                        expected = self.degen(n - 1, j) @ self.face(n, i - 1)
                    if out != expected:
                        raise ValidationError(
                            "identity d_%d s_%d failed at level %d" % (i, j, n)
                        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialAbGroup):
            return NotImplemented
        if self.D != other.D or self._ranks != other._ranks:
            return False
        for n in range(1, self.D + 1):
            for i in range(n + 1):
                if self.face(n, i) != other.face(n, i):
                    return False
        for n in range(self.D):
            for j in range(n + 1):
                if self.degen(n, j) != other.degen(n, j):
                    return False
        return True

    def __repr__(self) -> str:
        return "SimplicialAbGroup(D=%d, ranks=%r)" % (self.D, list(self._ranks))


def constant_group(rank: int, trunc_dim: int) -> SimplicialAbGroup:
    face = {}
    degen = {}
    for n in range(1, trunc_dim + 1):
        for i in range(n + 1):
            face[(n, i)] = IntMatrix.identity(rank)
    for n in range(trunc_dim):
        for j in range(n + 1):
            degen[(n, j)] = IntMatrix.identity(rank)
    return SimplicialAbGroup(trunc_dim, [rank] * (trunc_dim + 1), face, degen)


def tensor_sab(a: SimplicialAbGroup, b: SimplicialAbGroup) -> SimplicialAbGroup:
    """Levelwise tensor product with diagonal structure maps."""
    if a.D != b.D:
        raise ValueError("truncation dimensions differ")
    ranks = [a.rank(n) * b.rank(n) for n in range(a.D + 1)]
    face = {}
    degen = {}
    for n in range(1, a.D + 1):
        for i in range(n + 1):
            face[(n, i)] = a.face(n, i).kron(b.face(n, i))
    for n in range(a.D):
        for j in range(n + 1):
            degen[(n, j)] = a.degen(n, j).kron(b.degen(n, j))
    return SimplicialAbGroup(a.D, ranks, face, degen)


# ---------------------------------------------------------------------------
# normalization


def moore_basis(a: SimplicialAbGroup) -> dict:
    """Per level, a lattice basis (columns) of the intersection of the
    kernels of all faces except the zeroth."""
    bases = {0: IntMatrix.identity(a.rank(0))}
    for n in range(1, a.D + 1):
        if a.rank(n) == 0:
            bases[n] = IntMatrix.zero(0, 0)
            continue
        stack = [a.face(n, i) for i in range(1, n + 1)]
        bases[n] = kernel_basis(vstack(stack))
    return bases


def normalize_N(a: SimplicialAbGroup) -> ChainComplex:
    """The normalized complex: degree n is the joint kernel of the faces
    d_1, ..., d_n, with differential induced by d_0.  Valid in degrees
    up to the truncation D."""
    bases = moore_basis(a)
    ranks = {n: bases[n].cols for n in range(a.D + 1)}
    d = {}
    for n in range(1, a.D + 1):
        if bases[n].cols == 0 or bases[n - 1].cols == 0:
            continue
        image = a.face(n, 0) @ bases[n]
        expressed = solve_exact(bases[n - 1], image)
        if expressed is None:
            raise ValidationError("d_0 does not preserve the normalized part at level %d" % n)
        d[n] = expressed
    if not any(ranks.values()):
        return zero_complex()
    return ChainComplex(0, a.D, ranks, d)


def degenerate_part_basis(a: SimplicialAbGroup, n: int) -> IntMatrix:
    """Lattice basis of the subgroup generated by all degeneracies into
    level n (the complement of the normalized part)."""
    if n == 0 or a.rank(n) == 0:
        return IntMatrix.zero(a.rank(n), 0)
    images = [a.degen(n - 1, j) for j in range(n)]
    s = hstack(images)
    u, dm, _ = smith_normal_form(s, want_v=False)
    uinv = inverse_unimodular(u)
    cols = []
    for i, dv in enumerate(diagonal_of(dm)):
        if dv != 0:
            cols.append([dv * uinv.at(r, i) for r in range(a.rank(n))])
    return IntMatrix.from_rows(
        [[c[r] for c in cols] for r in range(a.rank(n))], cols=len(cols)
    )


def moore_projection(a: SimplicialAbGroup, bases: dict, n: int) -> IntMatrix:
    """The projection A_n -> N_n along the degenerate part, in the Moore
    basis; the splitting A = N (+) (degenerate part) is integral, so the
    combined basis matrix is unimodular."""
    k = bases[n]
    if a.rank(n) == 0:
        return IntMatrix.zero(0, 0)
    dpart = degenerate_part_basis(a, n)
    m = hstack([k, dpart]) if dpart.cols else k
    if m.rows != m.cols:
        raise ValidationError("normalized and degenerate parts do not span level %d" % n)
    return IntMatrix.from_rows(inverse_unimodular(m).to_lists()[: k.cols], cols=m.rows)


# ---------------------------------------------------------------------------
# the inverse functor K


def surjection_tuples(n: int, k: int):
    """Order-preserving surjections [n] ->> [k] as value tuples."""
    out = []
    for rises in combinations(range(1, n + 1), k):
        vals = [0]
        for i in range(1, n + 1):
            vals.append(vals[-1] + (1 if i in rises else 0))
        out.append(tuple(vals))
    out.sort()
    return out


def level_summands(n: int):
    """All order-preserving surjections out of [n], lexicographically."""
    out = []
    for k in range(n + 1):
        out.extend(surjection_tuples(n, k))
    out.sort()
    return out


def _operator_matrix(c: ChainComplex, summands_src, summands_tgt, alpha) -> IntMatrix:
    """Matrix of K(C) applied to a monotone map alpha (a value tuple),
    from the level indexed by summands_src to the level of summands_tgt.

    The component out of the summand eta is the identity when eta o alpha
    is still surjective, the differential when its image misses exactly
    the bottom value, and zero otherwise.
    """
    tgt_offset = {}
    off = 0
    for eta in summands_tgt:
        tgt_offset[eta] = off
        off += c.rank(eta[-1])
    rows = off
    cols = sum(c.rank(eta[-1]) for eta in summands_src)
    out = [[0] * cols for _ in range(rows)]
    coff = 0
    for eta in summands_src:
        k = eta[-1]
        r = c.rank(k)
        t = tuple(eta[v] for v in alpha)
        image = sorted(set(t))
        if image == list(range(k + 1)):
            roff = tgt_offset.get(t)
            if roff is not None:
                for s in range(r):
                    out[roff + s][coff + s] = 1
        elif image == list(range(1, k + 1)):
            tprime = tuple(v - 1 for v in t)
            roff = tgt_offset.get(tprime)
            if roff is not None and c.rank(k - 1):
                dm = c.d(k)
                for s1 in range(dm.rows):
                    for s2 in range(r):
                        out[roff + s1][coff + s2] = dm.at(s1, s2)
        coff += r
    return IntMatrix.from_rows(out, cols=cols)


def dold_kan_K(c: ChainComplex, trunc_dim: int) -> SimplicialAbGroup:
    """The simplicial abelian group whose normalized complex is the
    nonnegative part of c; level n is the sum of copies of C_k indexed by
    order-preserving surjections [n] ->> [k], truncated at trunc_dim."""
    c = c.truncate_good(0)
    summands = {n: level_summands(n) for n in range(trunc_dim + 1)}
    ranks = [sum(c.rank(eta[-1]) for eta in summands[n]) for n in range(trunc_dim + 1)]
    face = {}
    degen = {}
    for n in range(1, trunc_dim + 1):
        for i in range(n + 1):
            alpha = tuple(v for v in range(n + 1) if v != i)
            face[(n, i)] = _operator_matrix(c, summands[n], summands[n - 1], alpha)
    for n in range(trunc_dim):
        for j in range(n + 1):
            alpha = tuple(v if v <= j else v - 1 for v in range(n + 2))
            degen[(n, j)] = _operator_matrix(c, summands[n], summands[n + 1], alpha)
    return SimplicialAbGroup(trunc_dim, ranks, face, degen)


def unnormalized_complex(a: SimplicialAbGroup) -> ChainComplex:
    """Level n with differential the alternating sum of all faces; its
    homology agrees with the normalized complex in degrees < D."""
    ranks = {n: a.rank(n) for n in range(a.D + 1)}
    d = {}
    for n in range(1, a.D + 1):
        if a.rank(n) == 0 or a.rank(n - 1) == 0:
            continue
        total = IntMatrix.zero(a.rank(n - 1), a.rank(n))
        for i in range(n + 1):
            m = a.face(n, i)
            total = total + (m if i % 2 == 0 else m.scale(-1))
        d[n] = total
    if not any(ranks.values()):
        return zero_complex()
    return ChainComplex(0, a.D, ranks, d)


def homotopy_groups(a: SimplicialAbGroup, i: int) -> HomologyGroup:
    """The i-th homotopy group: homology of the normalized complex.

    Only degrees i <= D - 1 are trustworthy for a truncated object.
    """
    if not (0 <= i <= a.D - 1):
        raise ValueError("homotopy degree %d outside the trusted range [0, %d]" % (i, a.D - 1))
    return normalize_N(a).homology(i)


# ---------------------------------------------------------------------------
# the free reduced functor


def free_reduced_Z(x: SimplicialSet, trunc_dim: int) -> SimplicialAbGroup:
    """Levelwise free abelian group on the simplices of a pointed space,
    with the basepoint simplex divided out, truncated at trunc_dim."""
    if not x.pointed:
        raise ValueError("the free reduced functor needs a pointed space")
    basis = {}
    index = {}
    for n in range(trunc_dim + 1):
        bp = x.basepoint_ref(n)
        items = [s for s in x.simplices(n) if s != bp]
        basis[n] = items
        index[n] = {s: i for i, s in enumerate(items)}
    ranks = [len(basis[n]) for n in range(trunc_dim + 1)]

    def matrix_of(op, n_src, n_tgt):
        rows, cols = ranks[n_tgt], ranks[n_src]
        out = [[0] * cols for _ in range(rows)]
        for col, s in enumerate(basis[n_src]):
            img = op(s)
            row = index[n_tgt].get(img)
            if row is not None:
                out[row][col] = 1
        return IntMatrix.from_rows(out, cols=cols)

    face = {}
    degen = {}
    for n in range(1, trunc_dim + 1):
        for i in range(n + 1):
            face[(n, i)] = matrix_of(lambda s, i=i: x.face(s, i), n, n - 1)
    for n in range(trunc_dim):
        for j in range(n + 1):
            degen[(n, j)] = matrix_of(lambda s, j=j: x.degeneracy(s, j), n, n + 1)
    return SimplicialAbGroup(trunc_dim, ranks, face, degen)


def smash_comparison_iso(e: SimplicialSet, f: SimplicialSet, trunc_dim: int) -> dict:
    """The canonical levelwise map Z~(E) ox Z~(F) -> Z~(E ^ F), sending a
    pair of non-basepoint simplices to the class of their product pair.

    Returns the per-level matrices after verifying each is a permutation
    matrix that intertwines all faces and degeneracies; raises otherwise.
    """
    from .spaces import product_pair_ref, smash

    lhs = tensor_sab(free_reduced_Z(e, trunc_dim), free_reduced_Z(f, trunc_dim))
    sm = smash(e, f)
    rhs = free_reduced_Z(sm.space, trunc_dim)
    mats = {}
    for n in range(trunc_dim + 1):
        ebasis = [s for s in e.simplices(n) if s != e.basepoint_ref(n)]
        fbasis = [s for s in f.simplices(n) if s != f.basepoint_ref(n)]
        tbasis = [s for s in sm.space.simplices(n) if s != sm.space.basepoint_ref(n)]
        tindex = {s: i for i, s in enumerate(tbasis)}
        cols = len(ebasis) * len(fbasis)
        if len(tbasis) != cols:
            raise ValidationError("levelwise ranks differ at level %d" % n)
        out = [[0] * cols for _ in range(len(tbasis))]
        for ia, ra in enumerate(ebasis):
            for ib, rb in enumerate(fbasis):
                img = sm.collapse(product_pair_ref(e, f, ra, rb))
                out[tindex[img]][ia * len(fbasis) + ib] = 1
        if any(sum(col) != 1 for col in zip(*out)) or any(sum(r) != 1 for r in out):
            raise ValidationError("comparison is not a bijection at level %d" % n)
        mats[n] = IntMatrix.from_rows(out, cols=cols)
    for n in range(1, trunc_dim + 1):
        for i in range(n + 1):
            if rhs.face(n, i) @ mats[n] != mats[n - 1] @ lhs.face(n, i):
                raise ValidationError("comparison breaks face (%d, %d)" % (n, i))
    for n in range(trunc_dim):
        for j in range(n + 1):
            if rhs.degen(n, j) @ mats[n] != mats[n + 1] @ lhs.degen(n, j):
                raise ValidationError("comparison breaks degeneracy (%d, %d)" % (n, j))
    return mats


# ---------------------------------------------------------------------------
# the bar construction


def _bar_face_matrix(p: int, i: int, r: int) -> IntMatrix:
    """Face of the bar object at horizontal level p with blocks of rank
    r: drop the first or last entry, or add adjacent entries."""
    rows = (p - 1) * r
    cols = p * r
    out = [[0] * cols for _ in range(rows)]
    for t in range(p - 1):
        if i == 0:
            src = [t + 1]
        elif t + 1 < i:
            src = [t]
        elif t + 1 == i:
            src = [t, t + 1]
        else:
            src = [t + 1]
        for s in src:
            for q in range(r):
                out[t * r + q][s * r + q] += 1
    return IntMatrix.from_rows(out, cols=cols)


def _bar_degen_matrix(p: int, j: int, r: int) -> IntMatrix:
    """Degeneracy of the bar object: insert a zero entry at slot j."""
    rows = (p + 1) * r
    cols = p * r
    out = [[0] * cols for _ in range(rows)]
    for t in range(p + 1):
        if t < j:
            src = t
        elif t == j:
            src = None
        else:
            src = t - 1
        if src is not None:
            for q in range(r):
                out[t * r + q][src * r + q] = 1
    return IntMatrix.from_rows(out, cols=cols)


def bar_B(a: SimplicialAbGroup) -> SimplicialAbGroup:
    """Diagonal of the bar bisimplicial group with (p, q)-level A_q^p;
    the normalized complex shifts up by one degree."""
    d = a.D
    ranks = [n * a.rank(n) for n in range(d + 1)]
    face = {}
    degen = {}
    for n in range(1, d + 1):
        for i in range(n + 1):
            vert = block_diag([a.face(n, i)] * n)
            horiz = _bar_face_matrix(n, i, a.rank(n - 1))
            face[(n, i)] = horiz @ vert
    for n in range(d):
        for j in range(n + 1):
            vert = block_diag([a.degen(n, j)] * n) if n else IntMatrix.zero(0, 0)
            horiz = _bar_degen_matrix(n, j, a.rank(n + 1))
            degen[(n, j)] = horiz @ vert
    return SimplicialAbGroup(d, ranks, face, degen)


# ---------------------------------------------------------------------------
# Eilenberg-Zilber comparison maps


@dataclass(frozen=True)
class EZPair:
    """The shuffle and Alexander-Whitney chain maps between
    N(A) ox N(B) (hard-truncated at D) and N(A ox B); their composite
    aw o shuffle is the identity on the nose."""

    shuffle: ChainMap
    aw: ChainMap

    def strict_identity_ok(self) -> bool:
        comp = self.aw.compose(self.shuffle)
        return comp == ChainMap.identity(self.shuffle.source)


def _degeneracy_composite(a: SimplicialAbGroup, start: int, indices) -> IntMatrix:
    m = IntMatrix.identity(a.rank(start))
    lvl = start
    for j in indices:
        m = a.degen(lvl, j) @ m
        lvl += 1
    return m


def _front_face(a: SimplicialAbGroup, n: int, p: int) -> IntMatrix:
    m = IntMatrix.identity(a.rank(n))
    lvl = n
    while lvl > p:
        m = a.face(lvl, lvl) @ m
        lvl -= 1
    return m


def _back_face(b: SimplicialAbGroup, n: int, q: int) -> IntMatrix:
    m = IntMatrix.identity(b.rank(n))
    lvl = n
    while lvl > q:
        m = b.face(lvl, 0) @ m
        lvl -= 1
    return m


def ez_maps(a: SimplicialAbGroup, b: SimplicialAbGroup) -> EZPair:
    """The shuffle map with its signs, and the front-face/back-face
    Alexander-Whitney map, as honest chain maps in degrees <= D."""
    if a.D != b.D:
        raise ValueError("truncation dimensions differ")
    d = a.D
    na_bases = moore_basis(a)
    nb_bases = moore_basis(b)
    na = normalize_N(a)
    nb = normalize_N(b)
    ab = tensor_sab(a, b)
    nab_bases = moore_basis(ab)
    nab = normalize_N(ab)
    projections = {n: moore_projection(ab, nab_bases, n) for n in range(d + 1)}
    t_full = na.tensor(nb)
    t = t_full.truncate_stupid(d) if t_full.max_deg > d else t_full

    shuffle_comps = {}
    for n in range(d + 1):
        cols = []
        for p in range(n + 1):
            q = n - p
            ka, kb = na_bases.get(p), nb_bases.get(q)
            if ka is None or kb is None or ka.cols == 0 or kb.cols == 0:
                continue
            block = IntMatrix.zero(ab.rank(n), ka.cols * kb.cols)
            for mu in combinations(range(n), p):
                nu = tuple(s for s in range(n) if s not in mu)
                sign = (-1) ** sum(1 for m in mu for x in nu if m > x)
                ma = _degeneracy_composite(a, p, nu) @ ka
                mb = _degeneracy_composite(b, q, mu) @ kb
                term = ma.kron(mb)
                block = block + (term if sign > 0 else term.scale(-1))
            cols.append(block)
        if cols and ab.rank(n):
            stacked = hstack(cols)
            shuffle_comps[n] = projections[n] @ stacked
    shuffle = ChainMap(t, nab, shuffle_comps)

    aw_comps = {}
    pa = {p: moore_projection(a, na_bases, p) for p in range(d + 1)}
    pb = {q: moore_projection(b, nb_bases, q) for q in range(d + 1)}
    for n in range(d + 1):
        if t.rank(n) == 0 or nab.rank(n) == 0:
            continue
        rows = []
        for p in range(n + 1):
            q = n - p
            if na.rank(p) == 0 or nb.rank(q) == 0:
                continue
            block = (pa[p] @ _front_face(a, n, p)).kron(pb[q] @ _back_face(b, n, q))
            rows.append(block @ nab_bases[n])
        aw_comps[n] = vstack(rows)
    aw = ChainMap(nab, t, aw_comps)
    return EZPair(shuffle, aw)


# ---------------------------------------------------------------------------
# horn filling


def horn_filler(a: SimplicialAbGroup, n: int, k: int, faces) -> tuple:
    """Fill a compatible (n, k)-horn by degeneracy corrections.

    `faces` lists n+1 vectors in A_{n-1} with entry k ignored; the result
    x satisfies d_i x = faces[i] for every i != k.  Incompatible input is
    rejected with the first violated matching identity named.
    """
    if not (1 <= n <= a.D):
        raise ValueError("horn dimension %d outside [1, %d]" % (n, a.D))
    if not (0 <= k <= n):
        raise ValueError("horn index %d out of range" % k)
    faces = list(faces)
    if len(faces) != n + 1:
        raise ValueError("expected %d faces (entry %d ignored)" % (n + 1, k))
    vecs = {}
    for i in range(n + 1):
        if i == k:
            continue
        v = tuple(int(t) for t in faces[i])
        if len(v) != a.rank(n - 1):
            raise ValueError("face %d has length %d, expected %d" % (i, len(v), a.rank(n - 1)))
        vecs[i] = v
    if n >= 2:
        for j in sorted(vecs):
            for i in sorted(vecs):
                if i >= j:
                    continue
                lhs = a.face(n - 1, i).mul_vec(vecs[j])
                rhs = a.face(n - 1, j - 1).mul_vec(vecs[i])
                if lhs != rhs:
                    raise ValueError(
                        "incompatible horn: d_%d x_%d != d_%d x_%d" % (i, j, j - 1, i)
                    )
    u = (0,) * a.rank(n)

    def correct(u, t, slot):
        residue = tuple(x - y for x, y in zip(vecs[t], a.face(n, t).mul_vec(u)))
        bump = a.degen(n - 1, slot).mul_vec(residue)
        return tuple(x + y for x, y in zip(u, bump))

    for t in range(k):
        u = correct(u, t, t)
    for t in range(n, k, -1):
        u = correct(u, t, t - 1)
    for i in range(n + 1):
        if i != k and a.face(n, i).mul_vec(u) != vecs[i]:
            raise AssertionError("filler fails its face equation at %d" % i)
    return u


# ---------------------------------------------------------------------------
# roundtrip comparisons


def nk_roundtrip_iso(c: ChainComplex, trunc_dim: int):
    """The canonical inclusion of the nonnegative truncation of c into
    N(K(c)) (identity-surjection summands), verified to be a chain
    isomorphism degree by degree; returns the per-degree base-change
    matrices."""
    c0 = c.truncate_good(0)
    kc = dold_kan_K(c0, trunc_dim)
    bases = moore_basis(kc)
    out = {}
    prev = None
    for n in range(min(trunc_dim, c0.max_deg) + 1):
        offset = 0
        for eta in level_summands(n):
            if eta == tuple(range(n + 1)):
                break
            offset += c0.rank(eta[-1])
        rows = kc.rank(n)
        cols = c0.rank(n)
        inc = [[0] * cols for _ in range(rows)]
        for s in range(cols):
            inc[offset + s][s] = 1
        inc = IntMatrix.from_rows(inc, cols=cols)
        expressed = solve_exact(bases[n], inc)
        if expressed is None or expressed.rows != expressed.cols:
            raise ValidationError("identity summand is not the normalized part at level %d" % n)
        inverse_unimodular(expressed)  # raises when not a base change
        out[n] = expressed
        prev = expressed
    # chain-map condition against the normalized differential
    nk = normalize_N(kc)
    for n in range(1, min(trunc_dim, c0.max_deg) + 1):
        lhs = nk.d(n) @ out[n]
        rhs = out[n - 1] @ c0.d(n)
        if lhs != rhs:
            raise ValidationError("roundtrip differentials disagree in degree %d" % n)
    return out


def dold_kan_counit_matrices(a: SimplicialAbGroup) -> dict:
    """Per level, the natural map K(N(A))_n -> A_n given on the summand
    of a surjection eta by the corresponding composite degeneracy; for
    any levelwise free input these are unimodular and intertwine all
    structure maps."""
    bases = moore_basis(a)
    na = normalize_N(a)
    kna = dold_kan_K(na, a.D)
    out = {}
    for n in range(a.D + 1):
        blocks = []
        for eta in level_summands(n):
            k = eta[-1]
            if na.rank(k) == 0:
                continue
            jumps = sorted(i for i in range(n) if eta[i] == eta[i + 1])
            blocks.append(_degeneracy_composite(a, k, jumps) @ bases[k])
        if blocks:
            psi = hstack(blocks)
        else:
            psi = IntMatrix.zero(a.rank(n), 0)
        if psi.shape != (a.rank(n), kna.rank(n)):
            raise ValidationError("counit shape mismatch at level %d" % n)
        out[n] = psi
    return out


def kn_roundtrip_ok(a: SimplicialAbGroup) -> bool:
    """K(N(A)) is isomorphic to A levelwise, via the explicit counit."""
    na = normalize_N(a)
    kna = dold_kan_K(na, a.D)
    psi = dold_kan_counit_matrices(a)
    for n in range(a.D + 1):
        if kna.rank(n) != a.rank(n):
            return False
        if a.rank(n) and not _is_unimodular_square(psi[n]):
            return False
    for n in range(1, a.D + 1):
        for i in range(n + 1):
            if a.face(n, i) @ psi[n] != psi[n - 1] @ kna.face(n, i):
                return False
    for n in range(a.D):
        for j in range(n + 1):
            if a.degen(n, j) @ psi[n] != psi[n + 1] @ kna.degen(n, j):
                return False
    return True


def _is_unimodular_square(m: IntMatrix) -> bool:
    if m.rows != m.cols:
        return False
    try:
        inverse_unimodular(m)
    except ValueError:
        return False
    return True
