"""Bounded chain complexes of finitely generated free abelian groups.

Complexes are homologically graded: the differential in degree n maps
C_n -> C_{n-1}.  Homology groups are reported as (free rank, torsion
coefficients) in divisibility order, computed by Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .matrices import (
    IntMatrix,
    cokernel_invariants,
    hstack,
    kernel_basis,
    smith_normal_form,
    diagonal_of,
    solve_exact,
)


class ValidationError(ValueError):
    """Structurally invalid input data (broken d*d = 0, bad shapes, ...)."""


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group Z^free_rank + Z/t1 + Z/t2 + ...

    Torsion coefficients are >= 2 and each divides the next; units are
    never recorded.
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        ts = tuple(int(t) for t in self.torsion)
        object.__setattr__(self, "torsion", ts)
        for t in ts:
            if t < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(ts, ts[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(parts) if parts else "0"


ZERO_GROUP = HomologyGroup(0, ())


def group_from_presentation(generators: int, relations: IntMatrix) -> HomologyGroup:
    """The group Z^generators modulo the column lattice of `relations`."""
    if relations.rows != generators:
        raise ValueError("relation matrix has %d rows for %d generators" % (relations.rows, generators))
    free, torsion = cokernel_invariants(relations)
    return HomologyGroup(free, torsion)


class ChainComplex:
    """A bounded complex; ranks and differentials outside the stored
    support are zero.  d(n-1) @ d(n) = 0 is checked at construction, so
    invalid complexes cannot be built."""

    def __init__(self, min_deg: int, max_deg: int, ranks: dict, d: dict):
        if min_deg > max_deg:
            raise ValidationError("min_deg must be <= max_deg")
        ranks = {int(n): int(r) for n, r in ranks.items() if int(r) != 0}
        for n, r in ranks.items():
            if r < 0:
                raise ValidationError("negative rank in degree %d" % n)
            if not (min_deg <= n <= max_deg):
                raise ValidationError("rank in degree %d outside [%d, %d]" % (n, min_deg, max_deg))
        # trim the declared window to the actual support
        if ranks:
            min_deg = min(ranks)
            max_deg = max(ranks)
        else:
            min_deg = max_deg = 0
        self._min = min_deg
        self._max = max_deg
        self._ranks = ranks
        diffs = {}
        for n, m in d.items():
            n = int(n)
            if not isinstance(m, IntMatrix):
                m = IntMatrix.from_rows(m)
            expected = (self.rank(n - 1), self.rank(n))
            if m.shape != expected:
                raise ValidationError(
                    "differential in degree %d has shape %r, expected %r" % (n, m.shape, expected)
                )
            if m.rows and m.cols:
                diffs[n] = m
        self._d = diffs
        for n in range(self._min, self._max + 1):
            comp = self.d(n) @ self.d(n + 1)
            if not comp.is_zero():
                raise ValidationError("d(%d) @ d(%d) is nonzero" % (n, n + 1))

    @property
    def min_deg(self) -> int:
        return self._min

    @property
    def max_deg(self) -> int:
        return self._max

    def degrees(self) -> range:
        return range(self._min, self._max + 1)

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def d(self, n: int) -> IntMatrix:
        m = self._d.get(n)
        if m is None:
            return IntMatrix.zero(self.rank(n - 1), self.rank(n))
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self._ranks != other._ranks:
            return False
        return all(self.d(n) == other.d(n) for n in self.degrees())

    def __repr__(self) -> str:
        ranks = ", ".join("%d:%d" % (n, self.rank(n)) for n in self.degrees())
        return "ChainComplex(%s)" % ranks

    # -- basic invariants ------------------------------------------------

    def cycles(self, n: int) -> IntMatrix:
        """Columns form a basis of the lattice ker d(n) inside C_n."""
        return kernel_basis(self.d(n))

    def homology(self, n: int) -> HomologyGroup:
        """H_n = ker d(n) / im d(n+1), via Smith normal form.

        Degrees outside the support simply give the zero group.
        """
        if self.rank(n) == 0:
            return ZERO_GROUP
        z = self.cycles(n)
        if z.cols == 0:
            return ZERO_GROUP
        bnd = self.d(n + 1)
        rel = solve_exact(z, bnd)
        if rel is None:
            raise ValidationError("boundaries do not lie inside cycles in degree %d" % n)
        return group_from_presentation(z.cols, rel)

    def homology_all(self) -> dict:
        return {n: self.homology(n) for n in self.degrees()}

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in self._ranks.items())

    # -- constructions ---------------------------------------------------

    def shift(self, p: int) -> "ChainComplex":
        """C[p]: rank in degree n is rank_C(n - p); the differential picks
        up the sign (-1)^p so tensor/Hom identities hold on the nose."""
        ranks = {n + p: r for n, r in self._ranks.items()}
        sign = -1 if p % 2 else 1
        d = {n + p: (self._d[n] if sign == 1 else self._d[n].scale(sign)) for n in self._d}
        return ChainComplex(self._min + p, self._max + p, ranks, d)

    def truncate_good(self, n: int) -> "ChainComplex":
        """Kernel-corrected truncation: keeps C above degree n, replaces
        degree n by ker d(n), and is zero below; homology is preserved in
        degrees >= n and vanishes under it."""
        if n > self._max:
            return ChainComplex(0, 0, {}, {})
        k = self.cycles(n)
        ranks = {m: self.rank(m) for m in range(n + 1, self._max + 1)}
        ranks[n] = k.cols
        d = {}
        if k.cols and self.rank(n + 1):
            lifted = solve_exact(k, self.d(n + 1))
            if lifted is None:
                raise ValidationError("d(%d) does not factor through its kernel target" % (n + 1))
            d[n + 1] = lifted
        for m in range(n + 2, self._max + 1):
            if self.rank(m) and self.rank(m - 1):
                d[m] = self.d(m)
        return ChainComplex(n, max(n, self._max), ranks, d)

    def truncation_inclusion(self, n: int) -> "ChainMap":
        """The canonical chain map truncate_good(n) -> self."""
        trunc = self.truncate_good(n)
        comps = {}
        for m in trunc.degrees():
            if trunc.rank(m) == 0:
                continue
            if m == n:
                comps[m] = self.cycles(n)
            else:
                comps[m] = IntMatrix.identity(self.rank(m))
        return ChainMap(trunc, self, comps)

    def truncate_stupid(self, n: int) -> "ChainComplex":
        """Hard cutoff: identical to C in degrees <= n, zero above."""
        ranks = {m: r for m, r in self._ranks.items() if m <= n}
        d = {m: mat for m, mat in self._d.items() if m <= n}
        return ChainComplex(min(self._min, n), n, ranks, d) if ranks else ChainComplex(0, 0, {}, {})

    def tensor(self, other: "ChainComplex") -> "ChainComplex":
        """Graded tensor product with the Koszul sign:
        d(a ox b) = da ox b + (-1)^|a| a ox db.

        Degree-n basis is ordered by blocks C_i ox C'_{n-i} with i
        increasing; within a block the Kronecker (row-major) order.
        """
        lo = self._min + other._min
        hi = self._max + other._max
        ranks = {}
        blocks = {}
        for n in range(lo, hi + 1):
            idx = []
            total = 0
            for i in range(self._min, self._max + 1):
                r = self.rank(i) * other.rank(n - i)
                if r:
                    idx.append((i, total, r))
                    total += r
            blocks[n] = idx
            if total:
                ranks[n] = total
        d = {}
        for n in range(lo + 1, hi + 1):
            src = blocks[n]
            tgt = blocks[n - 1]
            if not src or not tgt:
                continue
            tgt_at = {i: off for i, off, _ in tgt}
            rows = sum(r for _, _, r in tgt)
            cols = sum(r for _, _, r in src)
            out = [[0] * cols for _ in range(rows)]
            for i, coff, _ in src:
                j = n - i
                ra, rb = self.rank(i), other.rank(j)
                if i - 1 in tgt_at and self.rank(i - 1):
                    blk = self.d(i).kron(IntMatrix.identity(rb))
                    roff = tgt_at[i - 1]
                    for a in range(blk.rows):
                        row = out[roff + a]
                        for b in range(blk.cols):
                            row[coff + b] += blk.at(a, b)
                if i in tgt_at and other.rank(j - 1):
                    sign = -1 if i % 2 else 1
                    blk = IntMatrix.identity(ra).kron(other.d(j))
                    if sign < 0:
                        blk = blk.scale(-1)
                    roff = tgt_at[i]
                    for a in range(blk.rows):
                        row = out[roff + a]
                        for b in range(blk.cols):
                            row[coff + b] += blk.at(a, b)
            d[n] = IntMatrix.from_rows(out, cols=cols)
        if not ranks:
            return ChainComplex(0, 0, {}, {})
        return ChainComplex(lo, hi, ranks, d)


def zero_complex() -> ChainComplex:
    return ChainComplex(0, 0, {}, {})


def single(rank: int = 1, degree: int = 0) -> ChainComplex:
    """A complex concentrated in one degree."""
    if rank == 0:
        return zero_complex()
    return ChainComplex(degree, degree, {degree: rank}, {})


class ChainMap:
    """A degreewise map of complexes; commutation with the differentials
    is checked at construction."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components: dict):
        self.source = source
        self.target = target
        comps = {}
        for n, m in components.items():
            n = int(n)
            if not isinstance(m, IntMatrix):
                m = IntMatrix.from_rows(m)
            expected = (target.rank(n), source.rank(n))
            if m.shape != expected:
                raise ValidationError(
                    "component in degree %d has shape %r, expected %r" % (n, m.shape, expected)
                )
            if m.rows and m.cols:
                comps[n] = m
        self._comps = comps
        lo = min(source.min_deg, target.min_deg)
        hi = max(source.max_deg, target.max_deg)
        for n in range(lo, hi + 2):
            lhs = target.d(n) @ self.component(n)
            rhs = self.component(n - 1) @ source.d(n)
            if lhs != rhs:
                raise ValidationError("chain map does not commute with d in degree %d" % n)

    def component(self, n: int) -> IntMatrix:
        m = self._comps.get(n)
        if m is None:
            return IntMatrix.zero(self.target.rank(n), self.source.rank(n))
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        lo = min(self.source.min_deg, self.target.min_deg)
        hi = max(self.source.max_deg, self.target.max_deg)
        return all(self.component(n) == other.component(n) for n in range(lo, hi + 1))

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValidationError("composition mismatch")
        lo = min(other.source.min_deg, self.target.min_deg)
        hi = max(other.source.max_deg, self.target.max_deg)
        comps = {n: self.component(n) @ other.component(n) for n in range(lo, hi + 1)}
        return ChainMap(other.source, self.target, comps)

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {n: IntMatrix.identity(c.rank(n)) for n in c.degrees()})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, {})


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: cone(f)_n = C_{n-1} + D_n with
    d(c, x) = (-dc, dx - f(c)); acyclic exactly when f is a
    quasi-isomorphism."""
    src, tgt = f.source, f.target
    lo = min(src.min_deg + 1, tgt.min_deg)
    hi = max(src.max_deg + 1, tgt.max_deg)
    ranks = {}
    for n in range(lo, hi + 1):
        r = src.rank(n - 1) + tgt.rank(n)
        if r:
            ranks[n] = r
    d = {}
    for n in range(lo + 1, hi + 1):
        sc, st = src.rank(n - 1), tgt.rank(n)
        rc, rt = src.rank(n - 2), tgt.rank(n - 1)
        if (sc + st) == 0 or (rc + rt) == 0:
            continue
        rows = []
        dsrc = src.d(n - 1)
        dtgt = tgt.d(n)
        fc = f.component(n - 1)
        for i in range(rc):
            rows.append([-dsrc.at(i, j) for j in range(sc)] + [0] * st)
        for i in range(rt):
            rows.append([-fc.at(i, j) for j in range(sc)] + [dtgt.at(i, j) for j in range(st)])
        d[n] = IntMatrix.from_rows(rows, cols=sc + st)
    if not ranks:
        return zero_complex()
    return ChainComplex(lo, hi, ranks, d)


@dataclass(frozen=True)
class DegreeVerdict:
    source_group: HomologyGroup
    target_group: HomologyGroup
    groups_agree: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        # a surjection between abstractly isomorphic finitely generated
        # abelian groups is an isomorphism (they are Hopfian)
        return self.groups_agree and self.surjective


@dataclass(frozen=True)
class QuasiIsoReport:
    verdicts: dict
    is_quasi_iso: bool


def check_quasi_iso(f: ChainMap) -> QuasiIsoReport:
    """Degreewise test that f induces isomorphisms on homology.

    The induced map H_n(f) is surjective iff [F | relations_target] has
    trivial cokernel; combined with abstract equality of the two groups
    this decides isomorphism exactly.
    """
    verdicts = {}
    lo = min(f.source.min_deg, f.target.min_deg)
    hi = max(f.source.max_deg, f.target.max_deg)
    ok = True
    for n in range(lo, hi + 1):
        hs = f.source.homology(n)
        ht = f.target.homology(n)
        if f.target.rank(n) == 0:
            surj = ht.is_zero()
        else:
            zt = f.target.cycles(n)
            if zt.cols == 0:
                surj = True
            else:
                cols = []
                if f.source.rank(n):
                    zs = f.source.cycles(n)
                    img = solve_exact(zt, f.component(n) @ zs)
                    if img is None:
                        raise ValidationError("map does not preserve cycles in degree %d" % n)
                    cols.append(img)
                rel = solve_exact(zt, f.target.d(n + 1))
                if rel is None:
                    raise ValidationError("boundaries escape cycles in degree %d" % n)
                cols.append(rel)
                combined = hstack([c for c in cols if c.cols]) if any(c.cols for c in cols) else IntMatrix.zero(zt.cols, 0)
                surj = group_from_presentation(zt.cols, combined).is_zero()
        verdict = DegreeVerdict(hs, ht, hs == ht, surj)
        verdicts[n] = verdict
        ok = ok and verdict.isomorphism
    return QuasiIsoReport(verdicts, ok)


def hom_complex(k: ChainComplex, l: ChainComplex) -> ChainComplex:
    """Hom(K, L)_n = product over i of Hom(K_i, L_{i+n}), with
    (df)(x) = d_L f(x) - (-1)^n f(d_K x).

    Basis in degree n: blocks indexed by i increasing; a block is the
    row-major vectorisation of matrices K_i -> L_{i+n}.  Degree-0 cycles
    are chain maps and degree-0 homology is maps modulo chain homotopy.
    """
    lo = l.min_deg - k.max_deg
    hi = l.max_deg - k.min_deg
    blocks = {}
    ranks = {}
    for n in range(lo, hi + 1):
        idx = []
        total = 0
        for i in range(k.min_deg, k.max_deg + 1):
            r = k.rank(i) * l.rank(i + n)
            if r:
                idx.append((i, total, r))
                total += r
        blocks[n] = idx
        if total:
            ranks[n] = total
    d = {}
    for n in range(lo + 1, hi + 1):
        src = blocks[n]
        tgt = blocks[n - 1]
        if not src or not tgt:
            continue
        tgt_at = {i: off for i, off, _ in tgt}
        rows = sum(r for _, _, r in tgt)
        cols = sum(r for _, _, r in src)
        out = [[0] * cols for _ in range(rows)]
        sign = -1 if n % 2 else 1
        for i, coff, _ in src:
            # post-composition with d_L : block i -> block i
            if i in tgt_at and l.rank(i + n - 1):
                blk = l.d(i + n).kron(IntMatrix.identity(k.rank(i)))
                roff = tgt_at[i]
                for a in range(blk.rows):
                    row = out[roff + a]
                    for b in range(blk.cols):
                        row[coff + b] += blk.at(a, b)
            # pre-composition with d_K : block i -> block i+1
            if i + 1 in tgt_at and l.rank(i + n):
                blk = IntMatrix.identity(l.rank(i + n)).kron(k.d(i + 1).transpose())
                roff = tgt_at[i + 1]
                for a in range(blk.rows):
                    row = out[roff + a]
                    for b in range(blk.cols):
                        row[coff + b] -= sign * blk.at(a, b)
        d[n] = IntMatrix.from_rows(out, cols=cols)
    if not ranks:
        return zero_complex()
    return ChainComplex(lo, hi, ranks, d)


def homotopy_class_group(k: ChainComplex, l: ChainComplex) -> HomologyGroup:
    """H_0 of Hom(K, L): chain maps K -> L modulo chain homotopy."""
    return hom_complex(k, l).homology(0)


@dataclass(frozen=True)
class TowerReport:
    """Outcome of the hard-truncation tower of Hom groups.

    The towers arising from bounded complexes are eventually constant, so
    the limit is the stable value and the derived limit obstruction
    vanishes; `exactness_verified` records that the restriction map from
    the full Hom group to the stable stage is an isomorphism, computed
    rather than assumed.
    """

    stabilization_index: int
    limit_group: HomologyGroup
    lim1_vanishes: bool
    hom_full: HomologyGroup
    exactness_verified: bool
    tower: tuple = field(default_factory=tuple)


def sigma_tower_report(k: ChainComplex, l: ChainComplex) -> TowerReport:
    top = k.max_deg
    while top > k.min_deg and k.rank(top) == 0:
        top -= 1
    if k.rank(top) == 0:
        stab = k.min_deg - 1
    else:
        stab = top
    tower = tuple(
        (n, homotopy_class_group(k.truncate_stupid(n), l))
        for n in range(k.min_deg, k.max_deg + 1)
    )
    hom_full = homotopy_class_group(k, l)
    stable_stage = k.truncate_stupid(stab)
    limit_group = homotopy_class_group(stable_stage, l)
    # beyond the stabilisation index the truncation is the complex itself,
    # so the restriction map of Hom complexes is the identity; verify that
    # it is a quasi-isomorphism instead of taking it on faith
    full_hom = hom_complex(k, l)
    stable_hom = hom_complex(stable_stage, l)
    restriction = ChainMap(
        full_hom,
        stable_hom,
        {
            n: IntMatrix.identity(full_hom.rank(n))
            for n in full_hom.degrees()
            if full_hom.rank(n) == stable_hom.rank(n)
        },
    )
    verdict = check_quasi_iso(restriction).verdicts.get(0)
    exact = verdict.isomorphism if verdict is not None else (hom_full == limit_group)
    constant = all(g == limit_group for n, g in tower if n >= stab)
    return TowerReport(
        stabilization_index=stab,
        limit_group=limit_group,
        lim1_vanishes=constant,
        hom_full=hom_full,
        exactness_verified=exact and hom_full == limit_group,
        tower=tower,
    )
