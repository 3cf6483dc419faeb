"""Integral lattices: even bilinear forms over Z with exact arithmetic.

A lattice is stored as an integer Gram matrix; a vector is an integer
coordinate tuple, and the pairing of v, w is v * G * w^T.  Embeddings store
images of the sub-basis as matrix columns; isometries act on coordinate
columns.  All computations are exact (integers and Fractions, no floating
point).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .forms import FiniteQuadraticForm, SearchBudgetExceeded
from .intmat import (
    FracMat,
    Mat,
    Vec,
    det_int,
    fp_enumerate,
    freeze,
    hnf_basis,
    identity,
    inv_unimodular,
    kernel_int,
    mat_mul,
    rank_int,
    signature,
    snf,
    transpose,
)


@dataclass(frozen=True)
class IntegralLattice:
    """Free Z-module with an integer-valued symmetric bilinear form."""

    gram: Mat
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        g = self.gram
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return _det_cached(self.gram)

    @property
    def signature(self) -> tuple[int, int]:
        """(positive, negative) inertia indices of the form."""
        pos, neg, _ = _signature_cached(self.gram)
        return pos, neg

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_degenerate(self) -> bool:
        return self.rank > 0 and self.det == 0

    @property
    def is_definite(self) -> bool:
        pos, neg = self.signature
        return (pos == 0 or neg == 0) and pos + neg == self.rank

    def norm(self, v: Sequence[int]) -> int:
        return self.pairing(v, v)

    def pairing(self, v: Sequence[int], w: Sequence[int]) -> int:
        g = self.gram
        n = self.rank
        return sum(
            v[i] * g[i][j] * w[j] for i in range(n) for j in range(n) if v[i]
        )

    def relabel(self, label: str | None) -> "IntegralLattice":
        return IntegralLattice(self.gram, label)


@lru_cache(maxsize=None)
def _det_cached(gram: Mat) -> int:
    return det_int(gram)


@lru_cache(maxsize=None)
def _signature_cached(gram: Mat) -> tuple[int, int, int]:
    return signature(gram)


def from_rows(
    gram_rows: Sequence[Sequence[int]], label: str | None = None
) -> IntegralLattice:
    return IntegralLattice(freeze(gram_rows), label)


def gram_invariants(lat: IntegralLattice) -> tuple[int, int, tuple[int, int]]:
    """(rank, determinant, (positive, negative) signature)."""
    return lat.rank, lat.det, lat.signature


def direct_sum(*parts: IntegralLattice) -> IntegralLattice:
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        r = p.rank
        for i in range(r):
            for j in range(r):
                g[off + i][off + j] = p.gram[i][j]
        off += r
    return IntegralLattice(freeze(g))


def rescale(lat: IntegralLattice, n: int) -> IntegralLattice:
    """Same module with the form multiplied by n; must remain even."""
    if n == 0:
        raise ValueError("rescaling factor must be nonzero")
    if any((n * lat.gram[i][i]) % 2 for i in range(lat.rank)):
        raise ValueError("rescaling would produce an odd lattice")
    return IntegralLattice(
        freeze(tuple(n * x for x in row) for row in lat.gram)
    )


def gram_in_basis(lat: IntegralLattice, rows: Sequence[Sequence[int]]) -> Mat:
    """Gram matrix of the given coordinate vectors inside the lattice."""
    return freeze(
        tuple(lat.pairing(v, w) for w in rows) for v in rows
    )


def sublattice(lat: IntegralLattice, rows: Sequence[Sequence[int]]) -> IntegralLattice:
    return IntegralLattice(gram_in_basis(lat, rows))


# ---------------------------------------------------------------------------
# Embeddings and isometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Sublattice of a host: column j of `matrix` is the image of the j-th
    basis vector of `sub` in host coordinates."""

    host: IntegralLattice
    sub: IntegralLattice
    matrix: Mat

    def __post_init__(self) -> None:
        n, k = self.host.rank, self.sub.rank
        if len(self.matrix) != n or any(len(r) != k for r in self.matrix):
            raise ValueError("embedding matrix has the wrong shape")
        rows = self.vectors
        if gram_in_basis(self.host, rows) != self.sub.gram:
            raise ValueError("embedding does not transport the form")
        if k and rank_int(self.matrix) != k:
            raise ValueError("embedding columns are dependent")

    @property
    def vectors(self) -> Mat:
        """Images of the sub-basis as coordinate tuples (matrix columns)."""
        return transpose(self.matrix)


def embedding_of(
    host: IntegralLattice, vectors: Sequence[Sequence[int]]
) -> Embedding:
    """Embedding of the abstract lattice spanned by the given coordinate
    vectors (one vector per row)."""
    rows = freeze(vectors)
    if rows:
        matrix = transpose(rows)
    else:
        matrix = freeze(() for _ in range(host.rank))
    return Embedding(host, sublattice(host, rows), matrix)


@dataclass(frozen=True)
class IsometryAction:
    """Self-isometry acting on coordinate columns: x -> matrix @ x."""

    lattice: IntegralLattice
    matrix: Mat
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        g = self.lattice.gram
        m = self.matrix
        if mat_mul(mat_mul(transpose(m), g), m) != g:
            raise ValueError("matrix does not preserve the form")
        if det_int(m) not in (1, -1):
            raise ValueError("matrix is not invertible over Z")

    def apply(self, v: Sequence[int]) -> Vec:
        m = self.matrix
        n = self.lattice.rank
        return tuple(
            sum(m[i][j] * v[j] for j in range(n)) for i in range(n)
        )

    @property
    def is_involution(self) -> bool:
        return mat_mul(self.matrix, self.matrix) == identity(self.lattice.rank)

    def compose(self, other: "IsometryAction") -> "IsometryAction":
        """Action applying `other` first, then self."""
        if self.lattice != other.lattice:
            raise ValueError("actions live on different lattices")
        return IsometryAction(self.lattice, mat_mul(self.matrix, other.matrix))


# ---------------------------------------------------------------------------
# Discriminant group and form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantData:
    """Discriminant group L*/L with generator lifts.

    `form` lives on generators g_1, ..., g_k of orders d_1 | ... | d_k;
    lift row i is a rational coordinate vector representing g_i inside L*.
    """

    form: FiniteQuadraticForm
    lifts: FracMat


def discriminant_group(lat: IntegralLattice) -> DiscriminantData:
    """Structure of L*/L for a non-degenerate lattice L."""
    if lat.is_degenerate:
        raise ValueError("discriminant group requires a non-degenerate form")
    n = lat.rank
    if n == 0:
        return DiscriminantData(FiniteQuadraticForm((), ()), ())
    d, _, v = snf(lat.gram)
    orders = [d[i][i] for i in range(n)]
    keep = [i for i in range(n) if orders[i] > 1]
    lifts = tuple(
        tuple(Fraction(v[r][i], orders[i]) for r in range(n)) for i in keep
    )
    g = lat.gram
    gram = []
    for a, i in enumerate(keep):
        row = []
        for b, j in enumerate(keep):
            val = sum(
                lifts[a][r] * g[r][s] * lifts[b][s]
                for r in range(n)
                for s in range(n)
            )
            row.append(val % 2 if a == b else val % 1)
        gram.append(tuple(row))
    form = FiniteQuadraticForm(tuple(orders[i] for i in keep), tuple(gram))
    return DiscriminantData(form, lifts)


def discriminant_form(lat: IntegralLattice) -> FiniteQuadraticForm:
    return discriminant_group(lat).form


# ---------------------------------------------------------------------------
# Saturation, complements, radicals
# ---------------------------------------------------------------------------


def _saturation_rows(rows: Sequence[Sequence[int]]) -> Mat:
    """Basis (HNF rows) of (span_Q of rows) intersected with Z^n."""
    if not rows:
        return ()
    ker = kernel_int(rows)  # columns spanning {x : rows @ x = 0}
    n = len(rows[0])
    if not any(ker):
        return identity(n)
    sat_cols = kernel_int(transpose(ker))
    return hnf_basis(transpose(sat_cols))


def saturation(emb: Embedding) -> Embedding:
    """Smallest primitive sublattice of the host containing the image."""
    return embedding_of(emb.host, _saturation_rows(emb.vectors))


def is_primitive(emb: Embedding) -> bool:
    """True when the image is saturated (host/image is torsion-free)."""
    return hnf_basis(emb.vectors) == _saturation_rows(emb.vectors)


def _complement_rows(
    lat: IntegralLattice, rows: Sequence[Sequence[int]]
) -> Mat:
    if not rows:
        return identity(lat.rank)
    a = mat_mul(freeze(rows), lat.gram)
    ker = kernel_int(a)
    if not any(ker):
        return ()
    return hnf_basis(transpose(ker))


def orthogonal_complement(emb: Embedding) -> Embedding:
    """Embedding of {v in host : v . image = 0}; always primitive, and
    degenerate exactly when the complement meets the image (isotropic
    directions)."""
    return embedding_of(emb.host, _complement_rows(emb.host, emb.vectors))


def radical(lat: IntegralLattice) -> Mat:
    """Basis rows of the kernel of the bilinear form."""
    ker = kernel_int(lat.gram)
    if not any(ker):
        return ()
    return hnf_basis(transpose(ker))


def quotient_by_radical(lat: IntegralLattice) -> tuple[IntegralLattice, Mat]:
    """Non-degenerate quotient L / rad(L) and coordinate rows of the
    complement basis used to present it."""
    rad = radical(lat)
    n = lat.rank
    if not rad:
        return lat, identity(n)
    _, _, v = snf(rad)
    vi = inv_unimodular(v)
    # row span of rad = span of the first r rows of v^-1; the rest descend
    # to a basis of the quotient
    comp = tuple(vi[i] for i in range(len(rad), n))
    return sublattice(lat, comp), freeze(comp)


# ---------------------------------------------------------------------------
# Short vectors (definite lattices)
# ---------------------------------------------------------------------------


def _definite_sign(lat: IntegralLattice) -> int:
    pos, neg = lat.signature
    if pos + neg < lat.rank:
        raise ValueError("short vectors require a non-degenerate lattice")
    if neg == 0:
        return 1
    if pos == 0:
        return -1
    raise ValueError("short vectors require a definite lattice")


def short_vectors(
    lat: IntegralLattice, max_abs_norm: int, min_abs_norm: int = 1
) -> list[tuple[Vec, int]]:
    """Sign representatives of vectors with min <= |v.v| <= max.

    One vector per pair {v, -v} (the lexicographically larger), sorted by
    |norm| then coordinates, so equal-norm vectors appear consecutively.
    Only definite lattices are supported.
    """
    if lat.rank == 0 or max_abs_norm < min_abs_norm:
        return []
    sign = _definite_sign(lat)
    g = lat.gram if sign > 0 else freeze(
        tuple(-x for x in row) for row in lat.gram
    )
    out = []
    for vec, val in fp_enumerate(g, max_abs_norm, lower=min_abs_norm):
        if vec >= tuple(-x for x in vec):
            out.append((vec, sign * val))
    out.sort(key=lambda t: (abs(t[1]), t[0]))
    return out


def vectors_of_norm(lat: IntegralLattice, norm: int) -> list[Vec]:
    """All vectors of the given norm (both signs), definite lattices only."""
    if norm == 0:
        raise ValueError("norm must be nonzero")
    reps = short_vectors(lat, abs(norm), abs(norm))
    out = []
    for vec, val in reps:
        if val == norm:
            out.append(vec)
            out.append(tuple(-x for x in vec))
    return out


def root_count(lat: IntegralLattice) -> int:
    """Number of vectors of squared length +-2, counting both signs."""
    return 2 * len(short_vectors(lat, 2, 2))


# ---------------------------------------------------------------------------
# Isometry testing (definite lattices)
# ---------------------------------------------------------------------------


def is_isometry(lat: IntegralLattice, m: Sequence[Sequence[int]]) -> bool:
    """True when x -> m @ x preserves the form and is invertible over Z."""
    mm = freeze(m)
    if mat_mul(mat_mul(transpose(mm), lat.gram), mm) != lat.gram:
        return False
    return det_int(mm) in (1, -1)


def is_isometric_definite(
    l1: IntegralLattice,
    l2: IntegralLattice,
    budget: int = 10**7,
) -> Mat | None:
    """Search for an isometry between definite lattices.

    Returns a matrix M with M^T * G2 * M == G1 (column j = image of the
    j-th basis vector of l1 in l2 coordinates), or None if no isometry
    exists.  Exceeding the node budget raises SearchBudgetExceeded instead
    of answering.
    """
    n = l1.rank
    if n != l2.rank or l1.det != l2.det or l1.signature != l2.signature:
        return None
    if n == 0:
        return ()
    if _definite_sign(l1) != _definite_sign(l2):
        return None

    norms = sorted({abs(l1.gram[i][i]) for i in range(n)})
    cands: dict[int, list[Vec]] = {m: [] for m in norms}
    hist1: dict[int, int] = {}
    for _, val in short_vectors(l1, norms[-1]):
        hist1[abs(val)] = hist1.get(abs(val), 0) + 1
    hist2: dict[int, int] = {}
    for vec, val in short_vectors(l2, norms[-1]):
        hist2[abs(val)] = hist2.get(abs(val), 0) + 1
        if abs(val) in cands:
            cands[abs(val)].append(vec)
            cands[abs(val)].append(tuple(-x for x in vec))
    # cheap obstruction: short-vector norm histograms must agree
    if hist1 != hist2:
        return None

    # most-constrained basis vector first
    order = sorted(range(n), key=lambda i: (len(cands[abs(l1.gram[i][i])]), i))
    chosen: list[Vec] = []
    nodes = 0

    def extend(level: int) -> bool:
        nonlocal nodes
        if level == n:
            return True
        i = order[level]
        for cand in cands[abs(l1.gram[i][i])]:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(
                    f"is_isometric_definite exceeded {budget} nodes"
                )
            if l2.norm(cand) != l1.gram[i][i]:
                continue
            ok = True
            for lv in range(level):
                if l2.pairing(chosen[lv], cand) != l1.gram[order[lv]][i]:
                    ok = False
                    break
            if not ok:
                continue
            chosen.append(cand)
            if extend(level + 1):
                return True
            chosen.pop()
        return False

    if not extend(0):
        return None
    rows: list[Vec] = [()] * n
    for idx, vec in zip(order, chosen):
        rows[idx] = vec
    m = transpose(freeze(rows))
    assert mat_mul(mat_mul(transpose(m), l2.gram), m) == l1.gram
    return m


# ---------------------------------------------------------------------------
# Involutions
# ---------------------------------------------------------------------------


def invariant_split(g: IsometryAction) -> tuple[Embedding, Embedding]:
    """Fixed and anti-invariant primitive sublattices of an involution."""
    if not g.is_involution:
        raise ValueError("action is not an involution")
    lat = g.lattice
    n = lat.rank
    out = []
    for sign in (1, -1):
        a = tuple(
            tuple(g.matrix[i][j] - (sign if i == j else 0) for j in range(n))
            for i in range(n)
        )
        ker = kernel_int(a)  # columns fixed (sign=1) or negated (sign=-1)
        rows = hnf_basis(transpose(ker)) if any(ker) else ()
        out.append(embedding_of(lat, rows))
    return out[0], out[1]
