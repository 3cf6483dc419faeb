"""Exact linear algebra over Z and Q for small dense matrices.

Everything in this package runs on arbitrary-precision integers and
`fractions.Fraction`; there is deliberately no floating point anywhere.
Matrices are plain sequences of row sequences.  Functions return tuples of
tuples so results can live inside frozen dataclasses.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]
FracVec = tuple[Fraction, ...]
FracMat = tuple[FracVec, ...]


def freeze(rows: Iterable[Sequence]) -> tuple:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Mat:
    return tuple((0,) * n for _ in range(m))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v: Sequence, a: Sequence[Sequence]) -> tuple:
    return tuple(sum(x * y for x, y in zip(v, col)) for col in zip(*a))


def dot(u: Sequence, v: Sequence) -> int | Fraction:
    return sum(x * y for x, y in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(v: Sequence, c) -> tuple:
    return tuple(c * x for x in v)


def vec_neg(v: Sequence) -> tuple:
    return tuple(-x for x in v)


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i)
    )


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b), g >= 0.

    The pair (s, t) is normalized to minimal |t|; in particular a | b gives
    (|a|, sign(a), 0), which keeps the HNF/SNF pivot operations from
    cycling.
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    g, s, t = old_r, old_s, old_t
    if g < 0:
        g, s, t = -g, -s, -t
    if a and g:
        m = a // g
        am = abs(m)
        t2 = t % am
        if 2 * t2 > am:
            t2 -= am
        k = (t2 - t) // m
        s -= k * (b // g)
        t = t2
    return g, s, t


# ---------------------------------------------------------------------------
# Hermite / Smith normal forms with transforms
# ---------------------------------------------------------------------------


def hnf_row(a: Sequence[Sequence[int]]) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U*a == H, pivots positive, entries
    above each pivot reduced into [0, pivot), zero rows at the bottom.
    """
    h = [list(map(int, row)) for row in a]
    m = len(h)
    n = len(h[0]) if m else 0
    u = [list(row) for row in identity(m)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if h[i][c]), None)
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            if not h[i][c]:
                continue
            g, s, t = xgcd(h[r][c], h[i][c])
            p, q = h[r][c] // g, h[i][c] // g
            h[r], h[i] = (
                [s * x + t * y for x, y in zip(h[r], h[i])],
                [p * y - q * x for x, y in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [s * x + t * y for x, y in zip(u[r], u[i])],
                [p * y - q * x for x, y in zip(u[r], u[i])],
            )
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == m:
            break
    return freeze(h), freeze(u)


def hnf_basis(a: Sequence[Sequence[int]]) -> Mat:
    """Canonical basis (nonzero HNF rows) of the row lattice of `a`."""
    h, _ = hnf_row(a)
    return tuple(row for row in h if any(row))


def kernel_int(a: Sequence[Sequence[int]]) -> Mat:
    """Basis of {x in Z^n : a @ x = 0}, returned as columns (n x k).

    The kernel of an integer matrix is saturated by construction.
    """
    n = len(a[0]) if a else 0
    if not a:
        return identity(n)
    h, u = hnf_row(transpose(a))
    rows = [u[i] for i in range(len(h)) if not any(h[i])]
    return transpose(rows) if rows else tuple(() for _ in range(n))


def snf(a: Sequence[Sequence[int]]) -> tuple[Mat, Mat, Mat]:
    """Smith normal form: returns (D, U, V) with U*a*V == D diagonal,
    d_1 | d_2 | ... nonnegative, U and V unimodular."""
    d = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    def row_op(i: int, j: int, g: int, s: int, t: int, p: int, q: int) -> None:
        d[i], d[j] = (
            [s * x + t * y for x, y in zip(d[i], d[j])],
            [p * y - q * x for x, y in zip(d[i], d[j])],
        )
        u[i], u[j] = (
            [s * x + t * y for x, y in zip(u[i], u[j])],
            [p * y - q * x for x, y in zip(u[i], u[j])],
        )

    def col_op(i: int, j: int, g: int, s: int, t: int, p: int, q: int) -> None:
        for row in d:
            row[i], row[j] = s * row[i] + t * row[j], p * row[j] - q * row[i]
        for row in v:
            row[i], row[j] = s * row[i] + t * row[j], p * row[j] - q * row[i]

    t0 = 0
    while t0 < min(m, n):
        # move a nonzero entry of smallest magnitude into the corner
        best = None
        for i in range(t0, m):
            for j in range(t0, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        d[t0], d[bi] = d[bi], d[t0]
        u[t0], u[bi] = u[bi], u[t0]
        if bj != t0:
            for row in d:
                row[t0], row[bj] = row[bj], row[t0]
            for row in v:
                row[t0], row[bj] = row[bj], row[t0]
        while True:
            for i in range(t0 + 1, m):
                if d[i][t0]:
                    g, s, t = xgcd(d[t0][t0], d[i][t0])
                    row_op(t0, i, g, s, t, d[t0][t0] // g, d[i][t0] // g)
            if any(d[t0][j] for j in range(t0 + 1, n)):
                for j in range(t0 + 1, n):
                    if d[t0][j]:
                        g, s, t = xgcd(d[t0][t0], d[t0][j])
                        col_op(t0, j, g, s, t, d[t0][t0] // g, d[t0][j] // g)
                continue
            if any(d[i][t0] for i in range(t0 + 1, m)):
                continue
            break
        # enforce divisibility of the remaining block by the corner entry
        stray = None
        for i in range(t0 + 1, m):
            for j in range(t0 + 1, n):
                if d[i][j] % d[t0][t0]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            d[t0] = [x + y for x, y in zip(d[t0], d[stray])]
            u[t0] = [x + y for x, y in zip(u[t0], u[stray])]
            continue
        if d[t0][t0] < 0:
            d[t0] = [-x for x in d[t0]]
            u[t0] = [-x for x in u[t0]]
        t0 += 1
    return freeze(d), freeze(u), freeze(v)


def det_int(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_int(a: Sequence[Sequence[int]]) -> int:
    return len(hnf_basis(a)) if a else 0


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------


def solve_frac(a: Sequence[Sequence], b: Sequence) -> FracVec | None:
    """One rational solution of a @ x = b, or None if inconsistent.

    When the solution space is positive-dimensional an arbitrary (but
    deterministic) representative is returned.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(m):
        if aug[i][n] and not any(aug[i][j] for j in range(n)):
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = aug[r][n]
    return tuple(x)


def solve_int(a: Sequence[Sequence[int]], b: Sequence[int]) -> Vec | None:
    """One integer solution of a @ x = b, or None if there is none."""
    m = len(a)
    n = len(a[0]) if m else 0
    h, u = hnf_row(transpose(a))  # a @ u^T = h^T, columns of h^T triangular
    ht = transpose(h)  # m x n, column j has pivot at increasing row
    res = list(map(int, b))
    y = [0] * n
    for j in range(n):
        piv = next((i for i in range(m) if ht[i][j]), None)
        if piv is None:
            continue
        if res[piv] % ht[piv][j]:
            return None
        y[j] = res[piv] // ht[piv][j]
        if y[j]:
            for i in range(m):
                res[i] -= y[j] * ht[i][j]
    if any(res):
        return None
    return vec_mat(y, u)  # x = u^T @ y


def inv_frac(a: Sequence[Sequence]) -> FracMat:
    """Exact inverse of a square matrix over Q."""
    n = len(a)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(a)
    ]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return freeze(row[n:] for row in aug)


def inv_unimodular(a: Sequence[Sequence[int]]) -> Mat:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    inv = inv_frac(a)
    out = freeze(tuple(int(x) for x in row) for row in inv)
    if any(Fraction(out[i][j]) != inv[i][j] for i in range(len(a)) for j in range(len(a))):
        raise ValueError("matrix is not unimodular")
    return out


# ---------------------------------------------------------------------------
# Symmetric reduction (signature) and LDL^T
# ---------------------------------------------------------------------------


def signature(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Exact signature (n_plus, n_minus, n_zero) of a symmetric matrix.

    Symmetric congruence reduction over Q.  A block with all-zero diagonal
    is handled by the congruence row_i += row_j (a 2x2 hyperbolic pivot,
    which contributes one positive and one negative inertia index).
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((k for k in active if a[k][k]), None)
        if i is None:
            pair = next(
                ((k, l) for k in active for l in active if k != l and a[k][l]), None
            )
            if pair is None:
                break  # remaining block is identically zero
            k, l = pair
            for j in range(n):
                a[k][j] += a[l][j]
            for j in range(n):
                a[j][k] += a[j][l]
            i = k
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for k in active:
            if a[k][i]:
                f = a[k][i] / d
                for j in range(n):
                    a[k][j] -= f * a[i][j]
                for j in range(n):
                    a[j][k] -= f * a[j][i]
    return pos, neg, n - pos - neg


def ldl(gram: Sequence[Sequence]) -> tuple[FracVec, FracMat]:
    """LDL^T decomposition of a positive definite symmetric matrix.

    Returns (d, l) with Q(x) = sum_i d_i (x_i + sum_{j>i} l[i][j] x_j)^2.
    Raises ValueError if the matrix is not positive definite.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("matrix is not positive definite")
        for j in range(i + 1, n):
            l[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= a[i][j] * a[i][k] / d[i]
                a[k][j] = a[j][k]
    return tuple(d), freeze(l)


def _floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative rational."""
    if x < 0:
        raise ValueError("negative radicand")
    return isqrt(x.numerator * x.denominator) // x.denominator


def _quad_range(c: Fraction, t: Fraction) -> range:
    """Integers x with (x + c)^2 <= t (empty when t < 0)."""
    if t < 0:
        return range(0)
    a, b = c.numerator, c.denominator
    u = _floor_sqrt(t * b * b)  # floor(b*sqrt(t))
    return range(-((u + a) // b), (u - a) // b + 1)


def fp_enumerate(
    gram_posdef: Sequence[Sequence[int]],
    upper,
    lower=1,
    center: Sequence | None = None,
) -> list[tuple[Vec, Fraction]]:
    """All integer x with lower <= Q(x + center) <= upper, Q positive definite.

    Fincke-Pohst with an exact rational LDL^T; `center` may be a rational
    vector (defaults to 0).  Output is sorted by (value, coordinates) so
    callers get byte-for-byte reproducible results.
    """
    n = len(gram_posdef)
    upper = Fraction(upper)
    lower = Fraction(lower)
    if n == 0:
        return [((), Fraction(0))] if lower <= 0 <= upper else []
    d, l = ldl(gram_posdef)
    cen = [Fraction(c) for c in center] if center is not None else [Fraction(0)] * n
    out: list[tuple[Vec, Fraction]] = []
    x = [0] * n

    def recurse(i: int, used: Fraction) -> None:
        budget = upper - used
        c = cen[i] + sum(l[i][j] * (x[j] + cen[j]) for j in range(i + 1, n))
        for xi in _quad_range(c, budget / d[i]):
            x[i] = xi
            val = used + d[i] * (xi + c) ** 2
            if i == 0:
                if val >= lower:
                    out.append((tuple(x), val))
            else:
                recurse(i - 1, val)
        x[i] = 0

    recurse(n - 1, Fraction(0))
    out.sort(key=lambda pair: (pair[1], pair[0]))
    return out
