"""Finite quadratic forms on finite abelian groups.

A form lives on A = Z/d_1 x ... x Z/d_k and takes values q(x) in Q/2Z with
associated pairing b(x, y) in Q/Z.  The Gram data is stored exactly: the
diagonal holds q-values reduced into [0, 2), off-diagonal entries hold
pairing values reduced into [0, 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

from .intmat import (
    Mat,
    Vec,
    freeze,
    hnf_basis,
    identity,
    inv_unimodular,
    kernel_int,
    mat_mul,
    snf,
    solve_int,
    transpose,
)

TWO = Fraction(2)
ONE = Fraction(1)


class SearchBudgetExceeded(RuntimeError):
    """A bounded backtracking search ran out of nodes before deciding."""


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Finite quadratic form given by generator orders and a Gram table."""

    orders: tuple[int, ...]
    q_gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.orders)
        if any(o < 2 for o in self.orders):
            raise ValueError("generator orders must be >= 2")
        if len(self.q_gram) != k or any(len(r) != k for r in self.q_gram):
            raise ValueError("Gram table shape does not match orders")
        for i in range(k):
            di = self.orders[i]
            qi = self.q_gram[i][i]
            if not (0 <= qi < 2):
                raise ValueError("diagonal entries must lie in [0, 2)")
            if (qi * di * di) % 2 != 0:
                raise ValueError("q-value incompatible with generator order")
            for j in range(i):
                bij = self.q_gram[i][j]
                if bij != self.q_gram[j][i]:
                    raise ValueError("Gram table must be symmetric")
                if not (0 <= bij < 1):
                    raise ValueError("pairing entries must lie in [0, 1)")
                if (bij * di) % 1 != 0 or (bij * self.orders[j]) % 1 != 0:
                    raise ValueError("pairing incompatible with generator orders")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def group_order(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    def elements(self) -> Iterator[Vec]:
        return itertools.product(*(range(o) for o in self.orders))

    def q_value(self, x: Sequence[int]) -> Fraction:
        k = len(self.orders)
        g = self.q_gram
        total = Fraction(0)
        for i in range(k):
            if x[i]:
                total += g[i][i] * x[i] * x[i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += 2 * g[i][j] * x[i] * x[j]
        return total % 2

    def b_value(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        k = len(self.orders)
        g = self.q_gram
        total = Fraction(0)
        for i in range(k):
            if x[i]:
                for j in range(k):
                    if y[j]:
                        total += g[i][j] * x[i] * y[j]
        return total % 1

    def element_order(self, x: Sequence[int]) -> int:
        n = 1
        for xi, oi in zip(x, self.orders):
            n = lcm(n, oi // gcd(oi, xi))
        return n

    def reduce(self, x: Sequence[int]) -> Vec:
        return tuple(xi % oi for xi, oi in zip(x, self.orders))


def trivial_form() -> FiniteQuadraticForm:
    return FiniteQuadraticForm((), ())


def cyclic_block(order: int, value: Fraction | int) -> FiniteQuadraticForm:
    """Cyclic form Z/order with q(generator) = value in Q/2Z."""
    value = Fraction(value) % 2
    if order < 1:
        raise ValueError("order must be positive")
    if order == 1:
        if value % 2:
            raise ValueError("nontrivial value on the trivial group")
        return trivial_form()
    if (value * order * order) % 2 != 0:
        raise ValueError("q-value denominator incompatible with order")
    return FiniteQuadraticForm((order,), ((value,),))


def u_block(n: int) -> FiniteQuadraticForm:
    """Hyperbolic block u(n) on (Z/n)^2: q = 0 on generators, b = -1/n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return trivial_form()
    b = Fraction(-1, n) % 1
    z = Fraction(0)
    return FiniteQuadraticForm((n, n), ((z, b), (b, z)))


def sum_forms(parts: Iterable[FiniteQuadraticForm]) -> FiniteQuadraticForm:
    parts = list(parts)
    orders = tuple(o for p in parts for o in p.orders)
    k = len(orders)
    gram = [[Fraction(0)] * k for _ in range(k)]
    off = 0
    for p in parts:
        r = p.rank
        for i in range(r):
            for j in range(r):
                gram[off + i][off + j] = p.q_gram[i][j]
        off += r
    return FiniteQuadraticForm(orders, freeze(gram))


def negate(q: FiniteQuadraticForm) -> FiniteQuadraticForm:
    k = q.rank
    gram = [
        [
            (-q.q_gram[i][j]) % (2 if i == j else 1)
            for j in range(k)
        ]
        for i in range(k)
    ]
    return FiniteQuadraticForm(q.orders, freeze(gram))


def group_invariants(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of the product of cyclic groups."""
    k = len(orders)
    if k == 0:
        return ()
    diag = tuple(
        tuple(orders[i] if i == j else 0 for j in range(k)) for i in range(k)
    )
    d, _, _ = snf(diag)
    return tuple(d[i][i] for i in range(k) if d[i][i] > 1)


def length(q: FiniteQuadraticForm) -> int:
    """Minimal number of generators of the underlying group."""
    return len(group_invariants(q.orders))


@lru_cache(maxsize=None)
def _int_gram(q: FiniteQuadraticForm) -> tuple[Mat, int]:
    """Gram table as an integer matrix over a common denominator."""
    den = 1
    for row in q.q_gram:
        for x in row:
            den = lcm(den, x.denominator)
    num = freeze(
        tuple(int(x * den) for x in row) for row in q.q_gram
    )
    return num, den


def is_degenerate(q: FiniteQuadraticForm) -> bool:
    """True iff some nonzero element pairs integrally with the whole group.

    The adjoint map A -> Hom(A, Q/Z) is bijective exactly when the index of
    {x in Z^k : Gram*x integral} in Z^k equals |A|.
    """
    k = q.rank
    if k == 0:
        return False
    num, den = _int_gram(q)
    gens = [list(row) for row in num]  # num is symmetric: rows = columns
    for i in range(k):
        e = [0] * k
        e[i] = den
        gens.append(e)
    lam = hnf_basis(gens)
    index = 1
    for i, row in enumerate(lam):
        index *= row[i]
    # adjoint image size inside (Z/den)^k is den^k / [Z^k : num Z^k + den Z^k]
    return den**k // index != q.group_order


# ---------------------------------------------------------------------------
# Milgram / Gauss-sum signature, exact cyclotomic arithmetic
# ---------------------------------------------------------------------------


def _cyclotomic_reduce(poly: list[int], m: int) -> list[int]:
    """Remainder of poly (coefficients, low degree first) mod Phi_m.

    Only the shapes needed here are supported: m a power of two, or
    m = 4 * p^a with p an odd prime.
    """
    if m & (m - 1) == 0:  # power of two: Phi_m = x^(m/2) + 1
        half = m // 2
        out = [0] * half
        for e, c in enumerate(poly):
            if c:
                out[e % half] += -c if (e // half) % 2 else c
        return out
    # m = 4 * p^a: Phi_m(x) = Phi_{p^a}(-x^2), explicit coefficients
    odd = m // 4
    p = min(f for f in range(3, odd + 1, 2) if odd % f == 0)
    a = 0
    t = odd
    while t % p == 0:
        t //= p
        a += 1
    if t != 1 or m != 4 * p**a:
        raise ValueError(f"unsupported cyclotomic modulus {m}")
    step = 2 * p ** (a - 1)
    phi = [0] * ((p - 1) * step + 1)
    for i in range(p):
        phi[i * step] = (-1) ** i
    # polynomial remainder over Z (Phi is monic up to sign of leading coeff)
    rem = list(poly)
    dphi = len(phi) - 1
    lead = phi[-1]
    while len(rem) > dphi:
        c = rem[-1]
        if c:
            if c % lead:
                # leading coefficient is +-1 for these shapes
                raise ArithmeticError("non-monic cyclotomic division")
            f = c // lead
            for i, pc in enumerate(phi):
                rem[len(rem) - 1 - dphi + i] -= f * pc
        rem.pop()
    return rem


def _cyclo_equal(counts: dict[int, int], other: dict[int, int], m: int) -> bool:
    poly = [0] * m
    for e, c in counts.items():
        poly[e % m] += c
    for e, c in other.items():
        poly[e % m] -= c
    return not any(_cyclotomic_reduce(poly, m))


def _prime_part_gens(q: FiniteQuadraticForm, p: int) -> list[tuple[Vec, int]]:
    """Generators of the p-Sylow subgroup with their orders."""
    gens = []
    for i, o in enumerate(q.orders):
        a = 0
        t = o
        while t % p == 0:
            t //= p
            a += 1
        if a:
            g = [0] * q.rank
            g[i] = t  # kill the prime-to-p part
            gens.append((tuple(g), p**a))
    return gens


def _scaled_gen_gram(
    q: FiniteQuadraticForm, gens: Sequence[Vec]
) -> tuple[list[list[int]], int]:
    """Ambient Gram of the given group elements, over its own denominator.

    Returns (integer matrix, d) with entry/d an exact representative of
    b(g_i, g_j) (of q(g_i) on the diagonal); representatives are enough
    because q(x) is computed mod 2 and off-diagonal terms enter doubled.
    """
    num, den = _int_gram(q)
    k = q.rank
    s = len(gens)
    fr = [
        [
            Fraction(
                sum(
                    gens[i][a] * num[a][b] * gens[j][b]
                    for a in range(k)
                    for b in range(k)
                ),
                den,
            )
            for j in range(s)
        ]
        for i in range(s)
    ]
    d = 1
    for row in fr:
        for x in row:
            d = lcm(d, x.denominator)
    return [[int(x * d) for x in row] for row in fr], d


def _gauss_counts(
    q: FiniteQuadraticForm, gens: list[tuple[Vec, int]], m: int
) -> dict[int, int]:
    """Exponent histogram over the subgroup of zeta_m^(q(x) * m/2)."""
    s = len(gens)
    gmat, d = _scaled_gen_gram(q, [g for g, _ in gens])
    mod = 2 * d
    if m % mod:
        raise ArithmeticError("modulus does not clear denominators")
    f = m // mod
    counts: dict[int, int] = {}
    coords = [0] * s
    val = 0  # q(x) * d, mod 2*d
    rowsum = [0] * s  # (gmat @ coords)_j mod 2*d
    total = 1
    for _, o in gens:
        total *= o
    for _ in range(total):
        e = (val * f) % m
        counts[e] = counts.get(e, 0) + 1
        # odometer increment; values only depend on coords mod the orders
        j = 0
        while j < s:
            val = (val + 2 * rowsum[j] + gmat[j][j]) % mod
            for t in range(s):
                rowsum[t] = (rowsum[t] + gmat[t][j]) % mod
            coords[j] += 1
            if coords[j] < gens[j][1]:
                break
            coords[j] = 0
            j += 1
        if j == s:
            break
    return counts


def _mul_counts(a: dict[int, int], b: dict[int, int], m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1 + e2) % m
            out[e] = out.get(e, 0) + c1 * c2
    return out


def _scale_counts(a: dict[int, int], c: int) -> dict[int, int]:
    return {e: v * c for e, v in a.items()}


def milgram_signature(q: FiniteQuadraticForm) -> int:
    """Signature invariant mod 8 via exact prime-split Gauss sums.

    For each prime p the Gauss sum over the p-part equals
    sqrt(|A_p|) * zeta_8^sigma_p; the eight candidate phases are compared
    exactly in a cyclotomic ring (sqrt(2) and the odd quadratic Gauss sums
    are themselves cyclotomic integers).  Raises ArithmeticError when no
    phase matches, which signals a degenerate or corrupted form.
    """
    if is_degenerate(q):
        raise ArithmeticError("Milgram invariant requires a non-degenerate form")
    n = q.group_order
    sigma = 0
    primes = []
    rest = n
    f = 2
    while f * f <= rest:
        if rest % f == 0:
            primes.append(f)
            while rest % f == 0:
                rest //= f
        f += 1
    if rest > 1:
        primes.append(rest)
    for p in primes:
        gens = _prime_part_gens(q, p)
        size = 1
        for _, o in gens:
            size *= o
        k = 0
        t = size
        while t > 1:
            t //= p
            k += 1
        # cyclotomic modulus: the restricted Gram has p-power denominator d,
        # and the sum lives in Z[zeta_{2d}]; enlarge to a supported shape.
        _, d = _scaled_gen_gram(q, [g for g, _ in gens])
        if p == 2:
            m = max(8, 2 * d)  # both are powers of two
        else:
            m = 4 * d  # d = p^a with a >= 1 for a non-degenerate p-part
        s = _gauss_counts(q, gens, m)
        matched = None
        if p == 2:
            root2 = {m // 8: 1, (7 * m) // 8: 1}  # zeta_8 + zeta_8^-1
            base = {0: 2 ** (k // 2)}
            if k % 2:
                base = _mul_counts(_scale_counts(root2, 2 ** ((k - 1) // 2)), {0: 1}, m)
            for sig8 in range(8):
                cand = _mul_counts(base, {(sig8 * m // 8) % m: 1}, m)
                if _cyclo_equal(s, cand, m):
                    matched = sig8
                    break
        else:
            gp = {}
            step = m // p
            for x in range(p):
                e = (x * x * step) % m
                gp[e] = gp.get(e, 0) + 1  # quadratic Gauss sum over Z/p
            base = {0: p ** (k // 2)}
            eps = k % 2
            if eps:
                base = _scale_counts(gp, p ** ((k - 1) // 2))
            for tau in range(4):
                cand = _mul_counts(base, {(tau * m // 4) % m: 1}, m)
                if _cyclo_equal(s, cand, m):
                    if eps and p % 4 == 3:
                        matched = (2 * tau + 2) % 8
                    else:
                        matched = (2 * tau) % 8
                    break
        if matched is None:
            raise ArithmeticError(
                f"Gauss sum for p={p} matches no admissible phase (corrupted form?)"
            )
        sigma = (sigma + matched) % 8
    return sigma % 8


# ---------------------------------------------------------------------------
# Isomorphism testing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _value_table(q: FiniteQuadraticForm) -> tuple[tuple[Vec, int, Fraction], ...]:
    """All elements with (coords, order, q-value), skipping zero."""
    out = []
    num, den = _int_gram(q)
    k = q.rank
    for x in q.elements():
        if not any(x):
            continue
        val = Fraction(
            sum(x[i] * num[i][j] * x[j] for i in range(k) for j in range(k)), den
        ) % 2
        out.append((x, q.element_order(x), val))
    return tuple(out)


def _value_multiset(q: FiniteQuadraticForm) -> tuple[tuple[int, Fraction, int], ...]:
    buckets: dict[tuple[int, Fraction], int] = {}
    for _, o, v in _value_table(q):
        buckets[(o, v)] = buckets.get((o, v), 0) + 1
    return tuple(sorted((o, v, c) for (o, v), c in buckets.items()))


def _subgroup_size(q: FiniteQuadraticForm, vecs: Sequence[Vec]) -> int:
    """Order of the subgroup generated by the given elements."""
    k = q.rank
    if k == 0:
        return 1
    rows = [list(v) for v in vecs]
    rows += [
        [q.orders[i] if i == j else 0 for j in range(k)] for i in range(k)
    ]
    h = hnf_basis(rows)
    idx = 1
    for i, row in enumerate(h):
        idx *= row[i]
    return q.group_order // idx


def forms_isomorphic(
    q1: FiniteQuadraticForm,
    q2: FiniteQuadraticForm,
    budget: int = 10**7,
) -> tuple[Vec, ...] | None:
    """Search for an isomorphism of finite quadratic forms.

    Returns a tuple of images (coordinates in q2) for the generators of q1,
    or None when the forms are provably non-isomorphic.  The search is a
    backtracking match of generators ordered by descending order and then
    by rarest q-value; exceeding the node budget raises
    SearchBudgetExceeded rather than answering.
    """
    if q1.group_order != q2.group_order:
        return None
    if group_invariants(q1.orders) != group_invariants(q2.orders):
        return None
    if q1.rank == 0:
        return ()
    if _value_multiset(q1) != _value_multiset(q2):
        return None
    if milgram_signature(q1) != milgram_signature(q2):
        return None

    table2 = _value_table(q2)
    buckets: dict[tuple[int, Fraction], list[Vec]] = {}
    for x, o, v in table2:
        buckets.setdefault((o, v), []).append(x)

    t1 = {x: (o, v) for x, o, v in _value_table(q1)}
    gens1 = []
    for i, o in enumerate(q1.orders):
        e = tuple(int(i == j) for j in range(q1.rank))
        ov = t1[e]
        gens1.append((i, e, ov))
    # rarest value class first, then larger order first
    gens1.sort(key=lambda g: (-g[2][0], len(buckets.get(g[2], [])), g[0]))

    order_idx = [g[0] for g in gens1]
    nodes = 0
    chosen: list[Vec] = []

    def extend(level: int) -> bool:
        nonlocal nodes
        if level == len(gens1):
            return _subgroup_size(q2, chosen) == q2.group_order
        _, e, ov = gens1[level]
        for cand in buckets.get(ov, ()):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(
                    f"forms_isomorphic exceeded {budget} nodes"
                )
            ok = True
            for lv in range(level):
                want = q1.b_value(gens1[lv][1], e)
                if q2.b_value(chosen[lv], cand) != want:
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
    images = [None] * q1.rank
    for (i, _, _), img in zip(gens1, chosen):
        images[i] = img
    out = tuple(images)  # type: ignore[arg-type]
    # transporting q and b is guaranteed by the constraints; re-verify
    for i in range(q1.rank):
        assert q2.q_value(out[i]) == q1.q_value(
            tuple(int(i == j) for j in range(q1.rank))
        )
    return out


# ---------------------------------------------------------------------------
# Isotropic subgroups and quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a finite quadratic form's group, listed element-wise."""

    form: FiniteQuadraticForm
    elements: tuple[Vec, ...]
    gens: tuple[Vec, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def _close_subgroup(q: FiniteQuadraticForm, gens: Sequence[Vec], cap: int) -> frozenset[Vec] | None:
    """Subgroup generated by gens, or None once it exceeds cap elements."""
    zero = (0,) * q.rank
    seen = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = q.reduce(tuple(a + b for a, b in zip(x, g)))
            if y not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def isotropic_subgroups(q: FiniteQuadraticForm, order: int) -> list[Subgroup]:
    """All subgroups H with |H| = order, q = 0 on H (hence b = 0 on HxH).

    Enumerated in canonical order (sorted element tuples) and deduplicated.
    """
    if order == 1:
        return [Subgroup(q, ((0,) * q.rank,), ())]
    if q.group_order % order:
        return []
    iso = [x for x, o, v in _value_table(q) if order % o == 0 and v == 0]
    iso_set = set(iso)
    zero = (0,) * q.rank
    found: dict[tuple[Vec, ...], tuple[Vec, ...]] = {}

    def grow(gens: list[Vec], members: frozenset[Vec], start: int) -> None:
        if len(members) == order:
            found.setdefault(tuple(sorted(members)), tuple(gens))
            return
        for idx in range(start, len(iso)):
            g = iso[idx]
            if g in members:
                continue
            grown = _close_subgroup(q, gens + [g], order)
            if grown is None or order % len(grown) or len(grown) <= len(members):
                continue
            # every element of an isotropic subgroup must itself be isotropic
            if not (grown - {zero}) <= iso_set:
                continue
            grow(gens + [g], grown, idx + 1)

    grow([], frozenset({zero}), 0)
    out = []
    for key in sorted(found):
        # q = 0 elementwise forces b = 0 on H x H; assert both anyway
        for x in key:
            assert q.q_value(x) == 0
        out.append(Subgroup(q, key, found[key]))
    return out


def _orthogonal_lattice(q: FiniteQuadraticForm, gens: Sequence[Vec]) -> Mat:
    """Rows generating {x in Z^k : b(x, g) integral for all gens g}."""
    k = q.rank
    num, den = _int_gram(q)
    if not gens:
        return identity(k)
    s = len(gens)
    cols = [
        [sum(num[i][j] * g[j] for j in range(k)) for i in range(k)] for g in gens
    ]
    # x satisfies cols_j . x == 0 mod den for all j; take the x-part of the
    # integer kernel of (x, y) -> B^T x + den*y
    amat = [
        tuple(cols[j][i] for i in range(k))
        + tuple(den if t == j else 0 for t in range(s))
        for j in range(s)
    ]
    ker = kernel_int(amat)
    rows = [tuple(col[:k]) for col in transpose(ker)]
    rows += [tuple(q.orders[i] if i == j else 0 for j in range(k)) for i in range(k)]
    return hnf_basis(rows)


def _quotient_structure(sup_rows: Mat, sub_rows: Mat) -> tuple[tuple[int, ...], Mat]:
    """Structure of (row lattice of sup)/(row lattice of sub).

    Returns invariant factor orders (including 1s) and lift rows: row i
    generates the Z/orders[i] factor, expressed in ambient coordinates.
    """
    k = len(sup_rows)
    coords = []
    for row in sub_rows:
        x = solve_int(transpose(sup_rows), row)
        if x is None:
            raise ValueError("sub lattice is not contained in sup lattice")
        coords.append(x)
    d, _, v = snf(coords)
    vi = inv_unimodular(v)
    orders = []
    for i in range(k):
        di = d[i][i] if i < len(d) and i < len(d[0]) else 0
        if di == 0:
            raise ValueError("quotient is infinite")
        orders.append(di)
    lifts = mat_mul(vi, sup_rows)
    return tuple(orders), freeze(lifts)


def _form_on_subquotient(
    q: FiniteQuadraticForm, orders: Sequence[int], lifts: Mat
) -> FiniteQuadraticForm:
    keep = [i for i, o in enumerate(orders) if o > 1]
    num, den = _int_gram(q)
    k = q.rank

    def qv(x: Sequence[int]) -> Fraction:
        return Fraction(
            sum(x[i] * num[i][j] * x[j] for i in range(k) for j in range(k)), den
        )

    def bv(x: Sequence[int], y: Sequence[int]) -> Fraction:
        return Fraction(
            sum(x[i] * num[i][j] * y[j] for i in range(k) for j in range(k)), den
        )

    gram = []
    for a in keep:
        row = []
        for b in keep:
            if a == b:
                row.append(qv(lifts[a]) % 2)
            else:
                row.append(bv(lifts[a], lifts[b]) % 1)
        gram.append(row)
    return FiniteQuadraticForm(tuple(orders[i] for i in keep), freeze(gram))


def quotient_form(q: FiniteQuadraticForm, h: Subgroup) -> FiniteQuadraticForm:
    """Induced form on H-perp / H for an isotropic subgroup H."""
    perp = _orthogonal_lattice(q, h.gens)
    k = q.rank
    sub_rows = [list(g) for g in h.gens]
    sub_rows += [[q.orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    sub = hnf_basis(sub_rows)
    orders, lifts = _quotient_structure(perp, sub)
    out = _form_on_subquotient(q, orders, lifts)
    if out.group_order * h.order * h.order != q.group_order:
        raise ArithmeticError("quotient size mismatch: subgroup not isotropic?")
    return out


def orthogonal_complement_form(
    q: FiniteQuadraticForm, gens: Sequence[Vec]
) -> FiniteQuadraticForm:
    """Form restricted to the orthogonal complement of the given subgroup.

    Intended for non-degenerate distinguished blocks, where the complement
    meets the block trivially and carries the full remaining form.
    """
    perp = _orthogonal_lattice(q, gens)
    k = q.rank
    sub = tuple(
        tuple(q.orders[i] if i == j else 0 for j in range(k)) for i in range(k)
    )
    orders, lifts = _quotient_structure(perp, sub)
    return _form_on_subquotient(q, orders, lifts)


def find_u_block(q: FiniteQuadraticForm, m: int) -> tuple[Vec, Vec]:
    """Locate a hyperbolic u(m) pair inside q (first in canonical order)."""
    cands = [x for x, o, v in _value_table(q) if o == m and v == 0]
    target = Fraction(-1, m) % 1
    for i, x in enumerate(cands):
        for y in cands:
            if y != x and q.b_value(x, y) == target:
                return x, y
    raise ValueError(f"no u({m}) block found")
