"""Even overlattices from glue groups, and genus-level machinery.

An even overlattice of L of index m corresponds to an isotropic subgroup H
of the discriminant form of L with |H| = m: the overlattice is generated by
L together with dual lifts of H.  Genus data (signature plus discriminant
form) suffices to identify many indefinite lattices up to isometry via the
rank-versus-length criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .forms import (
    FiniteQuadraticForm,
    Subgroup,
    forms_isomorphic,
    isotropic_subgroups,
    length,
    milgram_signature,
    quotient_form,
)
from .intmat import Vec, freeze, hnf_basis, solve_int, transpose
from .lattice import (
    DiscriminantData,
    Embedding,
    IntegralLattice,
    direct_sum,
    discriminant_group,
    from_rows,
    is_primitive,
)


def _lift_of(disc: DiscriminantData, coords: Sequence[int]) -> tuple[Fraction, ...]:
    """Rational ambient row for an element of the discriminant group."""
    n = len(disc.lifts[0]) if disc.lifts else 0
    out = [Fraction(0)] * n
    for c, lift in zip(coords, disc.lifts):
        if c:
            for i in range(n):
                out[i] += c * lift[i]
    return tuple(out)


def _glue_overlattice(
    lat: IntegralLattice,
    lifts: Sequence[Sequence[Fraction]],
) -> tuple[IntegralLattice, Embedding]:
    """Lattice generated by L and the given rational glue vectors."""
    n = lat.rank
    den = 1
    for lift in lifts:
        for c in lift:
            den = lcm(den, c.denominator)
    rows = [[den if i == j else 0 for j in range(n)] for i in range(n)]
    rows += [[int(c * den) for c in lift] for lift in lifts]
    basis = hnf_basis(rows)
    gram = []
    for r1 in basis:
        row = []
        for r2 in basis:
            val = lat.pairing(r1, r2)
            if val % (den * den):
                raise ArithmeticError("glue lift does not pair integrally")
            row.append(val // (den * den))
        gram.append(tuple(row))
    z = IntegralLattice(freeze(gram))
    emb_rows = []
    for i in range(n):
        target = tuple(den if i == j else 0 for j in range(n))
        x = solve_int(transpose(basis), target)
        if x is None:
            raise ArithmeticError("original lattice does not embed")
        emb_rows.append(x)
    return z, Embedding(z, lat, transpose(freeze(emb_rows)))


def overlattices(
    lat: IntegralLattice, index: int
) -> list[tuple[IntegralLattice, Embedding]]:
    """All even overlattices of the given index, with the embedding of L.

    One overlattice per isotropic subgroup of order `index` in the
    discriminant form; candidates that fail evenness are excluded silently.
    The list is empty when no isotropic subgroup of that order exists.
    """
    if not lat.is_even:
        raise ValueError("overlattice construction requires an even lattice")
    disc = discriminant_group(lat)
    out = []
    for h in isotropic_subgroups(disc.form, index):
        z, emb = _glue_overlattice(lat, [_lift_of(disc, g) for g in h.gens])
        if not z.is_even:
            continue
        assert z.det * index * index == lat.det
        out.append((z, emb))
    return out


def lemma_overlattice(
    d: int,
    m: int,
    w: IntegralLattice,
    block: Sequence[Sequence[int]],
) -> tuple[IntegralLattice, Embedding]:
    """Index-m even overlattice of <2d> + W from the congruence d = 0 mod 2m.

    `block` gives the coordinates (in the discriminant group of W) of a
    hyperbolic pair spanning a u(m) block: two elements of order m with
    q = 0 and mutual pairing -1/m.  Writing 2d = 4km, the glue group is
    generated by (4k)h + e1 + (2k)e2 where h generates the dual of <2d>.
    For m = 1 the glue is trivial and the direct sum itself is returned.
    """
    if d <= 0 or m <= 0:
        raise ValueError("d and m must be positive")
    if d % (2 * m):
        raise ValueError(f"congruence violated: {d} is not 0 mod {2 * m}")
    k = d // (2 * m)
    v = direct_sum(from_rows([[2 * d]]), w)
    if m == 1:
        lifts: list[tuple[Fraction, ...]] = []
    else:
        if len(block) != 2:
            raise ValueError("block must supply two generator coordinate rows")
        wdisc = discriminant_group(w)
        qw = wdisc.form
        e1, e2 = tuple(block[0]), tuple(block[1])
        for e in (e1, e2):
            if qw.element_order(e) != m or qw.q_value(e) != 0:
                raise ValueError("u(m) block not found at the supplied coordinates")
        b = qw.b_value(e1, e2)
        if b == Fraction(1, m) % 1:
            e2 = tuple(-c for c in e2)  # normalize the pairing to -1/m
        elif b != Fraction(-1, m) % 1:
            raise ValueError("u(m) block not found at the supplied coordinates")
        # glue = (4k) h + e1 + (2k) e2 where h is the dual generator of <2d>,
        # whose rational lift is (1/(2d), 0, ..., 0) by construction of V
        l1 = _lift_of(wdisc, e1)
        l2 = _lift_of(wdisc, e2)
        glue = (Fraction(4 * k, 2 * d),) + tuple(
            a + 2 * k * c for a, c in zip(l1, l2)
        )
        # isotropic of order exactly m in the glue group
        assert all((m * c).denominator == 1 for c in glue)
        qval = sum(
            glue[i] * v.gram[i][j] * glue[j]
            for i in range(v.rank)
            for j in range(v.rank)
        )
        assert qval % 2 == 0
        lifts = [glue]
    z, emb = _glue_overlattice(v, lifts)
    if not z.is_even:
        raise ArithmeticError("glue produced an odd lattice")
    assert z.det * m * m == v.det
    # W is primitively embedded: its image spans a saturated sublattice
    w_emb = Embedding(z, w, transpose(emb.vectors[1:]))
    assert is_primitive(w_emb)
    return z, w_emb


# ---------------------------------------------------------------------------
# Genus descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenusDescriptor:
    """Signature pair plus discriminant form, the genus data of an even
    lattice."""

    sig_plus: int
    sig_minus: int
    disc: FiniteQuadraticForm

    def __post_init__(self) -> None:
        if self.sig_plus < 0 or self.sig_minus < 0:
            raise ValueError("signature entries must be non-negative")
        if self.rank < length(self.disc):
            raise ValueError("rank is smaller than the length of the form")
        if milgram_signature(self.disc) != (self.sig_plus - self.sig_minus) % 8:
            raise ValueError("signature does not match the form invariant mod 8")

    @property
    def rank(self) -> int:
        return self.sig_plus + self.sig_minus

    @property
    def is_indefinite(self) -> bool:
        return self.sig_plus >= 1 and self.sig_minus >= 1


def genus_of(lat: IntegralLattice) -> GenusDescriptor:
    if lat.is_degenerate:
        raise ValueError("genus requires a non-degenerate lattice")
    if not lat.is_even:
        raise ValueError("genus descriptor is defined here for even lattices")
    pos, neg = lat.signature
    return GenusDescriptor(pos, neg, discriminant_group(lat).form)


def genus_equal(
    g1: GenusDescriptor, g2: GenusDescriptor, budget: int = 10**7
) -> bool:
    if (g1.sig_plus, g1.sig_minus) != (g2.sig_plus, g2.sig_minus):
        return False
    return forms_isomorphic(g1.disc, g2.disc, budget=budget) is not None


def unique_in_genus_by_length(g: GenusDescriptor) -> bool:
    """Sufficient uniqueness criterion: indefinite and rank >= 2 + length.

    False certifies nothing (the criterion is inconclusive, not a
    non-uniqueness statement).
    """
    return g.is_indefinite and g.rank >= 2 + length(g.disc)


def genus_lemma_quotient(
    gv: GenusDescriptor,
    block: Sequence[Sequence[int]],
    d: int,
    m: int,
) -> GenusDescriptor:
    """Form-level version of the congruence overlattice: quotient the genus.

    `block` designates generators inside gv.disc: (h,) for m = 1, or
    (h, e1, e2) with h the order-2d element of q-value 1/(2d) and (e1, e2)
    a u(m) pair orthogonal to h.  Returns the genus with the glue group
    quotiented out of the discriminant form; the signature is unchanged.
    """
    if d <= 0 or m <= 0:
        raise ValueError("d and m must be positive")
    if d % (2 * m):
        raise ValueError(f"congruence violated: {d} is not 0 mod {2 * m}")
    q = gv.disc
    if not block:
        raise ValueError("block must designate at least the (1/2d) generator")
    h = tuple(block[0])
    if q.element_order(h) != 2 * d or q.q_value(h) != Fraction(1, 2 * d):
        raise ValueError("designated generator does not carry (1/2d)")
    if m == 1:
        return gv
    if len(block) != 3:
        raise ValueError("block must be (h, e1, e2) when m > 1")
    e1, e2 = tuple(block[1]), tuple(block[2])
    for e in (e1, e2):
        if q.element_order(e) != m or q.q_value(e) != 0:
            raise ValueError("u(m) block not found at the supplied coordinates")
        if q.b_value(h, e) != 0:
            raise ValueError("u(m) block is not orthogonal to the (1/2d) part")
    b = q.b_value(e1, e2)
    if b == Fraction(1, m) % 1:
        e2 = tuple(-c for c in e2)  # normalize the pairing to -1/m
    elif b != Fraction(-1, m) % 1:
        raise ValueError("u(m) block not found at the supplied coordinates")
    k = d // (2 * m)
    glue = q.reduce(
        tuple(4 * k * hc + a + 2 * k * b for hc, a, b in zip(h, e1, e2))
    )
    assert q.q_value(glue) == 0 and q.element_order(glue) == m
    elements = []
    x = (0,) * q.rank
    for _ in range(m):
        elements.append(x)
        x = q.reduce(tuple(a + b for a, b in zip(x, glue)))
    sub = Subgroup(q, tuple(sorted(elements)), (glue,))
    return GenusDescriptor(gv.sig_plus, gv.sig_minus, quotient_form(q, sub))
