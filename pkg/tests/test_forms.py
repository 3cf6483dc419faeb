"""Tests for finite quadratic forms.

Oracles used here are deliberately independent of the implementation:
the signature invariant is checked against a floating-point Gauss sum,
subgroup/quotient routines against brute-force enumeration over all
group elements, and degeneracy against a direct adjoint scan.
"""

import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lat.forms import (
    FiniteQuadraticForm,
    SearchBudgetExceeded,
    Subgroup,
    cyclic_block,
    find_u_block,
    forms_isomorphic,
    group_invariants,
    is_degenerate,
    isotropic_subgroups,
    length,
    milgram_signature,
    negate,
    orthogonal_complement_form,
    quotient_form,
    sum_forms,
    trivial_form,
    u_block,
)

# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def gauss_sum_signature_oracle(q):
    """Signature mod 8 via a numeric Gauss sum over the whole group.

    For a non-degenerate form the normalized sum has modulus 1 and its
    phase is 2*pi*sigma/8.
    """
    total = 0 + 0j
    for x in q.elements():
        total += cmath.exp(1j * math.pi * float(q.q_value(x)))
    total /= math.sqrt(q.group_order)
    assert abs(abs(total) - 1.0) < 1e-9, "oracle: degenerate form"
    sigma = round(4 * cmath.phase(total) / math.pi) % 8
    # the rounding must be unambiguous
    assert abs(cmath.exp(1j * math.pi * sigma / 4) - total) < 1e-9
    return sigma


def brute_subgroups(q, order):
    """All subgroups of the given order, as frozensets of element tuples.

    Closes every subset of at most three elements; subgroups of the orders
    exercised here (<= 8, abelian) need at most three generators.
    """
    elems = [x for x in q.elements()]

    def close(gens):
        zero = (0,) * q.rank
        seen = {zero}
        frontier = [zero]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = q.reduce(tuple(a + b for a, b in zip(x, g)))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    found = set()
    import itertools

    for r in range(0, 4):
        for gens in itertools.combinations(elems, r):
            sub = close(gens)
            if len(sub) == order:
                found.add(sub)
    return found


def brute_isotropic_subgroups(q, order):
    return {
        sub
        for sub in brute_subgroups(q, order)
        if all(q.q_value(x) == 0 for x in sub)
    }


def brute_perp(q, elements):
    """All group elements pairing integrally with every given element."""
    return [
        x
        for x in q.elements()
        if all(q.b_value(x, h) == 0 for h in elements)
    ]


def coset_profile(q, subgroup_elements):
    """Multiset of (coset order, q-value) over H-perp / H, computed directly."""
    perp = brute_perp(q, subgroup_elements)
    hset = set(subgroup_elements)
    seen = set()
    profile = {}
    for x in perp:
        coset = frozenset(
            q.reduce(tuple(a + b for a, b in zip(x, h))) for h in hset
        )
        if coset in seen:
            continue
        seen.add(coset)
        # order of x + H in the quotient: least k >= 1 with k*x in H
        k = 1
        y = x
        while tuple(y) not in hset:
            y = q.reduce(tuple(a + b for a, b in zip(y, x)))
            k += 1
        key = (k, q.q_value(x))
        profile[key] = profile.get(key, 0) + 1
    return profile


def form_profile(q):
    """Multiset of (element order, q-value) over all elements of a form."""
    profile = {}
    for x in q.elements():
        key = (q.element_order(x) if any(x) else 1, q.q_value(x))
        profile[key] = profile.get(key, 0) + 1
    return profile


def brute_is_degenerate(q):
    nonzero = [x for x in q.elements() if any(x)]
    return any(
        all(q.b_value(x, y) == 0 for y in q.elements()) for x in nonzero
    )


def regram(q, new_gens):
    """Present q on a new generating family (orders must be preserved)."""
    k = len(new_gens)
    gram = [[F(0)] * k for _ in range(k)]
    for i in range(k):
        gram[i][i] = q.q_value(new_gens[i])
        for j in range(i):
            gram[i][j] = gram[j][i] = q.b_value(new_gens[i], new_gens[j])
    orders = tuple(q.element_order(g) for g in new_gens)
    return FiniteQuadraticForm(orders, tuple(tuple(r) for r in gram))


# a diagonal q = 1 analogue of the hyperbolic two-by-two block
def v_block(n):
    b = F(-1, n) % 1
    return FiniteQuadraticForm((n, n), ((F(1), b), (b, F(1))))


# ---------------------------------------------------------------------------
# Construction and basic invariants
# ---------------------------------------------------------------------------


def test_validation_rejects_bad_data():
    with pytest.raises(ValueError):
        FiniteQuadraticForm((2,), ((F(1, 3),),))  # denominator 3 on Z/2
    with pytest.raises(ValueError):
        FiniteQuadraticForm((2, 2), ((F(0), F(1, 3)), (F(1, 3), F(0))))
    with pytest.raises(ValueError):
        FiniteQuadraticForm((2, 2), ((F(0), F(0)), (F(1, 2), F(0))))  # asym
    with pytest.raises(ValueError):
        cyclic_block(3, F(1, 3))  # 9 * (1/3) = 3 is odd
    with pytest.raises(ValueError):
        cyclic_block(0, F(0))


def test_trivial_and_order_one_blocks():
    assert cyclic_block(1, 0) == trivial_form()
    assert u_block(1) == trivial_form()
    assert trivial_form().group_order == 1
    assert milgram_signature(trivial_form()) == 0


def test_q_and_b_are_consistent():
    q = sum_forms([u_block(2), cyclic_block(9, F(2, 9))])
    for x in q.elements():
        # polarization: q(x + y) - q(x) - q(y) = 2 b(x, y) in Q/2Z
        for y in [(1, 0, 0), (0, 1, 3), (1, 1, 1)]:
            s = q.reduce(tuple(a + b for a, b in zip(x, y)))
            lhs = (q.q_value(s) - q.q_value(x) - q.q_value(y)) % 2
            assert lhs == (2 * q.b_value(x, y)) % 2


def test_group_invariants_and_length():
    assert group_invariants((2, 2, 4, 3)) == (2, 2, 12)
    assert group_invariants((6, 4)) == (2, 12)
    assert group_invariants(()) == ()
    assert length(sum_forms([u_block(2), u_block(2)])) == 4
    assert length(sum_forms([cyclic_block(4, F(1, 4)), cyclic_block(3, F(2, 3))])) == 1


def test_element_order():
    q = sum_forms([u_block(4), cyclic_block(6, F(1, 6))])
    assert q.element_order((0, 0, 0)) == 1
    assert q.element_order((2, 0, 3)) == 2
    assert q.element_order((1, 2, 2)) == 12


# ---------------------------------------------------------------------------
# Degeneracy
# ---------------------------------------------------------------------------


DEGENERACY_CASES = [
    u_block(2),
    u_block(3),
    cyclic_block(2, F(1, 2)),
    cyclic_block(3, F(4, 3)),
    cyclic_block(8, F(3, 8)),
    FiniteQuadraticForm((2,), ((F(0),),)),  # zero form: degenerate
    cyclic_block(4, F(1)),  # q integral: degenerate pairing
    sum_forms([u_block(2), FiniteQuadraticForm((2,), ((F(0),),))]),
]


@pytest.mark.parametrize("q", DEGENERACY_CASES)
def test_is_degenerate_matches_brute_force(q):
    assert is_degenerate(q) == brute_is_degenerate(q)


# ---------------------------------------------------------------------------
# Signature invariant mod 8
# ---------------------------------------------------------------------------


SIGNATURE_CASES = [
    (u_block(2), 0),
    (u_block(3), 0),
    (u_block(4), 0),
    (cyclic_block(2, F(1, 2)), 1),
    (cyclic_block(2, F(3, 2)), 7),
    (cyclic_block(3, F(2, 3)), 2),
    (cyclic_block(3, F(4, 3)), 6),
    (cyclic_block(4, F(1, 4)), 1),
    (cyclic_block(4, F(7, 4)), 7),
    (cyclic_block(6, F(1, 6)), 1),
    (cyclic_block(6, F(11, 6)), 7),
    (cyclic_block(8, F(1, 8)), 1),
    (cyclic_block(9, F(2, 9)), 0),
    (cyclic_block(5, F(2, 5)), 0),
    (cyclic_block(5, F(4, 5)), 4),
    (cyclic_block(7, F(2, 7)), 2),
    (v_block(2), 4),
    (sum_forms([u_block(2)] * 4), 0),
    (sum_forms([cyclic_block(2, F(1, 2))] * 8), 0),
    (sum_forms([u_block(2), cyclic_block(9, F(2, 9))]), 0),
    (sum_forms([cyclic_block(4, F(1, 4)), cyclic_block(3, F(2, 3))]), 3),
]


@pytest.mark.parametrize("q,expected", SIGNATURE_CASES)
def test_milgram_signature_frozen_values(q, expected):
    assert milgram_signature(q) == expected


@pytest.mark.parametrize("q,_", SIGNATURE_CASES)
def test_milgram_signature_matches_gauss_oracle(q, _):
    assert milgram_signature(q) == gauss_sum_signature_oracle(q)


def test_milgram_rejects_degenerate():
    with pytest.raises(ArithmeticError):
        milgram_signature(FiniteQuadraticForm((2,), ((F(0),),)))


def test_milgram_additive_and_odd():
    parts = [
        cyclic_block(8, F(3, 8)),
        cyclic_block(9, F(4, 9)),
        u_block(5),
        cyclic_block(25, F(2, 25)),
    ]
    total = milgram_signature(sum_forms(parts))
    assert total == sum(milgram_signature(p) for p in parts) % 8
    assert milgram_signature(negate(sum_forms(parts))) == (-total) % 8


# blocks with denominators 2^a, p^a and mixed; all non-degenerate
def _block_strategy():
    def cyc_even(m, a):
        return cyclic_block(2 * m, F(a, 2 * m))

    def cyc_odd(n, a):
        return cyclic_block(n, F(2 * a, n))

    evens = st.tuples(
        st.sampled_from([1, 2, 4]), st.integers(1, 16)
    ).filter(lambda t: math.gcd(t[1], 2 * t[0]) == 1).map(lambda t: cyc_even(*t))
    odds = st.tuples(
        st.sampled_from([3, 5, 9, 7]), st.integers(1, 8)
    ).filter(lambda t: math.gcd(t[1], t[0]) == 1).map(lambda t: cyc_odd(*t))
    hyper = st.sampled_from([u_block(2), u_block(3), u_block(4), v_block(2)])
    return st.one_of(evens, odds, hyper)


@settings(max_examples=40, deadline=None)
@given(st.lists(_block_strategy(), min_size=1, max_size=3))
def test_milgram_signature_random_forms(blocks):
    q = sum_forms(blocks)
    if q.group_order > 4000:
        return
    assert milgram_signature(q) == gauss_sum_signature_oracle(q)


# ---------------------------------------------------------------------------
# Isomorphism search
# ---------------------------------------------------------------------------


def test_isomorphic_after_change_of_generators():
    q = sum_forms([u_block(2), u_block(2)])
    # new generating family over (Z/2)^4, still a basis
    new = regram(q, [(1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1)])
    images = forms_isomorphic(q, new)
    assert images is not None
    # images define a genuine isomorphism: orders, q and b all transported
    for i in range(q.rank):
        ei = tuple(int(i == j) for j in range(q.rank))
        assert new.q_value(images[i]) == q.q_value(ei)
        assert new.element_order(images[i]) == q.orders[i]
        for j in range(i):
            ej = tuple(int(j == t) for t in range(q.rank))
            assert new.b_value(images[i], images[j]) == q.b_value(ei, ej)


def test_two_v_blocks_equal_two_u_blocks():
    uu = sum_forms([u_block(2), u_block(2)])
    vv = sum_forms([v_block(2), v_block(2)])
    assert forms_isomorphic(uu, vv) is not None
    assert forms_isomorphic(u_block(2), v_block(2)) is None


def test_non_isomorphic_cyclic_forms():
    assert forms_isomorphic(cyclic_block(5, F(2, 5)), cyclic_block(5, F(4, 5))) is None
    assert forms_isomorphic(cyclic_block(4, F(1, 4)), cyclic_block(4, F(3, 4))) is None
    # same group, same signature, different forms would be caught by values;
    # same form written with scaled generator is found isomorphic
    a = cyclic_block(9, F(2, 9))
    b = regram(a, [(2,)])
    assert forms_isomorphic(a, b) is not None


def test_isomorphism_respects_block_permutation():
    p1 = sum_forms([cyclic_block(4, F(1, 4)), cyclic_block(3, F(2, 3)), u_block(2)])
    p2 = sum_forms([u_block(2), cyclic_block(3, F(2, 3)), cyclic_block(4, F(1, 4))])
    assert forms_isomorphic(p1, p2) is not None


def test_isomorphism_budget_is_enforced():
    uu = sum_forms([u_block(2), u_block(2)])
    vv = sum_forms([v_block(2), v_block(2)])
    with pytest.raises(SearchBudgetExceeded):
        forms_isomorphic(uu, vv, budget=2)


def test_trivial_forms_isomorphic():
    assert forms_isomorphic(trivial_form(), trivial_form()) == ()
    assert forms_isomorphic(trivial_form(), cyclic_block(2, F(1, 2))) is None


# ---------------------------------------------------------------------------
# Isotropic subgroups
# ---------------------------------------------------------------------------


ISOTROPIC_CASES = [
    (u_block(2), 2),
    (sum_forms([u_block(2), u_block(2)]), 2),
    (sum_forms([u_block(2), u_block(2)]), 4),
    (sum_forms([v_block(2), v_block(2)]), 4),
    (u_block(4), 4),
    (u_block(4), 2),
    (sum_forms([u_block(2), cyclic_block(9, F(2, 9))]), 3),
    (sum_forms([u_block(3), cyclic_block(2, F(1, 2))]), 3),
    (cyclic_block(8, F(1, 8)), 2),
    (u_block(6), 6),
]


@pytest.mark.parametrize("q,order", ISOTROPIC_CASES)
def test_isotropic_subgroups_match_brute_force(q, order):
    got = {frozenset(s.elements) for s in isotropic_subgroups(q, order)}
    assert got == brute_isotropic_subgroups(q, order)
    # canonical, duplicate-free output
    subs = isotropic_subgroups(q, order)
    keys = [s.elements for s in subs]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for s in subs:
        assert s.order == order


def test_isotropic_subgroups_trivial_order():
    q = u_block(2)
    subs = isotropic_subgroups(q, 1)
    assert len(subs) == 1 and subs[0].elements == ((0, 0),)
    assert isotropic_subgroups(q, 3) == []


# ---------------------------------------------------------------------------
# Quotients and complements
# ---------------------------------------------------------------------------


QUOTIENT_CASES = [
    (u_block(2), 2),
    (sum_forms([u_block(2), u_block(2)]), 2),
    (sum_forms([u_block(2), u_block(2)]), 4),
    (u_block(4), 2),
    (u_block(4), 4),
    (sum_forms([u_block(2), cyclic_block(9, F(2, 9))]), 3),
    (u_block(6), 6),
    (sum_forms([cyclic_block(8, F(1, 8)), cyclic_block(8, F(7, 8))]), 2),
]


@pytest.mark.parametrize("q,order", QUOTIENT_CASES)
def test_quotient_form_matches_coset_oracle(q, order):
    for h in isotropic_subgroups(q, order):
        out = quotient_form(q, h)
        assert out.group_order * order * order == q.group_order
        assert form_profile(out) == coset_profile(q, h.elements)
        if not is_degenerate(q):
            assert milgram_signature(out) == milgram_signature(q)


def test_quotient_by_full_isotropic_is_trivial():
    q = sum_forms([u_block(2), u_block(2)])
    for h in isotropic_subgroups(q, 4):
        assert quotient_form(q, h).rank == 0


def test_orthogonal_complement_of_u_pair():
    q = sum_forms([u_block(2), cyclic_block(3, F(2, 3))])
    x, y = find_u_block(q, 2)
    assert q.q_value(x) == q.q_value(y) == 0
    assert q.b_value(x, y) == F(1, 2)
    comp = orthogonal_complement_form(q, (x, y))
    assert forms_isomorphic(comp, cyclic_block(3, F(2, 3))) is not None


def test_find_u_block_absent():
    with pytest.raises(ValueError):
        find_u_block(cyclic_block(2, F(1, 2)), 2)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(QUOTIENT_CASES))
def test_quotient_preserves_signature(case):
    q, order = case
    for h in isotropic_subgroups(q, order):
        assert milgram_signature(quotient_form(q, h)) == milgram_signature(q)
