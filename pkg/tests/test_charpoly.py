import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourfold import charpoly
from fourfold.charpoly import C4, PM1, BundleClassData, ExtPoly
from fourfold.errors import (
    ModeMismatch,
    NonExactDivision,
    NonMonicDenominator,
    UDegreeOverflow,
)


def poly(k, *terms, mode=PM1):
    return ExtPoly(k, mode, frozenset(terms))


# --- ring arithmetic ---

def test_exterior_expansion():
    k = 2
    one, t1, t2 = ExtPoly.one(k), ExtPoly.t(k, 1), ExtPoly.t(k, 2)
    product = (one + t1) * (one + t2)
    assert product == one + t1 + t2 + t1 * t2


def test_generator_squares_to_zero():
    t1 = ExtPoly.t(3, 1)
    assert (t1 * t1).is_zero()


def test_u_squares_to_zero_in_c4():
    u = ExtPoly.u(1, 1, mode=C4)
    assert (u * u).is_zero()
    u_pm1 = ExtPoly.u(1, 1)
    assert u_pm1 * u_pm1 == ExtPoly.u(1, 2)


def test_addition_is_xor():
    t1 = ExtPoly.t(2, 1)
    assert (t1 + t1).is_zero()


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        ExtPoly.t(2, 1) * ExtPoly.t(3, 1)
    with pytest.raises(ModeMismatch):
        ExtPoly.u(2, 1) + ExtPoly.u(2, 1, mode=C4)


def test_render_canonical():
    k = 2
    p = ExtPoly.t(k, 1) * ExtPoly.t(k, 2) + ExtPoly.u(k, 2)
    assert p.render() == "t1*t2 + u^2"
    assert ExtPoly.zero(k).render() == "0"
    assert ExtPoly.one(k).render() == "1"
    q = ExtPoly.v(1) + ExtPoly.u(1, 1, mode=C4)
    assert q.render() == "v + u"


def test_udeg_cap(monkeypatch):
    monkeypatch.setenv("FOURFOLD_MAX_UDEG", "4")
    assert charpoly.max_udeg() == 4
    with pytest.raises(UDegreeOverflow):
        ExtPoly.u(1, 5)
    monkeypatch.delenv("FOURFOLD_MAX_UDEG")
    assert charpoly.max_udeg() == charpoly.DEFAULT_MAX_UDEG


def random_poly(k, rng, max_u=2):
    terms = set()
    for _ in range(rng.randint(0, 5)):
        terms.add((rng.randrange(1 << k), rng.randint(0, max_u), 0))
    return ExtPoly(k, PM1, frozenset(terms))


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_mul_associative_commutative(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    a, b, c = (random_poly(k, rng) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


# --- equivariant Euler classes ---

def test_trivial_bundle_euler_powers():
    for rank in range(17):
        b = BundleClassData(k=1, rank=rank, sw=())
        expected = ExtPoly.u(1, rank) if rank else ExtPoly.one(1)
        assert charpoly.equivariant_euler(b, "pm1") == expected


def test_hplus_euler_c4_form():
    k = 2
    b = charpoly.total_sw_line_sum(k, [(1,), (2,)], 1)  # rank 3, b = 3
    euler = charpoly.equivariant_euler(b, "c4_hplus")
    w3 = b.w(3, C4)
    w2 = b.w(2, C4)
    assert euler == w3 + w2 * ExtPoly.u(k, 1, mode=C4)
    assert w3.is_zero() and w2 == ExtPoly.t(k, 1, C4) * ExtPoly.t(k, 2, C4)


def test_fixed_euler_is_top_class():
    b = charpoly.total_sw_line_sum(2, [(1,), (2,)], 0)
    assert charpoly.equivariant_euler(b, "pm1_fixed") == \
        ExtPoly.t(2, 1) * ExtPoly.t(2, 2)


def test_spinor_euler_c4():
    b = BundleClassData(k=1, rank=2, sw=(ExtPoly.t(1, 1), ExtPoly.zero(1)))
    euler = charpoly.equivariant_euler(b, "c4_spinor")
    v = ExtPoly.v(1)
    assert euler == b.w(2, C4) + b.w(1, C4) * v + v * v


def test_unknown_mode_rejected():
    b = BundleClassData(k=1, rank=1, sw=(ExtPoly.t(1, 1),))
    with pytest.raises(ModeMismatch):
        charpoly.equivariant_euler(b, "nope")


# --- line-sum bundles ---

def test_line_sum_small():
    b = charpoly.total_sw_line_sum(2, [(1,), (2,)], 0)
    assert b.rank == 2
    assert b.total() == (ExtPoly.one(2) + ExtPoly.t(2, 1)) \
        * (ExtPoly.one(2) + ExtPoly.t(2, 2))
    assert b.w(2) == ExtPoly.t(2, 1) * ExtPoly.t(2, 2)


def test_line_sum_trivial_only():
    b = charpoly.total_sw_line_sum(0, [], 5)
    assert b.rank == 5
    assert b.total() == ExtPoly.one(0)


def test_line_sum_with_trivial_rank():
    b = charpoly.total_sw_line_sum(1, [(1,)], 1)
    assert b.rank == 2
    assert b.w(1) == ExtPoly.t(1, 1)
    assert b.w(2).is_zero()


def test_top_class_nonzero_up_to_16():
    for k in range(1, 17):
        b = charpoly.total_sw_line_sum(k, [(i,) for i in range(1, k + 1)], 0)
        top = b.w(k)
        expected = ExtPoly.one(k)
        for i in range(1, k + 1):
            expected = expected * ExtPoly.t(k, i)
        assert top == expected and not top.is_zero()


# --- virtual classes ---

def test_virtual_unit_denominator():
    w1 = charpoly.total_sw_line_sum(2, [(1,), (2,)], 0)
    v1 = BundleClassData(k=2, rank=3, sw=())
    virt = charpoly.virtual_sw(w1, v1)
    assert virt[0] == ExtPoly.one(2)
    assert virt[1] == w1.w(1)
    assert virt[2] == w1.w(2)


def test_virtual_inverse_of_line():
    num = BundleClassData(k=1, rank=1, sw=())
    den = BundleClassData(k=1, rank=1, sw=(ExtPoly.t(1, 1),))
    virt = charpoly.virtual_sw(num, den)
    assert virt[1] == ExtPoly.t(1, 1)  # (1+t1)^{-1} = 1+t1


def test_virtual_cancellation():
    num = charpoly.total_sw_line_sum(2, [(1,), (2,)], 0)
    den = charpoly.total_sw_line_sum(2, [(1,)], 0)
    virt = charpoly.virtual_sw(num, den)
    assert virt[1] == ExtPoly.t(2, 2)
    assert virt[2].is_zero()


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_virtual_times_denominator_roundtrip(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    def bundle():
        rank = rng.randint(1, 3)
        return BundleClassData(
            k=k, rank=rank,
            sw=tuple(random_poly(k, rng, max_u=0).t_degree_part(i)
                     for i in range(1, rank + 1)))
    a, b = bundle(), bundle()
    total = ExtPoly.zero(k)
    for part in charpoly.virtual_sw(a, b):
        total = total + part
    assert total * b.total() == a.total()


# --- Laurent division ---

def test_laurent_monomials():
    k = 1
    num = ExtPoly.u(k, 2) + ExtPoly.t(k, 1) * ExtPoly.u(k, 1)
    q, neg = charpoly.laurent_divide(num, ExtPoly.u(k, 1))
    assert q == ExtPoly.u(k, 1) + ExtPoly.t(k, 1)
    assert not neg


def test_laurent_negative_degree():
    k = 2
    num = ExtPoly.t(k, 1) * ExtPoly.t(k, 2)
    q, neg = charpoly.laurent_divide(num, ExtPoly.u(k, 1))
    assert neg
    assert q.shift_u(1) == num


def test_laurent_trivial_sw_sign():
    # u^n / u^m has negative terms exactly when n < m
    for n in range(4):
        for m in range(4):
            q, neg = charpoly.laurent_divide(ExtPoly.u(2, n), ExtPoly.u(2, m))
            assert neg == (n < m)
            assert q == ExtPoly.u(2, n).shift_u(-m)


def test_laurent_nonmonic_rejected():
    k = 1
    with pytest.raises(NonMonicDenominator):
        charpoly.laurent_divide(ExtPoly.u(k, 1), ExtPoly.t(k, 1))
    with pytest.raises(NonMonicDenominator):
        charpoly.laurent_divide(ExtPoly.u(k, 1), ExtPoly.zero(k))


def test_laurent_non_exact_rejected():
    # u + 1 is monic in u but not invertible in the Laurent extension
    k = 1
    den = ExtPoly.u(k, 1) + ExtPoly.one(k)
    with pytest.raises(NonExactDivision):
        charpoly.laurent_divide(ExtPoly.one(k), den)


def test_laurent_c4_rejected():
    with pytest.raises(ModeMismatch):
        charpoly.laurent_divide(ExtPoly.v(1), ExtPoly.v(1))


def monic_poly(k, rng):
    m = rng.randint(0, 2)
    terms = {(0, m, 0)}
    for _ in range(rng.randint(0, 4)):
        mask = rng.randrange(1 << k)
        up = rng.randint(0, m)
        if (mask, up) != (0, m):
            terms.add((mask, up, 0))
    return ExtPoly(k, PM1, frozenset(terms))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_laurent_roundtrip(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    q = random_poly(k, rng)
    d = monic_poly(k, rng)
    quotient, neg = charpoly.laurent_divide(q * d, d)
    if q.is_zero():
        assert quotient.is_zero()
    else:
        assert quotient == q
        assert neg == (q.min_u() < 0)


def test_invert_unit():
    k = 2
    p = ExtPoly.one(k) + ExtPoly.t(k, 1)
    inv = charpoly.invert_unit(p)
    assert p * inv == ExtPoly.one(k)
    with pytest.raises(NonMonicDenominator):
        charpoly.invert_unit(ExtPoly.t(k, 1))
    with pytest.raises(NonMonicDenominator):
        charpoly.invert_unit(ExtPoly.one(k) + ExtPoly.u(k, 1))
