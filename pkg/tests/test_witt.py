import numpy as np
import pytest

from wittsplit.algebra import algebra_from_presentation, base_field, galois_field
from wittsplit.errors import ReducednessRequired, RingMismatch, TruncationOverflow
from wittsplit.witt import (WittRing, additive_order,
                            check_exact_sequences, wbar_space)


@pytest.fixture(scope="module")
def W2F2():
    return WittRing(base_field(2), 2)


def test_add_one_plus_one(W2F2):
    x = W2F2.from_coords([[1], [0]])
    assert np.array_equal(W2F2.add(x.coords, x.coords), [[0], [1]])


def test_add_zero_neutral(W2F2, rng):
    x = W2F2.from_coords(rng.integers(0, 2, size=(2, 1)))
    z = W2F2.zero()
    assert (x + z) == x


def test_mul_matches_z4(W2F2):
    # W_2(F_2) = Z/4 under k -> k*[1]; (1,0)*(1,1) is 1*3 = 3 = (1,1)
    x = W2F2.from_coords([[1], [0]])
    y = W2F2.from_coords([[1], [1]])
    assert np.array_equal(W2F2.mul(x.coords, y.coords), [[1], [1]])


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_ring_iso_with_zpn(p, n):
    # the map k -> k*[1] is a ring isomorphism Z/p^n -> W_n(F_p)
    ring = WittRing(base_field(p), n)
    table = {}
    for k in range(p ** n):
        table[k] = ring.from_int(k).coords
    codes = {ring.encode(v): k for k, v in table.items()}
    assert len(codes) == p ** n
    for a in range(p ** n):
        for b in range(p ** n):
            s = ring.add(table[a], table[b])
            m = ring.mul(table[a], table[b])
            assert codes[ring.encode(s)] == (a + b) % p ** n
            assert codes[ring.encode(m)] == (a * b) % p ** n


def test_unit_order_is_p_to_n():
    for (p, n) in [(2, 3), (3, 2), (5, 2)]:
        ring = WittRing(base_field(p), n)
        assert additive_order(ring, ring.one().coords) == p ** n


def test_teichmuller_unit_and_multiplicative():
    A = algebra_from_presentation(("x",), ["x^2"], 2)
    ring = WittRing(A, 2)
    assert ring.teichmuller(A.unit) == ring.one()
    for i in range(A.dim):
        for j in range(A.dim):
            a = np.eye(A.dim, dtype=np.int64)[i]
            b = np.eye(A.dim, dtype=np.int64)[j]
            lhs = ring.mul(ring.teichmuller(a).coords, ring.teichmuller(b).coords)
            rhs = ring.teichmuller(A.mul(a, b)).coords
            assert np.array_equal(lhs, rhs)


def test_teichmuller_square_of_nilpotent_vanishes():
    A = algebra_from_presentation(("x",), ["x^2"], 2)
    ring = WittRing(A, 2)
    tx = ring.teichmuller(A.generators[0])
    assert (tx * tx).is_zero()


def test_frobenius_on_teichmuller_is_power():
    F4 = galois_field(2, 2)
    ring = WittRing(F4, 2)
    g = F4.generators[0]
    tg = ring.teichmuller(g)
    assert tg.frobenius() == ring.teichmuller(F4.pow(g, 2))


def test_fv_equals_p_randomized(rng):
    A = algebra_from_presentation(("u",), ["u^2"], 2)
    ring = WittRing(A, 3)
    for _ in range(50):
        x = rng.integers(0, 2, size=(3, A.dim))
        fv = ring.frob(ring.vshift(x))
        vf = ring.vshift(ring.frob(x))
        p_fold = ring.add(x, x)
        assert np.array_equal(fv, vf)
        assert np.array_equal(fv, p_fold)


def test_v1_squared_is_zero(W2F2):
    v1 = W2F2.vshift(W2F2.one().coords)
    assert not W2F2.mul(v1, v1).any()
    assert not W2F2.vshift(np.zeros((2, 1), dtype=np.int64)).any()


def test_vx_vy_p_v_xy_exhaustive_w3f3():
    ring = WittRing(base_field(3), 3)
    elems = ring.all_elements()
    vx = ring.vshift(elems)
    n = elems.shape[0]
    i = np.repeat(np.arange(n), n)
    j = np.tile(np.arange(n), n)
    lhs = ring.mul(vx[i], vx[j])
    rhs = ring.pmul(ring.vshift(ring.mul(elems[i], elems[j])))
    assert np.array_equal(lhs, rhs)


def test_restriction_commutes(rng):
    A = galois_field(2, 2)
    ring = WittRing(A, 3)
    for _ in range(30):
        x = rng.integers(0, 2, size=(3, 2))
        r = ring.restrict_coords(x, 2)
        sub = ring.truncated(2)
        assert np.array_equal(ring.frob(x)[:2], sub.frob(r))
        assert np.array_equal(ring.vshift(x)[:2], sub.vshift(r))
        # R^{n-1} lands in the coefficient algebra
        assert np.array_equal(ring.restrict_coords(x, 1)[0], x[0])


def test_ring_mismatch_and_truncation_errors(W2F2):
    other = WittRing(base_field(2), 3)
    with pytest.raises(RingMismatch):
        W2F2.one() + other.one()
    with pytest.raises(TruncationOverflow):
        W2F2.vshift(W2F2.one().coords, 3)
    with pytest.raises(TruncationOverflow):
        other.one().restrict(2).restrict(3)


@pytest.mark.parametrize("name,e", [("F2", 1), ("F4", 2), ("F8", 3), ("F9", 2)])
def test_wbar_dimension_of_fields(algebras, name, e):
    A = algebras[name]
    for n in (1, 2, 3):
        assert wbar_space(A, n).dim == e


def test_wbar_frobenius_kernel_dual_numbers(algebras):
    wb = wbar_space(algebras["F2[x]/(x^2)"], 2)
    ker = wb.frobenius_kernel()
    assert ker.shape[0] == 1
    assert np.array_equal(ker[0] % 2, [0, 1])   # x spans the kernel


def test_wbar_coords_additive(rng):
    A = algebra_from_presentation(("x",), ["x^2"], 3)
    wb = wbar_space(A, 2)
    ring = wb.ring
    for _ in range(500):
        x = rng.integers(0, 3, size=(2, 2))
        y = rng.integers(0, 3, size=(2, 2))
        lhs = wb.coords(ring.add(x, y))
        rhs = (wb.coords(x) + wb.coords(y)) % 3
        assert np.array_equal(lhs, rhs)


def test_wbar_f_additive(rng, algebras):
    # F: A -> Wbar_n(A), x -> [x]^p mod p is additive (mod-p binomial)
    for name in ("F4", "F2[x]/(x^2)", "F3[x]/(x^2)"):
        A = algebras[name]
        wb = wbar_space(A, 2)
        for _ in range(50):
            a = A.random_element(rng)
            b = A.random_element(rng)
            lhs = wb.f_of((a + b) % A.p)
            rhs = (wb.f_of(a) + wb.f_of(b)) % A.p
            assert np.array_equal(lhs, rhs)


def test_wbar_kernel_iff_nonreduced(algebras):
    for name, A in algebras.items():
        for n in (1, 2, 3):
            if A.size() ** n > 1 << 18:
                continue
            wb = wbar_space(A, n)
            has_kernel = wb.frobenius_kernel().shape[0] > 0
            assert has_kernel == (not A.is_reduced()), (name, n)


def test_exact_sequences_f4():
    rep = check_exact_sequences(galois_field(2, 2), 3)
    assert rep.first_exact and rep.second_exact
    assert rep.dim_wbar == 2 and rep.dim_bookkeeping


def test_exact_sequences_dual_numbers():
    A = algebra_from_presentation(("x",), ["x^2"], 2)
    rep = check_exact_sequences(A, 2)
    assert not rep.f_injective          # kernel contains x
    assert rep.f_kernel_dim == 1
    assert rep.second_exact
    with pytest.raises(ReducednessRequired):
        check_exact_sequences(A, 2, require_reduced=True)


def test_exact_sequences_cubic_roots():
    A = algebra_from_presentation(("t",), ["t^3-1"], 2)
    rep = check_exact_sequences(A, 2)
    assert rep.first_exact and rep.second_exact and rep.dim_bookkeeping


def test_witt_vector_repr_and_hash(W2F2):
    x = W2F2.from_coords([[1], [0]])
    assert "1" in repr(x)
    assert hash(x) == hash(W2F2.from_coords([[1], [0]]))
