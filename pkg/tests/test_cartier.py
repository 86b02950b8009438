import numpy as np
import pytest

from wittsplit.algebra import algebra_from_presentation, base_field, galois_field
from wittsplit.cartier import (CartierModule, box_product, compare_box_with_witt,
                               mv_extend, witt_as_cartier, _witt_group_orders)
from wittsplit.corpus import builtin_algebra
from wittsplit.witt import WittRing


def test_witt_of_prime_field_is_cyclic():
    d = witt_as_cartier(base_field(3), 2)
    assert d.module.orders == [2]            # Z/9
    assert d.module.F.tolist() == [[1]]      # identity
    assert int(d.module.V[0][0]) % 9 == 3    # multiplication by p
    assert d.module.vf_is_p


def test_witt_of_dual_numbers_order_16():
    A = algebra_from_presentation(("x",), ["x^2"], 2)
    d = witt_as_cartier(A, 2)
    assert d.module.size == 16
    assert d.module.vf_is_p


def test_witt_of_f4_is_z4_squared():
    d = witt_as_cartier(galois_field(2, 2), 2)
    assert sorted(2 ** e for e in d.module.orders) == [4, 4]
    m = d.module
    # F lifts the field Frobenius: F^2 = identity on W_2(F_4)
    f2 = m.F @ m.F
    for i in range(m.rank):
        for j in range(m.rank):
            want = 1 if i == j else 0
            assert (int(f2[i][j]) - want) % (2 ** m.orders[i]) == 0


def test_invariant_factor_coords_express_elements(rng):
    A = algebra_from_presentation(("x",), ["x^2"], 2)
    d = witt_as_cartier(A, 2)
    ring = d.ring
    for _ in range(20):
        x = rng.integers(0, 2, size=(2, 2))
        c = d.coords(x)
        recon = np.zeros_like(x)
        for i, ci in enumerate(c):
            g = d.generators[i]
            for _ in range(int(ci)):
                recon = ring.add(recon, g)
        assert np.array_equal(recon, x % 2)


def test_mv_extend_kills_p_on_zp():
    m = mv_extend(([1], [[0]], 2), truncation=2)   # M = Z/2, F = 0
    assert m.window_size() == 4
    x = {1: (1,)}                                  # m V^1
    assert m.apply_f(x) == {}                      # F(mV) = p m = 0 in Z/2


def test_mv_extend_truncation_one_is_module():
    m = mv_extend(([2], [[1]], 3), truncation=1)   # M = Z/9, F = id
    assert m.window_size() == 9
    assert m.apply_f({0: (4,)}) == {0: (4,)}
    assert m.apply_v({0: (1,)}) == {1: (1,)}       # V pushes out of the window


def test_mv_extend_fv_is_p_randomized(rng):
    mod = witt_as_cartier(galois_field(2, 2), 2).module
    ext = mv_extend(mod, truncation=3)
    for _ in range(100):
        x = ext.random_element(rng)
        fv = ext.apply_f(ext.apply_v(x))
        px = ext.scale(ext.p, x)
        assert fv == px


def test_box_of_cyclic_truncated_has_order_pn():
    for (p, n) in [(2, 2), (2, 3), (3, 2)]:
        m = witt_as_cartier(base_field(p), n).module
        b = box_product(m, m, n)
        assert b.module.size == p ** n


def test_box_relations_vanish():
    m = witt_as_cartier(base_field(2), 2).module
    nmod = witt_as_cartier(galois_field(2, 2), 2).module
    b = box_product(m, nmod, 2)
    for row in b.relations:
        assert not any(b.project(row))


def test_box_symmetry():
    a = witt_as_cartier(algebra_from_presentation(("x",), ["x^2"], 2), 2).module
    c = witt_as_cartier(galois_field(2, 2), 2).module
    b1 = box_product(a, c, 2)
    b2 = box_product(c, a, 2)
    assert sorted(b1.module.orders) == sorted(b2.module.orders)
    # the swap (a,b,k) -> (b,a,k) matches the two relation families
    for (x, y, k) in b1.gens:
        u = np.zeros(len(b1.gens), dtype=object)
        u[b1.gen_index(x, y, k)] = 1
        v = np.zeros(len(b2.gens), dtype=object)
        v[b2.gen_index(y, x, k)] = 1
        assert list(b1.project(b1.ambient_v(u))) is not None
        assert b1.gen_exps[b1.gen_index(x, y, k)] == b2.gen_exps[b2.gen_index(y, x, k)]


def test_box_truncation_coherence():
    # the level-n box surjects onto the level-(n-1) box compatibly
    m = witt_as_cartier(galois_field(2, 2), 3).module
    b3 = box_product(m, m, 3)
    b2 = box_product(m, m, 2)

    def down(vec3):
        out = np.zeros(len(b2.gens), dtype=object)
        for j, (a, b, k) in enumerate(b3.gens):
            if k < b2.nv:
                out[b2.gen_index(a, b, k)] += int(vec3[j])
        return out

    for row in b3.relations:
        assert not any(b2.project(down(row)))
    # generator classes map onto generator classes
    for j in range(len(b2.gens)):
        e = np.zeros(len(b3.gens), dtype=object)
        a, b, k = b2.gens[j]
        e[b3.gen_index(a, b, k)] = 1
        assert any(b2.project(down(e))) or b2.gen_exps[j] == 0


@pytest.mark.parametrize("pair", [
    ("F2", "F2"), ("F2", "F4"), ("F4", "F4"),
    ("F2", "F2[x]/(x^2)"), ("F2[x]/(x^2)", "F2[x]/(x^2)"),
    ("F3[x]/(x^2)", "F3[x]/(x^2)"),
    ("F2[t]/(t^3-1)", "F2[t]/(t^3-1)"), ("F4", "F2[t]/(t^3-1)"),
])
def test_compare_box_with_witt_corpus_pairs(pair):
    a = builtin_algebra(pair[0])
    b = builtin_algebra(pair[1])
    v = compare_box_with_witt(a, b, 2)
    assert v.isomorphism and v.equivariance
    assert v.cardinality_lhs == v.cardinality_rhs
    if v.orders_rhs is not None:
        assert sorted(v.orders_lhs) == sorted(v.orders_rhs)


@pytest.mark.parametrize("pair", [("F2", "F2"), ("F2", "F4"),
                                  ("F4", "F4"), ("F3", "F3")])
def test_compare_level3_field_pairs(pair):
    a = builtin_algebra(pair[0])
    b = builtin_algebra(pair[1])
    v = compare_box_with_witt(a, b, 3)
    assert v.isomorphism and v.equivariance


def test_compare_level3_all_desk_pairs():
    # the full desk corpus also goes through at n = 3: the comparison never
    # enumerates W_3 of the tensor algebra, only the factors
    from wittsplit.corpus import BOX_CORPUS_ALGEBRAS
    for name_a in BOX_CORPUS_ALGEBRAS:
        for name_b in BOX_CORPUS_ALGEBRAS:
            a, b = builtin_algebra(name_a), builtin_algebra(name_b)
            if a.p != b.p:
                continue
            v = compare_box_with_witt(a, b, 3)
            assert v.isomorphism and v.equivariance, (name_a, name_b)


def test_compare_verdict_example_card():
    A = builtin_algebra("F2[x]/(x^2)")
    v = compare_box_with_witt(A, A, 2)
    assert v.cardinality_lhs == 2 ** 8 == v.cardinality_rhs


def test_witt_group_orders_match_cartier():
    A = builtin_algebra("F2[t]/(t^3-1)")
    d = witt_as_cartier(A, 2)
    ring = WittRing(A, 2)
    assert sorted(_witt_group_orders(ring)) == sorted(2 ** e for e in d.module.orders)


def test_cartier_module_validation_rejects_bad_fv():
    with pytest.raises(ValueError):
        CartierModule(p=2, orders=[2], F=[[1]], V=[[1]])   # FV = 1 != 2


def test_projection_formula_prerequisite(rng):
    # x V(y) = V(F(x) y), the identity mu's well-definedness rides on
    A = builtin_algebra("F2[x]/(x^2)")
    ring = WittRing(A, 3)
    for _ in range(100):
        x = rng.integers(0, 2, size=(3, 2))
        y = rng.integers(0, 2, size=(3, 2))
        assert np.array_equal(ring.mul(x, ring.vshift(y)),
                              ring.vshift(ring.mul(ring.frob(x), y)))
