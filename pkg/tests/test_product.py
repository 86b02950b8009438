import numpy as np
import pytest

from wittsplit.algebra import tensor_algebra
from wittsplit.corpus import builtin_algebra
from wittsplit.errors import FactorIsSplit, WitnessInvalid
from wittsplit.product import (build_product_splitting, nonsplit_tensor_certificate,
                               verify_quasi_splitting)
from wittsplit.splitting import (SplittingWitness, is_f_split, is_quasi_f_split)


def witnesses(a_name, b_name, n):
    A = builtin_algebra(a_name)
    B = builtin_algebra(b_name)
    sa = is_f_split(A)
    sb = is_quasi_f_split(B, n)
    assert isinstance(sa, SplittingWitness)
    assert isinstance(sb, SplittingWitness)
    return A, sa, B, sb


BUILD_PAIRS = [
    ("F2", "F2", 2), ("F2", "F2", 3),
    ("F4", "F2[t]/(t^3-1)", 2), ("F4", "F4", 3),
    ("F2[t]/(t^3-1)", "F4", 2),
    ("F3", "F9", 2), ("F9", "F3[t]/(t^3-t)", 2),
    ("F5", "F5", 3),
    ("F2[x]/(x^2+x)", "F8", 2),
]


@pytest.mark.parametrize("a_name,b_name,n", BUILD_PAIRS)
def test_build_product_splitting(a_name, b_name, n):
    A, sa, B, sb = witnesses(a_name, b_name, n)
    construction = build_product_splitting(A, sa, B, sb, n)
    assert construction.relation_checks_passed
    assert construction.annihilation_passed
    T = tensor_algebra(A, B)
    ver = verify_quasi_splitting(construction.witness.phi, T, n)
    assert ver.passed and ver.unit_ok and ver.linearity_ok


def test_identity_level_splitting_for_prime_field():
    A, sa, B, sb = witnesses("F2", "F2", 2)
    construction = build_product_splitting(A, sa, B, sb, 2)
    T = tensor_algebra(A, B)
    # sigma after F is the identity on the one-dimensional algebra
    import numpy as np
    from wittsplit.witt import wbar_space
    wb = wbar_space(T, 2)
    out = (construction.witness.phi @ wb.f_of(T.unit)) % 2
    assert np.array_equal(out, T.unit)


def test_zero_map_fails_verification():
    A, sa, B, sb = witnesses("F4", "F2[t]/(t^3-1)", 2)
    T = tensor_algebra(A, B)
    phi0 = np.zeros((T.dim, 1), dtype=np.int64)
    from wittsplit.witt import wbar_space
    wb = wbar_space(T, 2)
    ver = verify_quasi_splitting(np.zeros((T.dim, wb.dim), dtype=np.int64), T, 2,
                                 wb=wb)
    assert not ver.passed and not ver.unit_ok


def test_truncated_level_is_recorded_not_asserted():
    A, sa, B, sb = witnesses("F4", "F4", 2)
    construction = build_product_splitting(A, sa, B, sb, 2)
    T = tensor_algebra(A, B)
    ver = verify_quasi_splitting(construction.witness.phi, T, 2,
                                 check_lower_level=True)
    assert ver.truncated_level_check is not None
    assert ver.truncated_level_check["level"] == 1
    assert isinstance(ver.truncated_level_check["passed"], bool)


def test_witness_level_mismatch_rejected():
    A = builtin_algebra("F4")
    B = builtin_algebra("F2[t]/(t^3-1)")
    sa = is_f_split(A)
    sb = is_quasi_f_split(B, 1)
    with pytest.raises(WitnessInvalid):
        build_product_splitting(A, sa, B, sb, 2)


REFUTE_PAIRS = [
    ("F2[x]/(x^2)", "F2[x]/(x^2)", 2),
    ("F2[x]/(x^2)", "F2[x]/(x^2)", 3),
    ("F3[x]/(x^2)", "F3[x]/(x^2)", 2),
    ("F2[x]/(x^2)", "F2[x]/(x^3)", 2),
    ("F2[x]/(x^3)", "F2[x]/(x^3)", 2),
    ("F2[x]/(x^2)", "F2[x,y]/(x^2,y^2+y)", 2),
    ("F5[x]/(x^2)", "F5[x]/(x^2)", 1),
]


@pytest.mark.parametrize("a_name,b_name,n", REFUTE_PAIRS)
def test_nonsplit_tensor_certificates(a_name, b_name, n):
    A = builtin_algebra(a_name)
    B = builtin_algebra(b_name)
    cert = nonsplit_tensor_certificate(A, B, n)
    assert cert.tensor_nonzero
    assert cert.cross_terms_zero
    assert cert.expansion_a == [] and cert.expansion_b == []
    assert cert.independent_certificate.reason == "FrobeniusKernel"
    assert len(cert.mechanism_samples) == 5
    js = cert.to_jsonable()
    assert js["independent_certificate"]["reason"] == "FrobeniusKernel"


def test_split_factor_raises():
    with pytest.raises(FactorIsSplit):
        nonsplit_tensor_certificate(builtin_algebra("F2[x]/(x^2)"),
                                    builtin_algebra("F4"), 2)
    with pytest.raises(FactorIsSplit):
        nonsplit_tensor_certificate(builtin_algebra("F4"),
                                    builtin_algebra("F2[x]/(x^2)"), 2)


def test_converse_consistency(algebras):
    # wherever the complete decision finds A (x) B quasi-split, one factor is
    # F-split and the other quasi-split at the same level
    from wittsplit.algebra import tensor_algebra as tensor
    names = ["F2", "F4", "F2[x]/(x^2)", "F2[t]/(t^3-1)"]
    for na in names:
        for nb in names:
            A, B = algebras[na], algebras[nb]
            if A.p != B.p or A.dim * B.dim > 9:
                continue
            T = tensor(A, B)
            res = is_quasi_f_split(T, 2)
            if isinstance(res, SplittingWitness):
                fa = isinstance(is_f_split(A), SplittingWitness)
                fb = isinstance(is_f_split(B), SplittingWitness)
                qa = isinstance(is_quasi_f_split(A, 2), SplittingWitness)
                qb = isinstance(is_quasi_f_split(B, 2), SplittingWitness)
                assert (fa and qb) or (fb and qa), (na, nb)
