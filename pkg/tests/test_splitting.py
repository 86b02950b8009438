import numpy as np
import pytest

from wittsplit.errors import WitnessInvalid
from wittsplit.splitting import (NonSplitCertificate, SplittingWitness,
                                 compose_with_restriction, height_artinian,
                                 is_f_split, is_quasi_f_split,
                                 validate_f_split_witness, validate_quasi_witness,
                                 verify_frobenius_kernel)
from wittsplit.witt import wbar_space


def test_fields_are_f_split(algebras):
    for name in ("F2", "F3", "F5", "F4", "F8", "F9"):
        res = is_f_split(algebras[name])
        assert isinstance(res, SplittingWitness), name


def test_f4_witness_is_inverse_frobenius(algebras):
    F4 = algebras["F4"]
    w = is_f_split(F4)
    # phi inverts x -> x^p on the field
    frob = F4.frobenius_matrix
    assert np.array_equal((w.phi @ frob) % 2, np.eye(2, dtype=np.int64))


def test_dual_numbers_not_split(algebras):
    res = is_f_split(algebras["F2[x]/(x^2)"])
    assert isinstance(res, NonSplitCertificate)
    assert res.reason == "FrobeniusKernel"
    assert np.array_equal(res.element % 2, [0, 1])


def test_cubic_roots_split_with_validated_witness(algebras):
    res = is_f_split(algebras["F2[t]/(t^3-1)"])
    assert isinstance(res, SplittingWitness)
    validate_f_split_witness(algebras["F2[t]/(t^3-1)"], res)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dual_numbers_quasi_certificates_every_level(algebras, n):
    res = is_quasi_f_split(algebras["F2[x]/(x^2)"], n)
    assert isinstance(res, NonSplitCertificate)
    assert res.reason == "FrobeniusKernel"
    verify_frobenius_kernel(algebras["F2[x]/(x^2)"], n, res.element)


def test_two_variable_nilpotents_not_quasi_split(algebras):
    res = is_quasi_f_split(algebras["F2[x,y]/(x^2,y^2)"], 2)
    assert isinstance(res, NonSplitCertificate)


def test_fields_quasi_split_all_levels(algebras):
    for n in (1, 2, 3):
        assert isinstance(is_quasi_f_split(algebras["F9"], n), SplittingWitness)


def test_quasi_level1_matches_f_split(algebras):
    for name, A in algebras.items():
        a = isinstance(is_f_split(A), SplittingWitness)
        b = isinstance(is_quasi_f_split(A, 1), SplittingWitness)
        assert a == b, name


def test_artinian_theorem_let(algebras):
    # quasi-F-split at any level <=> F-split <=> reduced, at desk scale
    for name, A in algebras.items():
        reduced = A.is_reduced()
        assert isinstance(is_f_split(A), SplittingWitness) == reduced, name
        for n in (1, 2):
            res = is_quasi_f_split(A, n)
            assert isinstance(res, SplittingWitness) == reduced, (name, n)


def test_heights(algebras):
    assert height_artinian(algebras["F4"], 3).height == 1
    assert height_artinian(algebras["F3[t]/(t^3-t)"], 3).height == 1
    rep = height_artinian(algebras["F2[x]/(x^2)"], 3)
    assert rep.height == "infinity"
    assert rep.certificate is not None
    assert rep.method == "artinian-decision"


def test_monotonicity_witness_lifts(algebras):
    for name in ("F4", "F2[t]/(t^3-1)", "F9"):
        A = algebras[name]
        wb1 = wbar_space(A, 1)
        wb2 = wbar_space(A, 2)
        w1 = is_quasi_f_split(A, 1, wbar=wb1)
        lifted = compose_with_restriction(A, w1, wb1, wb2)
        validate_quasi_witness(A, lifted, wb2)    # raises on failure
        wb3 = wbar_space(A, 3)
        lifted3 = compose_with_restriction(A, lifted, wb2, wb3)
        validate_quasi_witness(A, lifted3, wb3)


def test_witness_tampering_detected(algebras):
    A = algebras["F4"]
    w = is_f_split(A)
    bad = SplittingWitness(phi=(w.phi + 1) % 2, n=1, kind="F-split", p=2)
    with pytest.raises(WitnessInvalid):
        validate_f_split_witness(A, bad)


def test_kernel_certificate_revalidation_rejects_zero(algebras):
    with pytest.raises(WitnessInvalid):
        verify_frobenius_kernel(algebras["F2[x]/(x^2)"], 2,
                                np.zeros(2, dtype=np.int64))
    with pytest.raises(WitnessInvalid):
        # 1 is not in the kernel
        verify_frobenius_kernel(algebras["F2[x]/(x^2)"], 2,
                                np.array([1, 0]))


def test_report_json_shape(algebras):
    rep = height_artinian(algebras["F2[x]/(x^2)"], 2, subject="dual")
    js = rep.to_jsonable()
    assert js["subject"] == "dual"
    assert js["height"] == "infinity"
    assert js["certificate"]["reason"] == "FrobeniusKernel"
