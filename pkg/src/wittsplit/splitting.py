"""Decision procedures for F-splitting and n-quasi-F-splitting of Artinian algebras.

Splittings are retractions phi with phi(F(1)) = 1 that are linear over the
twisted module action a.m = [a^p]*m; both existence questions reduce to
affine linear systems over F_p and are decided completely at a given level.
Returned witnesses re-validate by substitution and certificates re-verify
their kernel element before anything is handed back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .algebra import FiniteAlgebra
from .errors import WitnessInvalid
from .linalg import rank, solve
from .witt import ENUMERATION_CAP, WbarSpace, wbar_space


@dataclass
class SplittingWitness:
    """Retraction phi from Wbar_n-coordinates (n=1: F_*A) to A-coordinates."""
    phi: np.ndarray
    n: int
    kind: str                      # "F-split" | "n-quasi-F-split"
    p: int

    def to_jsonable(self):
        return {"kind": self.kind, "n": self.n, "phi": self.phi.tolist()}


@dataclass
class NonSplitCertificate:
    reason: str                    # "FrobeniusKernel" | "LinearSystemInconsistent"
    n: int
    element: Optional[np.ndarray] = None      # x with F(x) = 0 in Wbar_n
    rank_data: Optional[dict] = None

    def to_jsonable(self):
        out = {"reason": self.reason, "n": self.n}
        if self.element is not None:
            out["element"] = self.element.tolist()
        if self.rank_data is not None:
            out["rank_data"] = self.rank_data
        return out


SplitResult = Union[SplittingWitness, NonSplitCertificate]


@dataclass
class HeightReport:
    subject: str
    height: Union[int, str]        # 1..n_max, ">n_max", or "infinity"
    method: str
    n_max: int
    witness: Optional[SplittingWitness] = None
    certificate: Optional[NonSplitCertificate] = None
    bound: Optional[int] = None
    details: dict = field(default_factory=dict)

    def to_jsonable(self):
        out = {"subject": self.subject, "height": self.height,
               "method": self.method, "n_max": self.n_max}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.witness is not None:
            out["witness"] = self.witness.to_jsonable()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_jsonable()
        if self.details:
            out["details"] = self.details
        return out


def _constraint_columns(dim_src: int, dim_a: int):
    """Unknowns are the dim_a x dim_src entries of phi, row-major."""
    return dim_a * dim_src


def is_f_split(algebra: FiniteAlgebra, validate: bool = True) -> SplitResult:
    """Complete decision for a splitting of F: A -> F_*A.

    Solves phi(a^p m) = a phi(m) for presentation generators a and basis
    elements m, with phi(1) = 1, directly on A-coordinates.
    """
    p = algebra.p
    d = algebra.dim
    nunk = d * d
    rows, rhs = [], []

    def phi_row(target_vec, out_coord):
        # coefficient row for the linear functional phi(target)[out_coord]
        row = np.zeros(nunk, dtype=np.int64)
        row[out_coord * d:(out_coord + 1) * d] = target_vec
        return row

    eye = np.eye(d, dtype=np.int64)
    for g in algebra.generators:
        gp = algebra.pow(g, p)
        for m in eye:
            lhs_target = algebra.mul(gp, m)
            # phi(g^p m) - g*phi(m) = 0, one scalar equation per output coord
            for k in range(d):
                row = phi_row(lhs_target, k)
                # g * phi(m): phi(m) has coords (unknown block for m), multiply by g
                for kk in range(d):
                    coeff = algebra.mul(g, eye[kk])[k]
                    row[kk * d:(kk + 1) * d] -= coeff * m
                rows.append(row % p)
                rhs.append(0)
    for k in range(d):
        rows.append(phi_row(algebra.unit, k))
        rhs.append(int(algebra.unit[k]))

    sol = solve(np.stack(rows), np.array(rhs), p)
    if sol is None:
        ker = algebra.frobenius_kernel_element()
        if ker is not None:
            return NonSplitCertificate("FrobeniusKernel", n=1, element=ker)
        mat = np.stack(rows)
        return NonSplitCertificate(
            "LinearSystemInconsistent", n=1,
            rank_data={"rank": rank(mat, p),
                       "aug_rank": rank(np.column_stack([mat, rhs]), p),
                       "unknowns": nunk})
    phi = sol.reshape(d, d) % p
    witness = SplittingWitness(phi=phi, n=1, kind="F-split", p=p)
    if validate:
        validate_f_split_witness(algebra, witness)
    return witness


def validate_f_split_witness(algebra: FiniteAlgebra, w: SplittingWitness) -> None:
    p, d = algebra.p, algebra.dim
    phi = w.phi
    if not np.array_equal((phi @ algebra.unit) % p, algebra.unit):
        raise WitnessInvalid("phi(1) != 1")
    eye = np.eye(d, dtype=np.int64)
    for g in algebra.generators:
        gp = algebra.pow(g, p)
        for m in eye:
            lhs = (phi @ algebra.mul(gp, m)) % p
            rhs = algebra.mul(g, (phi @ m) % p)
            if not np.array_equal(lhs, rhs):
                raise WitnessInvalid("phi is not linear over the twisted action")


def is_quasi_f_split(algebra: FiniteAlgebra, n: int,
                     wbar: WbarSpace | None = None,
                     cap: int = ENUMERATION_CAP,
                     validate: bool = True) -> SplitResult:
    """Complete decision at level n: retraction of F: A -> F_*(W_n(A)/p)."""
    if n == 1 and wbar is None:
        res = is_f_split(algebra, validate=validate)
        if isinstance(res, SplittingWitness):
            res.kind = "n-quasi-F-split"
        return res
    p = algebra.p
    d = algebra.dim
    wb = wbar or wbar_space(algebra, n, cap=cap)
    dw = wb.dim
    nunk = d * dw
    rows, rhs = [], []
    eye = np.eye(d, dtype=np.int64)
    for g in algebra.generators:
        act = wb.action_matrix(g)      # Wbar -> Wbar, m -> [g^p] m
        gmat = np.stack([algebra.mul(g, e) for e in eye], axis=1)  # mult-by-g on A
        for j in range(dw):
            target = act[:, j]
            for k in range(d):
                row = np.zeros(nunk, dtype=np.int64)
                row[k * dw:(k + 1) * dw] = target
                for kk in range(d):
                    row[kk * dw + j] -= gmat[k, kk]
                rows.append(row % p)
                rhs.append(0)
    f1 = wb.f_of(algebra.unit)
    for k in range(d):
        row = np.zeros(nunk, dtype=np.int64)
        row[k * dw:(k + 1) * dw] = f1
        rows.append(row)
        rhs.append(int(algebra.unit[k]))

    sol = solve(np.stack(rows), np.array(rhs), p)
    if sol is None:
        ker = wb.frobenius_kernel()
        if ker.shape[0]:
            cert = NonSplitCertificate("FrobeniusKernel", n=n, element=ker[0] % p)
            verify_frobenius_kernel(algebra, n, cert.element, wb)
            return cert
        mat = np.stack(rows)
        return NonSplitCertificate(
            "LinearSystemInconsistent", n=n,
            rank_data={"rank": rank(mat, p),
                       "aug_rank": rank(np.column_stack([mat, rhs]), p),
                       "unknowns": nunk})
    phi = sol.reshape(d, dw) % p
    witness = SplittingWitness(phi=phi, n=n, kind="n-quasi-F-split", p=p)
    if validate:
        validate_quasi_witness(algebra, witness, wb)
    return witness


def validate_quasi_witness(algebra: FiniteAlgebra, w: SplittingWitness,
                           wb: WbarSpace) -> None:
    p, d = algebra.p, algebra.dim
    phi = w.phi
    if not np.array_equal((phi @ wb.f_of(algebra.unit)) % p, algebra.unit):
        raise WitnessInvalid("phi(F(1)) != 1")
    for g in algebra.generators:
        act = wb.action_matrix(g)
        lhs = (phi @ act) % p
        gm = np.stack([algebra.mul(g, e) for e in np.eye(d, dtype=np.int64)], axis=1)
        rhs = (gm @ phi) % p
        if not np.array_equal(lhs, rhs):
            raise WitnessInvalid("phi is not linear over the twisted action")


def verify_frobenius_kernel(algebra: FiniteAlgebra, n: int, x,
                            wb: WbarSpace | None = None) -> None:
    """Re-verify a FrobeniusKernel certificate: [x^p] lies in pW_n(A)."""
    wb = wb or wbar_space(algebra, n)
    if not np.asarray(x).any():
        raise WitnessInvalid("kernel certificate element is zero")
    if wb.f_of(x).any():
        raise WitnessInvalid("certificate element has F(x) != 0")


def compose_with_restriction(algebra: FiniteAlgebra, w: SplittingWitness,
                             wb_lo: WbarSpace, wb_hi: WbarSpace) -> SplittingWitness:
    """Lift a level-n witness to level n+1 by precomposing with R-bar."""
    p = algebra.p
    n_hi = wb_hi.n
    cols = []
    for j in range(wb_hi.dim):
        rep = wb_hi.rep(j)
        cols.append(wb_lo.coords(rep[: wb_lo.n]))
    rbar = np.stack(cols, axis=1) % p
    phi = (w.phi @ rbar) % p
    out = SplittingWitness(phi=phi, n=n_hi, kind="n-quasi-F-split", p=p)
    validate_quasi_witness(algebra, out, wb_hi)
    return out


def height_artinian(algebra: FiniteAlgebra, n_max: int = 3,
                    subject: str = "", cap: int = ENUMERATION_CAP) -> HeightReport:
    """Quasi-F-split height of Spec A by ascending complete decisions.

    Non-reduced input short-circuits to infinity: a nonzero x with x^p = 0
    has [x^p] = 0 in every Wbar_n, so no level can split.
    """
    name = subject or repr(algebra)
    if not algebra.is_reduced():
        x = algebra.frobenius_kernel_element()
        cert = NonSplitCertificate("FrobeniusKernel", n=0, element=x)
        verify_frobenius_kernel(algebra, 1, x)
        return HeightReport(subject=name, height="infinity",
                            method="artinian-decision", n_max=n_max,
                            certificate=cert,
                            details={"reason": "non-reduced: level-independent kernel"})
    last_cert = None
    for n in range(1, n_max + 1):
        res = is_quasi_f_split(algebra, n, cap=cap)
        if isinstance(res, SplittingWitness):
            return HeightReport(subject=name, height=n,
                                method="artinian-decision", n_max=n_max,
                                witness=res)
        last_cert = res
    return HeightReport(subject=name, height=f">{n_max}",
                        method="artinian-decision", n_max=n_max,
                        certificate=last_cert)
