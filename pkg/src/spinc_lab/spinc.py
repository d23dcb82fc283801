"""Spin^c connections on E(kappa, tau) in the invariant trivialization.

Spinors with constant components in the left-invariant frame are acted on by
nabla_{e_k} = M_k, where
    M_k = 1/4 sum_{j,m} Gamma^m_kj e_j . e_m + (i/2) a_k
and A(e_k) = i a_k is the auxiliary connection 1-form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordRep, Spinor, TwoForm, build_clifford_rep
from .homogeneous import FrameModel, d_invariant_oneform

RANK_RTOL = 1e-9


@dataclass(frozen=True)
class AuxPotential:
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.shape != (3,) or not np.all(np.isfinite(a)):
            raise ValueError("auxiliary potential needs three finite frame components")
        object.__setattr__(self, "a", a)

    @classmethod
    def vertical(cls, a3: float) -> "AuxPotential":
        return cls(np.array([0.0, 0.0, a3]))


def canonical_potential(model: FrameModel) -> AuxPotential:
    """Invariant gauge with Omega(e1, e2) = -(kappa - 4 tau^2)."""
    p = model.params
    return AuxPotential.vertical((p.kappa - 4 * p.tau**2) / (2 * p.tau))


def anticanonical_potential(model: FrameModel) -> AuxPotential:
    p = model.params
    return AuxPotential.vertical(-(p.kappa - 4 * p.tau**2) / (2 * p.tau))


@dataclass(frozen=True)
class SpincFrameConnection:
    M: tuple
    aux: AuxPotential
    omega: TwoForm
    model: FrameModel = field(repr=False)
    rep: CliffordRep = field(repr=False)

    def nabla(self, k: int, psi) -> np.ndarray:
        return self.M[k] @ _components(psi)


def _components(psi):
    return psi.components if isinstance(psi, Spinor) else np.asarray(psi, dtype=complex)


def levi_civita_part(model: FrameModel, rep: CliffordRep) -> list:
    g = rep.gammas
    out = []
    for k in range(3):
        mk = np.zeros((2, 2), dtype=complex)
        for j in range(3):
            for m in range(3):
                if model.gamma[k, j, m]:
                    mk += 0.25 * model.gamma[k, j, m] * g[j] @ g[m]
        out.append(mk)
    return out


def build_spinc_connection(model: FrameModel, aux: AuxPotential) -> SpincFrameConnection:
    rep = build_clifford_rep(3)
    eye = rep.identity
    M = tuple(mk + 0.5j * aux.a[k] * eye for k, mk in enumerate(levi_civita_part(model, rep)))
    # da(e_i, e_j) = -a([e_i, e_j]) for an invariant potential
    omega = TwoForm(-np.einsum("m,ijm->ij", aux.a, model.brackets))
    return SpincFrameConnection(M, aux, omega, model, rep)


def deform_connection(conn: SpincFrameConnection, c: float) -> SpincFrameConnection:
    """Change A to A + i c eta: nabla' = nabla + (i/2) c eta, Omega' = Omega + d(c eta)."""
    eye = conn.rep.identity
    M = tuple(mk + (0.5j * c * eye if k == 2 else 0) for k, mk in enumerate(conn.M))
    aux = AuxPotential(conn.aux.a + np.array([0.0, 0.0, c]))
    omega = conn.omega + d_invariant_oneform(c, conn.model)
    return SpincFrameConnection(M, aux, omega, conn.model, conn.rep)


@dataclass(frozen=True)
class KillingSolution:
    alpha: float
    basis: list
    xi_eigenvalue: complex | None

    @property
    def dim(self) -> int:
        return len(self.basis)


def killing_system(conn: SpincFrameConnection, alpha: float) -> np.ndarray:
    """Stacked 6x2 matrix of (M_k - alpha e_k.) for k = 1, 2, 3."""
    return np.vstack([conn.M[k] - alpha * conn.rep.gammas[k] for k in range(3)])


def nullspace(a: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    _, s, vh = np.linalg.svd(a)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rtol * scale))
    return vh[rank:].conj().T


def killing_solve(conn: SpincFrameConnection, alpha: float) -> KillingSolution:
    ker = nullspace(killing_system(conn, alpha))
    basis = [Spinor(ker[:, i], conn.rep) for i in range(ker.shape[1])]
    xi_eig = None
    if len(basis) == 1:
        psi = basis[0].components
        xi_eig = complex(np.vdot(psi, conn.rep.gammas[2] @ psi) / np.vdot(psi, psi))
    return KillingSolution(float(alpha), basis, xi_eig)


def dirac_matrix(conn: SpincFrameConnection) -> np.ndarray:
    return sum(g @ m for g, m in zip(conn.rep.gammas, conn.M))


def spin_curvature(conn: SpincFrameConnection, i: int, j: int) -> np.ndarray:
    """R(e_i, e_j) = [M_i, M_j] - c^m_ij M_m on invariant spinors."""
    mi, mj = conn.M[i], conn.M[j]
    out = mi @ mj - mj @ mi
    for m in range(3):
        out = out - conn.model.brackets[i, j, m] * conn.M[m]
    return out


def ricci_identity_residual(conn: SpincFrameConnection) -> float:
    """max_k || sum_j e_j.R(e_j,e_k) - 1/2 Ric(e_k). + (i/2)(e_k _| Omega). ||."""
    rep = conn.rep
    ric = conn.model.ricci
    res = 0.0
    for k in range(3):
        lhs = sum(rep.gammas[j] @ spin_curvature(conn, j, k) for j in range(3))
        rhs = 0.5 * rep.vector(ric[k]) - 0.5j * rep.vector(conn.omega.interior(np.eye(3)[k]))
        res = max(res, np.abs(lhs - rhs).max())
    return float(res)


def rough_laplacian(conn: SpincFrameConnection) -> np.ndarray:
    # nabla_{e_k} e_k = 0 in the canonical frame, so nabla* nabla = -sum M_k^2
    return -sum(m @ m for m in conn.M)


def lichnerowicz_residual(conn: SpincFrameConnection) -> float:
    d = dirac_matrix(conn)
    rhs = (
        rough_laplacian(conn)
        + 0.25 * conn.model.scalar * conn.rep.identity
        + 0.5j * conn.rep.two_form(conn.omega)
    )
    return float(np.abs(d @ d - rhs).max())


def omega12_from_lichnerowicz(conn: SpincFrameConnection, psi) -> float:
    """Solve D^2 = nabla*nabla + S/4 + (i/2) Omega. for Omega(e1, e2) on psi.

    Assumes xi _| Omega = 0, so Omega. = Omega_12 e1.e2.
    """
    psi = _components(psi)
    rep = conn.rep
    d = dirac_matrix(conn)
    n2 = np.vdot(psi, psi).real
    lhs = np.vdot(psi, (d @ d - rough_laplacian(conn)) @ psi).real / n2 - conn.model.scalar / 4
    coef = np.vdot(psi, 0.5j * rep.gammas[0] @ rep.gammas[1] @ psi).real / n2
    return float(lhs / coef)


def xi_contraction_from_ricci_identity(conn: SpincFrameConnection, psi) -> np.ndarray:
    """Recover the vector (xi _| Omega) from the Ricci identity at X = xi acting on psi.

    Solves (i/2) v. psi = 1/2 Ric(xi). psi - sum_j e_j.R(e_j, xi) psi for v in R^3.
    """
    psi = _components(psi)
    rep = conn.rep
    ric = conn.model.ricci
    target = 0.5 * rep.vector(ric[2]) @ psi - sum(
        rep.gammas[j] @ spin_curvature(conn, j, 2) @ psi for j in range(3)
    )
    cols = np.column_stack([0.5j * g @ psi for g in rep.gammas])
    a = np.vstack([cols.real, cols.imag])
    b = np.concatenate([target.real, target.imag])
    v, *_ = np.linalg.lstsq(a, b, rcond=None)
    return v
