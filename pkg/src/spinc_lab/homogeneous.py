"""Invariant-frame geometry of the homogeneous 3-manifolds E(kappa, tau).

Indices are 0-based: e_1, e_2, e_3 = xi are frame directions 0, 1, 2. Arrays
follow the layout gamma[i, j, k] = <nabla_{e_i} e_j, e_k> = Gamma^k_ij and
brackets[i, j, k] = c^k_ij with [e_i, e_j] = c^k_ij e_k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import TwoForm
from .errors import ExcludedRegimeError, InvariantError

_EPS = 1e-12


@dataclass(frozen=True)
class ModelParams:
    kappa: float
    tau: float

    def __post_init__(self):
        if self.tau == 0:
            raise ExcludedRegimeError(
                "tau = 0 gives the product M^2(kappa) x R; only E*(kappa, tau) with tau != 0 is supported"
            )
        if abs(self.kappa - 4 * self.tau**2) < _EPS * max(1.0, abs(self.kappa)):
            raise ExcludedRegimeError(
                f"kappa - 4 tau^2 must be nonzero (got kappa={self.kappa}, tau={self.tau}); "
                "that case is a space form, not E(kappa, tau)"
            )

    @property
    def c(self) -> float:
        """Holomorphic curvature parameter kappa/4 - tau^2 of the target complex space form."""
        return self.kappa / 4 - self.tau**2


@dataclass(frozen=True)
class FrameModel:
    params: ModelParams
    gamma: np.ndarray
    brackets: np.ndarray
    riemann: np.ndarray  # riemann[i, j, k, l] = <R(e_i, e_j) e_k, e_l>
    ricci: np.ndarray
    scalar: float

    def nabla(self, i: int, v) -> np.ndarray:
        """nabla_{e_i} of the constant-coefficient field sum v_j e_j."""
        return np.asarray(v, dtype=float) @ self.gamma[i]

    def to_json(self) -> dict:
        return {
            "kappa": self.params.kappa,
            "tau": self.params.tau,
            "christoffel": self.gamma.tolist(),
            "brackets": self.brackets.tolist(),
            "ricci": self.ricci.tolist(),
            "scalar": self.scalar,
        }


def christoffel_symbols(kappa: float, tau: float) -> np.ndarray:
    g = np.zeros((3, 3, 3))
    g[0, 1, 2] = g[1, 2, 0] = tau
    g[1, 0, 2] = g[0, 2, 1] = -tau
    g[2, 1, 0] = tau - kappa / (2 * tau)
    g[2, 0, 1] = -(tau - kappa / (2 * tau))
    return g


def riemann_from_connection(gamma: np.ndarray, brackets: np.ndarray) -> np.ndarray:
    """R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k."""
    # nabla_i nabla_j e_k = sum_m Gamma^m_jk nabla_i e_m
    nn = np.einsum("jkm,iml->ijkl", gamma, gamma)
    return nn - nn.transpose(1, 0, 2, 3) - np.einsum("ijm,mkl->ijkl", brackets, gamma)


def build_frame_model(params: ModelParams) -> FrameModel:
    gamma = christoffel_symbols(params.kappa, params.tau)
    brackets = gamma - gamma.transpose(1, 0, 2)
    riemann = riemann_from_connection(gamma, brackets)
    ricci = np.einsum("iyzi->yz", riemann)
    return FrameModel(params, gamma, brackets, riemann, ricci, float(np.trace(ricci)))


def cross(u, v) -> np.ndarray:
    """u ^ v as a vector, with e_1 ^ e_2 = e_3 cyclically."""
    return np.cross(u, v)


def killing_field_check(model: FrameModel) -> float:
    xi = np.array([0.0, 0.0, 1.0])
    res = 0.0
    for i in range(3):
        e = np.eye(3)[i]
        res = max(res, np.linalg.norm(model.nabla(i, xi) - model.params.tau * cross(e, xi)))
    return float(res)


def xi_derivative(model: FrameModel) -> np.ndarray:
    """Matrix of X -> nabla_X xi (columns are images of e_i)."""
    return model.gamma[:, 2, :].T


def sasaki_tensor_check(model: FrameModel) -> float:
    """Max-norm residual of nabla xi o nabla xi + Id - eta (x) xi."""
    x = xi_derivative(model)
    eta_xi = np.zeros((3, 3))
    eta_xi[2, 2] = 1.0
    return float(np.abs(x @ x + np.eye(3) - eta_xi).max())


def d_invariant_oneform(c: float, model: FrameModel) -> TwoForm:
    """d(c eta) for the left-invariant 1-form c eta: d alpha(e_i, e_j) = -c c^3_ij."""
    return TwoForm(-c * model.brackets[:, :, 2])


def ricci_spectrum(model: FrameModel) -> tuple:
    """(Ric on horizontal vectors, Ric(xi, xi))."""
    ric = model.ricci
    off = ric - np.diag(np.diag(ric))
    if np.abs(off).max() > _EPS * max(1.0, np.abs(ric).max()) or abs(ric[0, 0] - ric[1, 1]) > 1e-10:
        raise InvariantError(f"Ricci tensor is not diag(a, a, b) in the canonical frame: {ric}")
    return float(ric[0, 0]), float(ric[2, 2])


def rotate_horizontal(gamma: np.ndarray, theta: float) -> np.ndarray:
    """Christoffel array in the frame (cos e1 + sin e2, -sin e1 + cos e2, xi)."""
    c, s = np.cos(theta), np.sin(theta)
    r = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])  # rows: new frame in old
    return np.einsum("ai,bj,ck,ijk->abc", r, r, r, gamma)
