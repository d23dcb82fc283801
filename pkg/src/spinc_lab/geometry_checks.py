"""Hypersurface Dirac eigenvalue bounds, immersion data, and the umbilic obstruction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .berger import first_positive_eigenvalue
from .clifford import build_clifford_rep, hermitian
from .errors import ExcludedRegimeError
from .homogeneous import ModelParams

EQUALITY_TOL = 1e-10


class BoundResult(NamedTuple):
    satisfied: bool
    margin: float
    equality: bool


@dataclass(frozen=True)
class HypersurfaceData:
    n: int
    H: float
    lambda1: float
    alpha: float = 0.0
    mu: int = 1
    vol_normalized: bool = True

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("hypersurface dimension must be at least 2")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")


def lower_bound_check(data: HypersurfaceData) -> BoundResult:
    """lambda_1 >= (n/2) H for H >= 0."""
    if data.H < 0:
        raise ExcludedRegimeError("the lower bound assumes nonnegative mean curvature H")
    margin = data.lambda1 - data.n / 2 * data.H
    return BoundResult(margin >= -EQUALITY_TOL, margin, abs(margin) < EQUALITY_TOL)


def upper_bound_check(data: HypersurfaceData) -> BoundResult:
    """lambda_1^2 <= n^2 alpha^2 + (n^2/4) H^2, constant H only."""
    if not data.vol_normalized:
        raise ExcludedRegimeError("upper bound check needs constant H (mean of H^2 equal to H^2)")
    if data.mu < 1:
        raise ExcludedRegimeError("no Killing or parallel spinor (mu = 0): the bound is empty")
    n = data.n
    margin = n**2 * data.alpha**2 + n**2 / 4 * data.H**2 - data.lambda1**2
    return BoundResult(margin >= -EQUALITY_TOL, margin, abs(margin) < EQUALITY_TOL)


def second_fundamental_form(params: ModelParams, paper_literal: bool = False) -> np.ndarray:
    """II = -tau Id - coef eta (x) xi in the frame (e1, e2, xi); works with Fractions."""
    k, t = params.kappa, params.tau
    coef = (4 * t**2 - k) / t if paper_literal else (4 * t**2 - k) / (4 * t)
    zero = 0 * t
    return np.array([[-t, zero, zero], [zero, -t, zero], [zero, zero, -t - coef]], dtype=object)


def immersion_mean_curvature(params: ModelParams):
    k, t = params.kappa, params.tau
    return (k - 16 * t**2) / (12 * t)


def berger_immersion_data(params: ModelParams, paper_literal: bool = False,
                          require_positive: bool = False) -> tuple:
    """(H, II) for E*(kappa, tau) in M^4(kappa/4 - tau^2)."""
    if require_positive and not (params.tau > 0 and params.kappa > 16 * params.tau**2):
        raise ExcludedRegimeError("positive H needs kappa > 16 tau^2 and tau > 0")
    return immersion_mean_curvature(params), second_fundamental_form(params, paper_literal)


def trace_mismatch(params: ModelParams, paper_literal: bool = False):
    """trace(II) - 3H; zero for the corrected coefficient."""
    H, ii = berger_immersion_data(params, paper_literal)
    return sum(ii[i, i] for i in range(3)) - 3 * H


def sasaki_immersion_params(S: float) -> tuple:
    """(c, Omega'(e1, e2)) for a non-Einstein Sasaki 3-manifold of scalar curvature S."""
    if S == 6:
        raise ExcludedRegimeError("S = 6 is the Einstein case, excluded (the Sasaki manifold must be non-Einstein)")
    c = (S - 6) / 8
    return c, (6 - S) / 2 - 2 * c


def berger_equality_data(tau: float, kappa: float = 4.0, k_max: int = 6) -> HypersurfaceData:
    """Berger sphere E(kappa, tau) in CP^2 with the induced structure (alpha = 0, mu = 1).

    kappa != 4 is reduced to kappa = 4 by the homothety g -> (4/kappa) g, which maps
    E(kappa, tau) to E(4, 2 tau / sqrt(kappa)) and scales eigenvalues and H by 2/sqrt(kappa).
    """
    params = ModelParams(kappa, tau)
    if not (tau > 0 and kappa > 16 * tau**2):
        raise ExcludedRegimeError("the Berger equality case needs kappa > 16 tau^2 and tau > 0")
    scale = math.sqrt(kappa) / 2
    lam = scale * first_positive_eigenvalue(tau / scale, "induced", k_max)
    return HypersurfaceData(n=3, H=immersion_mean_curvature(params), lambda1=lam, alpha=0.0, mu=1)


# --- totally umbilic surfaces ------------------------------------------------


def _surface_rep(flipped: bool):
    rep = build_clifford_rep(2)
    g1, g2 = rep.gammas
    return (g2, g1) if flipped else (g1, g2)


def spinor_invariants(phi, flipped: bool = False) -> tuple:
    """(f, T) read off a surface spinor: f = <phi, phibar>/|phi|^2, T from <i t_j . phi, phi>."""
    t1, t2 = _surface_rep(flipped)
    phi = np.asarray(phi, dtype=complex)
    n2 = np.vdot(phi, phi).real
    if n2 == 0:
        raise ValueError("spinor must be nonzero")
    phibar = 1j * t1 @ t2 @ phi
    f = hermitian(phi, phibar).real / n2
    T = np.array([hermitian(1j * t2 @ phi, phi).real, -hermitian(1j * t1 @ phi, phi).real]) / n2
    return f, T


def spinor_for_surface(f: float, T, flipped: bool = False) -> np.ndarray:
    """Unit spinor with the prescribed (f, T), f^2 + |T|^2 = 1."""
    t1, t2 = _surface_rep(flipped)
    T = np.asarray(T, dtype=float)
    # f, T1, T2 are expectation values of the Hermitian matrices below
    b = f * (1j * t1 @ t2) + T[0] * (1j * t2) - T[1] * (1j * t1)
    w, v = np.linalg.eigh(b)
    return v[:, np.argmax(w)]


@dataclass(frozen=True)
class SurfaceData:
    E: np.ndarray
    f: float
    T: np.ndarray
    params: ModelParams
    phi: np.ndarray | None = None
    H: float = field(init=False)
    omega12: float = field(init=False)

    def __post_init__(self):
        E = np.asarray(self.E, dtype=float)
        T = np.asarray(self.T, dtype=float)
        if E.shape != (2, 2) or not np.allclose(E, E.T):
            raise ValueError("shape operator must be a symmetric 2x2 matrix")
        if abs(self.f**2 + T @ T - 1.0) > 1e-12:
            raise ValueError("xi = T + f nu must be a unit vector: f^2 + |T|^2 = 1")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "H", float(np.trace(E)) / 2)
        object.__setattr__(self, "omega12", -(self.params.kappa - 4 * self.params.tau**2) * self.f)


@dataclass(frozen=True)
class UmbilicResult:
    dH: np.ndarray
    closed_form: np.ndarray
    residual: float
    contradiction: bool


def _rotate(v):
    """J with J t1 = t2."""
    return np.array([-v[1], v[0]])


def umbilic_obstruction(surface: SurfaceData, flipped: bool = False, ricci: float = 0.0) -> UmbilicResult:
    """Solve the surface Ricci identity on phi for the two components of dH.

    `flipped` uses the frame (t2, t1); components of dH are still returned in (t1, t2).
    `ricci` is the (irrelevant) Gauss curvature entering Ric(X) = K X.
    """
    E = surface.E
    if abs(E[0, 1]) > 1e-12 or abs(E[0, 0] - E[1, 1]) > 1e-12:
        raise ValueError("umbilic obstruction needs E = H Id")
    p = surface.params
    t1, t2 = _surface_rep(flipped)
    phi = surface.phi if surface.phi is not None else spinor_for_surface(surface.f, surface.T)
    phi = np.asarray(phi, dtype=complex)
    if np.linalg.norm(phi) == 0:
        raise ValueError("spinor must be nonzero")
    f0, T0 = spinor_invariants(phi)
    if abs(f0 - surface.f) > 1e-10 or np.abs(T0 - surface.T).max() > 1e-10:
        raise ValueError("spinor invariants disagree with the surface data (f, T)")
    f, T = spinor_invariants(phi, flipped)
    gens = (t1, t2)
    H, tau = surface.H, p.tau
    omega12 = -(p.kappa - 4 * tau**2) * f
    phibar = 1j * t1 @ t2 @ phi

    def curvature_12(dh):  # R(t1, t2) phi
        jdh = _rotate(dh)
        return -0.5 * (jdh[0] * t1 + jdh[1] * t2) @ phi + 0.5j * (H**2 + tau**2) * phibar

    def residuals(dh):
        r12 = curvature_12(dh)
        out = []
        for x in range(2):
            # sum_j t_j . R(t_j, t_x) phi
            lhs = -gens[1] @ r12 if x == 0 else gens[0] @ r12
            interior = np.array([0.0, omega12]) if x == 0 else np.array([-omega12, 0.0])
            rhs = 0.5 * ricci * gens[x] @ phi - 0.5j * (interior[0] * t1 + interior[1] * t2) @ phi
            out.append(hermitian(lhs - rhs, phi).real)
        return np.array(out)

    b = residuals(np.zeros(2))
    a = np.column_stack([residuals(e) - b for e in np.eye(2)])
    dh = np.linalg.solve(a, -b)
    closed = -(p.kappa - 4 * tau**2) * f * T
    if flipped:
        dh, closed = dh[::-1], closed[::-1]
    return UmbilicResult(dh, closed, float(np.abs(dh - closed).max()),
                         bool(np.linalg.norm(dh) > 1e-12))
