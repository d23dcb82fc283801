"""Dirac and Laplace spectra on Berger spheres E(4, tau), 0 < |tau| < 1.

Functions on S^3 are handled through harmonic homogeneous polynomials on R^4
with exact rational coefficients. H_k is spanned by the unique harmonic
extensions of the "seed" monomials whose x-exponent is 0 or 1, so the coordinates
of a harmonic polynomial are simply its seed coefficients.

S^3 carries the left-invariant frame (X1, X2, xi) of unit round length with
[X1, X2] = 2 xi, [X2, xi] = 2 X1, [xi, X1] = 2 X2; the Berger orthonormal frame is
(X1, X2, xi / tau), which reproduces the brackets of E(4, tau). Spinors are
C^2-valued functions in this trivialization, so the Dirac operator preserves each
H_k (x) C^2 and its spectrum there is a finite eigenproblem.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import ExcludedRegimeError, InvariantError
from .homogeneous import ModelParams, build_frame_model
from .spinc import (
    build_spinc_connection,
    canonical_potential,
    deform_connection,
)

DEFAULT_KMAX_CEILING = 8
STRUCTURES = ("canonical", "induced")
WITNESS_TOL = 1e-8


def kmax_ceiling() -> int:
    return int(os.environ.get("SPINC_LAB_KMAX_CEILING", DEFAULT_KMAX_CEILING))


# Linear vector fields x -> A x on R^4, coordinates (x, y, z, w).
HOPF_FIELD = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
FRAME_X1 = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
FRAME_X2 = (FRAME_X1 @ HOPF_FIELD - HOPF_FIELD @ FRAME_X1) // 2


# --- exact polynomials: dict {exponent tuple: Fraction} ---------------------


def monomials(k: int, nvars: int = 4) -> list:
    return sorted((m for m in product(range(k + 1), repeat=nvars) if sum(m) == k), reverse=True)


def laplacian(poly: dict, variables=range(4)) -> dict:
    out: dict = {}
    for m, c in poly.items():
        for v in variables:
            if m[v] >= 2:
                n = list(m)
                n[v] -= 2
                n = tuple(n)
                out[n] = out.get(n, 0) + c * m[v] * (m[v] - 1)
    return {m: c for m, c in out.items() if c != 0}


def apply_field(a: np.ndarray, poly: dict) -> dict:
    """Derivation sum_i (A x)_i d/dx_i applied to poly."""
    out: dict = {}
    for m, c in poly.items():
        for i in range(4):
            if m[i] == 0:
                continue
            for l in range(4):
                if a[i, l] == 0:
                    continue
                n = list(m)
                n[i] -= 1
                n[l] += 1
                n = tuple(n)
                out[n] = out.get(n, 0) + c * int(a[i, l]) * m[i]
    return {m: c for m, c in out.items() if c != 0}


def _harmonic_extension(seed: tuple) -> dict:
    eps = seed[0]
    q = {(0,) + seed[1:]: Fraction(1)}
    poly: dict = {}
    j = 0
    while q:
        for m, c in q.items():
            poly[(eps + 2 * j,) + m[1:]] = c
        lap = laplacian(q, variables=(1, 2, 3))
        denom = (eps + 2 * j + 2) * (eps + 2 * j + 1)
        q = {m: -c / denom for m, c in lap.items()}
        j += 1
    return poly


def sphere_moment(m: tuple) -> Fraction:
    """Mean of x^m over S^3 with the normalized round measure."""
    if any(e % 2 for e in m):
        return Fraction(0)
    num = 1
    for e in m:
        num *= math.prod(range(e - 1, 0, -2))
    den = math.prod(4 + 2 * j for j in range(sum(m) // 2))
    return Fraction(num, den)


@dataclass(frozen=True)
class HarmonicSpace:
    k: int
    monomials: tuple
    seeds: tuple
    basis: tuple  # exact polynomials, basis[i] has seed coefficient delta_ij
    gram: np.ndarray
    chol: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coefficient_matrix(self) -> np.ndarray:
        idx = {m: i for i, m in enumerate(self.monomials)}
        out = np.zeros((self.dim, len(self.monomials)))
        for i, h in enumerate(self.basis):
            for m, c in h.items():
                out[i, idx[m]] = float(c)
        return out

    def coordinates(self, poly: dict) -> list:
        return [poly.get(s, Fraction(0)) for s in self.seeds]

    def exact_operator(self, a: np.ndarray) -> list:
        """Exact matrix (nested lists of Fractions) of the field A on this basis."""
        cols = [self.coordinates(apply_field(a, h)) for h in self.basis]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def orthonormal_operator(self, a: np.ndarray) -> np.ndarray:
        """Matrix of the field A in an L^2(S^3)-orthonormal basis of H_k."""
        x = np.array(self.exact_operator(a), dtype=float).reshape(self.dim, self.dim)
        lt = self.chol.T
        return lt @ x @ np.linalg.inv(lt)


@lru_cache(maxsize=None)
def _harmonic_space(k: int) -> HarmonicSpace:
    mons = tuple(monomials(k))
    seeds = tuple(m for m in mons if m[0] <= 1)
    basis = tuple(_harmonic_extension(s) for s in seeds)
    moments = np.array([[float(sphere_moment(tuple(a + b for a, b in zip(p, q)))) for q in mons] for p in mons])
    space = HarmonicSpace(k, mons, seeds, basis, np.zeros((0, 0)), np.zeros((0, 0)))
    coeff = space.coefficient_matrix()
    gram = coeff @ moments @ coeff.T
    chol = np.linalg.cholesky(gram)
    return HarmonicSpace(k, mons, seeds, basis, gram, chol)


def harmonic_basis(k: int, k_max: int | None = None) -> HarmonicSpace:
    limit = kmax_ceiling() if k_max is None else k_max
    if not 0 <= k <= limit:
        raise ValueError(f"degree {k} outside 0..{limit} (raise SPINC_LAB_KMAX_CEILING to go higher)")
    return _harmonic_space(k)


def hopf_operator(space: HarmonicSpace, field: np.ndarray = HOPF_FIELD) -> np.ndarray:
    return space.orthonormal_operator(field)


def tanno_operator(space: HarmonicSpace, tau: float, field: np.ndarray = HOPF_FIELD) -> np.ndarray:
    """Berger Laplacian on H_k: k(k+2) - (1 - tau^-2)(-xi^2)."""
    if tau == 0:
        raise ExcludedRegimeError("tau must be nonzero")
    xi = hopf_operator(space, field)
    return space.k * (space.k + 2) * np.eye(space.dim) + (1 - tau**-2) * (xi @ xi)


def vertical_weights(k: int) -> list:
    """[(p, s, multiplicity)] for the eigenvalues s = (k-2p)^2 of -xi^2 on H_k."""
    xi = hopf_operator(harmonic_basis(k))
    s = np.linalg.eigvalsh(-(xi @ xi))
    out = []
    for p in range(k // 2 + 1):
        target = (k - 2 * p) ** 2
        mult = int(np.sum(np.abs(s - target) < 1e-8))
        out.append((p, target, mult))
    if sum(m for _, _, m in out) != (k + 1) ** 2:
        raise InvariantError(f"-xi^2 spectrum on H_{k} is not {{(k-2p)^2}}: {s}")
    return out


def tanno_eigenvalues(k: int, tau: float) -> list:
    """[(value, multiplicity, p)] for the Berger Laplacian on H_k."""
    if tau == 0:
        raise ExcludedRegimeError("tau must be nonzero")
    lam = k * (2 + k)
    return [(lam - (1 - tau**-2) * s, mult, p) for p, s, mult in vertical_weights(k)]


# --- Dirac spectra -----------------------------------------------------------


@dataclass(frozen=True)
class SpectrumEntry:
    k: int
    p: int
    branch: str  # "+" or "-"
    value: float
    multiplicity: int
    structure: str
    certainty: str  # "eigen_of_squared" or "realized"
    squared: float  # eigenvalue of (D_canonical + tau/2)^2 the value comes from


def _check_tau(tau):
    if not (0 < abs(tau) < 1):
        raise ExcludedRegimeError(f"Berger spectra need 0 < |tau| < 1 with kappa = 4, got tau={tau}")


def structure_connection(tau: float, structure: str):
    """Spin^c connection on E(4, tau) for the named structure."""
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}; choose from {STRUCTURES}")
    model = build_frame_model(ModelParams(4.0, tau))
    conn = build_spinc_connection(model, canonical_potential(model))
    if structure == "induced":
        conn = deform_connection(conn, induced_deformation(tau))
    return conn


def induced_deformation(tau: float, kappa: float = 4.0) -> float:
    """eta-coefficient turning the canonical connection into the one induced from M^4(kappa/4 - tau^2)."""
    return (kappa - 4 * tau**2) / (4 * tau)


def induced_shift(tau: float) -> float:
    """Dirac shift -(tau^2 - 1)/(2 tau) between induced and canonical on xi.phi = -i phi."""
    return -(tau**2 - 1) / (2 * tau)


def invariant_dirac_matrix(k: int, tau: float, structure: str) -> np.ndarray:
    """Dirac operator on H_k (x) C^2 (function index major)."""
    _check_tau(tau)
    space = harmonic_basis(k)
    conn = structure_connection(tau, structure)
    frame = [space.orthonormal_operator(FRAME_X1), space.orthonormal_operator(FRAME_X2),
             space.orthonormal_operator(HOPF_FIELD) / tau]
    g = conn.rep.gammas
    const = sum(gj @ mj for gj, mj in zip(g, conn.M))
    d = sum(np.kron(e, gj) for e, gj in zip(frame, g)) + np.kron(np.eye(space.dim), const)
    return d


@lru_cache(maxsize=256)
def invariant_dirac_spectrum(k: int, tau: float, structure: str) -> np.ndarray:
    d = invariant_dirac_matrix(k, tau, structure)
    if np.abs(d - d.conj().T).max() > 1e-10:
        raise InvariantError("Dirac operator on H_k (x) C^2 is not Hermitian")
    return np.linalg.eigvalsh(d)


def _witnessed(value, spectrum) -> bool:
    return bool(np.any(np.abs(spectrum - value) <= WITNESS_TOL * max(1.0, abs(value))))


def paper_literal_squared(k: int, p: int, tau: float) -> float:
    """2 + k(2+k) - (1 - tau^-2)(k - 2p), the displayed form without the square."""
    return 2 + k * (2 + k) - (1 - tau**-2) * (k - 2 * p)


def berger_dirac_spectrum(k_max: int, tau: float, structure: str = "canonical",
                          witness: bool = True) -> list:
    """Candidate Dirac eigenvalues -tau/2 +- sqrt(lambda + tau^2) (+ induced shift).

    lambda runs over the Berger Laplace eigenvalues of degree <= k_max. With
    `witness`, an entry is marked realized when the same value occurs in the full
    invariant Dirac spectrum on H_k (x) C^2.
    """
    _check_tau(tau)
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}; choose from {STRUCTURES}")
    if k_max > kmax_ceiling():
        raise ValueError(f"k_max={k_max} above ceiling {kmax_ceiling()}")
    shift = induced_shift(tau) if structure == "induced" else 0.0
    entries = []
    for k in range(k_max + 1):
        true_spec = invariant_dirac_spectrum(k, tau, structure) if witness else None
        for lam, mult, p in tanno_eigenvalues(k, tau):
            q = lam + tau**2
            if q <= 0:
                raise InvariantError(f"nonpositive squared eigenvalue {q} for 0 < tau^2 < 1")
            for branch, sign in (("+", 1.0), ("-", -1.0)):
                value = -tau / 2 + sign * math.sqrt(q) + shift
                realized = witness and _witnessed(value, true_spec)
                entries.append(SpectrumEntry(k, p, branch, value, mult, structure,
                                             "realized" if realized else "eigen_of_squared", q))
    entries.sort(key=lambda e: (e.k, e.value))
    return entries


def paper_literal_value(entry: SpectrumEntry, tau: float) -> float:
    sign = 1.0 if entry.branch == "+" else -1.0
    shift = induced_shift(tau) if entry.structure == "induced" else 0.0
    return -tau / 2 + sign * math.sqrt(paper_literal_squared(entry.k, entry.p, tau)) + shift


def first_positive_eigenvalue(tau: float, structure: str = "induced", k_max: int = 6,
                              include_unconfirmed: bool = False) -> float:
    """Smallest positive spectrum entry up to degree k_max.

    By default only realized entries count; `include_unconfirmed` also admits
    eigenvalues of the shifted square that are not witnessed in the Dirac spectrum.
    """
    entries = berger_dirac_spectrum(k_max, tau, structure, witness=not include_unconfirmed)
    vals = [e.value for e in entries
            if e.value > 1e-12 and (include_unconfirmed or e.certainty == "realized")]
    if not vals:
        raise ValueError(f"no positive entry up to k_max={k_max}; try a larger k_max")
    return min(vals)
