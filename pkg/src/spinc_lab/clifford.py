"""Complex Clifford representations in dimensions 2, 3 and 4.

Conventions: e_i . e_j + e_j . e_i = -2 delta_ij, generators are skew-Hermitian
for the standard Hermitian product <u, v> = sum u_i conj(v_i), and the complex
volume element i^[(n+1)/2] e_1 ... e_n acts as +Id when n = 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import ExcludedRegimeError

SUPPORTED_DIMENSIONS = (2, 3, 4)
METRIC_SIGN = -1  # v . v = METRIC_SIGN * |v|^2

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def hermitian(u, v) -> complex:
    """<u, v>, complex linear in the first slot."""
    return complex(np.vdot(v, u))


@dataclass(frozen=True)
class CliffordRep:
    n: int
    gammas: tuple
    metric_sign: int = METRIC_SIGN

    @property
    def dim(self) -> int:
        return self.gammas[0].shape[0]

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def volume_element(self) -> np.ndarray:
        out = (1j) ** ((self.n + 1) // 2) * self.identity
        for g in self.gammas:
            out = out @ g
        return out

    def vector(self, v) -> np.ndarray:
        """Matrix of Clifford multiplication by sum v_i e_i."""
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {self.n} expected, got shape {v.shape}")
        return np.tensordot(v, np.array(self.gammas), axes=1)

    def two_form(self, omega) -> np.ndarray:
        """Matrix of sum_{i<j} omega_ij e_i . e_j."""
        omega = _as_two_form(omega, self.n)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                out += omega[i, j] * self.gammas[i] @ self.gammas[j]
        return out

    def half_spinor_basis(self, sign: int = 1) -> np.ndarray:
        """Orthonormal columns spanning the (sign)-eigenspace of the volume element."""
        if self.n % 2:
            raise ValueError("half spinors exist only in even dimension")
        w, v = np.linalg.eigh(self.volume_element())
        cols = v[:, np.isclose(w, sign)]
        return cols

    def to_json(self) -> list:
        """Row-major nested lists of [re, im] pairs, one matrix per generator."""
        return [[[[z.real, z.imag] for z in row] for row in g] for g in self.gammas]


@dataclass(frozen=True)
class Spinor:
    components: np.ndarray
    rep: CliffordRep = field(repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=complex)
        if comps.shape != (self.rep.dim,):
            raise ValueError(f"spinor needs {self.rep.dim} components, got {comps.shape}")
        if not np.all(np.isfinite(comps)):
            raise ValueError("spinor components must be finite")
        object.__setattr__(self, "components", comps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def inner(self, other: "Spinor") -> complex:
        return hermitian(self.components, other.components)

    def __add__(self, other):
        return Spinor(self.components + other.components, self.rep)

    def __mul__(self, scalar):
        return Spinor(scalar * self.components, self.rep)

    __rmul__ = __mul__


@dataclass(frozen=True)
class TwoForm:
    omega: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=float)
        if om.ndim != 2 or om.shape[0] != om.shape[1]:
            raise ValueError("two-form needs a square coefficient array")
        if not np.allclose(om, -om.T, atol=1e-14, rtol=0):
            raise ValueError("two-form coefficients must be antisymmetric")
        object.__setattr__(self, "omega", om)

    @classmethod
    def from_components(cls, n: int, entries: dict) -> "TwoForm":
        """Build from {(i, j): value} with 0-based indices i < j."""
        om = np.zeros((n, n))
        for (i, j), val in entries.items():
            om[i, j] = val
            om[j, i] = -val
        return cls(om)

    def __add__(self, other):
        return TwoForm(self.omega + other.omega)

    def interior(self, v) -> np.ndarray:
        """Coefficients of v _| omega, i.e. Y -> omega(v, Y)."""
        return np.asarray(v, dtype=float) @ self.omega


def _as_two_form(omega, n):
    om = omega.omega if isinstance(omega, TwoForm) else np.asarray(omega, dtype=float)
    if om.shape != (n, n):
        raise ValueError(f"two-form on R^{n} expected, got shape {om.shape}")
    return om


@lru_cache(maxsize=None)
def _gammas(n: int) -> tuple:
    if n == 2:
        gs = (-1j * _S1, -1j * _S2)
    elif n == 3:
        gs = (-1j * _S1, -1j * _S2, -1j * _S3)
    else:
        gs = tuple(np.kron(_S1, -1j * s) for s in (_S1, _S2, _S3)) + (np.kron(-1j * _S3, _I2),)
    for g in gs:
        g.setflags(write=False)
    return gs


def build_clifford_rep(n: int) -> CliffordRep:
    if n not in SUPPORTED_DIMENSIONS:
        raise ValueError(f"unsupported dimension {n}; supported: {SUPPORTED_DIMENSIONS}")
    return CliffordRep(n=n, gammas=_gammas(n))


def clifford_mul(v, psi: Spinor) -> Spinor:
    return Spinor(psi.rep.vector(v) @ psi.components, psi.rep)


def two_form_action(omega, psi: Spinor) -> Spinor:
    return Spinor(psi.rep.two_form(omega) @ psi.components, psi.rep)


def clifford_residuals(rep: CliffordRep) -> dict:
    """Max residuals of the Clifford relation and of skew-adjointness."""
    eye = rep.identity
    rel = 0.0
    skew = 0.0
    for i, gi in enumerate(rep.gammas):
        skew = max(skew, np.abs(gi + gi.conj().T).max())
        for j, gj in enumerate(rep.gammas):
            rel = max(rel, np.abs(gi @ gj + gj @ gi + 2.0 * (i == j) * eye).max())
    return {"clifford": float(rel), "skew_adjoint": float(skew)}


def kahler_form(m: int) -> TwoForm:
    """e_1^e_2 + ... + e_{2m-1}^e_{2m}."""
    return TwoForm.from_components(2 * m, {(2 * r, 2 * r + 1): 1.0 for r in range(m)})


def kahler_nonnegativity_eigs(S: float, m: int = 2) -> np.ndarray:
    """Eigenvalues of S + 2i (S/2m) kahler. on the 2^m-dimensional spinor space.

    The result is the multiset {S * 2r/m : r = 0..m} with multiplicities C(m, r),
    hence nonnegative.
    """
    if m not in (1, 2):
        raise ValueError("complex dimension m must be 1 or 2")
    if not S > 0:
        raise ExcludedRegimeError("scalar curvature S must be positive")
    rep = build_clifford_rep(2 * m)
    op = S * rep.identity + 2j * rep.two_form(kahler_form(m).omega * (S / (2 * m)))
    return np.sort(np.linalg.eigvalsh(op))


def kahler_splitting(m: int = 2) -> list:
    """[(r, eigenvalue i(m-2r), orthonormal eigenbasis)] for the Kahler form action."""
    rep = build_clifford_rep(2 * m)
    # kahler. is skew-Hermitian; -i kahler. is Hermitian with eigenvalues m - 2r
    w, v = np.linalg.eigh(-1j * rep.two_form(kahler_form(m).omega))
    out = []
    for r in range(m + 1):
        cols = v[:, np.isclose(w, m - 2 * r)]
        if cols.shape[1] != comb(m, r):
            raise RuntimeError("Kahler splitting has wrong rank")
        out.append((r, 1j * (m - 2 * r), cols))
    return out


def charge_conjugation(psi: Spinor) -> Spinor:
    """Antilinear map j with j(X . psi) = X . j(psi) for real X (n = 2 or 3).

    j(psi) = C conj(psi) with the real matrix C = [[0, 1], [-1, 0]]; j^2 = -1.
    """
    if psi.rep.n not in (2, 3):
        raise ValueError("charge conjugation implemented for n = 2, 3")
    c = np.array([[0, 1], [-1, 0]], dtype=complex)
    return Spinor(c @ psi.components.conj(), psi.rep)


def grading_conjugate(psi: Spinor) -> Spinor:
    """psi^+ - psi^- for even n, i.e. the volume element applied to psi."""
    if psi.rep.n % 2:
        raise ValueError("grading needs even dimension")
    return Spinor(psi.rep.volume_element() @ psi.components, psi.rep)


@dataclass(frozen=True)
class InducedClifford:
    """Clifford module on a hypersurface induced by X . nu . restricted to a subspace."""

    ambient: CliffordRep
    normal: np.ndarray
    subspace: np.ndarray  # orthonormal columns in the ambient spinor space
    tangent_basis: np.ndarray  # rows: orthonormal basis of normal^perp

    def matrix(self, x_ambient) -> np.ndarray:
        """Induced multiplication by the ambient tangent vector x, on subspace coordinates."""
        x = np.asarray(x_ambient, dtype=float)
        if abs(x @ self.normal) > 1e-12:
            raise ValueError("vector is not tangent to the hypersurface")
        full = self.ambient.vector(x) @ self.ambient.vector(self.normal)
        return self.subspace.conj().T @ full @ self.subspace

    def generators(self) -> list:
        return [self.matrix(t) for t in self.tangent_basis]

    def mul(self, x_ambient, phi) -> np.ndarray:
        return self.matrix(x_ambient) @ np.asarray(phi, dtype=complex)

    def residual(self) -> float:
        """Max deviation of the induced generators from the Clifford relations."""
        gens = self.generators()
        eye = np.eye(self.subspace.shape[1])
        res = 0.0
        for i, a in enumerate(gens):
            for j, b in enumerate(gens):
                res = max(res, np.abs(a @ b + b @ a + 2.0 * (i == j) * eye).max())
        return float(res)


def restrict_clifford(rep: CliffordRep, normal) -> InducedClifford:
    """Induced Clifford module X . phi := (X . nu . psi)|_M.

    `normal` is a frame index or a unit vector. For an even ambient dimension the
    module lives on the positive half spinors, otherwise on the full space.
    """
    if rep.n not in (3, 4):
        raise ValueError("ambient dimension must be 3 or 4")
    if isinstance(normal, (int, np.integer)):
        nu = np.zeros(rep.n)
        nu[normal] = 1.0
    else:
        nu = np.asarray(normal, dtype=float)
        if nu.shape != (rep.n,) or abs(np.linalg.norm(nu) - 1.0) > 1e-12:
            raise ValueError("normal must be a unit vector")
    # orthonormal complement of nu
    q, _ = np.linalg.qr(np.column_stack([nu, np.eye(rep.n)]))
    tangent = q[:, 1 : rep.n].T
    sub = rep.half_spinor_basis(+1) if rep.n % 2 == 0 else np.eye(rep.dim, dtype=complex)
    return InducedClifford(rep, nu, sub, tangent)
