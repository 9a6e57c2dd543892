"""Points of the Siegel upper half space and the action of Sp(2g, Z) on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NotPositiveDefinite, NotSymmetric, NotSymplectic, SingularDenominator

SYMMETRY_RTOL = 1e-10
MAX_DENOMINATOR_COND = 1e12


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """Symmetric complex g x g matrix with positive definite imaginary part.

    Build instances through :func:`validate_siegel`; the constructor does not
    check anything.
    """

    g: int
    tau: np.ndarray

    @property
    def real(self) -> np.ndarray:
        return self.tau.real

    @property
    def imag(self) -> np.ndarray:
        return self.tau.imag

    def __repr__(self) -> str:
        return f"SiegelPoint(g={self.g}, tau={self.tau.tolist()!r})"


def validate_siegel(g: int, entries) -> SiegelPoint:
    tau = np.array(entries, dtype=complex)
    if tau.ndim == 0 and g == 1:
        tau = tau.reshape(1, 1)
    if tau.shape != (g, g):
        raise InputError(f"expected a {g}x{g} matrix, got shape {tau.shape}")
    if not np.all(np.isfinite(tau)):
        raise InputError("period matrix has non-finite entries")
    scale = 1.0 + np.max(np.abs(tau))
    asym = np.max(np.abs(tau - tau.T))
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds {SYMMETRY_RTOL:.0e} * {scale:.3g}")
    tau = 0.5 * (tau + tau.T)
    _cholesky_or_raise(tau.imag)
    tau.setflags(write=False)
    return SiegelPoint(g, tau)


def _cholesky_or_raise(y: np.ndarray) -> np.ndarray:
    # hand-rolled so that the failing pivot can be reported
    g = y.shape[0]
    L = np.zeros_like(y)
    for j in range(g):
        pivot = y[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > 0:
            raise NotPositiveDefinite(f"Cholesky pivot {j} of Im(tau) is {pivot:.3e}")
        L[j, j] = np.sqrt(pivot)
        for i in range(j + 1, g):
            L[i, j] = (y[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Integral symplectic matrix ``[[A, B], [C, D]]``, blocks g x g."""

    g: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @classmethod
    def from_blocks(cls, A, B, C, D) -> SymplecticMatrix:
        blocks = [np.array(M, dtype=np.int64) for M in (A, B, C, D)]
        g = blocks[0].shape[0]
        for M in blocks:
            if M.shape != (g, g):
                raise InputError("symplectic blocks must all be g x g")
            M.setflags(write=False)
        gamma = cls(g, *blocks)
        if not gamma.is_symplectic():
            raise NotSymplectic("blocks violate the symplectic relations")
        return gamma

    @classmethod
    def from_matrix(cls, M) -> SymplecticMatrix:
        M = np.array(M, dtype=np.int64)
        g = M.shape[0] // 2
        return cls.from_blocks(M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:])

    @classmethod
    def identity(cls, g: int) -> SymplecticMatrix:
        eye, zero = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
        return cls.from_blocks(eye, zero, zero, eye)

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def is_symplectic(self) -> bool:
        A, B, C, D = self.A, self.B, self.C, self.D
        return (
            np.array_equal(A.T @ C, C.T @ A)
            and np.array_equal(B.T @ D, D.T @ B)
            and np.array_equal(A.T @ D - C.T @ B, np.eye(self.g, dtype=np.int64))
        )

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        return SymplecticMatrix.from_matrix(self.matrix @ other.matrix)


def symplectic_act(gamma: SymplecticMatrix, tau: SiegelPoint) -> SiegelPoint:
    """Return ``(A tau + B)(C tau + D)^{-1}``."""
    if gamma.g != tau.g:
        raise InputError(f"genus mismatch: gamma has g={gamma.g}, tau has g={tau.g}")
    num = gamma.A @ tau.tau + gamma.B
    den = gamma.C @ tau.tau + gamma.D
    # smallest singular value against the size of the terms that produced it;
    # bounds the condition number and also catches cancellation in C tau + D
    scale = np.linalg.norm(gamma.C, 2) * np.linalg.norm(tau.tau, 2) + np.linalg.norm(gamma.D, 2)
    smin = np.linalg.svd(den, compute_uv=False)[-1]
    if smin * MAX_DENOMINATOR_COND <= scale:
        raise SingularDenominator(f"C tau + D is numerically singular (sigma_min {smin:.2e}, scale {scale:.2e})")
    # X = num @ den^{-1}  <=>  den^T X^T = num^T
    out = np.linalg.solve(den.T, num.T).T
    return validate_siegel(tau.g, out)


def automorphy_det(gamma: SymplecticMatrix, tau: SiegelPoint) -> complex:
    """det(C tau + D), the automorphy factor of the action."""
    return complex(np.linalg.det(gamma.C @ tau.tau + gamma.D))


def is_level2(gamma: SymplecticMatrix) -> bool:
    return bool(np.all((gamma.matrix - np.eye(2 * gamma.g, dtype=np.int64)) % 2 == 0))


def random_level2(g: int, seed: int, steps: int) -> SymplecticMatrix:
    """Deterministic word of length ``steps`` in generators of Gamma_g(2).

    Generators: upper translations by 2S, lower translations by 2S (S an
    elementary symmetric matrix) and the block-diagonal squared transvections
    diag(I + 2E_ij, (I - 2E_ij)^T) for i != j.
    """
    if steps < 1:
        raise InputError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    eye = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    word = np.eye(2 * g, dtype=np.int64)
    for _ in range(steps):
        kind = rng.integers(3) if g > 1 else rng.integers(2)
        sign = 1 if rng.integers(2) else -1
        i, j = (int(v) for v in rng.integers(g, size=2))
        if kind < 2:
            S = np.zeros((g, g), dtype=np.int64)
            S[i, j] += sign
            if i != j:
                S[j, i] += sign
            if kind == 0:
                gen = np.block([[eye, 2 * S], [zero, eye]])
            else:
                gen = np.block([[eye, zero], [2 * S, eye]])
        else:
            if i == j:
                j = (i + 1) % g
            E = np.zeros((g, g), dtype=np.int64)
            E[i, j] = 2 * sign
            gen = np.block([[eye + E, zero], [zero, eye - E.T]])
        word = word @ gen
    return SymplecticMatrix.from_matrix(word)


def det_im(tau: SiegelPoint) -> float:
    return float(np.linalg.det(tau.imag))


def log_det_im(tau: SiegelPoint) -> float:
    sign, logdet = np.linalg.slogdet(tau.imag)
    return float(logdet)


def cholesky_im(tau: SiegelPoint) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor L of Im(tau) (L @ L.T == Im tau) and its smallest eigenvalue."""
    L = np.linalg.cholesky(tau.imag)
    lam_min = float(np.linalg.eigvalsh(tau.imag)[0])
    return L, lam_min
