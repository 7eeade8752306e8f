"""Hermitian operator calculus with support conventions.

Operators are plain complex ``numpy`` arrays. Functions of a PSD operator are
taken on its support and are zero on the kernel, so ``power_on_support(A, -1)``
is the Moore-Penrose inverse and ``log_on_support`` vanishes on the kernel.
An eigenvalue counts as zero when it is at most ``support_cutoff`` times the
largest absolute eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .config import Config, get_config
from .errors import DimensionMismatch, InputError, NonHermitian, NotPSD, ZeroOperator


def _cfg(config: Config | None) -> Config:
    return get_config() if config is None else config


def dagger(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def hermitian(A, config: Config | None = None) -> np.ndarray:
    """Validate a square matrix as Hermitian and return its symmetrized copy.

    Raises NonHermitian when the largest entry of ``A - A^dagger`` exceeds
    ``tol_herm`` (relative to the largest entry once that exceeds one).
    """
    cfg = _cfg(config)
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    defect = np.max(np.abs(A - dagger(A)))
    if defect > cfg.tol_herm * max(1.0, np.max(np.abs(A))):
        raise NonHermitian(f"Hermiticity defect {defect:.3e} exceeds tol_herm")
    return (A + dagger(A)) / 2


def _check_psd(w: np.ndarray, cfg: Config) -> float:
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -cfg.tol_psd * max(1.0, scale):
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} is below -tol_psd")
    return scale


@dataclass(frozen=True)
class Spectrum:
    """Support part of the eigendecomposition of a PSD operator.

    ``values`` are the eigenvalues above the support cutoff (ascending) and
    ``vectors`` the matching orthonormal columns, so ``vectors`` is an isometry
    onto the support.
    """

    values: np.ndarray
    vectors: np.ndarray
    dim: int

    @property
    def rank(self) -> int:
        return self.values.size

    @property
    def trace(self) -> float:
        return float(np.sum(self.values))

    @property
    def log_values(self) -> np.ndarray:
        return np.log(self.values)

    def apply(self, f_values: np.ndarray) -> np.ndarray:
        V = self.vectors
        return (V * f_values) @ dagger(V)

    def power(self, p: float) -> np.ndarray:
        return self.apply(self.values ** p)

    def log(self) -> np.ndarray:
        return self.apply(np.log(self.values))

    def projector(self) -> np.ndarray:
        return self.vectors @ dagger(self.vectors)

    def matrix(self) -> np.ndarray:
        return self.apply(self.values)


def psd_spectrum(A, config: Config | None = None, allow_zero: bool = False) -> Spectrum:
    """Eigendecompose a PSD operator and keep the part above the support cutoff."""
    cfg = _cfg(config)
    A = hermitian(A, cfg)
    w, V = np.linalg.eigh(A)
    scale = _check_psd(w, cfg)
    keep = w > cfg.support_cutoff * scale if scale > 0 else np.zeros(w.size, bool)
    if not keep.any() and not allow_zero:
        raise ZeroOperator("operator is zero")
    return Spectrum(w[keep], V[:, keep], A.shape[0])


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (descending) with their spectral projections.

    ``clusters[k]`` lists the indices, into the descending list of raw
    eigenvalues, that were merged into cluster ``k``.
    """

    eigenvalues: np.ndarray
    projectors: tuple
    clusters: tuple
    isometries: tuple

    def reconstruct(self) -> np.ndarray:
        return sum(lam * P for lam, P in zip(self.eigenvalues, self.projectors))

    def __len__(self):
        return len(self.eigenvalues)


def spectral_decompose(A, cluster_tol: float | None = None,
                       config: Config | None = None) -> SpectralDecomposition:
    """Spectral decomposition with eigenvalues merged by absolute gap.

    Consecutive eigenvalues (in descending order) closer than ``cluster_tol``
    share a cluster; its eigenvalue is the cluster mean.
    """
    cfg = _cfg(config)
    tol = cfg.cluster_tol if cluster_tol is None else cluster_tol
    A = hermitian(A, cfg)
    w, V = np.linalg.eigh(A)
    w, V = w[::-1], V[:, ::-1]
    groups = [[0]]
    for i in range(1, w.size):
        if w[i - 1] - w[i] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    isos = tuple(V[:, g] for g in groups)
    return SpectralDecomposition(
        eigenvalues=np.array([w[g].mean() for g in groups]),
        projectors=tuple(U @ dagger(U) for U in isos),
        clusters=tuple(tuple(g) for g in groups),
        isometries=isos,
    )


def distinct_eigenvalue_count(A, cluster_tol: float | None = None,
                              config: Config | None = None) -> int:
    return len(spectral_decompose(A, cluster_tol, config))


def support_projection(A, config: Config | None = None) -> np.ndarray:
    return psd_spectrum(A, config, allow_zero=True).projector()


def power_on_support(A, p: float, config: Config | None = None) -> np.ndarray:
    return psd_spectrum(A, config, allow_zero=True).power(p)


def log_on_support(A, config: Config | None = None) -> np.ndarray:
    return psd_spectrum(A, config, allow_zero=True).log()


def positive_part(A, config: Config | None = None) -> np.ndarray:
    """A{A>0}: keep the strictly positive eigenvalues."""
    A = hermitian(A, _cfg(config))
    w, V = np.linalg.eigh(A)
    w = np.where(w > 0, w, 0.0)
    return (V * w) @ dagger(V)


def meet_isometry(a: Spectrum, b: Spectrum, config: Config | None = None) -> np.ndarray:
    """Orthonormal basis of range(A0) intersected with range(B0).

    The compression of B0 to the support of A has eigenvalue one exactly on
    the intersection; eigenvalues within ``meet_tol`` of one are kept.
    """
    cfg = _cfg(config)
    if a.rank == 0 or b.rank == 0:
        return np.zeros((a.dim, 0), dtype=complex)
    M = dagger(a.vectors) @ b.vectors
    w, U = np.linalg.eigh(M @ dagger(M))
    keep = w >= 1.0 - cfg.meet_tol
    return a.vectors @ U[:, keep]


def support_meet(A, B, config: Config | None = None) -> np.ndarray:
    """Projector onto the intersection of the supports of A and B."""
    a = psd_spectrum(A, config, allow_zero=True)
    b = psd_spectrum(B, config, allow_zero=True)
    if a.dim != b.dim:
        raise DimensionMismatch("operators act on different dimensions")
    W = meet_isometry(a, b, config)
    return W @ dagger(W)


def spectrum_support_leq(a: Spectrum, b: Spectrum, config: Config | None = None) -> bool:
    return meet_isometry(a, b, config).shape[1] == a.rank


def support_leq(A, B, config: Config | None = None) -> bool:
    """True iff supp A is contained in supp B (within ``meet_tol``)."""
    return spectrum_support_leq(psd_spectrum(A, config, allow_zero=True),
                                psd_spectrum(B, config, allow_zero=True), config)


def supports_orthogonal(a: Spectrum, b: Spectrum, config: Config | None = None) -> bool:
    if a.rank == 0 or b.rank == 0:
        return True
    overlap = np.max(np.abs(dagger(a.vectors) @ b.vectors))
    return overlap <= _cfg(config).overlap_tol


@dataclass(frozen=True)
class PinchingMap:
    """Orthogonal resolution of the identity; ``pinch`` applies X -> sum P X P."""

    blocks: tuple
    isometries: tuple

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return self.blocks[0].shape[0]

    @classmethod
    def from_isometries(cls, isometries: Sequence[np.ndarray]) -> "PinchingMap":
        isos = tuple(np.asarray(U, dtype=complex) for U in isometries)
        return cls(tuple(U @ dagger(U) for U in isos), isos)


def pinching_from(sigma, cluster_tol: float | None = None,
                  config: Config | None = None) -> PinchingMap:
    """Pinching map defined by the spectral projections of ``sigma``."""
    dec = spectral_decompose(sigma, cluster_tol, config)
    return PinchingMap(dec.projectors, dec.isometries)


def pinch(pmap: PinchingMap, X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (pmap.dim, pmap.dim):
        raise DimensionMismatch(f"pinching acts on dim {pmap.dim}, got shape {X.shape}")
    out = np.zeros_like(X)
    for U in pmap.isometries:
        out += U @ (dagger(U) @ X @ U) @ dagger(U)
    return out


def tensor(*ops) -> np.ndarray:
    if not ops:
        raise DimensionMismatch("tensor of no operators")
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def tensor_power(A, n: int) -> np.ndarray:
    if n < 1:
        raise DimensionMismatch("tensor power needs n >= 1")
    return tensor(*([A] * n))


def partial_trace(X, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``."""
    X = np.asarray(X, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if X.shape != (total, total):
        raise DimensionMismatch(f"dims {dims} do not match operator shape {X.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range")
    n = len(dims)
    T = X.reshape(dims + dims)
    for i in sorted(set(range(n)) - set(keep), reverse=True):
        T = np.trace(T, axis1=i, axis2=i + T.ndim // 2)
    kd = int(np.prod([dims[k] for k in keep])) if keep else 1
    return T.reshape(kd, kd)


def psd_leq(A, B, tol: float | None = None, config: Config | None = None) -> bool:
    """A <= B in the PSD order, i.e. lambda_min(B - A) >= -tol."""
    cfg = _cfg(config)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    tol = cfg.tol_psd if tol is None else tol
    diff = hermitian(B - A, cfg)
    return bool(np.linalg.eigvalsh(diff)[0] >= -tol)


def density(A, config: Config | None = None) -> np.ndarray:
    """Validate a density operator (PSD, unit trace) and return it symmetrized."""
    cfg = _cfg(config)
    A = hermitian(A, cfg)
    _check_psd(np.linalg.eigvalsh(A), cfg)
    tr = np.trace(A).real
    if abs(tr - 1.0) > cfg.tol_trace:
        raise InputError(f"trace {tr!r} differs from 1 by more than tol_trace")
    return A


def psd(A, config: Config | None = None) -> np.ndarray:
    """Validate a PSD operator and return it symmetrized."""
    cfg = _cfg(config)
    A = hermitian(A, cfg)
    _check_psd(np.linalg.eigvalsh(A), cfg)
    return A
