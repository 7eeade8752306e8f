"""Seeded random operators used by tests, demos and the verification suite."""

from __future__ import annotations

import numpy as np

from .operators import dagger


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def ginibre(d: int, k: int | None = None, rng=None) -> np.ndarray:
    rng = _rng(rng)
    k = d if k is None else k
    return rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar unitary via QR with the phase fix."""
    Z = ginibre(d, rng=rng)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_hermitian(d: int, rng=None) -> np.ndarray:
    Z = ginibre(d, rng=rng)
    return (Z + dagger(Z)) / 2


def random_state(d: int, rank: int | None = None, rng=None) -> np.ndarray:
    """Density operator G G^dagger / Tr, with G a d x rank Ginibre matrix."""
    G = ginibre(d, d if rank is None else rank, rng)
    rho = G @ dagger(G)
    rho = (rho + dagger(rho)) / 2
    return rho / np.trace(rho).real


def random_pure_state(d: int, rng=None) -> np.ndarray:
    v = ginibre(d, 1, rng)[:, 0]
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_psd(d: int, rng=None, scale: float = 1.0) -> np.ndarray:
    return scale * random_state(d, rng=rng) * d


def random_contraction(d: int, rng=None) -> np.ndarray:
    """Random D with 0 <= D <= I."""
    rng = _rng(rng)
    U = random_unitary(d, rng)
    return (U * rng.uniform(0, 1, d)) @ dagger(U)


def random_distribution(k: int, rng=None) -> np.ndarray:
    return _rng(rng).dirichlet(np.ones(k))
