"""Schur-Weyl decomposition of (C^d)^{tensor n} and the universal symmetric state.

The isotypic projections are the central idempotents of the symmetric group

    P_lam = dim U_lam / n! * sum_pi chi_lam(pi) pi_H,

with characters from the Murnaghan-Nakayama rule. The universal symmetric
state puts weight 1/|Y_{n,d}| on each isotypic block, maximally mixed inside it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .config import Config, get_config
from .errors import DimensionCap, PartitionMismatch
from .operators import PinchingMap, dagger


@dataclass(frozen=True, order=True)
class YoungDiagram:
    """Row lengths n_1 >= ... >= n_d >= 0, padded with zeros to the depth bound."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r < 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise PartitionMismatch(f"rows {rows} are not weakly decreasing and nonnegative")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    @property
    def depth(self) -> int:
        return len(self.rows)

    @property
    def parts(self) -> tuple:
        return tuple(r for r in self.rows if r > 0)

    def __iter__(self):
        return iter(self.rows)


def _parts(lam) -> tuple:
    rows = lam.rows if isinstance(lam, YoungDiagram) else tuple(int(r) for r in lam)
    return tuple(r for r in rows if r > 0)


def enumerate_young_diagrams(n: int, d: int) -> list[YoungDiagram]:
    """Partitions of n into at most d parts, padded to length d, in decreasing lex order."""

    def gen(remaining, max_part, slots):
        if remaining == 0:
            yield (0,) * slots
            return
        if slots == 0:
            return
        for first in range(min(remaining, max_part), 0, -1):
            for tail in gen(remaining - first, first, slots - 1):
                yield (first,) + tail

    return [YoungDiagram(rows) for rows in gen(n, n, d)]


def dim_sym_irrep(lam) -> int:
    """Dimension of the symmetric-group irrep U_lam by the hook-length formula."""
    parts = _parts(lam)
    n = sum(parts)
    cols = [sum(1 for r in parts if r > j) for j in range(parts[0])] if parts else []
    hooks = 1
    for i, r in enumerate(parts):
        for j in range(r):
            hooks *= (r - j - 1) + (cols[j] - i - 1) + 1
    return math.factorial(n) // hooks


def dim_gl_irrep(lam, d: int) -> int:
    """Dimension of the unitary-group irrep V_lam on C^d (Weyl product formula)."""
    parts = _parts(lam)
    if len(parts) > d:
        return 0
    rows = list(parts) + [0] * (d - len(parts))
    val = Fraction(1)
    for i in range(d):
        for j in range(i + 1, d):
            val *= Fraction(rows[i] - rows[j] + j - i, j - i)
    return int(val)


def cycle_type(perm: Sequence[int]) -> tuple:
    """Cycle lengths of a permutation (given as its list of images), descending."""
    perm = _normalize_perm(perm)
    seen, lengths = [False] * len(perm), []
    for start in range(len(perm)):
        if not seen[start]:
            k, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


@lru_cache(maxsize=None)
def _mn(parts: tuple, cycles: tuple) -> int:
    if not cycles:
        return 1 if not parts else 0
    k, rest = cycles[0], cycles[1:]
    L = len(parts)
    beta = [parts[i] + L - 1 - i for i in range(L)]
    present = set(beta)
    total = 0
    for i, b in enumerate(beta):
        nb = b - k
        if nb < 0 or nb in present:
            continue
        # removing a rim hook = sliding one bead down k places on the abacus
        sign = -1 if sum(1 for c in beta if nb < c < b) % 2 else 1
        new_beta = sorted(beta[:i] + [nb] + beta[i + 1:], reverse=True)
        new_parts = tuple(x for x in (new_beta[j] - (L - 1 - j) for j in range(L)) if x > 0)
        total += sign * _mn(new_parts, rest)
    return total


def sym_character(lam, cycles: Iterable[int]) -> int:
    """Character chi_lam on the conjugacy class with the given cycle type."""
    parts = _parts(lam)
    cycles = tuple(sorted((int(c) for c in cycles if int(c) > 0), reverse=True))
    if sum(parts) != sum(cycles):
        raise PartitionMismatch(f"diagram of size {sum(parts)} vs cycle type of size {sum(cycles)}")
    return _mn(parts, cycles)


def _normalize_perm(perm) -> list:
    perm = [int(p) for p in perm]
    n = len(perm)
    if sorted(perm) == list(range(n)):
        return perm
    if sorted(perm) == list(range(1, n + 1)):
        return [p - 1 for p in perm]
    raise PartitionMismatch(f"{perm} is not a permutation")


def _perm_indices(perm: Sequence[int], d: int) -> np.ndarray:
    """Output basis index for every input basis index under the permutation unitary."""
    n = len(perm)
    inverse = np.argsort(perm)
    digits = np.indices((d,) * n).reshape(n, -1)
    return np.ravel_multi_index(digits[inverse], (d,) * n)


def permutation_operator(perm: Sequence[int], d: int) -> np.ndarray:
    """Unitary mapping psi_1 x ... x psi_n to psi_{pi^-1(1)} x ... x psi_{pi^-1(n)}.

    ``perm`` lists the images pi(0), ..., pi(n-1) (one-based lists are accepted).
    """
    perm = _normalize_perm(perm)
    D = d ** len(perm)
    U = np.zeros((D, D), dtype=complex)
    U[_perm_indices(perm, d), np.arange(D)] = 1.0
    return U


@dataclass(frozen=True)
class IsotypicDecomposition:
    diagrams: tuple
    projectors: tuple
    dims_U: tuple
    dims_V: tuple

    @property
    def ranks(self) -> tuple:
        return tuple(u * v for u, v in zip(self.dims_U, self.dims_V))


def _frozen(A: np.ndarray) -> np.ndarray:
    A.setflags(write=False)
    return A


def _check_cap(n: int, d: int, cap: int | None):
    cap = get_config().dim_cap if cap is None else cap
    if d ** n > cap:
        raise DimensionCap(f"{d}^{n} = {d ** n} exceeds the dimension cap {cap}")


@lru_cache(maxsize=32)
def _isotypic(n: int, d: int) -> IsotypicDecomposition:
    D = d ** n
    diagrams = enumerate_young_diagrams(n, d)
    class_sums: dict[tuple, np.ndarray] = {}
    cols = np.arange(D)
    for perm in itertools.permutations(range(n)):
        ct = cycle_type(perm)
        S = class_sums.setdefault(ct, np.zeros((D, D)))
        S[_perm_indices(perm, d), cols] += 1.0
    nfact = math.factorial(n)
    projectors, dims_u, dims_v = [], [], []
    for lam in diagrams:
        du = dim_sym_irrep(lam)
        P = sum(sym_character(lam, ct) * S for ct, S in class_sums.items()) * (du / nfact)
        projectors.append(_frozen(P.astype(complex)))
        dims_u.append(du)
        dims_v.append(dim_gl_irrep(lam, d))
    return IsotypicDecomposition(tuple(diagrams), tuple(projectors), tuple(dims_u), tuple(dims_v))


def isotypic_projections(n: int, d: int, cap: int | None = None) -> IsotypicDecomposition:
    """Central projections onto the isotypic blocks U_lam x V_lam of (C^d)^{tensor n}."""
    _check_cap(n, d, cap)
    return _isotypic(int(n), int(d))


def universal_eigenvalues(n: int, d: int) -> list[float]:
    """Eigenvalue of the universal symmetric state on each isotypic block."""
    diagrams = enumerate_young_diagrams(n, d)
    return [1.0 / (len(diagrams) * dim_sym_irrep(l) * dim_gl_irrep(l, d)) for l in diagrams]


def universal_symmetric_state(n: int, d: int, cap: int | None = None) -> np.ndarray:
    dec = isotypic_projections(n, d, cap)
    vals = universal_eigenvalues(n, d)
    return sum(v * P for v, P in zip(vals, dec.projectors))


def universal_pinching(n: int, d: int, cap: int | None = None,
                       config: Config | None = None) -> PinchingMap:
    """Pinching by the universal symmetric state.

    Blocks are sums of isotypic projections whose eigenvalues fall in one
    cluster under the usual absolute-gap rule.
    """
    cfg = get_config() if config is None else config
    dec = isotypic_projections(n, d, cap)
    vals = universal_eigenvalues(n, d)
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    groups = [[order[0]]]
    for a, b in zip(order[:-1], order[1:]):
        if vals[a] - vals[b] <= cfg.cluster_tol:
            groups[-1].append(b)
        else:
            groups.append([b])
    isos = []
    for g in groups:
        P = sum(dec.projectors[i] for i in g)
        w, V = np.linalg.eigh((P + dagger(P)) / 2)
        isos.append(V[:, w > 0.5])
    return PinchingMap.from_isometries(isos)


def v_nd(n: int, d: int) -> int:
    """Polynomial factor (n+1)^((d+2)(d-1)/2) of the domination bound."""
    return (n + 1) ** ((d + 2) * (d - 1) // 2)


def twirl(omega: np.ndarray, n: int, d: int) -> np.ndarray:
    """Average of pi omega pi^dagger over the symmetric group."""
    omega = np.asarray(omega, dtype=complex)
    out = np.zeros_like(omega)
    for perm in itertools.permutations(range(n)):
        idx = _perm_indices(perm, d)
        tmp = np.empty_like(omega)
        tmp[np.ix_(idx, idx)] = omega
        out += tmp
    return out / math.factorial(n)


def random_symmetric_state(n: int, d: int, rng=None) -> np.ndarray:
    from .sampling import random_state
    return twirl(random_state(d ** n, rng=rng), n, d)
