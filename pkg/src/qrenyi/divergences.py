"""Petz, sandwiched and flat Renyi divergences with their support and limit cases.

For PSD operators rho, sigma and alpha in (0, 1) or supp rho within supp sigma

    petz        Q = Tr rho^a sigma^(1-a)
    sandwiched  Q = Tr (rho^(1/2) sigma^((1-a)/a) rho^(1/2))^a
    flat        Q = Tr P exp(a P log(rho) P + (1-a) P log(sigma) P)

with P the projector onto the intersection of the supports. For alpha > 1
and supp rho not within supp sigma, Q = +inf. The divergence is
D = (log Q - log Tr rho) / (alpha - 1), with the relative entropy (divided
by Tr rho) at alpha = 1. Everything is computed in the log domain, and
infinities come only from explicit support checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .config import Config, get_config
from .errors import (DimensionCap, DimensionMismatch, EmptySupportMeet, InfiniteDivergence,
                     InvalidAlphaRange, UnsupportedAlphaVariant)
from .operators import (Spectrum, dagger, meet_isometry, pinch, pinching_from, psd_spectrum,
                        spectrum_support_leq, supports_orthogonal, tensor_power)

INF = math.inf

# |alpha - 1| below this switches to the relative-entropy branch
ALPHA_ONE_WINDOW = 1e-6


class DivergenceVariant(str, Enum):
    PETZ = "petz"
    SANDWICHED = "sandwiched"
    FLAT = "flat"

    @classmethod
    def parse(cls, value) -> "DivergenceVariant":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"*": "sandwiched", "sand": "sandwiched", "minimal": "sandwiched",
                   "b": "flat", "log-euclidean": "flat", "": "petz", "standard": "petz"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown divergence variant {value!r}") from None


PETZ, SANDWICHED, FLAT = DivergenceVariant.PETZ, DivergenceVariant.SANDWICHED, DivergenceVariant.FLAT


def alpha_sign(alpha: float) -> int:
    """+1 for alpha >= 1 and -1 below; turns every family's objective into a minimization."""
    return 1 if alpha >= 1 else -1


def _herm(M):
    return (M + dagger(M)) / 2


def _safe_log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


# Kernels on spectral data. ``log_r, Ur`` describe the support of rho and
# ``log_s, Vs`` the support of sigma; each returns log Q.

def psi_petz_kernel(log_r, Ur, log_s, Vs, alpha):
    overlaps = np.abs(dagger(Ur) @ Vs) ** 2
    terms = alpha * log_r[:, None] + (1 - alpha) * log_s[None, :] + _safe_log(overlaps)
    return float(logsumexp(terms))


def psi_sandwiched_kernel(log_r, Ur, log_s, Vs, alpha):
    B = (dagger(Ur) @ Vs) * np.exp(0.5 * log_r)[:, None]
    M = (B * np.exp(((1 - alpha) / alpha) * log_s)[None, :]) @ dagger(B)
    lam = np.linalg.eigvalsh(_herm(M))
    top = lam[-1]
    if top <= 0:
        return -INF
    lam = lam[lam > 1e-14 * top]
    return float(logsumexp(alpha * np.log(lam)))


def psi_flat_kernel(log_r, Ur, log_s, Vs, alpha):
    """Flat log Q when supp rho lies inside supp sigma (the meet is supp rho)."""
    C = dagger(Ur) @ Vs
    K = alpha * np.diag(log_r) + (1 - alpha) * ((C * log_s[None, :]) @ dagger(C))
    return float(logsumexp(np.linalg.eigvalsh(_herm(K))))


def psi_flat_meet(r: Spectrum, s: Spectrum, alpha, config=None):
    W = meet_isometry(r, s, config)
    if W.shape[1] == 0:
        return -INF
    K = alpha * (dagger(W) @ r.log() @ W) + (1 - alpha) * (dagger(W) @ s.log() @ W)
    return float(logsumexp(np.linalg.eigvalsh(_herm(K))))


def _spectra(rho, sigma, config):
    r = psd_spectrum(rho, config)
    s = psd_spectrum(sigma, config)
    if r.dim != s.dim:
        raise DimensionMismatch(f"dimensions {r.dim} and {s.dim} differ")
    return r, s


def _psi(r: Spectrum, s: Spectrum, alpha: float, variant: DivergenceVariant, config) -> float:
    if alpha == 1:
        return math.log(r.trace)
    leq = spectrum_support_leq(r, s, config)
    if alpha > 1 and not leq:
        return INF
    if variant is FLAT:
        if leq:
            return psi_flat_kernel(r.log_values, r.vectors, s.log_values, s.vectors, alpha)
        return psi_flat_meet(r, s, alpha, config)
    if alpha < 1 and supports_orthogonal(r, s, config):
        return -INF
    kernel = psi_petz_kernel if variant is PETZ else psi_sandwiched_kernel
    return kernel(r.log_values, r.vectors, s.log_values, s.vectors, alpha)


def _check_alpha(alpha, allow_special: bool) -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0 or (not allow_special and (alpha == 0 or math.isinf(alpha))):
        raise InvalidAlphaRange(f"alpha={alpha} outside the admissible range")
    return alpha


def psi_alpha(rho, sigma, alpha: float, variant="petz", config: Config | None = None) -> float:
    """log Q_alpha; +inf or -inf when the support checks say so."""
    alpha = _check_alpha(alpha, False)
    r, s = _spectra(rho, sigma, config)
    return _psi(r, s, alpha, DivergenceVariant.parse(variant), config)


def q_alpha(rho, sigma, alpha: float, variant="petz", config: Config | None = None) -> float:
    """Renyi quasi-entropy Q_alpha(rho||sigma) for the chosen family."""
    psi = psi_alpha(rho, sigma, alpha, variant, config)
    return INF if psi == INF else math.exp(psi)


def _relative_entropy(r: Spectrum, s: Spectrum, config) -> float:
    if not spectrum_support_leq(r, s, config):
        return INF
    overlaps = np.abs(dagger(r.vectors) @ s.vectors) ** 2
    cross = float(r.values @ overlaps @ s.log_values)
    return float(r.values @ r.log_values) - cross


def relative_entropy(rho, sigma, config: Config | None = None) -> float:
    """Tr rho (log rho - log sigma), or +inf when supp rho is not inside supp sigma."""
    r, s = _spectra(rho, sigma, config)
    return _relative_entropy(r, s, config)


def von_neumann_entropy(rho, config: Config | None = None) -> float:
    r = psd_spectrum(rho, config)
    return -float(r.values @ r.log_values)


def _d_max(r: Spectrum, s: Spectrum, config) -> float:
    if not spectrum_support_leq(r, s, config):
        return INF
    C = (dagger(s.vectors) @ r.vectors) * np.sqrt(r.values)[None, :]
    C = C * (s.values ** -0.5)[:, None]
    return math.log(np.linalg.eigvalsh(_herm(C @ dagger(C)))[-1])


def d_max(rho, sigma, config: Config | None = None) -> float:
    """Max-relative entropy log inf{lam : rho <= lam sigma}."""
    r, s = _spectra(rho, sigma, config)
    return _d_max(r, s, config)


def _cluster(values: np.ndarray, tol: float):
    order = np.argsort(values)[::-1]
    groups = [[order[0]]]
    for a, b in zip(order[:-1], order[1:]):
        if values[a] - values[b] <= tol:
            groups[-1].append(b)
        else:
            groups.append([b])
    return groups


def _d_infinity(r: Spectrum, s: Spectrum, variant: DivergenceVariant, config) -> float:
    cfg = get_config() if config is None else config
    if not spectrum_support_leq(r, s, config):
        return INF
    if variant is SANDWICHED:
        return _d_max(r, s, config)
    if variant is FLAT:
        C = dagger(r.vectors) @ s.vectors
        K = np.diag(r.log_values) - (C * s.log_values[None, :]) @ dagger(C)
        return float(np.linalg.eigvalsh(_herm(K))[-1])
    overlaps = np.abs(dagger(r.vectors) @ s.vectors) ** 2
    best = -INF
    for gr in _cluster(r.values, cfg.cluster_tol):
        for gs in _cluster(s.values, cfg.cluster_tol):
            if overlaps[np.ix_(gr, gs)].sum() > cfg.overlap_tol:
                best = max(best, math.log(r.values[gr].mean() / s.values[gs].mean()))
    return best


def _d_zero(r: Spectrum, s: Spectrum, variant: DivergenceVariant, config) -> float:
    log_tr = math.log(r.trace)
    if variant is SANDWICHED:
        raise UnsupportedAlphaVariant("the sandwiched divergence at alpha = 0 is not implemented")
    if variant is PETZ:
        if supports_orthogonal(r, s, config):
            return INF
        overlaps = np.abs(dagger(r.vectors) @ s.vectors) ** 2
        return log_tr - math.log(float(np.sum(overlaps @ s.values)))
    W = meet_isometry(r, s, config)
    if W.shape[1] == 0:
        return INF
    lam = np.linalg.eigvalsh(_herm(dagger(W) @ s.log() @ W))
    return log_tr - float(logsumexp(lam))


def d_alpha(rho, sigma, alpha: float, variant="petz", config: Config | None = None) -> float:
    """Renyi divergence D_alpha(rho||sigma) for alpha in [0, inf]."""
    alpha = _check_alpha(alpha, True)
    variant = DivergenceVariant.parse(variant)
    r, s = _spectra(rho, sigma, config)
    if math.isinf(alpha):
        return _d_infinity(r, s, variant, config)
    if alpha == 0:
        return _d_zero(r, s, variant, config)
    if abs(alpha - 1) < ALPHA_ONE_WINDOW:
        return _relative_entropy(r, s, config) / r.trace
    psi = _psi(r, s, alpha, variant, config)
    if math.isinf(psi):
        return INF
    return (psi - math.log(r.trace)) / (alpha - 1)


def hellinger_arc(rho, sigma, alpha: float, config: Config | None = None) -> np.ndarray:
    """Normalized P exp(a P log(rho) P + (1-a) P log(sigma) P); the flat minimizer."""
    alpha = _check_alpha(alpha, False)
    r, s = _spectra(rho, sigma, config)
    if alpha > 1 and not spectrum_support_leq(r, s, config):
        raise InfiniteDivergence("flat Q is infinite: supp rho is not inside supp sigma")
    W = meet_isometry(r, s, config)
    if W.shape[1] == 0:
        raise EmptySupportMeet("the supports of rho and sigma intersect trivially")
    K = alpha * (dagger(W) @ r.log() @ W) + (1 - alpha) * (dagger(W) @ s.log() @ W)
    k, Z = np.linalg.eigh(_herm(K))
    weights = np.exp(k - k[-1])
    weights /= weights.sum()
    WZ = W @ Z
    return _herm((WZ * weights) @ dagger(WZ))


def variational_objective(tau, rho, sigma, alpha: float, config: Config | None = None) -> float:
    """alpha D(tau||rho) + (1 - alpha) D(tau||sigma)."""
    t = psd_spectrum(tau, config)
    r, s = _spectra(rho, sigma, config)
    d_r = _relative_entropy(t, r, config)
    d_s = _relative_entropy(t, s, config)
    if d_r == INF:
        return INF
    if d_s == INF:
        return INF if alpha < 1 else -INF
    return alpha * d_r + (1 - alpha) * d_s


@dataclass(frozen=True)
class VariationalCheck:
    objective: float
    decomposed: float  # D(tau||tau_alpha) - flat psi_alpha(rho||sigma)

    @property
    def residual(self) -> float:
        return abs(self.objective - self.decomposed)


def variational_identity(tau, rho, sigma, alpha: float,
                         config: Config | None = None) -> VariationalCheck:
    """Both sides of the decomposition of the flat variational objective."""
    tau_a = hellinger_arc(rho, sigma, alpha, config)
    psi = psi_alpha(rho, sigma, alpha, FLAT, config)
    return VariationalCheck(variational_objective(tau, rho, sigma, alpha, config),
                            relative_entropy(tau, tau_a, config) - psi)


@dataclass(frozen=True)
class TroppResult:
    value: float
    trace: float
    maximizer: np.ndarray

    @property
    def gap(self) -> float:
        return self.trace - self.value


def tropp_value(A, n_samples: int = 500, rng=None, config: Config | None = None) -> TroppResult:
    """max of Tr tau - D(tau||A) over tau = A and ``n_samples`` random PSD tau."""
    from .sampling import random_state
    a = psd_spectrum(A, config)
    rng = np.random.default_rng(rng)
    candidates = [a.matrix()]
    for _ in range(n_samples):
        # random states on the support of A, scaled around its trace
        k = a.rank
        w = random_state(k, rng=rng) * a.trace * rng.uniform(0.2, 2.0)
        candidates.append(a.vectors @ w @ dagger(a.vectors))
    best, arg = -INF, candidates[0]
    for tau in candidates:
        val = np.trace(tau).real - relative_entropy(tau, a.matrix(), config)
        if val > best:
            best, arg = val, tau
    return TroppResult(float(best), a.trace, arg)


def pinched_divergence(rho, sigma, alpha: float, n: int, cap: int | None = None,
                       config: Config | None = None) -> float:
    """(1/n) D_alpha^petz(E(rho^n) || sigma^n), E the pinching by sigma^n."""
    cfg = get_config() if config is None else config
    cap = cfg.dim_cap if cap is None else cap
    d = np.asarray(rho).shape[0]
    if d ** n > cap:
        raise DimensionCap(f"{d}^{n} exceeds the dimension cap {cap}")
    rho_n, sigma_n = tensor_power(rho, n), tensor_power(sigma, n)
    pinched = pinch(pinching_from(sigma_n, config=cfg), rho_n)
    return d_alpha(pinched, sigma_n, alpha, PETZ, cfg) / n
