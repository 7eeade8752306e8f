"""Classical-quantum channels, generalized Holevo quantities and Renyi capacities.

Every minimization over output states uses sigma = exp(H) / Tr exp(H) with H
traceless Hermitian, so sigma stays invertible, and quasi-Newton descent with
central-difference gradients. Suprema over input distributions use a softmax
parametrization with envelope-theorem gradients, certified by the
Frank-Wolfe gap. The divergence radius is an epigraph problem whose
Lagrange weights give a lower bound through the form-2 Holevo quantity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize, nnls
from scipy.special import logsumexp, softmax

from .config import Config, get_config
from .divergences import (FLAT, INF, PETZ, SANDWICHED, DivergenceVariant, psi_flat_kernel,
                          psi_petz_kernel, psi_sandwiched_kernel)
from .errors import (DimensionCap, DimensionMismatch, InputError, InvalidAlphaRange,
                     NonConvergence, UnknownLabel, UnsupportedAlphaVariant)
from .operators import dagger, density, pinch, psd_spectrum, tensor
from .schur_weyl import universal_pinching

# closed ranges where the sigma-objectives are convex
VALID_RANGE = {PETZ: (0.0, 2.0), SANDWICHED: (0.5, INF), FLAT: (0.0, INF)}


def _cfg(config):
    return get_config() if config is None else config


@dataclass(frozen=True)
class CqChannel:
    """Finite alphabet of labels, each mapped to a density operator."""

    labels: tuple
    outputs: tuple

    @classmethod
    def from_states(cls, states: Sequence, labels: Sequence[str] | None = None,
                    config: Config | None = None) -> "CqChannel":
        states = [density(S, config) for S in states]
        if not states:
            raise InputError("a channel needs at least one input")
        dims = {S.shape[0] for S in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"outputs have different dimensions {sorted(dims)}")
        labels = [str(i) for i in range(len(states))] if labels is None else [str(l) for l in labels]
        if len(labels) != len(states) or len(set(labels)) != len(labels):
            raise InputError("labels must be unique and match the outputs")
        for S in states:
            S.setflags(write=False)
        return cls(tuple(labels), tuple(states))

    @property
    def dim(self) -> int:
        return self.outputs[0].shape[0]

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise UnknownLabel(f"label {label!r} is not in the alphabet") from None

    def __getitem__(self, label) -> np.ndarray:
        return self.outputs[self.index(label)]

    def commuting(self, tol: float = 1e-10) -> bool:
        return all(np.max(np.abs(A @ B - B @ A)) <= tol
                   for A, B in itertools.combinations(self.outputs, 2))


def as_distribution(W: CqChannel, P=None, config: Config | None = None) -> np.ndarray:
    """Weights aligned with ``W.labels``; ``P`` may be a label map, a vector or None (uniform)."""
    cfg = _cfg(config)
    if P is None:
        return np.full(len(W), 1.0 / len(W))
    if isinstance(P, Mapping):
        w = np.zeros(len(W))
        for label, value in P.items():
            w[W.index(label)] += float(value)
    else:
        w = np.asarray(P, dtype=float).ravel()
        if w.size != len(W):
            raise UnknownLabel(f"distribution has {w.size} weights for {len(W)} labels")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InputError("distribution weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > cfg.tol_trace:
        raise InputError(f"distribution sums to {w.sum()!r}, not 1")
    return w / w.sum()


def output_state(W: CqChannel, P=None) -> np.ndarray:
    w = as_distribution(W, P)
    return sum(p * S for p, S in zip(w, W.outputs))


@dataclass(frozen=True)
class LiftedState:
    """sum_x P(x) |x><x| (x) W(x) on the classical register (x) output space."""

    joint: np.ndarray
    n_inputs: int
    dim: int

    def classical_marginal(self) -> np.ndarray:
        from .operators import partial_trace
        return partial_trace(self.joint, [self.n_inputs, self.dim], [0])

    def quantum_marginal(self) -> np.ndarray:
        from .operators import partial_trace
        return partial_trace(self.joint, [self.n_inputs, self.dim], [1])


def lifted_state(W: CqChannel, P=None) -> LiftedState:
    w = as_distribution(W, P)
    k, d = len(W), W.dim
    joint = np.zeros((k * d, k * d), dtype=complex)
    for i, (p, S) in enumerate(zip(w, W.outputs)):
        joint[i * d:(i + 1) * d, i * d:(i + 1) * d] = p * S
    return LiftedState(joint, k, d)


def holevo_quantity(W: CqChannel, P=None) -> float:
    """sum_x P(x) D(W(x) || W(P))."""
    from .divergences import relative_entropy
    w = as_distribution(W, P)
    mean = output_state(W, w)
    return float(sum(p * relative_entropy(S, mean) for p, S in zip(w, W.outputs) if p > 0))


# ---------------------------------------------------------------- state optimizer

def traceless_basis(d: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian d x d matrices."""
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            S = np.zeros((d, d), complex)
            S[j, k] = S[k, j] = 1 / math.sqrt(2)
            A = np.zeros((d, d), complex)
            A[j, k], A[k, j] = -1j / math.sqrt(2), 1j / math.sqrt(2)
            mats += [S, A]
    for m in range(1, d):
        D = np.zeros((d, d), complex)
        D[np.arange(m), np.arange(m)] = 1.0
        D[m, m] = -m
        mats.append(D / math.sqrt(m * (m + 1)))
    return np.array(mats).reshape(len(mats), d, d)


class _StateParam:
    """sigma(theta) = exp(H(theta)) / Tr exp(H(theta))."""

    def __init__(self, d: int):
        self.d = d
        self.basis = traceless_basis(d)

    @property
    def size(self) -> int:
        return self.basis.shape[0]

    def spectral(self, theta):
        H = np.tensordot(theta, self.basis, 1) if self.size else np.zeros((self.d, self.d))
        h, V = np.linalg.eigh((H + dagger(H)) / 2)
        return h - logsumexp(h), V

    def state(self, theta) -> np.ndarray:
        log_s, V = self.spectral(theta)
        S = (V * np.exp(log_s)) @ dagger(V)
        return (S + dagger(S)) / 2

    def theta_of(self, sigma, floor: float = 1e-3) -> np.ndarray:
        sigma = np.asarray(sigma, complex)
        sigma = (1 - floor) * sigma + floor * np.eye(self.d) / self.d
        w, V = np.linalg.eigh((sigma + dagger(sigma)) / 2)
        L = (V * np.log(np.clip(w, 1e-300, None))) @ dagger(V)
        return np.real(np.einsum("kij,ji->k", self.basis, L))


def _central_grad(f, x, h=1e-6):
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (f(x + e) - f(x - e)) / (2 * h)
    return g


@dataclass(frozen=True)
class StateOptimum:
    value: float
    sigma: np.ndarray
    theta: np.ndarray
    gap: float
    grad_norm: float
    iterations: int
    converged: bool


def _fw_gap(objective: Callable, sigma: np.ndarray, basis: np.ndarray, value: float) -> float:
    """Frank-Wolfe gap Tr(G sigma) - lambda_min(G) of a convex state objective.

    The gradient G is taken by central differences directly in sigma-space;
    near the boundary it is evaluated at a slightly mixed point and the
    extra objective increase is added back so the bound stays valid.
    """
    d = sigma.shape[0]
    if basis.shape[0] == 0:
        return 0.0

    def f(S):
        w, V = np.linalg.eigh((S + dagger(S)) / 2)
        return objective(np.log(w), V)

    lam = np.linalg.eigvalsh(sigma)[0]
    extra = 0.0
    if lam < 1e-6:
        sigma = (1 - 1e-5) * sigma + 1e-5 * np.eye(d) / d
        lam = np.linalg.eigvalsh(sigma)[0]
        extra = max(0.0, f(sigma) - value)
    h = min(1e-6, 0.25 * lam)
    g = np.array([(f(sigma + h * B) - f(sigma - h * B)) / (2 * h) for B in basis])
    G = np.tensordot(g, basis, 1)
    G = (G + dagger(G)) / 2
    gap = np.trace(G @ sigma).real - np.linalg.eigvalsh(G)[0]
    return float(max(gap, 0.0) + extra)


def minimize_over_states(objective: Callable, d: int, starts: Sequence[np.ndarray],
                         config: Config | None = None, certify: bool = True) -> StateOptimum:
    """Minimize ``objective(log_s, V)`` over invertible states (eigenpairs of sigma)."""
    cfg = _cfg(config)
    param = _StateParam(d)
    if param.size == 0:
        return StateOptimum(objective(np.zeros(1), np.eye(1)), np.eye(1, dtype=complex),
                            np.zeros(0), 0.0, 0.0, 0, True)

    def fun(theta):
        return objective(*param.spectral(theta))

    best = None
    for x0 in starts:
        res = minimize(fun, np.asarray(x0, float), jac=lambda x: _central_grad(fun, x),
                       method="BFGS", options={"gtol": cfg.opt_gtol, "maxiter": cfg.opt_maxiter})
        if best is None or res.fun < best.fun:
            best = res
    grad = _central_grad(fun, best.x)
    gnorm = float(np.max(np.abs(grad)))
    sigma = param.state(best.x)
    gap = _fw_gap(objective, sigma, param.basis, float(best.fun)) if certify else math.nan
    converged = bool(best.success or gnorm <= math.sqrt(cfg.opt_gtol) or gap <= cfg.chi_gap_tol)
    return StateOptimum(float(best.fun), sigma, best.x, gap, gnorm, int(best.nit), converged)


class _Outputs:
    """Per-output spectral data for fast evaluation against invertible sigma."""

    kernels = {PETZ: psi_petz_kernel, SANDWICHED: psi_sandwiched_kernel, FLAT: psi_flat_kernel}

    def __init__(self, states, config=None):
        self.spectra = [psd_spectrum(S, config) for S in states]

    def __len__(self):
        return len(self.spectra)

    def psi(self, i, log_s, V, alpha, variant):
        sp = self.spectra[i]
        return self.kernels[variant](sp.log_values, sp.vectors, log_s, V, alpha)

    def relative_entropy(self, i, log_s, V):
        sp = self.spectra[i]
        overlaps = np.abs(dagger(sp.vectors) @ V) ** 2
        return float(sp.values @ sp.log_values - sp.values @ overlaps @ log_s)

    def d_infinity(self, i, log_s, V, variant):
        sp = self.spectra[i]
        C = dagger(sp.vectors) @ V
        if variant is FLAT:
            K = np.diag(sp.log_values) - (C * log_s[None, :]) @ dagger(C)
            return float(np.linalg.eigvalsh((K + dagger(K)) / 2)[-1])
        if variant is SANDWICHED:
            C = (dagger(V) @ sp.vectors) * np.exp(0.5 * sp.log_values)[None, :]
            C = C * np.exp(-0.5 * log_s)[:, None]
            return math.log(np.linalg.eigvalsh(C @ dagger(C))[-1])
        raise UnsupportedAlphaVariant("petz D_inf is discontinuous in sigma; not optimized")

    def divergence(self, i, log_s, V, alpha, variant):
        if math.isinf(alpha):
            return self.d_infinity(i, log_s, V, variant)
        if abs(alpha - 1) < 1e-6:
            return self.relative_entropy(i, log_s, V)
        return self.psi(i, log_s, V, alpha, variant) / (alpha - 1)


def check_alpha_range(alpha: float, variant) -> None:
    """Raise unless alpha lies in the variant's convex range (and is not 1)."""
    variant = DivergenceVariant.parse(variant)
    lo, hi = VALID_RANGE[variant]
    if variant is SANDWICHED:
        ok = lo <= alpha < hi
    else:
        ok = lo < alpha <= hi and not math.isinf(alpha)
    if not ok or alpha == 1:
        raise InvalidAlphaRange(f"alpha={alpha} outside the {variant.value} range or equal to 1")


@dataclass(frozen=True)
class ChiResult:
    value: float
    sigma: np.ndarray
    gap: float
    iterations: int
    converged: bool
    theta: np.ndarray = field(repr=False, default=None)
    per_letter: np.ndarray = field(repr=False, default=None)


def _form_objective(outs: _Outputs, w: np.ndarray, alpha: float, variant, form: int):
    support = [i for i in range(len(w)) if w[i] > 0]
    logw = np.log(w[support])
    if form == 1:
        def objective(log_s, V):
            psis = np.array([outs.psi(i, log_s, V, alpha, variant) for i in support])
            return float(logsumexp(logw + psis)) / (alpha - 1)
    else:
        def objective(log_s, V):
            return float(sum(w[i] * outs.divergence(i, log_s, V, alpha, variant) for i in support))
    return objective


def _per_letter(outs: _Outputs, w, sigma_theta, param, alpha, variant, form):
    """Envelope-theorem gradient of the optimal value with respect to P(x)."""
    log_s, V = param.spectral(sigma_theta)
    if form == 1:
        psis = np.array([outs.psi(i, log_s, V, alpha, variant) for i in range(len(outs))])
        mask = w > 0
        norm = logsumexp(np.log(w[mask]) + psis[mask])
        return np.exp(psis - norm) / (alpha - 1)
    return np.array([outs.divergence(i, log_s, V, alpha, variant) for i in range(len(outs))])


def sibson_minimizer(W: CqChannel, P=None, alpha: float = 2.0) -> np.ndarray:
    """Petz form-1 minimizer, proportional to (sum_x P(x) W(x)^alpha)^(1/alpha)."""
    return _sibson(W, as_distribution(W, P), alpha)[1]


def sibson_value(W: CqChannel, P=None, alpha: float = 2.0) -> float:
    """Closed form alpha/(alpha-1) log Tr (sum_x P(x) W(x)^alpha)^(1/alpha)."""
    return _sibson(W, as_distribution(W, P), alpha)[0]


def _sibson(W, w, alpha):
    spectra = [(p, psd_spectrum(S)) for p, S in zip(w, W.outputs) if p > 0]
    shift = max(float(np.max(sp.log_values)) for _, sp in spectra)
    A = sum(p * sp.apply(np.exp(alpha * (sp.log_values - shift))) for p, sp in spectra)
    a = psd_spectrum(A)
    root = a.power(1 / alpha)
    log_tr = shift + math.log(np.trace(root).real)
    sigma = root / np.trace(root).real
    return alpha / (alpha - 1) * log_tr, (sigma + dagger(sigma)) / 2


def _starts(param: _StateParam, W: CqChannel, w, warm=None):
    starts = [] if warm is None else [np.asarray(warm, float)]
    starts.append(param.theta_of(output_state(W, w)))
    starts.append(np.zeros(param.size))
    return starts


def chi_alpha(W: CqChannel, P=None, alpha: float = 2.0, variant="sandwiched", form: int = 1,
              method: str = "optimize", warm=None, config: Config | None = None,
              strict: bool = True) -> ChiResult:
    """Generalized Holevo quantity chi_{alpha,form}(W, P) (minimum over output states).

    form 1: min_sigma 1/(alpha-1) log sum_x P(x) Q_alpha(W(x)||sigma)
    form 2: min_sigma sum_x P(x) D_alpha(W(x)||sigma)

    ``method="sibson"`` (petz, form 1) uses the closed-form minimizer instead,
    which is exact for every alpha > 0.
    """
    cfg = _cfg(config)
    variant = DivergenceVariant.parse(variant)
    alpha = float(alpha)
    if form not in (1, 2):
        raise InputError("form must be 1 or 2")
    w = as_distribution(W, P, cfg)
    outs = _Outputs(W.outputs, cfg)
    param = _StateParam(W.dim)
    support = np.flatnonzero(w > 0)
    if method == "sibson":
        if variant is not PETZ or form != 1:
            raise InputError("the Sibson closed form applies to the petz form-1 quantity only")
        if alpha <= 0 or alpha == 1 or math.isinf(alpha):
            raise InvalidAlphaRange(f"alpha={alpha} not admissible for the Sibson formula")
        value, sigma = _sibson(W, w, alpha)
        theta = param.theta_of(sigma, floor=1e-12)
        per = _per_letter(outs, w, theta, param, alpha, variant, 1)
        return ChiResult(value, sigma, 0.0, 0, True, theta, per)
    check_alpha_range(alpha, variant)
    if support.size == 1:
        sigma = W.outputs[support[0]]
        theta = param.theta_of(sigma)
        per = _per_letter(outs, w, theta, param, alpha, variant, form)
        return ChiResult(0.0, np.array(sigma), 0.0, 0, True, theta, per)
    objective = _form_objective(outs, w, alpha, variant, form)
    opt = minimize_over_states(objective, W.dim, _starts(param, W, w, warm), cfg)
    if strict and not opt.converged and opt.gap > cfg.chi_gap_tol:
        raise NonConvergence(f"chi optimizer gap {opt.gap:.3e} above tolerance", opt.gap, opt.value)
    per = _per_letter(outs, w, opt.theta, param, alpha, variant, form)
    return ChiResult(opt.value, opt.sigma, opt.gap, opt.iterations, opt.converged, opt.theta, per)


# ---------------------------------------------------------------- capacities

@dataclass(frozen=True)
class CapacityResult:
    value: float
    weights: np.ndarray
    sigma: np.ndarray
    gap: float
    converged: bool


def maximize_over_distributions(evaluate: Callable, k: int, starts: Sequence[np.ndarray],
                                config: Config | None = None):
    """Maximize a concave-in-P value given ``evaluate(P) -> (value, gradient)``.

    Softmax-parametrized BFGS; the Frank-Wolfe gap max_x g_x - <P, g> at the
    returned point bounds the suboptimality when the value is concave.
    """
    cfg = _cfg(config)
    cache = {}

    def f(z):
        key = z.tobytes()
        if key not in cache:
            P = softmax(np.append(z, 0.0))
            cache.clear()
            cache[key] = (P,) + tuple(evaluate(P))
        return cache[key]

    def neg(z):
        return -f(z)[1]

    def neg_grad(z):
        P, _, g = f(z)
        full = P * (g - P @ g)
        return -full[:-1]

    best = None
    for P0 in starts:
        P0 = np.clip(np.asarray(P0, float), 1e-12, None)
        z0 = np.log(P0[:-1] / P0[-1])
        res = minimize(neg, z0, jac=neg_grad, method="BFGS",
                       options={"gtol": cfg.opt_gtol, "maxiter": cfg.opt_maxiter})
        P, val, g = f(res.x)
        gap = float(np.max(g) - P @ g)
        if best is None or val > best[1]:
            best = (P, val, gap)
    return best


def _alpha_grid_starts(k: int, rng_seed: int = 0, n_random: int = 3):
    starts = [np.full(k, 1.0 / k)]
    if k <= 3:
        grid = [np.array(c) / 10 for c in itertools.product(range(11), repeat=k) if sum(c) == 10]
        return starts, grid
    rng = np.random.default_rng(rng_seed)
    return starts + [rng.dirichlet(np.ones(k)) for _ in range(n_random)], []


def renyi_capacity(W: CqChannel, alpha: float, variant="sandwiched", form: int = 1,
                   method: str = "optimize", config: Config | None = None,
                   strict: bool = True) -> CapacityResult:
    """sup over input distributions of chi_{alpha,form}(W, P)."""
    cfg = _cfg(config)
    variant = DivergenceVariant.parse(variant)
    k = len(W)
    if k == 1:
        return CapacityResult(0.0, np.ones(1), np.array(W.outputs[0]), 0.0, True)
    warm = {"theta": None}

    def evaluate(P):
        res = chi_alpha(W, P, alpha, variant, form, method, warm["theta"], cfg, strict=False)
        warm["theta"] = res.theta
        return res.value, res.per_letter

    starts, grid = _alpha_grid_starts(k)
    concave = alpha > 1 or form == 2
    if grid and not concave:
        # concavity in P is not known here: seed from the best dense-grid point
        vals = [evaluate(np.clip(P, 1e-9, None) / np.clip(P, 1e-9, None).sum())[0] for P in grid]
        starts.append(np.clip(grid[int(np.argmax(vals))], 1e-6, None))
    P, value, gap = maximize_over_distributions(evaluate, k, starts, cfg)
    res = chi_alpha(W, P, alpha, variant, form, method, warm["theta"], cfg, strict=False)
    converged = gap <= 1e-5 and res.converged
    if strict and not converged and gap > 1e-4:
        raise NonConvergence(f"capacity Frank-Wolfe gap {gap:.3e}", gap, value)
    return CapacityResult(float(max(value, res.value)), P, res.sigma, float(gap + res.gap), converged)


@dataclass(frozen=True)
class RadiusResult:
    value: float
    sigma: np.ndarray
    lower: float
    weights: np.ndarray

    @property
    def gap(self) -> float:
        return self.value - self.lower


def divergence_radius(W: CqChannel, alpha: float, variant="sandwiched",
                      config: Config | None = None, strict: bool = True) -> RadiusResult:
    """min over sigma of max_x D_alpha(W(x)||sigma), with a certified lower bound.

    The upper value comes from the epigraph problem min t s.t. D_x(sigma) <= t.
    Nonnegative weights on the active letters that cancel the gradient give
    an input distribution P, and chi_{alpha,2}(W, P) <= radius is the bound.
    """
    cfg = _cfg(config)
    variant = DivergenceVariant.parse(variant)
    alpha = float(alpha)
    k = len(W)
    if k == 1:
        return RadiusResult(0.0, np.array(W.outputs[0]), 0.0, np.ones(1))
    if math.isinf(alpha):
        value = capacity_infinity(W, variant, cfg)
        return RadiusResult(value, np.eye(W.dim, dtype=complex) / W.dim, value, np.full(k, 1.0 / k))
    if alpha != 1:
        check_alpha_range(alpha, variant)
    outs = _Outputs(W.outputs, cfg)
    param = _StateParam(W.dim)

    def divs(theta):
        log_s, V = param.spectral(theta)
        return np.array([outs.divergence(i, log_s, V, alpha, variant) for i in range(k)])

    best = None
    for theta0 in _starts(param, W, np.full(k, 1.0 / k)):
        x0 = np.append(theta0, np.max(divs(theta0)) + 1e-3)
        cons = {"type": "ineq", "fun": lambda x: x[-1] - divs(x[:-1]),
                "jac": lambda x: np.hstack([-_jac(divs, x[:-1]), np.ones((k, 1))])}
        res = minimize(lambda x: x[-1], x0, jac=lambda x: np.eye(x.size)[-1], method="SLSQP",
                       constraints=[cons], options={"ftol": 1e-12, "maxiter": cfg.opt_maxiter})
        val = float(np.max(divs(res.x[:-1])))
        if best is None or val < best[0]:
            best = (val, res.x[:-1])
    value, theta = best
    D = divs(theta)
    J = _jac(divs, theta)
    active = np.flatnonzero(D >= value - 1e-5)
    # nonnegative weights on the active letters, summing to one, cancelling the gradient
    A = np.vstack([J[active].T, 1e3 * np.ones(active.size)])
    b = np.append(np.zeros(J.shape[1]), 1e3)
    x, _ = nnls(A, b)
    weights = np.zeros(k)
    weights[active] = x / x.sum()
    if alpha == 1:
        lower = holevo_quantity(W, weights)
    else:
        lower = chi_alpha(W, weights, alpha, variant, 2, config=cfg, strict=False).value
    result = RadiusResult(value, param.state(theta), float(lower), weights)
    if strict and result.gap > cfg.radius_gap_tol:
        raise NonConvergence(f"radius gap {result.gap:.3e} above tolerance", result.gap, value)
    return result


def _jac(vector_fun, x, h=1e-6):
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((vector_fun(x + e) - vector_fun(x - e)) / (2 * h))
    return np.array(cols).T


# ---------------------------------------------------------------- alpha = infinity

def capacity_infinity(W: CqChannel, variant="sandwiched", config: Config | None = None) -> float:
    """chi_inf(W) = min_sigma max_x D_inf(W(x)||sigma).

    sandwiched: log min{Tr S : S >= W(x) for all x} as a semidefinite program.
    flat: min over H of log Tr e^H subject to compress_x(H) >= log W(x) on each support.
    petz: only for commuting outputs, where it equals the classical value.
    """
    cfg = _cfg(config)
    variant = DivergenceVariant.parse(variant)
    if variant is PETZ:
        if not W.commuting():
            raise UnsupportedAlphaVariant("petz chi_inf is only available for commuting outputs")
        variant = SANDWICHED
    if variant is SANDWICHED:
        return _dmax_radius(W)
    return _flat_infinity(W, None, cfg)


def _dmax_radius(W: CqChannel) -> float:
    if W.commuting():
        # common eigenbasis: the optimal S is the entrywise maximum of the spectra
        _, U = np.linalg.eigh(sum((i + 1) * 0.37 * S for i, S in enumerate(W.outputs)))
        diag = np.array([np.real(np.diag(dagger(U) @ S @ U)) for S in W.outputs])
        return math.log(float(np.sum(np.max(diag, axis=0))))
    import cvxpy as cp
    d = W.dim
    S = cp.Variable((d, d), hermitian=True)
    cons = [S - S_x >> 0 for S_x in W.outputs]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(S))), cons)
    prob.solve(solver=cp.CLARABEL)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise NonConvergence(f"D_max radius SDP ended with status {prob.status}")
    return math.log(float(prob.value))


def _flat_infinity(W: CqChannel, P, cfg: Config) -> float:
    """Flat D_inf radius (P None) or the form-2 value sum_x P(x) D_inf^flat (P given).

    With sigma = e^H / Tr e^H, D_inf^flat(W(x)||sigma) = lambda_max(log W(x) - U_x^+ H U_x)
    + log Tr e^H on the support U_x, convex in H; solved as an epigraph problem.
    """
    d, k = W.dim, len(W)
    spectra = [psd_spectrum(S, cfg) for S in W.outputs]
    param = _StateParam(d)
    weights = None if P is None else as_distribution(W, P, cfg)
    letters = range(k) if weights is None else [i for i in range(k) if weights[i] > 0]
    m = param.size + 1  # H carries a trace part here

    def H_of(x):
        H = np.tensordot(x[:param.size], param.basis, 1) if param.size else np.zeros((d, d))
        return H + x[param.size] * np.eye(d) / math.sqrt(d)

    def slack(x, t):
        H = H_of(x)
        out = []
        for j, i in enumerate(letters):
            sp = spectra[i]
            K = dagger(sp.vectors) @ H @ sp.vectors - np.diag(sp.log_values)
            out.append(np.linalg.eigvalsh((K + dagger(K)) / 2)[0] + t[j if weights is not None else 0])
        return np.array(out)

    def log_tr_exp(x):
        h = np.linalg.eigvalsh(H_of(x))
        return float(logsumexp(h))

    nt = len(letters) if weights is not None else 1
    wt = np.array([weights[i] for i in letters]) if weights is not None else np.ones(1)
    x0 = np.zeros(m + nt)
    x0[m:] = max(0.0, -float(np.min(slack(x0[:m], np.zeros(nt))))) + 1e-3
    res = minimize(lambda x: wt @ x[m:] + log_tr_exp(x[:m]), x0, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": lambda x: slack(x[:m], x[m:])}],
                   options={"ftol": 1e-13, "maxiter": cfg.opt_maxiter})
    x = res.x
    # tighten t to the constraint boundary so the reported value is feasible
    short = np.minimum(slack(x[:m], x[m:]), 0.0)
    t = x[m:] - (short if weights is not None else short.min())
    return float(wt @ t + log_tr_exp(x[:m]))


def chi_infinity_form2(W: CqChannel, P=None, variant="flat", config: Config | None = None) -> float:
    """min_sigma sum_x P(x) D_inf(W(x)||sigma) (flat family)."""
    variant = DivergenceVariant.parse(variant)
    if variant is not FLAT:
        raise UnsupportedAlphaVariant("only the flat form-2 value at alpha = inf is provided")
    return _flat_infinity(W, as_distribution(W, P), _cfg(config))


# ---------------------------------------------------------------- products and pinching

def product_channel(W: CqChannel, n: int, config: Config | None = None) -> CqChannel:
    """n-fold i.i.d. extension with labels joined by commas."""
    cfg = _cfg(config)
    if len(W) ** n > cfg.alphabet_cap:
        raise DimensionCap(f"alphabet size {len(W)}^{n} exceeds the cap")
    if W.dim ** n > cfg.dim_cap:
        raise DimensionCap(f"output dimension {W.dim}^{n} exceeds the cap")
    labels, outputs = [], []
    for word in itertools.product(range(len(W)), repeat=n):
        labels.append(",".join(W.labels[i] for i in word))
        outputs.append(tensor(*[W.outputs[i] for i in word]))
    return CqChannel.from_states(outputs, labels, cfg)


def product_distribution(P: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, P)
    return out


def pinched_product_channel(W: CqChannel, n: int, config: Config | None = None) -> CqChannel:
    """Outputs E_n(W(x_1) (x) ... (x) W(x_n)) with E_n the universal pinching."""
    cfg = _cfg(config)
    Wn = product_channel(W, n, cfg)
    E = universal_pinching(n, W.dim, cfg.dim_cap, cfg)
    return CqChannel.from_states([pinch(E, S) for S in Wn.outputs], Wn.labels, cfg)
