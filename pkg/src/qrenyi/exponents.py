"""Strong converse exponents of classical-quantum and quantum channels.

The converse Hoeffding capacity is sup over alpha > 1 of
(alpha-1)/alpha * (R - chi_alpha(W)). It is evaluated in delta = (alpha-1)/alpha
on a fixed grid, refined by golden-section search, and compared against the
delta -> 1 endpoint R - chi_inf(W) when that limit is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import logsumexp

from .channels import (CqChannel, _central_grad, _jac, as_distribution, capacity_infinity,
                       chi_infinity_form2, chi_alpha, divergence_radius, holevo_quantity,
                       renyi_capacity, traceless_basis)
from .config import Config, get_config
from .divergences import FLAT, INF, PETZ, SANDWICHED, DivergenceVariant, d_alpha
from .errors import InputError, InvalidAlphaRange, NonConvergence
from .operators import dagger, psd_spectrum


def _cfg(config):
    return get_config() if config is None else config


# ---------------------------------------------------------------- delta supremum

@dataclass(frozen=True)
class SupResult:
    value: float
    alpha_star: float

    @property
    def delta_star(self) -> float:
        return 1.0 - 1.0 / self.alpha_star if math.isfinite(self.alpha_star) else 1.0


def sup_over_alpha(R: float, chi: Callable[[float], float], chi_inf: Callable[[], float] | None,
                   config: Config | None = None) -> SupResult:
    """sup over alpha > 1 of (alpha-1)/alpha (R - chi(alpha)).

    ``chi`` must be nondecreasing in alpha. The grid-first search does not
    assume the delta-objective is unimodal.
    """
    cfg = _cfg(config)
    memo: dict[float, float] = {}

    def g(delta):
        if delta not in memo:
            memo[delta] = delta * (R - chi(1.0 / (1.0 - delta)))
        return memo[delta]

    deltas = np.linspace(cfg.delta_min, cfg.delta_max, cfg.delta_grid)
    values = np.array([g(float(d)) for d in deltas])
    i = int(np.argmax(values))
    best_delta, best = float(deltas[i]), float(values[i])
    if 0 < i < len(deltas) - 1:
        res = minimize_scalar(lambda d: -g(float(d)), method="golden",
                              bracket=(deltas[i - 1], deltas[i], deltas[i + 1]),
                              options={"xtol": 1e-6})
        if -res.fun > best:
            best_delta, best = float(res.x), float(-res.fun)
    elif i == 0 and best > 0:
        res = minimize_scalar(lambda d: -g(float(d)), method="bounded",
                              bounds=(cfg.delta_min * 1e-3, deltas[1]), options={"xatol": 1e-9})
        if -res.fun > best:
            best_delta, best = float(res.x), float(-res.fun)
    alpha_star = 1.0 / (1.0 - best_delta)
    if chi_inf is not None and i >= len(deltas) - 2:
        end = R - chi_inf()
        if end >= best:
            best, alpha_star = end, INF
    if best <= 0:
        return SupResult(0.0, 1.0)
    return SupResult(best, alpha_star)


class CapacityCurve:
    """Memoized alpha -> chi_alpha(W) for one channel and variant."""

    def __init__(self, W: CqChannel, variant="sandwiched", config: Config | None = None):
        self.W = W
        self.variant = DivergenceVariant.parse(variant)
        self.config = _cfg(config)
        self._values: dict[float, float] = {}
        self._inf: float | None = None

    def __call__(self, alpha: float) -> float:
        alpha = float(alpha)
        if alpha not in self._values:
            if self.variant is PETZ:
                value = renyi_capacity(self.W, alpha, PETZ, 1, "sibson", self.config).value
            else:
                # the radius equals the capacity and carries its own lower bound
                res = divergence_radius(self.W, alpha, self.variant, self.config, strict=False)
                if res.gap <= self.config.radius_gap_tol:
                    value = res.value
                else:
                    value = renyi_capacity(self.W, alpha, self.variant, 1, "optimize", self.config).value
            self._values[alpha] = value
        return self._values[alpha]

    def infinity(self) -> float:
        if self._inf is None:
            self._inf = capacity_infinity(self.W, self.variant, self.config)
        return self._inf

    @property
    def has_infinity(self) -> bool:
        return self.variant is not PETZ or self.W.commuting()


@dataclass(frozen=True)
class HoeffdingResult:
    value: float
    alpha_star: float
    rate: float
    variant: DivergenceVariant


def hoeffding_capacity(W: CqChannel, R: float, variant="sandwiched", curve: CapacityCurve | None = None,
                       config: Config | None = None) -> HoeffdingResult:
    """Converse Hoeffding capacity sup_{alpha>1} (alpha-1)/alpha (R - chi_alpha(W)).

    The petz family uses the closed-form minimizer, which is exact for all
    alpha > 1, and reaches alpha = inf only for commuting outputs.
    """
    if R < 0:
        raise InputError("rate must be nonnegative")
    curve = CapacityCurve(W, variant, config) if curve is None else curve
    res = sup_over_alpha(float(R), curve, curve.infinity if curve.has_infinity else None, config)
    return HoeffdingResult(res.value, res.alpha_star, float(R), curve.variant)


@dataclass(frozen=True)
class ScResult:
    """Strong converse exponent with its success-probability certificate."""

    value: float
    alpha_star: float
    chi_at_alpha_star: float
    rate: float

    def log_success_bound(self, n: int, log_M: float) -> float:
        """Upper bound on log P_success of any code with M codewords and n uses.

        Holds at every alpha > 1: log P_s <= -(alpha-1)/alpha (log M - n chi_alpha).
        """
        if self.alpha_star <= 1:
            return 0.0
        delta = 1.0 if math.isinf(self.alpha_star) else 1 - 1 / self.alpha_star
        return min(0.0, -delta * (log_M - n * self.chi_at_alpha_star))


def sc_exponent(W: CqChannel, R: float, curve: CapacityCurve | None = None,
                config: Config | None = None) -> ScResult:
    """sc(R, W): the sandwiched converse Hoeffding capacity."""
    curve = CapacityCurve(W, SANDWICHED, config) if curve is None else curve
    res = hoeffding_capacity(W, R, SANDWICHED, curve, config)
    if res.alpha_star <= 1:
        chi = math.nan
    else:
        chi = curve.infinity() if math.isinf(res.alpha_star) else curve(res.alpha_star)
    return ScResult(res.value, res.alpha_star, chi, float(R))


@dataclass(frozen=True)
class ExponentCurve:
    samples: tuple  # (R, value, alpha_star)
    variant: DivergenceVariant

    def to_csv(self) -> str:
        from .io import format_number
        lines = ["R,value,alpha_star"]
        lines += [",".join(format_number(v) for v in row) for row in self.samples]
        return "\n".join(lines) + "\n"


def exponent_curve(W: CqChannel, rates: Sequence[float], variant="sandwiched",
                   config: Config | None = None) -> ExponentCurve:
    curve = CapacityCurve(W, variant, config)
    samples = []
    for R in sorted(float(r) for r in rates):
        res = hoeffding_capacity(W, R, variant, curve, config)
        samples.append((R, res.value, res.alpha_star))
    return ExponentCurve(tuple(samples), curve.variant)


# ---------------------------------------------------------------- Dueck-Korner

class _SupportParam:
    """V(x) = U exp(H) U^dagger / Tr on the support U of W(x)."""

    def __init__(self, W_x: np.ndarray, config=None):
        sp = psd_spectrum(W_x, config)
        self.U = sp.vectors
        self.log_w = sp.log_values
        self.w = sp.values
        self.basis = traceless_basis(sp.rank) if sp.rank > 1 else np.zeros((0, 1, 1))

    @property
    def size(self) -> int:
        return self.basis.shape[0]

    def local(self, theta):
        r = self.U.shape[1]
        H = np.tensordot(theta, self.basis, 1) if self.size else np.zeros((r, r))
        h, Z = np.linalg.eigh((H + dagger(H)) / 2)
        return h - logsumexp(h), Z

    def state(self, theta):
        log_v, Z = self.local(theta)
        UZ = self.U @ Z
        S = (UZ * np.exp(log_v)) @ dagger(UZ)
        return (S + dagger(S)) / 2

    def divergence_to_source(self, theta) -> float:
        """D(V(x) || W(x)) computed inside the support."""
        log_v, Z = self.local(theta)
        v = np.exp(log_v)
        cross = (np.abs(Z) ** 2).T @ self.log_w
        return float(v @ log_v - v @ cross)

    def start(self, floor: float = 0.0) -> np.ndarray:
        if self.size == 0:
            return np.zeros(0)
        lw = np.log((1 - floor) * self.w + floor / self.w.size)
        L = np.diag(lw - lw.mean()).astype(complex)
        return np.real(np.einsum("kij,ji->k", self.basis, L))


def _entropy(S) -> float:
    w = np.linalg.eigvalsh((S + dagger(S)) / 2)
    w = w[w > 1e-300]
    return float(-(w @ np.log(w)))


@dataclass(frozen=True)
class DueckKornerResult:
    value: float
    dummy: CqChannel
    conditional_divergence: float
    holevo: float


def dueck_korner_F(W: CqChannel, P, R: float, config: Config | None = None,
                   strict: bool = True) -> DueckKornerResult:
    """F(P, R, W) = min over V of D(V||W|P) + |R - chi(V, P)|_+.

    Each V(x) is parametrized on the support of W(x); the kink of |.|_+ is
    handled as an epigraph problem (min s with s >= D and s >= D + R - chi).
    """
    cfg = _cfg(config)
    w = as_distribution(W, P, cfg)
    letters = [i for i in range(len(W)) if w[i] > 0]
    params = [_SupportParam(W.outputs[i], cfg) for i in letters]
    sizes = [p.size for p in params]
    cuts = np.cumsum([0] + sizes)
    pw = w[letters]

    def split(x):
        return [x[cuts[j]:cuts[j + 1]] for j in range(len(letters))]

    def parts(x):
        thetas = split(x)
        D = sum(p_ * par.divergence_to_source(t) for p_, par, t in zip(pw, params, thetas))
        states = [par.state(t) for par, t in zip(params, thetas)]
        mean = sum(p_ * S for p_, S in zip(pw, states))
        chi = _entropy(mean) - sum(p_ * _entropy(S) for p_, S in zip(pw, states))
        return D, chi

    def build(x):
        V = [np.array(S) for S in W.outputs]
        for i, par, t in zip(letters, params, split(x)):
            V[i] = par.state(t)
        return CqChannel.from_states(V, W.labels, cfg)

    n = int(cuts[-1])
    if n == 0:
        D, chi = parts(np.zeros(0))
        return DueckKornerResult(D + max(0.0, R - chi), build(np.zeros(0)), D, chi)

    def cons_fun(x):
        D, chi = parts(x[:-1])
        return np.array([x[-1] - D, x[-1] - D - (R - chi)])

    best = None
    for floor in (0.0, 0.5):
        theta0 = np.concatenate([p.start(floor) for p in params])
        D0, chi0 = parts(theta0)
        x0 = np.append(theta0, D0 + max(0.0, R - chi0) + 1e-3)
        res = minimize(lambda x: x[-1], x0, jac=lambda x: np.eye(x.size)[-1], method="SLSQP",
                       constraints=[{"type": "ineq", "fun": cons_fun,
                                     "jac": lambda x: _jac(cons_fun, x)}],
                       options={"ftol": 1e-13, "maxiter": cfg.opt_maxiter})
        D, chi = parts(res.x[:-1])
        val = D + max(0.0, R - chi)
        if best is None or val < best[0]:
            best = (val, res.x[:-1], D, chi, res.success)
    val, x, D, chi, ok = best
    if strict and not ok and val > R + 1e-9:
        raise NonConvergence("Dueck-Korner minimization failed", value=val)
    return DueckKornerResult(float(val), build(x), float(D), float(chi))


def flat_hoeffding_form2(W: CqChannel, P, R: float, config: Config | None = None) -> SupResult:
    """sup_{alpha>1} (alpha-1)/alpha (R - chi^flat_{alpha,2}(W, P))."""
    cfg = _cfg(config)
    w = as_distribution(W, P, cfg)
    warm = {"theta": None}

    def chi(alpha):
        res = chi_alpha(W, w, alpha, FLAT, 2, warm=warm["theta"], config=cfg, strict=False)
        warm["theta"] = res.theta
        return res.value

    return sup_over_alpha(float(R), chi, lambda: chi_infinity_form2(W, w, FLAT, cfg), cfg)


def g_objective(P, delta: float, sigma, V: CqChannel, W: CqChannel, R: float,
                config: Config | None = None) -> float:
    """G = D(V||W|P) + delta (R - D(V||sigma|P))."""
    from .divergences import relative_entropy
    if not 0 <= delta <= 1:
        raise InputError("delta must lie in [0, 1]")
    w = as_distribution(W, P, config)
    DW = sum(p * relative_entropy(Vx, Wx, config) for p, Vx, Wx in zip(w, V.outputs, W.outputs) if p > 0)
    Ds = sum(p * relative_entropy(Vx, sigma, config) for p, Vx in zip(w, V.outputs) if p > 0)
    return float(DW + delta * (R - Ds))


@dataclass(frozen=True)
class GMinimum:
    numeric: float
    closed_form: float
    minimizer: CqChannel


def g_min_over_v(P, delta: float, sigma, W: CqChannel, R: float,
                 config: Config | None = None) -> GMinimum:
    """min over V of G, numerically and via delta R - delta sum P D^flat_{1/(1-delta)}(W(x)||sigma)."""
    cfg = _cfg(config)
    w = as_distribution(W, P, cfg)
    s = psd_spectrum(sigma, cfg)
    V = [np.array(S) for S in W.outputs]
    total = 0.0
    for i in np.flatnonzero(w > 0):
        par = _SupportParam(W.outputs[i], cfg)
        # D(V||sigma) for V supported inside supp W(x)
        log_sigma = s.log()

        def f(theta, par=par):
            Vx = par.state(theta)
            return par.divergence_to_source(theta) - delta * (-_entropy(Vx) - np.trace(Vx @ log_sigma).real)

        if par.size:
            res = minimize(f, par.start(), jac=lambda t, f=f: _central_grad(f, t), method="BFGS",
                           options={"gtol": cfg.opt_gtol, "maxiter": cfg.opt_maxiter})
            theta, val = res.x, res.fun
        else:
            theta, val = np.zeros(0), f(np.zeros(0))
        V[i] = par.state(theta)
        total += w[i] * val
    numeric = delta * R + total
    if delta == 0:
        closed = 0.0
    elif delta >= 1:
        raise InputError("delta = 1 has no finite closed form here")
    else:
        alpha = 1.0 / (1.0 - delta)
        closed = delta * R - delta * sum(w[i] * d_alpha(W.outputs[i], sigma, alpha, FLAT, cfg)
                                         for i in np.flatnonzero(w > 0))
    return GMinimum(float(numeric), float(closed), CqChannel.from_states(V, W.labels, cfg))


# ---------------------------------------------------------------- quantum channels

@dataclass(frozen=True)
class KrausChannel:
    kraus: tuple

    @classmethod
    def from_kraus(cls, ops: Sequence, tol: float = 1e-9) -> "KrausChannel":
        ops = tuple(np.asarray(K, dtype=complex) for K in ops)
        if not ops or any(K.ndim != 2 for K in ops) or len({K.shape for K in ops}) != 1:
            raise InputError("Kraus operators must be matrices of one common shape")
        completeness = sum(dagger(K) @ K for K in ops)
        if np.max(np.abs(completeness - np.eye(ops[0].shape[1]))) > tol:
            raise InputError("Kraus operators are not trace preserving")
        for K in ops:
            K.setflags(write=False)
        return cls(ops)

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        out = sum(K @ rho @ dagger(K) for K in self.kraus)
        return (out + dagger(out)) / 2


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel.from_kraus([np.eye(d)])


def depolarizing_channel(p: float, d: int = 2) -> KrausChannel:
    """rho -> (1-p) rho + p Tr(rho) I/d, via the Weyl (Pauli) Kraus set."""
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = []
    for a in range(d):
        for b in range(d):
            c = 1 - p + p / d ** 2 if a == b == 0 else p / d ** 2
            ops.append(math.sqrt(c) * np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b))
    return KrausChannel.from_kraus(ops)


def renyi_entropy(sigma, alpha: float) -> float:
    """H_alpha(sigma) = log Tr sigma^alpha / (1 - alpha); von Neumann at 1, -log lambda_max at inf."""
    w = np.linalg.eigvalsh((np.asarray(sigma) + dagger(np.asarray(sigma))) / 2)
    w = w[w > 1e-15 * w[-1]]
    if math.isinf(alpha):
        return -math.log(w[-1])
    if alpha == 1:
        return float(-(w @ np.log(w)))
    return float(logsumexp(alpha * np.log(w))) / (1 - alpha)


@dataclass(frozen=True)
class MinEntropyResult:
    value: float
    input_state: np.ndarray


def _pure(x, d):
    v = x[:d] + 1j * x[d:]
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def min_output_alpha_entropy(Phi: KrausChannel, alpha: float, n_random: int = 8, seed: int = 0,
                             config: Config | None = None) -> MinEntropyResult:
    """min over pure inputs of H_alpha(Phi(psi)), multistarted on the input sphere."""
    cfg = _cfg(config)
    alpha = float(alpha)
    if not alpha > 1:
        raise InvalidAlphaRange("the minimum output entropy is defined here for alpha > 1")
    d = Phi.d_in
    rng = np.random.default_rng(seed)
    starts = []
    for k in range(d):
        e = np.zeros(2 * d)
        e[k] = 1.0
        starts.append(e)
    F = np.fft.fft(np.eye(d)) / math.sqrt(d)
    starts += [np.concatenate([F[:, k].real, F[:, k].imag]) for k in range(d)]
    starts += list(rng.standard_normal((n_random, 2 * d)))

    def f(x):
        return renyi_entropy(Phi(_pure(x, d)), alpha)

    best = None
    for x0 in starts:
        x0 = x0 + 1e-3 * rng.standard_normal(2 * d)
        res = minimize(f, x0, jac=lambda x: _central_grad(f, x, 1e-7), method="BFGS",
                       options={"gtol": cfg.opt_gtol, "maxiter": cfg.opt_maxiter})
        if best is None or res.fun < best.fun:
            best = res
    return MinEntropyResult(float(max(best.fun, 0.0)), _pure(best.x, d))


def standard_pure_inputs(d: int) -> list[np.ndarray]:
    """Computational and Fourier basis states, plus the y-type qubit states for d = 2."""
    states = [np.outer(e, e) for e in np.eye(d)]
    F = np.fft.fft(np.eye(d)) / math.sqrt(d)
    states += [np.outer(F[:, k], F[:, k].conj()) for k in range(d)]
    if d == 2:
        for v in (np.array([1, 1j]) / math.sqrt(2), np.array([1, -1j]) / math.sqrt(2)):
            states.append(np.outer(v, v.conj()))
    return states


def induced_cq_channel(Phi: KrausChannel, inputs: Sequence | None = None) -> CqChannel:
    """Classical-quantum channel x -> Phi(rho_x) over a finite list of input states."""
    inputs = standard_pure_inputs(Phi.d_in) if inputs is None else list(inputs)
    return CqChannel.from_states([Phi(rho) for rho in inputs])


@dataclass(frozen=True)
class KWResult:
    lower: float
    upper: float
    sc: float | None
    alpha_star: float


def kw_exponent(Phi: KrausChannel, R: float, alpha_grid: Sequence[float] | None = None,
                kw_class: bool = False, inputs: Sequence | None = None,
                config: Config | None = None) -> KWResult:
    """Single-letter bracket on the strong converse exponent of a quantum channel.

    upper: sup_{alpha>1} (alpha-1)/alpha (R - chi*_alpha) with chi*_alpha the
    single-letter capacity. For ``kw_class`` channels (covariant with additive
    minimum output entropy, asserted by the caller) chi*_alpha equals
    log d_out - H^min_alpha, and the bracket closes: lower = upper = sc.
    Otherwise chi*_alpha is evaluated on the cq-channel induced by ``inputs``,
    which can only overestimate the upper bound, and the lower bound is the
    trivial max(0, R - log d_out).
    """
    cfg = _cfg(config)
    if not R > 0:
        raise InputError("rate must be positive")
    log_d = math.log(Phi.d_out)
    if kw_class:
        cache: dict[float, float] = {}

        def chi(alpha):
            if alpha not in cache:
                cache[alpha] = log_d - min_output_alpha_entropy(Phi, alpha, config=cfg).value
            return cache[alpha]

        chi_inf = lambda: chi(INF)  # noqa: E731
    else:
        curve = CapacityCurve(induced_cq_channel(Phi, inputs), SANDWICHED, cfg)
        chi, chi_inf = curve, curve.infinity
    if alpha_grid is not None:
        best, a_best = 0.0, 1.0
        for a in alpha_grid:
            a = float(a)
            if a <= 1:
                continue
            val = (1 - 1 / a) * (R - chi(a)) if math.isfinite(a) else R - chi_inf()
            if val > best:
                best, a_best = val, a
        res = SupResult(best, a_best)
    else:
        res = sup_over_alpha(float(R), chi, chi_inf, cfg)
    if kw_class:
        return KWResult(res.value, res.value, res.value, res.alpha_star)
    return KWResult(max(0.0, R - log_d), res.value, None, res.alpha_star)
