"""Seeded verification suite over the invariants of every module.

Each group returns a list of checks; a check records the worst observed
violation against its tolerance. ``verify_suite`` bundles them into a JSON
report and a one-line-per-group summary.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import channels as ch
from . import exponents as ex
from . import schur_weyl as sw
from .divergences import FLAT, PETZ, SANDWICHED, d_alpha, hellinger_arc, q_alpha, relative_entropy
from .divergences import (pinched_divergence, psi_alpha, variational_identity,
                          variational_objective)
from .operators import (dagger, distinct_eigenvalue_count, pinch, pinching_from, psd_leq,
                        tensor)
from .sampling import random_psd, random_state

VARIANTS = (PETZ, SANDWICHED, FLAT)


@dataclass
class Check:
    name: str
    passed: bool
    worst: float
    tol: float
    samples: int = 0

    def as_dict(self):
        d = asdict(self)
        for k in ("worst", "tol"):
            d[k] = None if not math.isfinite(d[k]) else d[k]
        return d


@dataclass
class GroupReport:
    group: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)


def _upper(name, violations, tol) -> Check:
    """Pass when every violation is at most ``tol``."""
    worst = float(max(violations)) if len(violations) else 0.0
    return Check(name, bool(worst <= tol), worst, tol, len(violations))


def _pair(rng, d):
    return random_state(d, rng=rng), random_state(d, rng=rng)


def _qubit_channel(rng, k=2):
    return ch.CqChannel.from_states([random_state(2, rng=rng) for _ in range(k)])


def _bsc(eps=0.1):
    return ch.CqChannel.from_states([np.diag([1 - eps, eps]), np.diag([eps, 1 - eps])])


# ---------------------------------------------------------------- groups

def group_ordering(rng, n_pairs=100):
    above, below = [], []
    for _ in range(n_pairs):
        rho, sigma = _pair(rng, int(rng.choice([2, 3])))
        for a in (1.5, 2.0, 4.0):
            fl, sa, pe = (d_alpha(rho, sigma, a, v) for v in (FLAT, SANDWICHED, PETZ))
            above += [fl - sa, sa - pe]
        for a in (0.3, 0.7):
            fl, sa, pe = (d_alpha(rho, sigma, a, v) for v in (FLAT, SANDWICHED, PETZ))
            below += [sa - pe, pe - fl]
    return [_upper("flat <= sandwiched <= petz for alpha > 1", above, 1e-9),
            _upper("sandwiched <= petz <= flat for alpha < 1", below, 1e-9)]


def group_monotonicity(rng, n_pairs=30):
    grid = np.round(np.arange(0.2, 5.01, 0.2), 10)
    out = []
    for v in VARIANTS:
        viol = []
        for _ in range(n_pairs):
            rho, sigma = _pair(rng, 2)
            vals = [d_alpha(rho, sigma, a, v) for a in grid if a != 1]
            viol += list(-np.diff(vals))
        out.append(_upper(f"{v.value} D_alpha nondecreasing in alpha", viol, 1e-9))
    return out


def group_additivity(rng, n_pairs=20):
    out = []
    for v in VARIANTS:
        viol = []
        for _ in range(n_pairs):
            rho, sigma = _pair(rng, 2)
            for a in (0.5, 2.0):
                one = d_alpha(rho, sigma, a, v)
                two = d_alpha(tensor(rho, rho), tensor(sigma, sigma), a, v)
                viol.append(abs(two - 2 * one))
        out.append(_upper(f"{v.value} additive on tensor squares", viol, 1e-8))
    return out


def group_scaling(rng, n_pairs=20):
    viol = []
    for _ in range(n_pairs):
        rho, sigma = _pair(rng, 2)
        lam = float(rng.uniform(0.2, 5.0))
        for v in VARIANTS:
            for a in (0.6, 2.0):
                base = d_alpha(rho, sigma, a, v)
                viol.append(abs(d_alpha(lam * rho, sigma, a, v) - base - math.log(lam)))
                viol.append(abs(d_alpha(rho, lam * sigma, a, v) - base + math.log(lam)))
    return [_upper("log-shift under scaling of rho and sigma", viol, 1e-9)]


def group_positivity(rng, n_pairs=50):
    neg, small = [], []
    for _ in range(n_pairs):
        rho, sigma = _pair(rng, int(rng.choice([2, 3])))
        for v in VARIANTS:
            for a in (0.5, 2.0):
                val = d_alpha(rho, sigma, a, v)
                neg.append(-val)
                if np.abs(np.linalg.eigvalsh(rho - sigma)).sum() >= 1e-6:
                    small.append(1.0 if val < 1e-9 else 0.0)
        rho = random_state(2, rng=rng)
        neg.append(abs(d_alpha(rho, rho, 2.0, SANDWICHED)))
    return [_upper("D >= 0 on states, zero on equal pairs", neg, 1e-9),
            _upper("D > 1e-9 whenever rho != sigma", small, 0.0)]


def group_antitonicity(rng, n_pairs=30):
    ranges = {PETZ: (0.3, 0.7), SANDWICHED: (0.5, 1.5, 3.0), FLAT: (0.3, 2.0, 4.0)}
    viol = []
    for _ in range(n_pairs):
        rho, sigma = _pair(rng, 2)
        bigger = sigma + 0.5 * random_psd(2, rng=rng)
        for v, alphas in ranges.items():
            for a in alphas:
                viol.append(d_alpha(rho, bigger, a, v) - d_alpha(rho, sigma, a, v))
    return [_upper("sigma' >= sigma lowers D", viol, 1e-9)]


def group_limit1(rng, n_pairs=50):
    viol = []
    for _ in range(n_pairs):
        rho, sigma = _pair(rng, 2)
        D = relative_entropy(rho, sigma)
        for v in VARIANTS:
            for a in (1 - 1e-4, 1 + 1e-4):
                viol.append(abs(d_alpha(rho, sigma, a, v) - D))
    W = _qubit_channel(rng)
    P = rng.dirichlet([1, 1])
    chi = ch.holevo_quantity(W, P)
    for v in VARIANTS:
        for form in (1, 2):
            viol.append(abs(ch.chi_alpha(W, P, 1 + 1e-4, v, form).value - chi))
    return [_upper("alpha -> 1 recovers the relative entropy and Holevo quantity", viol, 1e-3)]


def group_variational(rng, n_tau=200):
    rho, sigma = _pair(rng, 2)
    attain, ident = [], []
    for a in (0.5, 2.0):
        tau_a = hellinger_arc(rho, sigma, a)
        attain.append(abs(variational_objective(tau_a, rho, sigma, a) + psi_alpha(rho, sigma, a, FLAT)))
        for _ in range(n_tau // 2):
            ident.append(variational_identity(random_state(2, rng=rng), rho, sigma, a).residual)
    return [_upper("Hellinger arc attains -psi_flat", attain, 1e-8),
            _upper("objective = D(tau||tau_alpha) - psi_flat", ident, 1e-8)]


def group_pinching(rng, n=20):
    trace, idem, ineq, bound = [], [], [], []
    for _ in range(n):
        d = int(rng.choice([2, 3, 4]))
        vals = rng.choice([0.1, 0.2, 0.7], size=d)
        U = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))[0]
        sigma = (U * vals) @ dagger(U)
        E = pinching_from(sigma)
        X = random_psd(d, rng=rng)
        Y = pinch(E, X)
        trace.append(abs(np.trace(Y - X)))
        idem.append(np.max(np.abs(pinch(E, Y) - Y)))
        v = distinct_eigenvalue_count(sigma)
        ineq.append(-np.linalg.eigvalsh(v * Y - X)[0])
    for _ in range(3):
        rho, sigma = _pair(rng, 2)
        star = d_alpha(rho, sigma, 2.0, SANDWICHED)
        for m in (1, 2, 3):
            bound.append(pinched_divergence(rho, sigma, 2.0, m) - star)
    return [_upper("pinching preserves trace", trace, 4e-12),
            _upper("pinching is idempotent", idem, 1e-10),
            _upper("X <= v(sigma) E(X)", ineq, 1e-10),
            _upper("pinched petz <= sandwiched", bound, 1e-9)]


def group_schur(rng, n_states=10):
    comp, rank, dom, count = [], [], [], []
    for n, d in ((2, 2), (3, 2), (4, 2), (2, 3)):
        dec = sw.isotypic_projections(n, d)
        D = d ** n
        total = sum(dec.projectors)
        comp.append(np.max(np.abs(total - np.eye(D))))
        for i, P in enumerate(dec.projectors):
            comp.append(np.max(np.abs(P @ P - P)))
            for Q in dec.projectors[i + 1:]:
                comp.append(np.max(np.abs(P @ Q)))
            rank.append(abs(round(np.trace(P).real) - dec.ranks[i]))
        sigma_u = sw.universal_symmetric_state(n, d)
        v = sw.v_nd(n, d)
        for _ in range(n_states):
            omega = sw.random_symmetric_state(n, d, rng)
            dom.append(0.0 if psd_leq(omega, v * sigma_u, 1e-9) else 1.0)
        count.append(max(0, distinct_eigenvalue_count(sigma_u) - v))
    return [_upper("isotypic projectors complete and orthogonal", comp, 1e-9),
            _upper("rank = dim U * dim V", rank, 0),
            _upper("symmetric states dominated by v * sigma_u", dom, 0),
            _upper("distinct eigenvalues of sigma_u <= v", count, 0)]


def group_sibson(rng, n_channels=5):
    viol = []
    for _ in range(n_channels):
        W = _qubit_channel(rng)
        P = rng.dirichlet([1, 1])
        for a in (1.5, 2.0):
            viol.append(abs(ch.chi_alpha(W, P, a, PETZ, 1).value - ch.sibson_value(W, P, a)))
    return [_upper("petz chi optimizer matches the closed form", viol, 1e-6)]


def group_capacity(rng, n_channels=2):
    viol = []
    for _ in range(n_channels):
        W = _qubit_channel(rng)
        r = ch.divergence_radius(W, 2.0, SANDWICHED).value
        c1 = ch.renyi_capacity(W, 2.0, SANDWICHED, 1).value
        c2 = ch.renyi_capacity(W, 2.0, SANDWICHED, 2).value
        viol += [abs(r - c1), abs(r - c2), abs(c1 - c2)]
    return [_upper("radius = sup chi_1 = sup chi_2 (sandwiched, alpha=2)", viol, 2e-4)]


def group_conversion(rng, n_channels=5):
    viol = []
    for _ in range(n_channels):
        W = _qubit_channel(rng)
        P = rng.dirichlet([1, 1])
        chi = ch.holevo_quantity(W, P)
        for R in (chi - 0.2, chi + 0.2):
            F = ex.dueck_korner_F(W, P, R).value
            viol.append(abs(F - ex.flat_hoeffding_form2(W, P, R).value))
    return [_upper("F(P,R,W) = flat Hoeffding form-2 expression", viol, 5e-4)]


def classical_sc_oracle(eps: float, R: float) -> float:
    """Arimoto strong converse exponent of BSC(eps) with the uniform input."""
    from scipy.optimize import minimize_scalar

    def g(delta):
        a = 1 / (1 - delta)
        chi = math.log(2) - np.logaddexp(a * math.log(1 - eps), a * math.log(eps)) / (1 - a)
        return delta * (R - chi)

    grid = np.linspace(1e-4, 1 - 1e-6, 2001)
    vals = [g(t) for t in grid]
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda t: -g(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    end = R - (math.log(2) + math.log(1 - eps))
    return max(0.0, -res.fun, vals[i], end)


def group_classical(rng):
    W = _bsc(0.1)
    viol, same = [], []
    for R in (0.4, 0.6, 0.69):
        viol.append(abs(ex.sc_exponent(W, R).value - classical_sc_oracle(0.1, R)))
    h = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))
    zero = [ex.sc_exponent(W, math.log(2) - h - 0.05).value]
    vals = [ex.hoeffding_capacity(W, 0.6, v).value for v in VARIANTS]
    same.append(max(vals) - min(vals))
    return [_upper("commuting sc matches the classical oracle", viol, 1e-4),
            _upper("sc vanishes below capacity", zero, 0.0),
            _upper("variants coincide on commuting outputs", same, 1e-6)]


def group_kw(rng, rates=(0.45, 0.6, 0.8)):
    ident = ex.identity_channel(2)
    viol = [abs(ex.kw_exponent(ident, R, kw_class=True).sc - max(0.0, R - math.log(2)))
            for R in (0.5, 0.8, 1.0)]
    dep = ex.depolarizing_channel(0.2)
    induced = ex.induced_cq_channel(dep)
    pipe = [abs(ex.kw_exponent(dep, R, kw_class=True).sc - ex.sc_exponent(induced, R).value)
            for R in rates]
    return [_upper("identity channel sc = max(0, R - log 2)", viol, 1e-6),
            _upper("depolarizing: KW formula = induced cq-channel", pipe, 1e-3)]


def group_witness(rng):
    rho = 0.5 * np.ones((2, 2))
    sigma = np.diag([1 / 17, 16 / 17])
    E = pinching_from(sigma)
    margin = q_alpha(pinch(E, rho), sigma, 2.0, FLAT) - q_alpha(rho, sigma, 2.0, FLAT)
    return [Check("Q2 flat grows under pinching (margin > 1e-3)", bool(margin > 1e-3), margin, 1e-3, 1)]


GROUPS: dict[str, Callable] = {
    "ordering": group_ordering,
    "monotonicity": group_monotonicity,
    "additivity": group_additivity,
    "scaling": group_scaling,
    "positivity": group_positivity,
    "antitonicity": group_antitonicity,
    "limit1": group_limit1,
    "variational": group_variational,
    "pinching": group_pinching,
    "schur": group_schur,
    "sibson": group_sibson,
    "capacity": group_capacity,
    "conversion": group_conversion,
    "classical": group_classical,
    "kw": group_kw,
    "witness": group_witness,
}


@dataclass
class VerifyReport:
    seed: int
    groups: list

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.groups)

    def to_json(self) -> str:
        body = {"seed": self.seed, "passed": self.passed, "groups": [
            {"group": g.group, "passed": g.passed, "error": g.error,
             "checks": [c.as_dict() for c in g.checks]} for g in self.groups]}
        return json.dumps(body, indent=1, sort_keys=True)

    def summary(self) -> str:
        lines = []
        for g in self.groups:
            status = "PASS" if g.passed else "FAIL"
            detail = g.error or "; ".join(f"{c.name}: worst {c.worst:.3g} (tol {c.tol:g})"
                                          for c in g.checks if not c.passed)
            lines.append(f"{status} {g.group}" + (f"  [{detail}]" if detail else ""))
        lines.append(f"{sum(g.passed for g in self.groups)}/{len(self.groups)} groups passed")
        return "\n".join(lines)


def parse_selection(selection) -> list[str]:
    if selection is None or selection == "all":
        return list(GROUPS)
    names = selection.split(",") if isinstance(selection, str) else list(selection)
    names = [n.strip() for n in names if n.strip()]
    unknown = [n for n in names if n not in GROUPS]
    if unknown:
        from .errors import InputError
        raise InputError(f"unknown verification groups {unknown}; choose from {sorted(GROUPS)}")
    return names


def verify_suite(seed: int = 0, selection="all") -> VerifyReport:
    """Run the selected invariant groups, each with its own seeded generator."""
    groups = []
    order = list(GROUPS)
    for name in parse_selection(selection):
        # the stream depends only on (seed, group), not on what else was selected
        rng = np.random.default_rng([seed, order.index(name)])
        rep = GroupReport(name)
        t0 = time.perf_counter()
        try:
            rep.checks = GROUPS[name](rng)
        except Exception as exc:  # a crash is a failed group, not a crashed suite
            rep.error = f"{type(exc).__name__}: {exc}"
        rep.seconds = time.perf_counter() - t0
        groups.append(rep)
    return VerifyReport(int(seed), groups)
