"""Blow-up criterion: f_i, F, the divergence test and the power-law exponent rule.

Indices are 0-based: ``i`` in {0, 1} and ``j = 1 - i``.  ``a`` is the index of
the smaller stability index (``a = 0`` on ties) and ``b = 1 - a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dilation import SLOPE_THRESHOLD, CoefficientFn, Dilation, check_dilation_divergence, window_log_slope
from .errors import DomainError, ValidationError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True, eq=False)
class SystemParams:
    dim: int
    alpha: tuple
    beta: tuple
    g: tuple
    h: tuple

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValidationError(f"dim must be a positive integer, got {self.dim}", "dim")
        for name in ("alpha", "beta", "g", "h"):
            val = getattr(self, name)
            if len(val) != 2:
                raise ValidationError(f"{name} must be a pair", name)
            object.__setattr__(self, name, tuple(val))
        if not all(0 < a <= 2 for a in self.alpha):
            raise ValidationError(f"alpha must lie in (0, 2], got {self.alpha}", "alpha")
        if not all(b >= 1 for b in self.beta):
            raise ValidationError(f"beta must be >= 1, got {self.beta}", "beta")
        if not self.beta[0] * self.beta[1] > 1:
            raise ValidationError(f"need beta_1 * beta_2 > 1, got {self.beta}", "beta")
        for name in ("g", "h"):
            if not all(isinstance(c, CoefficientFn) for c in getattr(self, name)):
                raise ValidationError(f"{name} entries must be CoefficientFn", name)
        object.__setattr__(self, "_dil", (Dilation(self.g[0]), Dilation(self.g[1])))

    @classmethod
    def power_law(cls, dim, alpha, beta, rho=(1.0, 1.0), sigma=(0.0, 0.0)):
        """Coefficients ``g_i = rho_i t^{rho_i - 1}`` and ``h_i = t^{sigma_i}``."""
        g = tuple(CoefficientFn.power_law(r, r - 1.0) for r in rho)
        h = tuple(CoefficientFn.power_law(1.0, s) for s in sigma)
        return cls(dim, tuple(alpha), tuple(beta), g, h)

    @property
    def a(self):
        return 0 if self.alpha[0] <= self.alpha[1] else 1

    @property
    def b(self):
        return 1 - self.a

    def dilation(self, i):
        return self._dil[i]

    def swapped(self):
        return SystemParams(self.dim, self.alpha[::-1], self.beta[::-1], self.g[::-1], self.h[::-1])

    @property
    def power_law_exponents(self):
        """``(rho, sigma)`` pairs when every coefficient is a monomial, else None.

        ``g = c t^e`` gives ``G = c/(e+1) t^{e+1}``, so ``rho = e + 1``; prefactors
        only rescale F and do not affect divergence.
        """
        mono_g = [c.monomial for c in self.g]
        mono_h = [c.monomial for c in self.h]
        if any(m is None for m in mono_g + mono_h):
            return None
        if any(m[0] == 0 for m in mono_g + mono_h):
            return None
        return tuple(m[1] + 1.0 for m in mono_g), tuple(m[1] for m in mono_h)

    def to_dict(self):
        return {
            "dim": self.dim,
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "g": [c.to_dict() for c in self.g],
            "h": [c.to_dict() for c in self.h],
        }


def eval_f(params, i, t):
    """``f_i(t) = h_i(t) (G_b / (G_j^{alpha_b/alpha_j} + G_b)^{beta_i})^{d/alpha_b}``."""
    j, b = 1 - i, params.b
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("f_i needs t > 0")
    Gb = params.dilation(b)(t)
    Gj = params.dilation(j)(t)
    denom = np.power(Gj, params.alpha[b] / params.alpha[j]) + Gb
    if np.any(denom <= 0):
        raise DomainError("both dilations vanish; f_i undefined")
    with np.errstate(over="ignore", under="ignore"):
        inner = Gb / np.power(denom, params.beta[i])
        out = params.h[i](t) * np.power(inner, params.dim / params.alpha[b])
    return out if np.ndim(out) else float(out)


def combine_F(f_i, f_j, beta_i, beta_j):
    """``(f_i^{1/(beta_i+1)} f_j^{1/(beta_j+1)})^{(beta_i+1)(beta_j+1)/(beta_i+beta_j+2)}``."""
    s = beta_i + beta_j + 2.0
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        return np.power(f_i, (beta_j + 1.0) / s) * np.power(f_j, (beta_i + 1.0) / s)


def eval_F(params, t):
    return combine_F(eval_f(params, 0, t), eval_f(params, 1, t), params.beta[0], params.beta[1])


def _log_gauss_integral(func, lo, hi):
    # ∫_lo^hi func(t) dt in the variable log t
    u = 0.5 * (math.log(lo) + math.log(hi)) + 0.5 * (math.log(hi) - math.log(lo)) * _GL_X
    t = np.exp(u)
    vals = np.asarray(func(t), dtype=float) * t
    return float(0.5 * (math.log(hi) - math.log(lo)) * np.sum(_GL_W * vals))


@dataclass(frozen=True)
class DivergenceVerdict:
    verdict: str  # blow_up | inconclusive | inapplicable
    method: str  # exact_power_law | numeric_heuristic
    exponent: float | None = None
    window_slope: float | None = None
    note: str = ""


def exponent_verdict(exponent):
    """Exact rule: ``∫^∞ t^e dt`` diverges iff ``e >= -1``."""
    return "blow_up" if exponent >= -1 else "inconclusive"


def classify_integral(F, t_start=1.0, horizon=1e6, n_windows=6):
    """Heuristic divergence test of ``∫_{t_start}^∞ F`` from dyadic window integrals."""
    slope, _ = window_log_slope(lambda lo, hi: _log_gauss_integral(F, lo, hi), t_start, horizon, n_windows)
    if slope is not None and slope >= SLOPE_THRESHOLD:
        return DivergenceVerdict("blow_up", "numeric_heuristic", window_slope=slope)
    return DivergenceVerdict("inconclusive", "numeric_heuristic", window_slope=slope)


@dataclass(frozen=True)
class Theta:
    values: tuple  # theta_1 .. theta_6 as floats
    exact: tuple = field(repr=False)  # the same as Fractions

    @property
    def exponent_exact(self):
        t1, t2, t3, t4, t5, t6 = self.exact
        return t1 - t4 * max(t2, t3) - t6 * max(t5, t3)

    @property
    def exponent(self):
        return float(self.exponent_exact)


def _frac(x):
    return Fraction(x) if not isinstance(x, Fraction) else x


def theta_exponents(dim, alpha, beta, rho, sigma, i=0):
    """theta_1..theta_6 of ``F = t^θ1 / ((t^θ2 + t^θ3)^θ4 (t^θ5 + t^θ3)^θ6)``.

    Computed in exact rational arithmetic from the binary values of the inputs.
    """
    j = 1 - i
    b = 0 if alpha[0] > alpha[1] else 1  # index of the larger alpha (a = 0 on ties)
    d = _frac(dim)
    al = [_frac(a) for a in alpha]
    be = [_frac(x) for x in beta]
    rh = [_frac(x) for x in rho]
    sg = [_frac(x) for x in sigma]
    s = be[i] + be[j] + 2
    t1 = d * rh[b] / al[b] + (sg[i] * (1 + be[j]) + sg[j] * (1 + be[i])) / s
    t2 = rh[j] * al[b] / al[j]
    t3 = rh[b]
    t4 = d * be[i] * (be[j] + 1) / (al[b] * s)
    t5 = rh[i] * al[b] / al[i]
    t6 = d * be[j] * (be[i] + 1) / (al[b] * s)
    exact = (t1, t2, t3, t4, t5, t6)
    return Theta(tuple(float(x) for x in exact), exact)


def condition_sides(dim, alpha, beta, rho, sigma, i=0):
    """Exact (lhs, rhs) of the power-law blow-up condition; blow-up when lhs >= rhs."""
    j = 1 - i
    b = 0 if alpha[0] > alpha[1] else 1
    d = _frac(dim)
    al = [_frac(a) for a in alpha]
    be = [_frac(x) for x in beta]
    rh = [_frac(x) for x in rho]
    sg = [_frac(x) for x in sigma]
    s = be[i] + be[j] + 2
    lhs = d * rh[b] / al[b] + (sg[i] * (1 + be[j]) + sg[j] * (1 + be[i])) / s + 1
    rhs = d / s * (
        be[i] * (be[j] + 1) * max(rh[j] / al[j], rh[b] / al[b])
        + be[j] * (be[i] + 1) * max(rh[i] / al[i], rh[b] / al[b])
    )
    return lhs, rhs


def divergence_test(params, t_start=1.0, horizon=1e6, n_windows=6):
    """Decide whether ``∫^∞ F = ∞``: exact for monomial coefficients, heuristic otherwise."""
    for i in (0, 1):
        growth = check_dilation_divergence(params.dilation(i), horizon)
        if growth.kind != "diverges":
            return DivergenceVerdict(
                "inapplicable",
                "exact_power_law" if growth.method == "exact" else "numeric_heuristic",
                note=f"G_{i + 1} does not grow without bound ({growth.kind}, {growth.method})",
            )
    pl = params.power_law_exponents
    if pl is not None:
        rho, sigma = pl
        th = theta_exponents(params.dim, params.alpha, params.beta, rho, sigma)
        return DivergenceVerdict(exponent_verdict(th.exponent_exact), "exact_power_law", exponent=th.exponent)
    return classify_integral(lambda t: eval_F(params, t), t_start, horizon, n_windows)


def literature_bounds(beta):
    """(C_U, C_A, C_V) critical dimensions for alpha = 2, rho = 1, sigma = 0."""
    b1, b2 = float(beta[0]), float(beta[1])
    if not b1 * b2 > 1:
        raise ValidationError(f"need beta_1 * beta_2 > 1, got {beta}", "beta")
    m = max(b1, b2)
    c_u = 2.0 * (m + 1.0) / (b1 * b2 - 1.0)
    c_a = math.inf if m == 1.0 else 2.0 / (m - 1.0)
    c_v = (b1 + b2 + 2.0) / (b1 * b2 - 1.0)
    tol = 1e-12 * max(1.0, c_u)
    assert c_a <= c_v + tol and c_v <= c_u + tol, (c_a, c_v, c_u)
    return c_u, c_a, c_v


@dataclass
class CriterionReport:
    verdict: str
    method: str
    exponent: float | None
    theta: tuple | None
    condition8_lhs: float | None
    condition8_rhs: float | None
    bounds: tuple | None
    f_samples: list
    F_samples: list
    assumptions: list = field(default_factory=list)

    def to_json(self):
        def num(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else float(x)

        return {
            "verdict": self.verdict,
            "method": self.method,
            "exponent": num(self.exponent),
            "theta": None if self.theta is None else [float(x) for x in self.theta],
            "condition8_lhs": num(self.condition8_lhs),
            "condition8_rhs": num(self.condition8_rhs),
            "bounds": None if self.bounds is None else {k: num(v) for k, v in zip(("C_U", "C_A", "C_V"), self.bounds)},
            "f_samples": self.f_samples,
            "F_samples": self.F_samples,
            "assumptions": list(self.assumptions),
        }


ASSUMPTIONS = [
    "initial data phi_i non-negative, bounded, continuous and not identically zero (checked by the solver, not here)",
]


def _samples(params, times):
    out_f, out_F = [], []
    for t in times:
        f0, f1 = eval_f(params, 0, t), eval_f(params, 1, t)
        out_f.append({"t": float(t), "f1": float(f0), "f2": float(f1)})
        out_F.append({"t": float(t), "F": float(combine_F(f0, f1, params.beta[0], params.beta[1]))})
    return out_f, out_F


SAMPLE_TIMES = (0.5, 1.0, 2.0, 10.0, 100.0, 1000.0)


def _bounds_apply(params, rho, sigma):
    return params.alpha == (2.0, 2.0) and tuple(rho) == (1.0, 1.0) and tuple(sigma) == (0.0, 0.0)


def power_law_report(params, include_bounds=None, sample_times=SAMPLE_TIMES):
    """Full report for monomial coefficients: theta, exponent, condition sides, bounds."""
    pl = params.power_law_exponents
    if pl is None:
        raise ValidationError("power_law_report needs monomial g_i and h_i with positive prefactors", "g")
    rho, sigma = pl
    if not all(r > 0 for r in rho):
        raise ValidationError(f"rho_i must be > 0, got {rho}", "rho")
    if not all(s > -1 for s in sigma):
        raise ValidationError(f"sigma_i must be > -1, got {sigma}", "sigma")
    th = theta_exponents(params.dim, params.alpha, params.beta, rho, sigma)
    lhs, rhs = condition_sides(params.dim, params.alpha, params.beta, rho, sigma)
    verdict = exponent_verdict(th.exponent_exact)
    assert (verdict == "blow_up") == (lhs >= rhs), "exponent rule and condition disagree"
    if include_bounds is None:
        include_bounds = _bounds_apply(params, rho, sigma)
    bounds = literature_bounds(params.beta) if include_bounds else None
    f_s, F_s = _samples(params, sample_times)
    return CriterionReport(
        verdict=verdict,
        method="exact_power_law",
        exponent=th.exponent,
        theta=th.values,
        condition8_lhs=float(lhs),
        condition8_rhs=float(rhs),
        bounds=bounds,
        f_samples=f_s,
        F_samples=F_s,
        assumptions=ASSUMPTIONS,
    )


def criterion_report(params, t_start=1.0, horizon=1e6, n_windows=6, include_bounds=False):
    """Report for arbitrary coefficients; delegates to the exact path when possible."""
    pl = params.power_law_exponents
    if pl is not None and all(r > 0 for r in pl[0]) and all(s > -1 for s in pl[1]):
        return power_law_report(params, include_bounds=include_bounds or None)
    v = divergence_test(params, t_start, horizon, n_windows)
    f_s, F_s = _samples(params, SAMPLE_TIMES)
    return CriterionReport(
        verdict=v.verdict,
        method=v.method,
        exponent=v.exponent,
        theta=None,
        condition8_lhs=None,
        condition8_rhs=None,
        bounds=literature_bounds(params.beta) if include_bounds else None,
        f_samples=f_s,
        F_samples=F_s,
        assumptions=ASSUMPTIONS + ([v.note] if v.note else []),
    )
