"""Comparison ODE system, its log-product Z and the closed-form lower envelope H.

The system is ``z_i' = k f_i z_j^{β_i}`` with ``z_i(t0) = k/2``.  With
``Z = log(z_i z_j)`` one has

    Z' = k f_i z_j^{β_i}/z_i + k f_j z_i^{β_j}/z_j >= A F e^{γ Z},

where weighted AM-GM with weight ``(β_j+1)/S`` (``S = β_i+β_j+2``) collapses
the powers of z to ``γ = (β_iβ_j - 1)/S`` and the f's to F, and
``A = k c*`` with ``c*`` the optimal Young constant.  Integrating the
comparison equation ``H' = A F e^{γH}`` from ``H(t0) = Z(t0)`` gives

    H(t) = -(1/γ) log(e^{-γ H(t0)} - γ A ∫_{t0}^t F),

so ``H <= Z`` and H blows up once ``γ A ∫F`` reaches ``e^{-γ H(t0)}``.  Passing
a single ``c`` sets ``A = γ = c``.

Along a trajectory H is carried as ``Z - δ`` with
``δ' = Z' - A F e^{γ(Z - δ)}``, ``δ(t0) = 0``.  This is the same function as the
closed form, but the closed form subtracts two O(1) numbers to produce
``e^{-γH}``, which loses all digits once ``γZ`` is a few dozen.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .criterion import combine_F, eval_f
from .errors import ValidationError


def young_constant(beta_i, beta_j):
    """Largest c with ``y^{β_i+1} + x^{β_j+1} >= c (xy)^{(β_i+1)(β_j+1)/(β_i+β_j+2)}``."""
    if beta_i < 1 or beta_j < 1:
        raise ValidationError("beta entries must be >= 1", "beta")
    a = (beta_i + 1.0) / (beta_i + beta_j + 2.0)
    return math.exp(-a * math.log(a) - (1.0 - a) * math.log1p(-a))


def young_ratio(x, y, beta_i, beta_j):
    """``(y^{β_i+1} + x^{β_j+1}) / (xy)^κ``, evaluated in logs to survive wide grids."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    kappa = (beta_i + 1.0) * (beta_j + 1.0) / (beta_i + beta_j + 2.0)
    lx, ly = np.log(x), np.log(y)
    return np.logaddexp((beta_i + 1.0) * ly, (beta_j + 1.0) * lx) - kappa * (lx + ly)


def am_gm_gap(p, q, w):
    """``p + q - (p/w)^w (q/(1-w))^{1-w} >= 0``, free of cancellation when p/w ≈ q/(1-w)."""
    x, y = p / w, q / (1.0 - w)
    if x == 0.0 or y == 0.0:
        return p + q
    if y > x:
        x, y, w = y, x, 1.0 - w
    lr = math.log(y / x)
    return x * ((1.0 - w) * math.expm1(lr) - math.expm1((1.0 - w) * lr))


def envelope_constants(beta, k):
    """``(A, γ)`` for ``Z' >= A F e^{γZ}``."""
    bi, bj = beta
    return k * young_constant(bi, bj), (bi * bj - 1.0) / (bi + bj + 2.0)


@dataclass(frozen=True, eq=False)
class OdeSpec:
    f: tuple  # two callables of t
    beta: tuple
    k: float
    t0: float
    horizon: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValidationError(f"k must be > 0, got {self.k}", "k")
        bi, bj = self.beta
        if bi < 1 or bj < 1 or not bi * bj > 1:
            raise ValidationError(f"need beta_i, beta_j >= 1 and beta_i*beta_j > 1, got {self.beta}", "beta")
        if not self.horizon > self.t0:
            raise ValidationError("horizon must exceed t0", "horizon")
        if len(self.f) != 2 or not all(callable(g) for g in self.f):
            raise ValidationError("f must be a pair of callables", "f")

    @classmethod
    def from_params(cls, params, k, t0, horizon):
        """Coefficients ``f_i`` of a criterion.SystemParams."""
        return cls((lambda t: eval_f(params, 0, t), lambda t: eval_f(params, 1, t)), params.beta, k, t0, horizon)

    @classmethod
    def constant(cls, value, beta=(2.0, 2.0), k=1.0, t0=0.0, horizon=10.0):
        return cls((lambda t: value, lambda t: value), beta, k, t0, horizon)

    @property
    def H0(self):
        return 2.0 * math.log(self.k / 2.0)

    def F(self, t):
        return combine_F(self.f[0](t), self.f[1](t), *self.beta)


def _accumulated(F, t0, t, points=None):
    """``∫_{t0}^t F`` split into dyadic pieces so long ranges stay accurate."""
    if t <= t0:
        return 0.0
    edges = [t0]
    step = max(t0, 1.0)
    while edges[-1] + step < t:
        edges.append(edges[-1] + step)
        step *= 2.0
    edges.append(t)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = quad(F, lo, hi, limit=200, epsabs=0.0, epsrel=1e-12)
        total += val
    return total


def _resolve_constants(spec, c, A, gamma):
    if c is not None:
        if not c > 0:
            raise ValidationError(f"c must be > 0, got {c}", "c")
        return c, c
    A0, g0 = envelope_constants(spec.beta, spec.k)
    return (A0 if A is None else A), (g0 if gamma is None else gamma)


def envelope_from_integral(I, H0, A, gamma):
    """H as a function of ``I = ∫_{t0}^t F``; +inf once the log argument is exhausted."""
    arg = math.exp(-gamma * H0) - gamma * A * np.asarray(I, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(arg > 0, -np.log(np.where(arg > 0, arg, 1.0)) / gamma, np.inf)
    return out if out.ndim else float(out)


def envelope_H(spec, t, c=None, *, A=None, gamma=None, F=None):
    """Closed-form lower envelope ``H(t)``; ``c`` selects the single-constant form."""
    if t < spec.t0:
        raise ValidationError("envelope needs t >= t0", "t")
    A, gamma = _resolve_constants(spec, c, A, gamma)
    I = _accumulated(F or spec.F, spec.t0, t)
    return envelope_from_integral(I, spec.H0, A, gamma)


def blowup_time_bound(spec, F=None, c=None, *, A=None, gamma=None):
    """Smallest t with ``γ A ∫_{t0}^t F >= e^{-γ H(t0)}`` (inf if beyond the horizon)."""
    A, gamma = _resolve_constants(spec, c, A, gamma)
    F = F or spec.F
    target = math.exp(-gamma * spec.H0) / (gamma * A)
    if _accumulated(F, spec.t0, spec.horizon) < target:
        return math.inf
    return brentq(lambda t: _accumulated(F, spec.t0, t) - target, spec.t0, spec.horizon, xtol=1e-14, rtol=4 * np.finfo(float).eps)


@dataclass
class OdeTrajectory:
    times: np.ndarray
    z: tuple
    Z: np.ndarray
    H: np.ndarray
    F_integral: np.ndarray
    blowup_detected: bool
    t_blowup_numeric: float | None
    t_blowup_envelope: float | None
    trigger: str | None = None

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "z1", "z2", "Z", "H"])
            for row in zip(self.times, self.z[0], self.z[1], self.Z, self.H):
                w.writerow([repr(float(v)) for v in row])


BLOWUP_VALUE = 1.0e12


def integrate_system(spec, rtol=1e-12, atol=1e-14, blowup_value=BLOWUP_VALUE, c=None, A=None, gamma=None):
    """Integrate the comparison system until blow-up or the horizon.

    Blow-up is declared when ``max z_i`` crosses ``blowup_value`` or the step
    size drops below ``1e-12 (horizon - t0)``.  The numeric blow-up time adds
    to the last resolved time the zero of the linearly extrapolated
    ``q = z/z'``, which for ``z ~ (T - t)^{-μ}`` is exactly ``T - t``.
    """
    bi, bj = spec.beta
    k = spec.k
    f0, f1 = spec.f
    A_, g_ = _resolve_constants(spec, c, A, gamma)
    # with the default constants Z' - A F e^{γZ} is exactly an AM-GM gap
    use_gap = c is None and A is None and gamma is None
    w = (bj + 1.0) / (bi + bj + 2.0)

    def rhs(t, y):
        a, b = float(f0(t)), float(f1(t))
        if a < 0 or b < 0:
            raise ValidationError(f"f must be non-negative, got ({a}, {b}) at t={t}", "f")
        z0, z1 = max(y[0], 0.0), max(y[1], 0.0)
        F = float(combine_F(a, b, bi, bj))
        d0, d1 = k * a * z1**bi, k * b * z0**bj
        p, q = d0 / z0, d1 / z1
        bound = A_ * F * (z0 * z1) ** g_
        if use_gap:
            ddelta = am_gm_gap(p, q, w) - bound * math.expm1(-g_ * y[3])
        else:
            ddelta = p + q - bound * math.exp(-g_ * y[3])
        return [d0, d1, F, ddelta]

    probe = np.linspace(spec.t0, spec.horizon, 33)[1:]
    for g in (f0, f1):
        if np.any(np.asarray([g(t) for t in probe], dtype=float) < 0):
            raise ValidationError("f must be non-negative on [t0, horizon]", "f")

    def crossed(t, y):
        return blowup_value - max(y[0], y[1])

    crossed.terminal = True
    crossed.direction = -1
    span = spec.horizon - spec.t0
    sol = solve_ivp(
        rhs,
        (spec.t0, spec.horizon),
        [k / 2.0, k / 2.0, 0.0, 0.0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=crossed,
        first_step=min(1e-3 * span, 1e-3),
    )
    times, y = sol.t, sol.y
    trigger = None
    if sol.status == 1:
        trigger = "threshold"
    elif sol.status == -1:
        trigger = "step_underflow"
    elif len(times) > 1 and times[-1] - times[-2] < 1e-12 * span:
        trigger = "step_underflow"
    blown = trigger is not None

    z0, z1, I, delta = y
    Z = np.log(z0) + np.log(z1)
    H = Z - delta

    t_num = None
    if blown:
        t_num = float(times[-1]) + _remaining_time(rhs, times, y)
    t_env = blowup_time_bound(spec, c=c, A=A, gamma=gamma)
    return OdeTrajectory(
        times=times,
        z=(z0, z1),
        Z=Z,
        H=np.asarray(H, dtype=float),
        F_integral=I,
        blowup_detected=blown,
        t_blowup_numeric=t_num,
        t_blowup_envelope=None if math.isinf(t_env) else t_env,
        trigger=trigger,
    )


def _remaining_time(rhs, times, y):
    # zero of the linear extrapolation of q = z/z' through the last two points
    m = int(np.argmax(y[:2, -1]))
    q = []
    for idx in (-2, -1):
        d = rhs(times[idx], y[:, idx])[m]
        q.append(y[m, idx] / d if d > 0 else math.inf)
    if not all(math.isfinite(v) for v in q):
        return 0.0
    slope = (q[1] - q[0]) / (times[-1] - times[-2])
    if slope >= 0:
        return 0.0
    return -q[1] / slope
