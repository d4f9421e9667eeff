"""Coefficient functions g_i, h_i and the accumulated dilations G_i(s, t)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError

KINDS = ("power_law", "constant", "tabulated")

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True, eq=False)
class CoefficientFn:
    """Non-negative coefficient of time.

    ``power_law`` is ``prefactor * (t + shift)**exponent``; ``constant`` is
    ``value``; ``tabulated`` interpolates ``(times, values)`` linearly and is
    held constant outside the knot range.
    """

    kind: str
    prefactor: float = 1.0
    exponent: float = 0.0
    shift: float = 0.0
    times: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown coefficient kind {self.kind!r}", "kind")
        if self.kind == "power_law":
            if not (np.isfinite(self.prefactor) and self.prefactor >= 0):
                raise ValidationError("power_law prefactor must be >= 0", "prefactor")
            if not np.isfinite(self.exponent):
                raise ValidationError("power_law exponent must be finite", "exponent")
            if self.shift < 0:
                raise ValidationError("power_law shift must be >= 0", "shift")
        elif self.kind == "constant":
            if not (np.isfinite(self.prefactor) and self.prefactor >= 0):
                raise ValidationError("constant value must be >= 0", "value")
        else:
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValidationError("tabulated needs matching 1-D times/values (>= 2 knots)", "knots")
            if t[0] < 0 or np.any(np.diff(t) <= 0):
                raise ValidationError("tabulated times must be >= 0 and strictly increasing", "knots")
            if np.any(v < 0) or not np.all(np.isfinite(v)):
                raise ValidationError("tabulated values must be finite and >= 0", "knots")
            cum = np.concatenate(([0.0], np.cumsum(0.5 * np.diff(t) * (v[1:] + v[:-1]))))
            t.setflags(write=False)
            v.setflags(write=False)
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)
            # antiderivative from 0 at each knot; g == values[0] on [0, times[0]]
            object.__setattr__(self, "_cum", cum + v[0] * t[0])

    # constructors -----------------------------------------------------------
    @classmethod
    def power_law(cls, prefactor, exponent, shift=0.0):
        return cls("power_law", prefactor=float(prefactor), exponent=float(exponent), shift=float(shift))

    @classmethod
    def constant(cls, value):
        return cls("constant", prefactor=float(value))

    @classmethod
    def tabulated(cls, times, values):
        return cls("tabulated", times=np.array(times, dtype=float), values=np.array(values, dtype=float))

    @classmethod
    def from_dict(cls, spec):
        """Build from a config mapping such as ``{"kind": "power_law", "prefactor": 2, "exponent": 1}``."""
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ValidationError("coefficient must be an object with a 'kind'", "kind")
        kind = spec["kind"]
        try:
            if kind == "power_law":
                return cls.power_law(spec.get("prefactor", 1.0), spec["exponent"], spec.get("shift", 0.0))
            if kind == "constant":
                return cls.constant(spec["value"])
            if kind == "tabulated":
                return cls.tabulated(spec["times"], spec["values"])
        except KeyError as exc:
            raise ValidationError(f"coefficient of kind {kind!r} is missing {exc.args[0]!r}", exc.args[0]) from None
        raise ValidationError(f"unknown coefficient kind {kind!r}", "kind")

    def to_dict(self):
        if self.kind == "power_law":
            return {"kind": "power_law", "prefactor": self.prefactor, "exponent": self.exponent, "shift": self.shift}
        if self.kind == "constant":
            return {"kind": "constant", "value": self.prefactor}
        return {"kind": "tabulated", "times": self.times.tolist(), "values": self.values.tolist()}

    # evaluation ---------------------------------------------------------------
    @property
    def monomial(self):
        """``(prefactor, exponent)`` if the function is exactly ``c t**e``, else None."""
        if self.kind == "constant":
            return self.prefactor, 0.0
        if self.kind == "power_law" and self.shift == 0.0:
            return self.prefactor, self.exponent
        return None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            out = np.full(t.shape, self.prefactor)
        elif self.kind == "power_law":
            with np.errstate(divide="ignore"):
                out = self.prefactor * np.power(t + self.shift, self.exponent)
            if self.prefactor == 0.0:
                out = np.zeros(t.shape)
        else:
            out = np.interp(t, self.times, self.values)
        return out if out.ndim else float(out)

    def _antiderivative(self, t):
        # tabulated only: exact integral of the interpolant from 0
        t = np.asarray(t, dtype=float)
        tk, vk, cum = self.times, self.values, self._cum
        idx = np.clip(np.searchsorted(tk, t, side="right") - 1, 0, tk.size - 2)
        inside = (t >= tk[0]) & (t <= tk[-1])
        part = (t - tk[idx]) * 0.5 * (vk[idx] + np.interp(t, tk, vk))
        return np.where(
            inside,
            cum[idx] + part,
            np.where(t < tk[0], vk[0] * t, cum[-1] + vk[-1] * (t - tk[-1])),
        )

    def integral(self, s, t):
        """Exact integral over ``[s, t]`` (closed form, or exact on the interpolant)."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        if np.any(s < 0) or np.any(s > t):
            raise DomainError("integration bounds must satisfy 0 <= s <= t")
        if self.kind == "constant":
            out = self.prefactor * (t - s)
        elif self.kind == "tabulated":
            out = self._antiderivative(t) - self._antiderivative(s)
        else:
            out = self._power_integral(s, t)
        return out if np.ndim(out) else float(out)

    def _power_integral(self, s, t):
        c, e, a = self.prefactor, self.exponent, self.shift
        if c == 0.0:
            return np.zeros(np.broadcast(s, t).shape)
        lo, hi = s + a, t + a
        if np.any(lo == 0) and e <= -1:
            raise DomainError(f"t**{e:g} is not integrable at 0")
        p = e + 1.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # ratio form avoids cancellation when hi - lo is small against lo
            near = lo > 0.5 * hi
            rel = np.log1p((hi - lo) / np.where(near, lo, 1.0))
            if p == 0.0:
                out = np.where(near, c * rel, c * (np.log(hi) - np.log(np.where(lo > 0, lo, 1.0))))
            else:
                small = c / p * np.power(lo, p) * np.expm1(p * rel)
                far = c / p * (np.power(hi, p) - np.where(lo > 0, np.power(lo, p), 0.0))
                out = np.where(near, small, far)
        return np.where(hi == lo, 0.0, out)

    def step_weights(self, s, t):
        """Return ``(∫ g(r)(1-θ) dr, ∫ g(r) θ dr)`` over ``[s, t]`` with ``θ = (r-s)/(t-s)``.

        Product-integration weights for a linear interpolant of the integrand
        multiplying ``g``; exact for monomials, so integrable singularities at 0
        are handled.
        """
        if not 0 <= s < t:
            raise DomainError("step weights need 0 <= s < t")
        dt = t - s
        mono = self.monomial
        if mono is not None and mono[0] > 0 and mono[1] != 0.0 and (s == 0 or dt > 0.25 * s):
            c, e = mono
            if e <= -1 and s == 0:
                raise DomainError(f"t**{e:g} is not integrable at 0")
            i0 = self.integral(s, t)
            # ∫ c r^e (r - s) dr, split so that each piece is well conditioned
            if e == -2.0:
                m1 = c * math.log(t / s)
            else:
                m1 = c * (t ** (e + 2) - s ** (e + 2)) / (e + 2)
            i1 = (m1 - s * i0) / dt
            return i0 - i1, i1
        edges = [s, t]
        if self.kind == "tabulated":
            # the interpolant is only piecewise smooth; integrate knot to knot
            inner = self.times[(self.times > s) & (self.times < t)]
            edges = [s, *inner.tolist(), t]
        w0 = w1 = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            r = lo + 0.5 * (hi - lo) * (_GL_NODES + 1.0)
            w = 0.5 * (hi - lo) * _GL_WEIGHTS * np.asarray(self(r), dtype=float)
            theta = (r - s) / dt
            w0 += float(np.sum(w * (1.0 - theta)))
            w1 += float(np.sum(w * theta))
        return w0, w1


@dataclass(frozen=True)
class GrowthVerdict:
    """Outcome of testing ``lim G(t) = ∞``; ``method`` is ``exact`` or ``heuristic``."""

    kind: str  # diverges | bounded_on_horizon | exactly_known
    method: str
    limit: float | None = None
    slope: float | None = None


@dataclass(frozen=True, eq=False)
class Dilation:
    """Accumulated dilation ``G(s, t) = ∫_s^t g``."""

    coefficient: CoefficientFn

    def integrate(self, s, t):
        return self.coefficient.integral(s, t)

    def __call__(self, t):
        return self.coefficient.integral(0.0, t)


def as_dilation(g):
    return g if isinstance(g, Dilation) else Dilation(g)


def window_log_slope(window_integral, t_start, horizon, n_windows=6):
    """Fit the growth exponent of dyadic window integrals.

    The windows are ``[2^k, 2^{k+1}] * t_start`` up to ``horizon``.  For an
    integrand behaving like ``t**e`` the window integrals scale like
    ``2**(k (e + 1))``; the returned value estimates ``e + 1`` from the last
    ``n_windows`` windows (None when the windows vanish or do not fit).
    """
    n_total = int(math.floor(math.log2(horizon / t_start)))
    if n_total < n_windows:
        raise ValidationError(f"horizon admits only {n_total} dyadic windows, need {n_windows}", "horizon")
    ks = np.arange(n_total - n_windows, n_total)
    w = np.array([window_integral(t_start * 2.0**k, t_start * 2.0 ** (k + 1)) for k in ks], dtype=float)
    if np.any(np.isnan(w)):
        return None, w
    if np.any(np.isinf(w)):
        return math.inf, w
    if np.any(w <= 0):
        return (None if np.all(w <= 0) else -math.inf), w
    slope = np.polyfit(ks, np.log2(w), 1)[0]
    return float(slope), w


# Boundary exponent -1 (window slope 0) must count as divergent; the margin
# absorbs quadrature noise in the window integrals.
SLOPE_THRESHOLD = -0.025


def check_dilation_divergence(dil, horizon=1.0e6, n_windows=6):
    """Decide whether ``G(t) -> ∞``; exact for closed forms, heuristic for tables."""
    g = dil.coefficient if isinstance(dil, Dilation) else dil
    if g.kind == "constant":
        if g.prefactor > 0:
            return GrowthVerdict("diverges", "exact")
        return GrowthVerdict("exactly_known", "exact", limit=0.0)
    if g.kind == "power_law":
        c, e, a = g.prefactor, g.exponent, g.shift
        if c == 0:
            return GrowthVerdict("exactly_known", "exact", limit=0.0)
        if a == 0 and e <= -1:
            raise DomainError(f"t**{e:g} is not integrable at 0")
        if e >= -1:
            return GrowthVerdict("diverges", "exact")
        return GrowthVerdict("exactly_known", "exact", limit=c * a ** (e + 1) / (-(e + 1)))
    top = min(horizon, float(g.times[-1]))
    start = max(float(g.times[0]), top * 2.0 ** -(n_windows + 14), 1e-300)
    slope, _ = window_log_slope(g.integral, start, top, n_windows)
    if slope is not None and slope >= SLOPE_THRESHOLD:
        return GrowthVerdict("diverges", "heuristic", slope=slope)
    return GrowthVerdict("bounded_on_horizon", "heuristic", limit=float(g.integral(0.0, top)), slope=slope)
