"""Pseudospectral Duhamel solver for the coupled fractional system on a periodic box.

Each component obeys ``u_i = P_i(G_i(0,t)) φ_i + ∫_0^t P_i(G_i(s,t)) h_i(s) u_j(s)^{β_i} ds``
where ``P_i(G)`` is the Fourier multiplier ``exp(-G |ξ|^{α_i})``.  The box is
``[-L, L)^d`` with ``N`` points per axis, so ``ξ = π m / L``.  Blow-up is an
operational notion here: the sup-norm crossing a threshold or the time step
underflowing a floor.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from .criterion import SystemParams
from .errors import BallViolationError, BlowUpEvent, DomainError, ResolutionError, StabilityError, ValidationError
from .stable_kernel import (
    KernelSpec,
    box_tail_mass,
    density_at_origin,
    density_grid,
    estimate_comparison_constant,
    grid_radii,
    profile_on_radii,
)


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class Bump:
    """``amplitude * exp(-|x - center|^2 / (2 width^2))``."""

    amplitude: float
    center: tuple = (0.0,)
    width: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ValidationError("bump amplitude must be finite and >= 0", "amplitude")
        if not self.width > 0:
            raise ValidationError("bump width must be > 0", "width")
        c = self.center
        object.__setattr__(self, "center", tuple(float(v) for v in (c if np.ndim(c) else (c,))))

    def sample(self, coords):
        r2 = sum((x - c) ** 2 for x, c in zip(coords, self._center_for(len(coords))))
        return self.amplitude * np.exp(-r2 / (2.0 * self.width**2))

    def _center_for(self, dim):
        c = self.center
        if len(c) == 1 and dim > 1:
            c = c * dim
        if len(c) != dim:
            raise ValidationError(f"bump center has {len(c)} coordinates, grid has {dim}", "center")
        return c

    def to_dict(self):
        return {"kind": "bump", "amplitude": self.amplitude, "center": list(self.center), "width": self.width}


@dataclass(frozen=True, eq=False)
class Samples:
    """Initial data given directly on the grid."""

    values: np.ndarray

    def sample(self, coords):
        v = np.asarray(self.values, dtype=float)
        if v.shape != coords[0].shape:
            raise ValidationError(f"samples have shape {v.shape}, grid needs {coords[0].shape}", "phi")
        return v.copy()

    def to_dict(self):
        return {"kind": "samples", "values": np.asarray(self.values).tolist()}


def initial_data_from_dict(spec):
    if not isinstance(spec, dict):
        raise ValidationError("initial data must be an object", "phi")
    kind = spec.get("kind", "bump")
    if kind == "bump":
        if "amplitude" not in spec:
            raise ValidationError("bump needs an amplitude", "amplitude")
        return Bump(float(spec["amplitude"]), spec.get("center", 0.0), float(spec.get("width", 1.0)))
    if kind == "samples":
        return Samples(np.asarray(spec["values"], dtype=float))
    raise ValidationError(f"unknown initial data kind {kind!r}", "phi")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    params: SystemParams
    phi: tuple
    box_halfwidth: float
    resolution: int

    def __post_init__(self):
        if self.params.dim not in (1, 2):
            raise ValidationError(f"the solver supports d in {{1, 2}}, got d={self.params.dim}", "dim")
        n = self.resolution
        if int(n) != n or n < 16 or n & (n - 1):
            raise ValidationError(f"resolution must be a power of two >= 16, got {n}", "resolution")
        if not self.box_halfwidth > 0:
            raise ValidationError("box_halfwidth must be > 0", "box_halfwidth")
        if len(self.phi) != 2:
            raise ValidationError("phi must be a pair", "phi")
        for i, v in enumerate(self.phi_values):
            if not np.all(np.isfinite(v)):
                raise ValidationError(f"phi_{i + 1} must be bounded", "phi")
            if np.any(v < 0):
                raise ValidationError(f"phi_{i + 1} must be non-negative", "phi")
            if not np.any(v > 0):
                raise ValidationError(f"phi_{i + 1} must not be identically zero", "phi")

    @property
    def dim(self):
        return self.params.dim

    @cached_property
    def axis(self):
        n = self.resolution
        return -self.box_halfwidth + (2.0 * self.box_halfwidth / n) * np.arange(n)

    @property
    def spacing(self):
        return 2.0 * self.box_halfwidth / self.resolution

    @property
    def cell_volume(self):
        return self.spacing**self.dim

    @cached_property
    def coords(self):
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij")

    @cached_property
    def phi_values(self):
        return tuple(p.sample(self.coords) for p in self.phi)

    @property
    def shape(self):
        return (self.resolution,) * self.dim

    @cached_property
    def wavenumber(self):
        """``|ξ|`` on the real-FFT layout."""
        n, h = self.resolution, self.spacing
        full = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
        half = 2.0 * np.pi * np.fft.rfftfreq(n, d=h)
        axes = [full] * (self.dim - 1) + [half]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.sqrt(sum(g**2 for g in grids))

    @cached_property
    def dealias_mask(self):
        n = self.resolution
        full = np.abs(np.fft.fftfreq(n, d=1.0 / n)) < n / 3.0
        half = np.fft.rfftfreq(n, d=1.0 / n) < n / 3.0
        axes = [full] * (self.dim - 1) + [half]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.logical_and.reduce(grids)

    @property
    def origin_index(self):
        return (self.resolution // 2,) * self.dim

    def to_dict(self):
        return {
            "system": self.params.to_dict(),
            "phi": [p.to_dict() for p in self.phi],
            "box_halfwidth": self.box_halfwidth,
            "resolution": self.resolution,
        }


@dataclass(frozen=True, eq=False)
class FieldPair:
    time: float
    values: tuple

    @cached_property
    def spectra(self):
        return tuple(np.fft.rfftn(v) for v in self.values)

    @property
    def sup(self):
        return tuple(float(np.max(np.abs(v))) for v in self.values)


# ---------------------------------------------------------------------------
# run bookkeeping


@dataclass(frozen=True)
class SolverControl:
    t_end: float = 1.0
    sup_threshold: float = 1.0e8
    dt_floor: float = 1.0e-12
    dt_initial: float = 1.0e-3
    dt_max: float = 0.05
    growth_limit: float = 0.1
    negativity_floor: float = 1.0e-9
    dealias: bool = True
    warm_start: bool = True
    weight_tail_bound: float = 1.0e-8
    record_moments: bool = True
    max_steps: int = 200_000
    underflow_growth: float = 100.0  # sup growth that marks a negativity-driven dt underflow as blow-up

    def __post_init__(self):
        for name in ("t_end", "sup_threshold", "dt_floor", "dt_initial", "dt_max", "growth_limit", "weight_tail_bound"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0", name)
        if self.dt_floor >= self.dt_max:
            raise ValidationError("dt_floor must be below dt_max", "dt_floor")

    @classmethod
    def from_dict(cls, spec):
        known = set(cls.__dataclass_fields__)
        extra = set(spec) - known
        if extra:
            name = sorted(extra)[0]
            raise ValidationError(f"unknown solver setting {name!r}", name)
        return cls(**spec)


@dataclass
class RunRecord:
    times: list
    supnorm: tuple
    moments: tuple
    dts: list
    verdict: str
    t_e: float | None
    trigger: str | None
    normalized_moments: tuple
    diagnostics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "t_e": self.t_e,
            "trigger": self.trigger,
            "blow_up_definition": "operational: sup-norm above threshold or time step below floor",
            "steps": len(self.times) - 1,
            "final_time": self.times[-1],
            "diagnostics": self.diagnostics,
            "config": self.config,
        }

    def write(self, json_path, csv_path):
        with open(json_path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.write_csv(csv_path)

    def write_csv(self, csv_path):
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "sup1", "sup2", "moment1", "moment2", "dt"])
            for row in zip(self.times, *self.supnorm, *self.moments, self.dts):
                w.writerow([repr(float(v)) for v in row])


@dataclass
class PicardResult:
    times: np.ndarray
    fields: list
    iterations: int
    distances: list
    contraction_factor: float
    bound: float
    converged: bool


# ---------------------------------------------------------------------------
# solver


class MildSolver:
    def __init__(self, problem, control=None):
        self.problem = problem
        self.control = control or SolverControl()
        self._powk = tuple(problem.wavenumber ** a for a in problem.params.alpha)

    # building blocks -------------------------------------------------------
    def initial_fields(self):
        return FieldPair(0.0, tuple(v.copy() for v in self.problem.phi_values))

    def multiplier(self, i, G):
        return np.exp(-G * self._powk[i])

    def _inverse(self, spec):
        shape = self.problem.shape
        return np.fft.irfftn(spec, s=shape, axes=tuple(range(len(shape))))

    def linear_propagate(self, fields, i, G_increment):
        """Apply ``exp(-G |ξ|^{α_i})`` to component i."""
        if G_increment < 0:
            raise DomainError("G increment must be >= 0")
        if G_increment == 0:
            return fields.values[i].copy()
        return self._inverse(fields.spectra[i] * self.multiplier(i, G_increment))

    def nonlinearity(self, v, beta, dealias=None):
        """``v_+^β`` with optional 2/3-rule filtering before and after the power."""
        dealias = self.control.dealias if dealias is None else dealias
        mask = self.problem.dealias_mask
        if dealias:
            v = self._inverse(np.fft.rfftn(v) * mask)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.power(np.maximum(v, 0.0), beta)
        if dealias:
            out = self._inverse(np.fft.rfftn(out) * mask)
        return out

    def step_duhamel(self, fields, dt, dealias=None):
        """One exponential-trapezoid step over ``[t, t + dt]``.

        The predictor propagates ``u_i + ∫h_i N_i(u_j)`` through the linear flow;
        the corrector weights the left endpoint (propagated) and the right
        endpoint (predicted) nonlinear terms with the exact integrals of
        ``h_i`` against the linear hat functions.
        """
        if not dt > 0:
            raise DomainError("dt must be > 0")
        p = self.problem.params
        t = fields.time
        u = fields.values
        with np.errstate(over="ignore", invalid="ignore"):
            nl = [self.nonlinearity(u[1 - i], p.beta[i], dealias) for i in (0, 1)]
            mult, w = [], []
            for i in (0, 1):
                mult.append(self.multiplier(i, p.g[i].integral(t, t + dt)))
                w.append(p.h[i].step_weights(t, t + dt))
            pred = [
                self._inverse((fields.spectra[i] + (w[i][0] + w[i][1]) * np.fft.rfftn(nl[i])) * mult[i]) for i in (0, 1)
            ]
            nl_pred = [self.nonlinearity(pred[1 - i], p.beta[i], dealias) for i in (0, 1)]
            new = tuple(
                self._inverse((fields.spectra[i] + w[i][0] * np.fft.rfftn(nl[i])) * mult[i]) + w[i][1] * nl_pred[i]
                for i in (0, 1)
            )
        if not all(np.all(np.isfinite(v)) for v in new):
            raise BlowUpEvent(t + dt)
        return FieldPair(t + dt, new)

    # local existence ---------------------------------------------------------
    def contraction_bound(self, tau, R):
        p = self.problem.params
        return sum(p.beta[i] * R ** (p.beta[i] - 1.0) * p.h[i].integral(0.0, tau) for i in (0, 1))

    def choose_tau(self, R, tau_max=1.0):
        """Largest τ (bisection) with ``Σ β_i R^{β_i-1} ∫_0^τ h_i <= 1/2``."""
        if not R > 0:
            raise ValidationError("R must be > 0", "R")
        if self.contraction_bound(tau_max, R) <= 0.5:
            return tau_max
        lo, hi = 0.0, tau_max
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self.contraction_bound(mid, R) <= 0.5:
                lo = mid
            else:
                hi = mid
        return lo

    def picard_local_solve(self, tau, R, n_steps=16, tol=1e-10, max_iter=40):
        """Fixed-point iteration of the Duhamel map on ``[0, τ]``.

        The discrete map uses the same exponential-trapezoid quadrature as the
        time stepper (without dealiasing, so that the sup-norm Lipschitz bound
        of the pointwise power applies).  The first iterate is the linear flow.
        """
        p = self.problem.params
        if not tau > 0:
            raise ValidationError("tau must be > 0", "tau")
        phi_sup = max(float(np.max(v)) for v in self.problem.phi_values)
        if R < 2.0 * phi_sup:
            raise ValidationError(f"R must be >= 2 max sup phi = {2 * phi_sup:g}", "R")
        times = np.linspace(0.0, tau, n_steps + 1)
        phi_hat = [np.fft.rfftn(v) for v in self.problem.phi_values]
        step_mult = [[self.multiplier(i, p.g[i].integral(a, b)) for a, b in zip(times[:-1], times[1:])] for i in (0, 1)]
        weights = [[p.h[i].step_weights(a, b) for a, b in zip(times[:-1], times[1:])] for i in (0, 1)]

        def linear_part(i):
            out, spec = [self.problem.phi_values[i].copy()], phi_hat[i]
            for m in range(n_steps):
                spec = spec * step_mult[i][m]
                out.append(self._inverse(spec))
            return out

        lin = [linear_part(0), linear_part(1)]

        def psi(traj):
            res = []
            for i in (0, 1):
                nl = [self.nonlinearity(traj[1 - i][m], p.beta[i], dealias=False) for m in range(n_steps + 1)]
                duh = np.zeros(self.problem.shape)
                out = [lin[i][0].copy()]
                for m in range(n_steps):
                    w0, w1 = weights[i][m]
                    duh = self._inverse(np.fft.rfftn(duh + w0 * nl[m]) * step_mult[i][m]) + w1 * nl[m + 1]
                    out.append(lin[i][m + 1] + duh)
                res.append(out)
            return res

        def norm(traj):
            return max(float(np.max(np.abs(traj[0][m])) + np.max(np.abs(traj[1][m]))) for m in range(n_steps + 1))

        bound = self.contraction_bound(tau, R)
        cur = [[v.copy() for v in lin[0]], [v.copy() for v in lin[1]]]
        distances, ratios = [], []
        converged = False
        it = 0
        for it in range(1, max_iter + 1):
            nxt = psi(cur)
            nrm = norm(nxt)
            if not nrm <= R:
                raise BallViolationError(f"iterate {it} has norm {nrm:.4g} > R = {R:g}", nrm)
            dist = norm([[a - b for a, b in zip(nxt[i], cur[i])] for i in (0, 1)])
            if distances and distances[-1] > 1e3 * np.finfo(float).eps * nrm:
                ratios.append(dist / distances[-1])
            distances.append(dist)
            cur = nxt
            if dist < tol:
                converged = True
                break
        fields = [FieldPair(float(t), (cur[0][m], cur[1][m])) for m, t in enumerate(times)]
        factor = max(ratios) if ratios else 0.0
        return PicardResult(times, fields, it, distances, factor, bound, converged)

    # diagnostics -------------------------------------------------------------
    def moment(self, fields, t=None, tail_bound=None):
        """``ū_i(t) = ∫ p_b(G_b(t), x) u_i(t, x) dx`` and the weight's tail mass.

        Falls back to the periodized weight (evaluated spectrally as the linear
        flow at the origin) when the free-space weight is too narrow for the grid.
        """
        p = self.problem.params
        t = fields.time if t is None else t
        Gb = p.dilation(p.b)(t)
        if not Gb > 0:
            raise DomainError("moment needs G_b(t) > 0")
        tail_bound = self.control.weight_tail_bound if tail_bound is None else tail_bound
        spec = KernelSpec(
            p.alpha[p.b], self.problem.dim, self.problem.box_halfwidth, self.problem.resolution, max_tail_mass=tail_bound
        )
        kg = density_grid(spec, Gb)
        if abs(kg.grid_mass + kg.tail_mass - 1.0) <= 1e-6:
            vals = tuple(float(np.sum(kg.values * v) * kg.cell_volume) for v in fields.values)
            return vals, {"tail_mass": kg.tail_mass, "weight": "grid"}
        mult = self.multiplier(p.b, Gb)
        idx = self.problem.origin_index
        vals = tuple(float(self._inverse(s * mult)[idx]) for s in fields.spectra)
        return vals, {"tail_mass": kg.tail_mass, "weight": "spectral"}

    def normalized_moment_factor(self, t):
        """``(G_i^{α_b/α_i} + G_b)^{d/α_b}`` for i = 1, 2."""
        p = self.problem.params
        b = p.b
        Gb = p.dilation(b)(t)
        return tuple(
            (p.dilation(i)(t) ** (p.alpha[b] / p.alpha[i]) + Gb) ** (p.dim / p.alpha[b]) for i in (0, 1)
        )

    def initial_bound_check(self, t0, comparison=None):
        """Both sides of the initial lower bound at ``t0`` for each component.

        The left side is the linear flow ``P_i(G_i(t0)) φ_i``, which the mild
        solution dominates because the Duhamel term is non-negative.
        """
        p = self.problem.params
        d, b = p.dim, p.b
        pb0 = density_at_origin(p.alpha[b], d)
        out = []
        fields = self.initial_fields()
        for i in (0, 1):
            Gi = p.dilation(i)(t0)
            if not Gi > 0 or Gi ** (-d / p.alpha[i]) * pb0 > 1.0:
                raise DomainError(f"t0={t0:g} violates G_i(t0)^(-d/alpha_i) p_b(1,0) <= 1 for i={i + 1}")
            if comparison is not None:
                ci = comparison[i]
            elif p.alpha[i] == p.alpha[b]:
                ci = 1.0
            else:
                ci = estimate_comparison_constant(p.alpha[i], p.alpha[b], d).c_lower
            s = Gi ** (p.alpha[b] / p.alpha[i])
            radii = grid_radii(self.problem.box_halfwidth, self.problem.resolution, d)
            weight = profile_on_radii(p.alpha[b], d, s, 2.0 * radii, 1e-12)
            c_t0 = ci * 2.0**-d * float(np.sum(weight * self.problem.phi_values[i]) * self.problem.cell_volume)
            lhs = self.linear_propagate(fields, i, Gi)
            rhs = c_t0 * profile_on_radii(p.alpha[b], d, 2.0 ** -p.alpha[b] * s, radii, 1e-12)
            gap = lhs - rhs
            k = np.unravel_index(int(np.argmin(gap)), gap.shape)
            # the absolute margin sits in the far tails; the ratio shows the bulk
            live = rhs > 1e-12 * np.max(rhs)
            out.append(
                {
                    "c_i": ci,
                    "c_i_t0": c_t0,
                    "margin": float(gap[k]),
                    "argmin": [float(self.problem.axis[j]) for j in k],
                    "min_ratio": float(np.min(lhs[live] / rhs[live])),
                    "lhs_sup": float(np.max(lhs)),
                    "rhs_sup": float(np.max(rhs)),
                }
            )
        return {"t0": t0, "components": out}

    # driver ------------------------------------------------------------------
    def _proposal(self, fields, dt_prev):
        c, p = self.control, self.problem.params
        rate = 0.0
        for i in (0, 1):
            sup_i = float(np.max(np.abs(fields.values[i])))
            sup_j = float(np.max(np.maximum(fields.values[1 - i], 0.0)))
            hi = float(p.h[i](max(fields.time, 1e-300)))
            if sup_i > 0 and math.isfinite(hi):
                rate = max(rate, hi * sup_j ** p.beta[i] / sup_i)
        dt = min(2.0 * dt_prev, c.dt_max, c.t_end - fields.time)
        if rate > 0:
            dt = min(dt, c.growth_limit / rate)
        return dt

    def run(self):
        c = self.control
        p = self.problem.params
        fields = self.initial_fields()
        sup0 = max(fields.sup)
        rec = {"t": [], "sup": ([], []), "mom": ([], []), "dt": [], "tail": []}
        diag = {"rejected_negativity": 0, "rejected_growth": 0, "spectral_weight_samples": 0, "max_weight_tail_mass": 0.0}

        def record(f, dt):
            rec["t"].append(f.time)
            for i in (0, 1):
                rec["sup"][i].append(f.sup[i])
            if c.record_moments and p.dilation(p.b)(f.time) > 0:
                m, info = self.moment(f)
                diag["spectral_weight_samples"] += info["weight"] == "spectral"
                diag["max_weight_tail_mass"] = max(diag["max_weight_tail_mass"], info["tail_mass"])
            else:
                m = (float("nan"), float("nan"))
            for i in (0, 1):
                rec["mom"][i].append(m[i])
            rec["dt"].append(dt)

        record(fields, 0.0)
        verdict, trigger, t_e = "bounded_on_horizon", None, None
        dt = c.dt_initial

        if c.warm_start:
            # the ball argument needs |||φ||| = sup φ_1 + sup φ_2 <= R/2
            R = 2.0 * sum(fields.sup)
            tau = min(self.choose_tau(R, tau_max=c.t_end), 0.25 * c.t_end)
            pic = self.picard_local_solve(tau, R, n_steps=8)
            diag["warm_start"] = {"tau": tau, "R": R, "iterations": pic.iterations, "contraction_factor": pic.contraction_factor}
            for f in pic.fields[1:]:
                record(f, tau / 8)
            fields = pic.fields[-1]
            dt = tau / 8

        steps = 0
        while fields.time < c.t_end * (1 - 1e-14) and steps < c.max_steps:
            if max(fields.sup) > c.sup_threshold:
                verdict, trigger, t_e = "blew_up", "sup_threshold", fields.time
                break
            dt = self._proposal(fields, dt)
            if dt < c.dt_floor:
                verdict, trigger, t_e = "blew_up", "dt_underflow", fields.time
                break
            accepted = None
            while dt >= c.dt_floor:
                try:
                    cand = self.step_duhamel(fields, dt)
                except BlowUpEvent:
                    verdict, trigger, t_e = "blew_up", "non_finite", fields.time
                    break
                s_old, s_new = max(fields.sup), max(cand.sup)
                if s_new > (1.0 + 2.0 * c.growth_limit) * s_old and dt > c.dt_floor:
                    diag["rejected_growth"] += 1
                    dt *= 0.5
                    continue
                neg = min(float(np.min(v)) for v in cand.values)
                if neg < -c.negativity_floor * s_new:
                    diag["rejected_negativity"] += 1
                    dt *= 0.5
                    continue
                accepted = cand
                break
            if trigger is not None:
                break
            if accepted is None:
                if max(fields.sup) >= c.underflow_growth * sup0:
                    verdict, trigger, t_e = "blew_up", "dt_underflow", fields.time
                    break
                raise StabilityError(
                    f"negativity below -{c.negativity_floor:g} * sup persists at dt < {c.dt_floor:g} (t={fields.time:g})"
                )
            fields = accepted
            steps += 1
            record(fields, dt)
        if trigger is None and max(fields.sup) > c.sup_threshold:
            verdict, trigger, t_e = "blew_up", "sup_threshold", fields.time

        times = rec["t"]
        factors = [self.normalized_moment_factor(t) if t > 0 else (0.0, 0.0) for t in times]
        norm_m = tuple([m * f[i] for m, f in zip(rec["mom"][i], factors)] for i in (0, 1))
        diag["steps"] = steps
        tail_now = box_tail_mass(p.alpha[p.b], p.dim, max(p.dilation(p.b)(times[-1]), 1e-300), self.problem.box_halfwidth)
        diag["final_weight_tail_mass"] = tail_now
        return RunRecord(
            times=times,
            supnorm=rec["sup"],
            moments=rec["mom"],
            dts=rec["dt"],
            verdict=verdict,
            t_e=t_e,
            trigger=trigger,
            normalized_moments=norm_m,
            diagnostics=diag,
            config={"problem": self.problem.to_dict(), "control": asdict(c)},
        )


# ---------------------------------------------------------------------------
# functional front door


def linear_propagate(problem, fields, i, G_increment):
    return MildSolver(problem).linear_propagate(fields, i, G_increment)


def step_duhamel(problem, fields, dt, control=None):
    return MildSolver(problem, control).step_duhamel(fields, dt)


def picard_local_solve(problem, tau, R, **kw):
    return MildSolver(problem).picard_local_solve(tau, R, **kw)


def choose_tau(problem, R, tau_max=1.0):
    return MildSolver(problem).choose_tau(R, tau_max)


def moment(problem, fields, t=None):
    return MildSolver(problem).moment(fields, t)[0]


def initial_bound_check(problem, t0, comparison=None):
    return MildSolver(problem).initial_bound_check(t0, comparison)


def run_simulation(problem, control=None):
    return MildSolver(problem, control).run()
