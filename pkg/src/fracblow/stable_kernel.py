"""Isotropic alpha-stable heat kernels p_alpha(t, x) on R^d.

The kernel is the inverse Fourier transform of ``exp(-t |xi|^alpha)``.  Away
from the closed forms (alpha = 1 Cauchy, alpha = 2 Gauss) it is reduced to a
one-dimensional radial integral

    p(t, r) = (2 pi)^{-d/2} r^{1-d/2} ∫_0^∞ exp(-t k^alpha) k^{d/2} J_{d/2-1}(k r) dk,

and the Bessel function is traded for a Hankel function so that the
integration ray can be rotated into the upper half plane, where the
integrand decays exponentially instead of oscillating.  Each ray is covered
by dyadic panels (graded toward 0) with Gauss-Legendre rules of two orders;
their difference is the error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft as sfft
from scipy import optimize, special

from .errors import AccuracyError, DivergenceError, DomainError, ResolutionError, ValidationError

_GL_HI = np.polynomial.legendre.leggauss(16)
_GL_LO = np.polynomial.legendre.leggauss(10)
_CHEB_DEG = 32
_DECAY = 45.0  # exp(-45) ~ 3e-20 relative truncation


@dataclass(frozen=True)
class KernelSpec:
    """One isotropic stable density together with its evaluation grid."""

    alpha: float
    dim: int = 1
    grid_halfwidth: float = 20.0
    grid_points: int = 1024
    quad_tol: float = 1e-10
    max_tail_mass: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValidationError(f"alpha must lie in (0, 2], got {self.alpha}", "alpha")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValidationError(f"dim must be a positive integer, got {self.dim}", "dim")
        if self.grid_points < 16 or self.grid_points % 2:
            raise ValidationError(f"grid_points must be even and >= 16, got {self.grid_points}", "grid_points")
        if not self.grid_halfwidth > 0:
            raise ValidationError("grid_halfwidth must be positive", "grid_halfwidth")
        if not self.quad_tol > 0:
            raise ValidationError("quad_tol must be positive", "quad_tol")

    @property
    def axis(self):
        """Uniform symmetric grid ``-L + n h``, ``h = 2L/N`` (periodic layout)."""
        n = self.grid_points
        return -self.grid_halfwidth + (2.0 * self.grid_halfwidth / n) * np.arange(n)

    @property
    def cell_volume(self):
        return (2.0 * self.grid_halfwidth / self.grid_points) ** self.dim


@dataclass(frozen=True)
class ComparisonEstimate:
    """Grid lower bound for ``inf p_{alpha_i}(t,x) / p_{alpha_b}(t^{alpha_b/alpha_i}, x)``."""

    alpha_i: float
    alpha_b: float
    c_lower: float
    grid_descriptor: str
    min_location: float
    raw_minimum: float = float("nan")
    ray_deviation: float = 0.0


@dataclass(frozen=True)
class KernelGrid:
    values: np.ndarray = field(repr=False)
    axis: np.ndarray = field(repr=False)
    cell_volume: float
    grid_mass: float
    tail_mass: float

    @property
    def mass_tol(self):
        return self.tail_mass


# ---------------------------------------------------------------------------
# closed forms


def density_at_origin(alpha, dim, t=1.0):
    """``p_alpha(t, 0) = 2 Γ(d/alpha) / (alpha Γ(d/2) (4 pi)^{d/2}) t^{-d/alpha}``."""
    val = 2.0 * math.gamma(dim / alpha) / (alpha * math.gamma(dim / 2.0) * (4.0 * math.pi) ** (dim / 2.0))
    return val * t ** (-dim / alpha)


def gaussian_density(dim, t, r):
    r = np.asarray(r, dtype=float)
    return (4.0 * math.pi * t) ** (-dim / 2.0) * np.exp(-(r * r) / (4.0 * t))


def cauchy_density(dim, t, r):
    r = np.asarray(r, dtype=float)
    const = math.gamma((dim + 1) / 2.0) / math.pi ** ((dim + 1) / 2.0)
    return const * t / (t * t + r * r) ** ((dim + 1) / 2.0)


def _tail_asymptote(alpha, dim):
    """Constant A in ``p(1, r) ~ A r^{-d-alpha}`` (alpha < 2)."""
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        * math.pi ** (-dim / 2.0 - 1.0)
        * math.sin(math.pi * alpha / 2.0)
        * math.gamma((dim + alpha) / 2.0)
        * math.gamma(alpha / 2.0)
    )


# ---------------------------------------------------------------------------
# rotated-ray quadrature


def _ray_angle(alpha):
    # alpha * angle <= pi/4 keeps exp(-t k^alpha) decaying along the ray
    return math.pi / (4.0 * max(alpha, 1.0))


def _panel_rule(lo, hi, n_sub, rule):
    """Gauss nodes/weights on dyadic panels [2^-k hi, 2^{1-k} hi] down to ``lo``."""
    n_levels = max(1, int(math.ceil(math.log2(hi / lo))))
    edges = hi * 2.0 ** -np.arange(n_levels + 1, dtype=float)[::-1]
    frac = np.linspace(0.0, 1.0, n_sub + 1)
    edges = (edges[:-1, None] + np.diff(edges)[:, None] * frac[None, :]).ravel()
    edges = np.unique(np.concatenate((edges, [hi])))
    a, b = edges[:-1], edges[1:]
    x, w = rule
    nodes = 0.5 * (a[:, None] + b[:, None]) + 0.5 * (b - a)[:, None] * x[None, :]
    weights = 0.5 * (b - a)[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel(), float(edges[0])


def _ray_integral(integrand, lo, hi, n_sub, tol, what):
    """Integrate ``integrand(s)`` (shape (m, n_nodes)) along the ray with error control."""
    for attempt in range(4):
        s_hi, w_hi, s0 = _panel_rule(lo, hi, n_sub, _GL_HI)
        s_lo, w_lo, _ = _panel_rule(lo, hi, n_sub, _GL_LO)
        val_hi = integrand(s_hi) @ w_hi
        val_lo = integrand(s_lo) @ w_lo
        est = np.abs(val_hi - val_lo)
        if np.all(est <= tol):
            return val_hi, s0, est
        n_sub *= 2
    raise AccuracyError(f"{what}: quadrature error estimate {est.max():.3e} above tolerance {tol:.1e}", float(est.max()))


def _density_quadrature(alpha, dim, t, r, tol):
    """Radial quadrature of p_alpha(t, r) for an array of radii (no closed forms)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(r)
    phi = _ray_angle(alpha)
    rot = np.exp(1j * phi)
    rot_a = np.exp(1j * alpha * phi)
    scale = t ** (-1.0 / alpha)
    s_max = scale * (_DECAY / math.cos(alpha * phi)) ** (1.0 / alpha)
    s_min = scale * 1e-16 ** (1.0 / dim)
    nu = dim / 2.0 - 1.0

    zero = r == 0
    out[zero] = density_at_origin(alpha, dim, t)
    rest = np.flatnonzero(~zero)
    order = rest[np.argsort(r[rest])]
    for chunk in np.array_split(order, max(1, len(order) // 64)):
        if chunk.size == 0:
            continue
        rc = r[chunk][:, None]
        # strong damping from exp(-r s sin(phi)) lets large radii stop early
        damp = rc.min() * math.sin(phi)
        hi = min(s_max, 2.0 * _DECAY / damp) if damp * s_max > 2.0 * _DECAY else s_max
        hi = max(hi, 4.0 * s_min)

        if dim == 1:
            def integrand(s):
                z = s[None, :] * rot
                return (rot * np.exp(-t * s[None, :] ** alpha * rot_a + 1j * rc * z)).real / math.pi
        else:
            pref = (2.0 * math.pi) ** (-dim / 2.0) * rc ** (1.0 - dim / 2.0)

            def integrand(s):
                k = s[None, :] * rot
                z = rc * k
                val = np.exp(-t * s[None, :] ** alpha * rot_a + 1j * z) * special.hankel1e(nu, z)
                return (pref * rot * k ** (dim / 2.0) * val).real

        vals, _, _ = _ray_integral(integrand, s_min, hi, 4, tol, f"p_{alpha}(t={t})")
        out[chunk] = vals
    return out


def radial_density(alpha, dim, t, r, tol=1e-10, method="auto"):
    """Vectorized ``p_alpha(t, r)`` for radii ``r``; ``method`` is auto|closed|quadrature."""
    if not t > 0:
        raise DomainError(f"kernel time must be positive, got {t}")
    r = np.abs(np.asarray(r, dtype=float))
    if method != "quadrature" and alpha == 2.0:
        return gaussian_density(dim, t, r)
    if method != "quadrature" and alpha == 1.0:
        return cauchy_density(dim, t, r)
    if method == "closed":
        raise DomainError(f"no closed form for alpha={alpha}")
    shape = r.shape
    return _density_quadrature(alpha, dim, t, r.ravel(), tol).reshape(shape)


def eval_density(spec, t, x, method="auto"):
    """``p_alpha(t, x)`` at one point ``x`` of R^d (scalar accepted when d = 1)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != spec.dim:
        raise DomainError(f"point has {x.size} coordinates, kernel dimension is {spec.dim}")
    if not np.all(np.isfinite(x)):
        raise DomainError("point must be finite")
    r = float(np.sqrt(np.sum(x * x)))
    return float(radial_density(spec.alpha, spec.dim, t, r, spec.quad_tol, method))


# ---------------------------------------------------------------------------
# tail mass outside the box [-L, L]^d


def _ball_tail(alpha, dim, t, radius, tol):
    """``P(|X_t| > R)`` from the Fourier transform of the ball indicator."""
    radius = np.atleast_1d(np.asarray(radius, dtype=float))
    phi = _ray_angle(alpha)
    rot = np.exp(1j * phi)
    rot_a = np.exp(1j * alpha * phi)
    rc = radius[:, None]
    hi = 2.0 * _DECAY / (radius.min() * math.sin(phi))
    lo = hi * 1e-40

    if dim == 1:
        # (2/pi) Im ∫ (1 - e^{-t k^alpha}) e^{ikR} dk/k ; dk/k = ds/s on the ray
        def integrand(s):
            k = s[None, :] * rot
            return (2.0 / math.pi) * (-np.expm1(-t * s[None, :] ** alpha * rot_a) * np.exp(1j * rc * k) / s[None, :]).imag
    elif dim == 2:
        # R Re ∫ (1 - e^{-t k^alpha}) H_1(kR) dk
        def integrand(s):
            k = s[None, :] * rot
            z = rc * k
            val = -np.expm1(-t * s[None, :] ** alpha * rot_a) * special.hankel1e(1, z) * np.exp(1j * z)
            return (rc * rot * val).real
    else:
        raise DomainError("tail mass is implemented for d in {1, 2}")

    vals, s0, _ = _ray_integral(integrand, lo, hi, 4, tol, "tail mass")
    # integrand ~ C s^{alpha-1} near 0
    vals = vals + integrand(np.array([s0]))[:, 0] * s0 / alpha
    return vals


def box_tail_mass(alpha, dim, t, halfwidth, tol=1e-12):
    """Probability that the stable law at time ``t`` leaves ``[-L, L]^d``."""
    if not t > 0:
        raise DomainError("t must be positive")
    if alpha == 2.0:
        one = special.erfc(halfwidth / (2.0 * math.sqrt(t)))
        return float(1.0 - (1.0 - one) ** dim)
    if alpha == 1.0 and dim == 1:
        return float(1.0 - 2.0 / math.pi * math.atan(halfwidth / t))
    if dim == 1:
        return float(_ball_tail(alpha, 1, t, halfwidth, tol)[0])
    if dim == 2:
        # square = union of radial segments; 8-fold symmetry over theta in [0, pi/4]
        x, w = np.polynomial.legendre.leggauss(40)
        theta = math.pi / 8.0 * (x + 1.0)
        tails = _ball_tail(alpha, 2, t, halfwidth / np.cos(theta), tol)
        return float(4.0 / math.pi * np.sum(w * math.pi / 8.0 * tails))
    raise DomainError("tail mass is implemented for d in {1, 2}")


# ---------------------------------------------------------------------------
# batched grids through a piecewise Chebyshev radial table


class _RadialTable:
    """Piecewise Chebyshev interpolant of ``r -> p_alpha(1, r)`` on ``[0, r_max]``."""

    def __init__(self, alpha, dim, r_max, tol):
        self.alpha, self.dim, self.r_max, self.tol = alpha, dim, r_max, tol
        k = np.arange(_CHEB_DEG)
        self._nodes = np.cos(math.pi * (k + 0.5) / _CHEB_DEG)
        edges = [0.0] + [min(r_max, 0.125 * 2.0**j) for j in range(64) if 0.125 * 2.0 ** (j - 1) < r_max]
        pending = sorted(set(edges))
        pending = list(zip(pending[:-1], pending[1:]))
        done = []
        while pending:
            if len(done) + len(pending) > 4000:
                raise AccuracyError("radial table refinement did not converge")
            lo = np.array([a for a, _ in pending])
            hi = np.array([b for _, b in pending])
            pts = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * self._nodes[None, :]
            vals = _density_quadrature(alpha, dim, 1.0, pts.ravel(), tol / 4.0).reshape(pts.shape)
            coef = sfft.dct(vals, type=2, axis=1) / _CHEB_DEG
            coef[:, 0] *= 0.5
            tail = np.abs(coef[:, -3:]).max(axis=1)
            nxt = []
            for a, b, c, err in zip(lo, hi, coef, tail):
                if err <= tol / 8.0:
                    done.append((a, b, c))
                else:
                    m = 0.5 * (a + b)
                    nxt += [(a, m), (m, b)]
            pending = nxt
        done.sort(key=lambda item: item[0])
        self.edges = np.array([a for a, _, _ in done] + [done[-1][1]])
        self.coef = np.array([c for _, _, c in done])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        if flat.size and flat.max() > self.r_max * (1 + 1e-12):
            raise DomainError("radius beyond table range")
        idx = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0, len(self.coef) - 1)
        out = np.empty_like(flat)
        order = np.argsort(idx, kind="stable")
        bounds = np.searchsorted(idx[order], np.arange(len(self.coef) + 1))
        for p in range(len(self.coef)):
            sel = order[bounds[p]:bounds[p + 1]]
            if sel.size == 0:
                continue
            a, b = self.edges[p], self.edges[p + 1]
            u = (2.0 * flat[sel] - a - b) / (b - a)
            out[sel] = np.polynomial.chebyshev.chebval(u, self.coef[p])
        return out.reshape(r.shape)


@lru_cache(maxsize=32)
def _radial_table(alpha, dim, r_max, tol):
    return _RadialTable(alpha, dim, r_max, tol)


def profile_on_radii(alpha, dim, t, r, tol):
    """Batched density values through the cached radial table."""
    r = np.asarray(r, dtype=float)
    if alpha == 2.0:
        return gaussian_density(dim, t, r)
    if alpha == 1.0:
        return cauchy_density(dim, t, r)
    scale = t ** (-1.0 / alpha)
    amp = t ** (-dim / alpha)
    rs = r * scale
    need = float(rs.max()) if rs.size else 1.0
    r_max = 2.0 ** math.ceil(math.log2(max(need, 1.0)))
    table_tol = max(tol / max(amp, 1.0), 1e-15)
    return amp * _radial_table(float(alpha), int(dim), r_max, table_tol)(rs)


def grid_radii(halfwidth, n_points, dim):
    axis = -halfwidth + (2.0 * halfwidth / n_points) * np.arange(n_points)
    if dim == 1:
        return np.abs(axis)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.sqrt(sum(m * m for m in mesh))


def density_grid(spec, t):
    """Free-space kernel values on the ``N^d`` grid, with mass bookkeeping.

    Raises ResolutionError when more than ``spec.max_tail_mass`` of the
    probability lies outside the box.
    """
    if not t > 0:
        raise DomainError(f"kernel time must be positive, got {t}")
    if spec.dim > 2:
        raise DomainError("density grids are implemented for d in {1, 2}")
    radii = grid_radii(spec.grid_halfwidth, spec.grid_points, spec.dim)
    values = profile_on_radii(spec.alpha, spec.dim, t, radii, spec.quad_tol)
    tail = box_tail_mass(spec.alpha, spec.dim, t, spec.grid_halfwidth)
    if tail > spec.max_tail_mass:
        raise ResolutionError(
            f"tail mass {tail:.3e} outside box of half-width {spec.grid_halfwidth} exceeds {spec.max_tail_mass:.1e}",
            tail,
        )
    mass = float(values.sum() * spec.cell_volume)
    return KernelGrid(values=values, axis=spec.axis, cell_volume=spec.cell_volume, grid_mass=mass, tail_mass=tail)


# ---------------------------------------------------------------------------
# cross-index comparison constant


@dataclass(frozen=True)
class ProbeGrid:
    u_max: float | None = None
    n_points: int = 2001
    ray_times: tuple = (0.25, 4.0)
    ray_points: tuple = (0.0, 0.7, 1.9, 4.3)

    def describe(self, u_max):
        return f"u=x/t^(1/alpha_i) in [0, {u_max:g}], {self.n_points} uniform points, ray check t={list(self.ray_times)}"


def _ratio(alpha_i, alpha_b, dim, u, tol):
    return radial_density(alpha_i, dim, 1.0, u, tol) / radial_density(alpha_b, dim, 1.0, u, tol)


def estimate_comparison_constant(alpha_i, alpha_b, dim=1, probe_grid=None, tol=1e-11, positivity_floor=1e-6):
    """Grid certificate for ``p_{alpha_i}(t,x) >= c p_{alpha_b}(t^{alpha_b/alpha_i}, x)``.

    Both kernels scale with the same factor ``t^{-d/alpha_i}`` along the ray
    ``x = u t^{1/alpha_i}``, so the ratio depends only on ``u`` and the scan is
    one-dimensional.  Beyond the scanned range the heavier ``alpha_i`` tail
    dominates; the scan is extended until the ratio is increasing at its end.
    """
    if not 0 < alpha_i <= alpha_b <= 2:
        raise ValidationError(f"need 0 < alpha_i <= alpha_b <= 2, got ({alpha_i}, {alpha_b})", "alpha")
    probe = probe_grid or ProbeGrid()
    if alpha_i == alpha_b:
        return ComparisonEstimate(alpha_i, alpha_b, 1.0, "identical kernels", 0.0, 1.0, 0.0)

    u_max = probe.u_max or 8.0
    while True:
        u = np.linspace(0.0, u_max, probe.n_points)
        ratio = _ratio(alpha_i, alpha_b, dim, u, tol)
        k = int(np.nanargmin(ratio))
        end = ratio[-probe.n_points // 10:]
        # end of scan must be increasing and well above the minimum
        if k < probe.n_points - probe.n_points // 5 and np.all(np.diff(end) > 0) and end[0] > ratio[k]:
            break
        if probe.u_max is not None or u_max >= 256:
            raise AccuracyError(f"ratio not increasing at end of scan u_max={u_max}")
        u_max *= 2.0

    lo, hi = u[max(k - 1, 0)], u[min(k + 1, len(u) - 1)]
    grid_min = float(ratio[k])
    u_star, raw = float(u[k]), grid_min
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda v: float(_ratio(alpha_i, alpha_b, dim, np.array([v]), tol)[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if res.fun < raw:
            u_star, raw = float(res.x), float(res.fun)
    if not raw > positivity_floor:
        raise AccuracyError(f"comparison ratio {raw:.3e} below positivity floor; quadrature suspect", raw)

    # ray constancy: ratio at (t, u t^{1/alpha_i}) must not depend on t
    dev = 0.0
    spec_i = KernelSpec(alpha_i, dim, quad_tol=tol)
    spec_b = KernelSpec(alpha_b, dim, quad_tol=tol)
    base = _ratio(alpha_i, alpha_b, dim, np.array(probe.ray_points), tol)
    for t in probe.ray_times:
        for uu, ref in zip(probe.ray_points, base):
            x = np.zeros(dim)
            x[0] = uu * t ** (1.0 / alpha_i)
            val = eval_density(spec_i, t, x) / eval_density(spec_b, t ** (alpha_b / alpha_i), x)
            dev = max(dev, abs(val / ref - 1.0))
    if dev > 1e-6:
        raise AccuracyError(f"ratio not constant along rays (deviation {dev:.2e})", dev)
    return ComparisonEstimate(
        alpha_i=alpha_i,
        alpha_b=alpha_b,
        c_lower=min(raw, 1.0),
        grid_descriptor=probe.describe(u_max),
        min_location=u_star,
        raw_minimum=raw,
        ray_deviation=dev,
    )


# ---------------------------------------------------------------------------
# t0 for the initial lower bound


def min_time_t0(problem, resolution=1e-3, horizon=1e6):
    """Smallest ``t0 = 1 + k * resolution`` with ``G_i(t0)^{-d/alpha_i} p_b(1, 0) <= 1`` for both i.

    Accepts a SystemParams or anything carrying one as ``.params``.
    """
    params = getattr(problem, "params", problem)
    dim, alpha = params.dim, params.alpha
    p_b0 = density_at_origin(alpha[params.b], dim)

    def ok(t):
        for i in (0, 1):
            G = params.dilation(i)(t)
            if not G > 0 or G ** (-dim / alpha[i]) * p_b0 > 1.0:
                return False
        return True

    if not ok(horizon):
        raise DivergenceError(
            f"dilations do not grow enough by t={horizon:g}: G_i(t) must tend to infinity for the lower bound"
        )
    k_hi = int(math.ceil((horizon - 1.0) / resolution))
    k_lo = 1
    if ok(1.0 + resolution):
        return 1.0 + resolution
    while k_hi - k_lo > 1:
        mid = (k_lo + k_hi) // 2
        if ok(1.0 + mid * resolution):
            k_hi = mid
        else:
            k_lo = mid
    return 1.0 + k_hi * resolution


# ---------------------------------------------------------------------------
# property suite


def kernel_property_suite(alpha, dim=1, alpha_other=None, tol=1e-11, rng=None):
    """Worst violations of the scaling, monotonicity, product and comparison properties.

    Returns a dict of floats; the documented pass thresholds are
    ``scaling <= 1e-8`` (relative) and ``>= -1e-10`` for the three inequalities.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    KernelSpec(alpha, dim, quad_tol=tol)  # validates alpha and dim

    def p(t, r, a=alpha):
        return radial_density(a, dim, t, r, tol, method="quadrature" if a not in (1.0, 2.0) else "auto")

    out = {}
    # p(ts, x) = t^{-d/alpha} p(s, t^{-1/alpha} x)
    r = np.linspace(0.0, 4.0, 9)
    worst = 0.0
    for s in (0.5, 1.0, 2.0):
        for t in (0.3, 1.7, 3.0):
            lhs = p(t * s, r)
            rhs = t ** (-dim / alpha) * p(s, t ** (-1.0 / alpha) * r)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
    out["scaling"] = worst

    # p(t,x) >= (s/t)^{d/alpha} p(s,x) for t >= s
    worst = math.inf
    for s, t in ((0.5, 0.5), (0.5, 1.0), (1.0, 3.0), (0.2, 5.0)):
        diff = p(t, r) - (s / t) ** (dim / alpha) * p(s, r)
        worst = min(worst, float(diff.min()))
    out["monotone"] = worst

    # p(t,(x-y)/tau) >= p(t,x)p(t,y) when p(t,0) <= 1, tau >= 2
    worst = math.inf
    for t in (1.0, 2.0, 4.0):
        if density_at_origin(alpha, dim, t) > 1.0:
            continue
        xs = rng.uniform(-4, 4, size=(60, dim))
        ys = rng.uniform(-4, 4, size=(60, dim))
        tau = rng.uniform(2.0, 5.0, size=60)
        diff = p(t, np.linalg.norm((xs - ys) / tau[:, None], axis=1)) - p(t, np.linalg.norm(xs, axis=1)) * p(
            t, np.linalg.norm(ys, axis=1)
        )
        worst = min(worst, float(diff.min()))
    out["product"] = worst

    if alpha_other is not None:
        ai, ab = sorted((alpha, alpha_other))
        est = estimate_comparison_constant(ai, ab, dim, tol=tol)
        worst = math.inf
        for t in (0.3, 1.0, 2.5):
            rr = np.linspace(0.0, 6.0, 25) + 0.137
            diff = p(t, rr, ai) - est.c_lower * p(t ** (ab / ai), rr, ab)
            worst = min(worst, float(diff.min()))
        out["comparison"] = worst
        out["c_lower"] = est.c_lower
    return out
