"""Flat diffuse-interface equilibria and surface tension.

The planar equilibrium condition integrates once to the first-integral form

    (lam/2) * (d rho / dx)**2 = dOmega(rho)

with dOmega the excess grand potential over the coexisting bulks.  The
profile x(rho) is obtained by quadrature of the first integral on a grid
clustered at the bulk endpoints, and the surface tension is evaluated by
two independent routes: the gradient-squared integral over the profile and
the direct density quadrature of sqrt(2*lam*dOmega).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import PchipInterpolator, make_interp_spline
from scipy.optimize import brentq

from . import eos
from .eos import CoexistenceState
from .errors import DomainError, GeometryError, SupercriticalError

#: profiles are truncated where the excess grand potential drops below this
OMEGA_CUT = 1e-16

#: plateau densities must match the bulks to this tolerance
TOL_BULK = 1e-8

_N_PAD = 8  # plateau points attached at each end of a clustered profile


@lru_cache(maxsize=64)
def coexistence(T):
    """Cached Maxwell construction (pure function of T)."""
    return eos.maxwell_coexistence(T)


@dataclass(frozen=True)
class CapillarityParams:
    """Capillarity coefficient and temperature of a diffuse-interface model."""

    lam: float
    T: float

    def __post_init__(self):
        if self.lam <= 0.0:
            raise DomainError(f"capillarity coefficient must be positive, got {self.lam}")
        if self.T <= 0.0:
            raise DomainError(f"temperature must be positive, got {self.T}")
        if self.T >= 1.0:
            raise SupercriticalError(
                f"no liquid-vapor interface at T = {self.T} >= 1"
            )


@dataclass
class DensityProfile:
    """A sampled 1D density field along the interface normal."""

    coordinate: np.ndarray
    density: np.ndarray
    geometry: str  # "planar" or "spherical"
    params: CapillarityParams

    def __post_init__(self):
        self.coordinate = np.asarray(self.coordinate, dtype=float)
        self.density = np.asarray(self.density, dtype=float)
        if self.coordinate.shape != self.density.shape:
            raise ValueError("coordinate and density arrays must have equal length")
        if self.coordinate.size < 16:
            raise ValueError("profile needs at least 16 sample points")
        if np.any(np.diff(self.coordinate) <= 0.0):
            raise ValueError("coordinates must be strictly increasing")
        if self.geometry not in ("planar", "spherical"):
            raise GeometryError(f"unknown geometry {self.geometry!r}")


@dataclass(frozen=True)
class SurfaceTensionReport:
    """Surface tension by two independent routes with their cross-residual."""

    sigma_integral: float
    sigma_quadrature: float

    @property
    def rel_discrepancy(self):
        mean = 0.5 * (self.sigma_integral + self.sigma_quadrature)
        return abs(self.sigma_integral - self.sigma_quadrature) / mean


def excess_grand_potential(rho, coex: CoexistenceState):
    """Excess grand potential dOmega(rho) = rho*alpha(rho) - mu_sat*rho + P_sat.

    Gauged by subtracting the linear interpolant of its (tiny, rounding-level)
    endpoint values so that dOmega vanishes identically at both bulks.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < coex.rho_v - TOL_BULK) or np.any(rho > coex.rho_l + TOL_BULK):
        raise DomainError(
            f"density outside coexistence interval [{coex.rho_v}, {coex.rho_l}]"
        )
    return _excess_raw(np.clip(rho, coex.rho_v, coex.rho_l), coex)


def _excess_raw(rho, coex):
    T = coex.T

    def omega(r):
        return r * eos.free_energy(r, T) - coex.mu_sat * r + coex.P_sat

    w_v = omega(coex.rho_v)
    w_l = omega(coex.rho_l)
    t = (rho - coex.rho_v) / (coex.rho_l - coex.rho_v)
    return omega(rho) - (1.0 - t) * w_v - t * w_l


def _barrier_top(coex):
    """Density maximizing dOmega: the middle root of mu(rho) = mu_sat."""
    s_lo, s_hi = eos.spinodal(coex.T)
    return brentq(
        lambda r: eos.chemical_potential(r, coex.T) - coex.mu_sat,
        s_lo,
        s_hi,
        xtol=1e-15,
        rtol=8.9e-16,
    )


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _cumulative_gl(f, u):
    """Cumulative integral of f over the nodes u by per-interval Gauss-Legendre."""
    a, b = u[:-1], u[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    pieces = half * (vals @ _GL_WEIGHTS)
    return np.concatenate([[0.0], np.cumsum(pieces)])


class _FirstIntegral:
    """Logistic-substitution machinery for the planar first integral.

    rho(u) = rho_v + drho / (1 + exp(-u)) maps u in (-inf, inf) onto the
    open coexistence interval; the integrand dx/du of the first integral is
    then smooth and bounded, with finite limits at both ends.
    """

    def __init__(self, params, coex):
        self.params = params
        self.coex = coex
        self.drho = coex.rho_l - coex.rho_v
        # truncation densities where dOmega crosses OMEGA_CUT (quadratic model)
        dmu_v = eos.dchemical_potential_drho(coex.rho_v, coex.T)
        dmu_l = eos.dchemical_potential_drho(coex.rho_l, coex.T)
        delta_v = np.sqrt(2.0 * OMEGA_CUT / dmu_v)
        delta_l = np.sqrt(2.0 * OMEGA_CUT / dmu_l)
        self.u_min = np.log(delta_v / (self.drho - delta_v))
        self.u_max = np.log((self.drho - delta_l) / delta_l)
        rho_top = _barrier_top(coex)
        self.u_top = np.log((rho_top - coex.rho_v) / (coex.rho_l - rho_top))

    def rho_of_u(self, u):
        return self.coex.rho_v + self.drho / (1.0 + np.exp(-u))

    def drho_du(self, u):
        rho = self.rho_of_u(u)
        return (rho - self.coex.rho_v) * (self.coex.rho_l - rho) / self.drho

    def dx_du(self, u):
        rho = self.rho_of_u(u)
        dom = np.maximum(_excess_raw(rho, self.coex), 0.1 * OMEGA_CUT)
        return np.sqrt(self.params.lam / (2.0 * dom)) * self.drho_du(u)


def planar_profile(params: CapillarityParams, n_points=512, coex=None,
                   spacing="clustered"):
    """Equilibrium density profile of a flat interface.

    The profile is centered so that the maximum-slope point sits at x = 0 and
    carries bulk plateaus attached at both ends.  ``spacing`` selects the
    node layout: "clustered" (endpoint-clustered, from the quadrature of the
    first integral) or "uniform" (equispaced in x, from high-accuracy
    integration of d rho/dx = sqrt(2*dOmega/lam)).
    """
    if params.T >= 1.0:
        raise DomainError(f"no interface at T = {params.T} >= 1")
    if coex is None:
        coex = coexistence(params.T)
    fi = _FirstIntegral(params, coex)

    if spacing == "clustered":
        u = np.linspace(fi.u_min, fi.u_max, n_points)
        x = _cumulative_gl(fi.dx_du, u)
        # shift so x = 0 at the maximum-slope density (top of the barrier)
        k = np.searchsorted(u, fi.u_top)
        x_top = x[k - 1] + _cumulative_gl(fi.dx_du, np.array([u[k - 1], fi.u_top]))[-1]
        x -= x_top
        rho = fi.rho_of_u(u)
        x, rho = _attach_plateaus(x, rho, coex)
    elif spacing == "uniform":
        x, rho = _uniform_samples(fi, n_points)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")

    return DensityProfile(coordinate=x, density=rho, geometry="planar", params=params)


def _attach_plateaus(x, rho, coex):
    span = x[-1] - x[0]
    pad = np.linspace(0.02 * span, 0.15 * span, _N_PAD)
    x = np.concatenate([x[0] - pad[::-1], x, x[-1] + pad])
    rho = np.concatenate(
        [np.full(_N_PAD, coex.rho_v), rho, np.full(_N_PAD, coex.rho_l)]
    )
    return x, rho


def _uniform_samples(fi, n_points):
    coex = fi.coex
    lam = fi.params.lam
    # x-extent of the truncated interface from a coarse clustered pass
    u = np.linspace(fi.u_min, fi.u_max, 257)
    xc = _cumulative_gl(fi.dx_du, u)
    k = np.searchsorted(u, fi.u_top)
    x_top = xc[k - 1] + _cumulative_gl(fi.dx_du, np.array([u[k - 1], fi.u_top]))[-1]
    x_lo, x_hi = xc[0] - x_top, xc[-1] - x_top
    rho_top = fi.rho_of_u(fi.u_top)

    def rhs(x, y):
        r = np.clip(y[0], coex.rho_v, coex.rho_l)
        dom = max(float(_excess_raw(r, coex)), 0.0)
        return [np.sqrt(2.0 * dom / lam)]

    grid = np.linspace(x_lo, x_hi, n_points)
    rho = np.empty_like(grid)
    for sign, mask in ((1.0, grid >= 0.0), (-1.0, grid < 0.0)):
        xs = grid[mask]
        if xs.size == 0:
            continue
        order = np.argsort(sign * xs)
        span_end = xs[order[-1]]
        sol = solve_ivp(
            rhs, (0.0, span_end), [rho_top], t_eval=xs[order],
            method="DOP853", rtol=1e-12, atol=1e-14,
        )
        out = np.empty_like(xs)
        out[order] = sol.y[0]
        rho[mask] = out
    rho = np.clip(rho, coex.rho_v, coex.rho_l)
    # extend with uniform-step plateaus on both sides
    h = grid[1] - grid[0]
    x = np.concatenate(
        [grid[0] + h * np.arange(-_N_PAD, 0), grid, grid[-1] + h * np.arange(1, _N_PAD + 1)]
    )
    rho = np.concatenate(
        [np.full(_N_PAD, coex.rho_v), rho, np.full(_N_PAD, coex.rho_l)]
    )
    return x, rho


_GL6_NODES, _GL6_WEIGHTS = np.polynomial.legendre.leggauss(6)


def gradient_squared_integral(x, rho):
    """integral of (d rho/dx)**2 dx from a quintic spline fit of the samples."""
    spl = make_interp_spline(x, rho, k=5)
    dspl = spl.derivative()
    a, b = x[:-1], x[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * _GL6_NODES[None, :]
    vals = dspl(pts.ravel()).reshape(pts.shape) ** 2
    return float(np.sum(half * (vals @ _GL6_WEIGHTS)))


def sigma_integral(profile: DensityProfile):
    """Surface tension as lam * integral of (d rho/dx)**2 over the profile."""
    if profile.geometry != "planar":
        raise GeometryError("sigma_integral requires a planar profile")
    return profile.params.lam * gradient_squared_integral(
        profile.coordinate, profile.density
    )


def sigma_quadrature(params: CapillarityParams, coex=None):
    """Surface tension as integral of sqrt(2*lam*dOmega(rho)) over density."""
    if params.T >= 1.0:
        raise DomainError(f"no interface at T = {params.T} >= 1")
    if coex is None:
        coex = coexistence(params.T)

    def integrand(rho):
        return np.sqrt(2.0 * params.lam * max(float(_excess_raw(rho, coex)), 0.0))

    val, _ = quad(integrand, coex.rho_v, coex.rho_l, epsabs=1e-14, epsrel=1e-13,
                  limit=200)
    return val


def surface_tension_report(params: CapillarityParams, n_points=512, coex=None):
    """Both sigma routes on a freshly computed equilibrium profile."""
    if coex is None:
        coex = coexistence(params.T)
    prof = planar_profile(params, n_points=n_points, coex=coex)
    return SurfaceTensionReport(
        sigma_integral=sigma_integral(prof),
        sigma_quadrature=sigma_quadrature(params, coex=coex),
    )


def interface_thickness(profile: DensityProfile):
    """10-90 thickness: distance between the 10% and 90% density crossings."""
    x = profile.coordinate
    rho = profile.density
    if rho[0] > rho[-1]:  # spherical droplet profiles decrease outward
        rho = rho[::-1]
        x = -x[::-1]
    d = np.diff(rho)
    if np.any(d < 0.0):
        raise ValueError("profile is not monotone")
    rho_v, rho_l = rho[0], rho[-1]
    lo = rho_v + 0.1 * (rho_l - rho_v)
    hi = rho_v + 0.9 * (rho_l - rho_v)
    keep = np.concatenate([[True], d > 0.0])  # strictly increasing interior
    inv = PchipInterpolator(rho[keep], x[keep])
    return float(inv(hi) - inv(lo))


def discrete_energy_stationarity(profile: DensityProfile, coex=None, skip=0):
    """Max-norm of the discrete-functional gradient over interior nodes.

    The discretized functional is the trapezoid sum of
    rho*alpha(rho) - mu_sat*rho plus the midpoint gradient energy
    (lam/2)*((rho_{i+1}-rho_i)/h_i)**2 * h_i.  Each gradient component is
    normalized by its node weight; ``skip`` drops that many interior nodes
    at each end (useful to mask plateau-truncation seams).
    """
    if profile.geometry != "planar":
        raise GeometryError("stationarity check requires a planar profile")
    params = profile.params
    if coex is None:
        coex = coexistence(params.T)
    x = profile.coordinate
    rho = profile.density
    h = np.diff(x)
    slopes = np.diff(rho) / h
    mu = eos.chemical_potential(rho, params.T)
    w = 0.5 * (h[:-1] + h[1:])
    grad = w * (mu[1:-1] - coex.mu_sat) - params.lam * (slopes[1:] - slopes[:-1])
    resid = np.abs(grad / w)
    if skip > 0:
        resid = resid[skip:-skip]
    return float(np.max(resid))
