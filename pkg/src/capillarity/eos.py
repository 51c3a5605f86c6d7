"""Reduced van der Waals thermodynamics and phase coexistence.

All quantities are in reduced units: the critical point sits at
(rho, T, P) = (1, 1, 1) and the admissible density range is 0 < rho < 3.
The free energy gauge is fixed by alpha(rho=1, T) = 0; only free-energy
differences matter downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, SupercriticalError

RHO_MAX = 3.0  # hard-core bound of the reduced van der Waals form

#: residual tolerance on pressure/chemical-potential equality at coexistence
TOL_COEX = 1e-10


def _check_domain(rho, T):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0) or np.any(rho >= RHO_MAX):
        raise DomainError(f"density must lie in (0, {RHO_MAX}), got {rho}")
    if T <= 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    return rho


def pressure(rho, T):
    """Reduced pressure P = 8*T*rho/(3 - rho) - 3*rho**2."""
    rho = _check_domain(rho, T)
    return 8.0 * T * rho / (3.0 - rho) - 3.0 * rho**2


def dpressure_drho(rho, T):
    """dP/drho at fixed T."""
    rho = _check_domain(rho, T)
    return 24.0 * T / (3.0 - rho) ** 2 - 6.0 * rho


def free_energy(rho, T):
    """Specific Helmholtz free energy alpha(rho, T).

    Defined by P = rho**2 * d(alpha)/d(rho), integrated in closed form and
    gauged so that alpha(1, T) = 0:

        alpha = (8*T/3) * log(2*rho/(3 - rho)) - 3*rho + 3
    """
    rho = _check_domain(rho, T)
    return (8.0 * T / 3.0) * np.log(2.0 * rho / (3.0 - rho)) - 3.0 * rho + 3.0


def chemical_potential(rho, T):
    """Homogeneous chemical potential mu = d(rho*alpha)/d(rho) = alpha + P/rho."""
    rho = _check_domain(rho, T)
    return free_energy(rho, T) + pressure(rho, T) / rho


def dchemical_potential_drho(rho, T):
    """d(mu)/d(rho) = (1/rho) dP/drho."""
    rho = _check_domain(rho, T)
    return dpressure_drho(rho, T) / rho


def spinodal(T):
    """Densities (rho_lo, rho_hi) where dP/drho = 0, bracketing rho = 1.

    dP/drho = 0 is equivalent to rho*(3 - rho)**2 = 4*T; the left side has a
    single maximum (value 4) at rho = 1, so two roots exist iff T < 1.
    """
    if T <= 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if T >= 1.0:
        raise SupercriticalError(
            f"no spinodal: pressure is monotone in density for T = {T} >= 1"
        )

    def f(rho):
        return rho * (3.0 - rho) ** 2 - 4.0 * T

    rho_lo = brentq(f, 1e-12, 1.0, xtol=1e-15, rtol=8.9e-16)
    rho_hi = brentq(f, 1.0, 3.0 - 1e-12, xtol=1e-15, rtol=8.9e-16)
    return rho_lo, rho_hi


@dataclass(frozen=True)
class CoexistenceState:
    """Coexisting bulk states at a subcritical temperature."""

    T: float
    rho_v: float
    rho_l: float
    P_sat: float
    mu_sat: float

    @property
    def density_gap(self):
        return self.rho_l - self.rho_v

    def residuals(self):
        """(pressure mismatch, chemical-potential mismatch) between the bulks."""
        dP = pressure(self.rho_v, self.T) - pressure(self.rho_l, self.T)
        dmu = chemical_potential(self.rho_v, self.T) - chemical_potential(
            self.rho_l, self.T
        )
        return dP, dmu


def maxwell_coexistence(T, tol=TOL_COEX, max_iter=100):
    """Solve for liquid-vapor coexistence at temperature T < 1.

    Simultaneous equality of pressure and chemical potential between the two
    bulks, by 2D Newton iteration on (rho_v, rho_l) with analytic Jacobian,
    started from spinodal-based brackets.  Falls back to bisection on the
    chemical-potential mismatch along the equal-pressure manifold if Newton
    leaves its bracket.
    """
    if T <= 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if T >= 1.0:
        raise SupercriticalError(f"no coexistence at T = {T} >= 1")

    s_lo, s_hi = spinodal(T)
    rho_v = 0.5 * s_lo
    rho_l = 0.5 * (s_hi + RHO_MAX)

    converged = False
    for _ in range(max_iter):
        f1 = pressure(rho_v, T) - pressure(rho_l, T)
        f2 = chemical_potential(rho_v, T) - chemical_potential(rho_l, T)
        if abs(f1) < 1e-15 and abs(f2) < 1e-15:
            converged = True
            break
        j11 = dpressure_drho(rho_v, T)
        j12 = -dpressure_drho(rho_l, T)
        j21 = j11 / rho_v
        j22 = j12 / rho_l
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            break
        dv = -(f1 * j22 - f2 * j12) / det
        dl = -(j11 * f2 - j21 * f1) / det
        # damp the step so both iterates stay inside their spinodal brackets
        scale = 1.0
        while scale > 1e-12 and not (
            0.0 < rho_v + scale * dv < s_lo and s_hi < rho_l + scale * dl < RHO_MAX
        ):
            scale *= 0.5
        if scale <= 1e-12:
            break
        new_v, new_l = rho_v + scale * dv, rho_l + scale * dl
        done = abs(new_v - rho_v) < 1e-16 * rho_v and abs(new_l - rho_l) < 1e-16 * rho_l
        rho_v, rho_l = new_v, new_l
        if done:
            converged = True
            break

    if not converged or (
        abs(pressure(rho_v, T) - pressure(rho_l, T)) > tol
        or abs(chemical_potential(rho_v, T) - chemical_potential(rho_l, T)) > tol
    ):
        rho_v, rho_l = _coexistence_by_pressure_bisection(T, s_lo, s_hi)

    dP = pressure(rho_v, T) - pressure(rho_l, T)
    dmu = chemical_potential(rho_v, T) - chemical_potential(rho_l, T)
    if abs(dP) > tol or abs(dmu) > tol:
        raise ConvergenceError(
            f"Maxwell construction failed at T = {T}: "
            f"|dP| = {abs(dP):.3e}, |dmu| = {abs(dmu):.3e}",
            residuals=(dP, dmu),
        )
    P_sat = 0.5 * (pressure(rho_v, T) + pressure(rho_l, T))
    mu_sat = 0.5 * (chemical_potential(rho_v, T) + chemical_potential(rho_l, T))
    return CoexistenceState(T=T, rho_v=rho_v, rho_l=rho_l, P_sat=P_sat, mu_sat=mu_sat)


def _coexistence_by_pressure_bisection(T, s_lo, s_hi):
    """Root of mu_v(P) - mu_l(P) along the equal-pressure manifold."""
    P_lo = max(pressure(s_hi, T), 1e-14)
    P_hi = pressure(s_lo, T)

    def mu_gap(P_sat):
        rv = brentq(
            lambda r: pressure(r, T) - P_sat, 1e-18, s_lo, xtol=1e-18, rtol=8.9e-16
        )
        rl = brentq(
            lambda r: pressure(r, T) - P_sat,
            s_hi,
            RHO_MAX - 1e-12,
            xtol=1e-15,
            rtol=8.9e-16,
        )
        return chemical_potential(rv, T) - chemical_potential(rl, T)

    P_sat = brentq(mu_gap, P_lo * (1 + 1e-12), P_hi * (1 - 1e-12), xtol=1e-16)
    rho_v = brentq(
        lambda r: pressure(r, T) - P_sat, 1e-18, s_lo, xtol=1e-18, rtol=8.9e-16
    )
    rho_l = brentq(
        lambda r: pressure(r, T) - P_sat, s_hi, RHO_MAX - 1e-12, xtol=1e-15,
        rtol=8.9e-16,
    )
    return rho_v, rho_l
