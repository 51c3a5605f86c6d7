"""Equation of state, spinodal, and Maxwell construction."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from capillarity import eos
from capillarity.errors import ConvergenceError, DomainError, SupercriticalError

import oracles


def test_pressure_hand_value():
    # 8*0.9*0.5/2.5 - 3*0.25 computed by hand
    assert eos.pressure(0.5, 0.9) == pytest.approx(0.69, abs=1e-15)


def test_critical_point():
    assert eos.pressure(1.0, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert eos.dpressure_drho(1.0, 1.0) == pytest.approx(0.0, abs=1e-14)
    # inflection: second derivative vanishes too
    d2 = oracles.central_difference(
        lambda r: eos.dpressure_drho(r, 1.0), 1.0, 1e-6
    )
    assert abs(d2) < 1e-7


@pytest.mark.parametrize("rho", [-0.5, 0.0, 3.0, 3.5])
def test_density_domain(rho):
    with pytest.raises(DomainError):
        eos.pressure(rho, 0.9)


def test_temperature_domain():
    with pytest.raises(DomainError):
        eos.free_energy(0.5, -1.0)


def test_thermodynamic_consistency():
    # P = rho^2 * d(alpha)/d(rho) at random samples, by central differences
    rng = np.random.default_rng(7)
    for _ in range(100):
        rho = rng.uniform(0.05, 2.9)
        T = rng.uniform(0.4, 1.5)
        h = 1e-6 * rho
        dalpha = oracles.central_difference(lambda r: eos.free_energy(r, T), rho, h)
        assert rho**2 * dalpha == pytest.approx(
            eos.pressure(rho, T), rel=1e-7, abs=1e-7
        )


def test_chemical_potential_derivative():
    rng = np.random.default_rng(11)
    for _ in range(50):
        rho = rng.uniform(0.1, 2.8)
        T = rng.uniform(0.5, 1.2)
        fd = oracles.central_difference(
            lambda r: eos.chemical_potential(r, T), rho, 1e-6 * rho
        )
        assert fd == pytest.approx(
            eos.dchemical_potential_drho(rho, T), rel=1e-6, abs=1e-8
        )


@pytest.mark.parametrize("T", [0.5, 0.7, 0.9])
def test_spinodal_against_grid_scan(T):
    lo, hi = eos.spinodal(T)
    lo_ref, hi_ref = oracles.spinodal_by_grid_scan(T)
    assert lo == pytest.approx(lo_ref, abs=5e-6)
    assert hi == pytest.approx(hi_ref, abs=5e-6)
    assert eos.dpressure_drho(lo, T) == pytest.approx(0.0, abs=1e-10)
    assert eos.dpressure_drho(hi, T) == pytest.approx(0.0, abs=1e-10)


def test_spinodal_supercritical():
    with pytest.raises(SupercriticalError):
        eos.spinodal(1.0)


@pytest.mark.parametrize("T", [0.6, 0.7, 0.8, 0.9, 0.95])
def test_coexistence_against_equal_area(T):
    st_ = eos.maxwell_coexistence(T)
    rv, rl, P_sat = oracles.equal_area_coexistence(T)
    assert st_.rho_v == pytest.approx(rv, abs=1e-8)
    assert st_.rho_l == pytest.approx(rl, abs=1e-8)
    assert st_.P_sat == pytest.approx(P_sat, rel=1e-7)
    dP, dmu = st_.residuals()
    assert abs(dP) <= 1e-10 and abs(dmu) <= 1e-10


def test_coexistence_supercritical():
    with pytest.raises(SupercriticalError):
        eos.maxwell_coexistence(1.2)


def test_near_critical_gap():
    st_ = eos.maxwell_coexistence(0.99)
    assert 0.0 < st_.density_gap < 0.5


def test_gap_decreases_with_temperature():
    gaps = [eos.maxwell_coexistence(T).density_gap
            for T in (0.5, 0.6, 0.7, 0.8, 0.9, 0.95)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_mu_sat_matches_both_bulks():
    st_ = eos.maxwell_coexistence(0.8)
    for rho in (st_.rho_v, st_.rho_l):
        assert eos.chemical_potential(rho, 0.8) == pytest.approx(
            st_.mu_sat, abs=1e-10
        )
        assert eos.pressure(rho, 0.8) == pytest.approx(st_.P_sat, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(T=st.floats(min_value=0.35, max_value=0.985))
def test_coexistence_properties(T):
    state = eos.maxwell_coexistence(T)
    s_lo, s_hi = eos.spinodal(T)
    assert 0.0 < state.rho_v < s_lo < 1.0 < s_hi < state.rho_l < 3.0
    dP, dmu = state.residuals()
    assert abs(dP) <= 1e-10 and abs(dmu) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(T=st.floats(min_value=1.001, max_value=3.0),
       rho=st.floats(min_value=0.01, max_value=2.95))
def test_supercritical_pressure_monotone(T, rho):
    assert eos.dpressure_drho(rho, T) > 0.0


def test_convergence_error_carries_residuals():
    err = ConvergenceError("failed", residuals=(1.0, 2.0))
    assert err.residuals == (1.0, 2.0)
