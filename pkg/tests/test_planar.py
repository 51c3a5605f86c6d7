"""Planar interface profile, surface tension routes, and stationarity."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from capillarity import planar
from capillarity.errors import DomainError, GeometryError

import oracles


def tanh_profile(params, eps=0.7, mid=1.0, gap=1.3, n=4001, span=30.0):
    x = np.linspace(-span * eps, span * eps, n)
    rho = mid + 0.5 * gap * np.tanh(x / (2.0 * eps))
    return x, rho


def test_params_validation():
    with pytest.raises((DomainError, ValueError)):
        planar.CapillarityParams(lam=0.0, T=0.9)
    with pytest.raises((DomainError, ValueError)):
        planar.CapillarityParams(lam=1.0, T=1.0)


def test_profile_validation(params09):
    with pytest.raises(ValueError):
        planar.DensityProfile(
            coordinate=np.linspace(0, 1, 8), density=np.linspace(0.4, 1.6, 8),
            geometry="planar", params=params09,
        )
    x = np.linspace(0, 1, 32)
    x[5] = x[4]  # not strictly increasing
    with pytest.raises(ValueError):
        planar.DensityProfile(
            coordinate=x, density=np.linspace(0.4, 1.6, 32),
            geometry="planar", params=params09,
        )


def test_excess_potential_gauge(coex09):
    # exactly zero at both bulks, positive strictly between
    assert planar.excess_grand_potential(coex09.rho_v, coex09) == pytest.approx(
        0.0, abs=1e-15
    )
    assert planar.excess_grand_potential(coex09.rho_l, coex09) == pytest.approx(
        0.0, abs=1e-15
    )
    interior = np.linspace(coex09.rho_v + 0.01, coex09.rho_l - 0.01, 50)
    assert np.all(planar.excess_grand_potential(interior, coex09) > 0.0)


def test_excess_potential_domain(coex09):
    with pytest.raises(DomainError):
        planar.excess_grand_potential(coex09.rho_v - 0.05, coex09)
    with pytest.raises(DomainError):
        planar.excess_grand_potential(coex09.rho_l + 0.05, coex09)


def test_profile_shape(params09, flat09, coex09):
    rho = flat09.density
    # monotone overall; the bulk pads are flat by construction
    assert np.all(np.diff(rho) >= 0.0)
    core = (rho > rho[0] + 1e-6) & (rho < rho[-1] - 1e-6)
    assert np.all(np.diff(rho[core]) > 0.0)
    assert abs(rho[0] - coex09.rho_v) < 1e-8
    assert abs(rho[-1] - coex09.rho_l) < 1e-8


def test_gradient_integral_on_synthetic_tanh(params09):
    eps, gap = 0.7, 1.3
    x, rho = tanh_profile(params09, eps=eps, gap=gap)
    exact = gap**2 / (6.0 * eps)  # closed form for the tanh step
    assert planar.gradient_squared_integral(x, rho) == pytest.approx(
        exact, rel=1e-9
    )
    assert oracles.trapezoid_sigma(x, rho, 1.0) == pytest.approx(exact, rel=1e-8)


def test_thickness_on_synthetic_tanh(params09):
    eps = 0.55
    x, rho = tanh_profile(params09, eps=eps)
    prof = planar.DensityProfile(coordinate=x, density=rho,
                                 geometry="planar", params=params09)
    exact = 4.0 * eps * np.arctanh(0.8)  # 10-90% rise width
    assert planar.interface_thickness(prof) == pytest.approx(exact, rel=1e-6)
    # flipped (decreasing) profile reports the same width
    flipped = planar.DensityProfile(coordinate=x, density=rho[::-1].copy(),
                                    geometry="planar", params=params09)
    assert planar.interface_thickness(flipped) == pytest.approx(exact, rel=1e-6)


def test_sigma_routes_agree(params09):
    report = planar.surface_tension_report(params09)
    assert report.rel_discrepancy < 1e-10
    assert report.sigma_integral > 0.0


def test_sigma_against_dense_trapezoid(params09, flat09):
    sigma_ref = oracles.trapezoid_sigma(
        flat09.coordinate, flat09.density, params09.lam
    )
    assert planar.sigma_integral(flat09) == pytest.approx(sigma_ref, rel=1e-7)


def test_sigma_integral_rejects_spherical(params09, flat09):
    spherical = planar.DensityProfile(
        coordinate=flat09.coordinate - flat09.coordinate[0] + 1.0,
        density=flat09.density, geometry="spherical", params=params09,
    )
    with pytest.raises(GeometryError):
        planar.sigma_integral(spherical)


@pytest.mark.parametrize("kappa", [0.5, 2.0, 4.0])
def test_lambda_scaling(params09, kappa):
    scaled = planar.CapillarityParams(lam=kappa * params09.lam, T=params09.T)
    s1 = planar.sigma_quadrature(params09)
    s2 = planar.sigma_quadrature(scaled)
    assert s2 == pytest.approx(np.sqrt(kappa) * s1, rel=1e-12)
    w1 = planar.interface_thickness(planar.planar_profile(params09))
    w2 = planar.interface_thickness(planar.planar_profile(scaled))
    assert w2 == pytest.approx(np.sqrt(kappa) * w1, rel=1e-8)


def test_stationarity_refines_at_second_order(params09):
    res = [
        planar.discrete_energy_stationarity(
            planar.planar_profile(params09, n_points=n)
        )
        for n in (200, 400, 800)
    ]
    orders = [np.log2(a / b) for a, b in zip(res, res[1:])]
    assert all(o > 1.7 for o in orders)


def test_stationarity_detects_perturbation(params09, flat09):
    base = planar.discrete_energy_stationarity(flat09)
    x = flat09.coordinate
    bump = 0.01 * np.exp(-((x - x[len(x) // 2]) ** 2))
    perturbed = planar.DensityProfile(
        coordinate=x, density=flat09.density + bump,
        geometry="planar", params=flat09.params,
    )
    assert planar.discrete_energy_stationarity(perturbed) > 50.0 * base


def test_uniform_spacing_route(params09):
    prof = planar.planar_profile(params09, n_points=600, spacing="uniform")
    sigma = planar.sigma_integral(prof)
    assert sigma == pytest.approx(planar.sigma_quadrature(params09), rel=1e-6)


@settings(max_examples=12, deadline=None)
@given(T=st.floats(min_value=0.55, max_value=0.96),
       lam=st.floats(min_value=0.25, max_value=4.0))
def test_route_equivalence_property(T, lam):
    report = planar.surface_tension_report(
        planar.CapillarityParams(lam=lam, T=T)
    )
    assert report.rel_discrepancy < 1e-6
    assert report.sigma_quadrature > 0.0
