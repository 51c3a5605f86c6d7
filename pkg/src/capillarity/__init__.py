"""Numerical capillarity toolkit: diffuse and sharp liquid-vapor interfaces."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    FitDegeneracyError,
    GeometryError,
    NoSolutionError,
    SupercriticalError,
)
from .eos import (
    CoexistenceState,
    chemical_potential,
    free_energy,
    maxwell_coexistence,
    pressure,
    spinodal,
)
from .planar import (
    CapillarityParams,
    DensityProfile,
    SurfaceTensionReport,
    coexistence,
    discrete_energy_stationarity,
    interface_thickness,
    planar_profile,
    sigma_integral,
    sigma_quadrature,
    surface_tension_report,
)
from .droplet import (
    DropletSolution,
    LaplaceFit,
    LaplacePoint,
    dividing_radius,
    laplace_sweep,
    pressure_jump,
    solve_droplet,
    solve_droplet_at_radius,
)
from .sharp import (
    RegularizedFamily,
    SharpModel,
    SupportOverflowError,
    TestFunction,
    calibrate_mu,
    convergence_table,
    distribution_pairing,
    integrated_normal_jump,
    pressure_jump_sharp,
    sharp_equilibrium_residual,
    sigma_sharp,
    surface_value,
)
