"""Many-interacting-worlds simulations of a particle in a harmonic trap.

Thin wrapper over the C++ core: density sampling, derivative stencils,
interworld potentials/forces, the velocity-Verlet integrator and the canned
scenario runner.
"""

from ._core import (  # noqa: F401
    CollapseDiagnosis,
    DensityKind,
    DensityModel,
    EnergyBreakdown,
    EquivarianceCoefficients,
    ExternalPotential,
    MiwError,
    Outcome,
    PhysicalParams,
    PotentialSpec,
    ScenarioReport,
    SimulationConfig,
    StencilCoefficients,
    TrajectoryRecord,
    WorldEnsemble,
    build_stencil,
    dimensionless_params,
    equivariance_coefficients,
    from_dimensionless,
    from_dimensionless_time,
    interworld_forces,
    interworld_potential,
    node_gap_width,
    oscillation_amplitude,
    outcome_name,
    run,
    run_scenario,
    scenario_names,
    stencil_residual,
    step,
    to_dimensionless,
    to_dimensionless_time,
    total_energy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
