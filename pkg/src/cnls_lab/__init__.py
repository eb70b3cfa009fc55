"""Numerical lab for standing waves of coupled cubic Schrodinger systems.

Core objects: grids and field pairs (``fields``), the explicit wave family
(``waves``), conserved functionals and degenerate expansions
(``functionals``), linearized operators (``linops``), modulation
coordinates and the Lyapunov pair (``modulation``), time integration
(``dynamics``), and experiment orchestration (``lab``).  The HTTP service
lives in ``cnls_lab.service`` and the CLI in ``cnls_lab.cli``.
"""

from .dynamics import EvolveConfig, RunRecord, evolve, step
from .fields import Coupling, FieldPair, Grid, Params, make_grid
from .functionals import (
    DegenerateCoefficients,
    action,
    action_gradient,
    charge,
    degenerate_coefficients,
    energy,
    energy_gradient,
    expansion_order_report,
    quartic_identity_report,
)
from .lab import (
    SingleRunConfig,
    SweepConfig,
    SweepRow,
    expansion_check_job,
    run_single,
    run_sweep,
    spectral_report_job,
)
from .linops import (
    hessian_constrained_minimum,
    hessian_form,
    linearized_operator,
    lowest_eigenpairs,
    scalar_constrained_minimum,
)
from .modulation import (
    Decomposition,
    decompose,
    lyapunov_moment,
    lyapunov_rate,
    orbital_distance,
    tube_radius,
)
from .waves import (
    SolitonProfile,
    charge_matched_seed,
    partner_wave,
    perturbed_wave,
    semitrivial_wave,
    soliton,
)

__version__ = "0.1.0"

__all__ = [
    "Coupling",
    "Decomposition",
    "DegenerateCoefficients",
    "EvolveConfig",
    "FieldPair",
    "Grid",
    "Params",
    "RunRecord",
    "SingleRunConfig",
    "SolitonProfile",
    "SweepConfig",
    "SweepRow",
    "action",
    "action_gradient",
    "charge",
    "charge_matched_seed",
    "decompose",
    "degenerate_coefficients",
    "energy",
    "energy_gradient",
    "evolve",
    "expansion_check_job",
    "expansion_order_report",
    "hessian_constrained_minimum",
    "hessian_form",
    "linearized_operator",
    "lowest_eigenpairs",
    "lyapunov_moment",
    "lyapunov_rate",
    "make_grid",
    "orbital_distance",
    "partner_wave",
    "perturbed_wave",
    "quartic_identity_report",
    "run_single",
    "run_sweep",
    "scalar_constrained_minimum",
    "semitrivial_wave",
    "soliton",
    "spectral_report_job",
    "step",
    "tube_radius",
    "__version__",
]
