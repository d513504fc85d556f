from .evolve import EvolveControls, domination_time, evolve # noqa: F401
from .grid import Grid, GridState # noqa: F401
from .initial_data import ( # noqa: F401
    FunctionDatum,
    InitialDatum,
    RhoDatum,
    TabulatedDatum,
    WaveDatum,
    check_admissible,
    exponential_datum,
    make_rho,
    perturbed_datum,
)
from .operators import ( # noqa: F401
    boundary_residual,
    derivatives,
    interior_rhs,
    rhs,
    theta_of,
    theta_rhs,
    wall_resolution,
)
from .steppers import ExplicitStepper, SemiImplicitStepper, TimeStepper, make_stepper, step # noqa: F401
from .trace import EvolveTrace # noqa: F401
