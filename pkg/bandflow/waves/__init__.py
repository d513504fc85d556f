from .profile import Profile # noqa: F401
from .span import comparison_spans, span, span_h, x_h, x_minus, x_plus # noqa: F401
from .traveling_wave import ( # noqa: F401
    StationaryProfile,
    WaveSolution,
    reconstruct_profile,
    shoot_profile,
    solve_c_of_h,
    solve_cbar,
    stationary_profile,
)
