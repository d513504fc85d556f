from .check_manager import CheckManager # noqa: F401
from .checks import ( # noqa: F401
    CheckResult,
    check_comparison,
    check_convergence,
    check_convexity,
    check_gradient_bound,
    check_gradient_envelopes,
    check_interior_gradient,
    check_linfty_wedge,
    check_speed,
    check_theta_equation,
    slope_truncation,
)
from .report import VerificationReport, build_report # noqa: F401
