from .coefficients import ConstantPair, RationalBumpPair, TabulatedPair, validate # noqa: F401
from .waves import solve_c_of_h, solve_cbar, stationary_profile # noqa: F401

__version__ = "0.1.0"
