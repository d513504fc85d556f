from .base import CoefficientPair, Extrema # noqa: F401
from .constant import ConstantPair # noqa: F401
from .rational_bump import RationalBumpPair # noqa: F401
from .tabulated import TabulatedPair # noqa: F401
from .validation import Requirement, ValidationReport, condition_integral, validate # noqa: F401
