from enum import Enum


class CoefficientFamily(str, Enum):
    CONSTANT = "constant"
    RATIONAL_BUMP = "rational-bump"
    TABULATED = "user-tabulated"


class Side(int, Enum):
    LEFT = -1
    RIGHT = 1


class Scheme(str, Enum):
    SEMI_IMPLICIT = "semi-implicit"
    EXPLICIT = "explicit"


class DatumKind(str, Enum):
    RHO = "rho"
    USER = "user-function"
    TABULATED = "tabulated"
    WAVE = "wave"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"
    PARTIAL = "partial"


class ExitCode(int, Enum):
    OK = 0
    VERIFICATION_FAILED = 1
    USAGE = 2
    BLOW_UP = 3


# Numerical defaults
QUAD_RTOL = 1e-10
QUAD_ATOL = 1e-14
ROOT_TOL = 1e-10
PROFILE_NODES = 2048
EXTREMA_NODES = 4096
CFL = 0.4
SLOPE_CAP = 1e3
RESOLUTION_CAP = 0.2
EPSILON = 0.1
CSV_FORMAT = "%.17g"
