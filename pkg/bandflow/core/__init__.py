from .finite_differences import interior_derivatives, one_sided_first # noqa: F401
from .quadrature import adaptive_integral, cumulative_from_zero # noqa: F401
from .root_finding import Root, monotone_root, expand_lower_bracket # noqa: F401
