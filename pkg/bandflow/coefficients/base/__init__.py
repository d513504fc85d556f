from .pair import CoefficientPair, CoefficientValues, Extrema, sample_slopes # noqa: F401
