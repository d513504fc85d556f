class BandflowError(Exception):
    """
    Base class of every error raised by bandflow.
    """


class CoefficientDomainError(BandflowError, ValueError):
    def __init__(self, family: str, parameter: str, message: str = ""):
        self.family = family
        self.parameter = parameter
        text = f"{family} coefficients: parameter '{parameter}' gives a non-finite or inadmissible value"
        if message:
            text += f" ({message})"
        super().__init__(text)


class HypothesisViolationError(BandflowError):
    def __init__(self, inequality: str, **measured: float):
        self.inequality = inequality
        self.measured = measured
        details = ", ".join(f"{k}={v:.6g}" for k, v in measured.items())
        super().__init__(f"hypothesis violated: {inequality}" + (f" [{details}]" if details else ""))


class M1TooSmallError(HypothesisViolationError):
    def __init__(self, m1: float, threshold: float):
        self.threshold = threshold
        super().__init__("M1 > max(phi(x;0) + M)", M1=m1, threshold=threshold)


class DivergentIntegralError(BandflowError):
    def __init__(self, c: float):
        self.c = c
        super().__init__(f"span integral diverges for c={c!r} when b vanishes; c > 0 is required")


class QuadratureAccuracyError(BandflowError):
    def __init__(self, estimate: float, error: float, message: str = ""):
        self.estimate = estimate
        self.error = error
        super().__init__(
            f"quadrature did not converge: estimate={estimate:.17g}, error={error:.3g}"
            + (f" ({message})" if message else "")
        )


class IncompatibleDatumError(BandflowError):
    pass


class BlowUpError(BandflowError):
    def __init__(self, message: str, state, t: float):
        self.state = state  # last good GridState
        self.t = t
        super().__init__(f"{message} (last good time t={t:.6g})")


class IncompatibleTracesError(BandflowError):
    pass


class InsufficientDataError(BandflowError):
    pass


class DependencyError(BandflowError):
    pass


class ConfigurationError(BandflowError):
    pass
