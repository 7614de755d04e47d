"""Exception types shared across the package."""


class PiezowaveError(Exception):
    """Base class for all package errors."""


class NonPositiveParameter(PiezowaveError):
    """A physical constant that must be strictly positive is not."""


class NonPositiveAlpha1(PiezowaveError):
    """The reduced stiffness alpha - gamma^2 * beta is not positive."""


class AssumptionViolated(PiezowaveError):
    """An exponent hypothesis fails; the message names the clause."""


class NoConvergence(PiezowaveError):
    """An iterative solve exhausted its budget (tolerance bug, not math)."""


class BlowupDetected(PiezowaveError):
    """A monitored norm crossed the blow-up cutoff."""

    def __init__(self, t, trigger, value):
        self.t = t
        self.trigger = trigger
        self.value = value
        super().__init__(f"{trigger} = {value:.6g} exceeded cutoff at t = {t:.6g}")


class ZeroState(PiezowaveError):
    """Operation undefined on the identically-zero state."""


class DeltaOutOfRange(PiezowaveError):
    """delta must lie strictly between 0 and s_star."""


class NotBlowupRegime(PiezowaveError):
    """Requires source powers to dominate damping powers (n_i > m_i)."""


class BoundInapplicable(PiezowaveError):
    """Hypotheses of the blow-up time bound are not met."""


class NonPositiveSeries(PiezowaveError):
    """Decay fitting needs a strictly positive energy series."""


class ConfigParse(PiezowaveError):
    """A run configuration file could not be parsed."""
