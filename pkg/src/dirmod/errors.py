"""Exception hierarchy shared by all dirmod modules."""


class DirmodError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrderError(DirmodError):
    """Constellation order is not a valid M-PSK order (M < 2)."""


class SingularPhaseError(DirmodError):
    """A phase angle sits on (or too close to) a tan() singularity."""


class InfeasibleDesignError(DirmodError):
    """The requested precoder does not exist for this channel/symbol pair.

    Raised both when the null space needed by the equality constraints is
    empty (2*N_t - r' <= 0) and when the reduced inequality system has no
    solution.
    """


class CapabilityError(DirmodError):
    """An estimator or precoder is asked to run outside its antenna regime
    (e.g. ZF estimation of an N_t-vector from fewer than N_t observations).
    """


class NumericalError(DirmodError):
    """A linear-algebra kernel failed (singular system, NNLS did not
    converge, ...).  The message carries a condition estimate or iterate
    where one is available."""


class TableSizeError(DirmodError):
    """A brute-force lookup table would exceed the configured entry cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"lookup table needs {required} entries, cap is {cap}"
        )


class ConfigError(DirmodError):
    """Bad scenario configuration (unknown keys, inconsistent antenna
    counts, malformed sweep values, ...)."""
