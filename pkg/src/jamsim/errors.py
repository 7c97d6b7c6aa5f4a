"""Exception types raised by the jamsim library."""


class JamsimError(ValueError):
    """Base class for all library errors."""


class DegenerateSplitError(JamsimError):
    """The energy split leaves no data-phase power (p_d = 0 or eta = T)."""


class UnboundedLimitError(JamsimError):
    """The large-antenna limit is infinite because a jamming phase is silent."""


class NoTrainingError(JamsimError):
    """Channel estimation was requested without any training energy."""


class NonSymmetricFadingError(JamsimError):
    """A symmetric-fading formula was applied to unequal user gains."""
