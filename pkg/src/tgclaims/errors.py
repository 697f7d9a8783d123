class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class UndefinedHazardError(ValueError):
    """A (reversed) hazard rate was requested where its denominator vanishes."""


class ArityError(ValueError):
    """Wrong number of risks, samples or coordinates."""
