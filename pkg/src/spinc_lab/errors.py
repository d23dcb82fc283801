"""Exception types shared across the package."""


class ExcludedRegimeError(ValueError):
    """Input violates a hypothesis under which the results are stated."""


class InvariantError(RuntimeError):
    """An identity that must hold by construction failed; indicates a bug."""
