"""Exception types shared across the package."""


class HypothesisError(ValueError):
    """An input does not satisfy a hypothesis required by a result.

    ``hypothesis`` names the violated condition (``"irreducible"``,
    ``"positive semidefinite"``, ...) so callers can report it.
    """

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"input is not {hypothesis}")


class ConvergenceError(RuntimeError):
    """An iteration did not converge; carries the last Collatz-Wielandt bracket."""

    def __init__(self, message, lower=None, upper=None, iterations=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.iterations = iterations


class InvariantError(RuntimeError):
    """An internal consistency check failed (a bug or a tolerance problem)."""


class LogIndexInconsistency(InvariantError):
    """Reported log indices did not survive verification against direct iteration."""


class AmbiguousFiedlerError(InvariantError):
    """The sign pattern of a computed Fiedler vector is ambiguous within tolerance."""
