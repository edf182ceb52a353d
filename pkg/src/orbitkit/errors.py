"""Exceptions raised by orbitkit."""


class OrbitkitError(Exception):
    pass


class BudgetExceeded(OrbitkitError):
    """An enumeration would visit more points than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} points, budget is {budget}")


class InternalConsistencyError(OrbitkitError):
    """A computed quantity contradicts a theorem; this points at a bug."""


class VerificationError(InternalConsistencyError):
    """A certificate check failed; ``report`` carries the evidence."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
