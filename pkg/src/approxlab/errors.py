"""Exception types shared across the toolkit.

Every refusal carries enough context to act on: parse errors name the
line, budget errors name the estimate that tripped, model errors name
the offending tuple.
"""


class ApproxLabError(Exception):
    """Base class for all toolkit errors."""


class MalformedCircuitError(ApproxLabError):
    """Circuit structure violates the gate contract (dangling child, bad arity)."""


class ResourceBudgetError(ApproxLabError):
    """A search-space estimate exceeded the configured budget."""

    def __init__(self, message: str, estimate: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class IncompleteModelError(ApproxLabError):
    """An op table lookup failed and lazy extension is disabled."""


class DegenerateModelError(ApproxLabError):
    """A quantity is undefined for this model (e.g. max error density d = 0)."""


class FusionDegenerateError(ApproxLabError):
    """Fusion construction input is degenerate (no usable semi-filters)."""


class NotACoverError(ApproxLabError):
    """A pair or tuple collection fails to cover the required family."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NoAnticheckersError(ApproxLabError):
    """The target function is computable within the size bound, so no antichecker set exists."""


class PreconditionError(ApproxLabError):
    """An operation's precondition was not established (e.g. projectivity check missing)."""


class MalformedCertificateError(ApproxLabError):
    """A certificate references unknown members or carries inconsistent structure."""


class ParseError(ApproxLabError):
    """A text format failed to parse; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
