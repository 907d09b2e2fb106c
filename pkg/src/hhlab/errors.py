"""Exception types shared across the package."""


class HHLabError(Exception):
    """Base class for all package errors."""


class FieldMismatch(HHLabError):
    pass


class IncompatibleBimodule(HHLabError):
    pass


class NotASubspace(HHLabError):
    pass


class DegreeTooLarge(HHLabError):
    """A differential would exceed the configured dense-size budget."""

    def __init__(self, degree, estimate, budget):
        self.degree = degree
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"differential at degree {degree} needs {estimate} dense entries, "
            f"budget is {budget}"
        )


class NotADerivation(HHLabError):
    pass


class BlockStructureViolated(HHLabError):
    """A derivation of a triangular algebra has entries outside the allowed
    block pattern.  Signals an internal bug: solved derivations never do."""


class CoverConditionViolated(HHLabError):
    pass


class HypothesisUnverifiable(HHLabError):
    pass


class NotProjective(HHLabError):
    pass


class WorkspaceError(HHLabError):
    """Base for input-file problems (exit code 2 in the CLI)."""


class ParseError(WorkspaceError):
    pass


class UnresolvedReference(WorkspaceError):
    pass


class ValidationFailed(WorkspaceError):
    pass
