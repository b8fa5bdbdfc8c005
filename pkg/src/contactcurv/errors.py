"""Exception hierarchy shared by all modules."""


class ContactCurvError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(ContactCurvError):
    """Ambient structure data is inconsistent (bad dimensions, broken identities)."""


class DataError(ContactCurvError):
    """Input arrays contain NaN/inf or are otherwise unusable."""


class DomainError(ContactCurvError):
    """An argument is outside the domain of the operation (non-unit vector, bad index...)."""


class HypothesisViolationError(ContactCurvError):
    """The structure vector is not tangent to the submanifold.

    Kept distinct from DomainError because every curvature bound checked
    here assumes the structure vector is tangent.
    """


class DegenerateClassificationError(ContactCurvError):
    """Classification is undefined (no tangent direction orthogonal to xi)."""


class ConfigurationError(ContactCurvError):
    """Scenario / request is inconsistent with the point it is applied to."""
