"""Exception types shared across the package."""


class QRecallError(Exception):
    """Base class for all library errors."""


class ModulusMismatchError(QRecallError):
    """Group elements from different cyclic groups were combined."""


class SchemaError(QRecallError):
    """A scenario document is structurally invalid."""


class ValidationError(QRecallError):
    """A mathematical object failed an invariant at construction time."""


class NotHermitianError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class NotUnitTraceError(ValidationError):
    pass


class NotOrthonormalError(ValidationError):
    pass


class InvalidAmplitudesError(ValidationError):
    """Amplitude vector outside the admissible range (e.g. |h(k)| > 1)."""


class NotInvertibleError(QRecallError):
    """Channel inversion requested for an amplitude function touching zero."""


class OutsideDomainError(QRecallError):
    """Normalized channel applied to a state outside its domain."""

    def __init__(self, message: str, trace_value: float = 0.0):
        super().__init__(message)
        self.trace_value = trace_value


class OutcomeImpossibleError(QRecallError):
    """Conditional state requested for an outcome of zero probability."""

    def __init__(self, message: str, probability: float = 0.0):
        super().__init__(message)
        self.probability = probability


class DimensionTooLargeError(QRecallError):
    """Dense three-party computation requested above the memory guard."""


class NonFlatBasisError(QRecallError):
    """Unitary-key recovery needs a basis with constant-modulus entries."""
