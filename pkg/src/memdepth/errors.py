"""Exception hierarchy. Everything subclasses ``ValueError`` so callers can
catch bad input generically."""


class MemdepthError(ValueError):
    pass


class DimensionError(MemdepthError):
    """Operand shapes are incompatible with the requested operation."""


class InvalidStateError(MemdepthError):
    """A density matrix or Bloch vector is not a physical qubit state."""


class InvalidUnitaryError(MemdepthError):
    pass


class SizeLimitError(MemdepthError):
    """The simulation would exceed the supported register size."""
