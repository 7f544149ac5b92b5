"""Exception and warning types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes, lengths, or qubit counts."""


class InvalidGateError(ValueError):
    """Gate is malformed or addresses qubits outside the register."""


class DegenerateDataError(ValueError):
    """Data has no variation where variation is required."""


class CsvParseError(ValueError):
    """A CSV file does not conform to the sample schema."""


class InvalidLabelsError(ValueError):
    """Label set is unusable for training (single class, unknown or missing labels)."""


class ConvergenceWarning(UserWarning):
    """Dual solver hit its sweep cap before meeting the KKT tolerance."""
