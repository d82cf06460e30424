class DimensionError(ValueError):
    """Operand shapes or subsystem dimensions are inconsistent."""


class NotHermitianError(ValueError):
    pass


class IncompleteTableError(ValueError):
    """An expectation table is missing entries required for PDM assembly."""

    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(f"({a},{b})" for a, b in self.missing)
        super().__init__(f"table is missing {len(self.missing)} entries: {shown}")


class NonPositiveMarginalError(ValueError):
    """A time-slot marginal of a PDM is not a valid density matrix."""
