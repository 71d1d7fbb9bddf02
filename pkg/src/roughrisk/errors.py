"""Exception types shared across the package.

The CLI maps these onto process exit codes, so raising the right type
matters more than the message wording.
"""


class ConfigError(ValueError):
    """A simulation or training configuration is invalid or infeasible."""


class DegenerateDataError(ValueError):
    """Training data cannot support a model (e.g. a single decision class)."""


class SchemaMismatchError(ValueError):
    """Data columns do not cover the attributes a model requires."""

    def __init__(self, missing: tuple[str, ...]):
        self.missing = tuple(missing)
        super().__init__(
            "data is missing model attributes: " + ", ".join(self.missing)
        )


class ModelFormatError(ValueError):
    """A model file is unreadable or structurally invalid."""


class CapacityError(ValueError):
    """An exhaustive search was asked to cover too large a space."""
