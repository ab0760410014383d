"""Exception types shared across the package."""


class WarbenchError(Exception):
    """Base class for all package errors."""


class ParameterError(WarbenchError, ValueError):
    """A numeric parameter is outside its admissible domain."""


class InputError(WarbenchError, ValueError):
    """Structurally invalid input (wrong length, wrong shape, ...)."""


class EnumerationLimitError(WarbenchError, ValueError):
    """Exact path enumeration was requested beyond the supported horizon."""


class ConfigError(WarbenchError, ValueError):
    """Scenario document failed validation.

    Carries the full list of field-level problems, not just the first one.
    Each entry is a dict with ``field`` and ``message`` keys.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"{e['field']}: {e['message']}" for e in self.errors)
        super().__init__(f"invalid scenario config: {lines}")
