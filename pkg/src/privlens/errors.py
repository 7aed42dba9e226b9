"""Exception types shared across the toolkit."""


class PrivlensError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(PrivlensError):
    """Invalid configuration. Carries every violation found, not just the first."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SchemaMismatchError(PrivlensError):
    """More than half of an input file failed to parse."""


class InsufficientDataError(PrivlensError):
    """An operation was asked to run on data that cannot support it."""


class StageError(PrivlensError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
