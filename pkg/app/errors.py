"""Exception hierarchy shared by every park-sim module."""
from typing import List, Optional


class ParkSimError(Exception):
    """Base class for park-sim exceptions."""
    pass


class ModelAssumptionError(ParkSimError, ValueError):
    """An input violates a modelling assumption (p outside (0, 1], negative times, ...)."""
    pass


class ConfigError(ParkSimError):
    """Configuration could not be read or failed schema validation."""

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = list(violations or [])

    def __str__(self) -> str:
        base = super().__str__()
        if not self.violations:
            return base
        return base + "\n  - " + "\n  - ".join(self.violations)


class SolverError(ParkSimError):
    """Value iteration failed to converge."""
    pass


class TraceExhaustedError(ParkSimError):
    """The simulation clock ran past the end of a probability trace."""

    def __init__(self, lot: int, clock: float, trace_end: float):
        super().__init__(
            f"trace for lot {lot} ends at minute {trace_end:.2f} but the episode "
            f"needed a value at minute {clock:.2f}; extend the trace or shorten the search horizon"
        )
        self.lot = lot
        self.clock = clock
        self.trace_end = trace_end


class DataFileError(ParkSimError, FileNotFoundError):
    """Ingest input files are missing or malformed."""
    pass
