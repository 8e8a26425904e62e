"""Exception hierarchy shared across the toolkit.

Two broad families matter to callers: :class:`InputDataError` covers
malformed or unusable input data (the CLI maps it to exit code 2), and
:class:`ComputationError` covers numerical failures during model fitting
(exit code 3).
"""

from __future__ import annotations


class HeliosError(Exception):
    """Base class for all toolkit errors."""


class InputDataError(HeliosError):
    """Input data is malformed, inconsistent, or unusable."""


class ComputationError(HeliosError):
    """A numerical procedure failed to produce a result."""


class ParseError(InputDataError):
    """A CSV file failed to parse; carries file and line context."""

    def __init__(self, path: str, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class UnknownCategory(InputDataError, ValueError):
    """Sky-cover string is not one of the five known categories."""


class OutOfRange(InputDataError, ValueError):
    """A numeric value falls outside its documented range."""


class LengthMismatch(InputDataError, ValueError):
    """Paired sequences have different lengths."""


class EmptySample(InputDataError, ValueError):
    """An operation that needs at least one value received none."""


class TooShort(InputDataError, ValueError):
    """A series is too short for the requested computation."""


class ConstantSeries(InputDataError, ValueError):
    """A series has zero variance where variation is required."""


class ConstantVector(InputDataError, ValueError):
    """A vector has zero variance where variation is required."""


class ZeroActual(InputDataError, ValueError):
    """A percentage error was requested against a zero actual value."""


class DegenerateRange(InputDataError, ValueError):
    """A normalization range has min equal to max."""


class DimensionMismatch(InputDataError, ValueError):
    """An input vector does not match the model's expected width."""


class NoGeneration(InputDataError, ValueError):
    """Every day in the energy series has zero generation."""


class NoUsableRows(InputDataError, ValueError):
    """No dataset row carries the complete inputs an evaluation needs."""


class UnknownVariable(InputDataError, ValueError):
    """A variable name does not belong to the model or candidate set."""


class SingularSystem(ComputationError):
    """The damped normal equations stayed unsolvable up to maximum damping."""
