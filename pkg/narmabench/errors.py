"""Define public errors and exceptions."""
from typing import Any, Optional


class InvalidArgumentError(ValueError):
    """Indicate that an argument violates the precondition of an operation."""


class UndefinedMetricError(ArithmeticError):
    """Indicate that a metric can not be computed on the given data."""


class DivergenceError(RuntimeError):
    """
    Indicate that the training produced a non-finite loss or activation.

    The last parameters which still gave a finite loss are attached as ``checkpoint``.
    """

    def __init__(
        self, message: str, checkpoint: Optional[Any] = None, epoch: int = 0
    ) -> None:
        """
        Initialize with the given values.

        :param message: description of the divergence
        :param checkpoint: last parameters with a finite loss
        :param epoch: number of epochs completed when the checkpoint was taken
        """
        super().__init__(message)
        self.checkpoint = checkpoint
        self.epoch = epoch


class ConfigError(ValueError):
    """Indicate that a configuration file could not be parsed."""

    def __init__(self, message: str, path: str = "<string>", line: int = 0) -> None:
        """
        Initialize with the given values.

        :param message: what went wrong
        :param path: path to the configuration file
        :param line: 1-based line number, 0 if unknown
        """
        if line > 0:
            text = "{}:{}: {}".format(path, line, message)
        else:
            text = "{}: {}".format(path, message)

        super().__init__(text)
        self.path = path
        self.line = line
