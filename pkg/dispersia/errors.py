"""
Exception classes of Dispersia.

All errors derive from :class:`DispersiaError`.
The command line entry point (:mod:`dispersia.__main__`) maps them to exit codes.
"""

from __future__ import annotations

from typing import Any, Optional


class DispersiaError(Exception):
    """
    Base class for all errors raised by Dispersia.
    """


class ParameterDomainError(DispersiaError, ValueError):
    """
    Invalid distribution parameters, e.g. a non-positive scale.
    """


class DomainError(DispersiaError, ValueError):
    """
    Argument outside the domain of a function, e.g. a probability outside (0,1).
    """


class DataError(DispersiaError):
    """
    Problem with the input data.
    """


class DataDomainError(DataError, ValueError):
    """
    A datum outside the support of the family, e.g. a zero for a gamma fit.
    """


class DegenerateDataError(DataError):
    """
    The data do not identify the estimate, e.g. all values equal.
    """


class EmptyFileError(DataError):
    """
    CSV file without header or without rows.
    """


class MissingColumnError(DataError, KeyError):
    """
    The requested CSV column does not exist.
    """

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CsvParseError(DataError):
    """
    A non-numeric or non-finite cell.
    """

    def __init__(self, msg: str, row: int):
        """
        :param msg:
        :param row: data row number, 1-based, header excluded
        """
        super().__init__("row %i: %s" % (row, msg))
        self.row = row


class ChecksumError(DataError):
    """
    A file does not match its pinned SHA-256 digest, or the pin is unusable.
    """


class ConvergenceError(DispersiaError):
    """
    An iterative solver did not converge.
    """

    def __init__(self, msg: str, last_iterate: Any = None, iterations: Optional[int] = None):
        """
        :param msg:
        :param last_iterate: whatever the solver had when it gave up
        :param iterations:
        """
        super().__init__(msg)
        self.last_iterate = last_iterate
        self.iterations = iterations


class ModelInconsistencyError(DispersiaError, ValueError):
    """
    The variance function does not reproduce the population variance at the mean.
    """


class BinningError(DispersiaError, ValueError):
    """
    Invalid binning for the chi-square test.
    """


class ConfigError(DispersiaError):
    """
    Schema violation in an experiment config.
    """

    def __init__(self, msg: str, key_path: str = ""):
        """
        :param msg:
        :param key_path: e.g. "fixed_params.scale"
        """
        super().__init__("%s: %s" % (key_path, msg) if key_path else msg)
        self.key_path = key_path
