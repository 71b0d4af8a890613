"""
The global :data:`log` and its :class:`Log` class.

Messages go through ``print`` into one of six verbosity streams::

    from dispersia.log import log
    print("Fitted gamma, shape %f" % shape, file=log.v4)

Verbosity 2 carries results and warnings, 3..5 progress and details, 0 errors only.
"""

from __future__ import annotations

import io
import logging
import os
import string
import sys
import time
from threading import RLock
from typing import List, Optional, Set, Union

LoggerName = "dispersia"
NumVerbosityLevels = 6

# verbosity -> logging level, lower verbosity is more important
VerbosityLevels = (
    logging.ERROR,
    logging.INFO + 1,
    logging.INFO,
    logging.DEBUG + 2,
    logging.DEBUG + 1,
    logging.DEBUG,
)

_DateFormat = "%Y-%m-%d,%H:%M:%S"


def _make_formatter(name: Optional[str]) -> logging.Formatter:
    if name == "timed":
        return logging.Formatter("%(asctime)s %(message)s", datefmt=_DateFormat)
    if name == "verbose":
        return logging.Formatter("%(levelname)s - %(asctime)s %(message)s", datefmt=_DateFormat)
    # "default" and "raw"
    return logging.Formatter("%(message)s")


class LevelStream:
    """
    File-like object for ``print(..., file=stream)``.
    Buffers until end of line, then passes each complete line to the logger at a fixed level.
    """

    def __init__(self, logger: logging.Logger, level: int):
        self.logger = logger
        self.level = level
        self._buf = io.StringIO()
        self._lock = RLock()

    def write(self, msg: str):
        """
        :param msg: any part of a line, or several lines
        """
        with self._lock:
            *complete, rest = msg.split("\n")
            for part in complete:
                self._buf.write(part)
                self._emit()
            self._buf.write(rest)

    def _emit(self):
        line = self._buf.getvalue()
        self._buf = io.StringIO()
        self.logger.log(self.level, line)

    def flush(self):
        """
        Writes a pending partial line.
        """
        with self._lock:
            if self._buf.getvalue():
                self._emit()


class StdoutHandler(logging.Handler):
    """
    Writes to whatever ``sys.stdout`` is at the time of the record,
    so that redirections of stdout are honored.
    """

    def emit(self, record: logging.LogRecord):
        """
        :param record:
        """
        try:
            sys.stdout.write(self.format(record) + "\n")
        except Exception:  # noqa
            self.handleError(record)

    def flush(self):
        """
        Flushes stdout.
        """
        sys.stdout.flush()


class Log:
    """
    Holds the six verbosity streams ``v0`` .. ``v5`` on the "dispersia" logger.
    """

    def __init__(self):
        self.initialized = False
        self.logger = logging.getLogger(LoggerName)
        self.filename = None  # type: Optional[str]
        self.v0 = self.v1 = self.v2 = self.v3 = self.v4 = self.v5 = None  # type: Optional[LevelStream]
        self._printed_warning_history = set()  # type: Set[str]

    @property
    def streams(self) -> List[LevelStream]:
        """
        :return: v0 .. v5
        """
        return [getattr(self, "v%i" % i) for i in range(NumVerbosityLevels)]

    def _make_handler(self, target: Union[str, logging.Handler]) -> logging.Handler:
        if isinstance(target, logging.Handler):
            return target
        if target == "stdout":
            return StdoutHandler()
        if "$" in target:
            target = string.Template(target).substitute(date=time.strftime("%Y-%m-%d-%H-%M-%S", time.gmtime()))
        if not os.path.isdir(os.path.dirname(os.path.abspath(target))):
            raise OSError("log directory does not exist for %r" % target)
        self.filename = target
        return logging.FileHandler(target)

    def initialize(self, logs=None, verbosity=None, formatter=None, propagate=False):
        """
        Resets and configures the "dispersia" logger.
        Also forgets which warnings were printed.

        :param list[str|logging.Handler] logs: "stdout", a filename, where "$date" is substituted,
          or a handler. "stdout" is always added unless propagate is set.
        :param list[int] verbosity: 0..5 per log target. A single value applies to all, the default is 3
        :param list[str] formatter: "default", "timed", "raw" or "verbose", per log target or a single one for all
        :param bool propagate: pass records on to the root logger
        """
        self.close()
        logs = list(logs or [])
        verbosity = list(verbosity or [])
        formatter = list(formatter or [])
        if "stdout" not in logs and not propagate:
            logs.append("stdout")
        if len(verbosity) == 1:
            verbosity *= len(logs)
        if len(formatter) == 1:
            formatter *= len(logs)
        self.logger.propagate = propagate
        self.logger.setLevel(logging.DEBUG)
        for level, name in ((logging.DEBUG + 2, "DEBUG"), (logging.DEBUG + 1, "DEBUG"), (logging.INFO + 1, "INFO")):
            logging.addLevelName(level, name)
        for i, target in enumerate(logs):
            v = verbosity[i] if i < len(verbosity) else 3
            if not 0 <= v < NumVerbosityLevels:
                raise ValueError("invalid verbosity %r for log %r" % (v, target))
            handler = self._make_handler(target)
            handler.setLevel(VerbosityLevels[v])
            handler.setFormatter(_make_formatter(formatter[i] if i < len(formatter) else None))
            self.logger.addHandler(handler)
        if not self.logger.handlers:
            self.logger.addHandler(logging.NullHandler())
        for i, level in enumerate(VerbosityLevels):
            setattr(self, "v%i" % i, LevelStream(self.logger, level))
        self._printed_warning_history = set()
        self.initialized = True

    def init_by_config(self, config):
        """
        :param dispersia.config.Config config: reads "log", "log_verbosity" and "log_format"
        """
        self.initialize(
            logs=config.list("log", []),
            verbosity=config.int_list("log_verbosity", []),
            formatter=config.list("log_format", []),
        )

    def print_warning(self, text: str, prefix_text: str = "WARNING:", extra_text: Optional[str] = None):
        """
        Writes a warning to v2, only the first time for a given text.
        """
        if text in self._printed_warning_history:
            return
        self._printed_warning_history.add(text)
        print(prefix_text, text, file=self.v2)
        if extra_text:
            print(extra_text, file=self.v2)

    def flush(self):
        """
        Writes pending partial lines and flushes the handlers.
        """
        for stream in self.streams:
            if stream:
                stream.flush()
        for handler in self.logger.handlers:
            handler.flush()

    def close(self):
        """
        Flushes, then closes and removes all handlers.
        """
        if self.initialized:
            self.flush()
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
        self.filename = None


log = Log()
# usable as a library without explicit initialization
log.initialize(verbosity=[2])
