"""
Crash diagnostics for the command line: annotated tracebacks and faulthandler.
"""

from __future__ import annotations

import faulthandler
import os
import signal
import sys
import threading


def init_better_exchook():
    """
    Replaces ``sys.excepthook``: uncaught exceptions print a :mod:`better_exchook` traceback
    with local variables to stdout. KeyboardInterrupt only gets the one-line notice.
    """
    import better_exchook

    def _excepthook(exc_type, exc_value, exc_tb):
        print(
            "Unhandled %s in thread %s, pid %i." % (exc_type.__name__, threading.current_thread().name, os.getpid())
        )
        if not issubclass(exc_type, KeyboardInterrupt):
            better_exchook.better_exchook(exc_type, exc_value, exc_tb, file=sys.stdout)

    sys.excepthook = _excepthook


def init_faulthandler(sig: int = getattr(signal, "SIGUSR1", 0)):
    """
    Enables :mod:`faulthandler` unless it already is.
    ``sig`` dumps the stacks of all threads, e.g. ``kill -USR1 <pid>`` on a Monte Carlo run that seems stuck.
    """
    if faulthandler.is_enabled():
        return
    faulthandler.enable()
    if sig and hasattr(faulthandler, "register"):
        faulthandler.register(sig, all_threads=True, chain=False)
