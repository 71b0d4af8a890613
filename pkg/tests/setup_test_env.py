"""
Import this first in every test module::

    import tests.setup_test_env  # noqa

It sets ``$DISPERSIA_TEST``, installs better_exchook tracebacks,
and puts the global log to full verbosity on stdout.
:func:`rainfall_fixture` gives the checked rainfall series to the tests which need it.
"""

from __future__ import annotations

import faulthandler
import logging
import os
import sys
import unittest

import better_exchook


def _install_exchook():
    prev_hook = sys.excepthook
    if prev_hook is sys.__excepthook__:
        sys.excepthook = better_exchook.better_exchook
    else:

        def _chained(exc_type, exc_value, exc_tb):
            better_exchook.better_exchook(exc_type, exc_value, exc_tb)
            prev_hook(exc_type, exc_value, exc_tb)

        sys.excepthook = _chained
    better_exchook.replace_traceback_format_tb()


RainfallFixture = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "imd_jjas_1901_2009.csv")


def rainfall_fixture() -> str:
    """
    :return: path of the rainfall series, after checking it against its SHA-256 pin.
      Skips the test if the file or the pin is missing, see ``tools/fetch-imd-series.py``.
    """
    from dispersia.datasets import load_pinned_checksum, verify_checksum

    if not os.path.exists(RainfallFixture):
        raise unittest.SkipTest("rainfall fixture %s not present, see tools/fetch-imd-series.py" % RainfallFixture)
    if load_pinned_checksum(RainfallFixture) is None:
        raise unittest.SkipTest("rainfall fixture %s has no .sha256 pin, refetch it" % RainfallFixture)
    verify_checksum(RainfallFixture)
    return RainfallFixture


def setup():
    """
    See module doc.
    """
    os.environ.setdefault("DISPERSIA_TEST", "1")
    logging.basicConfig(level=logging.DEBUG, format="%(message)s")
    _install_exchook()

    from dispersia.log import log

    log.initialize(verbosity=[5], propagate=False)
    faulthandler.enable()


setup()
