"""
test logging
"""

from __future__ import annotations

import contextlib
import io
import sys
import os
import tempfile
import unittest

import tests.setup_test_env  # noqa
import better_exchook
import pytest

from dispersia.config import Config
from dispersia.log import Log, log


def _read_log(verbosity, write):
    with tempfile.TemporaryDirectory(prefix="test_dispersia_log") as tmp_dir:
        filename = os.path.join(tmp_dir, "out.log")
        my_log = Log()
        my_log.initialize(logs=[filename], verbosity=[verbosity, 0])
        write(my_log)
        my_log.close()
        with open(filename) as f:
            lines = f.read().splitlines()
    # all Log instances share the "dispersia" logger
    log.initialize(verbosity=[5])
    return lines


def test_log_verbosity_levels():
    def write(my_log):
        for i in range(6):
            print("level %i" % i, file=getattr(my_log, "v%i" % i))

    assert _read_log(2, write) == ["level 0", "level 1", "level 2"]
    assert _read_log(5, write) == ["level %i" % i for i in range(6)]
    assert _read_log(0, write) == ["level 0"]


def test_log_multi_part_message():
    def write(my_log):
        print("mean D", 98.5, "n", 100, file=my_log.v2)

    assert _read_log(2, write) == ["mean D 98.5 n 100"]


def test_print_warning_deduplicated():
    def write(my_log):
        my_log.print_warning("cell gamma(shape=0.5): 3 of 100 fits failed")
        my_log.print_warning("cell gamma(shape=0.5): 3 of 100 fits failed")
        my_log.print_warning("other")

    assert _read_log(2, write) == [
        "WARNING: cell gamma(shape=0.5): 3 of 100 fits failed",
        "WARNING: other",
    ]


def test_init_by_config():
    with tempfile.TemporaryDirectory(prefix="test_dispersia_log") as tmp_dir:
        filename = os.path.join(tmp_dir, "log-$date.txt")
        my_log = Log()
        my_log.init_by_config(Config({"log": [filename], "log_verbosity": [3, 0], "log_format": ["timed"]}))
        log_filename = my_log.filename
        assert log_filename and "$date" not in log_filename
        print("hello", file=my_log.v3)
        my_log.close()
        with open(log_filename) as f:
            content = f.read()
        assert content.strip().endswith("hello")
    log.initialize(verbosity=[5])


def test_log_partial_line_written_on_flush():
    def write(my_log):
        my_log.v2.write("no newline")
        my_log.v2.write(" yet")

    assert _read_log(2, write) == ["no newline yet"]


def test_log_multi_line_message():
    def write(my_log):
        print("a\nb", file=my_log.v1)

    assert _read_log(2, write) == ["a", "b"]


def test_stdout_handler_follows_redirect():
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        print("redirected", file=log.v2)
    assert "redirected" in out.getvalue().splitlines()


def test_log_invalid_verbosity():
    my_log = Log()
    with pytest.raises(ValueError):
        my_log.initialize(verbosity=[6])
    log.initialize(verbosity=[5])


def test_global_log_usable():
    assert log.initialized
    print("global log works", file=log.v5)


if __name__ == "__main__":
    better_exchook.install()
    if len(sys.argv) <= 1:
        for k, v in sorted(globals().items()):
            if k.startswith("test_"):
                print("-" * 40)
                print("Executing: %s" % k)
                try:
                    v()
                except unittest.SkipTest as exc:
                    print("SkipTest:", exc)
                print("-" * 40)
        print("Finished all tests.")
    else:
        assert len(sys.argv) >= 2
        for arg in sys.argv[1:]:
            print("Executing: %s" % arg)
            if arg in globals():
                globals()[arg]()  # assume function and execute
            else:
                eval(arg)  # assume Python code and execute
