#!/usr/bin/env python3

"""
Fetches the All India June-September rainfall series (1901-2009) and writes it
as the test fixture ``tests/data/imd_jjas_1901_2009.csv``.

The source must be a CSV with the columns ``year`` and ``rainfall`` (mm).
``file://`` URLs are copied. The result is validated before it is written.

The download is checked against ``--sha256``, or else against the pin
``<out>.sha256`` if one exists. Without either, the digest of the first
validated download is pinned, and later fetches must match it.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
import urllib.request

import _setup_dispersia_env  # noqa
from dispersia.datasets import load_csv_series, load_pinned_checksum, pin_checksum, sha256_file, verify_checksum
from dispersia.errors import DataError
from dispersia.log import log
from dispersia.util import debug as debug_util

FirstYear = 1901
LastYear = 2009
DefaultOut = os.path.join(_setup_dispersia_env.root_dir, "tests", "data", "imd_jjas_1901_2009.csv")


def validate_series(path):
    """
    :param str path: CSV file
    :raises DataError: if the years are not exactly 1901..2009 or the rainfall is not positive
    """
    years = load_csv_series(path, "year").values
    rainfall = load_csv_series(path, "rainfall").values
    expected = list(range(FirstYear, LastYear + 1))
    if [int(y) for y in years] != expected:
        raise DataError(
            "%s: expected years %i-%i (%i rows), got %i rows" % (path, FirstYear, LastYear, len(expected), len(years))
        )
    if not (rainfall > 0).all():
        raise DataError("%s: rainfall must be positive" % path)
    print("%s: %i rows, mean rainfall %.2f mm" % (path, len(rainfall), rainfall.mean()), file=log.v2)


def fetch(url, out, sha256=None):
    """
    :param str url: http(s) or file URL
    :param str out: destination path
    :param str|None sha256: expected hex digest, default is the pin of ``out``
    :raises ChecksumError: if the download does not match
    """
    expected = sha256 or load_pinned_checksum(out)
    fd, tmp = tempfile.mkstemp(suffix=".csv")
    os.close(fd)
    try:
        print("Fetching %s" % url, file=log.v3)
        with urllib.request.urlopen(url) as response, open(tmp, "wb") as f:
            shutil.copyfileobj(response, f)
        if expected:
            digest = verify_checksum(tmp, expected)
            print("SHA-256 %s matches" % digest, file=log.v3)
        else:
            digest = sha256_file(tmp)
            log.print_warning("no checksum given or pinned, pinning SHA-256 %s of this download" % digest)
        validate_series(tmp)
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        shutil.move(tmp, out)
        pin = pin_checksum(out, digest)
        print("Wrote %s and %s" % (out, pin), file=log.v2)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def main():
    """
    Main entry.
    """
    arg_parser = argparse.ArgumentParser(description=__doc__)
    arg_parser.add_argument("--url", required=True)
    arg_parser.add_argument("--out", default=DefaultOut)
    arg_parser.add_argument("--sha256", help="expected hex digest of the download")
    arg_parser.add_argument("--verbosity", type=int, default=3)
    args = arg_parser.parse_args()
    debug_util.init_better_exchook()
    log.initialize(verbosity=[args.verbosity])
    try:
        fetch(args.url, args.out, sha256=args.sha256)
    except (DataError, OSError) as exc:
        print("ERROR: %s" % exc, file=log.v0)
        sys.exit(65)


if __name__ == "__main__":
    main()
