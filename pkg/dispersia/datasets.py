"""
Loading of observed series from CSV files, and SHA-256 pins for fixture files.

The expected layout is comma separated with a header row, one observation per row,
e.g. for the seasonal rainfall fixture::

    year,rainfall
    1901,812.3
    ...

A pin is a ``<file>.sha256`` next to the file, in ``sha256sum`` format.
"""

from __future__ import annotations

import csv
import hashlib
import math
import os
import re
from dataclasses import dataclass
from typing import Optional

import numpy

from dispersia.errors import ChecksumError, CsvParseError, EmptyFileError, MissingColumnError


@dataclass(frozen=True)
class SeriesDataset:
    """
    One numeric column of a CSV file, in file order.
    """

    label: str
    values: numpy.ndarray
    source_path: str

    def __len__(self):
        return len(self.values)


def load_csv_series(path: str, column_name: str, label: Optional[str] = None) -> SeriesDataset:
    """
    :param path: CSV file with header row
    :param column_name: column to read
    :param label: default "<file basename>:<column>"
    :return: finite values in file order. Row numbers in errors count data rows from 1, the header excluded.
    """
    with open(path, "r", newline="", encoding="utf-8-sig") as f:
        reader = csv.DictReader(f)
        if not reader.fieldnames:
            raise EmptyFileError("%s: empty file, no header" % path)
        fieldnames = [name.strip() for name in reader.fieldnames]
        if column_name not in fieldnames:
            raise MissingColumnError("%s: no column %r, available: %r" % (path, column_name, fieldnames))
        key = reader.fieldnames[fieldnames.index(column_name)]
        values = []
        for row_idx, row in enumerate(reader, start=1):
            cell = row.get(key)
            if cell is None:
                raise CsvParseError("%s: missing cell in column %r" % (path, column_name), row=row_idx)
            try:
                value = float(cell.strip())
            except ValueError:
                raise CsvParseError("%s: non-numeric cell %r in column %r" % (path, cell, column_name), row=row_idx)
            if not math.isfinite(value):
                raise CsvParseError("%s: non-finite cell %r in column %r" % (path, cell, column_name), row=row_idx)
            values.append(value)
    if not values:
        raise EmptyFileError("%s: header only, no data rows" % path)
    return SeriesDataset(
        label=label or "%s:%s" % (os.path.basename(path), column_name),
        values=numpy.array(values, dtype=numpy.float64),
        source_path=path,
    )


ChecksumSuffix = ".sha256"
_HexDigestRe = re.compile(r"^[0-9a-f]{64}$")


def sha256_file(path: str) -> str:
    """
    :return: lowercase hex SHA-256 of the file content
    """
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _normalize_digest(digest: str, source: str) -> str:
    digest = digest.strip().lower()
    if not _HexDigestRe.match(digest):
        raise ChecksumError("%s: not a SHA-256 hex digest: %r" % (source, digest))
    return digest


def load_pinned_checksum(path: str) -> Optional[str]:
    """
    Reads the pin ``<path>.sha256``, in ``sha256sum`` format ("<hex digest>  <file name>").

    :return: the digest, or None if there is no pin
    """
    pin = path + ChecksumSuffix
    if not os.path.exists(pin):
        return None
    with open(pin, "r") as f:
        fields = f.read().split()
    if not fields:
        raise ChecksumError("%s: empty checksum file" % pin)
    return _normalize_digest(fields[0], pin)


def pin_checksum(path: str, digest: Optional[str] = None) -> str:
    """
    Writes ``<path>.sha256``.

    :param path: the pinned file
    :param digest: default is the digest of the current content
    :return: the pin file name
    """
    digest = _normalize_digest(digest, path) if digest else sha256_file(path)
    pin = path + ChecksumSuffix
    with open(pin, "w") as f:
        f.write("%s  %s\n" % (digest, os.path.basename(path)))
    return pin


def verify_checksum(path: str, expected: Optional[str] = None) -> str:
    """
    :param path: file to check
    :param expected: hex digest, default is the pin of ``path``
    :return: the verified digest
    :raises ChecksumError: on mismatch, or if there is nothing to compare against
    """
    if expected is None:
        expected = load_pinned_checksum(path)
        if expected is None:
            raise ChecksumError("%s: no pinned checksum %s" % (path, path + ChecksumSuffix))
    expected = _normalize_digest(expected, path)
    actual = sha256_file(path)
    if actual != expected:
        raise ChecksumError("%s: SHA-256 mismatch, expected %s, got %s" % (path, expected, actual))
    return actual
