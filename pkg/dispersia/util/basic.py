"""
Small helpers used across the package: processes, version, time formatting,
JSON with comments, config value conversion and parameter formatting.
"""

from __future__ import annotations

import json
import os
import subprocess
from typing import Any, Dict, Mapping, Optional, Union

from dispersia.errors import ConfigError

_TrueWords = frozenset(["true", "yes", "on"])
_FalseWords = frozenset(["false", "no", "off"])


def sys_exec_out(*args: str, **kwargs) -> str:
    """
    Runs a command without a shell.

    :param args: command and arguments
    :param kwargs: passed to :func:`subprocess.run`, e.g. ``cwd``
    :return: stdout, utf8 decoded
    :raises subprocess.CalledProcessError: on non-zero exit
    """
    proc = subprocess.run(
        args, stdin=subprocess.DEVNULL, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, check=True, **kwargs
    )
    return proc.stdout.decode("utf8")


def git_commit_rev(commit: str = "HEAD", git_dir: str = ".") -> str:
    """
    :return: short hash of ``commit`` in the repository at ``git_dir``
    """
    return sys_exec_out("git", "rev-parse", "--short", commit, cwd=git_dir).strip()


def describe_dispersia_version() -> str:
    """
    :return: e.g. "1.0.0+git.ab2a1da"
    """
    from dispersia import __long_version__

    return __long_version__


def hms(s: Union[int, float]) -> str:
    """
    :param s: seconds, fractions are dropped
    :return: "h:mm:ss"
    """
    s = int(s)
    return "%d:%02d:%02d" % (s // 3600, s // 60 % 60, s % 60)


def hms_fraction(s: float, decimals: int = 4) -> str:
    """
    :return: "h:mm:ss.ffff" with ``decimals`` digits
    """
    whole = int(s)
    frac = "%.*f" % (decimals, s - whole)
    return hms(whole) + frac[1:]


def json_remove_comments(string: str) -> str:
    """
    Drops ``//`` line comments and ``/* */`` block comments outside of string literals.
    """
    out = []
    i = 0
    n = len(string)
    in_string = False
    while i < n:
        c = string[i]
        if in_string:
            out.append(c)
            if c == "\\" and i + 1 < n:
                out.append(string[i + 1])
                i += 2
                continue
            if c == '"':
                in_string = False
            i += 1
        elif c == '"':
            in_string = True
            out.append(c)
            i += 1
        elif string.startswith("//", i):
            end = string.find("\n", i)
            i = n if end < 0 else end
        elif string.startswith("/*", i):
            end = string.find("*/", i + 2)
            i = n if end < 0 else end + 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def load_json(filename: Optional[str] = None, content: Optional[str] = None) -> Dict[str, Any]:
    """
    Parses a JSON object, comments allowed. Exactly one of ``filename`` and ``content``.

    :raises ConfigError: on invalid JSON or a non-object top level
    """
    if (filename is None) == (content is None):
        raise ValueError("load_json: give either filename or content")
    if content is None:
        with open(filename) as f:
            content = f.read()
    try:
        obj = json.loads(json_remove_comments(content))
    except ValueError as exc:
        raise ConfigError("invalid JSON content, %s" % exc)
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object at top level, got %s" % type(obj).__name__)
    return obj


def to_bool(v: Union[bool, int, float, str]) -> bool:
    """
    :param v: a number, or a string like "1", "true", "no", "off"
    """
    if isinstance(v, str):
        word = v.strip().lower()
        if word in _TrueWords:
            return True
        if word in _FalseWords:
            return False
    try:
        return bool(int(v))
    except ValueError:
        raise ValueError("to_bool cannot handle %r" % (v,))


def get_number_available_cpus() -> Optional[int]:
    """
    :return: CPUs usable by this process, None if unknown
    """
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on Linux
        return os.cpu_count()


def format_params(params: Mapping[str, Any]) -> str:
    """
    :return: e.g. "shape=2.0;scale=5", in the given key order, floats in shortest round-trip form
    """
    parts = ("%s=%s" % (key, repr(value) if isinstance(value, float) else value) for key, value in params.items())
    return ";".join(parts)
