"""
Version string, shared by ``setup.py`` and :mod:`dispersia`.
"""

from __future__ import annotations

import os

VERSION = "1.0.0+git"

# realpath, so that an installed symlink still finds the checkout and its .git
_root_dir = os.path.dirname(os.path.dirname(os.path.realpath(os.path.abspath(__file__))))


def git_rev_version(git_dir: str = _root_dir) -> str:
    """
    :return: VERSION with the short commit hash appended
    """
    from dispersia.util.basic import git_commit_rev

    return "%s.%s" % (VERSION, git_commit_rev(git_dir=git_dir))


def get_version_str() -> str:
    """
    :return: e.g. "1.0.0+git.ab2a1da" in a Git checkout, else VERSION
    """
    if not os.path.exists(os.path.join(_root_dir, ".git")):
        return VERSION
    try:
        return git_rev_version()
    except Exception as exc:  # noqa
        print("Could not get the Git revision: %s" % exc)
        return VERSION
