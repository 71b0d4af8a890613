"""
Dispersia: the variance ratio (index of dispersion) test for one-parameter families,
with the asymptotic validity check of its chi-square approximation.

We provide ``__version__`` and ``__long_version__``.
Import the specific sub-modules, e.g. :mod:`dispersia.vartest` or :mod:`dispersia.simulation`.
"""

import os as _os

from .__setup__ import get_version_str as _get_version_str

__long_version__ = _get_version_str()  # `SemVer <https://semver.org/>`__ compatible
__version__ = __long_version__[: __long_version__.index("+")]
__git_version__ = __long_version__

__root_dir__ = _os.path.dirname(_os.path.dirname(_os.path.abspath(__file__)))
