"""
Usage:

    python3 setup.py sdist
    pip3 install --user dist/*.tar.gz

The version comes from :mod:`dispersia.__setup__`.
"""

from setuptools import setup, find_packages

from dispersia.__setup__ import get_version_str


def main():
    """
    Setup main entry
    """
    long_version = get_version_str()
    if "+" in long_version:
        version = long_version[: long_version.index("+")]
    else:
        version = long_version

    setup(
        name="dispersia",
        version=version,
        packages=find_packages(include=["dispersia", "dispersia.*"]),
        description="Variance ratio test for one-parameter families, with the validity check of its chi-square law",
        long_description=open("README.rst").read(),
        long_description_content_type="text/x-rst",
        python_requires=">=3.8",
        install_requires=open("requirements.txt").read().split(),
        entry_points={"console_scripts": ["dispersia = dispersia.__main__:main"]},
        classifiers=[
            "Development Status :: 4 - Beta",
            "Environment :: Console",
            "Intended Audience :: Science/Research",
            "Operating System :: POSIX",
            "Programming Language :: Python",
            "Programming Language :: Python :: 3",
            "Topic :: Scientific/Engineering",
            "Topic :: Scientific/Engineering :: Mathematics",
        ],
    )


if __name__ == "__main__":
    main()
