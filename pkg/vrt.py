#!/usr/bin/env python3

"""
Dispersia as a tool. Main entry point. Just calls :func:`dispersia.__main__.main`.
"""

from dispersia.__main__ import main


if __name__ == "__main__":
    main()
