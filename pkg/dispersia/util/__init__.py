"""
Basic utilities for Dispersia, such as system helpers, JSON loading or time formatting.
Independent from the statistical parts of Dispersia.
"""
