"""
Pareto boundaries of the two-user MISO interference channel with SIC receivers.
"""

__version__ = "0.1.0"
