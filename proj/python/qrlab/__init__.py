"""Desk-scale laboratory for entanglement measures, pairwise-far state
families, and canonical commitments."""

from ._qrlab import *  # noqa: F401,F403
