"""
flopverify - exact verification of derived equivalences for simple flops.

Computes graded Hom spaces between zero-section objects on the total space
of O(-h-H) over a flag variety by Borel-Weil-Bott, and replays mutation
chains of semiorthogonal decompositions with per-step certificates.
"""

__version__ = "0.1.0"
