"""Fuel-indexed toolkit for computable topology over represented spaces.

Submodules:

- ``kernel``: words, pairing, names, Sierpinski observations, transducers,
  the toy counter machine and its program numbering.
- ``spaces``: represented spaces, open/overt set codes, separation-property
  witnesses, effective bases, ball separation with exact dyadic arithmetic.
- ``ceers``: ceer presentations, saturation, quotient spaces, and the
  constructive content of the ceer / discrete-space correspondence.
- ``ideals``: ideal spaces of c.e. transitive relations and prefix
  validation.
- ``zoo``: the separating example spaces, their realizers, and the
  diagonalization adversaries.
- ``cli``: deterministic command-line reproduction harness.
"""

from . import ceers, ideals, kernel, spaces, zoo

__version__ = "0.1.0"

__all__ = ["kernel", "spaces", "ceers", "ideals", "zoo", "__version__"]
