"""Exact arithmetic for endomorphism image chains of abelian groups.

The package answers two families of questions:

* For a finite abelian group and an endomorphism given as an integer
  matrix: where does the descending chain of images stabilize, and does
  image + kernel recover the whole group there?  (:mod:`scoh.groups`,
  :mod:`scoh.oracle`)

* For symbolically described, possibly infinite groups: is every image
  chain stationary ("strongly co-Hopfian"), uniformly so, and with what
  bound?  Answers are three-valued verdicts carrying replayable
  certificates.  (:mod:`scoh.descriptors`, :mod:`scoh.classify`,
  :mod:`scoh.spgroup`)

A FastAPI service (:mod:`scoh.service`) exposes every operation over
HTTP; the ``scoh`` command line is a thin client of the same handlers.
"""

__version__ = "0.1.0"
