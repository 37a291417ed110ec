"""Constructive non-degenerate maps and sets.

Building blocks:

* ``scalars`` / ``polynomials`` -- exact Gaussian-rational and float
  arithmetic, certified disk bounds, confluent Hermite interpolation.
* ``interp`` -- peak polynomials, jet-prescribing small polynomials,
  truncated entire interpolants over discrete sites, and dense-image
  perturbation of polynomial curves.
* ``densedisk`` -- the explicit dense disk-to-polydisk map and its
  constructive preimage solver.
* ``avoidance`` -- shear-composition maps into the complement of a
  finite union of affine subspaces, with exact certificates.
* ``genpos`` -- generic-position point sets with exact or float
  Veronese-rank certificates.
* ``cli`` -- the ``nondegen`` batch front-end (JSON jobs in, JSON/CSV/SVG
  artifacts out).
"""

__version__ = "0.1.0"
