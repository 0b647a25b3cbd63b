"""Exact quadratic forms, quadratic correspondences and the cancellation map rho.

Subpackages and modules:

* ``exactalg``: fields, polynomials, Laurent polynomials, matrices, Hilbert symbols
* ``quadform``: quadratic spaces, GW/Witt invariants and equality
* ``residue``: residue functionals and the spaces <N> on k[t]/(N)
* ``corr``: correspondences between the point and G_m, composition, dot projector
* ``cancel``: f-triples, norms, padding and the rho pipeline
* ``verify``: the numbered verification suite used by the CLI and the tests
"""

__version__ = "0.1.0"
