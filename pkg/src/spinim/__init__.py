"""spinim: spinorial representation toolkit for surfaces in SL_n(C)/SU(n).

Modules:
    clifford   complex Clifford-algebra engine: blade arithmetic, involutions,
               extended bilinear form, skew-operator dictionary
    liealg     concrete sl_n(C) models: orthonormal bases, structure constants,
               adjoint bivectors, spin lifts
    quaternion complex-quaternion fast path for the n = 2 case
    grids      conformal charts, finite-difference stencils, convergence orders
    surfaces   surface data (conformal factor, mean curvature, shape entries)
    spin_rep   spinor fields on charts, Killing-type transport, Weierstrass map
    grc        Gauss/Ricci/Codazzi residuals, curvature decomposition,
               flat-connection reconstruction
    bryant     null-curve pipelines for CMC-1 surfaces in hyperbolic 3-space,
               right-Gauss-map holomorphy, the general-n route
    io_cli     command-line front end, config files, mesh export, reports
"""

from . import bryant, clifford, grc, grids, io_cli, liealg, quaternion, spin_rep, surfaces

__version__ = "0.1.0"

__all__ = ["bryant", "clifford", "grc", "grids", "io_cli", "liealg",
           "quaternion", "spin_rep", "surfaces", "__version__"]
