"""Two-body problem on the constant-curvature 3-spaces S^3 and H^3.

Submodules
----------
repkit
    Irreducible representations of so(4) and the reduced operators D0..D3.
liepoisson
    Lie-Poisson brackets on so(4)* and so(1,3)*, Casimirs and orbit charts.
dynamics
    Reduced classical Hamiltonians and a symplectic integrator.
spectral
    Radial eigenvalue problems: closed-form series and a grid solver.
cli
    The ``curvebody`` command-line tool.
"""

__version__ = "0.1.0"
