"""Commutator-based functional calculus for symmetric matrices.

Subpackages:

- ``matcore``: matrix value types, refinement checks, Jacobi eigensolver
- ``scalarfun``: scalar kernels with Bernoulli-series near-zero fallbacks
- ``calculus``: matrix functions, the commutator operator, kernel operators,
  and derivative identities of the matrix exponential/logarithm
- ``kinematics``: deformation trajectories, log strain, spin tensors
- ``monotonicity``: isotropic tensor functions and quadratic-form bridges
- ``cli``: the ``corotcalc`` command-line tool
"""

__version__ = "0.1.0"
