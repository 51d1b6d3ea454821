"""Sub-Riemannian geodesics on the three-dimensional solvable group SOLV^-."""

from .closedform import ClosedFormGeodesic, GeodesicCase, classify, eval_trajectory, generic_params
from .elliptic import EllipticModulus, incomplete_E, incomplete_F, inverse_dn, jacobi
from .flow import Trajectory, integrate, invariant_drift
from .model import NormalizedCovector, PhaseState, hamiltonian, normalize_covector
from .sphere import covector_from_grid, export_cloud, sample_sphere

__version__ = "0.1.0"
