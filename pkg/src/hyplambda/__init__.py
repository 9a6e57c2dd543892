"""Zhang's lambda-invariant for hyperelliptic curves.

Archimedean side: branch points -> period matrix -> theta constants ->
discriminant modular form -> lambda.  Non-archimedean side: exact rational
formulas in the double-point counts of a semistable fiber.
"""

from .discriminant import discriminant, eta_base, eta_subset, log_petersson_norm, petersson_norm
from .errors import HypLambdaError, InputError, NumericalError
from .hyperelliptic import HyperellipticCurve, curve_from_roots, moebius, period_matrix
from .invariants import (
    InvariantReport,
    ReductionData,
    lambda_arch,
    lambda_na,
    lambda_na_closed,
    phi_from_lambda,
    psi_na,
    zhang_bound_rhs,
)
from .pipeline import curve_report
from .siegel import SiegelPoint, SymplecticMatrix, symplectic_act, validate_siegel
from .theta import ThetaCharacteristic, theta_constant

__version__ = "0.1.0"
