"""Numerical isoperimetric profiles for radial log-concave measures exp(-phi(|x|)) on R^n."""

from .bounds import BoundCertificate, certify, dimension_free_check, theorem_mualpha, theorem_muphi
from .ledger import ConstantsLedger
from .potential import Potential, check_hypotheses
from .profile import ProfileFn, gaussian_profile, i_phi, l_phi
from .quadrature import QuadraturePlan
from .radial import RadialMeasure, cached_normalize, isotropic_lambda, normalize
from .witness import halfspace_witness, upper_bound

__version__ = "0.1.0"


def clear_caches():
    """Drop memoised measures, profiles, witnesses and fits (for timing runs)."""
    from . import bounds, ledger, profile, radial, witness

    radial._normalize_cached.cache_clear()
    profile._i_phi.cache_clear()
    witness.radial_profile.cache_clear()
    witness.halfspace_witness.cache_clear()
    bounds._setup.cache_clear()
    bounds._CONSTANT_CACHE.clear()
    ledger._FIT_CACHE.clear()
