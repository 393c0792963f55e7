"""Deep-strong-coupling Rabi spectra and Fock-laser photon statistics.

Three mutually validating routes to the same steady state: a semi-analytic
rate-equation recursion (`laser_rate`), a multi-level density-matrix solve
(`laser_direct`) and a first-principles Liouvillian null-vector computation
(`liouvillian`), all built on the analytic dressed spectrum (`spectrum`) and
its exact-diagonalization oracle (`exact`).
"""

__version__ = "0.1.0"

from .params import GainParams, MultiLevelGain, RabiParams
from .distribution import PhotonDistribution, tv_distance

__all__ = [
    "__version__",
    "RabiParams",
    "GainParams",
    "MultiLevelGain",
    "PhotonDistribution",
    "tv_distance",
]
