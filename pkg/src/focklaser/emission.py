"""Emitter coupling to the dressed boson: detunings and blockade physics.

An excited two-level emitter resonant with the cavity exchanges one quantum
with the dressed ladder inside the near-degenerate pair
{|e, n-1>, |g, n>} of fixed pseudo-spin.  The pair Hamiltonian is

    H_m = E_m*I + Delta_m*sigma_z + epsilon*sqrt(m)*sigma_x,

and Jaynes-Cummings dynamics give the one-quantum deposition probability.
``detuning(m)`` is THE canonical Delta for the transition (m-1 -> m); every
other module (gain nonlinearity, direct-method blocks) derives its detuning
from this one function, eliminating off-by-one drift between methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .params import GainParams, RabiParams
from .spectrum import level_splitting, splittings

__all__ = [
    "SubspaceBloch",
    "detuning",
    "detunings",
    "subspace_bloch",
    "emission_probability",
    "survival_probability",
    "blockade_profile",
]


@dataclass(frozen=True)
class SubspaceBloch:
    """Bloch decomposition of the {|e,m-1>, |g,m>} pair Hamiltonian.

    ``shift`` multiplies the identity, ``delta`` multiplies sigma_z and
    ``rabi = sqrt(delta^2 + m*epsilon^2)`` is the generalized Rabi frequency.
    """

    m: int
    shift: float
    delta: float
    coupling: float  # epsilon*sqrt(m), the sigma_x coefficient

    @property
    def rabi(self) -> float:
        return math.hypot(self.delta, self.coupling)


def detuning(m: int, p: RabiParams, gp: GainParams, sigma: int = -1) -> float:
    """Half-splitting Delta_m of the emitter transition (m-1 -> m).

    Delta_m = (omega/2) * (delta + (sigma/2) * (S_{m-1} - S_m)/omega), where
    S_n is the doublet splitting (signed omega*D_n at lam = 0).  The default
    branch sigma = -1 is the zero-temperature ladder.
    """
    if m < 1:
        raise ValidationError(f"transition index m must be >= 1, got {m}")
    if sigma not in (+1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    s0 = level_splitting(m - 1, p)
    s1 = level_splitting(m, p)
    return 0.5 * (gp.delta * p.omega + 0.5 * sigma * (s0 - s1))


def detunings(m_max: int, p: RabiParams, gp: GainParams,
              sigma: int = -1) -> np.ndarray:
    """Array [Delta_1, ..., Delta_m_max] (vectorized detuning)."""
    if m_max < 1:
        raise ValidationError(f"m_max must be >= 1, got {m_max}")
    s = splittings(m_max, p)
    return 0.5 * (gp.delta * p.omega + 0.5 * sigma * (s[:-1] - s[1:]))


def subspace_bloch(m: int, p: RabiParams, gp: GainParams,
                   sigma: int = -1) -> SubspaceBloch:
    """Pair-Hamiltonian decomposition for the transition (m-1 -> m)."""
    if m < 1:
        raise ValidationError(f"transition index m must be >= 1, got {m}")
    s0 = level_splitting(m - 1, p)
    s1 = level_splitting(m, p)
    shift = 0.5 * (gp.delta * p.omega + 0.5 * sigma * (s0 + s1))
    return SubspaceBloch(m=m, shift=shift,
                         delta=detuning(m, p, gp, sigma),
                         coupling=gp.epsilon * math.sqrt(m))


def emission_probability(n: int, t: float, p: RabiParams, gp: GainParams,
                         sigma: int = -1) -> float:
    """Probability that the excited emitter has deposited the (n+1)-th quantum.

    P(n+1) = (n+1)eps^2 / (Delta^2 + (n+1)eps^2) * sin^2(sqrt(Delta^2 + (n+1)eps^2) t)
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    bloch = subspace_bloch(n + 1, p, gp, sigma)
    u = bloch.rabi
    if u == 0.0:
        return 0.0
    w = (bloch.coupling / u) ** 2
    return w * math.sin(u * t) ** 2


def survival_probability(n: int, t: float, p: RabiParams, gp: GainParams,
                         sigma: int = -1) -> float:
    """Complement of emission_probability (the emitter keeps its excitation)."""
    return 1.0 - emission_probability(n, t, p, gp, sigma)


def blockade_profile(p: RabiParams, gp: GainParams, t: float,
                     n_max: int, sigma: int = -1) -> np.ndarray:
    """Array of P(n+1) for n = 0..n_max: linear rise, then collapse near n_c."""
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    d = detunings(n_max + 1, p, gp, sigma)
    m = np.arange(1, n_max + 2)
    u2 = d * d + m * gp.epsilon ** 2
    u = np.sqrt(u2)
    with np.errstate(invalid="ignore"):
        w = np.where(u2 > 0, m * gp.epsilon ** 2 / u2, 0.0)
    return w * np.sin(u * t) ** 2
