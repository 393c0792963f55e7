"""Physical parameter records.

Conventions
-----------
All frequencies and rates are angular frequencies in the same unit system;
setting ``omega = 1`` makes everything dimensionless in units of the cavity
frequency (the convention used by the CLI and throughout the tests).
``hbar = 1`` everywhere.

The light-matter Hamiltonian is

    H = (omega0*sz + lam*sx)/2 + omega*a'a + g*omega*sx*(a + a')

with ``g`` the dimensionless coupling.  A weakly coupled two-level emitter
(gain medium) couples at strength ``epsilon`` to the dressed boson, decays at
``Gamma = 1/T1 = 2/T2``, is pumped at rate ``r``, and the cavity leaks at
``kappa``.  ``delta`` is the dimensionless emitter detuning,
``omega_em = omega*(1 + delta)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

__all__ = ["RabiParams", "GainParams", "MultiLevelGain"]

# emitter coupling above this fraction of omega voids the weak-coupling
# treatment; warn but do not refuse
WEAK_COUPLING_RATIO = 1e-2


def _require(cond: bool, msg: str) -> None:
    from .errors import ValidationError

    if not cond:
        raise ValidationError(msg)


@dataclass(frozen=True)
class RabiParams:
    """Parameters of the generalized Rabi Hamiltonian.

    Attributes
    ----------
    omega : float
        Cavity angular frequency (> 0); the global scale, usually 1.
    g : float
        Dimensionless coupling (coupling rate / omega), >= 0.
    lam : float
        sigma_x bias term (angular frequency), >= 0.
    omega0 : float or None
        Qubit transition frequency; ``None`` means resonant (= omega).
    """

    omega: float = 1.0
    g: float = 0.0
    lam: float = 0.0
    omega0: float | None = None

    def __post_init__(self):
        _require(self.omega > 0, f"omega must be > 0, got {self.omega}")
        _require(self.g >= 0, f"g must be >= 0, got {self.g}")
        _require(self.lam >= 0, f"lam must be >= 0, got {self.lam}")
        if self.omega0 is None:
            object.__setattr__(self, "omega0", self.omega)

    @property
    def g_abs(self) -> float:
        """Coupling as an angular frequency (g * omega)."""
        return self.g * self.omega

    @property
    def lam_rel(self) -> float:
        """Bias in units of omega."""
        return self.lam / self.omega


@dataclass(frozen=True)
class GainParams:
    """Emitter / pump / loss parameters of the gain model.

    ``epsilon`` is the emitter-boson coupling, ``delta`` the dimensionless
    emitter detuning, ``gamma`` the emitter decay (1/T1 = 2/T2), ``r`` the
    pump rate and ``kappa`` the bare-cavity decay rate.
    """

    epsilon: float
    gamma: float
    r: float
    kappa: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("epsilon", "gamma", "r", "kappa"):
            _require(getattr(self, name) >= 0, f"{name} must be >= 0")

    def check_weak_coupling(self, p: RabiParams) -> None:
        """Warn when epsilon is not small against the cavity frequency."""
        if self.epsilon >= WEAK_COUPLING_RATIO * p.omega:
            warnings.warn(
                f"epsilon/omega = {self.epsilon / p.omega:.3g} >= "
                f"{WEAK_COUPLING_RATIO}; the weak-emitter treatment is "
                "questionable here",
                stacklevel=3,
            )

    def replace(self, **kw) -> "GainParams":
        from dataclasses import replace

        return replace(self, **kw)


@dataclass(frozen=True)
class MultiLevelGain:
    """Five-level gain medium: ground g, lasing pair (a, b), bath levels (c, d).

    Pumping g->a at rate ``r``; decays a->c, b->d at ``gamma_a``, ``gamma_b``;
    fast bath drains c->g, d->g at ``gamma_c``, ``gamma_d``.  The bath levels
    must drain much faster than the lasing levels fill them, which keeps their
    populations negligible; ``min_bath_ratio`` enforces that separation.
    """

    r: float
    gamma_a: float
    gamma_b: float
    gamma_c: float
    gamma_d: float
    min_bath_ratio: float = field(default=100.0, compare=False)

    def __post_init__(self):
        for name in ("r", "gamma_a", "gamma_b", "gamma_c", "gamma_d"):
            _require(getattr(self, name) >= 0, f"{name} must be >= 0")
        if self.min_bath_ratio > 0 and self.gamma_a > 0:
            _require(
                self.gamma_c >= self.min_bath_ratio * self.gamma_a,
                f"gamma_c/gamma_a = {self.gamma_c / self.gamma_a:.3g} below "
                f"required ratio {self.min_bath_ratio}",
            )
        if self.min_bath_ratio > 0 and self.gamma_b > 0:
            _require(
                self.gamma_d >= self.min_bath_ratio * self.gamma_b,
                f"gamma_d/gamma_b = {self.gamma_d / self.gamma_b:.3g} below "
                f"required ratio {self.min_bath_ratio}",
            )

    @classmethod
    def symmetric(cls, r: float, gamma: float, bath_ratio: float = 1e4,
                  min_bath_ratio: float = 100.0) -> "MultiLevelGain":
        """Both lasing levels decaying at ``gamma``, bath levels at ``bath_ratio*gamma``."""
        return cls(r=r, gamma_a=gamma, gamma_b=gamma,
                   gamma_c=bath_ratio * gamma, gamma_d=bath_ratio * gamma,
                   min_bath_ratio=min_bath_ratio)

    @property
    def Gamma(self) -> float:
        """Common lasing-level decay; requires gamma_a == gamma_b."""
        _require(self.gamma_a == self.gamma_b,
                 "effective pump r_a is defined for gamma_a == gamma_b only")
        return self.gamma_a

    @property
    def r_a(self) -> float:
        """Effective pump r*Gamma/(r + Gamma) after eliminating the bath levels."""
        G = self.Gamma
        if self.r == 0:
            return 0.0
        return self.r * G / (self.r + G)
