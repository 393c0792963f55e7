"""Coarse-grained Fock-laser rate equation and its steady state.

Photon-number populations of the dressed ladder obey the birth-death
equation

    d rho_n/dt = R_n n rho_{n-1} - (R_{n+1}(n+1) + kappa_n n) rho_n
                 + kappa_{n+1}(n+1) rho_{n+1},

with stimulated-emission coefficient R_n = 2 r eps^2 / (Gamma^2 + F(n)) and
nonlinearity F(n) = 4 n eps^2 + 4 Delta_n^2 built from the canonical
transition detuning.  The loss coefficient is kappa_n = kappa * n under the
perturbative ladder elements (kappa_n n would double count; R_n and kappa_n
here are per-quantum so that total rates are n*R_n and kappa*n).

The stationary distribution satisfies detailed balance
rho_{n+1}/rho_n = A_{n+1}/C_n with A_m = m R_m, C_m = kappa (m+1); the
products are accumulated in log space because they traverse hundreds of
orders of magnitude at large g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .distribution import PhotonDistribution, find_modes
from .errors import ConvergenceError, ScanLimitError, TailMassError, ValidationError
from .emission import detuning, detunings
from .params import GainParams, RabiParams
from .spectrum import critical_photon_number, matrix_element_x

__all__ = [
    "GainLossCurves",
    "nonlinearity_F",
    "gain_loss",
    "steady_state",
    "transient",
    "SweepPoint",
    "pump_sweep",
    "threshold_knee",
    "threshold_pump",
    "classify_distribution",
    "regime_map",
]

TAIL_MASS_LIMIT = 1e-8
_N_MAX_CAP = 2_000_000


def nonlinearity_F(n: int, p: RabiParams, gp: GainParams) -> float:
    """F(n) = 4 n eps^2 + 4 Delta_n^2 (power broadening + anharmonic detuning).

    Delta_n is the canonical (m-1 -> m) detuning, so a nonzero emitter
    detuning delta and the lam > 0 splitting both enter through it.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    d = detuning(n, p, gp)
    return 4.0 * n * gp.epsilon ** 2 + 4.0 * d * d


def _f_array(m_max: int, p: RabiParams, gp: GainParams) -> np.ndarray:
    """[F(1), ..., F(m_max)] vectorized."""
    d = detunings(m_max, p, gp)
    m = np.arange(1, m_max + 1)
    return 4.0 * m * gp.epsilon ** 2 + 4.0 * d * d


@dataclass(frozen=True)
class GainLossCurves:
    """Per-quantum gain/loss coefficients for n = 1..n_max."""

    n: np.ndarray
    gain: np.ndarray      # R_n
    loss: np.ndarray      # kappa_n
    nonlinearity: np.ndarray  # F(n)
    saturation: np.ndarray    # G(n) = F(n)/Gamma^2


def gain_loss(p: RabiParams, gp: GainParams, n_max: int,
              use_matrix_elements: bool = False) -> GainLossCurves:
    """R_n, kappa_n, F(n), G(n) for n = 1..n_max.

    ``use_matrix_elements`` computes the loss from the dressed ladder
    elements |<n-1|a+a'|n>|^2 instead of hard-coding kappa*n; with the
    perturbative eigenstates the two coincide (the ladder elements are
    coupling-independent), the flag exists for eigenstate variants.
    """
    if n_max < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")
    gp.check_weak_coupling(p)
    n = np.arange(1, n_max + 1)
    f = _f_array(n_max, p, gp)
    gain = 2.0 * gp.r * gp.epsilon ** 2 / (gp.gamma ** 2 + f)
    if use_matrix_elements:
        elems = np.array([matrix_element_x(int(m) - 1, -1, int(m), -1, p) ** 2
                          for m in n])
        loss = gp.kappa * elems
    else:
        loss = gp.kappa * n.astype(float)
    with np.errstate(divide="ignore"):
        sat = np.where(gp.gamma > 0, f / gp.gamma ** 2, np.inf)
    return GainLossCurves(n=n, gain=gain, loss=loss, nonlinearity=f, saturation=sat)


def pump_strength(gp: GainParams) -> float:
    """alpha = 2 r eps^2 / (kappa Gamma^2) = r / r_th; inf when loss-free."""
    denom = gp.kappa * gp.gamma ** 2
    if denom == 0:
        return math.inf
    return 2.0 * gp.r * gp.epsilon ** 2 / denom


def threshold_pump(gp: GainParams) -> float:
    """Formula threshold r_th = kappa Gamma^2 / (2 eps^2)."""
    if gp.epsilon == 0:
        return math.inf
    return gp.kappa * gp.gamma ** 2 / (2.0 * gp.epsilon ** 2)


def _auto_n_max(p: RabiParams, gp: GainParams) -> int:
    """Initial grid size: the anharmonic cutoff when one exists, otherwise the
    weak-coupling operating point (or thermal tail) plus fluctuation margin."""
    alpha = pump_strength(gp)
    try:
        nc = critical_photon_number(p) if p.g > 0 else None
    except ScanLimitError:
        nc = None
    if nc is not None:
        return nc + max(50, int(10 * math.sqrt(max(nc, 1))))
    if alpha > 1 and gp.epsilon > 0:
        n_sat = (alpha - 1.0) * gp.gamma ** 2 / (4.0 * gp.epsilon ** 2)
        return int(n_sat + max(50, 10 * math.sqrt(max(n_sat, 1.0)))) + 1
    if 0 < alpha < 1:
        return max(50, int(-30.0 / math.log(alpha)) + 10)
    return 50


def _log_ratios(m_max: int, p: RabiParams, gp: GainParams) -> np.ndarray:
    """log(rho_{m}/rho_{m-1}) = log(2 r eps^2/kappa) - log(Gamma^2 + F(m))."""
    if gp.kappa <= 0:
        raise ValidationError("steady state requires kappa > 0")
    f = _f_array(m_max, p, gp)
    if gp.r == 0 or gp.epsilon == 0:
        return np.full(m_max, -np.inf)
    return (math.log(2.0 * gp.r * gp.epsilon ** 2 / gp.kappa)
            - np.log(gp.gamma ** 2 + f))


def _normalize_log(logp: np.ndarray) -> np.ndarray:
    m = logp.max()
    with np.errstate(under="ignore"):
        p = np.exp(logp - m)
    return p / p.sum()


def _tail_mass(probs: np.ndarray) -> float:
    tail = float(probs[-5:].sum())
    # a boundary still rising means the grid cut through the distribution
    if probs[-1] > probs[-2] > 0:
        return max(tail, 1.0)
    return tail


def steady_state(p: RabiParams, gp: GainParams,
                 n_max: int | None = None) -> PhotonDistribution:
    """Stationary photon distribution of the rate equation.

    With ``n_max=None`` the grid is chosen automatically (anharmonic cutoff
    plus fluctuation margin, or the weak-coupling operating point) and
    extended until the tail mass is below 1e-8.  An explicit ``n_max`` is
    honored as given and raises TailMassError if the tail is not negligible
    there.

    The output satisfies detailed balance A_n rho_{n-1} = C_{n-1} rho_n to
    rounding and is normalized exactly.
    """
    gp.check_weak_coupling(p)
    auto = n_max is None
    nm = _auto_n_max(p, gp) if auto else int(n_max)
    if nm < 1:
        raise ValidationError(f"n_max must be >= 1, got {nm}")
    while True:
        logp = np.concatenate([[0.0], np.cumsum(_log_ratios(nm, p, gp))])
        probs = _normalize_log(logp)
        tail = _tail_mass(probs)
        if tail < TAIL_MASS_LIMIT:
            return PhotonDistribution.from_probs(probs)
        if not auto:
            raise TailMassError(
                f"tail mass {tail:.2e} at n_max = {nm} exceeds {TAIL_MASS_LIMIT}")
        if nm >= _N_MAX_CAP:
            raise TailMassError(
                f"tail mass {tail:.2e} still above {TAIL_MASS_LIMIT} at the "
                f"grid cap {nm}")
        nm = min(max(2 * nm, nm + 200), _N_MAX_CAP)


def transient(rho0: PhotonDistribution, p: RabiParams, gp: GainParams,
              t_final: float, n_max: int | None = None,
              rtol: float = 1e-9, atol: float = 1e-13) -> PhotonDistribution:
    """Distribution at ``t_final`` from adaptive explicit integration.

    The generator conserves total probability structurally (column sums are
    zero up to the reflecting cut at the top of the grid); integration is
    accepted only if the numerical drift stays below 1e-9.
    """
    if t_final < 0:
        raise ValidationError(f"t_final must be >= 0, got {t_final}")
    if n_max is None:
        n_max = max(_auto_n_max(p, gp), rho0.n_max + 20)
    y0 = rho0.extended(n_max)
    if t_final == 0:
        return PhotonDistribution.from_probs(y0)
    m = np.arange(1, n_max + 1, dtype=float)
    f = _f_array(n_max, p, gp)
    gain_tot = (2.0 * gp.r * gp.epsilon ** 2 / (gp.gamma ** 2 + f)) * m  # A_m
    loss_tot = gp.kappa * m                                              # C_{m-1}

    def rhs(_t, y):
        dy = np.zeros_like(y)
        flow_up = gain_tot * y[:-1]     # n-1 -> n
        flow_down = loss_tot * y[1:]    # n -> n-1
        dy[1:] += flow_up
        dy[:-1] -= flow_up
        dy[:-1] += flow_down
        dy[1:] -= flow_down
        return dy

    sol = solve_ivp(rhs, (0.0, t_final), y0, method="RK45",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"rate-equation integration failed: {sol.message}")
    y = sol.y[:, -1]
    drift = abs(y.sum() - 1.0)
    if drift > 1e-9:
        raise ConvergenceError(
            f"probability drifted by {drift:.2e} (> 1e-9) during integration")
    return PhotonDistribution.from_probs(np.clip(y, 0.0, None))


@dataclass(frozen=True)
class SweepPoint:
    r: float
    mean: float
    std: float
    fano: float
    distribution: PhotonDistribution


def pump_sweep(p: RabiParams, gp: GainParams, r_values) -> list[SweepPoint]:
    """Steady states over an ascending pump grid (the laser S-curve)."""
    rv = np.asarray(list(r_values), dtype=float)
    if rv.size < 1 or np.any(rv <= 0) or np.any(np.diff(rv) <= 0):
        raise ValidationError("r_values must be positive and strictly ascending")
    out = []
    for r in rv:
        d = steady_state(p, gp.replace(r=float(r)))
        out.append(SweepPoint(r=float(r), mean=d.mean, std=d.std,
                              fano=d.fano, distribution=d))
    return out


def threshold_knee(sweep: list[SweepPoint]) -> float:
    """Pump at the S-curve knee: the maximum of d log<n> / d log r."""
    if len(sweep) < 3:
        raise ValidationError("need at least 3 sweep points to locate the knee")
    r = np.array([s.r for s in sweep])
    mean = np.array([max(s.mean, 1e-300) for s in sweep])
    slope = np.gradient(np.log(mean), np.log(r))
    return float(r[int(np.argmax(slope))])


# classification thresholds (criterion constants for the regime map)
FLATNESS_LIMIT = 10.0
CUTOFF_RATIO_LIMIT = 1e-3
FOCK_FANO_LIMIT = 0.5
MODE_REL_HEIGHT = 1e-3


def classify_distribution(dist: PhotonDistribution,
                          n_c: int | None = None) -> str:
    """Shape class of a photon distribution.

    Returns one of 'bimodal-tunneling', 'uniform-cutoff', 'thermal',
    'fock-like', 'coherent-like'.  ``n_c`` (the anharmonic cutoff) is needed
    to recognize the near-threshold uniform state.
    """
    probs = dist.probs
    modes = find_modes(probs, rel_height=MODE_REL_HEIGHT)
    if len(modes) >= 2:
        return "bimodal-tunneling"
    if n_c is not None and n_c - 5 > 2 and n_c + 5 <= dist.n_max:
        band = probs[2: n_c - 5]
        if band.size and band.min() > 0:
            flat = band.max() / band.min()
            cut = probs[n_c + 5] / probs[n_c - 5]
            if flat < FLATNESS_LIMIT and cut < CUTOFF_RATIO_LIMIT:
                return "uniform-cutoff"
    if probs[0] >= probs.max():
        return "thermal"
    if dist.fano < FOCK_FANO_LIMIT:
        return "fock-like"
    return "coherent-like"


def regime_map(p: RabiParams, gp: GainParams, r_values,
               gamma_values) -> list[tuple[float, float, str]]:
    """Classification over an (r, Gamma) grid; rows ordered as the inputs."""
    try:
        nc = critical_photon_number(p) if p.g > 0 else None
    except ScanLimitError:
        nc = None
    out = []
    for gam in gamma_values:
        for r in r_values:
            d = steady_state(p, gp.replace(r=float(r), gamma=float(gam)))
            out.append((float(r), float(gam), classify_distribution(d, nc)))
    return out
