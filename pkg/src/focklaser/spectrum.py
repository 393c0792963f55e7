"""Analytic deep-strong-coupling spectrum of the generalized Rabi model.

For coupling g >> 1 the eigenstates organize into two displaced-oscillator
ladders labeled by an oscillator number n and a pseudo-spin sigma = +/-1,
with energies (hbar = 1)

    E_{n,sigma} = n*omega + (sigma/2) * S_n,

where the level splitting S_n is omega*D_n for lam = 0 and
sqrt((omega*D_n)^2 + lam^2) for lam > 0, with D_n = exp(-2g^2) L_n(4g^2).

Sign convention: at lam = 0 the splitting keeps the sign of D_n (the Laguerre
values alternate, so the sigma = -1 state is not always the lower one), which
is what first-order degenerate perturbation theory gives.  Any lam > 0
repels the doublet and orders it by the positive root.  The two conventions
agree up to |D_n| and both satisfy E(n,+1) + E(n,-1) = 2*n*omega exactly.

Everything here is a pure function of its arguments; all routines are safe
for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ScanLimitError, ValidationError
from .laguerre import displacement_diagonal, displacement_diagonals
from .params import RabiParams

__all__ = [
    "SpectrumTable",
    "energy",
    "level_splitting",
    "splittings",
    "excitation_gaps",
    "spectrum_table",
    "critical_photon_number",
    "mixing_angle",
    "bloch_angle",
    "matrix_element_x",
    "matrix_element_b",
]

SIGMAS = (-1, +1)  # table order: sorted by (sigma, n)


def _check_sigma(sigma: int) -> int:
    if sigma not in (+1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    return sigma


@dataclass(frozen=True)
class SpectrumTable:
    """Per-level spectrum records, sorted by (sigma, n).

    ``gap[i] = energy[i+1] - energy[i]`` within the same sigma branch; the
    topmost level of each branch carries NaN there.
    """

    n: np.ndarray
    sigma: np.ndarray
    energy: np.ndarray
    gap: np.ndarray

    def branch(self, sigma: int) -> "SpectrumTable":
        _check_sigma(sigma)
        m = self.sigma == sigma
        return SpectrumTable(self.n[m], self.sigma[m], self.energy[m], self.gap[m])

    def rows(self):
        for i in range(self.n.size):
            yield (int(self.n[i]), int(self.sigma[i]),
                   float(self.energy[i]), float(self.gap[i]))


def splittings(n_max: int, p: RabiParams) -> np.ndarray:
    """Level splittings S_n = E_{n,+} - E_{n,-} for n = 0..n_max.

    Signed omega0*D_n at lam = 0; sqrt((omega0*D_n)^2 + lam^2) otherwise
    (omega0 = omega in the resonant case used throughout).
    """
    d = displacement_diagonals(n_max, p.g)
    if p.lam == 0.0:
        return p.omega0 * d
    return np.hypot(p.omega0 * d, p.lam)


def level_splitting(n: int, p: RabiParams) -> float:
    """Splitting S_n of the n-th doublet (see splittings)."""
    d = displacement_diagonal(n, p.g)
    if p.lam == 0.0:
        return p.omega0 * d
    return math.hypot(p.omega0 * d, p.lam)


def energy(n: int, sigma: int, p: RabiParams) -> float:
    """E_{n,sigma} = n*omega + (sigma/2)*S_n, relative to the -g^2*omega offset."""
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    _check_sigma(sigma)
    return n * p.omega + 0.5 * sigma * level_splitting(n, p)


def spectrum_table(p: RabiParams, n_max: int,
                   sigmas: tuple[int, ...] = SIGMAS) -> SpectrumTable:
    """Energies and intra-branch gaps for n = 0..n_max over the given branches."""
    if n_max < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")
    s = splittings(n_max, p)
    ns, sigs, es, gaps = [], [], [], []
    for sigma in sigmas:
        _check_sigma(sigma)
        e = np.arange(n_max + 1) * p.omega + 0.5 * sigma * s
        g_ = np.empty(n_max + 1)
        g_[:-1] = np.diff(e)
        g_[-1] = np.nan
        ns.append(np.arange(n_max + 1))
        sigs.append(np.full(n_max + 1, sigma, dtype=int))
        es.append(e)
        gaps.append(g_)
    return SpectrumTable(np.concatenate(ns), np.concatenate(sigs),
                         np.concatenate(es), np.concatenate(gaps))


def excitation_gaps(sigma: int, p: RabiParams, n_max: int) -> SpectrumTable:
    """Single-branch table of successive excitation energies E_{n+1}-E_n."""
    _check_sigma(sigma)
    return spectrum_table(p, n_max, sigmas=(sigma,))


def critical_photon_number(p: RabiParams, threshold: float = 0.01,
                           sigma: int = -1, scan_limit: int | None = None) -> int:
    """Smallest n with |gap(n) - omega|/omega > threshold (estimates n_c ~ g^2).

    gap(n) means the excitation energy E_{n+1} - E_n of the chosen branch.

    Raises
    ------
    ScanLimitError
        If no gap deviates by more than ``threshold`` below the scan ceiling
        (e.g. deep in the perturbative regime g << 1, where the ladder
        deviation plateaus near 2 g^2 and never reaches a 1% threshold).
    """
    if p.g <= 0:
        raise ValidationError("critical photon number needs g > 0")
    _check_sigma(sigma)
    if scan_limit is None:
        scan_limit = int(8 * p.g * p.g) + 200
    s = splittings(scan_limit + 1, p)
    gaps = p.omega + 0.5 * sigma * np.diff(s)
    dev = np.abs(gaps - p.omega) / p.omega
    hits = np.nonzero(dev > threshold)[0]
    if hits.size == 0:
        raise ScanLimitError(
            f"no excitation gap deviates from omega by more than "
            f"{threshold:.3g} below n = {scan_limit} (g = {p.g})"
        )
    return int(hits[0])


def mixing_angle(n: int, p: RabiParams) -> float:
    """Doublet mixing angle theta in [0, pi), defined by tan(theta) = omega*D_n/lam.

    theta = pi/2 at lam = 0 (equal-weight doublet, any sign of D_n); theta -> 0
    as D_n -> 0 with lam > 0.  The degenerate corner D_n = lam = 0 returns the
    lam = 0 limit pi/2.
    """
    theta = bloch_angle(n, p)
    if theta < 0.0:
        theta += math.pi
    return theta


def bloch_angle(n: int, p: RabiParams) -> float:
    """Signed doublet angle phi = atan2(omega*D_n, lam) in [-pi/2, pi/2].

    This is the angle that actually parametrizes the doublet eigenvectors
    (cos(phi/2), sin(phi/2)); it differs from mixing_angle by pi where
    D_n < 0.  At lam > 0 the labels sigma = +/-1 mean upper/lower member of
    the doublet; the sign of phi records how that pair connects to the
    pseudo-spin labels of the lam = 0 ladder (which alternate with the sign
    of the Laguerre values).
    """
    d = displacement_diagonal(n, p.g)
    if p.lam == 0.0:
        return math.pi / 2
    return math.atan2(p.omega0 * d, p.lam)


def _ladder(n_to: int, n_from: int) -> float:
    if n_to == n_from - 1:
        return math.sqrt(n_from)
    if n_to == n_from + 1:
        return math.sqrt(n_from + 1)
    return 0.0


def matrix_element_x(n_to: int, sigma_to: int, n_from: int, sigma_from: int,
                     p: RabiParams) -> float:
    """<n',sigma'| (a + a') |n,sigma> in the dressed eigenbasis.

    Spin-conserving part: the bare ladder elements sqrt(n), sqrt(n+1),
    independent of g.  The photon-number-conserving part carries the
    displacement: -2g*sin(phi_n) for a spin flip and -sigma*2g*cos(phi_n)
    on the diagonal (both vanish for n' != n), with phi_n the signed doublet
    angle.  At lam = 0 (phi = pi/2) this reduces to a single spin-flip
    element -2g.
    """
    if min(n_to, n_from) < 0:
        raise ValidationError("photon indices must be >= 0")
    _check_sigma(sigma_to)
    _check_sigma(sigma_from)
    val = 0.0
    if sigma_to == sigma_from:
        val += _ladder(n_to, n_from)
    if n_to == n_from:
        phi = bloch_angle(n_from, p)
        if sigma_to == sigma_from:
            val += -sigma_from * 2.0 * p.g * math.cos(phi)
        else:
            val += -2.0 * p.g * math.sin(phi)
    return val


def matrix_element_b(n_to: int, sigma_to: int, n_from: int, sigma_from: int,
                     p: RabiParams) -> float:
    """<n',sigma'| (b + b') |n,sigma>: the ladder elements only, spin-diagonal."""
    if min(n_to, n_from) < 0:
        raise ValidationError("photon indices must be >= 0")
    _check_sigma(sigma_to)
    _check_sigma(sigma_from)
    if sigma_to != sigma_from:
        return 0.0
    return _ladder(n_to, n_from)
