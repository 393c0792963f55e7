"""Direct density-matrix route to the laser steady state.

Instead of coarse-graining over injected emitters, the gain medium is a
five-level system (ground g, lasing pair a/b, fast bath levels c/d) coupled
coherently to one ladder transition at a time.  At steady state the four
coherence unknowns (rho_aa, rho_ab, rho_ba, rho_bb) of the transition
(a, n) <-> (b, n+1) obey a 4x4 linear system M_n P_n = r_a rho_nn e_1 with
effective pump r_a = r Gamma/(r + Gamma) once the bath levels are
eliminated, and the resulting per-quantum gain has the closed form

    A_n = 2 r_a |V|^2 / (Gamma^2 + 4|V|^2 + Delta_n^2),   V = eps sqrt(n),

where Delta_n here is the FULL transition detuning, twice the half-splitting
convention used by the rate module.  With the perturbative matrix elements
this reproduces the rate-equation recursion exactly under the substitution
r -> r_a; that algebraic identity is the cross-check this module exists for.

``block_gain_A`` always computes the closed form and, by default, verifies
it against an explicit inversion of the block.  The pre-elimination
five-level solver keeps the bath levels at finite rates so the elimination
itself can be tested rather than assumed.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .distribution import PhotonDistribution
from .emission import detuning
from .errors import TailMassError, ValidationError
from .laser_rate import TAIL_MASS_LIMIT, _auto_n_max, _normalize_log, _tail_mass
from .params import GainParams, MultiLevelGain, RabiParams

__all__ = [
    "CoherenceBlock",
    "coherence_block",
    "block_gain_A",
    "steady_state_direct",
    "five_level_block",
    "block_gain_A_full",
    "steady_state_direct_full",
]

_GAIN_CHECK_RTOL = 1e-10


class CoherenceBlock:
    """The 4x4 steady-state system of one lasing transition.

    Unknown ordering (rho_aa, rho_ab, rho_ba, rho_bb) for the pair
    (a, n) <-> (b, n+1); the right-hand side is r_a * rho_nn * e1.
    """

    def __init__(self, matrix: np.ndarray, coupling: complex, delta_full: float):
        self.matrix = matrix
        self.coupling = coupling
        self.delta_full = delta_full

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def solve(self, pump_flow: float) -> np.ndarray:
        """P = (rho_aa, rho_ab, rho_ba, rho_bb) for RHS pump_flow * e1."""
        rhs = np.zeros(4, dtype=complex)
        rhs[0] = pump_flow
        return np.linalg.solve(self.matrix, rhs)


def coherence_block(n: int, p: RabiParams, gp: GainParams, mlg: MultiLevelGain,
                    v_phase: float = 0.0) -> CoherenceBlock:
    """Block for the pair (a, n) <-> (b, n+1), i.e. the transition n -> n+1.

    ``v_phase`` rotates the coupling V = eps*sqrt(n+1)*exp(i*phase); the gain
    depends on |V|^2 only, which the tests verify.
    """
    if n < 0:
        raise ValidationError(f"block index n must be >= 0, got {n}")
    m = n + 1
    v = gp.epsilon * math.sqrt(m) * cmath.exp(1j * v_phase)
    delta_full = 2.0 * detuning(m, p, gp)
    gperp = 0.5 * (mlg.gamma_a + mlg.gamma_b)
    mat = np.array([
        [mlg.gamma_a, -1j * v, 1j * v.conjugate(), 0.0],
        [-1j * v.conjugate(), gperp + 1j * delta_full, 0.0, 1j * v.conjugate()],
        [1j * v, 0.0, gperp - 1j * delta_full, -1j * v],
        [0.0, 1j * v, -1j * v.conjugate(), mlg.gamma_b],
    ], dtype=complex)
    return CoherenceBlock(mat, v, delta_full)


def _gain_from_block(block: CoherenceBlock, pump_flow: float) -> float:
    """Gain A = -i (rho_ab V - rho_ba V*) from an explicit block solve."""
    sol = block.solve(pump_flow)
    v = block.coupling
    a = -1j * (sol[1] * v - sol[2] * v.conjugate())
    if abs(a.imag) > 1e-12 * max(abs(a.real), 1e-300):
        raise ValidationError(f"block gain came out complex: {a!r}")
    return float(a.real)


def block_gain_A(n: int, p: RabiParams, gp: GainParams, mlg: MultiLevelGain,
                 check: bool = True, v_phase: float = 0.0) -> float:
    """Per-step gain A_n of the transition (n-1 -> n), closed form.

    A_n = 2 r_a |V|^2 / (Gamma^2 + 4 |V|^2 + Delta_n^2), V = eps*sqrt(n).
    With ``check`` (default) the closed form is verified against the explicit
    inversion of the coherence block to 1e-10 relative.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    gamma = mlg.Gamma
    if gamma == 0:
        raise ValidationError("block is singular at Gamma = 0")
    v2 = (gp.epsilon ** 2) * n
    delta_full = 2.0 * detuning(n, p, gp)
    closed = 2.0 * mlg.r_a * v2 / (gamma ** 2 + 4.0 * v2 + delta_full ** 2)
    if check and mlg.r_a > 0 and v2 > 0:
        block = coherence_block(n - 1, p, gp, mlg, v_phase=v_phase)
        solved = _gain_from_block(block, mlg.r_a)
        if not math.isclose(closed, solved, rel_tol=_GAIN_CHECK_RTOL):
            raise ValidationError(
                f"closed-form gain {closed!r} disagrees with block inversion "
                f"{solved!r} at n = {n}")
    return closed


def _stationary(log_ratios: np.ndarray, n_max: int, auto: bool,
                regrow) -> PhotonDistribution:
    """Shared normalize-and-check step for the direct recursions."""
    nm = n_max
    lr = log_ratios
    while True:
        logp = np.concatenate([[0.0], np.cumsum(lr)])
        probs = _normalize_log(logp)
        tail = _tail_mass(probs)
        if tail < TAIL_MASS_LIMIT:
            return PhotonDistribution.from_probs(probs)
        if not auto:
            raise TailMassError(
                f"tail mass {tail:.2e} at n_max = {nm} exceeds {TAIL_MASS_LIMIT}")
        nm = max(2 * nm, nm + 200)
        lr = regrow(nm)


def steady_state_direct(p: RabiParams, gp: GainParams, mlg: MultiLevelGain,
                        n_max: int | None = None,
                        check: bool = True) -> PhotonDistribution:
    """Stationary distribution from the direct method (eliminated bath levels).

    The pump comes from ``mlg`` (gp.r is not used here); losses and the
    coupling come from ``gp``.  Algebraically identical to the rate-method
    steady state run at pump r_a.
    """
    gamma = mlg.Gamma  # also validates gamma_a == gamma_b
    gp_equiv = gp.replace(r=mlg.r_a, gamma=gamma)
    auto = n_max is None
    nm = _auto_n_max(p, gp_equiv) if auto else int(n_max)
    if nm < 1:
        raise ValidationError(f"n_max must be >= 1, got {nm}")
    if gp.kappa <= 0:
        raise ValidationError("steady state requires kappa > 0")

    def ratios(m_max: int) -> np.ndarray:
        out = np.empty(m_max)
        for m in range(1, m_max + 1):
            a_m = block_gain_A(m, p, gp, mlg, check=check)
            c_prev = gp.kappa * m
            out[m - 1] = (math.log(a_m) - math.log(c_prev)
                          if a_m > 0 else -math.inf)
        return out

    return _stationary(ratios(nm), nm, auto, ratios)


def five_level_block(m: int, p: RabiParams, gp: GainParams,
                     mlg: MultiLevelGain, rho_nn: float = 1.0) -> dict:
    """Pre-elimination steady state of one gain block at finite bath rates.

    Solves the full linear system for the photon-(m-1) manifold populations
    (g, a, b, c, d), the lasing coherences (rho_ab, rho_ba) and the upper
    population rho_bb of the transition (a, m-1) <-> (b, m), with no
    gamma_c,d -> infinity elimination.  Returns the solved unknowns plus the
    per-quantum gain ``A`` (= gamma_b * rho_bb / rho_nn).

    Population bookkeeping gamma_a*rho_a = gamma_c*rho_c and
    gamma_b*rho_b = gamma_d*rho_d holds exactly in the solution.
    """
    if m < 1:
        raise ValidationError(f"transition index m must be >= 1, got {m}")
    v = gp.epsilon * math.sqrt(m)
    delta_full = 2.0 * detuning(m, p, gp)
    ga, gb = mlg.gamma_a, mlg.gamma_b
    gc, gd, r = mlg.gamma_c, mlg.gamma_d, mlg.r
    gperp = 0.5 * (ga + gb)
    # unknowns y = (g, a, b, c, d, u=rho_ab, v=rho_ba, bb)
    mat = np.zeros((8, 8), dtype=complex)
    rhs = np.zeros(8, dtype=complex)
    mat[0, [0, 3, 4]] = (-r, gc, gd)                    # pump balance of g
    mat[1, [1, 3]] = (ga, -gc)                          # a -> c bookkeeping
    mat[2, [2, 4]] = (gb, -gd)                          # b -> d bookkeeping
    mat[3, :5] = 1.0                                    # manifold closure
    rhs[3] = rho_nn
    mat[4, [5, 7, 1]] = (gperp + 1j * delta_full, 1j * v, -1j * v)   # ab-eq
    mat[5, [6, 1, 7]] = (gperp - 1j * delta_full, 1j * v, -1j * v)   # ba-eq
    mat[6, [7, 5, 6]] = (gb, 1j * v, -1j * v)                        # bb-eq
    mat[7, [0, 1, 6, 5]] = (r, -ga, -1j * v, 1j * v)                 # a-eq
    y = np.linalg.solve(mat, rhs)
    pops = {k: float(y[i].real) for i, k in
            enumerate(("g", "a", "b", "c", "d"))}
    bb = float(y[7].real)
    return {**pops, "rho_ab": complex(y[5]), "rho_ba": complex(y[6]),
            "bb": bb, "A": gb * bb / rho_nn}


def block_gain_A_full(n: int, p: RabiParams, gp: GainParams,
                      mlg: MultiLevelGain) -> float:
    """Per-step gain from the five-level solver (finite bath rates)."""
    return five_level_block(n, p, gp, mlg)["A"]


def steady_state_direct_full(p: RabiParams, gp: GainParams,
                             mlg: MultiLevelGain,
                             n_max: int | None = None) -> PhotonDistribution:
    """Stationary distribution built from the pre-elimination block gains.

    Converges to steady_state_direct as gamma_c,d grow; the difference at
    finite bath rates measures the quality of the bath elimination.
    """
    auto = n_max is None
    if auto:
        gamma = 0.5 * (mlg.gamma_a + mlg.gamma_b)
        eff = mlg.r * gamma / (mlg.r + gamma) if mlg.r > 0 else 0.0
        nm = _auto_n_max(p, gp.replace(r=eff, gamma=gamma))
    else:
        nm = int(n_max)
    if gp.kappa <= 0:
        raise ValidationError("steady state requires kappa > 0")

    def ratios(m_max: int) -> np.ndarray:
        out = np.empty(m_max)
        for m in range(1, m_max + 1):
            a_m = block_gain_A_full(m, p, gp, mlg)
            out[m - 1] = (math.log(a_m) - math.log(gp.kappa * m)
                          if a_m > 0 else -math.inf)
        return out

    return _stationary(ratios(nm), nm, auto, ratios)
