"""First-principles steady state of the pumped emitter + dressed-cavity system.

The model is one two-level emitter (pumped incoherently, decaying at Gamma)
coupled to the generalized Rabi system, with cavity loss entering through a
positive-frequency jump operator J(+): the strictly energy-lowering part of
a + a' or b + b' in the exact Rabi eigenbasis.  A bare Lindblad ``a`` would
create spurious excitations out of the dressed ground state; J(+) cannot.

Everything is assembled in the frame U = I_em (x) V with V the exact Rabi
eigenvectors: the Rabi Hamiltonian is diagonal there and the jump operator
is strictly lower triangular, which keeps the superoperator sparse.  The
composite ordering is emitter (dim 2, ground = index 0) slowest over the
Rabi eigenstates, total dimension 4*n_fock; density matrices returned by
the solver live in this frame.

The Liouvillian acts on row-major vectorized density matrices,
vec(A rho B) = (A kron B^T) vec(rho), and its steady state comes from a
sparse LU solve of the trace-augmented system (one row replaced by the
trace constraint).  With lam = 0 the two pseudo-spin ladders are connected
only through exponentially small matrix elements, so the sector balance
relaxes extremely slowly; the pseudo-spin-summed ("unpolarized")
distribution P(n) is the robust observable, and the uniqueness check
compares exactly that between two independent augmentations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .distribution import PhotonDistribution
from .errors import (ConvergenceError, DegenerateSteadyStateError,
                     MemoryBudgetError, ValidationError)
from .exact import (EigenSystem, TruncatedBasis, b_operator, build_rabi,
                    diagonalize, label_eigenstates, photon_a, support_rule)
from .params import GainParams, RabiParams

__all__ = ["LiouvillianModel", "SteadyStateResult", "build_model",
           "steady_state", "extract_unpolarized", "excited_population"]

# emitter operators, ground state at index 0
SIGMA_PLUS_EM = np.array([[0.0, 0.0], [1.0, 0.0]])
SIGMA_MINUS_EM = SIGMA_PLUS_EM.T
SIGMA_Z_EM = np.array([[-1.0, 0.0], [0.0, 1.0]])

_PRUNE_TOL = 1e-9           # relative cutoff for eigen-expressed operators
_DEGENERACY_TOL = 1e-10     # energies closer than this (x omega) form J^0
# the loss bath is concentrated around omega; transitions lowering the energy
# by less than this fraction of omega (the near-degenerate pseudo-spin flips)
# lie far outside its band and are excluded from the jump operator
_JUMP_BAND_FLOOR = 0.5


@dataclass
class LiouvillianModel:
    """Assembled Hamiltonian, dissipators and sparse superoperator.

    All operators are expressed in the emitter (x) Rabi-eigenbasis frame,
    keeping only the ``dim_r`` lowest Rabi eigenstates (the states above are
    truncation artifacts of the Fock cut; the solver verifies after the fact
    that no weight reaches the retained boundary).
    """

    p: RabiParams
    gp: GainParams
    basis: TruncatedBasis
    options: dict
    hamiltonian: np.ndarray
    dissipators: list  # (name, rate, operator) triples, frame operators
    superop: sp.csr_matrix
    rabi_eigensystem: EigenSystem = field(repr=False)
    dim_r: int = 0  # retained Rabi eigenstates

    @property
    def dim(self) -> int:
        return 2 * self.dim_r

    def trace_residual(self) -> float:
        """|vec(I)^T L| relative to the largest Liouvillian entry."""
        d = self.dim
        tvec = np.zeros(d * d)
        tvec[np.arange(d) * d + np.arange(d)] = 1.0
        lhs = np.abs(self.superop.T @ tvec).max()
        scale = max(np.abs(self.superop.data).max(), 1e-300)
        return float(lhs / scale)


def _sparse_pruned(m: np.ndarray, rel_tol: float = _PRUNE_TOL) -> sp.csr_matrix:
    cutoff = rel_tol * max(np.abs(m).max(), 1e-300)
    out = m.copy()
    out[np.abs(out) < cutoff] = 0.0
    return sp.csr_matrix(out)


def _check_budget(ops: list[sp.csr_matrix], budget_bytes: float) -> None:
    # dominant cost: the O kron O* terms with nnz(O)^2 entries, ~32 B each
    est = sum(float(o.nnz) ** 2 for o in ops) * 32.0
    if est > budget_bytes:
        raise MemoryBudgetError(
            f"superoperator estimated at {est / 1e9:.2f} GB, over the "
            f"{budget_bytes / 1e9:.2f} GB budget")


def _resolve_eigen_cut(n_eigen, es: EigenSystem, dim: int) -> int:
    """How many of the lowest Rabi eigenstates to retain.

    'auto' keeps everything up to the highest labeled state plus a buffer:
    states beyond the labeled window are artifacts of the Fock truncation
    (their displaced tails are cut), contribute dense blocks to the
    superoperator and hold no steady-state weight.
    """
    if n_eigen is None:
        return dim
    if n_eigen == "auto":
        if not es.labels:
            return dim
        k_top = max(es.labels.keys())
        return min(dim, k_top + 1 + max(6, (k_top + 1) // 4))
    k = int(n_eigen)
    if not 2 <= k <= dim:
        raise ValidationError(f"n_eigen must be in [2, {dim}], got {n_eigen}")
    return k


def build_model(p: RabiParams, gp: GainParams,
                n_fock: int | None = None,
                interaction: str = "b", jump: str = "b", rwa: bool = False,
                degeneracy_tol: float = _DEGENERACY_TOL,
                jump_band_floor: float = _JUMP_BAND_FLOOR,
                label_threshold: float = 0.7,
                n_eigen="auto",
                memory_budget_bytes: float = 4e9) -> LiouvillianModel:
    """Assemble the Liouvillian for the driven-dissipative composite system.

    Dissipators: emitter raising at the pump rate r, emitter lowering at
    Gamma (so Gamma = 1/T1 = 2/T2 with no extra dephasing), and J(+) at
    kappa, with J = a + a' or b + b' per ``jump``.  ``interaction`` selects
    the emitter coupling operator the same way; ``rwa`` keeps only the
    co-rotating part eps*(sigma+ O(+) + sigma- O(+)').

    The jump operator keeps only transitions that lower the energy by at
    least ``jump_band_floor * omega``: the loss bath is concentrated around
    omega, so the near-degenerate pseudo-spin flips (released energy ~
    omega*D_n or ~lam, far below the band) are not decay channels.  Without
    the floor the bare-basis jump a + a' acquires strong (2g) spurious
    intra-doublet channels at lam = 0.  Set the floor to 0 for the
    unfiltered strictly-lowering projection.

    The Fock truncation may be chosen below the displaced-state support rule
    (steady states concentrated at low n do not need the full rule); that
    situation warns instead of raising.  ``n_eigen`` (count, 'auto' or None
    for all) additionally restricts the model to the lowest Rabi eigenstates;
    the steady-state solver reports the weight at that boundary.
    """
    if interaction not in ("a", "b") or jump not in ("a", "b"):
        raise ValidationError("interaction and jump must be 'a' or 'b'")
    if n_fock is None:
        n_fock = support_rule(p.g)
    basis = TruncatedBasis(n_fock)
    if not basis.supports(p.g):
        warnings.warn(
            f"n_fock = {n_fock} below the displaced-state support rule "
            f"{support_rule(p.g)} for g = {p.g}; adequate only when the "
            "steady state is concentrated well below the truncation",
            stacklevel=2)
    gp.check_weak_coupling(p)

    h_rabi = build_rabi(p, basis, enforce_support=False)
    es = label_eigenstates(diagonalize(h_rabi), p, threshold=label_threshold)
    keep = _resolve_eigen_cut(n_eigen, es, basis.dim)
    es = EigenSystem(es.energies[:keep], es.vectors[:, :keep], basis,
                     labels={k: v_ for k, v_ in (es.labels or {}).items()
                             if k < keep})
    v = es.vectors

    def frame_quadrature(which: str) -> np.ndarray:
        base = photon_a(basis) if which == "a" else b_operator(p, basis)
        quad = base + base.T
        return v.T @ quad @ v

    def lowering_part(m: np.ndarray, floor: float) -> np.ndarray:
        e = es.energies
        released = e[None, :] - e[:, None]
        return m * (released > max(degeneracy_tol, floor) * p.omega)

    i_em = np.eye(2)
    i_r = np.eye(keep)
    omega_em = p.omega * (1.0 + gp.delta)
    h = (np.kron(i_em, np.diag(es.energies))
         + 0.5 * omega_em * np.kron(SIGMA_Z_EM, i_r))
    o_int = frame_quadrature(interaction)
    if rwa:
        o_plus = lowering_part(o_int, 0.0)
        h = h + gp.epsilon * (np.kron(SIGMA_PLUS_EM, o_plus)
                              + np.kron(SIGMA_MINUS_EM, o_plus.conj().T))
    else:
        h = h + gp.epsilon * np.kron(SIGMA_PLUS_EM + SIGMA_MINUS_EM, o_int)

    j_plus = lowering_part(frame_quadrature(jump), jump_band_floor)
    dissipators = [
        ("pump", gp.r, np.kron(SIGMA_PLUS_EM, i_r)),
        ("emitter-decay", gp.gamma, np.kron(SIGMA_MINUS_EM, i_r)),
        ("cavity", gp.kappa, np.kron(i_em, j_plus)),
    ]

    h_s = _sparse_pruned(h)
    ops = [(_sparse_pruned(o), rate) for (_, rate, o) in dissipators]
    _check_budget([o for o, _ in ops], memory_budget_bytes)

    d = 2 * keep
    eye = sp.identity(d, format="csr")
    lsup = -1j * (sp.kron(h_s, eye, format="csr")
                  - sp.kron(eye, h_s.T, format="csr"))
    for o, rate in ops:
        if rate == 0:
            continue
        odo = (o.conj().T @ o).tocsr()
        lsup = lsup + rate * (sp.kron(o, o.conj(), format="csr")
                              - 0.5 * sp.kron(odo, eye, format="csr")
                              - 0.5 * sp.kron(eye, odo.T, format="csr"))
    lsup = lsup.tocsr()
    lsup.eliminate_zeros()

    model = LiouvillianModel(p=p, gp=gp, basis=basis,
                             options={"interaction": interaction, "jump": jump,
                                      "rwa": rwa},
                             hamiltonian=h, dissipators=dissipators,
                             superop=lsup, rabi_eigensystem=es, dim_r=keep)
    res = model.trace_residual()
    if res > 1e-9:
        raise ValidationError(f"trace row does not annihilate L: {res:.2e}")
    return model


@dataclass
class SteadyStateResult:
    """Validated steady-state density operator and its photon statistics.

    ``rho`` lives in the model frame (emitter (x) Rabi eigenstates).
    """

    rho: np.ndarray
    residual: float
    distribution: PhotonDistribution          # unpolarized P(n), normalized
    polarized: dict                            # (n, sigma) -> population
    unlabeled_mass: float
    sector_spread: float                       # uniqueness diagnostic (TV)
    boundary_mass: float = 0.0                 # weight at the eigen-cut edge

    def population(self, n: int, sigma: int) -> float:
        return self.polarized.get((n, sigma), 0.0)

    def rabi_reduced(self, dim_r: int) -> np.ndarray:
        """Partial trace over the emitter, in the Rabi eigenbasis."""
        return self.rho[:dim_r, :dim_r] + self.rho[dim_r:, dim_r:]


def _solve_augmented(lsup: sp.csr_matrix, d: int, pin_row: int) -> np.ndarray:
    """Solve L x = 0, tr(x) = 1 by substituting the trace row at ``pin_row``."""
    n2 = d * d
    diag_idx = np.arange(d) * d + np.arange(d)
    scale = np.abs(lsup.data).max() if lsup.nnz else 1.0
    lil = lsup.tolil(copy=True)
    lil.rows[pin_row] = list(diag_idx)
    lil.data[pin_row] = [scale] * d
    rhs = np.zeros(n2, dtype=complex)
    rhs[pin_row] = scale
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            x = spla.spsolve(lil.tocsc(), rhs)
        except spla.MatrixRankWarning as exc:
            raise DegenerateSteadyStateError(
                "trace-augmented Liouvillian is singular: the null space is "
                "degenerate (e.g. disconnected pseudo-spin sectors at lam = 0 "
                "with no channel between them)") from exc
        except Exception as exc:  # factorization failures and friends
            raise ConvergenceError(
                f"sparse steady-state solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise ConvergenceError("sparse steady-state solve returned non-finite values")
    return x


def _distribution_from_vec(x: np.ndarray, model: LiouvillianModel):
    d = model.dim
    rho = x.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise ConvergenceError("steady-state solution has zero trace")
    rho = rho / tr
    d_r = model.dim_r
    pops = np.real(np.diag(rho[:d_r, :d_r]) + np.diag(rho[d_r:, d_r:]))
    polarized: dict = {}
    unlabeled = 0.0
    for k in range(d_r):
        lab = (model.rabi_eigensystem.labels or {}).get(k)
        if lab is None:
            unlabeled += pops[k]
        else:
            polarized[lab] = polarized.get(lab, 0.0) + pops[k]
    boundary = float(pops[-3:].sum())
    return rho, polarized, unlabeled, boundary


def _unpolarized(polarized: dict) -> np.ndarray:
    if not polarized:
        raise ValidationError("no labeled eigenstates to extract P(n) from")
    n_top = max(n for (n, _s) in polarized)
    out = np.zeros(n_top + 1)
    for (n, _s), v in polarized.items():
        out[n] += v
    return out


def steady_state(model: LiouvillianModel, resid_tol: float = 1e-8,
                 check_uniqueness: bool = True,
                 uniqueness_tol: float = 1e-3,
                 positivity_tol: float = 1e-8,
                 residue_tol: float = 1e-3) -> SteadyStateResult:
    """Null vector of the Liouvillian, validated and reduced to P(n).

    Raises DegenerateSteadyStateError when two independent trace
    augmentations disagree on the unpolarized distribution (a genuinely
    multi-dimensional null space); the pseudo-spin sector balance at lam = 0
    is allowed to differ and is only reported via ``sector_spread``.
    """
    d = model.dim
    lsup = model.superop
    x = _solve_augmented(lsup, d, pin_row=0)
    norm_l = math.sqrt(float(np.vdot(lsup.data, lsup.data).real))
    resid = float(np.linalg.norm(lsup @ x) / (norm_l * np.linalg.norm(x)))
    if resid > resid_tol:
        raise ConvergenceError(
            f"steady-state residual |L rho|/(|L||rho|) = {resid:.2e} "
            f"exceeds {resid_tol}")
    rho, polarized, unlabeled, boundary = _distribution_from_vec(x, model)

    sector_spread = 0.0
    if check_uniqueness:
        last = (d - 1) * d + (d - 1)
        x2 = _solve_augmented(lsup, d, pin_row=last)
        _, pol2, _, _ = _distribution_from_vec(x2, model)
        p1, p2 = _unpolarized(polarized), _unpolarized(pol2)
        m = max(p1.size, p2.size)
        a = np.zeros(m); a[:p1.size] = p1
        b = np.zeros(m); b[:p2.size] = p2
        unpol_tv = 0.5 * np.abs(a / a.sum() - b / b.sum()).sum()
        keys = set(polarized) | set(pol2)
        sector_spread = 0.5 * sum(abs(polarized.get(k, 0.0) - pol2.get(k, 0.0))
                                  for k in keys)
        if unpol_tv > uniqueness_tol:
            raise DegenerateSteadyStateError(
                f"two trace augmentations disagree on P(n) by TV = "
                f"{unpol_tv:.2e}; the Liouvillian null space is degenerate")

    dev = np.abs(rho - rho.conj().T).max()
    if dev > 1e-9:
        raise ValidationError(f"steady state not Hermitian: {dev:.2e}")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -positivity_tol:
        raise ValidationError(
            f"steady state not positive: min eigenvalue {evals.min():.2e}")
    if unlabeled > residue_tol:
        warnings.warn(f"unlabeled population {unlabeled:.2e} above "
                      f"{residue_tol}; P(n) may be incomplete", stacklevel=2)
    if boundary > 1e-6:
        warnings.warn(f"population {boundary:.2e} at the retained-eigenstate "
                      "boundary; increase n_eigen or n_fock", stacklevel=2)
    dist = PhotonDistribution.from_probs(_unpolarized(polarized))
    return SteadyStateResult(rho=rho, residual=resid, distribution=dist,
                             polarized=polarized, unlabeled_mass=unlabeled,
                             sector_spread=sector_spread,
                             boundary_mass=boundary)


def extract_unpolarized(result: SteadyStateResult) -> PhotonDistribution:
    """P(n) = P(n,+1) + P(n,-1) over the labeled eigenstates (normalized)."""
    return result.distribution


def photon_distribution(model: LiouvillianModel, rho: np.ndarray):
    """Unpolarized P(n), per-(n, sigma) populations and unlabeled residue of
    an arbitrary frame density operator (unit trace assumed)."""
    _, polarized, unlabeled, _ = _distribution_from_vec(rho.ravel(), model)
    return (PhotonDistribution.from_probs(_unpolarized(polarized)),
            polarized, unlabeled)


def excited_population(model: LiouvillianModel, result: SteadyStateResult,
                       window: float = 0.5) -> float:
    """Steady-state population outside the ground manifold of the full H.

    The ground manifold is every full-system eigenstate within
    ``window * omega`` of the lowest one (this keeps the near-degenerate
    pseudo-spin partner of the ground state inside the manifold at lam = 0).
    """
    evals, vecs = np.linalg.eigh(model.hamiltonian)
    pops = np.real(np.einsum("ji,jk,ki->i", vecs.conj(), result.rho, vecs))
    inside = evals < evals[0] + window * model.p.omega
    return float(pops[~inside].sum())
