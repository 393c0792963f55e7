"""Truncated-Fock exact diagonalization of the generalized Rabi model.

Serves as the brute-force oracle for the analytic spectrum module: dense
Hamiltonians, displaced Fock states built from a matrix exponential (fully
independent of the Laguerre recurrence), overlap-based labeling of exact
eigenvectors by (n, sigma), and the positive-frequency (strictly
energy-lowering) projection of system operators used to build physical
dissipators.

Composite basis: qubit (dim 2) x Fock(n_fock), qubit index varying slowest,
so |q, n> sits at linear index q*n_fock + n.  The qubit operators act in the
sigma_z eigenbasis (index 0 = up, matching the Pauli matrices below).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import SupportRuleError, TruncationError, ValidationError
from .params import RabiParams
from .spectrum import bloch_angle

__all__ = [
    "TruncatedBasis",
    "DenseOperator",
    "EigenSystem",
    "destroy",
    "displacement_matrix",
    "displaced_fock",
    "photon_a",
    "qubit_sigma",
    "b_operator",
    "build_rabi",
    "diagonalize",
    "analytic_state",
    "label_eigenstates",
    "positive_frequency_part",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
X_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
X_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


def support_rule(g: float) -> int:
    """Minimum Fock truncation for displaced states of displacement 2g.

    Displaced number distributions have mean 4g^2 and Poisson-like tails;
    4g^2 + 10*sqrt(4g^2) + 20 keeps the tail mass far below 1e-8.
    """
    return int(math.ceil(4 * g * g + 20 * g + 20))


@dataclass(frozen=True)
class TruncatedBasis:
    """Fock truncation 0..n_fock-1 tensored with a two-level system."""

    n_fock: int
    qubit_dim: int = 2

    def __post_init__(self):
        if self.n_fock < 2:
            raise ValidationError(f"n_fock must be >= 2, got {self.n_fock}")
        if self.qubit_dim != 2:
            raise ValidationError("only qubit_dim = 2 is supported")

    @property
    def dim(self) -> int:
        return self.qubit_dim * self.n_fock

    def supports(self, g: float) -> bool:
        return self.n_fock >= support_rule(g)

    def require_support(self, g: float) -> None:
        if not self.supports(g):
            raise SupportRuleError(
                f"n_fock = {self.n_fock} below the displaced-state support "
                f"rule {support_rule(g)} for g = {g}"
            )

    @classmethod
    def for_coupling(cls, g: float, extra: int = 0) -> "TruncatedBasis":
        return cls(n_fock=support_rule(g) + extra)

    def index(self, qubit: int, n: int) -> int:
        return qubit * self.n_fock + n


@dataclass(frozen=True)
class DenseOperator:
    """A dense matrix over a TruncatedBasis composite space."""

    matrix: np.ndarray
    basis: TruncatedBasis

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.basis.dim, self.basis.dim):
            raise ValidationError(
                f"matrix shape {m.shape} does not match basis dim {self.basis.dim}")

    def require_hermitian(self, tol: float = 1e-12) -> "DenseOperator":
        dev = np.abs(self.matrix - self.matrix.conj().T).max()
        scale = max(1.0, np.abs(self.matrix).max())
        if dev > tol * scale:
            raise ValidationError(f"operator fails Hermiticity check: {dev:.3e}")
        return self


def destroy(n_fock: int) -> np.ndarray:
    """Fock-space annihilation operator."""
    return np.diag(np.sqrt(np.arange(1.0, n_fock)), 1)


@lru_cache(maxsize=32)
def displacement_matrix(z: float, n_fock: int) -> np.ndarray:
    """D(z) = exp(z(a' - a)) as a dense matrix via the matrix exponential.

    Deliberately independent of the Laguerre route, so its diagonal serves as
    the oracle for displacement_diagonal.  Cached per (z, n_fock).
    """
    a = destroy(n_fock)
    m = expm(z * (a.T - a))
    m.flags.writeable = False
    return m


def displaced_fock(n: int, z: float, n_fock: int,
                   max_truncation_loss: float = 1e-6) -> np.ndarray:
    """Normalized displaced Fock state D(z)|n> in a truncated Fock space.

    Raises
    ------
    TruncationError
        If the state carries more than ``max_truncation_loss`` of its weight
        in the topmost Fock levels.  (The truncated exponential is exactly
        orthogonal, so the norm itself cannot reveal truncation damage; the
        boundary weight can.)
    """
    if not 0 <= n < n_fock:
        raise ValidationError(f"n = {n} outside truncation 0..{n_fock - 1}")
    col = displacement_matrix(z, n_fock)[:, n].copy()
    edge = max(2, n_fock // 20)
    boundary = float(np.dot(col[-edge:], col[-edge:]))
    if boundary > max_truncation_loss:
        raise TruncationError(
            f"displaced Fock |{n}> at z = {z} carries {boundary:.2e} of its "
            f"weight in the top {edge} levels of n_fock = {n_fock}"
        )
    return col / math.sqrt(float(np.dot(col, col)))


def photon_a(basis: TruncatedBasis) -> np.ndarray:
    """Annihilation operator lifted to the composite space."""
    return np.kron(np.eye(2), destroy(basis.n_fock))


def qubit_sigma(which: str, basis: TruncatedBasis) -> np.ndarray:
    """Pauli operator of the strongly coupled qubit on the composite space."""
    pauli = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[which]
    return np.kron(pauli, np.eye(basis.n_fock))


def b_operator(p: RabiParams, basis: TruncatedBasis) -> np.ndarray:
    """Dressed boson b = a + g*sigma_x on the composite space."""
    return photon_a(basis) + p.g * qubit_sigma("x", basis)


def build_rabi(p: RabiParams, basis: TruncatedBasis,
               enforce_support: bool = True) -> DenseOperator:
    """Dense generalized Rabi Hamiltonian on the composite basis.

    H = (omega0*sz + lam*sx)/2 + omega*a'a + g*omega*sx*(a + a')
    """
    if enforce_support:
        basis.require_support(p.g)
    a = destroy(basis.n_fock)
    number = np.kron(np.eye(2), a.T @ a)
    x_ph = np.kron(SIGMA_X, a + a.T)
    h = (0.5 * p.omega0 * qubit_sigma("z", basis)
         + 0.5 * p.lam * qubit_sigma("x", basis)
         + p.omega * number
         + p.g_abs * x_ph)
    return DenseOperator(h, basis).require_hermitian()


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues/eigenvectors, with optional (n, sigma) labels.

    ``labels[k]`` maps an eigenvector column index to its assigned
    (n, sigma); unlabeled columns are simply absent from the dict.
    """

    energies: np.ndarray
    vectors: np.ndarray
    basis: TruncatedBasis
    labels: dict[int, tuple[int, int]] | None = None

    def residual(self, h: np.ndarray) -> float:
        r = h @ self.vectors - self.vectors * self.energies
        return float(np.linalg.norm(r) / max(np.linalg.norm(h), 1e-300))

    def index_of(self, n: int, sigma: int) -> int:
        if self.labels is None:
            raise ValidationError("eigensystem is unlabeled")
        for k, lab in self.labels.items():
            if lab == (n, sigma):
                return k
        raise KeyError(f"no eigenvector labeled (n={n}, sigma={sigma})")


def diagonalize(op: DenseOperator) -> EigenSystem:
    op.require_hermitian()
    energies, vectors = np.linalg.eigh(op.matrix)
    return EigenSystem(energies, vectors, op.basis)


def analytic_state(n: int, sigma: int, p: RabiParams, basis: TruncatedBasis,
                   max_truncation_loss: float = 1e-6) -> np.ndarray:
    """Perturbative eigenstate |n,sigma> on the composite basis.

    lam = 0:  (D'(g)|n>|x+> + sigma*D'(-g)|n>|x->)/sqrt(2).
    lam > 0:  cos/sin(phi/2) combinations with the signed doublet angle
    tan(phi) = omega*D_n/lam, so that sigma = +1 is always the upper member;
    at phi = pi/2 this reduces to the lam = 0 form.
    """
    if sigma not in (+1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    # D'(g)|n> = D(-g)|n>
    plus = displaced_fock(n, -p.g, basis.n_fock, max_truncation_loss)
    minus = displaced_fock(n, +p.g, basis.n_fock, max_truncation_loss)
    phi = bloch_angle(n, p)
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    if sigma == +1:
        return c * np.kron(X_PLUS, plus) + s * np.kron(X_MINUS, minus)
    return s * np.kron(X_PLUS, plus) - c * np.kron(X_MINUS, minus)


def label_eigenstates(es: EigenSystem, p: RabiParams,
                      threshold: float = 0.7,
                      n_label_max: int | None = None) -> EigenSystem:
    """Assign (n, sigma) labels to exact eigenvectors by analytic overlap.

    Each analytic template |n,sigma> claims the exact eigenvector it overlaps
    most, provided |<v|n,sigma>|^2 >= threshold; conflicting claims keep the
    larger overlap.  Template construction stops at the first n whose
    displaced states no longer fit the truncation, so states near the
    boundary stay unlabeled (permitted).
    """
    basis = es.basis
    if n_label_max is None:
        n_label_max = basis.n_fock - 1
    templates = []
    keys = []
    for n in range(n_label_max + 1):
        try:
            pair = [analytic_state(n, s, p, basis) for s in (+1, -1)]
        except TruncationError:
            break
        templates.extend(pair)
        keys.extend([(n, +1), (n, -1)])
    if not templates:
        return replace(es, labels={})
    t = np.column_stack(templates)
    overlaps = np.abs(es.vectors.conj().T @ t) ** 2  # (dim, n_templates)
    labels: dict[int, tuple[int, int]] = {}
    best: dict[int, float] = {}
    for j, key in enumerate(keys):
        k = int(np.argmax(overlaps[:, j]))
        ov = float(overlaps[k, j])
        if ov < threshold:
            continue
        if ov > best.get(k, 0.0):
            best[k] = ov
            labels[k] = key
    return replace(es, labels=labels)


def positive_frequency_part(j_op: np.ndarray, es: EigenSystem,
                            degeneracy_tol: float = 1e-10) -> np.ndarray:
    """Strictly energy-lowering part J(+) of an operator in the exact eigenbasis.

    J(+) = sum over E_m < E_n - tol of |m><m|J|n><n|.  Pairs within
    ``degeneracy_tol`` count as degenerate, belong to the J^0 block and are
    excluded (the near-degenerate sigma doublets at lam = 0 must not be
    treated as decay channels).
    """
    e = es.energies
    v = es.vectors
    jt = v.conj().T @ j_op @ v
    lowering = e[:, None] < e[None, :] - degeneracy_tol
    return v @ (jt * lowering) @ v.conj().T
