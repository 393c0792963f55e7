import math

import numpy as np
import pytest

from conftest import brute_force_displacement
from focklaser.errors import SupportRuleError, TruncationError
from focklaser.params import RabiParams
from focklaser import exact
from focklaser.laguerre import displacement_diagonal
from focklaser.spectrum import energy


class TestBasisAndBuild:
    def test_support_rule_enforced(self):
        p = RabiParams(g=3.0)
        with pytest.raises(SupportRuleError):
            exact.build_rabi(p, exact.TruncatedBasis(40))
        # explicit opt-out for solver-level truncations
        exact.build_rabi(p, exact.TruncatedBasis(40), enforce_support=False)

    def test_for_coupling_satisfies_rule(self):
        for g in (0.5, 2.0, 10.0):
            assert exact.TruncatedBasis.for_coupling(g).supports(g)

    def test_hermitian(self):
        p = RabiParams(g=1.3, lam=0.2)
        h = exact.build_rabi(p, exact.TruncatedBasis.for_coupling(1.3))
        h.require_hermitian()

    def test_decoupled_limit_eigenvalues(self):
        # g = 0: block diagonal, eigenvalues n*omega +/- omega0/2
        p = RabiParams(g=0.0, omega0=0.8)
        es = exact.diagonalize(exact.build_rabi(p, exact.TruncatedBasis(25)))
        expected = np.sort(np.concatenate(
            [np.arange(25) + 0.4, np.arange(25) - 0.4]))
        assert np.allclose(es.energies, expected, atol=1e-12)

    def test_ground_energy_g1(self):
        # lowest eigenvalue ~ -g^2 - (1/2)exp(-2g^2); the first-order value
        # carries a genuine 0.08*omega residual at g = 1
        p = RabiParams(g=1.0)
        es = exact.diagonalize(exact.build_rabi(p, exact.TruncatedBasis(100)))
        approx = -1.0 - 0.5 * math.exp(-2.0)
        assert es.energies[0] == pytest.approx(approx, abs=0.1)
        assert es.energies[0] < approx  # second order only lowers

    def test_residual_invariant(self):
        p = RabiParams(g=2.0)
        h = exact.build_rabi(p, exact.TruncatedBasis.for_coupling(2.0))
        es = exact.diagonalize(h)
        assert es.residual(h.matrix) < 1e-9

    def test_orthonormality(self):
        p = RabiParams(g=2.0)
        es = exact.diagonalize(
            exact.build_rabi(p, exact.TruncatedBasis.for_coupling(2.0)))
        gram = es.vectors.T @ es.vectors
        assert np.abs(gram - np.eye(gram.shape[0])).max() < 1e-9


class TestDisplacedFock:
    def test_zero_displacement(self):
        v = exact.displaced_fock(0, 0.0, 30)
        assert v[0] == 1.0 and np.abs(v[1:]).max() == 0.0

    def test_coherent_state_mean(self):
        z = 1.7
        v = exact.displaced_fock(0, z, 60)
        n = np.arange(60)
        assert float(n @ (v * v)) == pytest.approx(z * z, rel=1e-10)

    def test_overlap_matches_displacement_diagonal(self):
        # <2|D(1.5)|2> equals the stable Laguerre product at g = 0.75
        v = exact.displaced_fock(2, 1.5, 80)
        assert v[2] == pytest.approx(displacement_diagonal(2, 0.75), abs=1e-10)

    def test_truncation_loss_detected(self):
        with pytest.raises(TruncationError):
            exact.displaced_fock(35, 3.0, 40)

    def test_norms(self):
        for n, z in ((0, 2.0), (5, 1.0), (12, -2.5)):
            v = exact.displaced_fock(n, z, 120)
            assert abs(np.dot(v, v) - 1.0) < 1e-8


class TestCommutator:
    def test_b_commutator_randomized(self, rng):
        # [b, b'] = 1 away from the truncation boundary
        for _ in range(100):
            g = float(rng.uniform(0.5, 3.0))
            basis = exact.TruncatedBasis.for_coupling(g)
            b = exact.b_operator(RabiParams(g=g), basis)
            comm = b @ b.T - b.T @ b
            nf = basis.n_fock
            keep = nf - nf // 10
            idx = np.concatenate([np.arange(keep), nf + np.arange(keep)])
            dev = np.abs((comm - np.eye(basis.dim))[np.ix_(idx, idx)]).max()
            assert dev < 1e-8


class TestLabeling:
    def test_high_coupling_overlaps(self):
        # g = 10: the lowest 50 states per branch label with overlap > 0.99
        p = RabiParams(g=10.0)
        basis = exact.TruncatedBasis.for_coupling(10.0)
        es = exact.label_eigenstates(
            exact.diagonalize(exact.build_rabi(p, basis)), p)
        labeled = {v: k for k, v in es.labels.items()}
        for n in range(50):
            for s in (+1, -1):
                k = labeled[(n, s)]
                v = exact.analytic_state(n, s, p, basis)
                assert abs(es.vectors[:, k] @ v) ** 2 > 0.99

    def test_overlap_degrades_near_critical(self):
        # at g = 2 (n_c = 4) the ansatz quality degrades with n
        p = RabiParams(g=2.0)
        basis = exact.TruncatedBasis.for_coupling(2.0)
        es = exact.diagonalize(exact.build_rabi(p, basis))
        lab = exact.label_eigenstates(es, p)

        def overlap(n):
            k = lab.index_of(n, -1)
            v = exact.analytic_state(n, -1, p, basis)
            return abs(es.vectors[:, k] @ v) ** 2

        assert overlap(0) > 0.995
        assert overlap(8) < overlap(0)

    def test_spectrum_convergence_monotone(self):
        # max |E_exact - E_formula| over n <= 10 improves monotonically with
        # g in {1, 2, 3}; frozen regression envelopes from the oracle run
        # (0.081, 0.036, 0.022): first-order theory is a few-percent theory
        # in this window, see the acceptance notes
        maxerr = {}
        for g in (1.0, 2.0, 3.0):
            p = RabiParams(g=g)
            es = exact.label_eigenstates(
                exact.diagonalize(exact.build_rabi(
                    p, exact.TruncatedBasis(400), enforce_support=False)), p)
            errs = []
            for n in range(11):
                for s in (+1, -1):
                    k = es.index_of(n, s)
                    errs.append(abs(es.energies[k] + g * g - energy(n, s, p)))
            maxerr[g] = max(errs)
        assert maxerr[1.0] > maxerr[2.0] > maxerr[3.0]
        assert maxerr[1.0] < 0.09
        assert maxerr[2.0] < 0.04
        assert maxerr[3.0] < 0.025

    @pytest.mark.parametrize("g,limit", [
        pytest.param(2.0, 0.05, marks=pytest.mark.xfail(
            strict=True, reason="measured splitting error reaches 5.3% at "
            "g = 2 for n in {0, 1}; the 5% target only holds from g ~ 2.5")),
        (2.5, 0.05),
        (3.0, 0.05),
    ])
    def test_degeneracy_splitting(self, g, limit):
        # exact doublet splitting vs omega*D_n, n <= g^2
        p = RabiParams(g=g)
        basis = exact.TruncatedBasis.for_coupling(g)
        es = exact.label_eigenstates(
            exact.diagonalize(exact.build_rabi(p, basis)), p)
        for n in range(int(g * g) + 1):
            split = (es.energies[es.index_of(n, +1)]
                     - es.energies[es.index_of(n, -1)])
            ref = displacement_diagonal(n, g)
            assert abs(split - ref) <= limit * abs(ref)


class TestPositiveFrequency:
    def test_bare_limit_is_annihilation(self):
        p = RabiParams(g=0.0)
        basis = exact.TruncatedBasis(40)
        es = exact.diagonalize(exact.build_rabi(p, basis))
        x = exact.photon_a(basis) + exact.photon_a(basis).T
        jp = exact.positive_frequency_part(x, es)
        assert np.abs(jp - exact.photon_a(basis)).max() < 1e-10

    def test_annihilates_ground_state(self):
        p = RabiParams(g=2.0)
        basis = exact.TruncatedBasis.for_coupling(2.0)
        es = exact.diagonalize(exact.build_rabi(p, basis))
        b = exact.b_operator(p, basis)
        jp = exact.positive_frequency_part(b + b.T, es)
        assert np.linalg.norm(jp @ es.vectors[:, 0]) < 1e-10

    def test_close_to_b_on_low_ladder(self):
        #||(J+ - b)|n,sigma>|| relative to ||b|n,sigma>||: ~16% at n = 1 and
        # growing toward n_c = 4 at g = 2 (frozen from the oracle run); J+
        # and b agree where the perturbative states are good
        p = RabiParams(g=2.0)
        basis = exact.TruncatedBasis.for_coupling(2.0)
        es = exact.label_eigenstates(
            exact.diagonalize(exact.build_rabi(p, basis)), p)
        b = exact.b_operator(p, basis)
        jp = exact.positive_frequency_part(b + b.T, es)
        for n, limit in ((1, 0.20), (2, 0.20), (3, 0.25), (5, 0.30)):
            v = es.vectors[:, es.index_of(n, -1)]
            rel = (np.linalg.norm((jp - b) @ v) / np.linalg.norm(b @ v))
            assert rel < limit

    def test_strictly_energy_lowering(self):
        # in the ascending-energy eigenbasis only elements <m|J|n> with
        # E_m < E_n survive, so the energy-raising block (lower triangle
        # plus diagonal) must vanish identically
        p = RabiParams(g=1.5)
        basis = exact.TruncatedBasis.for_coupling(1.5)
        es = exact.diagonalize(exact.build_rabi(p, basis))
        x = exact.photon_a(basis) + exact.photon_a(basis).T
        jp = exact.positive_frequency_part(x, es)
        jt = es.vectors.T @ jp @ es.vectors
        assert np.abs(np.tril(jt, k=0)).max() < 1e-10
