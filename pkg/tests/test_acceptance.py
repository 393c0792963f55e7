"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured numbers (run with ``pytest -s`` to see
them).  Every tolerance is pinned here, not calibrated at runtime.

Three criteria are intentionally red and marked xfail(strict=True); they
encode targets that the underlying physics does not meet, and weakening
them would hide that.  The measured facts, in brief:

* criterion 1 - first-order dressed-ladder energies deviate from exact
  diagonalization by up to 0.080/0.036/0.022 (in units of omega) at
  g = 1/2/3 for n <= 10, because that window crosses the anharmonicity
  onset n_c ~ g^2 = 1/4/9 where the perturbative states reorganize.  The
  1e-2 target is unattainable there; the monotone improvement with g and
  the percent-level accuracy deep inside the harmonic window both hold
  (see test_exact.py).

* criterion 5b - the weak-coupling recursion gives Fano = alpha/(alpha-1)
  exactly; at ten times threshold that is 10/9 = 1.1111, just outside the
  [0.9, 1.1] target (which would need pump >= 11x threshold).

* criteria 7/9b - the Liouvillian's incoherent pump broadens the gain line
  to (r + Gamma)/2 = 5.5 Gamma at r = 10*Gamma, a physical effect absent
  from the coarse-grained rate treatment (where injected emitters decay at
  Gamma and the pump never dephases the lasing coherence).  At the
  wall-pinned operating points of the large-g Fock laser this is invisible,
  but the g = 2 desk surrogate is not wall-pinned, so P(n) differs between
  the methods (TV ~ 0.28, Fano 0.52) and reacts to lam = 0.1 (TV ~ 0.27).
  The Liouvillian itself is validated to TV < 0.05 against an independent
  pump-broadened birth-death recursion (test_liouvillian.py), and the
  Fano-increase half of 9b holds.
"""

import math
import time
import warnings

import numpy as np
import pytest

from conftest import brute_force_displacement
from focklaser.distribution import PhotonDistribution, find_modes, tv_distance
from focklaser.errors import ScanLimitError
from focklaser.params import GainParams, MultiLevelGain, RabiParams
from focklaser import exact, laser_direct, laser_rate, liouvillian
from focklaser.emission import emission_probability, survival_probability
from focklaser.laguerre import (displacement_diagonal_signlog,
                                displacement_diagonals)
from focklaser.spectrum import critical_photon_number, energy

HEADLINE = GainParams(epsilon=1e-5, gamma=1e-3, r=1e-2, kappa=1e-8)


def report(criterion, ok, detail, t0=None):
    status = "PASS" if ok else "FAIL"
    stamp = f" [{time.perf_counter() - t0:.1f}s]" if t0 is not None else ""
    print(f"[criterion {criterion}] {status} - {detail}{stamp}")


@pytest.mark.xfail(strict=True, reason=(
    "first-order energies carry 2-8% residuals over n <= 10 at g in {1,2,3} "
    "(window crosses n_c ~ g^2); the 1% absolute target cannot be met"))
def test_criterion_01_spectrum_fidelity():
    t0 = time.perf_counter()
    maxerr = {}
    for g in (1.0, 2.0, 3.0):
        p = RabiParams(g=g)
        basis = exact.TruncatedBasis(400)
        es = exact.diagonalize(exact.build_rabi(p, basis))
        exact_levels = np.sort(es.energies)[:22] + g * g
        analytic = np.sort([energy(n, s, p)
                            for n in range(11) for s in (+1, -1)])
        maxerr[g] = float(np.abs(exact_levels - analytic).max())
    monotone = maxerr[1.0] > maxerr[2.0] > maxerr[3.0]
    elapsed = time.perf_counter() - t0
    ok = all(e < 1e-2 for e in maxerr.values()) and monotone and elapsed < 30
    report(1, ok, f"max|dE| = {maxerr[1.0]:.3f}/{maxerr[2.0]:.3f}/"
                  f"{maxerr[3.0]:.3f} omega at g=1/2/3 (target < 0.01), "
                  f"monotone improvement: {monotone}", t0)
    assert elapsed < 30
    assert monotone
    assert all(e < 1e-2 for e in maxerr.values())


def test_criterion_02_displacement_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for g in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        oracle = np.diag(brute_force_displacement(2 * g, 400))[:51]
        worst = max(worst, float(np.abs(displacement_diagonals(50, g)
                                        - oracle).max()))
    d18 = displacement_diagonals(1000, 18.0)
    finite = bool(np.all(np.isfinite(d18)))
    # zeros may appear only when the true value is below 1e-300
    zeros_ok = all(displacement_diagonal_signlog(n, 18.0).log < math.log(1e-300)
                   for n in np.nonzero(d18 == 0.0)[0])
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and finite and zeros_ok and elapsed < 10
    report(2, ok, f"max |D_n - oracle| = {worst:.2e} (target < 1e-8); "
                  f"g=18, n<=1000 finite: {finite}, underflow honest: {zeros_ok}",
           t0)
    assert worst < 1e-8
    assert finite and zeros_ok
    assert elapsed < 10


def test_criterion_03_threshold_location():
    t0 = time.perf_counter()
    gp = GainParams(epsilon=1e-5, gamma=1e-3, r=1.0, kappa=2e-7)
    r_th = laser_rate.threshold_pump(gp)
    sweep = laser_rate.pump_sweep(RabiParams(g=0.0), gp,
                                  np.logspace(-5, -1, 40))
    knee = laser_rate.threshold_knee(sweep)
    ratio = knee / r_th
    elapsed = time.perf_counter() - t0
    ok = 0.5 < ratio < 2.0 and elapsed < 10
    report(3, ok, f"knee at {ratio:.3f} x r_th (target within factor 2)", t0)
    assert 0.5 < ratio < 2.0
    assert elapsed < 10


def test_criterion_04_fock_laser_headline():
    t0 = time.perf_counter()
    d = laser_rate.steady_state(RabiParams(g=10.0), HEADLINE)
    elapsed = time.perf_counter() - t0
    ok = 90 <= d.mean <= 110 and d.std <= 2.0 and elapsed < 5
    report(4, ok, f"mean = {d.mean:.2f} (target [90, 110]), "
                  f"std = {d.std:.3f} (target <= 2)", t0)
    assert 90 <= d.mean <= 110
    assert d.std <= 2.0
    assert elapsed < 5


def test_criterion_05a_scully_lamb_thermal():
    t0 = time.perf_counter()
    # below threshold the ratio rho_{n+1}/rho_n is the constant alpha
    gp = GainParams(epsilon=1e-8, gamma=1e-1, r=0.0, kappa=1e-8)
    gp = gp.replace(r=0.5 * laser_rate.threshold_pump(gp))
    d = laser_rate.steady_state(RabiParams(g=0.0), gp, n_max=100)
    ratios = d.probs[1:41] / d.probs[:40]
    spread = float(np.abs(ratios - 0.5).max())
    elapsed = time.perf_counter() - t0
    ok = spread < 1e-6 and elapsed < 5
    report("5a", ok, f"sub-threshold ratio spread = {spread:.2e} "
                     f"(target < 1e-6)", t0)
    assert spread < 1e-6
    assert elapsed < 5


@pytest.mark.xfail(strict=True, reason=(
    "exact weak-coupling statistics give Fano = alpha/(alpha-1) = 1.1111 at "
    "alpha = 10, outside [0.9, 1.1]; the bracket is reached from 11x pump"))
def test_criterion_05b_scully_lamb_fano():
    t0 = time.perf_counter()
    gp = GainParams(epsilon=1e-5, gamma=1e-3, r=0.0, kappa=2e-7)
    gp10 = gp.replace(r=10.0 * laser_rate.threshold_pump(gp))
    d = laser_rate.steady_state(RabiParams(g=0.0), gp10)
    elapsed = time.perf_counter() - t0
    ok = 0.9 <= d.fano <= 1.1 and elapsed < 5
    report("5b", ok, f"Fano = {d.fano:.4f} at 10x threshold "
                     f"(target [0.9, 1.1]; exact law alpha/(alpha-1) = 1.1111)",
           t0)
    assert elapsed < 5
    assert 0.9 <= d.fano <= 1.1


def test_criterion_06_method_equivalence_direct():
    t0 = time.perf_counter()
    gp = GainParams(epsilon=1e-5, gamma=0.0, r=0.0, kappa=1e-8)
    worst = 0.0
    for g in (1.0, 5.0, 10.0):
        for r in (2e-4, 5e-4, 9e-4):
            mlg = MultiLevelGain.symmetric(r, 1e-3)
            p = RabiParams(g=g)
            d_direct = laser_direct.steady_state_direct(p, gp, mlg)
            d_rate = laser_rate.steady_state(
                p, gp.replace(r=mlg.r_a, gamma=mlg.Gamma))
            worst = max(worst, tv_distance(d_direct, d_rate))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 10
    report(6, ok, f"max TV(direct, rate at r_a) = {worst:.2e} over 3x3 grid "
                  f"(target < 1e-10)", t0)
    assert worst < 1e-10
    assert elapsed < 10


def _desk_liouvillian(lam=0.0, r=1e-2, **kw):
    p = RabiParams(g=2.0, lam=lam)
    gp = GainParams(epsilon=1e-5, gamma=1e-3, r=r, kappa=1e-8)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return liouvillian.build_model(p, gp, n_fock=30, **kw)


@pytest.mark.xfail(strict=True, reason=(
    "incoherent-pump line broadening ((r+Gamma)/2 = 5.5 Gamma) suppresses the "
    "Liouvillian gain relative to the rate model; the g = 2 surrogate is not "
    "wall-pinned, so Fano = 0.52 and TV = 0.28 against the targets 0.5/0.1"))
def test_criterion_07_method_equivalence_liouvillian():
    t0 = time.perf_counter()
    res = liouvillian.steady_state(_desk_liouvillian())
    d = res.distribution
    d_rate = laser_rate.steady_state(RabiParams(g=2.0), HEADLINE)
    tv = tv_distance(d, d_rate)
    elapsed = time.perf_counter() - t0
    ok = d.fano < 0.5 and tv < 0.1 and elapsed < 600
    report(7, ok, f"Fano = {d.fano:.3f} (target < 0.5), "
                  f"TV(liouvillian, rate) = {tv:.3f} (target < 0.1)", t0)
    assert elapsed < 600
    assert d.fano < 0.5
    assert tv < 0.1


def test_criterion_08_positive_frequency_hygiene():
    t0 = time.perf_counter()
    model = _desk_liouvillian(r=0.0)
    res = liouvillian.steady_state(model)
    excited = liouvillian.excited_population(model, res)
    elapsed = time.perf_counter() - t0
    ok = excited < 1e-6 and elapsed < 300
    report(8, ok, f"excited population at r = 0: {excited:.2e} "
                  f"(target < 1e-6)", t0)
    assert excited < 1e-6
    assert elapsed < 300


def test_criterion_09a_operator_insensitivity():
    t0 = time.perf_counter()
    dists = []
    for interaction in ("a", "b"):
        for jump in ("a", "b"):
            model = _desk_liouvillian(interaction=interaction, jump=jump)
            dists.append(liouvillian.steady_state(model).distribution)
    worst = max(tv_distance(dists[i], dists[j])
                for i in range(4) for j in range(i + 1, 4))
    elapsed = time.perf_counter() - t0
    ok = worst < 0.05 and elapsed < 1500
    report("9a", ok, f"max pairwise TV over interaction x jump = {worst:.3f} "
                     f"(target < 0.05)", t0)
    assert worst < 0.05
    assert elapsed < 1500


@pytest.mark.xfail(strict=True, reason=(
    "lam = 0.1 softens the anharmonic wall (splittings lose the Laguerre "
    "sign alternation), shifting the non-pinned g = 2 surrogate by TV ~ 0.27; "
    "the noise-increase half of the criterion holds"))
def test_criterion_09b_lambda_robustness():
    t0 = time.perf_counter()
    d0 = liouvillian.steady_state(_desk_liouvillian(lam=0.0)).distribution
    d1 = liouvillian.steady_state(_desk_liouvillian(lam=0.1)).distribution
    tv = tv_distance(d0, d1)
    elapsed = time.perf_counter() - t0
    fano_ok = d1.fano >= d0.fano
    ok = tv < 0.1 and fano_ok and elapsed < 300
    report("9b", ok, f"TV(lam=0.1, lam=0) = {tv:.3f} (target < 0.1); "
                     f"Fano {d0.fano:.3f} -> {d1.fano:.3f} "
                     f"(must not decrease: {fano_ok})", t0)
    assert elapsed < 300
    assert fano_ok
    assert tv < 0.1


def test_criterion_10_regime_existence():
    t0 = time.perf_counter()
    # (i) near-uniform state, sharply cut off at n_c, near threshold
    p10 = RabiParams(g=10.0)
    nc = critical_photon_number(p10)
    gp_u = GainParams(epsilon=1e-5, gamma=1e-3, r=0.0, kappa=1e-8)
    gp_u = gp_u.replace(r=laser_rate.threshold_pump(gp_u))
    d_u = laser_rate.steady_state(p10, gp_u)
    band = d_u.probs[2: nc - 5]
    flatness = float(band.max() / band.min())
    cutoff = float(d_u.probs[nc + 5] / d_u.probs[nc - 5])
    uniform_ok = flatness < 10 and cutoff < 1e-3
    uniform_cls = laser_rate.classify_distribution(d_u, nc)

    # (ii) bimodal tunneling state at large Gamma and pump
    gam = 0.1
    eps = gam / 30
    gp_b = GainParams(epsilon=eps, gamma=gam, kappa=1e-8,
                      r=1.5 * 1e-8 * gam ** 2 / (2 * eps ** 2))
    d_b = laser_rate.steady_state(RabiParams(g=5.0), gp_b)
    modes = find_modes(d_b.probs)
    bimodal_ok = len(modes) >= 2
    bimodal_cls = laser_rate.classify_distribution(
        d_b, critical_photon_number(RabiParams(g=5.0)))

    elapsed = time.perf_counter() - t0
    ok = (uniform_ok and uniform_cls == "uniform-cutoff"
          and bimodal_ok and bimodal_cls == "bimodal-tunneling"
          and elapsed < 60)
    report(10, ok, f"uniform: flatness {flatness:.1f} (< 10), cutoff "
                   f"{cutoff:.1e} (< 1e-3), class '{uniform_cls}'; "
                   f"bimodal: modes at {modes}, class '{bimodal_cls}'", t0)
    assert uniform_ok and uniform_cls == "uniform-cutoff"
    assert bimodal_ok and bimodal_cls == "bimodal-tunneling"
    assert elapsed < 60


class TestCriterion11Invariants:
    """The named invariant families, each over >= 100 randomized valid
    parameter sets (seeded; runtime budget 2 minutes for the whole class)."""

    N_CASES = 100

    def test_detailed_balance(self, rng):
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(self.N_CASES):
            g = float(rng.uniform(0, 8))
            gam = float(rng.uniform(1e-4, 1e-2))
            eps = gam / float(rng.uniform(5, 40))
            kap = 10.0 ** rng.uniform(-9, -6)
            alpha = float(rng.uniform(0.2, 20))
            gp = GainParams(epsilon=eps, gamma=gam, kappa=kap,
                            r=alpha * kap * gam ** 2 / (2 * eps ** 2))
            p = RabiParams(g=g)
            d = laser_rate.steady_state(p, gp)
            curves = laser_rate.gain_loss(p, gp, d.n_max)
            resid = np.abs(curves.gain * curves.n * d.probs[:-1]
                           - curves.loss * d.probs[1:]).max()
            worst = max(worst, resid / d.probs.max())
        report("11 detailed-balance", worst < 1e-12,
               f"max residual = {worst:.2e} (target < 1e-12)", t0)
        assert worst < 1e-12

    def test_normalization_and_positivity(self, rng):
        t0 = time.perf_counter()
        worst_norm, worst_neg = 0.0, 0.0
        for _ in range(self.N_CASES):
            g = float(rng.uniform(0, 10))
            gam = float(rng.uniform(1e-4, 1e-2))
            eps = gam / float(rng.uniform(5, 40))
            gp = GainParams(epsilon=eps, gamma=gam, kappa=1e-8,
                            r=float(rng.uniform(0.3, 30))
                            * 1e-8 * gam ** 2 / (2 * eps ** 2))
            d = laser_rate.steady_state(RabiParams(g=g), gp)
            worst_norm = max(worst_norm, abs(float(d.probs.sum()) - 1.0))
            worst_neg = max(worst_neg, float(-d.probs.min()))
        ok = worst_norm < 1e-12 and worst_neg <= 0.0
        report("11 normalization/positivity", ok,
               f"|sum-1| <= {worst_norm:.1e}, min prob >= {-worst_neg:.1e}", t0)
        assert ok

    def test_emission_completeness(self, rng):
        t0 = time.perf_counter()
        for _ in range(self.N_CASES + 50):
            p = RabiParams(g=float(rng.uniform(0, 8)),
                           lam=float(rng.choice([0.0, rng.uniform(0, 0.3)])))
            gp = GainParams(epsilon=float(rng.uniform(1e-6, 5e-3)),
                            gamma=1e-3, r=0.0, kappa=1e-8,
                            delta=float(rng.uniform(-0.1, 0.1)))
            n = int(rng.integers(0, 150))
            t = float(rng.uniform(0, 1e5))
            pe = emission_probability(n, t, p, gp)
            assert 0.0 <= pe <= 1.0
            assert pe + survival_probability(n, t, p, gp) == 1.0
        report("11 emission completeness", True,
               f"P + P_survive = 1 over {self.N_CASES + 50} cases", t0)

    def test_branch_energy_symmetry(self, rng):
        t0 = time.perf_counter()
        for _ in range(self.N_CASES + 50):
            p = RabiParams(g=float(rng.uniform(0, 12)),
                           lam=float(rng.choice([0.0, rng.uniform(0, 0.5)])))
            n = int(rng.integers(0, 120))
            assert energy(n, +1, p) + energy(n, -1, p) == 2.0 * n * p.omega
        report("11 branch symmetry", True,
               f"E(n,+) + E(n,-) = 2n omega exactly over "
               f"{self.N_CASES + 50} cases", t0)

    def test_commutator(self, rng):
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(self.N_CASES):
            g = float(rng.uniform(0.3, 3.0))
            basis = exact.TruncatedBasis.for_coupling(g)
            b = exact.b_operator(RabiParams(g=g), basis)
            comm = b @ b.T - b.T @ b
            nf = basis.n_fock
            keep = nf - nf // 10
            idx = np.concatenate([np.arange(keep), nf + np.arange(keep)])
            dev = np.abs((comm - np.eye(basis.dim))[np.ix_(idx, idx)]).max()
            worst = max(worst, float(dev))
        report("11 commutator", worst < 1e-8,
               f"max |[b,b'] - 1| = {worst:.2e} (target < 1e-8, "
               "top 10% of Fock levels excluded)", t0)
        assert worst < 1e-8
