#!/usr/bin/env python3
"""A guided tour of the library: spectrum, blockade, and the three routes
to the laser steady state.  Runs in a few seconds; everything is in units
of the cavity frequency."""

import numpy as np

from focklaser import GainParams, MultiLevelGain, RabiParams, tv_distance
from focklaser import laser_direct, laser_rate
from focklaser.emission import blockade_profile
from focklaser.spectrum import critical_photon_number, excitation_gaps

# --- 1. the dressed ladder and its anharmonic cutoff ----------------------
p = RabiParams(g=10.0)
nc = critical_photon_number(p)
gaps = excitation_gaps(-1, p, nc + 20)
print(f"coupling g = {p.g:g}: excitation energies stay within "
      f"{abs(gaps.gap[:nc // 2] - 1).max():.1e} of omega up to n = {nc // 2},")
print(f"then turn anharmonic at n_c = {nc} (gap deviation "
      f"{abs(gaps.gap[nc] - 1):.3f} omega there)")

# --- 2. many-photon blockade ----------------------------------------------
gp = GainParams(epsilon=1e-5, gamma=1e-3, r=1e-2, kappa=1e-8)
prof = blockade_profile(p, gp, t=0.01 / gp.epsilon, n_max=nc + 30)
peak = int(prof.argmax())
print(f"\nstimulated emission rises linearly to n = {peak}, then collapses "
      f"{prof[peak] / prof[peak + 10]:.0f}-fold within ten levels")

# --- 3. the Fock laser: gain meets loss at the wall ------------------------
dist = laser_rate.steady_state(p, gp)
print(f"\nrate-equation steady state: <n> = {dist.mean:.1f}, "
      f"std = {dist.std:.2f}, Fano = {dist.fano:.4f}")
print("(a coherent state of the same intensity would have Fano = 1)")

# --- 4. cross-check against the five-level direct method -------------------
mlg = MultiLevelGain.symmetric(r=5e-4, gamma=gp.gamma)
d_direct = laser_direct.steady_state_direct(p, gp, mlg)
d_rate = laser_rate.steady_state(p, gp.replace(r=mlg.r_a))
print(f"\ndirect vs rate method at the same effective pump: "
      f"TV distance = {tv_distance(d_direct, d_rate):.2e}")

# --- 5. how the statistics evolve with pump --------------------------------
r_th = laser_rate.threshold_pump(gp)
print(f"\npump sweep (threshold r_th = {r_th:.2e}):")
for factor in (0.3, 1.0, 3.0, 30.0, 300.0):
    d = laser_rate.steady_state(p, gp.replace(r=factor * r_th))
    kind = laser_rate.classify_distribution(d, nc)
    print(f"  r = {factor:5.1f} r_th: <n> = {d.mean:7.2f}, "
          f"Fano = {d.fano:8.3f}  -> {kind}")
