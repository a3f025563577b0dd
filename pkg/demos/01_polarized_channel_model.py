"""Tour of the polarized channel model.

Each transmit antenna has two orthogonal elements behind a phase shifter;
the channel to a single-antenna terminal is a 2x2 complex gain matrix whose
off-diagonal (cross-polar) power is set by the inverse XPD parameter chi.
"""

import numpy as np

from polarsec import (
    RngStream,
    effective_channel,
    gen_polarized_link,
    linear_polarization,
    phase_shift_vector,
    polarforming_vector,
)

# --- polarforming vectors -------------------------------------------------
# theta controls the polarization state: 0 gives +45deg linear, pi/2 circular
for theta in (0.0, np.pi / 2, np.pi):
    f = polarforming_vector(theta)
    print(f"theta = {theta:5.3f}  ->  f = [{f.value[0]:.3f}, {f.value[1]:.3f}]")

# --- one polarized link ---------------------------------------------------
link = gen_polarized_link(chi=0.2, rng=RngStream(master_seed=7, stream_index=0))
print("\n2x2 polarized gain matrix (chi = 0.2):")
print(np.round(link.lam, 4))

# chi = 0 means no depolarization at all: the off-diagonal entries vanish
clean = gen_polarized_link(chi=0.0, rng=RngStream(7, 1))
print("\nwith chi = 0 the cross-polar entries are exactly zero:")
print(np.round(clean.lam, 4))

# --- second-moment structure ----------------------------------------------
# the cross/co power ratio equals chi; check it by Monte Carlo
chi = 0.2
gen = RngStream(123, 0).generator()
co, cross = [], []
for _ in range(20000):
    lam = gen_polarized_link(chi, gen).lam
    co.append(abs(lam[0, 0]) ** 2)
    cross.append(abs(lam[0, 1]) ** 2)
print(f"\nsample cross/co power ratio: {np.mean(cross) / np.mean(co):.4f} (chi = {chi})")

# --- effective channel ----------------------------------------------------
# with the receiver's polarization fixed, the per-antenna phase shifts steer
# how much of each element's signal the receiver actually sees
links = tuple(gen_polarized_link(chi, RngStream(9, k)) for k in range(4))
g = linear_polarization()
for thetas in (np.zeros(4), np.full(4, np.pi / 2), np.linspace(0, np.pi, 4)):
    h = effective_channel(links, g, phase_shift_vector(thetas))
    print(f"psv = {np.round(thetas, 2)}  ->  |h| = {np.round(np.abs(h), 4)}")
