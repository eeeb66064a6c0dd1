"""The inductor bus: shared loop, effective couplings, scaling limits.

Every SQUID couples to one superconducting loop with the same mutual
inductance M.  Flux conservation in the loop turns a local current change
into a response current that every other SQUID feels: a fixed all-to-all
coupling with effective mutual M^2/L_b.  This script solves the exact loop
equations, checks the weak-coupling expansion, and prints the design table.
"""

import numpy as np

import fluxbus as fb

SQUID = fb.SquidParams(150.0, 80.0, 3.0)
BUS4 = fb.BusParams(l_b_nh=2.0, m_ph=2.0, n_qubits=4)

print("=== exact loop currents (4 qubits on the bus) ===")
fluxes = np.array([0.5 + 2e-3, 0.5, 0.5, 0.5])
sol = fb.solve_currents(fluxes, np.full(4, 0.5), SQUID, BUS4)
print(f"squid currents (uA): {np.array2string(sol.squid_currents_ua, precision=6)}")
print(f"bus response (uA):   {sol.bus_current_ua:.3e}")
print(f"flux-quantization residual: {fb.flux_quantization_residual(sol, BUS4):.2e} Phi0")

print("\nAn encoded pair carries equal and opposite currents, so the bus")
print("sees nothing:")
pair = fb.solve_currents([0.5 + 1e-3, 0.5 - 1e-3, 0.5, 0.5], np.full(4, 0.5), SQUID, BUS4)
print(f"bus current for a balanced pair: {pair.bus_current_ua:.3e} uA")

print("\n=== weak-coupling expansion ===")
rng = np.random.default_rng(1)
bus2 = fb.BusParams(l_b_nh=2.0, m_ph=2.0, n_qubits=2)
worst = 0.0
for _ in range(200):
    f = 0.5 + rng.uniform(-1e-3, 1e-3, 2)
    b = np.full(2, 0.5)
    exact = fb.inductive_energy(fb.solve_currents(f, b, SQUID, bus2), SQUID, bus2)
    approx = fb.pairwise_inductive_energy(f, b, SQUID, bus2)
    worst = max(worst, abs(exact - approx) / abs(exact))
corr = BUS4.m_ph**2 / (SQUID.l_ph * BUS4.l_b_ph)
print(f"exact vs pairwise-approximate energy over 200 random offsets:")
print(f"worst relative deviation {worst:.2e}  (second order: (M^2/LL_b)^2 = {corr**2:.2e})")

print("\n=== the design table ===")
tlp = fb.extract_two_level(SQUID)
bus = fb.BusParams(l_b_nh=2.0, m_ph=2.0, n_qubits=1000)
j = fb.coupling_strength(tlp, bus)
print(f"persistent current i_p        {tlp.i_p_ua:8.3f} uA")
print(f"effective mutual M^2/L_b      {fb.effective_mutual(bus):8.3f} fH")
print(f"coupling strength J           {j:8.2f} MHz")
print(f"CPHASE interaction wait       {1.0 / (32.0 * j * 1e-3):8.3f} ns")
print(f"weak-coupling ratio (N=1000)  {fb.weak_coupling_ratio(SQUID, bus):8.4f}")
print(f"geometric bound N_max         {fb.max_qubits(bus):8d}")
print(f"L_b/R residual decay (1 uOhm) {fb.residual_decay_time(2.0, 1.0):8.1f} ms")

print("\nDoubling M at fixed L_b quadruples J:")
bus_2m = fb.BusParams(l_b_nh=2.0, m_ph=4.0, n_qubits=1000)
print(f"J(M=2 pH) = {j:.2f} MHz -> J(M=4 pH) = {fb.coupling_strength(tlp, bus_2m):.2f} MHz")
