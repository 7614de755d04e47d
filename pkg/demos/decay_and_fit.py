"""Energy decay under nonlinear damping, and envelope fitting.

Two runs on the reference material (rho = mu = 1, alpha = 2, beta = gamma = 1):

  1. linear damping (m = 1):   the total energy decays exponentially;
  2. cubic damping (m = 3):    the decay slows to a polynomial rate.

Each run records the energy ledger, then the fitter recovers the rate and
checks that the fitted envelope dominates the whole series.
"""
import numpy as np

import piezowave as pw

params = pw.make_params(rho=1.0, alpha=2.0, beta=1.0, gamma=1.0, mu=1.0)
grid = pw.Grid1D(L=1.0, nx=101)
cfg = pw.StepConfig(dt=1e-3)

print("=== linear damping: exponential decay ===")
exps = pw.validate_exponents(1, 1, 2, 2)
st0 = pw.state_from_modes(grid, [0.05], [0.03], [0.0], [0.0])
traj = pw.simulate(st0, params, exps, grid, cfg, t_end=40.0, record_every=40)
t = np.array([r.t for r in traj.records])
etot = np.array([r.Etot for r in traj.records])
print(f"E(0) = {etot[0]:.6g}, E({t[-1]:g}) = {etot[-1]:.6g}")

eta = pw.eta_from_exponents(exps)           # 0 for linear damping
fit = pw.fit_exponential(t, etot)
env = etot[0] * np.exp(1.0 - fit.omega * t)
print(f"fitted rate omega = {fit.omega:.6g} (eta = {eta:g})")
print(f"envelope dominates the series: {bool(np.all(etot <= env * (1 + 1e-9)))}")

print()
print("=== cubic damping: polynomial decay ===")
exps = pw.validate_exponents(3, 3, 3, 3)
st0 = pw.state_from_modes(grid, [0.2], [0.12], [0.0], [0.0])
traj = pw.simulate(st0, params, exps, grid, cfg, t_end=120.0, record_every=120)
t = np.array([r.t for r in traj.records])
etot = np.array([r.Etot for r in traj.records])

eta = pw.eta_from_exponents(exps)           # (m - 1)/2 = 1
fit = pw.select_model(t, etot, eta)
slope = np.polyfit(np.log(t[len(t) // 2:]), np.log(etot[len(t) // 2:]), 1)[0]
print(f"selected model: {fit.model}, omega = {fit.omega:.6g}, eta = {eta:g}")
print(f"late-time log-log slope = {slope:.3f}  (expected near -2/(m-1) = -1)")
