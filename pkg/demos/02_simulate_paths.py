"""Simulating the explosive fractional OU process dX = theta X dt + dB.

The exact scheme builds xi_t = int_0^t exp(-theta s) dB_s from the noise and
sets X_t = exp(theta t) xi_t. The Euler scheme is offered for comparison.
"""

from fracou import ModelParams, sample_fgn, simulate_ou, simulate_xi, theory
from fracou.paths import GridSpec

params = ModelParams(theta=1.0, H=0.7)
grid = GridSpec(horizon=8.0, steps=8000)
noise = sample_fgn(params.H, grid.steps, grid.dt, seed=7)

exact = simulate_ou(params, noise, "exact")
euler = simulate_ou(params, noise, "euler")
xi = simulate_xi(params, noise)

print("t      X exact          X euler          xi_t")
for t in (1, 2, 4, 8):
    i = int(round(t / grid.dt))
    print(f"{t:<5}  {exact.values[i]:>15.6g}  {euler.values[i]:>15.6g}  {xi.values[i]:>10.6f}")

# X grows like exp(theta t) xi_inf: xi settles while X explodes.
print(f"\nVar(xi_inf) = {theory.xi_infinity_variance(1.0, 0.7):.6f}")

# Paths round-trip through the CSV format used by the command line.
text = exact.to_csv()
print("CSV header:", text.splitlines()[0], "| rows:", len(text.splitlines()) - 1)

# Growth beyond theta*T = 700 would overflow double precision and is refused.
try:
    simulate_ou(ModelParams(1.0, 0.7), sample_fgn(0.7, 100, 8.0, seed=1))
except ValueError as exc:
    print("refused:", exc)
print(f"Euler / exact at T: {euler.values[-1] / exact.values[-1]:.4f}")
