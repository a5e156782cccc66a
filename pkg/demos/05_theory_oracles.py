"""Deterministic quantities used as oracles by the Monte Carlo checks."""

from fracou import theory

theta, H = 1.0, 0.7
print(f"Var(xi_inf)        = {theory.xi_infinity_variance(theta, H):.12f}")
for t in (1.0, 3.0, 10.0, 40.0):
    print(f"t={t:<5g} Var(xi_t) = {theory.xi_variance(theta, H, t):.12f}  "
          f"forward variance = {theory.forward_integral_variance(theta, H, t):.12f}")

# Two quadrature routes agree because time reversal maps one integral to the other.
print("\nCov(B_1, exp(-t) int_0^t exp(s) dB_s) decays like t^(2H-2):")
for t in (2.0, 5.0, 10.0, 20.0, 50.0):
    c = theory.cross_covariance_decay(theta, H, 1.0, t)
    print(f"t={t:<5g} {c:.6f}   scaled by t^(2-2H): {c * t ** (2 - 2 * H):.4f}")

print("\nCorrection term against its bound t^(2H)/2:")
for t in (1.0, 5.0, 20.0):
    print(f"t={t:<5g} {theory.skorohod_correction_term(theta, H, t):.6f} <= {t ** (2 * H) / 2:.6f}")

law = theory.CauchyScaleLaw.for_theta(theta)
print(f"\nlimit law quartiles: {law.quantile(0.25):.3f}, {law.quantile(0.75):.3f}")
