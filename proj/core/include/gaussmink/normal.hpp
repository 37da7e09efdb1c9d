#pragma once

namespace gaussmink {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // (2π)^{-1/2}
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

/// Standard normal CDF Φ(x). Absolute error well below 1e-12 on the whole line.
double std_normal_cdf(double x);

/// Upper tail Q(x) = 1 − Φ(x), computed without cancellation for large x.
double std_normal_sf(double x);

/// Standard normal density (2π)^{-1/2} e^{-x²/2}.
double std_normal_pdf(double x);

/// Φ(b) − Φ(a) for a ≤ b, evaluated on whichever tail avoids cancellation.
/// Infinite endpoints are allowed; returns 0 when b ≤ a.
double normal_interval_mass(double a, double b);

}  // namespace gaussmink
