#include "gaussmink/normal.hpp"

#include <cmath>

namespace gaussmink {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_interval_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a >= 0.0) return std_normal_sf(a) - std_normal_sf(b);
  if (b <= 0.0) return std_normal_cdf(b) - std_normal_cdf(a);
  return 1.0 - std_normal_cdf(a) - std_normal_sf(b);
}

}  // namespace gaussmink
