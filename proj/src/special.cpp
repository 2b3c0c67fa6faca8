#include "codedchain/special.hpp"

#include <cmath>
#include <stdexcept>

namespace codedchain {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Lower tail by power series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_n x^n / (a(a+1)...(a+n)).
double lower_by_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  return sum * std::exp(log_prefix);
}

// Upper tail by modified Lentz continued fraction.
double upper_by_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  return std::exp(log_prefix) * h;
}

}  // namespace

GammaPQ regularized_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("regularized_gamma: a must be positive");
  if (x < 0.0) throw std::domain_error("regularized_gamma: x must be nonnegative");
  if (x == 0.0) return {0.0, 1.0};
  if (x < a + 1.0) {
    double p = lower_by_series(a, x);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return {p, 1.0 - p};
  }
  double q = upper_by_continued_fraction(a, x);
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return {1.0 - q, q};
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730950488);
}

double normal_quantile(double q) {
  if (!(q > 0.0) || !(q < 1.0))
    throw std::domain_error("normal_quantile: q must lie in (0, 1)");

  // Rational approximation (relative error < 1.15e-9 across the domain).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  double x;
  if (q < kLow) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= 1.0 - kLow) {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }

  // One Halley step against the exact CDF.
  const double err = normal_cdf(x) - q;
  const double u = err * 2.5066282746310005024 * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace codedchain
