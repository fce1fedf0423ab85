#include "matchedwin/math.hpp"

#include <cmath>
#include <stdexcept>

namespace matchedwin {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Acklam's rational approximation, ~1.15e-9 relative error before refinement.
double quantile_seed(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  }
  double x = quantile_seed(p);
  // two Halley steps against the CDF
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double binomial_coefficient(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("binomial_coefficient: need 0 <= k <= n");
  }
  if (k > n - k) k = n - k;
  if (k == 0) return 1.0;
  if (n <= 66) {  // C(66,33) still fits unsigned 64-bit; intermediates use 128-bit
    unsigned __int128 c = 1;
    for (long long i = 1; i <= k; ++i) {
      c = c * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    }
    return static_cast<double>(c);
  }
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                  std::lgamma(static_cast<double>(k) + 1.0) -
                  std::lgamma(static_cast<double>(n - k) + 1.0));
}

double central_binomial_tail(long long m, long long lo, long long hi) {
  if (m < 0 || lo < 0 || hi > m) {
    throw std::invalid_argument("central_binomial_tail: invalid range");
  }
  if (lo > hi) return 0.0;
  double sum = 0.0;
  if (m <= 64) {
    unsigned __int128 c = 1;  // C(m, 0)
    long long k = 0;
    for (; k < lo; ++k) c = c * static_cast<unsigned __int128>(m - k) / static_cast<unsigned __int128>(k + 1);
    for (; k <= hi; ++k) {
      sum += std::ldexp(static_cast<double>(static_cast<unsigned long long>(c)), static_cast<int>(-m));
      if (k < hi) c = c * static_cast<unsigned __int128>(m - k) / static_cast<unsigned __int128>(k + 1);
    }
    return sum;
  }
  const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
  const double log2m = static_cast<double>(m) * std::log(2.0);
  for (long long k = lo; k <= hi; ++k) {
    sum += std::exp(lgm - std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(m - k) + 1.0) - log2m);
  }
  return sum;
}

}  // namespace matchedwin
