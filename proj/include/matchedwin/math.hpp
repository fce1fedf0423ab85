#pragma once

namespace matchedwin {

/// Standard normal CDF, accurate over the full double range.
double normal_cdf(double x);

/// Standard normal quantile for p in (0,1).
/// Rational approximation refined against normal_cdf; |cdf(quantile(p)) - p| <= 1e-10
/// for p in [1e-8, 1 - 1e-8].
double normal_quantile(double p);

/// C(n, k). Exact integer arithmetic while the result fits; lgamma beyond that.
double binomial_coefficient(long long n, long long k);

/// sum_{k=lo..hi} C(m,k) * 2^-m, terms added in ascending k.
/// Exact coefficient arithmetic for m <= 64.
double central_binomial_tail(long long m, long long lo, long long hi);

}  // namespace matchedwin
