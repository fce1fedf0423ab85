#include "matchedwin/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "matchedwin/math.hpp"

namespace matchedwin {

namespace {

struct RawLimits {
  double lower;
  double upper;
};

// Unclipped single-proportion limits shared by the public intervals and the
// MOVER constructions.
RawLimits raw_limits(double p, double n, double z, BaseMethod method) {
  const double z2 = z * z;
  switch (method) {
    case BaseMethod::Wilson: {
      const double nt = n + z2;
      const double center = (n * p + 0.5 * z2) / nt;
      const double half = (0.5 / nt) * z * std::sqrt(z2 + 4.0 * n * p * (1.0 - p));
      return {center - half, center + half};
    }
    case BaseMethod::AgrestiCoull: {
      const double nt = n + z2;
      const double center = (n * p + 0.5 * z2) / nt;
      const double half = z * std::sqrt(center * (1.0 - center) / nt);
      return {center - half, center + half};
    }
    case BaseMethod::Wald: {
      const double half = z * std::sqrt(p * (1.0 - p) / n);
      return {p - half, p + half};
    }
  }
  throw std::logic_error("raw_limits: unknown method");
}

RawLimits mover_limits(double p, double n, double z, BaseMethod method) {
  RawLimits lim = raw_limits(p, n, z, method);
  if (method != BaseMethod::Wald) {  // Wald limits stay raw so the MOVER collapse is exact
    lim.lower = std::max(lim.lower, 0.0);
    lim.upper = std::min(lim.upper, 1.0);
  }
  return lim;
}

void require_nonempty(const PairCounts& counts, const char* who) {
  if (counts.total() < 1) throw std::invalid_argument(std::string(who) + ": empty data");
}

SingleProportionInterval clipped_interval(double p, long long n, const Alpha& alpha,
                                          BaseMethod method) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("interval: p must be in [0, 1]");
  if (n < 1) throw std::invalid_argument("interval: n must be at least 1");
  RawLimits lim = raw_limits(p, static_cast<double>(n), alpha.z_half(), method);
  return SingleProportionInterval{std::clamp(lim.lower, 0.0, 1.0),
                                  std::clamp(lim.upper, 0.0, 1.0), method};
}

}  // namespace

SingleProportionInterval wilson_interval(double p, long long n, const Alpha& alpha) {
  return clipped_interval(p, n, alpha, BaseMethod::Wilson);
}

SingleProportionInterval agresti_coull_interval(double p, long long n, const Alpha& alpha) {
  return clipped_interval(p, n, alpha, BaseMethod::AgrestiCoull);
}

double paired_correlation(const Proportions& p) {
  const double denom2 = p.p_w * (1.0 - p.p_w) * p.p_l * (1.0 - p.p_l);
  if (denom2 <= 0.0) return 0.0;
  return -p.p_w * p.p_l / std::sqrt(denom2);
}

ConfidenceSet nb_wald(const PairCounts& counts, const Alpha& alpha) {
  require_nonempty(counts, "nb_wald");
  const Proportions p = Proportions::of(counts);
  const double n = static_cast<double>(counts.total());
  const double d = p.p_w - p.p_l;
  const double half = alpha.z_half() * std::sqrt((p.p_w + p.p_l - d * d) / n);
  return ConfidenceSet::bounded(d - half, d + half);
}

ConfidenceSet nb_mover(const PairCounts& counts, const Alpha& alpha, BaseMethod base) {
  require_nonempty(counts, "nb_mover");
  const Proportions p = Proportions::of(counts);
  const double n = static_cast<double>(counts.total());
  const double z = alpha.z_half();
  const RawLimits w = mover_limits(p.p_w, n, z, base);
  const RawLimits l = mover_limits(p.p_l, n, z, base);
  const double rho = paired_correlation(p);
  const double d = p.p_w - p.p_l;
  const double dl = d - std::sqrt((p.p_w - w.lower) * (p.p_w - w.lower) +
                                  (l.upper - p.p_l) * (l.upper - p.p_l) -
                                  2.0 * rho * (p.p_w - w.lower) * (l.upper - p.p_l));
  const double du = d + std::sqrt((w.upper - p.p_w) * (w.upper - p.p_w) +
                                  (p.p_l - l.lower) * (p.p_l - l.lower) -
                                  2.0 * rho * (w.upper - p.p_w) * (p.p_l - l.lower));
  return ConfidenceSet::bounded(dl, du);
}

ConfidenceSet wr_pocock(const PairCounts& counts, const Alpha& alpha) {
  if (counts.untied() < 1) throw std::domain_error("wr_pocock: all pairs are ties");
  const double m = static_cast<double>(counts.untied());
  const double q = static_cast<double>(counts.n_win) / m;
  const double half = alpha.z_half() * std::sqrt(q * (1.0 - q) / m);
  const double ql = std::max(q - half, 0.0);
  const double qu = q + half;
  const double lower = ql / (1.0 - ql);
  if (qu >= 1.0) return ConfidenceSet::upper_unbounded(lower);
  return ConfidenceSet::bounded(lower, qu / (1.0 - qu));
}

ConfidenceSet wr_wald(const PairCounts& counts, const Alpha& alpha) {
  if (counts.n_win < 1 || counts.n_loss < 1) {
    throw std::domain_error("wr_wald: needs at least one win and one loss");
  }
  const Proportions p = Proportions::of(counts);
  const double n = static_cast<double>(counts.total());
  const double r = estimate_win_ratio(counts);
  const double half =
      alpha.z_half() * std::sqrt(p.p_w * (p.p_w + p.p_l) / (n * p.p_l * p.p_l * p.p_l));
  return ConfidenceSet::bounded(r - half, r + half);
}

ConfidenceSet wr_wald_log(const PairCounts& counts, const Alpha& alpha) {
  if (counts.n_win < 1 || counts.n_loss < 1) {
    throw std::domain_error("wr_wald_log: log scale undefined with zero wins or losses");
  }
  const double r = estimate_win_ratio(counts);
  const double sigma = std::sqrt(1.0 / static_cast<double>(counts.n_win) +
                                 1.0 / static_cast<double>(counts.n_loss));
  const double shift = alpha.z_half() * sigma;
  return ConfidenceSet::bounded(r * std::exp(-shift), r * std::exp(shift));
}

FiellerCoefficients fieller_coefficients(const PairCounts& counts, const Alpha& alpha) {
  require_nonempty(counts, "fieller_coefficients");
  const Proportions p = Proportions::of(counts);
  const double n = static_cast<double>(counts.total());
  const double z2 = alpha.z_half() * alpha.z_half();
  FiellerCoefficients f;
  f.a = n * p.p_l * p.p_l - z2 * p.p_l * (1.0 - p.p_l);
  f.b = p.p_w * p.p_l * (n + z2);
  f.c = n * p.p_w * p.p_w - z2 * p.p_w * (1.0 - p.p_w);
  return f;
}

namespace detail {

// Solution set of a r^2 - 2 b r + c <= 0, mapped to a ratio confidence set.
ConfidenceSet fieller_solve(double a, double b, double c) {
  if (a == 0.0) {
    if (b > 0.0) return ConfidenceSet::upper_unbounded(std::max(c / (2.0 * b), 0.0));
    if (b < 0.0) return ConfidenceSet::lower_unbounded(c / (2.0 * b));
    return c <= 0.0 ? ConfidenceSet::whole_line()
                    : ConfidenceSet::undefined("empty solution set");
  }
  const double disc = b * b - a * c;
  if (disc == 0.0) return ConfidenceSet::whole_line();
  if (disc < 0.0) {
    return a > 0.0 ? ConfidenceSet::undefined("empty solution set")
                   : ConfidenceSet::whole_line();
  }
  const double root = std::sqrt(disc);
  if (a > 0.0) {
    return ConfidenceSet::bounded(std::max((b - root) / a, 0.0), (b + root) / a);
  }
  // concave: complement of the root interval, with the roots swapped by the sign of a
  return ConfidenceSet::ray_union((b + root) / a, (b - root) / a);
}

}  // namespace detail

ConfidenceSet wr_fieller(const PairCounts& counts, const Alpha& alpha) {
  const FiellerCoefficients f = fieller_coefficients(counts, alpha);
  return detail::fieller_solve(f.a, f.b, f.c);
}

ConfidenceSet wr_mover(const PairCounts& counts, const Alpha& alpha, BaseMethod base) {
  if (counts.n_loss < 1) throw std::domain_error("wr_mover: needs at least one loss");
  const Proportions p = Proportions::of(counts);
  const double n = static_cast<double>(counts.total());
  const double z = alpha.z_half();
  const RawLimits w = mover_limits(p.p_w, n, z, base);
  const RawLimits l = mover_limits(p.p_l, n, z, base);
  const double rho = paired_correlation(p);

  // Lower endpoint: root of  [Ul(2pl-Ul)] R^2 - 2 [pw pl - rho(pw-Lw)(Ul-pl)] R
  //                          + Lw(2pw-Lw) = 0  not exceeding pw/pl.
  // The closed form stays valid when the leading coefficient turns negative.
  double lower;
  {
    const double a = l.upper * (2.0 * p.p_l - l.upper);
    const double b = p.p_w * p.p_l - rho * (p.p_w - w.lower) * (l.upper - p.p_l);
    const double c = w.lower * (2.0 * p.p_w - w.lower);
    const double disc = std::max(b * b - a * c, 0.0);
    if (a != 0.0) {
      lower = (b - std::sqrt(disc)) / a;
    } else if (b > 0.0) {
      lower = c / (2.0 * b);
    } else {
      lower = 0.0;
    }
    lower = std::max(lower, 0.0);
  }

  // Upper endpoint: the matching larger root; the leading coefficient
  // Ll(2pl-Ll) is nonnegative and vanishes only when Ll = 0, where no finite
  // root at or above pw/pl exists.
  const double a2 = l.lower * (2.0 * p.p_l - l.lower);
  const double b2 = p.p_w * p.p_l - rho * (w.upper - p.p_w) * (p.p_l - l.lower);
  const double c2 = w.upper * (2.0 * p.p_w - w.upper);
  if (a2 <= 0.0) return ConfidenceSet::upper_unbounded(lower);
  const double disc2 = std::max(b2 * b2 - a2 * c2, 0.0);
  const double upper = (b2 + std::sqrt(disc2)) / a2;
  return ConfidenceSet::bounded(lower, upper);
}

}  // namespace matchedwin
