#include "matchedwin/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "matchedwin/math.hpp"

namespace matchedwin {

namespace {

double two_sided_p(double statistic) {
  return 2.0 * (1.0 - normal_cdf(std::fabs(statistic)));
}

void require_untied(const PairCounts& counts, const char* who) {
  if (counts.untied() < 1) {
    throw std::domain_error(std::string(who) + ": all pairs are ties, test undefined");
  }
}

}  // namespace

TestResult z_corrected(const PairCounts& counts) {
  require_untied(counts, "z_corrected");
  const double m = static_cast<double>(counts.untied());
  const double z = static_cast<double>(counts.n_win - counts.n_loss) / std::sqrt(m);
  return TestResult{TestMethod::ZCorrected, z, two_sided_p(z)};
}

TestResult z_pocock(const PairCounts& counts) {
  require_untied(counts, "z_pocock");
  if (counts.n_win == 0 || counts.n_loss == 0) {
    throw std::domain_error("z_pocock: degenerate variance at Q_w of 0 or 1");
  }
  const double m = static_cast<double>(counts.untied());
  const double q = static_cast<double>(counts.n_win) / m;
  const double z = (q - 0.5) / std::sqrt(q * (1.0 - q) / m);
  return TestResult{TestMethod::ZPocock, z, two_sided_p(z)};
}

TestResult exact_p_value(const PairCounts& counts) {
  require_untied(counts, "exact_p_value");
  const long long w = counts.n_win, l = counts.n_loss, m = w + l;
  double p;
  if (w == l) {
    p = 1.0;
  } else if (w < l) {
    p = 2.0 * central_binomial_tail(m, 0, w);
  } else {
    p = 2.0 * central_binomial_tail(m, w, m);
  }
  return TestResult{TestMethod::ExactBinomial, std::nullopt, std::min(p, 1.0)};
}

DesignTarget DesignTarget::raw(double pi_w, double pi_l) {
  if (!(pi_w > 0.0 && pi_w < 1.0 && pi_l > 0.0 && pi_l < 1.0)) {
    throw std::invalid_argument("DesignTarget: pi_w and pi_l must be in (0, 1)");
  }
  if (pi_w + pi_l > 1.0) {
    throw std::invalid_argument("DesignTarget: pi_w + pi_l must not exceed 1");
  }
  if (pi_w == pi_l) {
    throw std::invalid_argument("DesignTarget: no effect (pi_w = pi_l)");
  }
  return DesignTarget(Kind::Raw, pi_w, pi_l);
}

DesignTarget DesignTarget::net_benefit(double d, double pi_wl) {
  if (!(d > -1.0 && d < 1.0) || d == 0.0) {
    throw std::invalid_argument("DesignTarget: net benefit must be in (-1, 1) and nonzero");
  }
  if (!(pi_wl > 0.0 && pi_wl <= 1.0)) {
    throw std::invalid_argument("DesignTarget: pi_wl must be in (0, 1]");
  }
  if (pi_wl < std::fabs(d)) {
    throw std::invalid_argument("DesignTarget: infeasible, pi_wl < |net benefit|");
  }
  const double pi_w = (d + pi_wl) / 2.0;
  DesignTarget t(Kind::NetBenefit, pi_w, pi_w - d);
  return t;
}

DesignTarget DesignTarget::win_ratio(double r, double pi_wl) {
  if (!(r > 0.0)) throw std::invalid_argument("DesignTarget: win ratio must be positive");
  if (r == 1.0) throw std::invalid_argument("DesignTarget: no effect (win ratio 1)");
  if (!(pi_wl > 0.0 && pi_wl <= 1.0)) {
    throw std::invalid_argument("DesignTarget: pi_wl must be in (0, 1]");
  }
  const double pi_l = pi_wl / (1.0 + r);
  return DesignTarget(Kind::WinRatio, r * pi_l, pi_l);
}

double power(long long n, const DesignTarget& target, const Alpha& alpha) {
  if (n < 1) throw std::invalid_argument("power: need at least one pair");
  const double s = target.pi_wl();
  const double diff = std::fabs(target.pi_w() - target.pi_l());
  const double nn = static_cast<double>(n);
  const double sigma0 = std::sqrt(s / nn);
  const double sigma1 = std::sqrt((s - diff * diff) / nn);
  return normal_cdf((diff - alpha.z_half() * sigma0) / sigma1);
}

long long sample_size(const DesignTarget& target, const Alpha& alpha, double target_power) {
  if (!(target_power > alpha.value() && target_power < 1.0)) {
    throw std::invalid_argument("sample_size: power must be in (alpha, 1)");
  }
  const double za = alpha.z_half();
  const double zb = normal_quantile(target_power);
  double n;
  switch (target.kind()) {
    case DesignTarget::Kind::Raw: {
      const double s = target.pi_wl();
      const double d = target.pi_w() - target.pi_l();
      const double t = (za * std::sqrt(s) + zb * std::sqrt(s - d * d)) / d;
      n = t * t;
      break;
    }
    case DesignTarget::Kind::NetBenefit: {
      const double s = target.pi_wl();
      const double d = target.effect_nb();
      const double t = za * std::sqrt(s) + zb * std::sqrt(s - d * d);
      n = t * t / (d * d);
      break;
    }
    case DesignTarget::Kind::WinRatio: {
      const double s = target.pi_wl();
      const double r = target.effect_wr();
      const double rp = r + 1.0, rm = r - 1.0;
      const double t = za * rp + zb * std::sqrt(rp * rp - rm * rm * s);
      n = t * t / (rm * rm * s);
      break;
    }
    default:
      throw std::logic_error("sample_size: unknown target kind");
  }
  return static_cast<long long>(std::ceil(n));
}

}  // namespace matchedwin
