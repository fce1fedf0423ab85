#pragma once

#include <optional>

#include "matchedwin/core.hpp"

namespace matchedwin {

enum class TestMethod { ZCorrected, ZPocock, ExactBinomial };

struct TestResult {
  TestMethod method;
  std::optional<double> statistic;  // absent for the exact test
  double p_value = 1.0;
};

/// Z = (N_w - N_l) / sqrt(N_w + N_l), null-variance standardization; two-sided p.
TestResult z_corrected(const PairCounts& counts);

/// Z_P = (Q_w - 1/2) / sqrt(Q_w (1 - Q_w) / (N_w + N_l)); two-sided p.
/// Undefined when Q_w is 0 or 1 (degenerate variance).
TestResult z_pocock(const PairCounts& counts);

/// Doubled conditional binomial tail at Q = 1/2, clamped to 1.
TestResult exact_p_value(const PairCounts& counts);

/// Design effect specification. The three constructors correspond to the three
/// algebraically equivalent sample-size forms; each arm keeps its native
/// parameters and the implied (pi_w, pi_l).
class DesignTarget {
 public:
  enum class Kind { Raw, NetBenefit, WinRatio };

  static DesignTarget raw(double pi_w, double pi_l);
  /// D in (-1,1)\{0}; pi_wl = anticipated untied proportion, pi_wl >= |D|.
  static DesignTarget net_benefit(double d, double pi_wl);
  /// R > 0, R != 1; implied pi_l = pi_wl / (1 + R), pi_w = R pi_l.
  static DesignTarget win_ratio(double r, double pi_wl);

  Kind kind() const { return kind_; }
  double pi_w() const { return pi_w_; }
  double pi_l() const { return pi_l_; }
  double pi_wl() const { return pi_w_ + pi_l_; }
  double effect_nb() const { return pi_w_ - pi_l_; }
  double effect_wr() const { return pi_w_ / pi_l_; }

 private:
  DesignTarget(Kind kind, double w, double l) : kind_(kind), pi_w_(w), pi_l_(l) {}
  Kind kind_;
  double pi_w_;
  double pi_l_;
};

/// Normal-approximation power of the corrected test at n pairs.
double power(long long n, const DesignTarget& target, const Alpha& alpha);

/// Pairs needed for the requested power; evaluates the closed form matching the
/// target's parameterization and returns the ceiling.
long long sample_size(const DesignTarget& target, const Alpha& alpha, double target_power);

}  // namespace matchedwin
