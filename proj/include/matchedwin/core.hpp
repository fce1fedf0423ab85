#pragma once

#include <stdexcept>
#include <string>

namespace matchedwin {

/// Raised for malformed input data (records, files); carries subject/line context
/// in the message.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed configuration documents.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Tally of a matched study: wins, losses and ties from the treated patient's
/// perspective. The sufficient statistic for everything in this library.
struct PairCounts {
  long long n_win = 0;
  long long n_loss = 0;
  long long n_tie = 0;

  PairCounts() = default;
  PairCounts(long long win, long long loss, long long tie);

  long long total() const { return n_win + n_loss + n_tie; }
  long long untied() const { return n_win + n_loss; }
};

/// (p_w, p_l, p_t); must sum to 1 within 1e-12.
struct Proportions {
  double p_w = 0.0;
  double p_l = 0.0;
  double p_t = 0.0;

  Proportions() = default;
  Proportions(double w, double l, double t);

  static Proportions of(const PairCounts& counts);
};

/// Significance level with its cached two-sided normal quantile.
class Alpha {
 public:
  explicit Alpha(double value);

  double value() const { return value_; }
  /// z_{1-alpha/2} (the magnitude of z_{alpha/2}).
  double z_half() const { return z_half_; }

 private:
  double value_;
  double z_half_;
};

/// Closed representation of an interval-estimation result, including the
/// degenerate shapes Fieller's method can produce.
class ConfidenceSet {
 public:
  enum class Kind { Bounded, LowerUnbounded, UpperUnbounded, RayUnion, WholeLine, Undefined };

  static ConfidenceSet bounded(double lower, double upper);
  static ConfidenceSet lower_unbounded(double upper);
  static ConfidenceSet upper_unbounded(double lower);
  /// (-inf, left_upper) U (right_lower, +inf), open rays; left_upper < right_lower.
  static ConfidenceSet ray_union(double left_upper, double right_lower);
  static ConfidenceSet whole_line();
  static ConfidenceSet undefined(std::string reason);

  Kind kind() const { return kind_; }
  bool is_bounded() const { return kind_ == Kind::Bounded; }

  double lower() const;       // Bounded or UpperUnbounded
  double upper() const;       // Bounded or LowerUnbounded
  double left_upper() const;  // RayUnion
  double right_lower() const; // RayUnion

  /// Width of a Bounded set; anything else is a logic error.
  double width() const;

  /// Set membership (rays are open, bounded intervals closed).
  bool contains(double x) const;

  const std::string& reason() const { return reason_; }

 private:
  ConfidenceSet(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::string reason_;
};

/// (n_win - n_loss) / total; the matched net benefit D_w.
double estimate_net_benefit(const PairCounts& counts);

/// n_win / n_loss; 0 when n_win = 0. Undefined (throws std::domain_error) when
/// n_loss = 0 -- every downstream variance divides by p_l, so no value is fabricated.
double estimate_win_ratio(const PairCounts& counts);

/// Q_w = n_win / (n_win + n_loss); satisfies WR = Q_w / (1 - Q_w).
double conditional_win_fraction(const PairCounts& counts);

}  // namespace matchedwin
