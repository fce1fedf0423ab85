#include "matchedwin/core.hpp"

#include <cmath>

#include "matchedwin/math.hpp"

namespace matchedwin {

PairCounts::PairCounts(long long win, long long loss, long long tie)
    : n_win(win), n_loss(loss), n_tie(tie) {
  if (win < 0 || loss < 0 || tie < 0) {
    throw std::invalid_argument("PairCounts: counts must be nonnegative");
  }
}

Proportions::Proportions(double w, double l, double t) : p_w(w), p_l(l), p_t(t) {
  if (!(w >= 0.0 && w <= 1.0 && l >= 0.0 && l <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("Proportions: each component must lie in [0, 1]");
  }
  if (std::fabs(w + l + t - 1.0) > 1e-12) {
    throw std::invalid_argument("Proportions: components must sum to 1");
  }
}

Proportions Proportions::of(const PairCounts& counts) {
  const long long n = counts.total();
  if (n < 1) throw std::invalid_argument("Proportions::of: empty data");
  Proportions p;
  p.p_w = static_cast<double>(counts.n_win) / static_cast<double>(n);
  p.p_l = static_cast<double>(counts.n_loss) / static_cast<double>(n);
  p.p_t = static_cast<double>(counts.n_tie) / static_cast<double>(n);
  return p;
}

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::invalid_argument("Alpha: level must be in (0, 1)");
  }
  z_half_ = normal_quantile(1.0 - value / 2.0);
}

ConfidenceSet ConfidenceSet::bounded(double lower, double upper) {
  if (!(lower <= upper)) {
    throw std::invalid_argument("ConfidenceSet::bounded: lower must not exceed upper");
  }
  return ConfidenceSet(Kind::Bounded, lower, upper);
}

ConfidenceSet ConfidenceSet::lower_unbounded(double upper) {
  return ConfidenceSet(Kind::LowerUnbounded, 0.0, upper);
}

ConfidenceSet ConfidenceSet::upper_unbounded(double lower) {
  return ConfidenceSet(Kind::UpperUnbounded, lower, 0.0);
}

ConfidenceSet ConfidenceSet::ray_union(double left_upper, double right_lower) {
  if (!(left_upper < right_lower)) {
    throw std::invalid_argument("ConfidenceSet::ray_union: rays must be disjoint");
  }
  return ConfidenceSet(Kind::RayUnion, left_upper, right_lower);
}

ConfidenceSet ConfidenceSet::whole_line() { return ConfidenceSet(Kind::WholeLine, 0.0, 0.0); }

ConfidenceSet ConfidenceSet::undefined(std::string reason) {
  ConfidenceSet s(Kind::Undefined, 0.0, 0.0);
  s.reason_ = std::move(reason);
  return s;
}

double ConfidenceSet::lower() const {
  if (kind_ != Kind::Bounded && kind_ != Kind::UpperUnbounded) {
    throw std::logic_error("ConfidenceSet::lower: set has no finite lower bound");
  }
  return a_;
}

double ConfidenceSet::upper() const {
  if (kind_ == Kind::Bounded) return b_;
  if (kind_ == Kind::LowerUnbounded) return b_;
  throw std::logic_error("ConfidenceSet::upper: set has no finite upper bound");
}

double ConfidenceSet::left_upper() const {
  if (kind_ != Kind::RayUnion) throw std::logic_error("ConfidenceSet::left_upper: not a ray union");
  return a_;
}

double ConfidenceSet::right_lower() const {
  if (kind_ != Kind::RayUnion) throw std::logic_error("ConfidenceSet::right_lower: not a ray union");
  return b_;
}

double ConfidenceSet::width() const {
  if (kind_ != Kind::Bounded) {
    throw std::logic_error("ConfidenceSet::width: defined for bounded sets only");
  }
  return b_ - a_;
}

bool ConfidenceSet::contains(double x) const {
  switch (kind_) {
    case Kind::Bounded: return x >= a_ && x <= b_;
    case Kind::LowerUnbounded: return x <= b_;
    case Kind::UpperUnbounded: return x >= a_;
    case Kind::RayUnion: return x < a_ || x > b_;
    case Kind::WholeLine: return true;
    case Kind::Undefined: return false;
  }
  return false;
}

double estimate_net_benefit(const PairCounts& counts) {
  const long long n = counts.total();
  if (n < 1) throw std::invalid_argument("estimate_net_benefit: empty data");
  return static_cast<double>(counts.n_win - counts.n_loss) / static_cast<double>(n);
}

double estimate_win_ratio(const PairCounts& counts) {
  if (counts.n_loss < 1) {
    throw std::domain_error("estimate_win_ratio: undefined with zero losses");
  }
  return static_cast<double>(counts.n_win) / static_cast<double>(counts.n_loss);
}

double conditional_win_fraction(const PairCounts& counts) {
  const long long m = counts.untied();
  if (m < 1) throw std::domain_error("conditional_win_fraction: all pairs are ties");
  return static_cast<double>(counts.n_win) / static_cast<double>(m);
}

}  // namespace matchedwin
