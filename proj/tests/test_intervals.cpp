#include <doctest.h>

#include <cmath>
#include <random>

#include "matchedwin/intervals.hpp"

using namespace matchedwin;

namespace {

const Alpha kAlpha(0.05);

void check_bounded(const ConfidenceSet& set, double lower, double upper, double tol = 5e-4) {
  REQUIRE(set.kind() == ConfidenceSet::Kind::Bounded);
  CHECK(std::fabs(set.lower() - lower) <= tol);
  CHECK(std::fabs(set.upper() - upper) <= tol);
}

// Score-test inversion by bisection: the Wilson endpoint solves
// (p - x)^2 = z^2 x (1 - x) / n.
double wilson_endpoint_oracle(double p, double n, double z, bool upper) {
  auto g = [&](double x) { return (p - x) * (p - x) - z * z * x * (1.0 - x) / n; };
  double lo = upper ? p : 0.0;
  double hi = upper ? 1.0 : p;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool sign_at_mid = g(mid) > 0.0;
    if (upper) {
      (sign_at_mid ? hi : lo) = mid;
    } else {
      (sign_at_mid ? lo : hi) = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Wilson single-proportion interval") {
  const SingleProportionInterval mid = wilson_interval(0.5, 100, kAlpha);
  CHECK(std::fabs(mid.lower - 0.4038) < 5e-4);
  CHECK(std::fabs(mid.upper - 0.5962) < 5e-4);

  const double z = kAlpha.z_half();
  const SingleProportionInterval zero = wilson_interval(0.0, 25, kAlpha);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == doctest::Approx(z * z / (25.0 + z * z)).epsilon(1e-12));
  const SingleProportionInterval one = wilson_interval(1.0, 25, kAlpha);
  CHECK(one.upper == 1.0);
  CHECK(one.lower == doctest::Approx(1.0 - z * z / (25.0 + z * z)).epsilon(1e-12));

  // score-inversion oracle across a grid
  for (double p : {0.05, 0.12, 0.33, 0.5, 0.77, 0.95}) {
    for (long long n : {13LL, 84LL, 400LL}) {
      const SingleProportionInterval w = wilson_interval(p, n, kAlpha);
      CHECK(std::fabs(w.lower - wilson_endpoint_oracle(p, double(n), z, false)) < 1e-6);
      CHECK(std::fabs(w.upper - wilson_endpoint_oracle(p, double(n), z, true)) < 1e-6);
    }
  }
  CHECK_THROWS_AS(wilson_interval(1.2, 10, kAlpha), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(0.5, 0, kAlpha), std::invalid_argument);
}

TEST_CASE("Agresti-Coull single-proportion interval") {
  const SingleProportionInterval mid = agresti_coull_interval(0.5, 100, kAlpha);
  CHECK(mid.lower + mid.upper == doctest::Approx(1.0).epsilon(1e-12));

  // the UDCA p_w: center and half width by direct evaluation
  const double z = kAlpha.z_half();
  const double nt = 84.0 + z * z;
  const double center = (84.0 * (10.0 / 84.0) + 0.5 * z * z) / nt;
  const SingleProportionInterval w = agresti_coull_interval(10.0 / 84.0, 84, kAlpha);
  CHECK(w.lower == doctest::Approx(center - z * std::sqrt(center * (1 - center) / nt)).epsilon(1e-12));
  CHECK(w.upper == doctest::Approx(center + z * std::sqrt(center * (1 - center) / nt)).epsilon(1e-12));

  CHECK(agresti_coull_interval(0.0, 30, kAlpha).lower == 0.0);  // clipped
  CHECK(agresti_coull_interval(1.0, 30, kAlpha).upper == 1.0);
}

TEST_CASE("paired correlation estimate") {
  CHECK(paired_correlation(Proportions(0.5, 0.5, 0.0)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(paired_correlation(Proportions(0.0, 0.4, 0.6)) == 0.0);
  CHECK(paired_correlation(Proportions(1.0, 0.0, 0.0)) == 0.0);
  const Proportions p(0.2, 0.1, 0.7);
  const double expected = -0.02 / std::sqrt(0.2 * 0.8 * 0.1 * 0.9);
  CHECK(paired_correlation(p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(paired_correlation(p) <= 0.0);
}

TEST_CASE("net benefit intervals on the trial data") {
  check_bounded(nb_wald(PairCounts(249, 151, 964), kAlpha), 0.04336, 0.10034);
  check_bounded(nb_wald(PairCounts(10, 3, 71), kAlpha), 0.00111, 0.16556);
  check_bounded(nb_mover(PairCounts(249, 151, 964), kAlpha, BaseMethod::AgrestiCoull), 0.04317, 0.10037);
  check_bounded(nb_mover(PairCounts(249, 151, 964), kAlpha, BaseMethod::Wilson), 0.04331, 0.10027);
  check_bounded(nb_mover(PairCounts(10, 3, 71), kAlpha, BaseMethod::AgrestiCoull), -0.00744, 0.17774);
  check_bounded(nb_mover(PairCounts(10, 3, 71), kAlpha, BaseMethod::Wilson), -0.00265, 0.17448);

  const ConfidenceSet sym = nb_wald(PairCounts(6, 6, 8), kAlpha);
  CHECK(sym.lower() == doctest::Approx(-sym.upper()).epsilon(1e-12));
}

TEST_CASE("win ratio intervals on the trial data") {
  check_bounded(wr_pocock(PairCounts(249, 151, 964), kAlpha), 1.35291, 2.03036);
  check_bounded(wr_pocock(PairCounts(10, 3, 71), kAlpha), 1.17486, 574.1965, 5e-3);
  check_bounded(wr_pocock(PairCounts(14, 6, 64), kAlpha), 0.99666, 9.08436);

  check_bounded(wr_wald(PairCounts(249, 151, 964), kAlpha), 1.31564, 1.98237);
  check_bounded(wr_wald(PairCounts(10, 3, 71), kAlpha), -0.96734, 7.63401);
  check_bounded(wr_wald(PairCounts(421, 324, 527), kAlpha), 1.11123, 1.48760);
  CHECK(wr_wald(PairCounts(10, 3, 71), kAlpha).lower() < 0.0);  // reported as-is

  check_bounded(wr_wald_log(PairCounts(249, 151, 964), kAlpha), 1.34718, 2.01845);
  check_bounded(wr_wald_log(PairCounts(10, 3, 71), kAlpha), 0.91735, 12.11183);
  check_bounded(wr_wald_log(PairCounts(36, 16, 32), kAlpha), 1.24859, 4.05445);

  check_bounded(wr_mover(PairCounts(249, 151, 964), kAlpha, BaseMethod::AgrestiCoull), 1.34720, 2.01875);
  check_bounded(wr_mover(PairCounts(10, 3, 71), kAlpha, BaseMethod::Wilson), 0.96814, 11.33185);
  check_bounded(wr_mover(PairCounts(10, 3, 71), kAlpha, BaseMethod::AgrestiCoull), 0.91737, 16.82452);
  check_bounded(wr_mover(PairCounts(14, 6, 64), kAlpha, BaseMethod::Wilson), 0.92100, 5.91000);
  check_bounded(wr_mover(PairCounts(14, 6, 64), kAlpha, BaseMethod::AgrestiCoull), 0.89855, 6.41418);

  CHECK_THROWS_AS(wr_pocock(PairCounts(0, 0, 7), kAlpha), std::domain_error);
  CHECK_THROWS_AS(wr_wald(PairCounts(0, 5, 2), kAlpha), std::domain_error);
  CHECK_THROWS_AS(wr_wald_log(PairCounts(5, 0, 2), kAlpha), std::domain_error);
  CHECK_THROWS_AS(wr_mover(PairCounts(5, 0, 2), kAlpha, BaseMethod::Wilson), std::domain_error);
}

TEST_CASE("Pocock transform hits the boundary gracefully") {
  // one win, one loss: the Q interval spills past both ends
  const ConfidenceSet set = wr_pocock(PairCounts(1, 1, 10), kAlpha);
  CHECK(set.kind() == ConfidenceSet::Kind::UpperUnbounded);
  CHECK(set.lower() == 0.0);  // Q lower limit clipped to 0
}

TEST_CASE("Fieller coefficients on the UDCA data") {
  const FiellerCoefficients f = fieller_coefficients(PairCounts(10, 3, 71), kAlpha);
  CHECK(std::fabs(f.a - (-0.03)) < 5e-3);
  CHECK(std::fabs(f.b - 0.37) < 5e-3);
  CHECK(std::fabs(f.c - 0.79) < 5e-3);
  CHECK(f.b * f.b - f.a * f.c >= 0.0);

  const FiellerCoefficients zero_l = fieller_coefficients(PairCounts(4, 0, 6), kAlpha);
  CHECK(zero_l.a == 0.0);
  CHECK(zero_l.b == 0.0);
}

TEST_CASE("Fieller intervals on the trial data") {
  check_bounded(wr_fieller(PairCounts(249, 151, 964), kAlpha), 1.35196, 2.03179);
  check_bounded(wr_fieller(PairCounts(36, 16, 32), kAlpha), 1.29924, 4.54190);
  check_bounded(wr_fieller(PairCounts(14, 6, 64), kAlpha), 0.93289, 11.10217);

  const ConfidenceSet ray = wr_fieller(PairCounts(10, 3, 71), kAlpha);
  REQUIRE(ray.kind() == ConfidenceSet::Kind::RayUnion);
  CHECK(std::fabs(ray.left_upper() - (-30.71)) < 5e-2);
  CHECK(std::fabs(ray.right_lower() - 1.02) < 5e-3);
  CHECK(ray.contains(2.0));
  CHECK(!ray.contains(0.0));
}

TEST_CASE("Fieller degenerate branches") {
  using detail::fieller_solve;
  const ConfidenceSet uu = fieller_solve(0.0, 0.5, 0.3);
  CHECK(uu.kind() == ConfidenceSet::Kind::UpperUnbounded);
  CHECK(uu.lower() == doctest::Approx(0.3).epsilon(1e-12));

  const ConfidenceSet lu = fieller_solve(0.0, -0.5, 0.3);
  CHECK(lu.kind() == ConfidenceSet::Kind::LowerUnbounded);
  CHECK(lu.upper() == doctest::Approx(-0.3).epsilon(1e-12));

  CHECK(fieller_solve(0.0, 0.0, -1.0).kind() == ConfidenceSet::Kind::WholeLine);
  CHECK(fieller_solve(0.0, 0.0, 1.0).kind() == ConfidenceSet::Kind::Undefined);
  CHECK(fieller_solve(1.0, 2.0, 4.0).kind() == ConfidenceSet::Kind::WholeLine);    // disc = 0
  CHECK(fieller_solve(1.0, 0.5, 4.0).kind() == ConfidenceSet::Kind::Undefined);    // disc < 0, convex
  CHECK(fieller_solve(-1.0, 0.5, -4.0).kind() == ConfidenceSet::Kind::WholeLine);  // disc < 0, concave
}

TEST_CASE("Fieller discriminant is nonnegative for valid counts") {
  std::mt19937_64 rng(1618);
  for (int i = 0; i < 100000; ++i) {
    const long long w = static_cast<long long>(rng() % 80);
    const long long l = static_cast<long long>(rng() % 80);
    const long long t = static_cast<long long>(rng() % 80);
    if (w + l + t == 0) continue;
    const FiellerCoefficients f = fieller_coefficients(PairCounts(w, l, t), kAlpha);
    CHECK(f.b * f.b - f.a * f.c >= -1e-12);
  }
}

TEST_CASE("MOVER with Wald limits collapses to the Wald interval") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const long long w = static_cast<long long>(rng() % 50);
    const long long l = static_cast<long long>(rng() % 50);
    const long long t = static_cast<long long>(rng() % 50);
    if (w + l + t == 0) continue;
    const PairCounts c(w, l, t);
    const ConfidenceSet direct = nb_wald(c, kAlpha);
    const ConfidenceSet via_mover = nb_mover(c, kAlpha, BaseMethod::Wald);
    CHECK(std::fabs(direct.lower() - via_mover.lower()) <= 1e-9);
    CHECK(std::fabs(direct.upper() - via_mover.upper()) <= 1e-9);
  }
}

TEST_CASE("reflection duality") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 1000; ++i) {
    const long long w = 1 + static_cast<long long>(rng() % 60);
    const long long l = 1 + static_cast<long long>(rng() % 60);
    const long long t = static_cast<long long>(rng() % 60);
    const PairCounts c(w, l, t), swapped(l, w, t);

    // every net-benefit method: bounds negate and swap
    for (auto make : {+[](const PairCounts& x) { return nb_wald(x, kAlpha); },
                      +[](const PairCounts& x) { return nb_mover(x, kAlpha, BaseMethod::Wilson); },
                      +[](const PairCounts& x) {
                        return nb_mover(x, kAlpha, BaseMethod::AgrestiCoull);
                      }}) {
      const ConfidenceSet a = make(c), b = make(swapped);
      CHECK(std::fabs(a.lower() + b.upper()) <= 1e-9);
      CHECK(std::fabs(a.upper() + b.lower()) <= 1e-9);
    }

    // transform-equivariant win-ratio methods: bounds invert and swap
    const ConfidenceSet log_a = wr_wald_log(c, kAlpha), log_b = wr_wald_log(swapped, kAlpha);
    CHECK(std::fabs(log_a.lower() - 1.0 / log_b.upper()) <= 1e-9);
    CHECK(std::fabs(log_a.upper() - 1.0 / log_b.lower()) <= 1e-9);

    const ConfidenceSet poc_a = wr_pocock(c, kAlpha), poc_b = wr_pocock(swapped, kAlpha);
    if (poc_a.is_bounded() && poc_b.is_bounded() && poc_b.lower() > 0.0) {
      CHECK(std::fabs(poc_a.upper() - 1.0 / poc_b.lower()) <= 1e-9 * poc_a.upper());
    }
    if (poc_a.is_bounded() && poc_b.is_bounded() && poc_b.upper() > 0.0) {
      CHECK(std::fabs(poc_a.lower() - 1.0 / poc_b.upper()) <= 1e-9);
    }
  }

  // the plain Wald ratio interval is not reflection-dual
  const ConfidenceSet a = wr_wald(PairCounts(249, 151, 964), kAlpha);
  const ConfidenceSet b = wr_wald(PairCounts(151, 249, 964), kAlpha);
  CHECK(std::fabs(a.lower() - 1.0 / b.upper()) > 1e-3);
}

TEST_CASE("intervals contain their point estimates") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 2000; ++i) {
    const long long w = static_cast<long long>(rng() % 40);
    const long long l = 1 + static_cast<long long>(rng() % 40);
    const long long t = static_cast<long long>(rng() % 40);
    const PairCounts c(w, l, t);
    const double d = estimate_net_benefit(c);
    const double r = estimate_win_ratio(c);

    CHECK(nb_wald(c, kAlpha).contains(d));
    CHECK(nb_mover(c, kAlpha, BaseMethod::Wilson).contains(d));
    CHECK(nb_mover(c, kAlpha, BaseMethod::AgrestiCoull).contains(d));
    for (BaseMethod base : {BaseMethod::Wilson, BaseMethod::AgrestiCoull}) {
      const ConfidenceSet set = wr_mover(c, kAlpha, base);
      if (set.is_bounded()) {
        CHECK(set.lower() <= r + 1e-9);
        CHECK(set.upper() >= r - 1e-9);
      } else {
        CHECK(set.lower() <= r + 1e-9);
      }
    }
    if (w >= 1) {
      const ConfidenceSet wald = wr_wald(c, kAlpha);
      CHECK(wald.contains(r));
      CHECK(wr_wald_log(c, kAlpha).contains(r));
      const ConfidenceSet fieller = wr_fieller(c, kAlpha);
      if (fieller.is_bounded()) CHECK(fieller.contains(r));
      const ConfidenceSet pocock = wr_pocock(c, kAlpha);
      if (pocock.is_bounded()) {
        CHECK(pocock.contains(r));
      } else {
        CHECK(pocock.lower() <= r);
      }
    }
  }
}

TEST_CASE("all win-ratio methods agree at scale") {
  const PairCounts c(3000, 2000, 5000);  // N = 10^4, p_w = 0.3, p_l = 0.2
  const ConfidenceSet sets[] = {
      wr_pocock(c, kAlpha),       wr_wald(c, kAlpha),
      wr_wald_log(c, kAlpha),     wr_fieller(c, kAlpha),
      wr_mover(c, kAlpha, BaseMethod::Wilson), wr_mover(c, kAlpha, BaseMethod::AgrestiCoull)};
  for (const auto& a : sets) {
    for (const auto& b : sets) {
      CHECK(std::fabs(a.lower() - b.lower()) < 0.01);
      CHECK(std::fabs(a.upper() - b.upper()) < 0.01);
    }
  }
}

TEST_CASE("ties at fixed wins and losses: Fieller widens, the Q interval is unchanged") {
  for (double wr : {1.0, 1.5, 2.0}) {
    for (long long n : {30LL, 50LL}) {
      for (double pt = 0.1; pt <= 0.501; pt += 0.05) {
        const double pl = (1.0 - pt) / (1.0 + wr);
        const long long l = std::max<long long>(1, std::llround(pl * double(n)));
        const long long w = std::max<long long>(1, std::llround(wr * pl * double(n)));
        if (w + l >= n) continue;
        const long long t = n - w - l;
        const PairCounts base(w, l, t);
        const PairCounts more_ties(w, l, t + 10);
        const ConfidenceSet p0 = wr_pocock(base, kAlpha), p1 = wr_pocock(more_ties, kAlpha);
        if (p0.is_bounded() && p1.is_bounded()) {
          CHECK(p1.width() == p0.width());  // the Q interval ignores ties entirely
        }
        const ConfidenceSet f0 = wr_fieller(base, kAlpha), f1 = wr_fieller(more_ties, kAlpha);
        if (f0.is_bounded() && f1.is_bounded()) {
          CHECK(f1.width() >= f0.width() - 1e-12);
        }
      }
    }
  }
}
