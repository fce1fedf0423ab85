#pragma once

#include "matchedwin/core.hpp"

namespace matchedwin {

/// Single-proportion interval family used as the MOVER building block.
/// Wald is provided for the algebraic reduction of the MOVER difference to the
/// plain Wald interval; it uses unclipped limits for exactly that reason.
enum class BaseMethod { Wilson, AgrestiCoull, Wald };

struct SingleProportionInterval {
  double lower = 0.0;
  double upper = 1.0;
  BaseMethod method = BaseMethod::Wilson;
};

/// Square-and-add Wilson limits for a proportion, clipped to [0, 1].
SingleProportionInterval wilson_interval(double p, long long n, const Alpha& alpha);

/// Agresti-Coull (adjusted Wald) limits, clipped to [0, 1].
SingleProportionInterval agresti_coull_interval(double p, long long n, const Alpha& alpha);

/// Estimated correlation of (p_w, p_l) under the multinomial model;
/// 0 when p_w(1-p_w) p_l(1-p_l) = 0, otherwise -p_w p_l / sqrt(...). Always <= 0.
double paired_correlation(const Proportions& p);

struct FiellerCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Net benefit, Wald form. Symmetric about D_w; deliberately not clipped to
/// [-1, 1] -- boundary violations are the caller's to report.
ConfidenceSet nb_wald(const PairCounts& counts, const Alpha& alpha);

/// Net benefit via MOVER on the chosen single-proportion limits.
ConfidenceSet nb_mover(const PairCounts& counts, const Alpha& alpha, BaseMethod base);

/// Win ratio through the conditional-binomial interval for Q_w, transformed by
/// Q/(1-Q). An upper Q limit at 1 maps to an upper-unbounded set.
ConfidenceSet wr_pocock(const PairCounts& counts, const Alpha& alpha);

/// Win ratio, delta-method Wald form. Not clipped; lower bounds may be negative.
ConfidenceSet wr_wald(const PairCounts& counts, const Alpha& alpha);

/// Win ratio, Wald on the log scale. Needs at least one win and one loss.
ConfidenceSet wr_wald_log(const PairCounts& counts, const Alpha& alpha);

FiellerCoefficients fieller_coefficients(const PairCounts& counts, const Alpha& alpha);

/// Win ratio by Fieller's theorem: the solution set of a R^2 - 2 b R + c <= 0.
/// Concave cases yield ray unions; degenerate cases whole-line or undefined sets.
ConfidenceSet wr_fieller(const PairCounts& counts, const Alpha& alpha);

/// Win ratio via MOVER, solving the interval endpoints of p_w - R p_l = 0.
ConfidenceSet wr_mover(const PairCounts& counts, const Alpha& alpha, BaseMethod base);

namespace detail {
/// Solution set of a R^2 - 2 b R + c <= 0 as a ratio confidence set; exposed
/// so the degenerate branches (a = 0, zero discriminant) stay testable.
ConfidenceSet fieller_solve(double a, double b, double c);
}  // namespace detail

}  // namespace matchedwin
