#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "matchedwin/core.hpp"

namespace matchedwin {

enum class SimTest { Z, ZPocock, Exact };

enum class CiMethod {
  NbWald,
  NbMoverWilson,
  NbMoverAgrestiCoull,
  WrPocock,
  WrWald,
  WrWaldLog,
  WrFieller,
  WrMoverWilson,
  WrMoverAgrestiCoull,
};

const char* to_string(SimTest test);
const char* to_string(CiMethod method);
bool is_nb_method(CiMethod method);

/// Counter-based replicate stream: the state is a pure function of
/// (seed, scenario index, replicate index), so any replicate can be recomputed
/// in isolation and results never depend on scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}
  static RandomStream for_replicate(std::uint64_t seed, std::uint64_t scenario_index,
                                    std::uint64_t replicate_index);

  std::uint64_t next_u64();
  /// Uniform in (0, 1), 53-bit resolution.
  double next_uniform();

 private:
  std::uint64_t state_;
};

enum class StudyKind { TypeOneError, Power, CiStudy };

struct Parameterization {
  enum class Tag { RawPi, FromNB, FromWR };
  Tag tag = Tag::RawPi;
  double effect = 0.0;  // the NB or WR the probabilities were derived from
  double pi_t = 0.0;
};

/// pi_w = (1 + nb - pi_t) / 2, pi_l = pi_w - nb.
Proportions proportions_from_nb(double nb, double pi_t);
/// pi_l = (1 - pi_t) / (1 + wr), pi_w = wr * pi_l.
Proportions proportions_from_wr(double wr, double pi_t);

struct SimScenario {
  StudyKind study = StudyKind::CiStudy;
  long long n_pairs = 0;
  Proportions truth;
  Parameterization parameterization;
  long long replicates = 0;
  Alpha alpha{0.05};
  std::uint64_t seed = 0;
  std::vector<SimTest> tests;
  std::vector<CiMethod> ci_methods;
};

struct CiStudyStats {
  double coverage = 0.0;      // interval-shaped sets containing the truth
  double mean_width = 0.0;    // over bounded replicates; NaN when none were bounded
  long long n_defined = 0;    // replicates with a bounded interval
  long long n_degenerate = 0; // ray-union, whole-line or undefined replicates
};

struct SimulationReport {
  int scenario_index = 0;
  StudyKind study = StudyKind::CiStudy;
  long long n_pairs = 0;
  Proportions truth;
  long long replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::map<SimTest, double> rejection_rates;
  std::map<CiMethod, CiStudyStats> ci_stats;
};

/// One multinomial draw (N_w, N_l, N_t) by sequential conditional binomials;
/// consumes exactly two uniforms from the stream.
PairCounts sample_multinomial(long long n, const Proportions& probs, RandomStream& stream);

/// Rejection rates under pi_w = pi_l. All-tie replicates count as
/// non-rejections; a degenerate Pocock variance (Q_w of 0 or 1) counts as a
/// rejection, its statistic being infinite in the limit.
SimulationReport run_type_one_error(const SimScenario& scenario);

/// Rejection rates under pi_w != pi_l; conventions as in run_type_one_error.
SimulationReport run_power(const SimScenario& scenario);

/// Coverage and width study. Coverage counts interval-shaped sets containing
/// the truth; ray-union, whole-line and undefined sets count as non-covering,
/// as does the Pocock transform when its upper Q limit reaches 1. Widths are
/// averaged over bounded replicates only, with the exclusion rate exposed
/// through n_defined and n_degenerate.
SimulationReport run_ci_study(const SimScenario& scenario);

/// Runs scenarios (possibly in parallel); reports come back in input order and
/// are bitwise identical for any thread count. threads = 0 picks the hardware
/// concurrency.
std::vector<SimulationReport> run_grid(const std::vector<SimScenario>& scenarios,
                                       int threads = 0);

/// Stable CSV schema, one row per scenario x method; full double precision.
void write_reports_csv(std::ostream& out, const std::vector<SimulationReport>& reports);
/// Nested JSON mirror of the CSV contents.
std::string reports_to_json(const std::vector<SimulationReport>& reports);

}  // namespace matchedwin
