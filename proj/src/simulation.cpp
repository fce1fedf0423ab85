#include "matchedwin/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "matchedwin/hypothesis.hpp"
#include "matchedwin/intervals.hpp"

namespace matchedwin {

const char* to_string(SimTest test) {
  switch (test) {
    case SimTest::Z: return "z";
    case SimTest::ZPocock: return "z-pocock";
    case SimTest::Exact: return "exact";
  }
  return "?";
}

const char* to_string(CiMethod method) {
  switch (method) {
    case CiMethod::NbWald: return "nb-wald";
    case CiMethod::NbMoverWilson: return "nb-mover-wilson";
    case CiMethod::NbMoverAgrestiCoull: return "nb-mover-ac";
    case CiMethod::WrPocock: return "wr-pocock";
    case CiMethod::WrWald: return "wr-wald";
    case CiMethod::WrWaldLog: return "wr-wald-log";
    case CiMethod::WrFieller: return "wr-fieller";
    case CiMethod::WrMoverWilson: return "wr-mover-wilson";
    case CiMethod::WrMoverAgrestiCoull: return "wr-mover-ac";
  }
  return "?";
}

bool is_nb_method(CiMethod method) {
  return method == CiMethod::NbWald || method == CiMethod::NbMoverWilson ||
         method == CiMethod::NbMoverAgrestiCoull;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream RandomStream::for_replicate(std::uint64_t seed, std::uint64_t scenario_index,
                                         std::uint64_t replicate_index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= scenario_index * 0x9e3779b97f4a7c15ULL;
  a ^= splitmix64(s);
  s ^= replicate_index;
  a ^= splitmix64(s);
  return RandomStream(a);
}

std::uint64_t RandomStream::next_u64() { return splitmix64(state_); }

double RandomStream::next_uniform() {
  // 53 significant bits, strictly inside (0, 1)
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

Proportions proportions_from_nb(double nb, double pi_t) {
  const double pi_w = (1.0 + nb - pi_t) / 2.0;
  const double pi_l = pi_w - nb;
  if (pi_w < 0.0 || pi_l < 0.0 || pi_t < 0.0 || pi_w > 1.0 || pi_l > 1.0) {
    throw std::invalid_argument("proportions_from_nb: expansion leaves [0, 1]");
  }
  return Proportions(pi_w, pi_l, pi_t);
}

Proportions proportions_from_wr(double wr, double pi_t) {
  if (!(wr > 0.0)) throw std::invalid_argument("proportions_from_wr: ratio must be positive");
  const double pi_l = (1.0 - pi_t) / (1.0 + wr);
  const double pi_w = wr * pi_l;
  if (pi_w < 0.0 || pi_l < 0.0 || pi_t < 0.0 || pi_w > 1.0 || pi_l > 1.0) {
    throw std::invalid_argument("proportions_from_wr: expansion leaves [0, 1]");
  }
  return Proportions(pi_w, pi_l, pi_t);
}

namespace {

// Inverse-CDF table for Binomial(n, p); one uniform per draw.
class BinomialSampler {
 public:
  BinomialSampler(long long n, double p) : n_(n) {
    if (n < 0) throw std::invalid_argument("BinomialSampler: negative n");
    cdf_.resize(static_cast<std::size_t>(n) + 1);
    if (p <= 0.0) {
      std::fill(cdf_.begin(), cdf_.end(), 1.0);
      return;
    }
    if (p >= 1.0) {
      std::fill(cdf_.begin(), cdf_.end(), 0.0);
      cdf_.back() = 1.0;
      return;
    }
    const double logp = std::log(p);
    const double log1mp = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double acc = 0.0;
    for (long long k = 0; k <= n; ++k) {
      const double lpmf = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                          static_cast<double>(k) * logp + static_cast<double>(n - k) * log1mp;
      acc += std::exp(lpmf);
      cdf_[static_cast<std::size_t>(k)] = acc;
    }
    cdf_.back() = 1.0;
  }

  long long draw(double u) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? n_ : static_cast<long long>(it - cdf_.begin());
  }

 private:
  long long n_;
  std::vector<double> cdf_;
};

PairCounts sample_with(const BinomialSampler& first, long long n, double pi_w, double pi_l,
                       RandomStream& stream,
                       std::unordered_map<long long, BinomialSampler>* second_cache) {
  const double u1 = stream.next_uniform();
  const double u2 = stream.next_uniform();
  if (n == 0) return PairCounts(0, 0, 0);
  const long long n_win = first.draw(u1);
  const long long rest = n - n_win;
  long long n_loss = 0;
  if (rest > 0) {
    const double denom = 1.0 - pi_w;
    const double q = denom > 0.0 ? std::min(pi_l / denom, 1.0) : 0.0;
    if (second_cache) {
      auto it = second_cache->find(rest);
      if (it == second_cache->end()) {
        it = second_cache->emplace(rest, BinomialSampler(rest, q)).first;
      }
      n_loss = it->second.draw(u2);
    } else {
      n_loss = BinomialSampler(rest, q).draw(u2);
    }
  }
  return PairCounts(n_win, n_loss, n - n_win - n_loss);
}

}  // namespace

PairCounts sample_multinomial(long long n, const Proportions& probs, RandomStream& stream) {
  if (n < 0) throw std::invalid_argument("sample_multinomial: negative n");
  const BinomialSampler first(n, probs.p_w);
  return sample_with(first, n, probs.p_w, probs.p_l, stream, nullptr);
}

namespace {

struct TestEval {
  bool reject[3] = {false, false, false};
};

struct CiEval {
  bool covered = false;
  bool bounded = false;
  bool degenerate = false;  // ray union, whole line, or undefined
  double width = 0.0;
};

struct CellEval {
  TestEval tests;
  std::vector<CiEval> ci;  // parallel to scenario.ci_methods
};

TestEval evaluate_tests(const PairCounts& counts, const SimScenario& scenario) {
  TestEval eval;
  const double z_crit = scenario.alpha.z_half();
  if (counts.untied() < 1) return eval;  // all ties: never a rejection
  for (std::size_t i = 0; i < scenario.tests.size(); ++i) {
    switch (scenario.tests[i]) {
      case SimTest::Z:
        eval.reject[0] = std::fabs(z_corrected(counts).statistic.value()) > z_crit;
        break;
      case SimTest::ZPocock:
        // Q_w at 0 or 1 sends the statistic to infinity
        eval.reject[1] = counts.n_win == 0 || counts.n_loss == 0 ||
                         std::fabs(z_pocock(counts).statistic.value()) > z_crit;
        break;
      case SimTest::Exact:
        eval.reject[2] = exact_p_value(counts).p_value <= scenario.alpha.value();
        break;
    }
  }
  return eval;
}

ConfidenceSet evaluate_ci(CiMethod method, const PairCounts& counts, const Alpha& alpha) {
  try {
    switch (method) {
      case CiMethod::NbWald: return nb_wald(counts, alpha);
      case CiMethod::NbMoverWilson: return nb_mover(counts, alpha, BaseMethod::Wilson);
      case CiMethod::NbMoverAgrestiCoull: return nb_mover(counts, alpha, BaseMethod::AgrestiCoull);
      case CiMethod::WrPocock: return wr_pocock(counts, alpha);
      case CiMethod::WrWald: return wr_wald(counts, alpha);
      case CiMethod::WrWaldLog: return wr_wald_log(counts, alpha);
      case CiMethod::WrFieller: return wr_fieller(counts, alpha);
      case CiMethod::WrMoverWilson: return wr_mover(counts, alpha, BaseMethod::Wilson);
      case CiMethod::WrMoverAgrestiCoull: return wr_mover(counts, alpha, BaseMethod::AgrestiCoull);
    }
  } catch (const std::domain_error& e) {
    return ConfidenceSet::undefined(e.what());
  }
  throw std::logic_error("evaluate_ci: unknown method");
}

CiEval evaluate_ci_replicate(CiMethod method, const PairCounts& counts, const SimScenario& sc,
                             double truth_nb, double truth_wr) {
  const ConfidenceSet set = evaluate_ci(method, counts, sc.alpha);
  const double truth = is_nb_method(method) ? truth_nb : truth_wr;
  CiEval eval;
  switch (set.kind()) {
    case ConfidenceSet::Kind::Bounded:
      eval.bounded = true;
      eval.width = set.width();
      eval.covered = set.contains(truth);
      break;
    case ConfidenceSet::Kind::LowerUnbounded:
      eval.covered = set.contains(truth);
      break;
    case ConfidenceSet::Kind::UpperUnbounded:
      // The Q transform overflowing past 1 is treated as a failed interval in
      // the study (its naive upper endpoint is negative); other methods keep
      // their infinite upper side.
      eval.covered = method == CiMethod::WrPocock ? false : set.contains(truth);
      break;
    case ConfidenceSet::Kind::RayUnion:
    case ConfidenceSet::Kind::WholeLine:
    case ConfidenceSet::Kind::Undefined:
      eval.degenerate = true;
      break;
  }
  return eval;
}

void validate_scenario(const SimScenario& scenario) {
  if (scenario.n_pairs < 1) throw std::invalid_argument("scenario: n_pairs must be at least 1");
  if (scenario.replicates < 1) {
    throw std::invalid_argument("scenario: replicates must be at least 1 (empty report)");
  }
  switch (scenario.study) {
    case StudyKind::TypeOneError:
      if (scenario.truth.p_w != scenario.truth.p_l) {
        throw std::invalid_argument("run_type_one_error: requires pi_w = pi_l");
      }
      if (scenario.tests.empty()) throw std::invalid_argument("scenario: no tests requested");
      break;
    case StudyKind::Power:
      if (scenario.truth.p_w == scenario.truth.p_l) {
        throw std::invalid_argument("run_power: requires pi_w != pi_l");
      }
      if (scenario.tests.empty()) throw std::invalid_argument("scenario: no tests requested");
      break;
    case StudyKind::CiStudy:
      if (scenario.ci_methods.empty()) {
        throw std::invalid_argument("run_ci_study: no interval methods requested");
      }
      for (CiMethod m : scenario.ci_methods) {
        if (!is_nb_method(m) && scenario.truth.p_l == 0.0) {
          throw std::invalid_argument("run_ci_study: win-ratio truth undefined at pi_l = 0");
        }
      }
      break;
  }
}

SimulationReport run_scenario(const SimScenario& scenario, int scenario_index) {
  validate_scenario(scenario);
  const long long n = scenario.n_pairs;
  const double truth_nb = scenario.truth.p_w - scenario.truth.p_l;
  const double truth_wr = scenario.truth.p_l > 0.0 ? scenario.truth.p_w / scenario.truth.p_l
                                                   : std::numeric_limits<double>::quiet_NaN();

  const BinomialSampler first(n, scenario.truth.p_w);
  std::unordered_map<long long, BinomialSampler> second_cache;
  std::unordered_map<long long, CellEval> memo;

  long long reject_count[3] = {0, 0, 0};
  std::vector<long long> cover(scenario.ci_methods.size(), 0);
  std::vector<long long> defined(scenario.ci_methods.size(), 0);
  std::vector<long long> degenerate(scenario.ci_methods.size(), 0);
  std::vector<double> width_sum(scenario.ci_methods.size(), 0.0);

  for (long long rep = 0; rep < scenario.replicates; ++rep) {
    RandomStream stream = RandomStream::for_replicate(scenario.seed,
                                                      static_cast<std::uint64_t>(scenario_index),
                                                      static_cast<std::uint64_t>(rep));
    const PairCounts counts =
        sample_with(first, n, scenario.truth.p_w, scenario.truth.p_l, stream, &second_cache);
    const long long key = counts.n_win * (n + 1) + counts.n_loss;
    auto it = memo.find(key);
    if (it == memo.end()) {
      CellEval cell;
      if (scenario.study == StudyKind::CiStudy) {
        cell.ci.reserve(scenario.ci_methods.size());
        for (CiMethod m : scenario.ci_methods) {
          cell.ci.push_back(evaluate_ci_replicate(m, counts, scenario, truth_nb, truth_wr));
        }
      } else {
        cell.tests = evaluate_tests(counts, scenario);
      }
      it = memo.emplace(key, std::move(cell)).first;
    }
    const CellEval& cell = it->second;
    if (scenario.study == StudyKind::CiStudy) {
      for (std::size_t i = 0; i < cell.ci.size(); ++i) {
        const CiEval& e = cell.ci[i];
        cover[i] += e.covered ? 1 : 0;
        degenerate[i] += e.degenerate ? 1 : 0;
        if (e.bounded) {
          defined[i] += 1;
          width_sum[i] += e.width;
        }
      }
    } else {
      for (int t = 0; t < 3; ++t) reject_count[t] += cell.tests.reject[t] ? 1 : 0;
    }
  }

  SimulationReport report;
  report.scenario_index = scenario_index;
  report.study = scenario.study;
  report.n_pairs = scenario.n_pairs;
  report.truth = scenario.truth;
  report.replicates = scenario.replicates;
  report.seed = scenario.seed;
  report.alpha = scenario.alpha.value();
  const double reps = static_cast<double>(scenario.replicates);
  if (scenario.study == StudyKind::CiStudy) {
    for (std::size_t i = 0; i < scenario.ci_methods.size(); ++i) {
      CiStudyStats stats;
      stats.coverage = static_cast<double>(cover[i]) / reps;
      stats.n_defined = defined[i];
      stats.n_degenerate = degenerate[i];
      stats.mean_width = defined[i] > 0 ? width_sum[i] / static_cast<double>(defined[i])
                                        : std::numeric_limits<double>::quiet_NaN();
      report.ci_stats.emplace(scenario.ci_methods[i], stats);
    }
  } else {
    for (SimTest t : scenario.tests) {
      report.rejection_rates.emplace(t, static_cast<double>(reject_count[static_cast<int>(t)]) / reps);
    }
  }
  return report;
}

}  // namespace

SimulationReport run_type_one_error(const SimScenario& scenario) {
  SimScenario s = scenario;
  s.study = StudyKind::TypeOneError;
  return run_scenario(s, 0);
}

SimulationReport run_power(const SimScenario& scenario) {
  SimScenario s = scenario;
  s.study = StudyKind::Power;
  return run_scenario(s, 0);
}

SimulationReport run_ci_study(const SimScenario& scenario) {
  SimScenario s = scenario;
  s.study = StudyKind::CiStudy;
  return run_scenario(s, 0);
}

std::vector<SimulationReport> run_grid(const std::vector<SimScenario>& scenarios, int threads) {
  std::string problems;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    try {
      validate_scenario(scenarios[i]);
    } catch (const std::exception& e) {
      problems += "scenario " + std::to_string(i) + ": " + e.what() + "\n";
    }
  }
  if (!problems.empty()) throw std::invalid_argument("run_grid:\n" + problems);

  std::vector<SimulationReport> reports(scenarios.size());
  if (scenarios.empty()) return reports;
  unsigned n_workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) return;
      reports[i] = run_scenario(scenarios[i], static_cast<int>(i));
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return reports;
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* study_name(StudyKind study) {
  switch (study) {
    case StudyKind::TypeOneError: return "type1";
    case StudyKind::Power: return "power";
    case StudyKind::CiStudy: return "ci";
  }
  return "?";
}

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<SimulationReport>& reports) {
  out << "scenario,study,n_pairs,pi_w,pi_l,pi_t,replicates,seed,alpha,method,"
         "rejection_rate,coverage,mean_width,n_defined,n_degenerate\n";
  for (const auto& r : reports) {
    const std::string prefix =
        std::to_string(r.scenario_index) + "," + study_name(r.study) + "," +
        std::to_string(r.n_pairs) + "," + fmt_double(r.truth.p_w) + "," +
        fmt_double(r.truth.p_l) + "," + fmt_double(r.truth.p_t) + "," +
        std::to_string(r.replicates) + "," + std::to_string(r.seed) + "," +
        fmt_double(r.alpha) + ",";
    for (const auto& [test, rate] : r.rejection_rates) {
      out << prefix << to_string(test) << "," << fmt_double(rate) << ",,,,\n";
    }
    for (const auto& [method, stats] : r.ci_stats) {
      out << prefix << to_string(method) << ",," << fmt_double(stats.coverage) << ","
          << fmt_double(stats.mean_width) << "," << stats.n_defined << ","
          << stats.n_degenerate << "\n";
    }
  }
}

std::string reports_to_json(const std::vector<SimulationReport>& reports) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["scenario"] = r.scenario_index;
    j["study"] = study_name(r.study);
    j["n_pairs"] = r.n_pairs;
    j["truth"] = {{"pi_w", r.truth.p_w}, {"pi_l", r.truth.p_l}, {"pi_t", r.truth.p_t}};
    j["replicates"] = r.replicates;
    j["seed"] = r.seed;
    j["alpha"] = r.alpha;
    if (!r.rejection_rates.empty()) {
      nlohmann::json tests = nlohmann::json::object();
      for (const auto& [test, rate] : r.rejection_rates) tests[to_string(test)] = rate;
      j["rejection_rates"] = tests;
    }
    if (!r.ci_stats.empty()) {
      nlohmann::json methods = nlohmann::json::object();
      for (const auto& [method, stats] : r.ci_stats) {
        nlohmann::json m;
        m["coverage"] = stats.coverage;
        if (std::isnan(stats.mean_width)) {
          m["mean_width"] = nullptr;
        } else {
          m["mean_width"] = stats.mean_width;
        }
        m["n_defined"] = stats.n_defined;
        m["n_degenerate"] = stats.n_degenerate;
        methods[to_string(method)] = m;
      }
      j["ci_methods"] = methods;
    }
    root.push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

}  // namespace matchedwin
