#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchedwin/core.hpp"

namespace matchedwin {

enum class OutcomeKind { TimeToEvent, Continuous, Binary };
enum class Direction { HigherIsBetter, LowerIsBetter };
enum class Arm { Treatment, Control };
enum class Verdict { Win, Loss, Tie };

/// One level of a prioritized outcome hierarchy. priority 1 is the most severe.
/// For time-to-event outcomes "better" means a later or no event within the
/// shared follow-up window when direction is LowerIsBetter (an adverse event);
/// HigherIsBetter mirrors this for beneficial events.
struct OutcomeSpec {
  std::string name;
  OutcomeKind kind = OutcomeKind::TimeToEvent;
  Direction direction = Direction::LowerIsBetter;
  double tie_margin = 0.0;  // Continuous only
  int priority = 1;
};

/// Priorities must be distinct and contiguous from 1; tie_margin nonnegative
/// and zero outside Continuous outcomes. Throws std::invalid_argument.
void validate_hierarchy(const std::vector<OutcomeSpec>& hierarchy);

struct SubjectRecord {
  std::string subject_id;
  Arm arm = Arm::Treatment;
  std::optional<double> follow_up;
  std::map<std::string, double> values;  // present observations, keyed by outcome name
  std::optional<double> risk_score;

  bool has(const std::string& outcome) const { return values.count(outcome) > 0; }
  std::optional<double> value(const std::string& outcome) const;
};

struct MatchedPair {
  SubjectRecord treated;
  SubjectRecord control;
};

struct PairVerdict {
  Verdict verdict = Verdict::Tie;
  std::optional<std::string> deciding_outcome;  // present iff verdict is not Tie
};

/// Verdict for one pair on a single outcome, from the treated patient's side.
Verdict compare_on_outcome(const MatchedPair& pair, const OutcomeSpec& spec);

/// Walks the hierarchy in priority order and returns the first decision.
PairVerdict adjudicate(const MatchedPair& pair, const std::vector<OutcomeSpec>& hierarchy);

PairCounts tally(const std::vector<MatchedPair>& pairs, const std::vector<OutcomeSpec>& hierarchy);

/// Tally plus the number of pairs each hierarchy level decided.
struct TallyBreakdown {
  PairCounts counts;
  std::map<std::string, long long> decided_by;  // outcome name -> wins + losses it decided
};
TallyBreakdown tally_with_attribution(const std::vector<MatchedPair>& pairs,
                                      const std::vector<OutcomeSpec>& hierarchy);

/// Deterministic nearest-score greedy 1:1 matching on risk scores. Treated
/// records are taken in score order; each claims the free control with the
/// smallest absolute score difference, ties broken by control subject_id.
std::vector<MatchedPair> greedy_match(std::vector<SubjectRecord> treated,
                                      std::vector<SubjectRecord> controls);

}  // namespace matchedwin
