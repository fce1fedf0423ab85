#include "matchedwin/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace matchedwin {

std::optional<double> SubjectRecord::value(const std::string& outcome) const {
  auto it = values.find(outcome);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

void validate_hierarchy(const std::vector<OutcomeSpec>& hierarchy) {
  if (hierarchy.empty()) throw std::invalid_argument("hierarchy must not be empty");
  std::set<int> priorities;
  std::set<std::string> names;
  for (const auto& spec : hierarchy) {
    if (spec.name.empty()) throw std::invalid_argument("hierarchy: outcome name must not be empty");
    if (!names.insert(spec.name).second) {
      throw std::invalid_argument("hierarchy: duplicate outcome name '" + spec.name + "'");
    }
    if (!priorities.insert(spec.priority).second) {
      throw std::invalid_argument("hierarchy: duplicate priority for '" + spec.name + "'");
    }
    if (spec.tie_margin < 0.0) {
      throw std::invalid_argument("hierarchy: tie_margin must be nonnegative for '" + spec.name + "'");
    }
    if (spec.kind != OutcomeKind::Continuous && spec.tie_margin != 0.0) {
      throw std::invalid_argument("hierarchy: tie_margin applies to continuous outcomes only ('" +
                                  spec.name + "')");
    }
  }
  if (*priorities.begin() != 1 ||
      *priorities.rbegin() != static_cast<int>(hierarchy.size())) {
    throw std::invalid_argument("hierarchy: priorities must be contiguous from 1");
  }
}

namespace {

struct EventView {
  bool observed = false;  // event inside the shared follow-up window
  double time = 0.0;
};

EventView event_within(const SubjectRecord& rec, const OutcomeSpec& spec, double window) {
  EventView v;
  auto t = rec.value(spec.name);
  if (!t) return v;
  if (!rec.follow_up) {
    throw DataError("subject '" + rec.subject_id + "': event time for '" + spec.name +
                    "' without a follow_up");
  }
  if (*t < 0.0 || *t > *rec.follow_up) {
    throw DataError("subject '" + rec.subject_id + "': event time for '" + spec.name +
                    "' outside [0, follow_up]");
  }
  if (*t <= window) {
    v.observed = true;
    v.time = *t;
  }
  return v;
}

Verdict better_wins(bool treated_better, bool control_better) {
  if (treated_better == control_better) return Verdict::Tie;
  return treated_better ? Verdict::Win : Verdict::Loss;
}

Verdict compare_time_to_event(const MatchedPair& pair, const OutcomeSpec& spec) {
  if (!pair.treated.follow_up) {
    throw DataError("subject '" + pair.treated.subject_id + "': missing follow_up for '" +
                    spec.name + "'");
  }
  if (!pair.control.follow_up) {
    throw DataError("subject '" + pair.control.subject_id + "': missing follow_up for '" +
                    spec.name + "'");
  }
  const double window = std::min(*pair.treated.follow_up, *pair.control.follow_up);
  const EventView t = event_within(pair.treated, spec, window);
  const EventView c = event_within(pair.control, spec, window);
  const bool adverse = spec.direction == Direction::LowerIsBetter;
  if (t.observed && c.observed) {
    if (t.time == c.time) return Verdict::Tie;
    const bool treated_later = t.time > c.time;
    // adverse events: later is better; beneficial events: earlier is better
    return (treated_later == adverse) ? Verdict::Win : Verdict::Loss;
  }
  if (!t.observed && !c.observed) return Verdict::Tie;  // indeterminate under censoring
  const bool treated_has_event = t.observed;
  return adverse ? (treated_has_event ? Verdict::Loss : Verdict::Win)
                 : (treated_has_event ? Verdict::Win : Verdict::Loss);
}

Verdict compare_continuous(const MatchedPair& pair, const OutcomeSpec& spec) {
  const auto t = pair.treated.value(spec.name);
  const auto c = pair.control.value(spec.name);
  if (!t || !c) return Verdict::Tie;  // missing never decides
  const double diff = *t - *c;
  if (std::fabs(diff) <= spec.tie_margin) return Verdict::Tie;
  const bool treated_higher = diff > 0.0;
  return better_wins(treated_higher == (spec.direction == Direction::HigherIsBetter),
                     treated_higher != (spec.direction == Direction::HigherIsBetter));
}

Verdict compare_binary(const MatchedPair& pair, const OutcomeSpec& spec) {
  const auto t = pair.treated.value(spec.name);
  const auto c = pair.control.value(spec.name);
  if (!t || !c) return Verdict::Tie;
  if (*t == *c) return Verdict::Tie;
  const bool treated_one = *t != 0.0;
  return better_wins(treated_one == (spec.direction == Direction::HigherIsBetter),
                     treated_one != (spec.direction == Direction::HigherIsBetter));
}

}  // namespace

Verdict compare_on_outcome(const MatchedPair& pair, const OutcomeSpec& spec) {
  switch (spec.kind) {
    case OutcomeKind::TimeToEvent: return compare_time_to_event(pair, spec);
    case OutcomeKind::Continuous: return compare_continuous(pair, spec);
    case OutcomeKind::Binary: return compare_binary(pair, spec);
  }
  throw std::logic_error("compare_on_outcome: unknown outcome kind");
}

PairVerdict adjudicate(const MatchedPair& pair, const std::vector<OutcomeSpec>& hierarchy) {
  validate_hierarchy(hierarchy);
  std::vector<const OutcomeSpec*> ordered;
  ordered.reserve(hierarchy.size());
  for (const auto& spec : hierarchy) ordered.push_back(&spec);
  std::sort(ordered.begin(), ordered.end(),
            [](const OutcomeSpec* a, const OutcomeSpec* b) { return a->priority < b->priority; });
  for (const OutcomeSpec* spec : ordered) {
    const Verdict v = compare_on_outcome(pair, *spec);
    if (v != Verdict::Tie) return PairVerdict{v, spec->name};
  }
  return PairVerdict{Verdict::Tie, std::nullopt};
}

PairCounts tally(const std::vector<MatchedPair>& pairs, const std::vector<OutcomeSpec>& hierarchy) {
  return tally_with_attribution(pairs, hierarchy).counts;
}

TallyBreakdown tally_with_attribution(const std::vector<MatchedPair>& pairs,
                                      const std::vector<OutcomeSpec>& hierarchy) {
  if (pairs.empty()) throw std::invalid_argument("tally: no pairs");
  TallyBreakdown out;
  for (const auto& spec : hierarchy) out.decided_by[spec.name] = 0;
  for (const auto& pair : pairs) {
    const PairVerdict v = adjudicate(pair, hierarchy);
    switch (v.verdict) {
      case Verdict::Win: ++out.counts.n_win; break;
      case Verdict::Loss: ++out.counts.n_loss; break;
      case Verdict::Tie: ++out.counts.n_tie; break;
    }
    if (v.deciding_outcome) ++out.decided_by[*v.deciding_outcome];
  }
  return out;
}

std::vector<MatchedPair> greedy_match(std::vector<SubjectRecord> treated,
                                      std::vector<SubjectRecord> controls) {
  for (const auto& rec : treated) {
    if (!rec.risk_score) {
      throw std::invalid_argument("greedy_match: subject '" + rec.subject_id +
                                  "' has no risk score");
    }
  }
  for (const auto& rec : controls) {
    if (!rec.risk_score) {
      throw std::invalid_argument("greedy_match: subject '" + rec.subject_id +
                                  "' has no risk score");
    }
  }
  std::sort(treated.begin(), treated.end(), [](const SubjectRecord& a, const SubjectRecord& b) {
    if (*a.risk_score != *b.risk_score) return *a.risk_score < *b.risk_score;
    return a.subject_id < b.subject_id;
  });
  std::vector<bool> claimed(controls.size(), false);
  std::vector<MatchedPair> pairs;
  const std::size_t n_pairs = std::min(treated.size(), controls.size());
  pairs.reserve(n_pairs);
  for (const auto& t : treated) {
    if (pairs.size() == n_pairs) break;
    std::size_t best = controls.size();
    for (std::size_t i = 0; i < controls.size(); ++i) {
      if (claimed[i]) continue;
      if (best == controls.size()) {
        best = i;
        continue;
      }
      const double di = std::fabs(*controls[i].risk_score - *t.risk_score);
      const double db = std::fabs(*controls[best].risk_score - *t.risk_score);
      if (di < db || (di == db && controls[i].subject_id < controls[best].subject_id)) {
        best = i;
      }
    }
    if (best == controls.size()) break;
    claimed[best] = true;
    pairs.push_back(MatchedPair{t, controls[best]});
  }
  return pairs;
}

}  // namespace matchedwin
