#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "trustsim/types.hpp"

namespace trustsim {

/// One delegated task's observable outcome, as seen by the truster.
struct RatingEvent {
  EventId id = 0;
  AgentId truster = 0;
  AgentId trustee = 0;
  ContextId context = 0;
  Step issued_at = 0;
  Step started_at = 0;
  std::optional<Step> completed_at;  // empty: never completed (expired or swept)
  Step deadline = 0;
  bool quality_ok = false;
};

// Throws std::invalid_argument when timestamps are out of order.
void validate(const RatingEvent& ev);

struct BetaEvidence {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;

  [[nodiscard]] std::uint64_t total() const { return positives + negatives; }
  auto operator<=>(const BetaEvidence&) const = default;
};

/// Expected value of Beta(positives + 1, negatives + 1).
double brs_score(const BetaEvidence& ev);

enum class TimelinessMode { hard, linear };

struct TimelinessPolicy {
  TimelinessMode mode = TimelinessMode::hard;
};

/// Throws InvalidDeadline when dl <= start.
double timeliness_discount(Step start, Step end, Step dl, TimelinessPolicy policy);

enum class Aggregation { pooled, mean_of_locals };

enum class Outcome { positive, negative };

/// Classifies an event under BRS2012: late or failed work is a negative.
Outcome classify(const RatingEvent& ev, TimelinessPolicy policy);

/// Evidence store keyed by (trustee, context), holding one BetaEvidence per truster.
class ReputationLedger {
 public:
  struct Options {
    Aggregation aggregation = Aggregation::mean_of_locals;
    TimelinessPolicy timeliness{};
    std::size_t window = 0;  // 0 keeps the full history
  };

  ReputationLedger() = default;
  explicit ReputationLedger(Options opts);

  /// Records one rating; throws DuplicateEvent on a repeated id.
  Outcome record_outcome(const RatingEvent& ev);

  /// Id-less path for callers that classify outcomes themselves.
  void record(AgentId truster, AgentId trustee, ContextId context, Outcome outcome);

  [[nodiscard]] double reputation_of(AgentId trustee, ContextId context) const;
  [[nodiscard]] double reputation_of(AgentId trustee, ContextId context, Aggregation agg) const;

  /// Recomputes mean-of-locals from scratch; reputation_of uses a running sum.
  [[nodiscard]] double reputation_exact(AgentId trustee, ContextId context) const;

  [[nodiscard]] BetaEvidence local(AgentId trustee, ContextId context, AgentId truster) const;
  [[nodiscard]] BetaEvidence pooled(AgentId trustee, ContextId context) const;
  [[nodiscard]] std::size_t rater_count(AgentId trustee, ContextId context) const;

  [[nodiscard]] const Options& options() const { return opts_; }
  [[nodiscard]] std::size_t event_count() const { return events_; }

  /// CSV columns: trustee_id, context_id, truster_id, positives, negatives, score.
  void write_snapshot(std::ostream& out) const;

  bool operator==(const ReputationLedger& other) const;

 private:
  struct Local {
    BetaEvidence ev;
    std::deque<bool> recent;  // used only with a window
  };
  struct Slot {
    std::unordered_map<AgentId, Local> by_truster;
    BetaEvidence pooled;
    double score_sum = 0.0;
  };

  static std::uint64_t key(AgentId trustee, ContextId context) {
    return (static_cast<std::uint64_t>(trustee) << 32) | context;
  }
  const Slot* find(AgentId trustee, ContextId context) const;

  Options opts_{};
  std::unordered_map<std::uint64_t, Slot> slots_;
  std::unordered_set<EventId> seen_;
  std::size_t events_ = 0;
};

}  // namespace trustsim
