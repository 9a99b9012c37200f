#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trustsim/draft.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/testbed/behavior.hpp"

namespace trustsim {

enum class Acceptor { draft, trd };

std::string_view to_string(Acceptor a);
/// Throws std::invalid_argument for an unknown name.
Acceptor parse_acceptor(std::string_view name);

struct DraftConfig {
  std::size_t trustees = 100;
  std::size_t trusters = 1000;
  int hon_x = 50;
  Step steps = 1000;
  double v = 100.0;
  double explore = 0.15;
  double rep_floor = 2.0 / 3.0;  // exploitation candidates need a reputation above this
  std::vector<ContextSpec> contexts = default_contexts();
  Acceptor acceptor = Acceptor::draft;
  bool clean_sweep = false;
};

/// e_max per step for each worker group (Hon 25, MH 30, MM 35, Mal 40).
std::uint32_t effort_budget(WorkerType t);

struct DraftReport {
  Acceptor acceptor = Acceptor::draft;
  double v = 0.0;
  std::optional<double> welfare;       // time-averaged sum of G over on-time good completions
  std::optional<double> fairness_hon;  // Jain index of accepted tasks over Hon trustees
  std::optional<double> fairness_hon_effort;  // same, counting accepted effort units
  std::optional<double> quality;       // share of completions that were on time and good
  std::optional<double> on_time;       // share of completions within their deadline
  std::optional<double> mean_backlog;  // tasks queued per trustee, averaged over steps
  std::optional<double> mean_wait;     // completion step minus first proposal step
  std::uint64_t requests = 0;          // proposals, retries included
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t completed = 0;
  std::uint64_t completed_on_time = 0;
  std::uint64_t swept = 0;
  std::vector<std::uint64_t> tasks_per_trustee;
  std::vector<std::uint64_t> wait_histogram;  // index = steps from proposal to completion
  std::vector<double> welfare_series;
};

/// Trusters delegate typed tasks greedily on BRS2012; trustees either accept
/// every request or run the DRAFT acceptor on their self-estimated reputation.
class DraftWorld {
 public:
  DraftWorld(const DraftConfig& cfg, std::uint64_t seed);

  void advance_step();
  void run();

  [[nodiscard]] Step now() const { return now_; }
  [[nodiscard]] const DraftConfig& config() const { return cfg_; }
  [[nodiscard]] DraftReport report() const;
  [[nodiscard]] WorkerType trustee_type(AgentId j) const { return types_.at(j); }
  [[nodiscard]] std::uint64_t backlog(AgentId j) const { return queues_.at(j).backlog(); }
  [[nodiscard]] const ReputationLedger& ledger() const { return ledger_; }
  /// reputation_[t][j]: trustee j's reputation averaged over contexts after step t.
  [[nodiscard]] const std::vector<std::vector<double>>& reputation_series() const {
    return reputation_;
  }
  /// Acceptance decisions of the last step, one plan per trustee (DRAFT only).
  [[nodiscard]] const std::vector<AcceptPlan>& last_plans() const { return plans_; }

 private:
  struct Request {
    EventId id = 0;
    ContextId context = 0;
    std::size_t slot = 0;  // index into cfg_.contexts
    Step issued_at = 0;
    std::vector<AgentId> refused_by;
  };

  AgentId pick_trustee(AgentId truster, const Request& req);
  void record(const RatingEvent& ev);

  DraftConfig cfg_;
  Step now_ = 0;
  EventId next_id_ = 1;
  ReputationLedger ledger_;
  std::vector<WorkerType> types_;
  std::vector<TrusteeQueue> queues_;
  std::vector<AgentId> trustee_ids_;
  std::vector<Rng> trustee_rng_;
  std::vector<Rng> truster_rng_;
  std::vector<std::optional<Request>> pending_;     // per truster, awaiting acceptance
  std::vector<std::vector<BetaEvidence>> direct_;   // [truster][trustee * contexts + slot]
  std::vector<std::vector<AgentId>> known_;
  std::vector<std::vector<bool>> knows_;
  std::vector<AcceptPlan> plans_;
  std::vector<std::vector<double>> reputation_;
  std::vector<Step> issued_of_;  // task id - 1 -> first proposal step

  std::vector<double> welfare_;
  std::vector<double> backlog_mean_;
  std::vector<std::uint64_t> tasks_per_trustee_;
  std::vector<std::uint64_t> effort_per_trustee_;
  std::vector<std::uint64_t> wait_hist_;
  std::uint64_t requests_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t rejected_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t on_time_ = 0;
  std::uint64_t good_ = 0;
  std::uint64_t swept_ = 0;
  double wait_sum_ = 0.0;
};

}  // namespace trustsim
