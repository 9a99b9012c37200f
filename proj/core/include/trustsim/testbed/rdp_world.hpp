#pragma once

#include <cstdint>
#include <vector>

#include "trustsim/draft.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"

namespace trustsim {

struct RdpConfig {
  std::size_t trustees = 200;
  std::size_t trusters = 1000;
  double hon_share = 0.5;
  double hon_success = 0.9;
  double mal_success = 0.1;
  std::uint32_t capacity = 10;  // tasks served per trustee per step
  Step deadline = 3;            // steps after issue
  double explore = 0.15;
  bool clean_sweep = false;
  bool shared_view = false;  // rank known trustees by their reputation instead of private evidence
  Aggregation aggregation = Aggregation::pooled;
  Step steps = 500;
};

struct RdpStepStats {
  std::uint64_t issued = 0;
  std::uint64_t completed = 0;
  std::uint64_t on_time_success = 0;
  std::uint64_t swept = 0;
};

/// Greedy BRS2012 delegation without any load coordination: every truster
/// delegates one task per step, mostly to its best-rated known trustee.
class RdpWorld {
 public:
  RdpWorld(const RdpConfig& cfg, std::uint64_t seed);

  void advance_step();
  void run();

  [[nodiscard]] Step now() const { return now_; }
  [[nodiscard]] const RdpConfig& config() const { return cfg_; }
  [[nodiscard]] const ReputationLedger& ledger() const { return ledger_; }
  [[nodiscard]] bool honest(AgentId trustee) const { return honest_.at(trustee); }
  [[nodiscard]] std::uint64_t backlog(AgentId trustee) const { return queues_.at(trustee).backlog(); }

  /// reputation_[t][j]: ledger reputation of trustee j after step t.
  [[nodiscard]] const std::vector<std::vector<double>>& reputation_series() const {
    return reputation_;
  }
  [[nodiscard]] const std::vector<RdpStepStats>& stats() const { return stats_; }

 private:
  AgentId pick_trustee(AgentId truster);

  RdpConfig cfg_;
  Step now_ = 0;
  EventId next_id_ = 1;
  ReputationLedger ledger_;
  std::vector<bool> honest_;
  std::vector<TrusteeQueue> queues_;
  std::vector<AgentId> trustee_ids_;
  std::vector<Rng> trustee_rng_;
  std::vector<Rng> truster_rng_;
  std::vector<std::vector<AgentId>> known_;
  std::vector<std::vector<bool>> knows_;
  std::vector<std::vector<double>> reputation_;
  std::vector<RdpStepStats> stats_;
};

/// Sign changes of (series - mean(series)), ignoring exact zeros.
std::uint64_t zero_crossings(const std::vector<double>& series);

}  // namespace trustsim
