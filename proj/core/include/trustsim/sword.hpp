#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trustsim/rng.hpp"
#include "trustsim/types.hpp"

namespace trustsim {

struct WorkerState {
  AgentId id = 0;
  double reputation = 0.5;       // tau_w(t)
  double reputation_peak = 0.5;  // tau_w^max over the run so far
  std::uint32_t capacity = 1;    // mu_w^max
  std::uint64_t backlog = 0;     // Q_w(t)
};

struct SwordConfig {
  double v = 2.0;
  double n_weight = 1.0;
  double max_gain = 1.0;
  double task_cost = 0.2;
  double rep_floor = 0.6;
  double explore_prob = 0.1;
};

struct AllocationPlan {
  std::vector<std::uint64_t> counts;  // aligned with the worker span
  std::uint64_t leftover = 0;
  bool explored = false;
};

double target_queue(const WorkerState& w, const SwordConfig& cfg);
double desirability(const WorkerState& w, const SwordConfig& cfg);

/// Exploitation ranking only (no exploration draw).
AllocationPlan allocate_exploit(std::span<const WorkerState> workers, std::uint64_t incoming,
                                const SwordConfig& cfg);

/// Random assignment within capacity. Only workers whose backlog is within
/// their target queue length take part, which keeps the queue bound intact.
AllocationPlan allocate_explore(std::span<const WorkerState> workers, std::uint64_t incoming,
                                const SwordConfig& cfg, Rng& rng);

/// One broker decision: explores with probability cfg.explore_prob.
AllocationPlan allocate(std::span<const WorkerState> workers, std::uint64_t incoming,
                        const SwordConfig& cfg, Rng& rng);

/// max(Q - served, 0) + arrivals; throws ContractViolation when served > Q.
std::uint64_t step_queue(std::uint64_t backlog, std::uint64_t served, std::uint64_t arrivals);

/// What a worker can serve this step: min(Q, capacity).
std::uint64_t serve_capped(std::uint64_t backlog, std::uint32_t capacity);

struct Completion {
  bool on_time = false;
  bool quality_ok = false;
};

/// Sum of g * mu - c * A for one step.
double step_welfare(std::span<const Completion> completions, std::uint64_t allocations,
                    const SwordConfig& cfg);

/// Checks Q_w <= theta_w + mu_w^max for every worker; counts breaches.
class QueueBoundMonitor {
 public:
  /// Returns false (and counts it) when some worker breaches the bound.
  bool check(std::span<const WorkerState> after, std::span<const double> theta);
  [[nodiscard]] std::uint64_t violations() const { return violations_; }
  [[nodiscard]] std::uint64_t checks() const { return checks_; }

 private:
  std::uint64_t violations_ = 0;
  std::uint64_t checks_ = 0;
};

}  // namespace trustsim
