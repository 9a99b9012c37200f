#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/types.hpp"

namespace trustsim {

struct ContextSpec {
  ContextId id = 0;
  double max_gain = 1.0;      // G_max
  std::uint32_t effort = 1;   // e
  Step deadline = 1;          // T_dl, steps after acceptance
};

/// The five task types of the default DRAFT setup, ids 1..5.
std::vector<ContextSpec> default_contexts();

/// V * tau * G_max - Q.
double availability_score(double backlog, double reputation, double max_gain, double v);

struct ContextQueueState {
  std::uint64_t backlog = 0;  // Q_n^(c)
  double reputation = 0.5;    // tau_n^(c), self-estimated
};

struct ContextDecision {
  ContextId context = 0;
  double a = 0.0;
  double a_over_e = 0.0;
  std::uint64_t lambda = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

struct AcceptPlan {
  std::vector<ContextDecision> decisions;  // in ranking order
  std::uint64_t budget_left = 0;

  [[nodiscard]] std::uint64_t accepted(ContextId c) const;
  [[nodiscard]] std::uint64_t rejected(ContextId c) const;
};

/// Admission plan for one step. `states`, `incoming` and `specs` are aligned by index.
AcceptPlan accept_plan(std::span<const ContextQueueState> states,
                       std::span<const std::uint64_t> incoming,
                       std::span<const ContextSpec> specs, std::uint64_t budget, double v);

struct AcceptedTask {
  EventId id = 0;
  AgentId truster = 0;
  ContextId context = 0;
  std::uint32_t effort = 1;
  Step issued_at = 0;
  Step accepted_at = 0;
  Step deadline = 0;
};

/// Accepted work of one trustee, served first-come-first-served across contexts.
class TrusteeQueue {
 public:
  void push(const AcceptedTask& task);

  /// Serves tasks accepted before `now` in FIFO order while their effort fits
  /// the budget; the first task that does not fit blocks the rest.
  std::vector<RatingEvent> serve_fifo(Step now, std::uint64_t budget, double success_prob,
                                      AgentId trustee, Rng& rng);

  /// Drops tasks whose deadline has passed by `now`.
  std::vector<RatingEvent> sweep(Step now, AgentId trustee);

  [[nodiscard]] std::uint64_t backlog(ContextId c) const {
    return c < per_context_.size() ? per_context_[c] : 0;
  }
  [[nodiscard]] std::uint64_t backlog() const { return tasks_.size(); }
  [[nodiscard]] std::uint64_t backlog_effort() const { return effort_; }
  [[nodiscard]] bool empty() const { return tasks_.empty(); }
  [[nodiscard]] const std::deque<AcceptedTask>& tasks() const { return tasks_; }

 private:
  void forget(const AcceptedTask& t);

  std::deque<AcceptedTask> tasks_;
  std::vector<std::uint64_t> per_context_;
  std::uint64_t effort_ = 0;
};

}  // namespace trustsim
