#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "trustsim/types.hpp"

namespace trustsim {

/// 1 - normalized mean gain; per interaction gain is G-C on success, -C on failure.
std::optional<double> naul(std::span<const bool> outcomes, double gain, double cost);

/// Streaming form of naul.
class NaulAccumulator {
 public:
  void add(bool success) { (success ? successes_ : failures_) += 1; }
  [[nodiscard]] std::optional<double> value(double gain, double cost) const;
  [[nodiscard]] std::uint64_t count() const { return successes_ + failures_; }
  void merge(const NaulAccumulator& other) {
    successes_ += other.successes_;
    failures_ += other.failures_;
  }

 private:
  std::uint64_t successes_ = 0;
  std::uint64_t failures_ = 0;
};

/// Sum of delegations to colluders over |A_nc| * N_m.
std::optional<double> collusion_power(std::span<const std::uint64_t> tries_per_consumer,
                                      std::uint64_t interactions_each);

/// Jain's index (sum n)^2 / (N * sum n^2); empty when all counts are zero.
std::optional<double> fairness_index(std::span<const std::uint64_t> counts);

/// Streaming form of fairness_index over a fixed group size.
class FairnessAccumulator {
 public:
  explicit FairnessAccumulator(std::size_t group_size) : counts_(group_size, 0) {}
  void add(std::size_t member, std::uint64_t n = 1);
  [[nodiscard]] std::optional<double> value() const;
  [[nodiscard]] const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
};

/// (1/T) * sum U(t); empty for an empty stream.
std::optional<double> time_avg_welfare(std::span<const double> welfare);

/// Streaming form of time_avg_welfare; adds in arrival order like the batch form.
class WelfareAccumulator {
 public:
  void add(double u) {
    sum_ += u;
    ++steps_;
  }
  [[nodiscard]] std::optional<double> value() const;
  [[nodiscard]] std::uint64_t steps() const { return steps_; }
  [[nodiscard]] double sum() const { return sum_; }

 private:
  double sum_ = 0.0;
  std::uint64_t steps_ = 0;
};

struct DelegationFlow {
  struct Connection {
    std::vector<std::size_t> trustees;  // trustees this connection loads
    double flow = 0.0;
  };
  std::vector<Connection> connections;
  std::vector<std::function<double(double)>> latency;  // l_e, one per trustee
  std::vector<double> reputation;                      // tau_e, one per trustee
};

/// Per-trustee loads x_e.
std::vector<double> trustee_loads(const DelegationFlow& flow);

/// sum_e x_e * l_e(x_e) / tau_e; throws std::domain_error when a loaded trustee has tau 0.
double mtg_cost(const DelegationFlow& flow);

struct CompletionCdf {
  std::vector<double> points;  // points[x-1] = share completed within x steps
  double dropped = 0.0;        // share never completed within the horizon
};

/// Completion times of 0 or below count as 1; absent times and times past
/// `horizon` count as dropped.
CompletionCdf completion_cdf(std::span<const std::optional<Step>> times, Step horizon);

}  // namespace trustsim
