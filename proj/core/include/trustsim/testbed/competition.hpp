#pragma once

#include <cstddef>
#include <vector>

#include "trustsim/rng.hpp"

namespace trustsim {

struct CompetitionConfig {
  double reward = 1.0;
  double penalty = -1.0;
  double learn_rate = 0.4;
  double baseline_mix = 0.6;
};

/// An agent's learned preference over the competing systems.
class CompetitionLearner {
 public:
  explicit CompetitionLearner(std::size_t systems = 5, CompetitionConfig cfg = {});

  /// Samples a system index from the current preference.
  std::size_t choose(Rng& rng) const;

  [[nodiscard]] const std::vector<double>& preference() const { return pi_; }
  [[nodiscard]] const std::vector<double>& learn_params() const { return p_; }
  [[nodiscard]] const CompetitionConfig& config() const { return cfg_; }

  friend void competition_update(CompetitionLearner& learner, std::size_t system, bool success);

 private:
  CompetitionConfig cfg_;
  std::vector<double> p_;
  std::vector<double> baseline_;
  std::vector<double> pi_;
};

void competition_update(CompetitionLearner& learner, std::size_t system, bool success);

}  // namespace trustsim
