#include "trustsim/testbed/competition.hpp"

#include <random>
#include <stdexcept>

#include "trustsim/act.hpp"

namespace trustsim {

CompetitionLearner::CompetitionLearner(std::size_t systems, CompetitionConfig cfg)
    : cfg_(cfg), p_(systems, 0.0), baseline_(systems, 0.0), pi_(systems, 0.0) {
  if (systems == 0) throw std::invalid_argument("need at least one system");
  softmax(p_, pi_);
}

std::size_t CompetitionLearner::choose(Rng& rng) const {
  double u = uniform01(rng);
  for (std::size_t i = 0; i + 1 < pi_.size(); ++i) {
    if (u < pi_[i]) return i;
    u -= pi_[i];
  }
  return pi_.size() - 1;
}

void competition_update(CompetitionLearner& l, std::size_t system, bool success) {
  const double r = success ? l.cfg_.reward : l.cfg_.penalty;
  l.p_.at(system) += l.cfg_.learn_rate * (r - l.baseline_[system]) * (1.0 - l.pi_[system]);
  l.baseline_[system] = l.cfg_.baseline_mix * l.baseline_[system] + (1.0 - l.cfg_.baseline_mix) * r;
  softmax(l.p_, l.pi_);
}

}  // namespace trustsim
