#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "trustsim/act.hpp"
#include "trustsim/baselines.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/testbed/behavior.hpp"

namespace trustsim {

// Consumer groups of the delegation test-bed.
enum class ConsumerPolicy { static0, static05, static1, m2002, fb2007, actprime, act, nocred, brs2002 };

std::string_view to_string(ConsumerPolicy p);
/// Throws std::invalid_argument for an unknown name.
ConsumerPolicy parse_consumer_policy(std::string_view name);
std::vector<ConsumerPolicy> all_consumer_policies();

struct ActWorldConfig {
  std::size_t providers = 100;
  std::size_t witnesses = 100;
  std::size_t problems = 200;  // interactions per consumer
  std::size_t group_size = 10;
  std::size_t candidates = std::numeric_limits<std::size_t>::max();  // providers ranked per problem
  Step warmup = 10;               // witness-only sampling steps before consumers start
  bool witness_sampling = false;  // witnesses keep sampling one provider per step during the run
  std::string witness_mix = "Hon";
  bool collusive = false;
  double m2002_eps = 0.1;
  double m2002_confidence = 0.95;
  ActConfig act;
  std::vector<ConsumerPolicy> groups = all_consumer_policies();
};

struct GroupResult {
  ConsumerPolicy policy = ConsumerPolicy::act;
  std::optional<double> naul;
  std::optional<double> collusion_power;  // share of delegations to Type III providers
  std::uint64_t interactions = 0;
  double mean_gamma = 0.0;                // average fused gamma of the chosen candidate
};

/// Consumers of several groups share one provider population and one common
/// witness pool; each consumer solves one problem per step.
class ActWorld {
 public:
  ActWorld(const ActWorldConfig& cfg, std::uint64_t seed);

  void advance_step();
  void run();

  [[nodiscard]] Step now() const { return now_; }
  [[nodiscard]] std::vector<GroupResult> results() const;
  [[nodiscard]] const std::vector<Provider>& providers() const { return providers_; }
  /// Learner of consumer `c`, or null when its group does not use ACT.
  [[nodiscard]] const ActLearner* learner(std::size_t c) const;

 private:
  struct Consumer {
    ConsumerPolicy policy;
    std::size_t group;
    Rng rng;
    std::vector<BetaEvidence> direct;
    std::optional<ActLearner> act;
    std::optional<Fb2007Gamma> fb;
    NaulAccumulator naul;
    std::uint64_t ring_tries = 0;
    double gamma_sum = 0.0;
  };

  bool serve(AgentId provider);
  void witness_sampling();
  std::optional<double> testify(AgentId witness, AgentId provider);
  void solve(Consumer& c);

  ActWorldConfig cfg_;
  Step now_ = 0;
  std::vector<Provider> providers_;
  std::vector<Rng> provider_rng_;
  std::vector<WitnessBehavior> witnesses_;
  std::vector<Rng> witness_rng_;
  std::vector<std::vector<BetaEvidence>> witness_evidence_;
  std::vector<std::vector<bool>> witness_knows_;
  std::vector<Consumer> consumers_;
};

}  // namespace trustsim
