#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/types.hpp"

namespace trustsim {

struct ActConfig {
  double threshold = 0.5;       // Th
  double learn_rate = 0.4;      // rho
  double collusion_bias = 0.05; // delta
  double baseline_mix = 0.6;    // phi
  std::size_t top_m = 10;       // M
  double gain = 5.0;            // G
  double cost = 1.0;            // C
  double reward = 1.0;          // R
  double penalty = -10.0;       // P
  double explore_floor = 0.1;   // Pr_min
  double explore_decay = 0.995;
};

struct Testimony {
  AgentId witness = 0;
  AgentId trustee = 0;
  double value = 0.5;
  Step at = 0;
};

struct WitnessProfile {
  AgentId witness = 0;
  double learn_param = 0.0;       // p
  double credibility = 0.0;       // pi, meaningful once ranked
  bool ranked = false;            // false until the first softmax over a selected set
  std::uint64_t uses = 0;         // T
  double misleading_sum = 0.0;    // numerator of theta

  [[nodiscard]] double theta() const {
    return uses == 0 ? 0.0 : misleading_sum / static_cast<double>(uses);
  }
};

struct SourceWeights {
  double p_direct = 0.0;
  double p_indirect = 0.0;
  double pi_direct = 0.5;
  double pi_indirect = 0.5;
  double baseline_direct = 0.0;
  double baseline_indirect = 0.0;
  double baseline_interaction = 0.0;

  [[nodiscard]] double gamma() const { return pi_direct; }
};

/// G - C on success, -C on failure.
double interaction_reward(bool success, const ActConfig& cfg);

/// Softmax over `learn` written into `out`; stable for large magnitudes.
void softmax(std::span<const double> learn, std::span<double> out);

/// Critic/actor update of the witnesses whose testimonies were used for one
/// interaction. `profiles` and `testimonies` are aligned by index.
void update_witness_credibilities(std::span<WitnessProfile*> profiles,
                                  std::span<const Testimony> testimonies, double reward,
                                  bool outcome, SourceWeights& weights, const ActConfig& cfg);

/// Credibility-weighted testimony mean. `profiles[i]` is null for a witness
/// that is not yet known; such witnesses weigh as much as the least credible
/// known one. Empty input yields no value.
std::optional<double> indirect_trust(std::span<const Testimony> testimonies,
                                     std::span<const WitnessProfile* const> profiles);

/// Updates the direct/indirect source preference after an interaction.
void update_source_preference(SourceWeights& weights, bool direct_decision,
                              bool indirect_decision, bool outcome, const ActConfig& cfg);

double fuse_reputation(double direct, double indirect, double gamma);

struct WitnessSelection {
  std::vector<AgentId> chosen;  // top-M known witnesses by credibility
  bool broadcast = false;       // also ask witnesses not yet known for this trustee
};

/// Top-M by credibility (ties to the lower id), plus an exploration broadcast
/// with probability `explore_prob`.
WitnessSelection select_witnesses(std::span<const WitnessProfile> known, double explore_prob,
                                  std::size_t top_m, Rng& rng);

double decay_explore(double explore_prob, const ActConfig& cfg);

/// Per-truster ACT state: one SourceWeights and witness table per trustee.
class ActLearner {
 public:
  struct TrusteeState {
    SourceWeights weights;
    std::map<AgentId, WitnessProfile> witnesses;
  };

  /// What the learner decided about one candidate trustee this step.
  struct Assessment {
    AgentId trustee = 0;
    double direct = 0.5;
    std::optional<double> indirect;
    double gamma = 1.0;
    double reputation = 0.5;
    std::vector<Testimony> used;
  };

  explicit ActLearner(ActConfig cfg = {}, bool learn_credibility = true);

  /// Witness ids to query about `trustee`. Returns the known top-M and whether
  /// to broadcast to the remaining witnesses.
  WitnessSelection plan_queries(AgentId trustee, Rng& rng);

  /// Combines direct evidence with the responses gathered for `trustee`.
  Assessment assess(AgentId trustee, const BetaEvidence& direct,
                    std::span<const Testimony> responses) const;

  /// Learns from the observed outcome of an interaction with `a.trustee`.
  void learn(const Assessment& a, bool outcome);

  /// Advances the exploration schedule by one step.
  void tick();

  [[nodiscard]] double explore_prob() const { return explore_prob_; }
  [[nodiscard]] const ActConfig& config() const { return cfg_; }
  [[nodiscard]] const TrusteeState* state(AgentId trustee) const;
  [[nodiscard]] double gamma(AgentId trustee) const;

  /// CSV columns: trustee_id, gamma, direct_score, witness_id, p, pi, uses.
  void write_state(std::ostream& out,
                   const std::map<AgentId, BetaEvidence>& direct_evidence) const;

 private:
  ActConfig cfg_;
  bool learn_credibility_;
  double explore_prob_ = 1.0;
  std::map<AgentId, TrusteeState> trustees_;
};

}  // namespace trustsim
