#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "trustsim/rng.hpp"
#include "trustsim/types.hpp"

namespace trustsim {

// ---- gamma mixers -----------------------------------------------------------

/// Chernoff bound on the observations needed before direct evidence is trusted.
double m2002_min_observations(double eps, double confidence);

/// min(N_b / N_min, 1); throws std::invalid_argument for eps outside (0,1).
double gamma_m2002(std::uint64_t direct_observations, double eps, double confidence);

/// Epsilon-greedy Q-learning over a fixed set of gamma values.
class Fb2007Gamma {
 public:
  explicit Fb2007Gamma(std::vector<double> gammas = {0.0, 0.5, 1.0}, double learn_rate = 0.1,
                       double epsilon = 0.1);

  /// Picks an arm index; random among ties and on exploration draws.
  std::size_t choose(Rng& rng) const;
  void update(std::size_t arm, double reward);

  [[nodiscard]] double gamma(std::size_t arm) const { return gammas_.at(arm); }
  [[nodiscard]] const std::vector<double>& q() const { return q_; }
  [[nodiscard]] std::size_t arms() const { return gammas_.size(); }

 private:
  std::vector<double> gammas_;
  std::vector<double> q_;
  double learn_rate_;
  double epsilon_;
};

/// Unweighted testimony mean fused with direct evidence at gamma 0.5.
double nocred_fuse(std::span<const double> testimonies, double direct);

// ---- HIT allocation baselines ----------------------------------------------

struct RatedWorker {
  AgentId id = 0;
  double reputation = 0.5;
  std::uint64_t observations = 0;
};

struct HitPlan {
  std::vector<std::uint64_t> counts;  // aligned with the worker span
  bool explored = false;

  [[nodiscard]] std::uint64_t total() const;
};

/// Largest-remainder split of `total` proportional to `weights`; ties go to the
/// larger weight, then the lower index.
std::vector<std::uint64_t> largest_remainder(std::span<const double> weights, std::uint64_t total);

/// Reputation-greedy exploitation. Returns nothing when no worker reaches `th`.
std::optional<HitPlan> greedy_hit_allocate(std::span<const RatedWorker> workers,
                                           std::uint64_t group_size, double th);

/// One HIT each to the least-observed workers (random among equals), cycling
/// when the group outnumbers the workers.
HitPlan explore_low_observation(std::span<const RatedWorker> workers, std::uint64_t group_size,
                                Rng& rng);

/// BRS2002e: explores on a `explore_prob` share of steps or when nobody is trustworthy.
HitPlan brs2002e_allocate(std::span<const RatedWorker> workers, std::uint64_t group_size,
                          double th, double explore_prob, Rng& rng);

enum class KnowledgeGroup { TK, PK, AU, TU };

struct KnowledgeRecord {
  std::uint64_t interactions = 0;
  bool heard_of = false;  // some testimony about the worker exists

  [[nodiscard]] double degree(std::uint64_t full = 20) const;
  [[nodiscard]] KnowledgeGroup group(std::uint64_t full = 20) const;
};

struct M2009eConfig {
  double qt = 0.6;
  std::uint64_t full_knowledge = 20;
  std::uint64_t quorum = 5;  // trustworthy TK workers needed before exploiting
};

/// Exploits the trustworthy fully-known workers once a quorum exists, else
/// spends the group on raising knowledge of the others (PK, then AU, then TU).
HitPlan m2009e_allocate(std::span<const RatedWorker> workers,
                        std::span<const KnowledgeRecord> knowledge, std::uint64_t group_size,
                        const M2009eConfig& cfg, Rng& rng);

struct LongShortEntry {
  double lt = 0.5;
  double st = 0.5;
  std::uint64_t interactions = 0;
};

struct H2010eConfig {
  double lt_rate = 0.01;
  double st_rate = 0.3;
  double explore_gain = 5.0;
  double th = 0.6;
};

/// Long/short term trust of one requester.
class LongShortTrust {
 public:
  explicit LongShortTrust(H2010eConfig cfg = {}) : cfg_(cfg) {}

  /// Seeds a worker's trust from hearsay before any interaction.
  void seed(AgentId worker, double prior);
  void observe(AgentId worker, bool success);

  [[nodiscard]] const LongShortEntry* find(AgentId worker) const;
  [[nodiscard]] std::vector<AgentId> candidates() const;
  [[nodiscard]] double change_estimate() const;  // C(t) over candidates
  [[nodiscard]] double explore_extent() const;   // E(t)
  /// RP over the candidates, aligned with candidates().
  [[nodiscard]] std::vector<double> selection_probs() const;
  [[nodiscard]] const H2010eConfig& config() const { return cfg_; }

 private:
  H2010eConfig cfg_;
  std::unordered_map<AgentId, LongShortEntry> entries_;
};

/// Returns counts aligned with `workers`.
HitPlan h2010e_allocate(const LongShortTrust& lst, std::span<const RatedWorker> workers,
                        std::uint64_t group_size, Rng& rng);

struct WorkerPull {
  AgentId worker = 0;
  std::uint32_t capacity = 0;
};

/// First-come-first-served claiming; counts aligned with `pulls`.
std::vector<std::uint64_t> amt_fcfs_match(std::uint64_t open_hits, std::span<const WorkerPull> pulls);

}  // namespace trustsim
