#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "trustsim/baselines.hpp"
#include "trustsim/draft.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/sword.hpp"
#include "trustsim/testbed/behavior.hpp"
#include "trustsim/testbed/competition.hpp"

namespace trustsim {

enum class CrowdPolicy { amt, brs2002e, m2009e, h2010e, sword };

std::string_view to_string(CrowdPolicy p);
/// Throws std::invalid_argument for an unknown name.
CrowdPolicy parse_crowd_policy(std::string_view name);
std::vector<CrowdPolicy> all_crowd_policies();

struct CrowdConfig {
  std::size_t workers = 1000;
  std::size_t requesters = 50;
  std::uint32_t group_size = 40;  // N_r
  Step deadline = 14;             // T_dl, steps after proposal
  int hon_x = 50;
  std::size_t witnesses = 50;
  Step warmup = 200;
  double explore = 0.1;  // BRS2002e exploration share
  SwordConfig sword;
  M2009eConfig m2009e;
  H2010eConfig h2010e;
  bool clean_sweep = true;
  bool shared_reputation = true;  // requesters rank workers by the system-wide BRS2012 record
  Step steps = 1000;
  /// One entry runs a single system; several entries run them side by side
  /// with every agent learning which one to use.
  std::vector<CrowdPolicy> systems = {CrowdPolicy::sword};
  CompetitionConfig competition;
};

struct HitGroup {
  AgentId requester = 0;
  std::size_t system = 0;
  Step proposed = 0;
  Step deadline = 0;
  std::uint32_t size = 0;
  std::uint32_t unassigned = 0;
  std::uint32_t completed = 0;
  std::uint32_t good = 0;  // on time and of acceptable quality
  std::uint32_t swept = 0;
  bool resolved = false;
  std::optional<Step> completion_time;  // set only when every HIT was completed
};

struct CrowdSystemReport {
  CrowdPolicy policy = CrowdPolicy::sword;
  std::optional<double> welfare;       // time-averaged U
  std::optional<double> fairness_hon;  // Jain index of HIT counts over Hon workers
  std::optional<double> quality;       // share of completed HITs that earned g_max
  std::uint64_t groups_proposed = 0;
  std::uint64_t groups_completed = 0;
  std::uint64_t groups_expired = 0;
  std::uint64_t hits_completed = 0;
  std::uint64_t hits_swept = 0;
  std::optional<double> mean_completion_time;
  std::vector<std::optional<Step>> completion_times;  // one per resolved group
  std::vector<std::uint64_t> hits_per_worker;
  std::vector<double> welfare_series;
  std::uint64_t lemma_checks = 0;
  std::uint64_t lemma_violations = 0;
};

class CrowdWorld {
 public:
  CrowdWorld(const CrowdConfig& cfg, std::uint64_t seed);

  void advance_step();
  void run();

  [[nodiscard]] Step now() const { return now_; }
  [[nodiscard]] const CrowdConfig& config() const { return cfg_; }
  [[nodiscard]] CrowdSystemReport report(std::size_t system) const;
  [[nodiscard]] WorkerType worker_type(AgentId w) const { return workers_.at(w).type; }
  [[nodiscard]] const std::vector<HitGroup>& groups() const { return groups_; }
  [[nodiscard]] std::uint64_t backlog(std::size_t system, AgentId w) const;

  /// Share of steps each worker spent in each system (competition mode).
  [[nodiscard]] const std::vector<std::vector<std::uint64_t>>& worker_choices() const {
    return worker_choice_counts_;
  }
  [[nodiscard]] const std::vector<double>& worker_preference(AgentId w) const;
  [[nodiscard]] const std::vector<double>& requester_preference(AgentId r) const;

 private:
  struct Worker {
    WorkerType type;
    double success;
    std::uint32_t capacity;
    Rng rng;
    CompetitionLearner learner;
    std::size_t chosen = 0;
  };
  struct Requester {
    Rng rng;
    CompetitionLearner learner;
    std::optional<std::size_t> open_group;
  };
  struct System {
    CrowdPolicy policy;
    std::vector<TrusteeQueue> queues;
    ReputationLedger ledger;
    std::vector<double> peak;
    std::deque<std::size_t> broker;  // groups holding unassigned HITs, oldest first
    std::vector<LongShortTrust> lst;  // per requester, H2010e only
    Rng rng;
    std::vector<double> welfare;
    std::vector<std::uint64_t> hits_per_worker;
    QueueBoundMonitor monitor;
    std::uint64_t groups_proposed = 0;
    std::uint64_t hits_completed = 0;
    std::uint64_t hits_good = 0;
    std::uint64_t hits_swept = 0;
    double gain = 0.0;
    std::uint64_t allocated = 0;
  };

  void warm_up_witnesses(Rng& rng);
  void propose(AgentId r, std::size_t s);
  void assign(System& sys, std::size_t group, AgentId worker, std::uint64_t count);
  void requester_allocate(System& sys, std::size_t group);
  /// Returns the target queue lengths used for this step's decision.
  std::vector<double> broker_allocate(System& sys);
  void amt_allocate(System& sys, std::size_t s);
  void observe(System& sys, const RatingEvent& ev);
  [[nodiscard]] std::vector<RatedWorker> local_view(const System& sys, AgentId r) const;

  CrowdConfig cfg_;
  Step now_ = 0;
  EventId next_task_ = 1;
  std::vector<std::uint32_t> task_group_;  // task id -> group index
  std::vector<Worker> workers_;
  std::vector<Requester> requesters_;
  std::vector<System> systems_;
  std::vector<HitGroup> groups_;
  std::vector<double> testimony_mean_;  // per worker; negative when no witness knows it
  std::vector<std::vector<std::uint64_t>> worker_choice_counts_;
};

}  // namespace trustsim
