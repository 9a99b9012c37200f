#include "trustsim/testbed/rdp_world.hpp"

#include <cmath>
#include <numeric>

#include "trustsim/testbed/task_queue.hpp"

namespace trustsim {

RdpWorld::RdpWorld(const RdpConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      ledger_(ReputationLedger::Options{cfg.aggregation, {}, 0}),
      honest_(cfg.trustees, false),
      queues_(cfg.trustees),
      known_(cfg.trusters),
      knows_(cfg.trusters, std::vector<bool>(cfg.trustees, false)) {
  RngStreams streams(seed);
  const auto n_hon = static_cast<std::size_t>(std::llround(cfg.hon_share * cfg.trustees));
  for (std::size_t j = 0; j < cfg.trustees; ++j) {
    honest_[j] = j < n_hon;
    trustee_ids_.push_back(static_cast<AgentId>(j));
    trustee_rng_.push_back(streams.make(Stream::trustee, j));
  }
  for (std::size_t i = 0; i < cfg.trusters; ++i) truster_rng_.push_back(streams.make(Stream::truster, i));
}

AgentId RdpWorld::pick_trustee(AgentId truster) {
  Rng& rng = truster_rng_[truster];
  const auto& known = known_[truster];
  if (known.empty() || bernoulli(rng, cfg_.explore))
    return static_cast<AgentId>(uniform_index(rng, cfg_.trustees));
  AgentId best = known.front();
  double best_score = -1.0;
  for (AgentId j : known) {
    const double s = cfg_.shared_view ? ledger_.reputation_of(j, 1) : brs_score(ledger_.local(j, 1, truster));
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

void RdpWorld::advance_step() {
  ++now_;
  RdpStepStats st;
  // (1)-(2) every truster delegates one task
  for (AgentId i = 0; i < cfg_.trusters; ++i) {
    const AgentId j = pick_trustee(i);
    if (!knows_[i][j]) {
      knows_[i][j] = true;
      known_[i].push_back(j);
    }
    AcceptedTask t;
    t.id = next_id_++;
    t.truster = i;
    t.context = 1;
    t.issued_at = now_;
    t.accepted_at = now_;
    t.deadline = now_ + cfg_.deadline;
    queues_[j].push(t);
    ++st.issued;
  }
  // (3)-(4) trustees serve work queued before this step; trusters rate it
  for (AgentId j = 0; j < cfg_.trustees; ++j) {
    const double p = honest_[j] ? cfg_.hon_success : cfg_.mal_success;
    for (const RatingEvent& ev : queues_[j].serve_fifo(now_, cfg_.capacity, p, j, trustee_rng_[j])) {
      if (ledger_.record_outcome(ev) == Outcome::positive) ++st.on_time_success;
      ++st.completed;
    }
  }
  // (6) optional clean sweep of work that can no longer be on time
  if (cfg_.clean_sweep) {
    for (const RatingEvent& ev : clean_sweep(queues_, trustee_ids_, now_ + 1)) {
      ledger_.record_outcome(ev);
      ++st.swept;
    }
  }
  // (7) metrics
  std::vector<double> rep(cfg_.trustees);
  for (AgentId j = 0; j < cfg_.trustees; ++j) rep[j] = ledger_.reputation_of(j, 1);
  reputation_.push_back(std::move(rep));
  stats_.push_back(st);
}

void RdpWorld::run() {
  while (now_ < cfg_.steps) advance_step();
}

std::uint64_t zero_crossings(const std::vector<double>& series) {
  if (series.empty()) return 0;
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  int prev = 0;
  std::uint64_t crossings = 0;
  for (double v : series) {
    const double d = v - mean;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev != 0 && sign != prev) ++crossings;
    prev = sign;
  }
  return crossings;
}

}  // namespace trustsim
