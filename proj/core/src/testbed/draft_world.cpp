#include "trustsim/testbed/draft_world.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "trustsim/metrics.hpp"
#include "trustsim/testbed/task_queue.hpp"

namespace trustsim {

std::string_view to_string(Acceptor a) { return a == Acceptor::draft ? "draft" : "trd"; }

Acceptor parse_acceptor(std::string_view name) {
  if (name == "draft") return Acceptor::draft;
  if (name == "trd") return Acceptor::trd;
  throw std::invalid_argument("unknown acceptor '" + std::string(name) + "'");
}

std::uint32_t effort_budget(WorkerType t) {
  switch (t) {
    case WorkerType::hon: return 25;
    case WorkerType::mh: return 30;
    case WorkerType::mm: return 35;
    case WorkerType::mal: return 40;
  }
  return 25;
}

DraftWorld::DraftWorld(const DraftConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      ledger_(ReputationLedger::Options{Aggregation::mean_of_locals, {}, 0}),
      types_(honx_population(cfg.trustees, cfg.hon_x)),
      queues_(cfg.trustees),
      pending_(cfg.trusters),
      direct_(cfg.trusters, std::vector<BetaEvidence>(cfg.trustees * cfg.contexts.size())),
      known_(cfg.trusters),
      knows_(cfg.trusters, std::vector<bool>(cfg.trustees, false)),
      tasks_per_trustee_(cfg.trustees, 0),
      effort_per_trustee_(cfg.trustees, 0) {
  if (cfg.contexts.empty()) throw std::invalid_argument("need at least one task context");
  if (cfg.v <= 0.0) throw std::invalid_argument("V must be positive");
  RngStreams streams(seed);
  for (std::size_t j = 0; j < cfg.trustees; ++j) {
    trustee_ids_.push_back(static_cast<AgentId>(j));
    trustee_rng_.push_back(streams.make(Stream::trustee, j));
  }
  for (std::size_t i = 0; i < cfg.trusters; ++i) truster_rng_.push_back(streams.make(Stream::truster, i));
}

AgentId DraftWorld::pick_trustee(AgentId truster, const Request& req) {
  Rng& rng = truster_rng_[truster];
  const auto refused = [&](AgentId j) {
    for (AgentId r : req.refused_by)
      if (r == j) return true;
    return false;
  };
  if (!bernoulli(rng, cfg_.explore)) {
    const std::size_t nc = cfg_.contexts.size();
    double best = -1.0;
    std::optional<AgentId> pick;
    for (AgentId j : known_[truster]) {
      if (refused(j)) continue;
      const double s = brs_score(direct_[truster][j * nc + req.slot]);
      if (s > cfg_.rep_floor && s > best) {
        best = s;
        pick = j;
      }
    }
    if (pick) return *pick;
  }
  if (req.refused_by.size() < cfg_.trustees) {
    while (true) {
      const auto j = static_cast<AgentId>(uniform_index(rng, cfg_.trustees));
      if (!refused(j)) return j;
    }
  }
  return static_cast<AgentId>(uniform_index(rng, cfg_.trustees));
}

void DraftWorld::record(const RatingEvent& ev) {
  const Outcome o = ledger_.record_outcome(ev);
  const std::size_t nc = cfg_.contexts.size();
  std::size_t slot = 0;
  while (slot < nc && cfg_.contexts[slot].id != ev.context) ++slot;
  BetaEvidence& d = direct_[ev.truster][ev.trustee * nc + slot];
  (o == Outcome::positive ? d.positives : d.negatives) += 1;
}

void DraftWorld::advance_step() {
  ++now_;
  const std::size_t nc = cfg_.contexts.size();
  // (1) every truster proposes its pending task or a new one, cycling through the types
  std::vector<std::vector<std::vector<AgentId>>> inbox(cfg_.trustees,
                                                       std::vector<std::vector<AgentId>>(nc));
  for (AgentId i = 0; i < cfg_.trusters; ++i) {
    auto& req = pending_[i];
    if (!req) {
      Request r;
      r.id = next_id_++;
      r.slot = static_cast<std::size_t>((i + static_cast<std::uint64_t>(now_)) % nc);
      r.context = cfg_.contexts[r.slot].id;
      r.issued_at = now_;
      issued_of_.push_back(now_);
      req = std::move(r);
    }
    if (req->refused_by.size() >= cfg_.trustees) req->refused_by.clear();
    const AgentId j = pick_trustee(i, *req);
    if (!knows_[i][j]) {
      knows_[i][j] = true;
      known_[i].push_back(j);
    }
    inbox[j][req->slot].push_back(i);
    ++requests_;
  }
  // (2) trustees decide how many of each type to accept
  if (cfg_.acceptor == Acceptor::draft) plans_.assign(cfg_.trustees, AcceptPlan{});
  for (AgentId j = 0; j < cfg_.trustees; ++j) {
    std::vector<std::uint64_t> take(nc);
    for (std::size_t s = 0; s < nc; ++s) take[s] = inbox[j][s].size();
    if (cfg_.acceptor == Acceptor::draft) {
      std::vector<ContextQueueState> states(nc);
      for (std::size_t s = 0; s < nc; ++s) {
        const ContextId c = cfg_.contexts[s].id;
        states[s] = ContextQueueState{queues_[j].backlog(c), ledger_.reputation_of(j, c)};
      }
      AcceptPlan plan = accept_plan(states, take, cfg_.contexts, effort_budget(types_[j]), cfg_.v);
      for (std::size_t s = 0; s < nc; ++s) take[s] = plan.accepted(cfg_.contexts[s].id);
      plans_[j] = std::move(plan);
    }
    for (std::size_t s = 0; s < nc; ++s) {
      const ContextSpec& spec = cfg_.contexts[s];
      const auto& asked = inbox[j][s];
      for (std::size_t k = 0; k < asked.size(); ++k) {
        auto& req = pending_[asked[k]];
        if (k >= take[s]) {
          req->refused_by.push_back(j);
          ++rejected_;
          continue;
        }
        AcceptedTask t;
        t.id = req->id;
        t.truster = asked[k];
        t.context = spec.id;
        t.effort = spec.effort;
        t.issued_at = req->issued_at;
        t.accepted_at = now_;
        t.deadline = now_ + spec.deadline;
        queues_[j].push(t);
        tasks_per_trustee_[j] += 1;
        effort_per_trustee_[j] += spec.effort;
        ++accepted_;
        req.reset();
      }
    }
  }
  // (3)-(4) trustees serve accepted work first come first served; trusters rate it
  double welfare = 0.0;
  for (AgentId j = 0; j < cfg_.trustees; ++j) {
    for (const RatingEvent& ev : queues_[j].serve_fifo(now_, effort_budget(types_[j]),
                                                       success_of(types_[j]), j, trustee_rng_[j])) {
      record(ev);
      ++completed_;
      const bool on_time = *ev.completed_at <= ev.deadline;
      if (on_time) ++on_time_;
      if (on_time && ev.quality_ok) {
        ++good_;
        for (const ContextSpec& spec : cfg_.contexts)
          if (spec.id == ev.context) welfare += spec.max_gain;
      }
      const auto wait = static_cast<std::size_t>(*ev.completed_at - issued_of_[ev.id - 1]);
      if (wait_hist_.size() <= wait) wait_hist_.resize(wait + 1, 0);
      wait_hist_[wait] += 1;
      wait_sum_ += static_cast<double>(wait);
    }
  }
  // (6) optional clean sweep
  if (cfg_.clean_sweep) {
    for (const RatingEvent& ev : clean_sweep(queues_, trustee_ids_, now_ + 1)) {
      record(ev);
      ++swept_;
    }
  }
  // (7) metrics
  welfare_.push_back(welfare);
  double queued = 0.0;
  std::vector<double> rep(cfg_.trustees);
  for (AgentId j = 0; j < cfg_.trustees; ++j) {
    queued += static_cast<double>(queues_[j].backlog());
    double r = 0.0;
    for (const ContextSpec& spec : cfg_.contexts) r += ledger_.reputation_of(j, spec.id);
    rep[j] = r / static_cast<double>(nc);
  }
  backlog_mean_.push_back(queued / static_cast<double>(std::max<std::size_t>(cfg_.trustees, 1)));
  reputation_.push_back(std::move(rep));
}

void DraftWorld::run() {
  while (now_ < cfg_.steps) advance_step();
}

DraftReport DraftWorld::report() const {
  DraftReport r;
  r.acceptor = cfg_.acceptor;
  r.v = cfg_.v;
  r.welfare = time_avg_welfare(welfare_);
  std::vector<std::uint64_t> hon;
  std::vector<std::uint64_t> hon_effort;
  for (std::size_t j = 0; j < cfg_.trustees; ++j) {
    if (types_[j] != WorkerType::hon) continue;
    hon.push_back(tasks_per_trustee_[j]);
    hon_effort.push_back(effort_per_trustee_[j]);
  }
  r.fairness_hon = fairness_index(hon);
  r.fairness_hon_effort = fairness_index(hon_effort);
  if (completed_ > 0) {
    const auto n = static_cast<double>(completed_);
    r.quality = static_cast<double>(good_) / n;
    r.on_time = static_cast<double>(on_time_) / n;
    r.mean_wait = wait_sum_ / n;
  }
  if (!backlog_mean_.empty())
    r.mean_backlog = std::accumulate(backlog_mean_.begin(), backlog_mean_.end(), 0.0) /
                     static_cast<double>(backlog_mean_.size());
  r.requests = requests_;
  r.accepted = accepted_;
  r.rejected = rejected_;
  r.completed = completed_;
  r.completed_on_time = on_time_;
  r.swept = swept_;
  r.tasks_per_trustee = tasks_per_trustee_;
  r.wait_histogram = wait_hist_;
  r.welfare_series = welfare_;
  return r;
}

}  // namespace trustsim
