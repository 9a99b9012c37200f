#include "trustsim/testbed/crowd_world.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace trustsim {

namespace {

constexpr std::pair<CrowdPolicy, std::string_view> kCrowdNames[] = {
    {CrowdPolicy::amt, "amt"},       {CrowdPolicy::brs2002e, "brs2002e"},
    {CrowdPolicy::m2009e, "m2009e"}, {CrowdPolicy::h2010e, "h2010e"},
    {CrowdPolicy::sword, "sword"},
};

std::uint32_t capacity_of(WorkerType t) {
  switch (t) {
    case WorkerType::hon: return 5;
    case WorkerType::mh: return 10;
    case WorkerType::mm: return 10;
    case WorkerType::mal: return 20;
  }
  return 1;
}

bool requester_side(CrowdPolicy p) {
  return p == CrowdPolicy::brs2002e || p == CrowdPolicy::m2009e || p == CrowdPolicy::h2010e;
}

}  // namespace

std::string_view to_string(CrowdPolicy p) {
  for (const auto& [k, name] : kCrowdNames)
    if (k == p) return name;
  return "sword";
}

CrowdPolicy parse_crowd_policy(std::string_view name) {
  for (const auto& [k, n] : kCrowdNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown HIT allocation policy '" + std::string(name) + "'");
}

std::vector<CrowdPolicy> all_crowd_policies() {
  std::vector<CrowdPolicy> out;
  for (const auto& [k, name] : kCrowdNames) out.push_back(k);
  return out;
}

CrowdWorld::CrowdWorld(const CrowdConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  if (cfg.systems.empty()) throw std::invalid_argument("need at least one system");
  if (cfg.group_size == 0) throw std::invalid_argument("HIT groups must not be empty");
  const std::size_t n_sys = cfg.systems.size();
  RngStreams streams(seed);
  const auto types = honx_population(cfg.workers, cfg.hon_x);
  for (std::size_t w = 0; w < cfg.workers; ++w) {
    workers_.push_back(Worker{types[w], success_of(types[w]), capacity_of(types[w]),
                              streams.make(Stream::trustee, w),
                              CompetitionLearner(n_sys, cfg.competition), 0});
  }
  for (std::size_t r = 0; r < cfg.requesters; ++r)
    requesters_.push_back(Requester{streams.make(Stream::truster, r),
                                    CompetitionLearner(n_sys, cfg.competition), std::nullopt});
  Rng witness_rng = streams.make(Stream::witness);
  warm_up_witnesses(witness_rng);
  for (std::size_t s = 0; s < n_sys; ++s) {
    System sys{cfg.systems[s],
               std::vector<TrusteeQueue>(cfg.workers),
               ReputationLedger(ReputationLedger::Options{Aggregation::pooled, {}, 0}),
               std::vector<double>(cfg.workers, 0.5),
               {},
               {},
               streams.make(Stream::broker, s),
               {},
               std::vector<std::uint64_t>(cfg.workers, 0),
               {}};
    if (sys.policy == CrowdPolicy::h2010e) {
      sys.lst.assign(cfg.shared_reputation ? 1 : cfg.requesters, LongShortTrust(cfg.h2010e));
      for (auto& l : sys.lst)
        for (std::size_t w = 0; w < cfg.workers; ++w)
          if (testimony_mean_[w] >= 0.0) l.seed(static_cast<AgentId>(w), testimony_mean_[w]);
    }
    systems_.push_back(std::move(sys));
  }
  worker_choice_counts_.assign(cfg.workers, std::vector<std::uint64_t>(n_sys, 0));
}

void CrowdWorld::warm_up_witnesses(Rng& rng) {
  std::vector<std::vector<BetaEvidence>> ev(cfg_.witnesses, std::vector<BetaEvidence>(cfg_.workers));
  for (Step t = 0; t < cfg_.warmup; ++t) {
    for (auto& mine : ev) {
      const std::size_t w = uniform_index(rng, cfg_.workers);
      (bernoulli(rng, workers_[w].success) ? mine[w].positives : mine[w].negatives) += 1;
    }
  }
  testimony_mean_.assign(cfg_.workers, -1.0);
  for (std::size_t w = 0; w < cfg_.workers; ++w) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& mine : ev) {
      if (mine[w].total() == 0) continue;
      sum += brs_score(mine[w]);
      ++n;
    }
    if (n > 0) testimony_mean_[w] = sum / static_cast<double>(n);
  }
}

std::uint64_t CrowdWorld::backlog(std::size_t system, AgentId w) const {
  return systems_.at(system).queues.at(w).backlog();
}

const std::vector<double>& CrowdWorld::worker_preference(AgentId w) const {
  return workers_.at(w).learner.preference();
}

const std::vector<double>& CrowdWorld::requester_preference(AgentId r) const {
  return requesters_.at(r).learner.preference();
}

void CrowdWorld::assign(System& sys, std::size_t group, AgentId worker, std::uint64_t count) {
  HitGroup& g = groups_[group];
  for (std::uint64_t k = 0; k < count; ++k) {
    AcceptedTask t;
    t.id = next_task_++;
    t.truster = g.requester;
    t.context = 1;
    t.issued_at = g.proposed;
    t.accepted_at = now_;
    t.deadline = g.deadline;
    task_group_.push_back(static_cast<std::uint32_t>(group));
    sys.queues[worker].push(t);
  }
  g.unassigned -= static_cast<std::uint32_t>(count);
  sys.hits_per_worker[worker] += count;
  sys.allocated += count;
}

std::vector<RatedWorker> CrowdWorld::local_view(const System& sys, AgentId r) const {
  std::vector<RatedWorker> view(cfg_.workers);
  for (std::size_t w = 0; w < cfg_.workers; ++w) {
    const auto id = static_cast<AgentId>(w);
    const BetaEvidence ev =
        cfg_.shared_reputation ? sys.ledger.pooled(id, 1) : sys.ledger.local(id, 1, r);
    view[w] = RatedWorker{id, brs_score(ev), ev.total()};
  }
  return view;
}

void CrowdWorld::requester_allocate(System& sys, std::size_t group) {
  HitGroup& g = groups_[group];
  Rng& rng = requesters_[g.requester].rng;
  const auto view = local_view(sys, g.requester);
  HitPlan plan;
  switch (sys.policy) {
    case CrowdPolicy::brs2002e:
      plan = brs2002e_allocate(view, g.size, cfg_.sword.rep_floor, cfg_.explore, rng);
      break;
    case CrowdPolicy::m2009e: {
      std::vector<KnowledgeRecord> knowledge(cfg_.workers);
      for (std::size_t w = 0; w < cfg_.workers; ++w)
        knowledge[w] = KnowledgeRecord{view[w].observations, testimony_mean_[w] >= 0.0};
      plan = m2009e_allocate(view, knowledge, g.size, cfg_.m2009e, rng);
      break;
    }
    case CrowdPolicy::h2010e:
      plan = h2010e_allocate(sys.lst[cfg_.shared_reputation ? 0 : g.requester], view, g.size, rng);
      break;
    default:
      throw std::logic_error("requester_allocate called for a broker policy");
  }
  for (std::size_t w = 0; w < plan.counts.size(); ++w)
    if (plan.counts[w] > 0) assign(sys, group, static_cast<AgentId>(w), plan.counts[w]);
}

std::vector<double> CrowdWorld::broker_allocate(System& sys) {
  std::uint64_t incoming = 0;
  for (std::size_t gi : sys.broker) incoming += groups_[gi].unassigned;
  std::vector<WorkerState> states(cfg_.workers);
  std::vector<double> theta(cfg_.workers);
  for (std::size_t w = 0; w < cfg_.workers; ++w) {
    const auto id = static_cast<AgentId>(w);
    states[w] = WorkerState{id, sys.ledger.reputation_of(id, 1), sys.peak[w], workers_[w].capacity,
                            sys.queues[w].backlog()};
    theta[w] = target_queue(states[w], cfg_.sword);
  }
  const AllocationPlan plan = allocate(states, incoming, cfg_.sword, sys.rng);
  auto it = sys.broker.begin();
  for (std::size_t w = 0; w < cfg_.workers; ++w) {
    std::uint64_t need = plan.counts[w];
    while (need > 0 && it != sys.broker.end()) {
      const std::uint64_t take = std::min<std::uint64_t>(need, groups_[*it].unassigned);
      assign(sys, *it, static_cast<AgentId>(w), take);
      need -= take;
      if (groups_[*it].unassigned == 0) ++it;
    }
  }
  return theta;
}

void CrowdWorld::amt_allocate(System& sys, std::size_t s) {
  std::vector<AgentId> order;
  for (std::size_t w = 0; w < cfg_.workers; ++w)
    if (workers_[w].chosen == s) order.push_back(static_cast<AgentId>(w));
  std::shuffle(order.begin(), order.end(), sys.rng);
  std::uint64_t open = 0;
  for (std::size_t gi : sys.broker) open += groups_[gi].unassigned;
  std::vector<WorkerPull> pulls;
  pulls.reserve(order.size());
  for (AgentId w : order) {
    const std::uint64_t q = sys.queues[w].backlog();
    const std::uint32_t cap = workers_[w].capacity;
    pulls.push_back(WorkerPull{w, q >= cap ? 0u : static_cast<std::uint32_t>(cap - q)});
  }
  const auto claims = amt_fcfs_match(open, pulls);
  auto it = sys.broker.begin();
  for (std::size_t k = 0; k < pulls.size(); ++k) {
    std::uint64_t need = claims[k];
    while (need > 0 && it != sys.broker.end()) {
      const std::uint64_t take = std::min<std::uint64_t>(need, groups_[*it].unassigned);
      assign(sys, *it, pulls[k].worker, take);
      need -= take;
      if (groups_[*it].unassigned == 0) ++it;
    }
  }
}

void CrowdWorld::observe(System& sys, const RatingEvent& ev) {
  const Outcome o = sys.ledger.record_outcome(ev);
  if (sys.policy == CrowdPolicy::h2010e)
    sys.lst[cfg_.shared_reputation ? 0 : ev.truster].observe(ev.trustee, o == Outcome::positive);
}

void CrowdWorld::propose(AgentId r, std::size_t s) {
  HitGroup g;
  g.requester = r;
  g.system = s;
  g.proposed = now_;
  g.deadline = now_ + cfg_.deadline;
  g.size = cfg_.group_size;
  g.unassigned = cfg_.group_size;
  groups_.push_back(g);
  const std::size_t gi = groups_.size() - 1;
  requesters_[r].open_group = gi;
  System& sys = systems_[s];
  sys.groups_proposed += 1;
  if (requester_side(sys.policy)) {
    requester_allocate(sys, gi);
  } else {
    sys.broker.push_back(gi);
  }
}

void CrowdWorld::advance_step() {
  ++now_;
  const std::size_t n_sys = systems_.size();
  for (System& sys : systems_) {
    sys.gain = 0.0;
    sys.allocated = 0;
  }
  // (0) each agent picks where to spend this step
  for (std::size_t w = 0; w < workers_.size(); ++w) {
    Worker& wk = workers_[w];
    wk.chosen = n_sys == 1 ? 0 : wk.learner.choose(wk.rng);
    worker_choice_counts_[w][wk.chosen] += 1;
  }
  // (1) requesters with no open group propose a new one
  for (std::size_t r = 0; r < requesters_.size(); ++r) {
    Requester& rq = requesters_[r];
    if (rq.open_group) continue;
    const std::size_t s = n_sys == 1 ? 0 : rq.learner.choose(rq.rng);
    propose(static_cast<AgentId>(r), s);
  }
  // (2) broker-side allocation
  std::vector<std::vector<double>> theta(n_sys);
  for (std::size_t s = 0; s < n_sys; ++s) {
    System& sys = systems_[s];
    if (sys.policy == CrowdPolicy::sword) {
      theta[s] = broker_allocate(sys);
    } else if (sys.policy == CrowdPolicy::amt) {
      amt_allocate(sys, s);
    }
  }
  // (3)-(4) workers serve their chosen system; requesters rate the results
  std::vector<std::uint32_t> served(workers_.size(), 0);
  std::vector<std::uint32_t> paid(workers_.size(), 0);
  for (std::size_t w = 0; w < workers_.size(); ++w) {
    Worker& wk = workers_[w];
    System& sys = systems_[wk.chosen];
    for (const RatingEvent& ev : sys.queues[w].serve_fifo(now_, wk.capacity, wk.success,
                                                          static_cast<AgentId>(w), wk.rng)) {
      HitGroup& g = groups_[task_group_[ev.id - 1]];
      const bool on_time = *ev.completed_at <= ev.deadline;
      const bool good = on_time && ev.quality_ok;
      g.completed += 1;
      sys.hits_completed += 1;
      if (good) {
        g.good += 1;
        sys.hits_good += 1;
        sys.gain += cfg_.sword.max_gain;
        paid[w] += 1;
      }
      served[w] += 1;
      observe(sys, ev);
    }
  }
  // (6) clean sweep of work that can no longer be on time
  for (System& sys : systems_) {
    if (cfg_.clean_sweep) {
      for (std::size_t w = 0; w < workers_.size(); ++w) {
        for (const RatingEvent& ev : sys.queues[w].sweep(now_ + 1, static_cast<AgentId>(w))) {
          groups_[task_group_[ev.id - 1]].swept += 1;
          sys.hits_swept += 1;
          observe(sys, ev);
        }
      }
    }
    // Unassigned HITs past their deadline can no longer be useful.
    for (auto it = sys.broker.begin(); it != sys.broker.end();) {
      HitGroup& g = groups_[*it];
      if (g.unassigned > 0 && g.deadline < now_ + 1) {
        g.swept += g.unassigned;
        sys.hits_swept += g.unassigned;
        g.unassigned = 0;
      }
      it = g.unassigned == 0 ? sys.broker.erase(it) : std::next(it);
    }
  }
  // (5) close finished groups; requesters learn from their outcome
  for (std::size_t r = 0; r < requesters_.size(); ++r) {
    Requester& rq = requesters_[r];
    if (!rq.open_group) continue;
    HitGroup& g = groups_[*rq.open_group];
    if (g.completed + g.swept < g.size) continue;
    g.resolved = true;
    if (g.swept == 0) g.completion_time = now_ - g.proposed;
    rq.open_group.reset();
    if (n_sys > 1) {
      const double net = g.good * cfg_.sword.max_gain - cfg_.sword.task_cost * g.size;
      competition_update(rq.learner, g.system, net > 0.0);
    }
  }
  if (n_sys > 1) {
    for (std::size_t w = 0; w < workers_.size(); ++w)
      if (served[w] > 0) competition_update(workers_[w].learner, workers_[w].chosen, paid[w] > 0);
  }
  // (7) metrics and queue bound
  for (std::size_t s = 0; s < n_sys; ++s) {
    System& sys = systems_[s];
    sys.welfare.push_back(sys.gain - cfg_.sword.task_cost * static_cast<double>(sys.allocated));
    for (std::size_t w = 0; w < workers_.size(); ++w)
      sys.peak[w] = std::max(sys.peak[w], sys.ledger.reputation_of(static_cast<AgentId>(w), 1));
    if (sys.policy == CrowdPolicy::sword) {
      std::vector<WorkerState> after(workers_.size());
      for (std::size_t w = 0; w < workers_.size(); ++w) {
        after[w].id = static_cast<AgentId>(w);
        after[w].capacity = workers_[w].capacity;
        after[w].backlog = sys.queues[w].backlog();
      }
      sys.monitor.check(after, theta[s]);
    }
  }
}

void CrowdWorld::run() {
  while (now_ < cfg_.steps) advance_step();
}

CrowdSystemReport CrowdWorld::report(std::size_t s) const {
  const System& sys = systems_.at(s);
  CrowdSystemReport r;
  r.policy = sys.policy;
  r.welfare = time_avg_welfare(sys.welfare);
  r.welfare_series = sys.welfare;
  std::vector<std::uint64_t> hon;
  for (std::size_t w = 0; w < workers_.size(); ++w)
    if (workers_[w].type == WorkerType::hon) hon.push_back(sys.hits_per_worker[w]);
  r.fairness_hon = fairness_index(hon);
  if (sys.hits_completed > 0)
    r.quality = static_cast<double>(sys.hits_good) / static_cast<double>(sys.hits_completed);
  r.groups_proposed = sys.groups_proposed;
  r.hits_completed = sys.hits_completed;
  r.hits_swept = sys.hits_swept;
  double t_sum = 0.0;
  for (const HitGroup& g : groups_) {
    if (g.system != s || !g.resolved) continue;
    r.completion_times.push_back(g.completion_time);
    if (g.completion_time) {
      r.groups_completed += 1;
      t_sum += static_cast<double>(*g.completion_time);
    } else {
      r.groups_expired += 1;
    }
  }
  if (r.groups_completed > 0) r.mean_completion_time = t_sum / static_cast<double>(r.groups_completed);
  r.hits_per_worker = sys.hits_per_worker;
  r.lemma_checks = sys.monitor.checks();
  r.lemma_violations = sys.monitor.violations();
  return r;
}

}  // namespace trustsim
