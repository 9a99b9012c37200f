#include "trustsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace trustsim {

double m2002_min_observations(double eps, double confidence) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("M2002 epsilon must lie in (0,1)");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("M2002 confidence must lie in (0,1)");
  return -std::log((1.0 - confidence) / 2.0) / (2.0 * eps * eps);
}

double gamma_m2002(std::uint64_t direct_observations, double eps, double confidence) {
  const double n_min = m2002_min_observations(eps, confidence);
  return std::min(static_cast<double>(direct_observations) / n_min, 1.0);
}

Fb2007Gamma::Fb2007Gamma(std::vector<double> gammas, double learn_rate, double epsilon)
    : gammas_(std::move(gammas)), q_(gammas_.size(), 0.0), learn_rate_(learn_rate),
      epsilon_(epsilon) {
  if (gammas_.empty()) throw std::invalid_argument("gamma set must not be empty");
}

std::size_t Fb2007Gamma::choose(Rng& rng) const {
  if (gammas_.size() == 1) return 0;
  if (bernoulli(rng, epsilon_)) return uniform_index(rng, gammas_.size());
  const double best = *std::max_element(q_.begin(), q_.end());
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < q_.size(); ++i)
    if (q_[i] == best) ties.push_back(i);
  return ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
}

void Fb2007Gamma::update(std::size_t arm, double reward) {
  q_.at(arm) += learn_rate_ * (reward - q_[arm]);
}

double nocred_fuse(std::span<const double> testimonies, double direct) {
  if (testimonies.empty()) return direct;
  const double mean = std::accumulate(testimonies.begin(), testimonies.end(), 0.0) /
                      static_cast<double>(testimonies.size());
  return 0.5 * direct + 0.5 * mean;
}

std::uint64_t HitPlan::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> largest_remainder(std::span<const double> weights, std::uint64_t total) {
  std::vector<std::uint64_t> out(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || sum <= 0.0) return out;
  std::vector<double> rem(weights.size());
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(std::floor(quota));
    rem[i] = quota - static_cast<double>(out[i]);
    given += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });
  for (std::size_t k = 0; given < total; k = (k + 1) % order.size(), ++given) out[order[k]] += 1;
  return out;
}

std::optional<HitPlan> greedy_hit_allocate(std::span<const RatedWorker> workers,
                                           std::uint64_t group_size, double th) {
  std::vector<std::size_t> trusted;
  for (std::size_t i = 0; i < workers.size(); ++i)
    if (workers[i].reputation >= th) trusted.push_back(i);
  if (trusted.empty()) return std::nullopt;
  HitPlan plan;
  plan.counts.assign(workers.size(), 0);
  if (group_size == 0) return plan;
  if (trusted.size() >= group_size) {
    std::sort(trusted.begin(), trusted.end(), [&](std::size_t a, std::size_t b) {
      if (workers[a].reputation != workers[b].reputation)
        return workers[a].reputation > workers[b].reputation;
      return workers[a].id < workers[b].id;
    });
    for (std::size_t k = 0; k < group_size; ++k) plan.counts[trusted[k]] = 1;
    return plan;
  }
  std::vector<double> w;
  w.reserve(trusted.size());
  for (std::size_t i : trusted) w.push_back(workers[i].reputation);
  const auto split = largest_remainder(w, group_size);
  for (std::size_t k = 0; k < trusted.size(); ++k) plan.counts[trusted[k]] = split[k];
  return plan;
}

HitPlan explore_low_observation(std::span<const RatedWorker> workers, std::uint64_t group_size,
                                Rng& rng) {
  HitPlan plan;
  plan.explored = true;
  plan.counts.assign(workers.size(), 0);
  if (workers.empty()) return plan;
  std::vector<std::size_t> order(workers.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return workers[a].observations < workers[b].observations;
  });
  for (std::uint64_t k = 0; k < group_size; ++k) plan.counts[order[k % order.size()]] += 1;
  return plan;
}

HitPlan brs2002e_allocate(std::span<const RatedWorker> workers, std::uint64_t group_size,
                          double th, double explore_prob, Rng& rng) {
  if (bernoulli(rng, explore_prob)) return explore_low_observation(workers, group_size, rng);
  auto plan = greedy_hit_allocate(workers, group_size, th);
  if (!plan) return explore_low_observation(workers, group_size, rng);
  return *plan;
}

double KnowledgeRecord::degree(std::uint64_t full) const {
  return std::min(static_cast<double>(interactions) / static_cast<double>(full), 1.0);
}

KnowledgeGroup KnowledgeRecord::group(std::uint64_t full) const {
  if (interactions >= full) return KnowledgeGroup::TK;
  if (interactions > 0) return KnowledgeGroup::PK;
  return heard_of ? KnowledgeGroup::AU : KnowledgeGroup::TU;
}

HitPlan m2009e_allocate(std::span<const RatedWorker> workers,
                        std::span<const KnowledgeRecord> knowledge, std::uint64_t group_size,
                        const M2009eConfig& cfg, Rng& rng) {
  std::vector<RatedWorker> tk;
  std::vector<std::size_t> tk_index;
  std::uint64_t trusted = 0;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    if (knowledge[i].group(cfg.full_knowledge) != KnowledgeGroup::TK) continue;
    tk.push_back(workers[i]);
    tk_index.push_back(i);
    if (workers[i].reputation >= cfg.qt) ++trusted;
  }
  HitPlan plan;
  plan.counts.assign(workers.size(), 0);
  if (trusted >= cfg.quorum && trusted > 0) {
    auto sub = greedy_hit_allocate(tk, group_size, cfg.qt);
    for (std::size_t k = 0; k < tk.size(); ++k) plan.counts[tk_index[k]] = sub->counts[k];
    return plan;
  }
  plan.explored = true;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < workers.size(); ++i)
    if (knowledge[i].group(cfg.full_knowledge) != KnowledgeGroup::TK) order.push_back(i);
  if (order.empty()) {
    for (std::size_t i = 0; i < workers.size(); ++i) order.push_back(i);
  }
  std::shuffle(order.begin(), order.end(), rng);
  auto rank = [&](std::size_t i) {
    switch (knowledge[i].group(cfg.full_knowledge)) {
      case KnowledgeGroup::PK: return 0;
      case KnowledgeGroup::AU: return 1;
      case KnowledgeGroup::TU: return 2;
      case KnowledgeGroup::TK: return 3;
    }
    return 3;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int ra = rank(a);
    const int rb = rank(b);
    if (ra != rb) return ra < rb;
    if (knowledge[a].interactions != knowledge[b].interactions)
      return knowledge[a].interactions > knowledge[b].interactions;
    return workers[a].reputation > workers[b].reputation;
  });
  for (std::uint64_t k = 0; k < group_size; ++k) plan.counts[order[k % order.size()]] += 1;
  return plan;
}

void LongShortTrust::seed(AgentId worker, double prior) {
  auto [it, fresh] = entries_.try_emplace(worker);
  if (fresh) {
    it->second.lt = prior;
    it->second.st = prior;
  }
}

void LongShortTrust::observe(AgentId worker, bool success) {
  LongShortEntry& e = entries_.try_emplace(worker).first->second;
  const double o = success ? 1.0 : 0.0;
  e.lt += cfg_.lt_rate * (o - e.lt);
  e.st += cfg_.st_rate * (o - e.st);
  e.interactions += 1;
}

const LongShortEntry* LongShortTrust::find(AgentId worker) const {
  auto it = entries_.find(worker);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<AgentId> LongShortTrust::candidates() const {
  std::vector<AgentId> ids;
  for (const auto& [id, e] : entries_)
    if (e.lt >= cfg_.th) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

double LongShortTrust::change_estimate() const {
  const auto ids = candidates();
  if (ids.empty()) return 0.0;
  double sum = 0.0;
  for (AgentId id : ids) {
    const LongShortEntry& e = entries_.at(id);
    sum += std::abs(e.lt - e.st);
  }
  return sum / static_cast<double>(ids.size());
}

double LongShortTrust::explore_extent() const {
  return std::min(change_estimate() * cfg_.explore_gain, 1.0);
}

std::vector<double> LongShortTrust::selection_probs() const {
  const auto ids = candidates();
  std::vector<double> rp(ids.size());
  if (ids.empty()) return rp;
  const double e = explore_extent();
  const double n = static_cast<double>(ids.size());
  double total = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    rp[k] = (1.0 - e) * entries_.at(ids[k]).lt + e / n;
    total += rp[k];
  }
  for (double& r : rp) r /= total;
  return rp;
}

HitPlan h2010e_allocate(const LongShortTrust& lst, std::span<const RatedWorker> workers,
                        std::uint64_t group_size, Rng& rng) {
  const auto ids = lst.candidates();
  std::unordered_map<AgentId, std::size_t> index;
  for (std::size_t i = 0; i < workers.size(); ++i) index[workers[i].id] = i;
  std::vector<RatedWorker> cand;
  std::vector<std::size_t> cand_index;
  for (AgentId id : ids) {
    auto it = index.find(id);
    if (it == index.end()) continue;
    RatedWorker w = workers[it->second];
    w.reputation = lst.find(id)->lt;
    cand.push_back(w);
    cand_index.push_back(it->second);
  }
  if (cand.empty()) return explore_low_observation(workers, group_size, rng);
  HitPlan plan;
  plan.counts.assign(workers.size(), 0);
  if (lst.change_estimate() == 0.0) {
    auto sub = greedy_hit_allocate(cand, group_size, lst.config().th);
    for (std::size_t k = 0; k < cand.size(); ++k) plan.counts[cand_index[k]] = sub->counts[k];
    return plan;
  }
  const auto rp = lst.selection_probs();
  std::discrete_distribution<std::size_t> pick(rp.begin(), rp.end());
  for (std::uint64_t k = 0; k < group_size; ++k) plan.counts[cand_index[pick(rng)]] += 1;
  return plan;
}

std::vector<std::uint64_t> amt_fcfs_match(std::uint64_t open_hits,
                                          std::span<const WorkerPull> pulls) {
  std::vector<std::uint64_t> out(pulls.size(), 0);
  for (std::size_t i = 0; i < pulls.size() && open_hits > 0; ++i) {
    out[i] = std::min<std::uint64_t>(open_hits, pulls[i].capacity);
    open_hits -= out[i];
  }
  return out;
}

}  // namespace trustsim
