#include "trustsim/act.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trustsim/csv.hpp"

namespace trustsim {

double interaction_reward(bool success, const ActConfig& cfg) {
  return success ? cfg.gain - cfg.cost : -cfg.cost;
}

void softmax(std::span<const double> learn, std::span<double> out) {
  if (learn.empty()) return;
  const double peak = *std::max_element(learn.begin(), learn.end());
  double total = 0.0;
  for (std::size_t i = 0; i < learn.size(); ++i) {
    out[i] = std::exp(learn[i] - peak);
    total += out[i];
  }
  for (std::size_t i = 0; i < learn.size(); ++i) out[i] /= total;
}

void update_witness_credibilities(std::span<WitnessProfile*> profiles,
                                  std::span<const Testimony> testimonies, double reward,
                                  bool outcome, SourceWeights& weights, const ActConfig& cfg) {
  if (profiles.empty()) return;
  const double uniform = 1.0 / static_cast<double>(profiles.size());
  const double fail = outcome ? 0.0 : 1.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    WitnessProfile& w = *profiles[i];
    const double d = testimonies[i].value >= cfg.threshold ? 1.0 : 0.0;
    w.misleading_sum += d * fail;
    w.uses += 1;
    const double prev = w.ranked ? w.credibility : uniform;
    w.learn_param += cfg.learn_rate *
                     (reward - weights.baseline_interaction - cfg.collusion_bias * w.theta()) *
                     (1.0 - prev);
  }
  std::vector<double> p(profiles.size());
  std::vector<double> pi(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) p[i] = profiles[i]->learn_param;
  softmax(p, pi);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    profiles[i]->credibility = pi[i];
    profiles[i]->ranked = true;
  }
  weights.baseline_interaction =
      cfg.baseline_mix * weights.baseline_interaction + (1.0 - cfg.baseline_mix) * reward;
}

std::optional<double> indirect_trust(std::span<const Testimony> testimonies,
                                     std::span<const WitnessProfile* const> profiles) {
  if (testimonies.empty()) return std::nullopt;
  double floor = std::numeric_limits<double>::infinity();
  for (const WitnessProfile* w : profiles)
    if (w != nullptr && w->ranked) floor = std::min(floor, w->credibility);
  if (!std::isfinite(floor)) floor = 1.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < testimonies.size(); ++i) {
    const WitnessProfile* w = profiles[i];
    const double weight = (w != nullptr && w->ranked) ? w->credibility : floor;
    num += weight * testimonies[i].value;
    den += weight;
  }
  if (den <= 0.0) {
    // Every weight underflowed; fall back to the plain mean.
    double sum = 0.0;
    for (const auto& t : testimonies) sum += t.value;
    return sum / static_cast<double>(testimonies.size());
  }
  return num / den;
}

void update_source_preference(SourceWeights& weights, bool direct_decision,
                              bool indirect_decision, bool outcome, const ActConfig& cfg) {
  auto step = [&](double& p, double& baseline, double prev, bool decision) {
    const double r = decision == outcome ? cfg.reward : cfg.penalty;
    p += cfg.learn_rate * (r - baseline) * (1.0 - prev);
    baseline = cfg.baseline_mix * baseline + (1.0 - cfg.baseline_mix) * r;
  };
  const double prev_d = weights.pi_direct;
  const double prev_i = weights.pi_indirect;
  step(weights.p_direct, weights.baseline_direct, prev_d, direct_decision);
  step(weights.p_indirect, weights.baseline_indirect, prev_i, indirect_decision);
  const double p[2] = {weights.p_direct, weights.p_indirect};
  double pi[2];
  softmax(p, pi);
  weights.pi_direct = pi[0];
  weights.pi_indirect = 1.0 - pi[0];
}

double fuse_reputation(double direct, double indirect, double gamma) {
  return gamma * direct + (1.0 - gamma) * indirect;
}

WitnessSelection select_witnesses(std::span<const WitnessProfile> known, double explore_prob,
                                  std::size_t top_m, Rng& rng) {
  std::vector<const WitnessProfile*> order;
  order.reserve(known.size());
  for (const auto& w : known) order.push_back(&w);
  const std::size_t keep = std::min(top_m, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [](const WitnessProfile* a, const WitnessProfile* b) {
                      if (a->credibility != b->credibility) return a->credibility > b->credibility;
                      return a->witness < b->witness;
                    });
  WitnessSelection sel;
  sel.chosen.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) sel.chosen.push_back(order[i]->witness);
  sel.broadcast = known.empty() || bernoulli(rng, explore_prob);
  return sel;
}

double decay_explore(double explore_prob, const ActConfig& cfg) {
  return std::max(cfg.explore_floor, explore_prob * cfg.explore_decay);
}

ActLearner::ActLearner(ActConfig cfg, bool learn_credibility)
    : cfg_(cfg), learn_credibility_(learn_credibility) {}

WitnessSelection ActLearner::plan_queries(AgentId trustee, Rng& rng) {
  auto it = trustees_.find(trustee);
  if (it == trustees_.end() || it->second.witnesses.empty()) {
    // Nothing known yet: the only option is to ask everyone.
    return WitnessSelection{{}, true};
  }
  std::vector<WitnessProfile> known;
  known.reserve(it->second.witnesses.size());
  for (const auto& [id, w] : it->second.witnesses) known.push_back(w);
  return select_witnesses(known, explore_prob_, cfg_.top_m, rng);
}

ActLearner::Assessment ActLearner::assess(AgentId trustee, const BetaEvidence& direct,
                                          std::span<const Testimony> responses) const {
  Assessment a;
  a.trustee = trustee;
  a.direct = brs_score(direct);
  a.used.assign(responses.begin(), responses.end());
  const TrusteeState* st = state(trustee);
  std::vector<const WitnessProfile*> profiles;
  profiles.reserve(responses.size());
  for (const auto& t : responses) {
    const WitnessProfile* w = nullptr;
    if (st != nullptr && learn_credibility_) {
      auto it = st->witnesses.find(t.witness);
      if (it != st->witnesses.end()) w = &it->second;
    }
    profiles.push_back(w);
  }
  a.indirect = indirect_trust(responses, profiles);
  if (!a.indirect) {
    a.gamma = 1.0;
    a.reputation = a.direct;
    return a;
  }
  a.gamma = st != nullptr ? st->weights.gamma() : 0.5;
  a.reputation = fuse_reputation(a.direct, *a.indirect, a.gamma);
  return a;
}

void ActLearner::learn(const Assessment& a, bool outcome) {
  TrusteeState& st = trustees_[a.trustee];
  const double r = interaction_reward(outcome, cfg_);
  if (a.indirect) {
    update_source_preference(st.weights, a.direct >= cfg_.threshold,
                             *a.indirect >= cfg_.threshold, outcome, cfg_);
  }
  if (!learn_credibility_ || a.used.empty()) {
    st.weights.baseline_interaction =
        cfg_.baseline_mix * st.weights.baseline_interaction + (1.0 - cfg_.baseline_mix) * r;
    return;
  }
  std::vector<WitnessProfile*> profiles;
  profiles.reserve(a.used.size());
  for (const auto& t : a.used) {
    auto [it, fresh] = st.witnesses.try_emplace(t.witness);
    if (fresh) it->second.witness = t.witness;
    profiles.push_back(&it->second);
  }
  update_witness_credibilities(profiles, a.used, r, outcome, st.weights, cfg_);
}

void ActLearner::tick() { explore_prob_ = decay_explore(explore_prob_, cfg_); }

const ActLearner::TrusteeState* ActLearner::state(AgentId trustee) const {
  auto it = trustees_.find(trustee);
  return it == trustees_.end() ? nullptr : &it->second;
}

double ActLearner::gamma(AgentId trustee) const {
  const TrusteeState* st = state(trustee);
  return st == nullptr ? 0.5 : st->weights.gamma();
}

void ActLearner::write_state(std::ostream& out,
                             const std::map<AgentId, BetaEvidence>& direct_evidence) const {
  CsvWriter csv(out, {"trustee_id", "gamma", "direct_score", "witness_id", "p", "pi", "uses"});
  for (const auto& [trustee, st] : trustees_) {
    auto it = direct_evidence.find(trustee);
    const double direct = brs_score(it == direct_evidence.end() ? BetaEvidence{} : it->second);
    if (st.witnesses.empty()) {
      csv << trustee << st.weights.gamma() << direct << "NA" << "NA" << "NA" << std::uint64_t{0};
      csv.end_row();
    }
    for (const auto& [id, w] : st.witnesses) {
      csv << trustee << st.weights.gamma() << direct << id << w.learn_param << w.credibility
          << w.uses;
      csv.end_row();
    }
  }
}

}  // namespace trustsim
