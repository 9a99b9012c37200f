#include "trustsim/testbed/act_world.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trustsim {

namespace {

constexpr std::pair<ConsumerPolicy, std::string_view> kPolicyNames[] = {
    {ConsumerPolicy::static0, "static0"},     {ConsumerPolicy::static05, "static05"},
    {ConsumerPolicy::static1, "static1"},     {ConsumerPolicy::m2002, "m2002"},
    {ConsumerPolicy::fb2007, "fb2007"},     {ConsumerPolicy::actprime, "actprime"},
    {ConsumerPolicy::act, "act"},           {ConsumerPolicy::nocred, "nocred"},
    {ConsumerPolicy::brs2002, "brs2002"},
};

bool uses_testimonies(ConsumerPolicy p) {
  return p != ConsumerPolicy::static1 && p != ConsumerPolicy::brs2002;
}

double mean(const std::vector<Testimony>& ts) {
  double s = 0.0;
  for (const auto& t : ts) s += t.value;
  return s / static_cast<double>(ts.size());
}

}  // namespace

std::string_view to_string(ConsumerPolicy p) {
  for (const auto& [k, name] : kPolicyNames)
    if (k == p) return name;
  return "act";
}

ConsumerPolicy parse_consumer_policy(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown consumer policy '" + std::string(name) + "'");
}

std::vector<ConsumerPolicy> all_consumer_policies() {
  std::vector<ConsumerPolicy> out;
  for (const auto& [k, name] : kPolicyNames) out.push_back(k);
  return out;
}

ActWorld::ActWorld(const ActWorldConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  if (cfg.providers == 0) throw std::invalid_argument("need at least one provider");
  RngStreams streams(seed);
  Rng pop = streams.make(Stream::population);
  providers_ = ch3_providers(cfg.providers, pop);
  witnesses_ = witness_mix(cfg.witnesses, cfg.witness_mix, cfg.collusive, pop);
  for (std::size_t j = 0; j < cfg.providers; ++j)
    provider_rng_.push_back(streams.make(Stream::trustee, j));
  for (std::size_t w = 0; w < cfg.witnesses; ++w)
    witness_rng_.push_back(streams.make(Stream::witness, w));
  witness_evidence_.assign(cfg.witnesses, std::vector<BetaEvidence>(cfg.providers));
  witness_knows_.assign(cfg.witnesses, std::vector<bool>(cfg.providers, false));

  std::size_t index = 0;
  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    for (std::size_t k = 0; k < cfg.group_size; ++k, ++index) {
      Consumer c{cfg.groups[g], g, streams.make(Stream::truster, index),
                 std::vector<BetaEvidence>(cfg.providers), std::nullopt, std::nullopt, {}, 0, 0.0};
      if (c.policy == ConsumerPolicy::act) c.act.emplace(cfg.act, true);
      if (c.policy == ConsumerPolicy::actprime) c.act.emplace(cfg.act, false);
      if (c.policy == ConsumerPolicy::fb2007) c.fb.emplace();
      consumers_.push_back(std::move(c));
    }
  }
  for (Step t = 0; t < cfg.warmup; ++t) witness_sampling();
}

bool ActWorld::serve(AgentId provider) {
  Provider& p = providers_[provider];
  Rng& rng = provider_rng_[provider];
  const bool ok = bernoulli(rng, p.behavior.success_prob);
  p.behavior = drift_provider(p.behavior, rng);
  return ok;
}

void ActWorld::witness_sampling() {
  for (std::size_t w = 0; w < witnesses_.size(); ++w) {
    const auto j = static_cast<AgentId>(uniform_index(witness_rng_[w], providers_.size()));
    const bool ok = serve(j);
    BetaEvidence& ev = witness_evidence_[w][j];
    (ok ? ev.positives : ev.negatives) += 1;
    witness_knows_[w][j] = true;
  }
}

std::optional<double> ActWorld::testify(AgentId witness, AgentId provider) {
  if (!witness_knows_[witness][provider]) return std::nullopt;
  const double truth = brs_score(witness_evidence_[witness][provider]);
  const bool in_ring = providers_[provider].type == ProviderType::type3;
  return distort_testimony(truth, witnesses_[witness], in_ring, witness_rng_[witness]);
}

void ActWorld::solve(Consumer& c) {
  std::vector<AgentId> pool(providers_.size());
  std::iota(pool.begin(), pool.end(), AgentId{0});
  const std::size_t k = std::min(cfg_.candidates, pool.size());
  for (std::size_t i = 0; i < k; ++i)
    std::swap(pool[i], pool[i + uniform_index(c.rng, pool.size() - i)]);

  std::size_t arm = 0;
  if (c.fb) arm = c.fb->choose(c.rng);
  const double gamma_static = c.policy == ConsumerPolicy::static0    ? 0.0
                              : c.policy == ConsumerPolicy::static05 ? 0.5
                                                                    : 1.0;

  double best = -1.0;
  std::size_t ties = 0;
  ActLearner::Assessment chosen;
  double chosen_gamma = 1.0;
  std::vector<Testimony> responses;
  for (std::size_t i = 0; i < k; ++i) {
    const AgentId j = pool[i];
    responses.clear();
    if (uses_testimonies(c.policy)) {
      auto ask = [&](AgentId w) {
        if (auto v = testify(w, j)) responses.push_back(Testimony{w, j, *v, now_});
      };
      if (c.act) {
        const WitnessSelection sel = c.act->plan_queries(j, c.rng);
        for (AgentId w : sel.chosen) ask(w);
        if (sel.broadcast) {
          const ActLearner::TrusteeState* st = c.act->state(j);
          for (std::size_t w = 0; w < witnesses_.size(); ++w) {
            const auto id = static_cast<AgentId>(w);
            if (st == nullptr || !st->witnesses.contains(id)) ask(id);
          }
        }
      } else {
        for (std::size_t w = 0; w < witnesses_.size(); ++w) ask(static_cast<AgentId>(w));
      }
    }
    const BetaEvidence& direct = c.direct[j];
    ActLearner::Assessment a;
    if (c.act) {
      a = c.act->assess(j, direct, responses);
    } else {
      a.trustee = j;
      a.direct = brs_score(direct);
      if (c.policy == ConsumerPolicy::nocred) {
        std::vector<double> vals;
        vals.reserve(responses.size());
        for (const auto& t : responses) vals.push_back(t.value);
        a.reputation = nocred_fuse(vals, a.direct);
        a.gamma = vals.empty() ? 1.0 : 0.5;
      } else {
        double gamma = gamma_static;
        if (c.policy == ConsumerPolicy::m2002)
          gamma = gamma_m2002(direct.total(), cfg_.m2002_eps, cfg_.m2002_confidence);
        if (c.fb) gamma = c.fb->gamma(arm);
        if (responses.empty()) gamma = 1.0;
        a.gamma = gamma;
        a.reputation = responses.empty() ? a.direct : fuse_reputation(a.direct, mean(responses), gamma);
      }
    }
    if (a.reputation > best) {
      best = a.reputation;
      ties = 1;
      chosen = std::move(a);
    } else if (a.reputation == best && uniform_index(c.rng, ++ties) == 0) {
      chosen = std::move(a);
    }
  }
  chosen_gamma = chosen.gamma;

  const AgentId j = chosen.trustee;
  const bool ok = serve(j);
  (ok ? c.direct[j].positives : c.direct[j].negatives) += 1;
  c.naul.add(ok);
  c.gamma_sum += chosen_gamma;
  if (providers_[j].type == ProviderType::type3) ++c.ring_tries;
  if (c.act) {
    c.act->learn(chosen, ok);
    c.act->tick();
  }
  if (c.fb) c.fb->update(arm, interaction_reward(ok, cfg_.act));
}

void ActWorld::advance_step() {
  ++now_;
  if (static_cast<std::size_t>(now_) > cfg_.problems) return;
  if (cfg_.witness_sampling) witness_sampling();
  for (Consumer& c : consumers_) solve(c);
}

void ActWorld::run() {
  while (static_cast<std::size_t>(now_) < cfg_.problems) advance_step();
}

std::vector<GroupResult> ActWorld::results() const {
  std::vector<GroupResult> out;
  for (std::size_t g = 0; g < cfg_.groups.size(); ++g) {
    NaulAccumulator pooled;
    std::vector<std::uint64_t> tries;
    double gamma_sum = 0.0;
    for (const Consumer& c : consumers_) {
      if (c.group != g) continue;
      pooled.merge(c.naul);
      tries.push_back(c.ring_tries);
      gamma_sum += c.gamma_sum;
    }
    GroupResult r;
    r.policy = cfg_.groups[g];
    r.naul = pooled.value(cfg_.act.gain, cfg_.act.cost);
    r.interactions = pooled.count();
    if (now_ > 0 && !tries.empty())
      r.collusion_power = collusion_power(tries, static_cast<std::uint64_t>(
                                                     std::min<Step>(now_, cfg_.problems)));
    r.mean_gamma = r.interactions == 0 ? 0.0 : gamma_sum / static_cast<double>(r.interactions);
    out.push_back(r);
  }
  return out;
}

const ActLearner* ActWorld::learner(std::size_t c) const {
  const auto& opt = consumers_.at(c).act;
  return opt ? &*opt : nullptr;
}

}  // namespace trustsim
