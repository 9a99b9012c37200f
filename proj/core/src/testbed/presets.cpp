#include "trustsim/testbed/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "trustsim/crn.hpp"
#include "trustsim/errors.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/testbed/act_world.hpp"
#include "trustsim/testbed/crowd_world.hpp"
#include "trustsim/testbed/draft_world.hpp"
#include "trustsim/testbed/rdp_world.hpp"

namespace trustsim {

namespace {

using K = ParamKind;

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  return std::nullopt;
}

void check_value(const Param& p, std::string_view value) {
  bool ok = true;
  switch (p.kind) {
    case K::integer: ok = parse_int(value).has_value(); break;
    case K::real: ok = parse_real(value).has_value(); break;
    case K::boolean: ok = parse_bool(value).has_value(); break;
    case K::text:
      ok = p.choices.empty() ||
           std::find(p.choices.begin(), p.choices.end(), value) != p.choices.end();
      break;
  }
  if (!ok) {
    std::string msg = "parameter '" + p.key + "' expects " + std::string(to_string(p.kind));
    if (!p.choices.empty()) {
      msg += " (one of";
      for (const auto& c : p.choices) msg += " " + c;
      msg += ")";
    }
    throw ConfigError(msg + ", got '" + std::string(value) + "'");
  }
}

// ---- parameter tables ----------------------------------------------------

ParamSet ch3_params(bool collusive) {
  ParamSet p;
  p.declare("steps", K::integer, "200", "problems solved per consumer")
      .declare("providers", K::integer, "100", "service providers")
      .declare("witnesses", K::integer, "100", "common witnesses")
      .declare("group_size", K::integer, "10", "consumers per group")
      .declare("warmup", K::integer, "10", "witness sampling steps before consumers start")
      .declare("witness_sampling", K::boolean, "false", "witnesses keep sampling during the run")
      .declare("witness_mix", K::text, collusive ? "BS80" : "Hon", "Hon, BMn or BSn")
      .declare("collusive", K::boolean, collusive ? "true" : "false",
               "ballot-stuffers promote only the Type III ring")
      .declare("Th", K::real, "0.5", "ACT decision threshold")
      .declare("rho", K::real, "0.4", "ACT learning rate")
      .declare("delta", K::real, "0.05", "ACT collusion bias")
      .declare("phi", K::real, "0.6", "ACT baseline mixing")
      .declare("M", K::integer, "10", "top-M credible witnesses asked")
      .declare("G", K::real, "5", "gain of a successful interaction")
      .declare("C", K::real, "1", "cost of an interaction")
      .declare("R", K::real, "1", "ACT reward")
      .declare("P", K::real, "-10", "ACT penalty")
      .declare("Pr_min", K::real, "0.1", "ACT exploration floor")
      .declare("m2002_eps", K::real, "0.1", "M2002 accuracy")
      .declare("m2002_confidence", K::real, "0.95", "M2002 confidence level");
  return p;
}

ParamSet rdp_params() {
  ParamSet p;
  p.declare("steps", K::integer, "500", "horizon in steps")
      .declare("trustees", K::integer, "200", "trustees")
      .declare("trusters", K::integer, "1000", "trusters, one task each per step")
      .declare("hon_share", K::real, "0.5", "share of honest trustees")
      .declare("hon_success", K::real, "0.9", "success rate of honest trustees")
      .declare("mal_success", K::real, "0.1", "success rate of the others")
      .declare("capacity", K::integer, "10", "tasks served per trustee per step")
      .declare("deadline", K::integer, "3", "steps from issue to deadline")
      .declare("explore", K::real, "0.15", "random delegation share")
      .declare("clean_sweep", K::boolean, "false", "drop expired tasks every step")
      .declare("shared_view", K::boolean, "false", "rank trustees by shared reputation")
      .declare("aggregation", K::text, "pooled", "reputation reported per trustee",
               {"pooled", "mean_of_locals"});
  return p;
}

ParamSet crowd_params(bool competition) {
  ParamSet p;
  p.declare("steps", K::integer, "1000", "horizon in steps")
      .declare("workers", K::integer, "1000", "workers")
      .declare("requesters", K::integer, "50", "requesters")
      .declare("hon_x", K::integer, "50", "HonX population, X in 10..100")
      .declare("N_r", K::integer, "40", "HITs per group")
      .declare("T_dl", K::integer, "14", "steps from proposal to group deadline")
      .declare("witnesses", K::integer, "50", "witnesses")
      .declare("warmup", K::integer, "200", "witness warm-up steps")
      .declare("explore", K::real, "0.1", "BRS2002e exploration share")
      .declare("V", K::real, "2", "SWORD welfare weight")
      .declare("N", K::real, "1", "SWORD capacity weight")
      .declare("g_max", K::real, "1", "reward per good HIT")
      .declare("c", K::real, "0.2", "cost per allocated HIT")
      .declare("Th_r", K::real, "0.6", "SWORD reputation floor")
      .declare("Pr_exp", K::real, "0.1", "SWORD exploration probability")
      .declare("qt", K::real, "0.6", "M2009e trust threshold")
      .declare("clean_sweep", K::boolean, "true", "drop expired HITs every step")
      .declare("shared_reputation", K::boolean, "true",
               "baselines rank workers by the system-wide record");
  if (competition)
    p.declare("rho", K::real, "0.4", "competition learning rate")
        .declare("phi", K::real, "0.6", "competition baseline mixing");
  return p;
}

ParamSet draft_params() {
  ParamSet p;
  p.declare("steps", K::integer, "1000", "horizon in steps")
      .declare("trustees", K::integer, "100", "trustees")
      .declare("trusters", K::integer, "1000", "trusters, one request each per step")
      .declare("hon_x", K::integer, "50", "HonX population, X in 10..100")
      .declare("V", K::real, "100", "DRAFT welfare weight")
      .declare("explore", K::real, "0.15", "random delegation share")
      .declare("rep_floor", K::real, "0.6666666666666666", "reputation needed to be exploited")
      .declare("clean_sweep", K::boolean, "false", "drop expired tasks every step");
  return p;
}

ParamSet crn_params() {
  ParamSet p;
  p.declare("steps", K::integer, "10000", "sensing iterations")
      .declare("attack", K::text, "fabrication", "attacker behavior",
               {"none", "fabrication", "on_off", "dos", "resource_hungry"})
      .declare("sigma", K::real, "0.5", "share of attacking SUs")
      .declare("usage_rate", K::real, "0.45", "PU occupancy per band and round")
      .declare("su_count", K::integer, "100", "secondary users")
      .declare("bands", K::integer, "8", "channels")
      .declare("eta", K::real, "0.65", "trust floor")
      .declare("confidence_floor", K::real, "0.25", "SUs abstain below this confidence")
      .declare("w1", K::real, "1", "false alarm weight")
      .declare("w2", K::real, "5", "misdetection weight")
      .declare("N", K::integer, "20", "rating window")
      .declare("rho1", K::real, "1", "forgetting factor of honest-looking SUs")
      .declare("rho2", K::real, "0.9", "forgetting factor otherwise");
  return p;
}

std::vector<Preset> build_registry() {
  const std::vector<std::string> ch3 = {"static0", "static05", "static1", "m2002", "fb2007",
                                        "actprime", "act",     "nocred",  "brs2002"};
  const std::vector<std::string> ch6 = {"amt", "brs2002e", "m2009e", "h2010e", "sword"};
  return {
      {"ch3-noncollusive", "delegation with distorted testimonies, no collusion", ch3,
       ch3_params(false), {"f05-naul"}},
      {"ch3-collusive", "delegation with a ballot-stuffing collusion ring", ch3, ch3_params(true),
       {"f05-naul", "f10-collusion"}},
      {"ch4-rdp", "greedy BRS2012 delegation without load coordination", {"brs2012"},
       rdp_params(), {"f24-reputation"}},
      {"ch6-comparison", "one crowdsourcing system per policy", ch6, crowd_params(false),
       {"f31-welfare", "f33-cdf", "f35-fairness"}},
      {"ch6-competition", "all systems side by side, agents learn where to go", ch6,
       crowd_params(true), {"f41-share", "f42-welfare"}},
      {"ch7-draft", "typed task delegation, DRAFT or accept-all trustees", {"draft", "trd"},
       draft_params(), {"f50-welfare", "f55-fairness", "f56-cdf"}},
      {"crn", "cooperative spectrum sensing under attack", {"trust", "notrust"}, crn_params(),
       {"f18-eps1", "f18-eps2"}},
  };
}

// ---- runners ---------------------------------------------------------------

template <typename F>
auto build(F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int hon_x_of(const ParamSet& p) {
  const auto x = p.integer("hon_x");
  if (x < 10 || x > 100) throw ConfigError("hon_x must lie in 10..100");
  return static_cast<int>(x);
}

std::size_t stride_of(std::size_t steps, std::size_t points = 200) {
  return std::max<std::size_t>(1, steps / points);
}

void add_common(PolicyRun& r, std::optional<double> welfare, std::optional<double> fairness,
                std::optional<double> quality, std::optional<double> waiting) {
  r.metrics.emplace_back("welfare", welfare);
  r.metrics.emplace_back("fairness_hon", fairness);
  r.metrics.emplace_back("quality", quality);
  r.metrics.emplace_back("waiting_time", waiting);
}

std::optional<double> count(std::uint64_t v) { return static_cast<double>(v); }

std::vector<std::pair<double, double>> running_mean(const std::vector<double>& xs,
                                                    std::size_t stride) {
  std::vector<std::pair<double, double>> out;
  double sum = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    sum += xs[t];
    if ((t + 1) % stride == 0 || t + 1 == xs.size())
      out.emplace_back(static_cast<double>(t + 1), sum / static_cast<double>(t + 1));
  }
  return out;
}

std::vector<PolicyRun> run_ch3(const ParamSet& p, std::span<const std::string> policies,
                               std::uint64_t seed) {
  ActWorldConfig cfg;
  cfg.problems = p.count("steps");
  cfg.providers = p.count("providers");
  cfg.witnesses = p.count("witnesses");
  cfg.group_size = p.count("group_size");
  cfg.warmup = p.integer("warmup");
  cfg.witness_sampling = p.flag("witness_sampling");
  cfg.witness_mix = p.text("witness_mix");
  cfg.collusive = p.flag("collusive");
  cfg.act.threshold = p.real("Th");
  cfg.act.learn_rate = p.real("rho");
  cfg.act.collusion_bias = p.real("delta");
  cfg.act.baseline_mix = p.real("phi");
  cfg.act.top_m = p.count("M");
  cfg.act.gain = p.real("G");
  cfg.act.cost = p.real("C");
  cfg.act.reward = p.real("R");
  cfg.act.penalty = p.real("P");
  cfg.act.explore_floor = p.real("Pr_min");
  cfg.m2002_eps = p.real("m2002_eps");
  cfg.m2002_confidence = p.real("m2002_confidence");
  cfg.groups.clear();
  for (const auto& id : policies) cfg.groups.push_back(parse_consumer_policy(id));

  ActWorld world = build([&] { return ActWorld(cfg, seed); });
  std::vector<PolicyRun> out(policies.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].policy = policies[g];
    out[g].series = {{"f05-naul", policies[g], {}}, {"f10-collusion", policies[g], {}}};
  }
  const std::size_t stride = stride_of(cfg.problems);
  while (static_cast<std::size_t>(world.now()) < cfg.problems) {
    world.advance_step();
    const auto t = static_cast<std::size_t>(world.now());
    if (t % stride != 0 && t != cfg.problems) continue;
    const auto res = world.results();
    for (std::size_t g = 0; g < out.size(); ++g) {
      if (res[g].naul) out[g].series[0].points.emplace_back(static_cast<double>(t), *res[g].naul);
      if (res[g].collusion_power)
        out[g].series[1].points.emplace_back(static_cast<double>(t), *res[g].collusion_power);
    }
  }
  const auto res = world.results();
  for (std::size_t g = 0; g < out.size(); ++g) {
    PolicyRun& r = out[g];
    add_common(r, std::nullopt, std::nullopt, std::nullopt, std::nullopt);
    r.metrics.emplace_back("naul", res[g].naul);
    r.metrics.emplace_back("collusion_power", res[g].collusion_power);
    r.metrics.emplace_back("interactions", count(res[g].interactions));
    r.metrics.emplace_back("mean_gamma", res[g].mean_gamma);
    if (!cfg.collusive) r.series.pop_back();
  }
  return out;
}

std::vector<PolicyRun> run_rdp(const ParamSet& p, std::uint64_t seed) {
  RdpConfig cfg;
  cfg.steps = p.integer("steps");
  cfg.trustees = p.count("trustees");
  cfg.trusters = p.count("trusters");
  cfg.hon_share = p.real("hon_share");
  cfg.hon_success = p.real("hon_success");
  cfg.mal_success = p.real("mal_success");
  cfg.capacity = static_cast<std::uint32_t>(p.count("capacity"));
  cfg.deadline = p.integer("deadline");
  cfg.explore = p.real("explore");
  cfg.clean_sweep = p.flag("clean_sweep");
  cfg.shared_view = p.flag("shared_view");
  cfg.aggregation =
      p.text("aggregation") == "pooled" ? Aggregation::pooled : Aggregation::mean_of_locals;

  RdpWorld world = build([&] { return RdpWorld(cfg, seed); });
  world.run();

  PolicyRun r;
  r.policy = "brs2012";
  const auto& rep = world.reputation_series();
  Series hon{"f24-reputation", "hon", {}};
  Series mal{"f24-reputation", "mal", {}};
  double hon_sum = 0.0;
  double mal_sum = 0.0;
  std::size_t hon_n = 0;
  std::size_t mal_n = 0;
  for (std::size_t t = 0; t < rep.size(); ++t) {
    double hs = 0.0;
    double ms = 0.0;
    std::size_t hn = 0;
    std::size_t mn = 0;
    for (std::size_t j = 0; j < cfg.trustees; ++j) {
      if (world.honest(static_cast<AgentId>(j))) {
        hs += rep[t][j];
        ++hn;
      } else {
        ms += rep[t][j];
        ++mn;
      }
    }
    hon_sum += hs;
    mal_sum += ms;
    hon_n += hn;
    mal_n += mn;
    if (hn > 0) hon.points.emplace_back(static_cast<double>(t + 1), hs / static_cast<double>(hn));
    if (mn > 0) mal.points.emplace_back(static_cast<double>(t + 1), ms / static_cast<double>(mn));
  }
  std::optional<double> crossings_mean;
  std::optional<double> crossings_min;
  std::uint64_t crossings_sum = 0;
  std::size_t counted = 0;
  for (std::size_t j = 0; j < cfg.trustees; ++j) {
    if (!world.honest(static_cast<AgentId>(j))) continue;
    std::vector<double> s;
    s.reserve(rep.size());
    for (const auto& row : rep) s.push_back(row[j]);
    const auto z = static_cast<double>(zero_crossings(s));
    crossings_sum += zero_crossings(s);
    ++counted;
    crossings_min = crossings_min ? std::min(*crossings_min, z) : z;
  }
  if (counted > 0)
    crossings_mean = static_cast<double>(crossings_sum) / static_cast<double>(counted);

  std::uint64_t completed = 0;
  std::uint64_t good = 0;
  std::uint64_t swept = 0;
  std::vector<double> welfare;
  for (const auto& s : world.stats()) {
    completed += s.completed;
    good += s.on_time_success;
    swept += s.swept;
    welfare.push_back(static_cast<double>(s.on_time_success));
  }
  add_common(r, time_avg_welfare(welfare), std::nullopt,
             completed > 0 ? std::optional<double>(static_cast<double>(good) /
                                                   static_cast<double>(completed))
                           : std::nullopt,
             std::nullopt);
  r.metrics.emplace_back("hon_reputation",
                         hon_n > 0 ? std::optional<double>(hon_sum / static_cast<double>(hon_n))
                                   : std::nullopt);
  r.metrics.emplace_back("mal_reputation",
                         mal_n > 0 ? std::optional<double>(mal_sum / static_cast<double>(mal_n))
                                   : std::nullopt);
  r.metrics.emplace_back("crossings_mean", crossings_mean);
  r.metrics.emplace_back("crossings_min", crossings_min);
  r.metrics.emplace_back("completed", count(completed));
  r.metrics.emplace_back("swept", count(swept));
  r.series = {std::move(hon), std::move(mal)};
  return {std::move(r)};
}

CrowdConfig crowd_config(const ParamSet& p) {
  CrowdConfig cfg;
  cfg.steps = p.integer("steps");
  cfg.workers = p.count("workers");
  cfg.requesters = p.count("requesters");
  cfg.hon_x = hon_x_of(p);
  cfg.group_size = static_cast<std::uint32_t>(p.count("N_r"));
  cfg.deadline = p.integer("T_dl");
  cfg.witnesses = p.count("witnesses");
  cfg.warmup = p.integer("warmup");
  cfg.explore = p.real("explore");
  cfg.sword.v = p.real("V");
  cfg.sword.n_weight = p.real("N");
  cfg.sword.max_gain = p.real("g_max");
  cfg.sword.task_cost = p.real("c");
  cfg.sword.rep_floor = p.real("Th_r");
  cfg.sword.explore_prob = p.real("Pr_exp");
  cfg.m2009e.qt = p.real("qt");
  cfg.clean_sweep = p.flag("clean_sweep");
  cfg.shared_reputation = p.flag("shared_reputation");
  if (p.has("rho")) {
    cfg.competition.learn_rate = p.real("rho");
    cfg.competition.baseline_mix = p.real("phi");
  }
  return cfg;
}

PolicyRun crowd_run(const CrowdSystemReport& rep, const CrowdConfig& cfg) {
  PolicyRun r;
  r.policy = std::string(to_string(rep.policy));
  const CompletionCdf cdf = completion_cdf(rep.completion_times, cfg.deadline);
  add_common(r, rep.welfare, rep.fairness_hon, rep.quality, rep.mean_completion_time);
  r.metrics.emplace_back("within_2",
                         cdf.points.size() >= 2 ? std::optional<double>(cdf.points[1])
                         : cdf.points.empty()   ? std::nullopt
                                                : std::optional<double>(cdf.points.back()));
  r.metrics.emplace_back("groups_proposed", count(rep.groups_proposed));
  r.metrics.emplace_back("groups_completed", count(rep.groups_completed));
  r.metrics.emplace_back("groups_expired", count(rep.groups_expired));
  r.metrics.emplace_back("hits_completed", count(rep.hits_completed));
  r.metrics.emplace_back("hits_swept", count(rep.hits_swept));
  r.metrics.emplace_back("lemma_checks", count(rep.lemma_checks));
  r.metrics.emplace_back("lemma_violations", count(rep.lemma_violations));
  Series c{"f33-cdf", r.policy, {}};
  for (std::size_t x = 0; x < cdf.points.size(); ++x)
    c.points.emplace_back(static_cast<double>(x + 1), cdf.points[x]);
  r.series.push_back(std::move(c));
  return r;
}

std::vector<PolicyRun> run_ch6(const ParamSet& p, std::span<const std::string> policies,
                               std::uint64_t seed) {
  std::vector<PolicyRun> out;
  for (const auto& id : policies) {
    CrowdConfig cfg = crowd_config(p);
    cfg.systems = {parse_crowd_policy(id)};
    CrowdWorld world = build([&] { return CrowdWorld(cfg, seed); });
    world.run();
    const CrowdSystemReport rep = world.report(0);
    PolicyRun r = crowd_run(rep, cfg);
    r.series.push_back(
        {"f31-welfare", id, running_mean(rep.welfare_series, stride_of(rep.welfare_series.size()))});
    if (rep.fairness_hon)
      r.series.push_back({"f35-fairness", id, {{static_cast<double>(cfg.hon_x), *rep.fairness_hon}}});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PolicyRun> run_competition(const ParamSet& p, std::span<const std::string> policies,
                                       std::uint64_t seed) {
  CrowdConfig cfg = crowd_config(p);
  cfg.systems.clear();
  for (const auto& id : policies) cfg.systems.push_back(parse_crowd_policy(id));
  CrowdWorld world = build([&] { return CrowdWorld(cfg, seed); });

  const std::size_t ns = cfg.systems.size();
  std::vector<Series> share(ns);
  for (std::size_t s = 0; s < ns; ++s) share[s] = {"f41-share", policies[s], {}};
  const std::size_t stride = stride_of(static_cast<std::size_t>(cfg.steps), 100);
  std::vector<std::uint64_t> last(ns, 0);
  while (world.now() < cfg.steps) {
    world.advance_step();
    const auto t = static_cast<std::size_t>(world.now());
    if (t % stride != 0 && t != static_cast<std::size_t>(cfg.steps)) continue;
    std::vector<std::uint64_t> now(ns, 0);
    for (const auto& row : world.worker_choices())
      for (std::size_t s = 0; s < ns && s < row.size(); ++s) now[s] += row[s];
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < ns; ++s) total += now[s] - last[s];
    for (std::size_t s = 0; s < ns; ++s) {
      if (total > 0)
        share[s].points.emplace_back(
            static_cast<double>(t),
            static_cast<double>(now[s] - last[s]) / static_cast<double>(total));
    }
    last = now;
  }

  std::uint64_t all = 0;
  for (std::uint64_t v : last) all += v;
  std::vector<PolicyRun> out;
  for (std::size_t s = 0; s < ns; ++s) {
    const CrowdSystemReport rep = world.report(s);
    PolicyRun r = crowd_run(rep, cfg);
    r.series.clear();
    r.metrics.emplace_back("worker_share",
                           all > 0 ? std::optional<double>(static_cast<double>(last[s]) /
                                                           static_cast<double>(all))
                                   : std::nullopt);
    r.series.push_back(std::move(share[s]));
    r.series.push_back({"f42-welfare", policies[s],
                        running_mean(rep.welfare_series, stride_of(rep.welfare_series.size()))});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PolicyRun> run_draft(const ParamSet& p, std::span<const std::string> policies,
                                 std::uint64_t seed) {
  std::vector<PolicyRun> out;
  for (const auto& id : policies) {
    DraftConfig cfg;
    cfg.steps = p.integer("steps");
    cfg.trustees = p.count("trustees");
    cfg.trusters = p.count("trusters");
    cfg.hon_x = hon_x_of(p);
    cfg.v = p.real("V");
    cfg.explore = p.real("explore");
    cfg.rep_floor = p.real("rep_floor");
    cfg.clean_sweep = p.flag("clean_sweep");
    cfg.acceptor = parse_acceptor(id);
    DraftWorld world = build([&] { return DraftWorld(cfg, seed); });
    world.run();
    const DraftReport rep = world.report();

    PolicyRun r;
    r.policy = id;
    add_common(r, rep.welfare, rep.fairness_hon, rep.quality, rep.mean_wait);
    r.metrics.emplace_back("fairness_hon_effort", rep.fairness_hon_effort);
    r.metrics.emplace_back("on_time", rep.on_time);
    r.metrics.emplace_back("mean_backlog", rep.mean_backlog);
    r.metrics.emplace_back("requests", count(rep.requests));
    r.metrics.emplace_back("accepted", count(rep.accepted));
    r.metrics.emplace_back("rejected", count(rep.rejected));
    r.metrics.emplace_back("completed", count(rep.completed));
    r.metrics.emplace_back("completed_on_time", count(rep.completed_on_time));
    r.metrics.emplace_back("swept", count(rep.swept));

    r.series.push_back({"f50-welfare", id,
                        running_mean(rep.welfare_series, stride_of(rep.welfare_series.size()))});
    if (rep.fairness_hon)
      r.series.push_back({"f55-fairness", id, {{static_cast<double>(cfg.hon_x), *rep.fairness_hon}}});
    Series cdf{"f56-cdf", id, {}};
    std::uint64_t seen = 0;
    for (std::size_t w = 0; w < rep.wait_histogram.size(); ++w) {
      seen += rep.wait_histogram[w];
      if (rep.completed > 0)
        cdf.points.emplace_back(static_cast<double>(w),
                                static_cast<double>(seen) / static_cast<double>(rep.completed));
    }
    r.series.push_back(std::move(cdf));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PolicyRun> run_crn_preset(const ParamSet& p, std::span<const std::string> policies,
                                      std::uint64_t seed) {
  std::vector<PolicyRun> out;
  for (const auto& id : policies) {
    CrnScenario sc;
    sc.cfg.iterations = p.count("steps");
    sc.cfg.su_count = p.count("su_count");
    sc.cfg.bands = p.count("bands");
    sc.cfg.trust_floor = p.real("eta");
    sc.cfg.confidence_floor = p.real("confidence_floor");
    sc.cfg.w1 = p.real("w1");
    sc.cfg.w2 = p.real("w2");
    sc.cfg.window = p.count("N");
    sc.cfg.rho_high = p.real("rho1");
    sc.cfg.rho_low = p.real("rho2");
    sc.cfg.trust_enabled = id == "trust";
    sc.attack = parse_attack(p.text("attack"));
    sc.sigma = p.real("sigma");
    sc.usage_rate = p.real("usage_rate");
    sc.seed = seed;
    if (sc.cfg.bands == 0 || sc.cfg.su_count == 0) throw ConfigError("crn needs bands and SUs");
    const CrnResult res = build([&] { return run_crn(sc); });

    PolicyRun r;
    r.policy = id;
    add_common(r, std::nullopt, std::nullopt, std::nullopt, std::nullopt);
    r.metrics.emplace_back("eps1", res.eps1);
    r.metrics.emplace_back("eps2", res.eps2);
    r.metrics.emplace_back("tul", res.tul);
    Series e1{"f18-eps1", id, {}};
    Series e2{"f18-eps2", id, {}};
    const std::size_t stride = stride_of(sc.cfg.iterations);
    for (std::size_t k = 0; k + sc.cfg.bands <= res.rows.size(); k += sc.cfg.bands) {
      const std::uint64_t it = res.rows[k].iteration;
      if ((it + 1) % stride != 0 && it + 1 != sc.cfg.iterations) continue;
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t b = 0; b < sc.cfg.bands; ++b) {
        s1 += res.rows[k + b].eps1_cum;
        s2 += res.rows[k + b].eps2_cum;
      }
      const auto nb = static_cast<double>(sc.cfg.bands);
      e1.points.emplace_back(static_cast<double>(it + 1), s1 / nb);
      e2.points.emplace_back(static_cast<double>(it + 1), s2 / nb);
    }
    r.series = {std::move(e1), std::move(e2)};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string_view to_string(ParamKind k) {
  switch (k) {
    case K::integer: return "integer";
    case K::real: return "real";
    case K::boolean: return "boolean";
    case K::text: return "text";
  }
  return "text";
}

ParamSet& ParamSet::declare(std::string key, ParamKind kind, std::string value, std::string help,
                            std::vector<std::string> choices) {
  if (find(key)) throw std::logic_error("parameter declared twice: " + key);
  Param p{std::move(key), kind, std::move(value), std::move(help), std::move(choices)};
  check_value(p, p.value);
  params_.push_back(std::move(p));
  return *this;
}

void ParamSet::set(std::string_view key, std::string_view value) {
  Param* p = find(key);
  if (!p) throw ConfigError("unknown parameter '" + std::string(key) + "'");
  check_value(*p, value);
  p->value = std::string(value);
}

Param* ParamSet::find(std::string_view key) {
  for (Param& p : params_)
    if (p.key == key) return &p;
  return nullptr;
}

bool ParamSet::has(std::string_view key) const {
  return std::any_of(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; });
}

const Param& ParamSet::at(std::string_view key) const {
  for (const Param& p : params_)
    if (p.key == key) return p;
  throw ConfigError("unknown parameter '" + std::string(key) + "'");
}

double ParamSet::real(std::string_view key) const {
  const Param& p = at(key);
  if (p.kind == K::integer) return static_cast<double>(*parse_int(p.value));
  if (p.kind != K::real) throw ConfigError("parameter '" + p.key + "' is not numeric");
  return *parse_real(p.value);
}

std::int64_t ParamSet::integer(std::string_view key) const {
  const Param& p = at(key);
  if (p.kind != K::integer) throw ConfigError("parameter '" + p.key + "' is not an integer");
  return *parse_int(p.value);
}

std::size_t ParamSet::count(std::string_view key) const {
  const auto v = integer(key);
  if (v < 0) throw ConfigError("parameter '" + std::string(key) + "' must not be negative");
  return static_cast<std::size_t>(v);
}

bool ParamSet::flag(std::string_view key) const {
  const Param& p = at(key);
  if (p.kind != K::boolean) throw ConfigError("parameter '" + p.key + "' is not a boolean");
  return *parse_bool(p.value);
}

const std::string& ParamSet::text(std::string_view key) const { return at(key).value; }

std::optional<double> PolicyRun::metric(std::string_view name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return std::nullopt;
}

const std::vector<Preset>& preset_registry() {
  static const std::vector<Preset> registry = build_registry();
  return registry;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : preset_registry())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<PolicyRun> run_preset(const Preset& preset, const ParamSet& params,
                                  std::span<const std::string> policies, std::uint64_t seed) {
  if (policies.empty()) throw ConfigError("no policy selected");
  for (const auto& id : policies)
    if (std::find(preset.policies.begin(), preset.policies.end(), id) == preset.policies.end())
      throw ConfigError("policy '" + id + "' is not available in preset " + preset.name);
  if (params.integer("steps") < 0) throw ConfigError("steps must not be negative");

  if (preset.name.rfind("ch3-", 0) == 0) return run_ch3(params, policies, seed);
  if (preset.name == "ch4-rdp") return run_rdp(params, seed);
  if (preset.name == "ch6-comparison") return run_ch6(params, policies, seed);
  if (preset.name == "ch6-competition") return run_competition(params, policies, seed);
  if (preset.name == "ch7-draft") return run_draft(params, policies, seed);
  if (preset.name == "crn") return run_crn_preset(params, policies, seed);
  throw ConfigError("preset '" + preset.name + "' has no runner");
}

const std::vector<FigureInfo>& figure_registry() {
  static const std::vector<FigureInfo> figures = {
      {"f05-naul", "ch3-noncollusive", "problem", "NAUL"},
      {"f10-collusion", "ch3-collusive", "problem", "collusion power"},
      {"f18-eps1", "crn", "iteration", "cumulative false alarm rate"},
      {"f18-eps2", "crn", "iteration", "cumulative misdetection rate"},
      {"f24-reputation", "ch4-rdp", "step", "mean reputation"},
      {"f31-welfare", "ch6-comparison", "step", "time-averaged welfare"},
      {"f33-cdf", "ch6-comparison", "steps to complete", "share of HIT groups"},
      {"f35-fairness", "ch6-comparison", "hon_x", "F_Hon"},
      {"f41-share", "ch6-competition", "step", "share of worker visits"},
      {"f42-welfare", "ch6-competition", "step", "time-averaged welfare"},
      {"f50-welfare", "ch7-draft", "step", "time-averaged welfare"},
      {"f55-fairness", "ch7-draft", "hon_x", "F_Hon"},
      {"f56-cdf", "ch7-draft", "steps from request to completion", "share of tasks"},
      {"f57-welfare", "sweep", "parameter value", "mean welfare"},
      {"f57-backlog", "sweep", "parameter value", "mean backlog"},
  };
  return figures;
}

const FigureInfo* find_figure(std::string_view id) {
  for (const FigureInfo& f : figure_registry())
    if (f.id == id) return &f;
  return nullptr;
}

}  // namespace trustsim
