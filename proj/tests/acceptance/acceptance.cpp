// Acceptance suite: one PASS/FAIL line per criterion.
//
//   trustsim_acceptance [--strict] [--only 1,2,9] [--seeds N]
//
// Exits 0 once every selected criterion has been evaluated; with --strict a
// single FAIL makes the exit code 1.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles/beta_oracle.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/testbed/presets.hpp"

using namespace trustsim;

namespace {

// Pinned tolerances.
constexpr double kRationalFloatTol = 1e-12;
constexpr double kRdpLow = 0.35;
constexpr double kRdpHigh = 0.65;
constexpr double kRdpCrossings = 3.0;
constexpr double kActImprovement = 0.10;
constexpr double kCollusionReduction = 0.50;
constexpr double kSwordOverBrs = 1.5;
constexpr double kSwordWithin2 = 0.80;
constexpr double kSwordFairness = 0.95;
constexpr double kExplorerFairness = 0.90;
constexpr double kDraftFairness = 0.99;
constexpr double kTrdOnTime = 0.50;
constexpr double kCrnTrustedEps = 0.05;
constexpr double kCrnUntrustedEps2 = 0.20;

struct Verdict {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt(const std::optional<double>& v, int digits = 4) {
  return v ? fmt(*v, digits) : std::string("NA");
}

using Overrides = std::vector<std::pair<std::string, std::string>>;
using Runs = std::map<std::string, std::vector<PolicyRun>>;  // policy -> one run per seed

unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs `preset` once per seed with the given overrides; seeds run in parallel.
Runs run_seeds(const std::string& preset, const Overrides& overrides,
               const std::vector<std::string>& policies, const std::vector<std::uint64_t>& seeds) {
  const Preset& p = find_preset(preset);
  ParamSet params = p.params;
  for (const auto& [k, v] : overrides) params.set(k, v);
  std::vector<std::vector<PolicyRun>> per_seed(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::string error;
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        per_seed[i] = run_preset(p, params, policies, seeds[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(worker_count(), static_cast<unsigned>(seeds.size()));
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (!error.empty()) throw std::runtime_error(preset + ": " + error);
  Runs out;
  for (auto& runs : per_seed)
    for (auto& r : runs) out[r.policy].push_back(std::move(r));
  return out;
}

std::vector<double> values(const Runs& runs, const std::string& policy, const std::string& metric) {
  std::vector<double> out;
  auto it = runs.find(policy);
  if (it == runs.end()) return out;
  for (const auto& r : it->second)
    if (auto v = r.metric(metric)) out.push_back(*v);
  return out;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<double> mean_metric(const Runs& runs, const std::string& policy,
                                  const std::string& metric) {
  return mean_of(values(runs, policy, metric));
}

double sum_metric(const Runs& runs, const std::string& policy, const std::string& metric) {
  double s = 0.0;
  for (double v : values(runs, policy, metric)) s += v;
  return s;
}

bool ge(const std::optional<double>& a, double b) { return a && *a >= b; }
bool le(const std::optional<double>& a, double b) { return a && *a <= b; }

// ---- criteria ----

Verdict brs_oracle() {
  Verdict v{1, "BRS oracle equivalence (sequences <= 8)"};
  std::size_t sequences = 0;
  std::size_t exact = 0;
  double worst = 0.0;
  for (int len = 0; len <= 8; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      ReputationLedger ledger;
      for (int k = 0; k < len; ++k) {
        RatingEvent ev;
        ev.id = static_cast<EventId>(k + 1);
        ev.trustee = 1;
        ev.context = 1;
        ev.deadline = 1;
        ev.completed_at = 1;
        ev.quality_ok = (bits >> k) & 1u;
        ledger.record_outcome(ev);
      }
      const BetaEvidence ev = ledger.pooled(1, 1);
      const auto truth =
          oracle::beta_mean(static_cast<int>(ev.positives), static_cast<int>(ev.negatives));
      // The ledger's counts, read back as a rational, must reproduce the oracle exactly.
      const auto from_counts = oracle::Rational::of(static_cast<std::int64_t>(ev.positives) + 1,
                                                    static_cast<std::int64_t>(ev.total()) + 2);
      const auto from_bits = oracle::beta_mean(__builtin_popcount(bits),
                                               len - __builtin_popcount(bits));
      exact += (from_counts == truth && truth == from_bits);
      worst = std::max(worst, std::abs(brs_score(ev) - truth.value()));
      worst = std::max(worst, std::abs(ledger.reputation_of(1, 1) - truth.value()));
      ++sequences;
    }
  }
  v.pass = exact == sequences && worst <= kRationalFloatTol;
  v.detail = "rational " + std::to_string(exact) + "/" + std::to_string(sequences) +
             ", max float error " + fmt(worst, 17) + " (tol 1e-12)";
  return v;
}

Verdict rdp(const std::vector<std::uint64_t>& seeds) {
  Verdict v{2, "RDP reputation oscillation (50 trustees / 250 trusters, 500 steps)"};
  const Runs runs = run_seeds("ch4-rdp",
                              {{"trustees", "50"}, {"trusters", "250"}, {"steps", "500"},
                               {"hon_share", "0.5"}, {"hon_success", "0.9"}},
                              {"brs2012"}, seeds);
  const auto hon = mean_metric(runs, "brs2012", "hon_reputation");
  const auto crossings = mean_metric(runs, "brs2012", "crossings_mean");
  const auto mins = values(runs, "brs2012", "crossings_min");
  const double min_cross = mins.empty() ? 0.0 : *std::min_element(mins.begin(), mins.end());
  v.pass = hon && *hon >= kRdpLow && *hon <= kRdpHigh && ge(crossings, kRdpCrossings);
  v.detail = "Hon reputation " + fmt(hon) + " in [0.35, 0.65], mean zero-crossings " +
             fmt(crossings, 2) + " >= 3 (fewest for any Hon trustee " + fmt(min_cross, 0) + ")";
  return v;
}

Verdict act_vs_static(const std::vector<std::uint64_t>& seeds) {
  Verdict v{3, "ACT' NAUL vs best static gamma (50/50/100, five witness mixes)"};
  const std::vector<std::string> mixes = {"BM80", "BM40", "Hon", "BS40", "BS80"};
  const std::vector<std::string> statics = {"static0", "static05", "static1"};
  std::vector<std::string> policies = statics;
  policies.push_back("actprime");
  double improvement_sum = 0.0;
  std::map<std::string, double> avg;
  std::ostringstream per_mix;
  for (const auto& mix : mixes) {
    const Runs runs = run_seeds("ch3-noncollusive",
                                {{"providers", "50"}, {"witnesses", "50"}, {"steps", "100"},
                                 {"warmup", "5"}, {"witness_mix", mix}},
                                policies, seeds);
    double best = 1.0;
    for (const auto& s : statics) {
      const double n = mean_metric(runs, s, "naul").value_or(1.0);
      best = std::min(best, n);
      avg[s] += n / static_cast<double>(mixes.size());
    }
    const double act = mean_metric(runs, "actprime", "naul").value_or(1.0);
    avg["actprime"] += act / static_cast<double>(mixes.size());
    const double imp = best > 0.0 ? 1.0 - act / best : 0.0;
    improvement_sum += imp;
    per_mix << ' ' << mix << '=' << fmt(imp * 100.0, 1) << '%';
  }
  const double improvement = improvement_sum / static_cast<double>(mixes.size());
  const double best_avg = std::min({avg["static0"], avg["static05"], avg["static1"]});
  v.pass = improvement >= kActImprovement;
  v.detail = "mean per-mix improvement " + fmt(improvement * 100.0, 1) + "% >= 10% (" +
             per_mix.str().substr(1) + "); ACT' " + fmt(avg["actprime"]) +
             " vs best static averaged " + fmt(best_avg);
  return v;
}

Verdict act_collusion(const std::vector<std::uint64_t>& seeds) {
  Verdict v{4, "ACT collusion power vs NoCred (collusive BS80, 50/50/100)"};
  const Runs runs = run_seeds("ch3-collusive",
                              {{"providers", "50"}, {"witnesses", "50"}, {"steps", "100"},
                               {"warmup", "5"}, {"witness_mix", "BS80"}},
                              {"act", "nocred"}, seeds);
  const auto act = mean_metric(runs, "act", "collusion_power");
  const auto nocred = mean_metric(runs, "nocred", "collusion_power");
  std::optional<double> reduction;
  if (act && nocred && *nocred > 0.0) reduction = 1.0 - *act / *nocred;
  v.pass = ge(reduction, kCollusionReduction);
  v.detail = "ACT " + fmt(act) + ", NoCred " + fmt(nocred) + ", reduction " +
             (reduction ? fmt(*reduction * 100.0, 1) + "%" : std::string("NA")) + " >= 50%";
  return v;
}

struct Ch6 {
  Runs runs;
};

Ch6 ch6_runs(const std::vector<std::uint64_t>& seeds) {
  return {run_seeds("ch6-comparison",
                    {{"workers", "200"}, {"requesters", "10"}, {"N_r", "40"}, {"steps", "1000"},
                     {"hon_x", "50"}},
                    {"amt", "brs2002e", "m2009e", "h2010e", "sword"}, seeds)};
}

Verdict lemma(const Ch6& ch6) {
  Verdict v{5, "SWORD queue bound Q <= theta + mu_max"};
  const double checks = sum_metric(ch6.runs, "sword", "lemma_checks");
  const double bad = sum_metric(ch6.runs, "sword", "lemma_violations");
  v.pass = checks > 0 && bad == 0;
  v.detail = fmt(bad, 0) + " violations in " + fmt(checks, 0) + " worker-step checks over " +
             std::to_string(values(ch6.runs, "sword", "lemma_checks").size()) + " SWORD runs";
  return v;
}

Verdict sword_welfare(const Ch6& ch6) {
  Verdict v{6, "SWORD welfare dominance (Hon50, 200 workers / 10 requesters)"};
  const auto sword = mean_metric(ch6.runs, "sword", "welfare");
  const auto brs = mean_metric(ch6.runs, "brs2002e", "welfare");
  const auto m09 = mean_metric(ch6.runs, "m2009e", "welfare");
  const auto h10 = mean_metric(ch6.runs, "h2010e", "welfare");
  const auto amt = mean_metric(ch6.runs, "amt", "welfare");
  v.pass = sword && brs && m09 && h10 && *sword >= kSwordOverBrs * *brs && *sword >= *m09 &&
           *sword >= *h10;
  v.detail = "U SWORD " + fmt(sword, 2) + " vs 1.5 x BRS2002e " +
             fmt(brs ? std::optional<double>(kSwordOverBrs * *brs) : std::nullopt, 2) +
             ", M2009e " + fmt(m09, 2) + ", H2010e " + fmt(h10, 2) + " (AMT " + fmt(amt, 2) + ")";
  return v;
}

Verdict sword_latency(const Ch6& ch6) {
  Verdict v{7, "SWORD HIT groups completed within 2 steps"};
  const auto within = mean_metric(ch6.runs, "sword", "within_2");
  v.pass = ge(within, kSwordWithin2);
  v.detail = "share " + fmt(within) + " >= 0.80";
  return v;
}

Verdict sword_fairness(const Ch6& ch6) {
  Verdict v{8, "SWORD fairness over Hon workers"};
  const auto sword = mean_metric(ch6.runs, "sword", "fairness_hon");
  const auto m09 = mean_metric(ch6.runs, "m2009e", "fairness_hon");
  const auto h10 = mean_metric(ch6.runs, "h2010e", "fairness_hon");
  v.pass = ge(sword, kSwordFairness) && le(m09, kExplorerFairness) && le(h10, kExplorerFairness);
  v.detail = "F_Hon SWORD " + fmt(sword) + " >= 0.95; M2009e " + fmt(m09) + ", H2010e " +
             fmt(h10) + " <= 0.90";
  return v;
}

struct Ch7 {
  std::map<int, Runs> by_hon;
};

Ch7 ch7_runs(const std::vector<std::uint64_t>& seeds) {
  Ch7 out;
  for (int x = 10; x <= 90; x += 10) {
    std::cerr << "  ch7-draft Hon" << x << '\n';
    out.by_hon[x] = run_seeds("ch7-draft",
                              {{"trustees", "100"}, {"trusters", "1000"}, {"steps", "1000"},
                               {"hon_x", std::to_string(x)}},
                              {"draft", "trd"}, seeds);
  }
  return out;
}

Verdict draft_fairness(const Ch7& ch7) {
  Verdict v{9, "DRAFT fairness Hon10-Hon90 (100 trustees / 1000 trusters)"};
  bool ok = true;
  double worst = 1.0;
  int worst_x = 0;
  double worst_effort = 1.0;
  for (const auto& [x, runs] : ch7.by_hon) {
    const auto f = mean_metric(runs, "draft", "fairness_hon");
    const auto fe = mean_metric(runs, "draft", "fairness_hon_effort");
    ok = ok && ge(f, kDraftFairness);
    if (f && *f < worst) {
      worst = *f;
      worst_x = x;
    }
    if (fe) worst_effort = std::min(worst_effort, *fe);
  }
  v.pass = ok && !ch7.by_hon.empty();
  v.detail = "lowest F_Hon " + fmt(worst) + " at Hon" + std::to_string(worst_x) +
             " (>= 0.99 required for all); by accepted effort the lowest is " + fmt(worst_effort);
  return v;
}

Verdict draft_timeliness(const Ch7& ch7) {
  Verdict v{10, "DRAFT accepted tasks on time; TRD on-time share"};
  double draft_done = 0.0;
  double draft_on_time = 0.0;
  double draft_swept = 0.0;
  std::vector<double> trd;
  for (const auto& [x, runs] : ch7.by_hon) {
    draft_done += sum_metric(runs, "draft", "completed");
    draft_on_time += sum_metric(runs, "draft", "completed_on_time");
    draft_swept += sum_metric(runs, "draft", "swept");
    for (double t : values(runs, "trd", "on_time")) trd.push_back(t);
  }
  const auto trd_mean = mean_of(trd);
  v.pass = draft_done > 0 && draft_on_time == draft_done && draft_swept == 0 &&
           le(trd_mean, kTrdOnTime);
  v.detail = "DRAFT " + fmt(draft_on_time, 0) + "/" + fmt(draft_done, 0) +
             " on time (100% required), TRD on-time share " + fmt(trd_mean) + " <= 0.50";
  return v;
}

Verdict v_tradeoff(const std::vector<std::uint64_t>& seeds) {
  Verdict v{11, "DRAFT V trade-off, V in {0.1, 1, 10, 100, 1000}"};
  const std::vector<std::string> vs = {"0.1", "1", "10", "100", "1000"};
  std::vector<double> welfare;
  std::vector<double> backlog;
  for (const auto& value : vs) {
    const Runs runs = run_seeds("ch7-draft", {{"V", value}, {"steps", "1000"}}, {"draft"}, seeds);
    welfare.push_back(mean_metric(runs, "draft", "welfare").value_or(0.0));
    backlog.push_back(mean_metric(runs, "draft", "mean_backlog").value_or(0.0));
  }
  const double interior = *std::max_element(welfare.begin() + 1, welfare.end() - 1);
  const bool peak = interior > welfare.front() && interior > welfare.back();
  bool monotone = true;
  for (std::size_t i = 1; i < backlog.size(); ++i) monotone = monotone && backlog[i] >= backlog[i - 1];
  v.pass = peak && monotone;
  std::ostringstream os;
  os << "welfare";
  for (double w : welfare) os << ' ' << fmt(w, 1);
  os << (peak ? " (interior maximum)" : " (no interior maximum)") << "; backlog";
  for (double b : backlog) os << ' ' << fmt(b, 3);
  os << (monotone ? " (non-decreasing)" : " (decreases)");
  v.detail = os.str();
  return v;
}

Verdict crn(const std::vector<std::uint64_t>& seeds) {
  Verdict v{12, "CRN fabrication defence (sigma 50%, usage 45%, 2000 iterations)"};
  const Runs runs = run_seeds("crn",
                              {{"steps", "2000"}, {"attack", "fabrication"}, {"sigma", "0.5"},
                               {"usage_rate", "0.45"}, {"su_count", "100"}},
                              {"trust", "notrust"}, seeds);
  const auto e1 = mean_metric(runs, "trust", "eps1");
  const auto e2 = mean_metric(runs, "trust", "eps2");
  const auto n1 = mean_metric(runs, "notrust", "eps1");
  const auto n2 = mean_metric(runs, "notrust", "eps2");
  v.pass = le(e1, kCrnTrustedEps) && le(e2, kCrnTrustedEps) && ge(n2, kCrnUntrustedEps2);
  v.detail = "with trust eps1 " + fmt(e1) + ", eps2 " + fmt(e2) + " (<= 0.05 each); without eps1 " +
             fmt(n1) + ", eps2 " + fmt(n2) + " (eps2 >= 0.20)";
  return v;
}

Verdict unit_suite() {
  Verdict v{13, "Unit suite and streaming/batch metric equivalence"};
  // 1000 random streams, folded both ways.
  Rng rng(20240601);
  std::size_t agree = 0;
  for (int s = 0; s < 1000; ++s) {
    const std::size_t n = 1 + uniform_index(rng, 500);
    std::vector<double> u(n);
    std::unique_ptr<bool[]> ok(new bool[n]);
    std::vector<std::uint64_t> counts(1 + uniform_index(rng, 40), 0);
    WelfareAccumulator w;
    NaulAccumulator a;
    FairnessAccumulator f(counts.size());
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = uniform(rng, -10.0, 10.0);
      w.add(u[i]);
      ok[i] = bernoulli(rng, 0.6);
      a.add(ok[i]);
      const std::size_t who = uniform_index(rng, counts.size());
      counts[who] += 1;
      f.add(who);
    }
    agree += *w.value() == *time_avg_welfare(u) && *a.value(5, 1) == *naul({ok.get(), n}, 5, 1) &&
             *f.value() == *fairness_index(counts);
  }
  const std::string cmd = std::string("\"") + TRUSTSIM_UNIT_BINARY + "\" --gtest_brief=1 > " +
                          (std::filesystem::temp_directory_path() / "trustsim_unit_acceptance.log")
                              .string() +
                          " 2>&1";
  const int rc = std::system(cmd.c_str());
  v.pass = agree == 1000 && rc == 0;
  v.detail = "streams agreeing " + std::to_string(agree) + "/1000; unit binary exit " +
             std::to_string(rc);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> only;
  std::uint64_t seed_count = 10;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else if (a == "--seeds" && i + 1 < argc) {
      seed_count = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: trustsim_acceptance [--strict] [--only 1,2,...] [--seeds N]\n";
      return 2;
    }
  }
  auto wanted = [&](std::initializer_list<int> ids) {
    if (only.empty()) return true;
    for (int id : ids)
      if (only.count(id)) return true;
    return false;
  };
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= seed_count; ++s) seeds.push_back(s);

  std::vector<Verdict> verdicts;
  auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = fn();
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "  criterion " << v.id << " done in " << fmt(v.seconds, 1) << " s\n";
    verdicts.push_back(std::move(v));
  };

  try {
    if (wanted({1})) timed([] { return brs_oracle(); });
    if (wanted({2})) timed([&] { return rdp(seeds); });
    if (wanted({3})) timed([&] { return act_vs_static(seeds); });
    if (wanted({4})) timed([&] { return act_collusion(seeds); });
    if (wanted({5, 6, 7, 8})) {
      const auto t0 = std::chrono::steady_clock::now();
      const Ch6 ch6 = ch6_runs(seeds);
      const double shared = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (auto fn : {lemma, sword_welfare, sword_latency, sword_fairness}) {
        Verdict v = fn(ch6);
        v.seconds = shared;
        if (wanted({v.id})) verdicts.push_back(std::move(v));
      }
    }
    if (wanted({9, 10})) {
      const auto t0 = std::chrono::steady_clock::now();
      const Ch7 ch7 = ch7_runs(seeds);
      const double shared = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (auto fn : {draft_fairness, draft_timeliness}) {
        Verdict v = fn(ch7);
        v.seconds = shared;
        if (wanted({v.id})) verdicts.push_back(std::move(v));
      }
    }
    if (wanted({11})) timed([&] { return v_tradeoff(seeds); });
    if (wanted({12})) timed([&] { return crn(seeds); });
    if (wanted({13})) timed([] { return unit_suite(); });
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << '\n';
    return 2;
  }

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  int failed = 0;
  for (const Verdict& v : verdicts) {
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << (v.id < 10 ? " " : "") << v.id << "] "
              << v.name << ": " << v.detail << "  (" << fmt(v.seconds, 1) << " s)\n";
  }
  std::cout << verdicts.size() - static_cast<std::size_t>(failed) << "/" << verdicts.size()
            << " criteria passed, " << seed_count << " seeds\n";
  return strict && failed > 0 ? 1 : 0;
}
