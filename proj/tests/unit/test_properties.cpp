#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <gtest/gtest.h>

#include "trustsim/act.hpp"
#include "trustsim/baselines.hpp"
#include "trustsim/crn.hpp"
#include "trustsim/draft.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/sword.hpp"
#include "trustsim/testbed/draft_world.hpp"
#include "unit/gen.hpp"

using namespace trustsim;

namespace {

RatingEvent random_event(gen::Gen& g, EventId id) {
  RatingEvent ev;
  ev.id = id;
  ev.truster = static_cast<AgentId>(g.integer(0, 4));
  ev.trustee = static_cast<AgentId>(g.integer(0, 3));
  ev.context = static_cast<ContextId>(g.integer(1, 2));
  ev.issued_at = g.integer(0, 5);
  ev.started_at = ev.issued_at + g.integer(0, 2);
  ev.deadline = ev.started_at + g.integer(1, 4);
  if (g.coin(0.9)) ev.completed_at = ev.started_at + g.integer(0, 8);
  ev.quality_ok = g.coin(0.7);
  return ev;
}

}  // namespace

// ---- reputation core ----

TEST(ReputationProperty, BrsStrictlyMonotone) {
  gen::for_all(500, 1, [](gen::Gen& g) {
    const BetaEvidence ev{g.count(1000), g.count(1000)};
    const double s = brs_score(ev);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_GT(brs_score({ev.positives + 1, ev.negatives}), s);
    EXPECT_LT(brs_score({ev.positives, ev.negatives + 1}), s);
  });
}

TEST(ReputationProperty, EachEventMovesExactlyOneCountByOne) {
  gen::for_all(100, 2, [](gen::Gen& g) {
    ReputationLedger ledger;
    for (EventId id = 1; id <= 60; ++id) {
      const RatingEvent ev = random_event(g, id);
      const BetaEvidence before = ledger.local(ev.trustee, ev.context, ev.truster);
      const Outcome o = ledger.record_outcome(ev);
      const BetaEvidence after = ledger.local(ev.trustee, ev.context, ev.truster);
      const std::uint64_t dp = after.positives - before.positives;
      const std::uint64_t dn = after.negatives - before.negatives;
      EXPECT_EQ(dp + dn, 1u);
      EXPECT_EQ(dp == 1, o == Outcome::positive);
    }
    EXPECT_EQ(ledger.event_count(), 60u);
  });
}

TEST(ReputationProperty, LateSuccessEqualsOnTimeFailure) {
  gen::for_all(100, 3, [](gen::Gen& g) {
    ReputationLedger late;
    ReputationLedger failed;
    for (EventId id = 1; id <= 40; ++id) {
      RatingEvent ev = random_event(g, id);
      ev.completed_at = ev.started_at + g.integer(0, 8);
      RatingEvent twin = ev;
      if (*ev.completed_at > ev.deadline && ev.quality_ok) {
        twin.completed_at = ev.deadline;
        twin.quality_ok = false;
      }
      late.record_outcome(ev);
      failed.record_outcome(twin);
    }
    EXPECT_TRUE(late == failed);
  });
}

TEST(ReputationProperty, ExpiredTaskNeverPositive) {
  gen::for_all(1000, 4, [](gen::Gen& g) {
    const RatingEvent ev = random_event(g, 1);
    if (classify(ev, {}) == Outcome::positive) {
      ASSERT_TRUE(ev.completed_at.has_value());
      EXPECT_LE(*ev.completed_at, ev.deadline);
      EXPECT_TRUE(ev.quality_ok);
    }
  });
}

TEST(ReputationProperty, RunningMeanMatchesRecompute) {
  gen::for_all(50, 5, [](gen::Gen& g) {
    ReputationLedger ledger;
    for (int k = 0; k < 200; ++k)
      ledger.record(static_cast<AgentId>(g.integer(0, 30)), 0, 1,
                    g.coin(0.6) ? Outcome::positive : Outcome::negative);
    EXPECT_NEAR(ledger.reputation_of(0, 1), ledger.reputation_exact(0, 1), 1e-12);
  });
}

// ---- ACT ----

TEST(ActProperty, SoftmaxSumsToOneAndKeepsOrder) {
  gen::for_all(300, 6, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 12));
    std::vector<double> p(n);
    for (double& x : p) x = g.real(-50.0, 50.0);
    std::vector<double> pi(n);
    softmax(p, pi);
    EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-9);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (p[i] > p[j]) EXPECT_GE(pi[i], pi[j]);
  });
}

TEST(ActProperty, CredibilitiesNormalizeAfterUpdate) {
  gen::for_all(100, 7, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 10));
    std::vector<WitnessProfile> w(n);
    std::vector<WitnessProfile*> ptrs;
    for (auto& x : w) ptrs.push_back(&x);
    SourceWeights sw;
    for (int round = 0; round < 20; ++round) {
      std::vector<Testimony> ts(n);
      for (auto& t : ts) t.value = g.real(0.0, 1.0);
      const bool ok = g.coin();
      update_witness_credibilities(ptrs, ts, ok ? 4.0 : -1.0, ok, sw, {});
      double sum = 0.0;
      for (const auto& x : w) sum += x.credibility;
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  });
}

TEST(ActProperty, SourceSharesStayComplementary) {
  gen::for_all(200, 8, [](gen::Gen& g) {
    SourceWeights sw;
    for (int k = 0; k < 50; ++k) {
      update_source_preference(sw, g.coin(), g.coin(), g.coin(), {});
      EXPECT_NEAR(sw.pi_direct + sw.pi_indirect, 1.0, 1e-9);
      EXPECT_GE(sw.gamma(), 0.0);
      EXPECT_LE(sw.gamma(), 1.0);
    }
  });
}

TEST(ActProperty, BaselineConvergesGeometrically) {
  gen::for_all(50, 9, [](gen::Gen& g) {
    ActConfig cfg;
    cfg.baseline_mix = g.real(0.05, 0.95);
    const double r = g.coin() ? 4.0 : -1.0;
    WitnessProfile w;
    WitnessProfile* ptr = &w;
    Testimony t;
    SourceWeights sw;
    for (int k = 1; k <= 30; ++k) {
      update_witness_credibilities(std::span<WitnessProfile*>(&ptr, 1), std::span(&t, 1), r,
                                   true, sw, cfg);
      EXPECT_NEAR(sw.baseline_interaction, r * (1.0 - std::pow(cfg.baseline_mix, k)), 1e-9);
    }
  });
}

// ---- SWORD ----

TEST(SwordProperty, QueueBoundHoldsUnderRandomDynamics) {
  gen::for_all(40, 10, [](gen::Gen& g) {
    SwordConfig cfg;
    cfg.v = g.real(0.0, 20.0);
    cfg.explore_prob = g.real(0.0, 0.5);
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 30));
    std::vector<WorkerState> ws(n);
    for (std::size_t i = 0; i < n; ++i) {
      ws[i].id = static_cast<AgentId>(i);
      ws[i].capacity = static_cast<std::uint32_t>(g.integer(1, 8));
      ws[i].reputation = g.real(0.0, 1.0);
      ws[i].reputation_peak = ws[i].reputation;
    }
    QueueBoundMonitor monitor;
    for (int t = 0; t < 200; ++t) {
      const std::uint64_t incoming = g.count(n * 10);
      std::vector<double> theta(n);
      for (std::size_t i = 0; i < n; ++i) theta[i] = target_queue(ws[i], cfg);
      const auto plan = allocate(ws, incoming, cfg, g.rng());
      ASSERT_EQ(std::accumulate(plan.counts.begin(), plan.counts.end(), std::uint64_t{0}) +
                    plan.leftover,
                incoming);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_LE(plan.counts[i], ws[i].capacity);
        if (!plan.explored && plan.counts[i] > 0) EXPECT_GE(ws[i].reputation, cfg.rep_floor);
        ws[i].backlog += plan.counts[i];
      }
      monitor.check(ws, theta);
      for (auto& w : ws) {
        const auto served = g.count(serve_capped(w.backlog, w.capacity));
        w.backlog = step_queue(w.backlog, served, 0);
        w.reputation = std::clamp(w.reputation + g.real(-0.05, 0.05), 0.0, 1.0);
        w.reputation_peak = std::max(w.reputation_peak, w.reputation);
      }
    }
    EXPECT_EQ(monitor.violations(), 0u);
  });
}

TEST(SwordProperty, DesirabilityStrictlyDecreasingInBacklog) {
  gen::for_all(300, 11, [](gen::Gen& g) {
    WorkerState w;
    w.reputation = g.real(0.0, 1.0);
    w.reputation_peak = std::max(w.reputation, g.real(0.0, 1.0));
    w.capacity = static_cast<std::uint32_t>(g.integer(1, 10));
    w.backlog = g.count(50);
    WorkerState more = w;
    more.backlog += 1 + g.count(5);
    EXPECT_LT(desirability(more, {}), desirability(w, {}));
  });
}

TEST(SwordProperty, SameSeedSamePlan) {
  gen::for_all(50, 12, [](gen::Gen& g) {
    std::vector<WorkerState> ws(10);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      ws[i].id = static_cast<AgentId>(i);
      ws[i].reputation = ws[i].reputation_peak = g.real(0.0, 1.0);
      ws[i].capacity = 3;
    }
    const auto seed = g.count(1u << 30);
    SwordConfig cfg;
    cfg.explore_prob = 0.5;
    Rng a(seed);
    Rng b(seed);
    const auto pa = allocate(ws, 17, cfg, a);
    const auto pb = allocate(ws, 17, cfg, b);
    EXPECT_EQ(pa.counts, pb.counts);
    EXPECT_EQ(pa.explored, pb.explored);
  });
}

// ---- DRAFT ----

TEST(DraftProperty, PlansRespectBudgetAndDemand) {
  const auto specs = default_contexts();
  gen::for_all(500, 13, [&](gen::Gen& g) {
    std::vector<ContextQueueState> st(specs.size());
    std::vector<std::uint64_t> in(specs.size());
    for (std::size_t c = 0; c < specs.size(); ++c) {
      st[c] = {g.count(200), g.real(0.0, 1.0)};
      in[c] = g.count(20);
    }
    const std::uint64_t budget = g.count(40);
    const double v = g.real(0.0, 200.0);
    const auto plan = accept_plan(st, in, specs, budget, v);
    std::uint64_t effort = 0;
    double last_ratio = std::numeric_limits<double>::infinity();
    std::uint64_t left = budget;
    for (const auto& d : plan.decisions) {
      const auto& spec = specs.at(d.context - 1);
      EXPECT_LE(d.accepted, in.at(d.context - 1));
      EXPECT_EQ(d.accepted + d.rejected, in.at(d.context - 1));
      EXPECT_LE(d.a_over_e, last_ratio);
      last_ratio = d.a_over_e;
      const std::uint64_t expect = d.a > 0.0 ? std::min(in.at(d.context - 1), left / spec.effort) : 0;
      EXPECT_EQ(d.accepted, expect);
      left -= d.accepted * spec.effort;
      effort += d.accepted * spec.effort;
    }
    EXPECT_LE(effort, budget);
    EXPECT_EQ(plan.budget_left, budget - effort);
    for (ContextId c = 1; c <= specs.size(); ++c)
      EXPECT_EQ(plan.accepted(c) + plan.rejected(c), in[c - 1]);
  });
}

TEST(DraftProperty, ServiceNeverExceedsBudget) {
  gen::for_all(200, 14, [](gen::Gen& g) {
    TrusteeQueue q;
    const int n = static_cast<int>(g.integer(0, 30));
    for (int k = 0; k < n; ++k) {
      AcceptedTask t;
      t.id = static_cast<EventId>(k + 1);
      t.context = static_cast<ContextId>(g.integer(1, 5));
      t.effort = static_cast<std::uint32_t>(g.integer(1, 5));
      t.deadline = 10;
      q.push(t);
    }
    const std::uint64_t budget = g.count(40);
    const std::uint64_t before = q.backlog_effort();
    const auto done = q.serve_fifo(1, budget, 1.0, 0, g.rng());
    EXPECT_LE(before - q.backlog_effort(), budget);
    EXPECT_EQ(q.backlog() + done.size(), static_cast<std::size_t>(n));
  });
}

TEST(DraftProperty, AcceptedTasksFinishOnTime) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    DraftConfig cfg;
    cfg.trustees = 40;
    cfg.trusters = 400;
    cfg.steps = 150;
    DraftWorld w(cfg, seed);
    w.run();
    const auto r = w.report();
    EXPECT_GT(r.completed, 0u);
    EXPECT_EQ(r.completed_on_time, r.completed) << "seed " << seed;
    EXPECT_EQ(r.swept, 0u);
  }
}

// ---- baselines ----

TEST(BaselineProperty, M2002NonDecreasingAndClamped) {
  gen::for_all(100, 15, [](gen::Gen& g) {
    const double eps = g.real(0.01, 0.5);
    const double conf = g.real(0.5, 0.99);
    double last = 0.0;
    for (std::uint64_t n = 0; n < 400; n += 1 + g.count(5)) {
      const double v = gamma_m2002(n, eps, conf);
      EXPECT_GE(v, last);
      EXPECT_LE(v, 1.0);
      last = v;
    }
  });
}

TEST(BaselineProperty, GreedyNeverBelowThreshold) {
  gen::for_all(300, 16, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 60));
    std::vector<RatedWorker> ws(n);
    for (std::size_t i = 0; i < n; ++i) ws[i] = {static_cast<AgentId>(i), g.real(0.0, 1.0), 0};
    const double th = g.real(0.0, 1.0);
    const std::uint64_t nr = g.count(50);
    const auto plan = greedy_hit_allocate(ws, nr, th);
    if (!plan) return;
    EXPECT_EQ(plan->total(), nr);
    for (std::size_t i = 0; i < n; ++i)
      if (plan->counts[i] > 0) EXPECT_GE(ws[i].reputation, th);
  });
}

TEST(BaselineProperty, AmtCapacityAndConservation) {
  gen::for_all(300, 17, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(0, 20));
    std::vector<WorkerPull> pulls(n);
    std::uint64_t cap = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pulls[i] = {static_cast<AgentId>(i), static_cast<std::uint32_t>(g.integer(0, 6))};
      cap += pulls[i].capacity;
    }
    const std::uint64_t open = g.count(80);
    const auto got = amt_fcfs_match(open, pulls);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(got[i], pulls[i].capacity);
    EXPECT_EQ(std::accumulate(got.begin(), got.end(), std::uint64_t{0}), std::min(open, cap));
  });
}

// ---- metrics ----

TEST(MetricsProperty, FairnessScaleInvariant) {
  gen::for_all(300, 18, [](gen::Gen& g) {
    auto c = g.counts(static_cast<std::size_t>(g.integer(1, 20)), 100);
    c[0] += 1;
    const auto k = 1 + g.count(50);
    auto scaled = c;
    for (auto& x : scaled) x *= k;
    const double f = *fairness_index(c);
    EXPECT_NEAR(*fairness_index(scaled), f, 1e-12);
    EXPECT_GT(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  });
}

TEST(MetricsProperty, NaulExtremesSumToOne) {
  gen::for_all(200, 19, [](gen::Gen& g) {
    const double cost = g.real(0.01, 10.0);
    const double gain = cost + g.real(0.01, 10.0);
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 50));
    const std::unique_ptr<bool[]> a(new bool[n]);
    const std::unique_ptr<bool[]> b(new bool[n]);
    std::fill_n(a.get(), n, true);
    std::fill_n(b.get(), n, false);
    EXPECT_NEAR(*naul({a.get(), n}, gain, cost) + *naul({b.get(), n}, gain, cost), 1.0, 1e-12);
  });
}

TEST(MetricsProperty, StreamingMatchesBatch) {
  gen::for_all(200, 20, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 300));
    const auto flags = g.bools(n, g.real(0.0, 1.0));
    std::unique_ptr<bool[]> arr(new bool[n]);
    NaulAccumulator nacc;
    WelfareAccumulator wacc;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      arr[i] = flags[i];
      nacc.add(flags[i]);
      u[i] = g.real(-5.0, 5.0);
      wacc.add(u[i]);
    }
    EXPECT_EQ(*nacc.value(5, 1), *naul({arr.get(), n}, 5, 1));
    EXPECT_EQ(*wacc.value(), *time_avg_welfare(u));
    const std::size_t m = static_cast<std::size_t>(g.integer(1, 30));
    FairnessAccumulator facc(m);
    std::vector<std::uint64_t> counts(m, 0);
    for (int k = 0; k < 100; ++k) {
      const auto who = static_cast<std::size_t>(g.count(m - 1));
      facc.add(who);
      counts[who] += 1;
    }
    EXPECT_EQ(*facc.value(), *fairness_index(counts));
  });
}

// ---- CRN ----

TEST(CrnProperty, ContextTrustBoundedAndMonotone) {
  gen::for_all(300, 21, [](gen::Gen& g) {
    SuTrustRecord r;
    r.rho = g.coin() ? 1.0 : 0.9;
    const auto len = g.integer(0, 19);
    for (int k = 0; k < len; ++k)
      r.window.push_back({static_cast<double>(g.integer(0, 1)), static_cast<double>(g.integer(0, 20))});
    const double before = context_trust(r);
    EXPECT_GE(before, 0.0);
    EXPECT_LE(before, 1.0);
    SuTrustRecord up = r;
    up.window.push_back({1.0, 0.0});
    const double after = context_trust(up);
    if (!r.window.empty()) EXPECT_GE(after, before - 1e-12);
    EXPECT_LE(after, 1.0);
  });
}

TEST(CrnProperty, NegatingVerdictsNegatesAggregate) {
  gen::for_all(300, 22, [](gen::Gen& g) {
    const std::size_t n = static_cast<std::size_t>(g.integer(0, 20));
    std::vector<SensingReport> sus(n);
    std::vector<double> tau(n);
    for (std::size_t i = 0; i < n; ++i) {
      sus[i] = {static_cast<AgentId>(i), static_cast<int>(g.integer(-1, 1)), 0.5};
      tau[i] = g.real(0.0, 1.0);
    }
    SensingReport bs{99, static_cast<int>(g.integer(-1, 1)), 0.5};
    const double theta = g.real(0.0, 1.0);
    const auto d = aggregate_and_decide(bs, sus, tau, theta, {});
    for (auto& s : sus) s.verdict = -s.verdict;
    bs.verdict = -bs.verdict;
    const auto neg = aggregate_and_decide(bs, sus, tau, theta, {});
    EXPECT_NEAR(neg.aggregate, -d.aggregate, 1e-12);
    EXPECT_EQ(neg.decision, -d.decision);
  });
}
