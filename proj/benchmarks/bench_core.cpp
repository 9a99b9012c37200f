#include <benchmark/benchmark.h>

#include <vector>

#include "trustsim/draft.hpp"
#include "trustsim/reputation.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/sword.hpp"
#include "trustsim/testbed/crowd_world.hpp"

using namespace trustsim;

static void BM_LedgerRecord(benchmark::State& state) {
  Rng rng(1);
  ReputationLedger ledger;
  EventId id = 0;
  for (auto _ : state) {
    RatingEvent ev;
    ev.id = ++id;
    ev.truster = static_cast<AgentId>(uniform_index(rng, 1000));
    ev.trustee = static_cast<AgentId>(uniform_index(rng, 200));
    ev.context = 1;
    ev.deadline = 3;
    ev.completed_at = 2;
    ev.quality_ok = bernoulli(rng, 0.7);
    benchmark::DoNotOptimize(ledger.record_outcome(ev));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LedgerRecord);

static void BM_SwordAllocate(benchmark::State& state) {
  Rng rng(2);
  std::vector<WorkerState> workers(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < workers.size(); ++i) {
    workers[i].id = static_cast<AgentId>(i);
    workers[i].reputation = uniform01(rng);
    workers[i].reputation_peak = std::max(workers[i].reputation, uniform01(rng));
    workers[i].capacity = 5;
    workers[i].backlog = uniform_index(rng, 10);
  }
  const SwordConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(allocate(workers, 40, cfg, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SwordAllocate)->Arg(200)->Arg(1000);

static void BM_AcceptPlan(benchmark::State& state) {
  const auto specs = default_contexts();
  std::vector<ContextQueueState> states(specs.size());
  std::vector<std::uint64_t> incoming(specs.size());
  Rng rng(3);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    states[i] = {uniform_index(rng, 20), uniform01(rng)};
    incoming[i] = uniform_index(rng, 15);
  }
  for (auto _ : state) benchmark::DoNotOptimize(accept_plan(states, incoming, specs, 25, 100));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AcceptPlan);

static void BM_CrowdWorldStep(benchmark::State& state) {
  CrowdConfig cfg;
  cfg.workers = 200;
  cfg.requesters = 10;
  cfg.warmup = 20;
  cfg.systems = {CrowdPolicy::sword};
  CrowdWorld world(cfg, 4);
  for (auto _ : state) world.advance_step();
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CrowdWorldStep);

BENCHMARK_MAIN();
