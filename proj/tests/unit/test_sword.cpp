#include <gtest/gtest.h>

#include "trustsim/errors.hpp"
#include "trustsim/sword.hpp"
#include "unit/frozen_values.hpp"

using namespace trustsim;

namespace {

WorkerState worker(AgentId id, double tau, double peak, std::uint32_t cap, std::uint64_t q) {
  return WorkerState{id, tau, peak, cap, q};
}

}  // namespace

TEST(SwordConfig, TableDefaults) {
  const SwordConfig c;
  EXPECT_EQ(c.max_gain, 1.0);
  EXPECT_EQ(c.task_cost, 0.2);
  EXPECT_EQ(c.n_weight, 1.0);
  EXPECT_EQ(c.v, 2.0);
  EXPECT_EQ(c.rep_floor, 0.6);
  EXPECT_EQ(c.explore_prob, 0.1);
}

TEST(TargetQueue, TableValues) {
  EXPECT_DOUBLE_EQ(target_queue(worker(0, 1.0, 1.0, 5, 0), {}), frozen::kTheta7);
}

TEST(TargetQueue, ZeroV) {
  SwordConfig c;
  c.v = 0.0;
  EXPECT_EQ(target_queue(worker(0, 1.0, 1.0, 5, 0), c), 5.0);
}

TEST(TargetQueue, ZeroPeak) { EXPECT_EQ(target_queue(worker(0, 0.0, 0.0, 5, 0), {}), 5.0); }

TEST(Desirability, Evaluated) {
  // theta = 7 needs peak 1 with capacity 5
  EXPECT_NEAR(desirability(worker(0, 0.6, 1.0, 5, 0), {}), frozen::kDesirability, 1e-12);
}

TEST(Desirability, OverfullQueueIsNegative) {
  EXPECT_LT(desirability(worker(0, 0.9, 1.0, 5, 8), {}), 0.0);
}

TEST(Desirability, PerfectWorkerNoCost) {
  SwordConfig c;
  c.task_cost = 0.0;
  const auto w = worker(0, 1.0, 1.0, 5, 0);
  EXPECT_EQ(desirability(w, c), target_queue(w, c));
}

TEST(Allocate, NothingIncoming) {
  std::vector<WorkerState> ws{worker(0, 0.9, 0.9, 5, 0), worker(1, 0.8, 0.8, 5, 0)};
  Rng rng(1);
  const auto plan = allocate(ws, 0, {}, rng);
  EXPECT_EQ(plan.counts, (std::vector<std::uint64_t>{0, 0}));
  EXPECT_EQ(plan.leftover, 0u);
}

TEST(Allocate, SingleWorkerTakesAll) {
  std::vector<WorkerState> ws{worker(0, 0.9, 0.9, 5, 0)};
  const auto plan = allocate_exploit(ws, 3, {});
  EXPECT_EQ(plan.counts[0], 3u);
  EXPECT_EQ(plan.leftover, 0u);
}

TEST(Allocate, OverfullWorkerGetsNothing) {
  std::vector<WorkerState> ws{worker(0, 0.9, 1.0, 5, 8), worker(1, 0.9, 1.0, 5, 0)};
  const auto plan = allocate_exploit(ws, 10, {});
  EXPECT_EQ(plan.counts[0], 0u);
  EXPECT_EQ(plan.counts[1], 5u);
  EXPECT_EQ(plan.leftover, 5u);
}

TEST(Allocate, NoEligibleWorkerLeavesEverything) {
  std::vector<WorkerState> ws{worker(0, 0.2, 0.2, 5, 0)};
  const auto plan = allocate_exploit(ws, 4, {});
  EXPECT_EQ(plan.leftover, 4u);
}

TEST(Allocate, TieBreaksOnReputationThenBacklogThenId) {
  SwordConfig c;
  c.v = 0.0;  // D = N * mu - Q
  std::vector<WorkerState> ws{worker(3, 0.7, 0.7, 4, 1), worker(1, 0.9, 0.9, 4, 1),
                              worker(2, 0.7, 0.7, 3, 0)};
  const auto plan = allocate_exploit(ws, 3, c);
  EXPECT_EQ(plan.counts, (std::vector<std::uint64_t>{0, 3, 0}));
}

TEST(StepQueue, ServedCappedAtBacklog) {
  EXPECT_EQ(step_queue(3, serve_capped(3, 5), 2), frozen::kStepQueueA);
}

TEST(StepQueue, Idle) { EXPECT_EQ(step_queue(0, 0, 0), 0u); }

TEST(StepQueue, SteadyState) { EXPECT_EQ(step_queue(10, 5, 5), frozen::kStepQueueB); }

TEST(StepQueue, ServingMoreThanQueuedIsContractViolation) {
  EXPECT_THROW(step_queue(3, 5, 0), ContractViolation);
}

TEST(StepWelfare, NoActivity) { EXPECT_EQ(step_welfare({}, 0, {}), 0.0); }

TEST(StepWelfare, FiveGood) {
  std::vector<Completion> c(5, Completion{true, true});
  EXPECT_NEAR(step_welfare(c, 5, {}), frozen::kWelfare, 1e-12);
}

TEST(StepWelfare, AllLate) {
  std::vector<Completion> c(4, Completion{false, true});
  EXPECT_NEAR(step_welfare(c, 6, {}), -0.2 * 6, 1e-12);
}

TEST(QueueBoundMonitor, CountsBreaches) {
  QueueBoundMonitor m;
  std::vector<WorkerState> ws{worker(0, 0.9, 1.0, 5, 12), worker(1, 0.9, 1.0, 5, 13)};
  std::vector<double> theta{7.0, 7.0};
  EXPECT_FALSE(m.check(ws, theta));
  EXPECT_EQ(m.violations(), 1u);
  EXPECT_EQ(m.checks(), 2u);
}
