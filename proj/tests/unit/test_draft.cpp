#include <gtest/gtest.h>

#include "trustsim/draft.hpp"
#include "unit/frozen_values.hpp"

using namespace trustsim;

namespace {

AcceptedTask task(EventId id, ContextId c, std::uint32_t e, Step accepted, Step dl) {
  AcceptedTask t;
  t.id = id;
  t.context = c;
  t.effort = e;
  t.issued_at = accepted;
  t.accepted_at = accepted;
  t.deadline = dl;
  return t;
}

}  // namespace

TEST(Contexts, TableDefaults) {
  const auto cs = default_contexts();
  ASSERT_EQ(cs.size(), 5u);
  const double g[5] = {5, 4, 3, 2, 1};
  const std::uint32_t e[5] = {5, 4, 3, 2, 1};
  const Step t[5] = {1, 2, 2, 3, 3};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(cs[i].id, i + 1);
    EXPECT_EQ(cs[i].max_gain, g[i]);
    EXPECT_EQ(cs[i].effort, e[i]);
    EXPECT_EQ(cs[i].deadline, t[i]);
  }
}

TEST(Availability, Evaluated) {
  EXPECT_DOUBLE_EQ(availability_score(10, 0.9, 5, 100), frozen::kAvailability);
}

TEST(Availability, BreakEven) { EXPECT_EQ(availability_score(450, 0.9, 5, 100), 0.0); }

TEST(Availability, ZeroReputation) { EXPECT_EQ(availability_score(7, 0.0, 5, 100), -7.0); }

TEST(AcceptPlan, NonPositiveScoreAcceptsNothing) {
  const auto specs = default_contexts();
  std::vector<ContextQueueState> st(5, {0, 0.9});
  st[0] = {1000, 0.9};
  std::vector<std::uint64_t> in{3, 0, 0, 0, 0};
  const auto plan = accept_plan(st, in, specs, 25, 100);
  EXPECT_EQ(plan.accepted(1), 0u);
  EXPECT_EQ(plan.rejected(1), 3u);
}

TEST(AcceptPlan, BudgetFloors) {
  const std::vector<ContextSpec> specs{{1, 5, 5, 1}};
  std::vector<ContextQueueState> st{{0, 0.9}};
  std::vector<std::uint64_t> in{2};
  const auto plan = accept_plan(st, in, specs, 7, 100);
  EXPECT_EQ(plan.accepted(1), frozen::kAcceptedOfTwo);
  EXPECT_EQ(plan.rejected(1), 1u);
  EXPECT_EQ(plan.budget_left, 2u);
}

TEST(AcceptPlan, NothingIncoming) {
  const auto specs = default_contexts();
  std::vector<ContextQueueState> st(5);
  std::vector<std::uint64_t> in(5, 0);
  const auto plan = accept_plan(st, in, specs, 25, 100);
  for (ContextId c = 1; c <= 5; ++c) {
    EXPECT_EQ(plan.accepted(c), 0u);
    EXPECT_EQ(plan.rejected(c), 0u);
  }
}

TEST(AcceptPlan, RanksByScorePerEffort) {
  const auto specs = default_contexts();
  // Context 5 has the best a/e once context 1 is loaded.
  std::vector<ContextQueueState> st{{400, 0.9}, {0, 0.5}, {0, 0.5}, {0, 0.5}, {0, 0.9}};
  std::vector<std::uint64_t> in{5, 0, 0, 0, 30};
  const auto plan = accept_plan(st, in, specs, 25, 100);
  ASSERT_FALSE(plan.decisions.empty());
  EXPECT_EQ(plan.decisions.front().context, 5u);
  EXPECT_EQ(plan.accepted(5), 25u);
  EXPECT_EQ(plan.accepted(1), 0u);
}

TEST(ServeFifo, EmptyQueue) {
  TrusteeQueue q;
  Rng rng(1);
  EXPECT_TRUE(q.serve_fifo(5, 25, 1.0, 0, rng).empty());
}

TEST(ServeFifo, FiveTasksFitBudget) {
  TrusteeQueue q;
  for (EventId i = 1; i <= 5; ++i) q.push(task(i, 1, 5, 0, 3));
  Rng rng(1);
  EXPECT_EQ(static_cast<double>(q.serve_fifo(1, 25, 1.0, 0, rng).size()), frozen::kServedOfFive);
  EXPECT_TRUE(q.empty());
}

TEST(ServeFifo, HeadOfLineBlocks) {
  TrusteeQueue q;
  q.push(task(1, 1, 5, 0, 3));
  q.push(task(2, 5, 1, 0, 3));
  Rng rng(1);
  EXPECT_TRUE(q.serve_fifo(1, 4, 1.0, 0, rng).empty());
  EXPECT_EQ(q.backlog(), 2u);
}

TEST(ServeFifo, AcceptedThisStepWaits) {
  TrusteeQueue q;
  q.push(task(1, 1, 1, 4, 6));
  Rng rng(1);
  EXPECT_TRUE(q.serve_fifo(4, 25, 1.0, 0, rng).empty());
  EXPECT_EQ(q.serve_fifo(5, 25, 1.0, 0, rng).size(), 1u);
}

TEST(ServeFifo, CompletionCarriesTimestamps) {
  TrusteeQueue q;
  q.push(task(9, 2, 2, 3, 5));
  Rng rng(1);
  const auto evs = q.serve_fifo(4, 25, 1.0, 7, rng);
  ASSERT_EQ(evs.size(), 1u);
  EXPECT_EQ(evs[0].id, 9u);
  EXPECT_EQ(evs[0].trustee, 7u);
  EXPECT_EQ(*evs[0].completed_at, 4);
  EXPECT_EQ(evs[0].deadline, 5);
  EXPECT_TRUE(evs[0].quality_ok);
}
