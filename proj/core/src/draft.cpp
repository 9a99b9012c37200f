#include "trustsim/draft.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trustsim {

std::vector<ContextSpec> default_contexts() {
  return {{1, 5.0, 5, 1}, {2, 4.0, 4, 2}, {3, 3.0, 3, 2}, {4, 2.0, 2, 3}, {5, 1.0, 1, 3}};
}

double availability_score(double backlog, double reputation, double max_gain, double v) {
  return v * reputation * max_gain - backlog;
}

std::uint64_t AcceptPlan::accepted(ContextId c) const {
  for (const auto& d : decisions)
    if (d.context == c) return d.accepted;
  return 0;
}

std::uint64_t AcceptPlan::rejected(ContextId c) const {
  for (const auto& d : decisions)
    if (d.context == c) return d.rejected;
  return 0;
}

AcceptPlan accept_plan(std::span<const ContextQueueState> states,
                       std::span<const std::uint64_t> incoming,
                       std::span<const ContextSpec> specs, std::uint64_t budget, double v) {
  if (states.size() != specs.size() || incoming.size() != specs.size())
    throw std::invalid_argument("accept_plan inputs are not aligned");
  if (v <= 0.0) throw std::invalid_argument("V must be positive");
  AcceptPlan plan;
  std::vector<std::size_t> order(specs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> a(specs.size());
  std::vector<double> ratio(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    a[i] = availability_score(static_cast<double>(states[i].backlog), states[i].reputation,
                              specs[i].max_gain, v);
    ratio[i] = a[i] / static_cast<double>(specs[i].effort);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (ratio[x] != ratio[y]) return ratio[x] > ratio[y];
    if (specs[x].max_gain != specs[y].max_gain) return specs[x].max_gain > specs[y].max_gain;
    return specs[x].id < specs[y].id;
  });
  std::uint64_t left = budget;
  for (std::size_t i : order) {
    ContextDecision d;
    d.context = specs[i].id;
    d.a = a[i];
    d.a_over_e = ratio[i];
    d.lambda = incoming[i];
    if (ratio[i] > 0.0 && d.lambda > 0) {
      const std::uint64_t fit = left / specs[i].effort;
      d.accepted = std::min(d.lambda, fit);
      left -= d.accepted * specs[i].effort;
    }
    d.rejected = d.lambda - d.accepted;
    plan.decisions.push_back(d);
  }
  plan.budget_left = left;
  return plan;
}

void TrusteeQueue::push(const AcceptedTask& task) {
  if (task.context >= per_context_.size()) per_context_.resize(task.context + 1, 0);
  per_context_[task.context] += 1;
  effort_ += task.effort;
  tasks_.push_back(task);
}

void TrusteeQueue::forget(const AcceptedTask& t) {
  per_context_[t.context] -= 1;
  effort_ -= t.effort;
}

std::vector<RatingEvent> TrusteeQueue::serve_fifo(Step now, std::uint64_t budget,
                                                  double success_prob, AgentId trustee,
                                                  Rng& rng) {
  std::vector<RatingEvent> done;
  while (!tasks_.empty()) {
    const AcceptedTask& t = tasks_.front();
    if (t.accepted_at >= now || t.effort > budget) break;
    budget -= t.effort;
    RatingEvent ev;
    ev.id = t.id;
    ev.truster = t.truster;
    ev.trustee = trustee;
    ev.context = t.context;
    ev.issued_at = t.issued_at;
    ev.started_at = t.accepted_at;
    ev.completed_at = now;
    ev.deadline = t.deadline;
    ev.quality_ok = bernoulli(rng, success_prob);
    done.push_back(ev);
    forget(t);
    tasks_.pop_front();
  }
  return done;
}

std::vector<RatingEvent> TrusteeQueue::sweep(Step now, AgentId trustee) {
  std::vector<RatingEvent> dropped;
  bool any = false;
  for (const AcceptedTask& t : tasks_) {
    if (t.deadline < now) {
      any = true;
      break;
    }
  }
  if (!any) return dropped;
  std::deque<AcceptedTask> keep;
  for (const AcceptedTask& t : tasks_) {
    if (t.deadline < now) {
      RatingEvent ev;
      ev.id = t.id;
      ev.truster = t.truster;
      ev.trustee = trustee;
      ev.context = t.context;
      ev.issued_at = t.issued_at;
      ev.started_at = t.accepted_at;
      ev.deadline = t.deadline;
      dropped.push_back(ev);
      forget(t);
    } else {
      keep.push_back(t);
    }
  }
  tasks_.swap(keep);
  return dropped;
}

}  // namespace trustsim
