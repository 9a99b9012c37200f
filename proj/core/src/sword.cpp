#include "trustsim/sword.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "trustsim/errors.hpp"

namespace trustsim {

double target_queue(const WorkerState& w, const SwordConfig& cfg) {
  return cfg.n_weight * static_cast<double>(w.capacity) + cfg.v * cfg.max_gain * w.reputation_peak;
}

double desirability(const WorkerState& w, const SwordConfig& cfg) {
  return target_queue(w, cfg) - static_cast<double>(w.backlog) -
         cfg.v * ((1.0 - w.reputation) * cfg.max_gain + cfg.task_cost);
}

AllocationPlan allocate_exploit(std::span<const WorkerState> workers, std::uint64_t incoming,
                                const SwordConfig& cfg) {
  AllocationPlan plan;
  plan.counts.assign(workers.size(), 0);
  struct Ranked {
    std::size_t index;
    double d;
  };
  std::vector<Ranked> eligible;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    const WorkerState& w = workers[i];
    if (w.reputation < cfg.rep_floor) continue;
    const double d = desirability(w, cfg);
    if (d > 0.0) eligible.push_back({i, d});
  }
  std::sort(eligible.begin(), eligible.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.d != b.d) return a.d > b.d;
    const WorkerState& wa = workers[a.index];
    const WorkerState& wb = workers[b.index];
    if (wa.reputation != wb.reputation) return wa.reputation > wb.reputation;
    if (wa.backlog != wb.backlog) return wa.backlog < wb.backlog;
    return wa.id < wb.id;
  });
  std::uint64_t remaining = incoming;
  for (const Ranked& r : eligible) {
    if (remaining == 0) break;
    const std::uint64_t a = std::min<std::uint64_t>(remaining, workers[r.index].capacity);
    plan.counts[r.index] = a;
    remaining -= a;
  }
  plan.leftover = remaining;
  return plan;
}

AllocationPlan allocate_explore(std::span<const WorkerState> workers, std::uint64_t incoming,
                                const SwordConfig& cfg, Rng& rng) {
  AllocationPlan plan;
  plan.explored = true;
  plan.counts.assign(workers.size(), 0);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    const double backlog = static_cast<double>(workers[i].backlog);
    if (workers[i].capacity > 0 && backlog <= target_queue(workers[i], cfg)) open.push_back(i);
  }
  std::uint64_t remaining = incoming;
  while (remaining > 0 && !open.empty()) {
    const std::size_t pick = uniform_index(rng, open.size());
    const std::size_t i = open[pick];
    plan.counts[i] += 1;
    --remaining;
    if (plan.counts[i] >= workers[i].capacity) {
      open[pick] = open.back();
      open.pop_back();
    }
  }
  plan.leftover = remaining;
  return plan;
}

AllocationPlan allocate(std::span<const WorkerState> workers, std::uint64_t incoming,
                        const SwordConfig& cfg, Rng& rng) {
  if (bernoulli(rng, cfg.explore_prob)) return allocate_explore(workers, incoming, cfg, rng);
  return allocate_exploit(workers, incoming, cfg);
}

std::uint64_t step_queue(std::uint64_t backlog, std::uint64_t served, std::uint64_t arrivals) {
  if (served > backlog)
    throw ContractViolation("served " + std::to_string(served) + " exceeds backlog " +
                            std::to_string(backlog));
  return backlog - served + arrivals;
}

std::uint64_t serve_capped(std::uint64_t backlog, std::uint32_t capacity) {
  return std::min<std::uint64_t>(backlog, capacity);
}

double step_welfare(std::span<const Completion> completions, std::uint64_t allocations,
                    const SwordConfig& cfg) {
  double gain = 0.0;
  for (const Completion& c : completions)
    if (c.on_time && c.quality_ok) gain += cfg.max_gain;
  return gain - cfg.task_cost * static_cast<double>(allocations);
}

bool QueueBoundMonitor::check(std::span<const WorkerState> after, std::span<const double> theta) {
  bool ok = true;
  for (std::size_t i = 0; i < after.size(); ++i) {
    ++checks_;
    if (static_cast<double>(after[i].backlog) > theta[i] + after[i].capacity) {
      ++violations_;
      ok = false;
    }
  }
  return ok;
}

}  // namespace trustsim
