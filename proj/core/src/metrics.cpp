#include "trustsim/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace trustsim {

namespace {
double naul_from_counts(std::uint64_t successes, std::uint64_t failures, double gain,
                        double cost) {
  const double hi = gain - cost;
  const double lo = -cost;
  const double n = static_cast<double>(successes + failures);
  const double mean =
      (static_cast<double>(successes) * hi + static_cast<double>(failures) * lo) / n;
  return 1.0 - (mean - lo) / (hi - lo);
}
}  // namespace

std::optional<double> naul(std::span<const bool> outcomes, double gain, double cost) {
  if (outcomes.empty()) return std::nullopt;
  std::uint64_t s = 0;
  for (bool o : outcomes) s += o ? 1 : 0;
  return naul_from_counts(s, outcomes.size() - s, gain, cost);
}

std::optional<double> NaulAccumulator::value(double gain, double cost) const {
  if (count() == 0) return std::nullopt;
  return naul_from_counts(successes_, failures_, gain, cost);
}

std::optional<double> collusion_power(std::span<const std::uint64_t> tries_per_consumer,
                                      std::uint64_t interactions_each) {
  if (tries_per_consumer.empty() || interactions_each == 0) return std::nullopt;
  const auto tries = std::accumulate(tries_per_consumer.begin(), tries_per_consumer.end(),
                                     std::uint64_t{0});
  return static_cast<double>(tries) /
         (static_cast<double>(tries_per_consumer.size()) * static_cast<double>(interactions_each));
}

namespace {
std::optional<double> jain(std::span<const std::uint64_t> counts) {
  if (counts.empty()) return std::nullopt;
  long double sum = 0.0L;
  long double sq = 0.0L;
  for (std::uint64_t n : counts) {
    sum += static_cast<long double>(n);
    sq += static_cast<long double>(n) * static_cast<long double>(n);
  }
  if (sq == 0.0L) return std::nullopt;
  return static_cast<double>(sum * sum / (static_cast<long double>(counts.size()) * sq));
}
}  // namespace

std::optional<double> fairness_index(std::span<const std::uint64_t> counts) { return jain(counts); }

void FairnessAccumulator::add(std::size_t member, std::uint64_t n) { counts_.at(member) += n; }

std::optional<double> FairnessAccumulator::value() const { return jain(counts_); }

std::optional<double> time_avg_welfare(std::span<const double> welfare) {
  if (welfare.empty()) return std::nullopt;
  double sum = 0.0;
  for (double u : welfare) sum += u;
  return sum / static_cast<double>(welfare.size());
}

std::optional<double> WelfareAccumulator::value() const {
  if (steps_ == 0) return std::nullopt;
  return sum_ / static_cast<double>(steps_);
}

std::vector<double> trustee_loads(const DelegationFlow& flow) {
  std::vector<double> x(flow.reputation.size(), 0.0);
  for (const auto& c : flow.connections) {
    if (c.flow < 0.0) throw std::invalid_argument("negative flow");
    for (std::size_t e : c.trustees) x.at(e) += c.flow;
  }
  return x;
}

double mtg_cost(const DelegationFlow& flow) {
  const auto x = trustee_loads(flow);
  double v = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] == 0.0) continue;
    if (flow.reputation[e] == 0.0)
      throw std::domain_error("loaded trustee has zero reputation");
    v += x[e] * flow.latency.at(e)(x[e]) / flow.reputation[e];
  }
  return v;
}

CompletionCdf completion_cdf(std::span<const std::optional<Step>> times, Step horizon) {
  CompletionCdf cdf;
  if (times.empty() || horizon < 1) return cdf;
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(horizon), 0);
  std::uint64_t dropped = 0;
  for (const auto& t : times) {
    if (!t || *t > horizon) {
      ++dropped;
      continue;
    }
    const Step x = *t < 1 ? 1 : *t;
    hist[static_cast<std::size_t>(x - 1)] += 1;
  }
  const double n = static_cast<double>(times.size());
  std::uint64_t running = 0;
  cdf.points.reserve(hist.size());
  for (std::uint64_t h : hist) {
    running += h;
    cdf.points.push_back(static_cast<double>(running) / n);
  }
  cdf.dropped = static_cast<double>(dropped) / n;
  return cdf;
}

}  // namespace trustsim
