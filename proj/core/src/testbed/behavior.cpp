#include "trustsim/testbed/behavior.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace trustsim {

TrusteeBehavior drift_provider(TrusteeBehavior b, Rng& rng) {
  if (b.drift == DriftMode::none) return b;
  const auto profile = uniform_index(rng, 3);
  const double step = uniform(rng, 0.0, 0.01);
  if (profile == 0) b.success_prob += step;
  if (profile == 1) b.success_prob -= step;
  b.success_prob = std::clamp(b.success_prob, 0.0, 1.0);
  return b;
}

double distort_testimony(double truth, const WitnessBehavior& w, bool target_in_ring, Rng& rng) {
  if (w.kind == WitnessKind::honest) return truth;
  if (w.collusive && !target_in_ring) return truth;
  if (w.lie_prob < 1.0 && !bernoulli(rng, w.lie_prob)) return truth;
  const double offset =
      w.severity == Severity::moderate ? uniform(rng, 0.1, 0.4) : uniform(rng, 0.8, 1.0);
  const double v = w.kind == WitnessKind::ballot_stuff ? truth + offset : truth - offset;
  return std::clamp(v, 0.0, 1.0);
}

std::vector<WitnessBehavior> witness_mix(std::size_t count, std::string_view mix, bool collusive,
                                         Rng& rng) {
  std::vector<WitnessBehavior> out(count);
  if (mix == "Hon") return out;
  if (mix.size() < 3 || (mix.substr(0, 2) != "BM" && mix.substr(0, 2) != "BS"))
    throw std::invalid_argument("unknown witness mix '" + std::string(mix) + "'");
  int pct = 0;
  const auto digits = mix.substr(2);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), pct);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || pct < 0 || pct > 100)
    throw std::invalid_argument("bad witness mix percentage in '" + std::string(mix) + "'");
  const WitnessKind kind = mix[1] == 'M' ? WitnessKind::badmouth : WitnessKind::ballot_stuff;
  const auto bad = static_cast<std::size_t>(std::llround(count * pct / 100.0));
  for (std::size_t i = 0; i < bad; ++i) {
    out[i].kind = kind;
    out[i].severity = i < bad / 2 ? Severity::moderate : Severity::high;
    out[i].collusive = collusive;
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<Provider> ch3_providers(std::size_t count, Rng& rng) {
  std::vector<Provider> out(count);
  const auto tenth = static_cast<std::size_t>(std::llround(count * 0.1));
  const auto second = std::min(count, 2 * tenth);
  const std::size_t rest = count - second;
  const std::size_t type2_end = second + rest / 2;
  for (std::size_t i = 0; i < count; ++i) {
    Provider& p = out[i];
    if (i < tenth) {
      p.type = ProviderType::honest;
      p.behavior.success_prob = 0.9;
      continue;
    }
    p.behavior.drift = DriftMode::random_walk;
    if (i < second) {
      p.type = ProviderType::type1;
      p.behavior.success_prob = 0.6;
    } else if (i < type2_end) {
      p.type = ProviderType::type2;
      p.behavior.success_prob = 0.4;
    } else {
      p.type = ProviderType::type3;
      p.behavior.success_prob = 0.2;
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::string_view to_string(WorkerType t) {
  switch (t) {
    case WorkerType::hon: return "Hon";
    case WorkerType::mh: return "MH";
    case WorkerType::mm: return "MM";
    case WorkerType::mal: return "Mal";
  }
  return "Hon";
}

double success_of(WorkerType t) {
  switch (t) {
    case WorkerType::hon: return 0.9;
    case WorkerType::mh: return 0.7;
    case WorkerType::mm: return 0.3;
    case WorkerType::mal: return 0.1;
  }
  return 0.0;
}

std::vector<WorkerType> honx_population(std::size_t count, int x) {
  if (x < 0 || x > 100) throw std::invalid_argument("HonX share must lie in [0,100]");
  const auto half_good = static_cast<std::size_t>(std::llround(count * x / 200.0));
  const auto half_bad = (count - 2 * std::min(count / 2, half_good)) / 2;
  std::vector<WorkerType> out;
  out.reserve(count);
  out.insert(out.end(), half_good, WorkerType::hon);
  out.insert(out.end(), half_good, WorkerType::mh);
  out.insert(out.end(), half_bad, WorkerType::mm);
  out.insert(out.end(), count - out.size(), WorkerType::mal);
  return out;
}

int parse_honx(std::string_view name) {
  if (name.size() < 4 || name.substr(0, 3) != "Hon")
    throw std::invalid_argument("population must look like Hon50");
  int x = 0;
  const auto digits = name.substr(3);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || x < 0 || x > 100)
    throw std::invalid_argument("bad HonX share in '" + std::string(name) + "'");
  return x;
}

}  // namespace trustsim
