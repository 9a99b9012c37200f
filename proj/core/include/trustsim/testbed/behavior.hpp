#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trustsim/rng.hpp"

namespace trustsim {

enum class DriftMode { none, random_walk };

struct TrusteeBehavior {
  double success_prob = 1.0;
  std::uint32_t capacity = 1;  // tasks or effort units per step
  DriftMode drift = DriftMode::none;
};

/// One random-walk move: up, down or flat with equal odds, magnitude U[0, 0.01].
TrusteeBehavior drift_provider(TrusteeBehavior b, Rng& rng);

enum class WitnessKind { honest, badmouth, ballot_stuff };
enum class Severity { moderate, high };

struct WitnessBehavior {
  WitnessKind kind = WitnessKind::honest;
  Severity severity = Severity::moderate;
  bool collusive = false;  // distorts only testimonies about ring members
  double lie_prob = 1.0;
};

/// Applies the witness's distortion to its honest opinion.
double distort_testimony(double truth, const WitnessBehavior& w, bool target_in_ring, Rng& rng);

/// Parses "Hon", "BM<n>" or "BS<n>" into n% distorting witnesses, half of them
/// moderate and half high severity, placed at random positions.
std::vector<WitnessBehavior> witness_mix(std::size_t count, std::string_view mix, bool collusive,
                                         Rng& rng);

// Provider groups of the delegation test-bed, by renege probability.
enum class ProviderType { honest, type1, type2, type3 };

struct Provider {
  ProviderType type = ProviderType::honest;
  TrusteeBehavior behavior;
};

/// 10% honest (renege 0.1), 10% Type I (0.4), 40% Type II (0.6), 40% Type III (0.8).
std::vector<Provider> ch3_providers(std::size_t count, Rng& rng);

// Worker groups of the crowdsourcing and delegation populations.
enum class WorkerType { hon, mh, mm, mal };

std::string_view to_string(WorkerType t);
double success_of(WorkerType t);

/// HonX: X/2 % Hon, X/2 % MH, (100-X)/2 % MM, (100-X)/2 % Mal, in that order.
std::vector<WorkerType> honx_population(std::size_t count, int x);

/// Parses "Hon50" into 50.
int parse_honx(std::string_view name);

}  // namespace trustsim
