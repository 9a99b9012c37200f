#pragma once

#include <cstdint>
#include <deque>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "trustsim/rng.hpp"
#include "trustsim/types.hpp"

namespace trustsim {

// Verdicts: +1 band busy, -1 band idle, 0 abstain.
struct SensingReport {
  AgentId su = 0;
  int verdict = 0;
  double confidence = 0.0;
};

struct RatingPair {
  double alpha = 0.0;
  double beta = 0.0;
};

struct SuTrustRecord {
  std::deque<RatingPair> window;
  double rho = 0.9;
};

struct CrnConfig {
  double trust_floor = 0.65;       // eta
  double confidence_floor = 0.25;
  double confidence_mean = 0.5;
  double confidence_sd = 0.15;
  double w1 = 1.0;
  double w2 = 5.0;
  std::size_t bands = 8;
  std::size_t su_count = 100;
  std::size_t iterations = 10000;
  std::size_t window = 20;         // N
  double rho_high = 1.0;           // rho_1
  double rho_low = 0.9;            // rho_2
  bool trust_enabled = true;
};

struct CrnDecision {
  double aggregate = 0.0;  // R_p
  int decision = 0;        // D_p
};

/// `trusts` aligned with `sus`; `subs_weight` is theta.
CrnDecision aggregate_and_decide(const SensingReport& subs, std::span<const SensingReport> sus,
                                 std::span<const double> trusts, double subs_weight,
                                 const CrnConfig& cfg);

/// Forgetting-weighted positive share of the window; 0.5 when empty.
double context_trust(const SuTrustRecord& record);

/// Appends this round's ratings to each SU's record (aligned with `reports`).
void apply_feedback(std::span<SuTrustRecord> records, std::span<const SensingReport> reports,
                    int decision, bool pu_complaint, const CrnConfig& cfg);

double total_utility_loss(double eps1, double eps2, const CrnConfig& cfg);

enum class Attack { none, fabrication, on_off, dos, resource_hungry };

std::string_view to_string(Attack a);
Attack parse_attack(std::string_view name);

/// Turns an honest report into what an attacker would send.
SensingReport attack_report(bool busy, SensingReport honest, Attack attack, double sigma,
                            Rng& rng);

/// Confidence from a Gaussian truncated to [0,1] by redraw.
double draw_confidence(const CrnConfig& cfg, Rng& rng);

/// An honest SU's report: abstains below the confidence floor, otherwise
/// reports the true state with probability (1 + confidence) / 2.
SensingReport honest_report(AgentId su, bool busy, const CrnConfig& cfg, Rng& rng);

struct CrnScenario {
  CrnConfig cfg;
  Attack attack = Attack::fabrication;
  double sigma = 0.5;       // share of attacking SUs; also the on-off lie rate
  double usage_rate = 0.45; // PU occupancy per band and round
  std::uint64_t seed = 1;
};

struct CrnRow {
  std::uint64_t iteration = 0;
  std::size_t band = 0;
  double eps1_cum = 0.0;
  double eps2_cum = 0.0;
  double tul = 0.0;
};

struct CrnResult {
  std::vector<CrnRow> rows;  // one per (iteration, band)
  double eps1 = 0.0;         // false alarms / idle rounds, all bands
  double eps2 = 0.0;         // misdetections / busy rounds, all bands
  double tul = 0.0;
};

CrnResult run_crn(const CrnScenario& scenario);

/// CSV columns: iteration, band, attack, sigma, usage_rate, eps1_cum, eps2_cum, TUL, trust_enabled.
void write_crn_csv(std::ostream& out, const CrnScenario& scenario, const CrnResult& result);

}  // namespace trustsim
