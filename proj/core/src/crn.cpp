#include "trustsim/crn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trustsim/csv.hpp"

namespace trustsim {

CrnDecision aggregate_and_decide(const SensingReport& subs, std::span<const SensingReport> sus,
                                 std::span<const double> trusts, double subs_weight,
                                 const CrnConfig& cfg) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < sus.size(); ++i) {
    if (trusts[i] < cfg.trust_floor) continue;
    num += trusts[i] * sus[i].verdict;
    den += trusts[i];
  }
  CrnDecision d;
  d.aggregate = subs_weight * subs.verdict;
  if (den > 0.0) d.aggregate += (1.0 - subs_weight) * num / den;
  d.decision = d.aggregate > 0.0 ? 1 : (d.aggregate < 0.0 ? -1 : 0);
  return d;
}

double context_trust(const SuTrustRecord& record) {
  if (record.window.empty()) return 0.5;
  // The newest entry carries weight 1; each older slot is scaled by rho once more.
  double num = 0.0;
  double den = 0.0;
  double w = 1.0;
  for (auto it = record.window.rbegin(); it != record.window.rend(); ++it) {
    num += w * it->alpha;
    den += w * (it->alpha + it->beta);
    w *= record.rho;
  }
  return den > 0.0 ? num / den : 0.5;
}

void apply_feedback(std::span<SuTrustRecord> records, std::span<const SensingReport> reports,
                    int decision, bool pu_complaint, const CrnConfig& cfg) {
  const double big = static_cast<double>(cfg.window);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    SuTrustRecord& rec = records[i];
    const int v = reports[i].verdict;
    bool rated = true;
    if (v == 0) {
      if (decision == 0) rated = false;
      else rec.window.push_back({1.0, 1.0});
    } else if (pu_complaint && v == -1) {
      rec.window.push_back({0.0, big});
      rec.rho = cfg.rho_high;
    } else if (decision == 1) {
      rec.window.push_back(v == 1 ? RatingPair{1.0, 0.0} : RatingPair{0.0, 1.0});
    } else {
      rated = false;
    }
    if (!rated) continue;
    while (rec.window.size() > cfg.window) rec.window.pop_front();
    if (!(pu_complaint && v == -1) && context_trust(rec) >= cfg.trust_floor)
      rec.rho = cfg.rho_low;
  }
}

double total_utility_loss(double eps1, double eps2, const CrnConfig& cfg) {
  return cfg.w1 * eps1 + cfg.w2 * eps2;
}

std::string_view to_string(Attack a) {
  switch (a) {
    case Attack::none: return "none";
    case Attack::fabrication: return "fabrication";
    case Attack::on_off: return "on_off";
    case Attack::dos: return "dos";
    case Attack::resource_hungry: return "resource_hungry";
  }
  return "none";
}

Attack parse_attack(std::string_view name) {
  for (Attack a : {Attack::none, Attack::fabrication, Attack::on_off, Attack::dos,
                   Attack::resource_hungry})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown attack '" + std::string(name) + "'");
}

SensingReport attack_report(bool busy, SensingReport honest, Attack attack, double sigma,
                            Rng& rng) {
  SensingReport r = honest;
  switch (attack) {
    case Attack::none: break;
    case Attack::fabrication: r.verdict = -honest.verdict; break;
    case Attack::on_off:
      if (bernoulli(rng, sigma)) r.verdict = -honest.verdict;
      break;
    case Attack::dos:
      if (!busy) r.verdict = 1;
      break;
    case Attack::resource_hungry: r.verdict = -1; break;
  }
  return r;
}

double draw_confidence(const CrnConfig& cfg, Rng& rng) {
  std::normal_distribution<double> g(cfg.confidence_mean, cfg.confidence_sd);
  for (;;) {
    const double c = g(rng);
    if (c >= 0.0 && c <= 1.0) return c;
  }
}

SensingReport honest_report(AgentId su, bool busy, const CrnConfig& cfg, Rng& rng) {
  SensingReport r;
  r.su = su;
  r.confidence = draw_confidence(cfg, rng);
  if (r.confidence < cfg.confidence_floor) return r;
  const bool correct = bernoulli(rng, 0.5 * (1.0 + r.confidence));
  const bool says_busy = correct ? busy : !busy;
  r.verdict = says_busy ? 1 : -1;
  return r;
}

CrnResult run_crn(const CrnScenario& sc) {
  const CrnConfig& cfg = sc.cfg;
  RngStreams streams(sc.seed);
  Rng band_rng = streams.make(Stream::band);
  Rng subs_rng = streams.make(Stream::broker);
  Rng pop_rng = streams.make(Stream::population);
  std::vector<Rng> su_rng;
  su_rng.reserve(cfg.su_count);
  for (std::size_t i = 0; i < cfg.su_count; ++i) su_rng.push_back(streams.make(Stream::su, i));

  std::vector<bool> attacker(cfg.su_count, false);
  if (sc.attack != Attack::none) {
    const auto n = static_cast<std::size_t>(std::llround(sc.sigma * static_cast<double>(cfg.su_count)));
    std::vector<std::size_t> ids(cfg.su_count);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), pop_rng);
    for (std::size_t k = 0; k < n && k < ids.size(); ++k) attacker[ids[k]] = true;
  }

  // records[band][su]
  std::vector<std::vector<SuTrustRecord>> records(
      cfg.bands, std::vector<SuTrustRecord>(cfg.su_count, SuTrustRecord{{}, cfg.rho_low}));
  std::vector<SensingReport> reports(cfg.su_count);
  std::vector<double> trusts(cfg.su_count, 1.0);
  std::uint64_t idle = 0, busy_rounds = 0, false_alarm = 0, misdetect = 0;

  CrnResult res;
  res.rows.reserve(cfg.iterations * cfg.bands);
  for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
    for (std::size_t b = 0; b < cfg.bands; ++b) {
      const bool busy = bernoulli(band_rng, sc.usage_rate);
      SensingReport subs = honest_report(0, busy, cfg, subs_rng);
      const double theta = std::clamp(subs.confidence, 0.0, 1.0);
      for (std::size_t i = 0; i < cfg.su_count; ++i) {
        SensingReport r = honest_report(static_cast<AgentId>(i + 1), busy, cfg, su_rng[i]);
        if (attacker[i]) r = attack_report(busy, r, sc.attack, sc.sigma, su_rng[i]);
        reports[i] = r;
        trusts[i] = cfg.trust_enabled ? context_trust(records[b][i]) : 1.0;
      }
      CrnConfig eff = cfg;
      if (!cfg.trust_enabled) eff.trust_floor = 0.0;
      const CrnDecision d = aggregate_and_decide(subs, reports, trusts, theta, eff);
      const bool complaint = busy && d.decision == -1;
      if (busy) {
        ++busy_rounds;
        if (d.decision == -1) ++misdetect;
      } else {
        ++idle;
        if (d.decision != -1) ++false_alarm;
      }
      if (cfg.trust_enabled) apply_feedback(records[b], reports, d.decision, complaint, cfg);
      CrnRow row;
      row.iteration = it;
      row.band = b;
      row.eps1_cum = idle == 0 ? 0.0 : static_cast<double>(false_alarm) / static_cast<double>(idle);
      row.eps2_cum =
          busy_rounds == 0 ? 0.0 : static_cast<double>(misdetect) / static_cast<double>(busy_rounds);
      row.tul = total_utility_loss(row.eps1_cum, row.eps2_cum, cfg);
      res.rows.push_back(row);
    }
  }
  if (!res.rows.empty()) {
    res.eps1 = res.rows.back().eps1_cum;
    res.eps2 = res.rows.back().eps2_cum;
    res.tul = res.rows.back().tul;
  }
  return res;
}

void write_crn_csv(std::ostream& out, const CrnScenario& sc, const CrnResult& result) {
  CsvWriter csv(out, {"iteration", "band", "attack", "sigma", "usage_rate", "eps1_cum", "eps2_cum",
                      "TUL", "trust_enabled"});
  for (const CrnRow& r : result.rows) {
    csv << r.iteration << static_cast<std::uint64_t>(r.band) << to_string(sc.attack) << sc.sigma
        << sc.usage_rate << r.eps1_cum << r.eps2_cum << r.tul << sc.cfg.trust_enabled;
    csv.end_row();
  }
}

}  // namespace trustsim
