#include "trustsim/reputation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "trustsim/csv.hpp"
#include "trustsim/errors.hpp"

namespace trustsim {

void validate(const RatingEvent& ev) {
  if (ev.started_at < ev.issued_at)
    throw std::invalid_argument("rating event starts before it was issued");
  if (ev.completed_at && *ev.completed_at < ev.started_at)
    throw std::invalid_argument("rating event completes before it started");
  if (ev.deadline < ev.started_at)
    throw std::invalid_argument("rating event deadline precedes its start");
}

double brs_score(const BetaEvidence& ev) {
  const double alpha = static_cast<double>(ev.positives) + 1.0;
  const double beta = static_cast<double>(ev.negatives) + 1.0;
  return alpha / (alpha + beta);
}

double timeliness_discount(Step start, Step end, Step dl, TimelinessPolicy policy) {
  if (dl <= start)
    throw InvalidDeadline("deadline " + std::to_string(dl) + " not after start " +
                          std::to_string(start));
  if (end < start) throw std::invalid_argument("completion precedes start");
  if (policy.mode == TimelinessMode::hard) return end <= dl ? 1.0 : 0.0;
  const double v = 1.0 - static_cast<double>(end - start) / static_cast<double>(dl - start);
  return std::clamp(v, 0.0, 1.0);
}

Outcome classify(const RatingEvent& ev, TimelinessPolicy policy) {
  if (!ev.completed_at || !ev.quality_ok) return Outcome::negative;
  // A task that starts on its deadline still counts when finished at once.
  if (ev.deadline <= ev.started_at)
    return *ev.completed_at <= ev.deadline ? Outcome::positive : Outcome::negative;
  const double d = timeliness_discount(ev.started_at, *ev.completed_at, ev.deadline, policy);
  return d > 0.0 ? Outcome::positive : Outcome::negative;
}

ReputationLedger::ReputationLedger(Options opts) : opts_(opts) {}

Outcome ReputationLedger::record_outcome(const RatingEvent& ev) {
  validate(ev);
  if (!seen_.insert(ev.id).second)
    throw DuplicateEvent("rating event " + std::to_string(ev.id) + " already recorded");
  const Outcome o = classify(ev, opts_.timeliness);
  record(ev.truster, ev.trustee, ev.context, o);
  return o;
}

void ReputationLedger::record(AgentId truster, AgentId trustee, ContextId context,
                              Outcome outcome) {
  Slot& slot = slots_[key(trustee, context)];
  auto [it, fresh] = slot.by_truster.try_emplace(truster);
  Local& loc = it->second;
  const double before = fresh ? 0.0 : brs_score(loc.ev);
  const bool pos = outcome == Outcome::positive;
  (pos ? loc.ev.positives : loc.ev.negatives) += 1;
  (pos ? slot.pooled.positives : slot.pooled.negatives) += 1;
  if (opts_.window > 0) {
    loc.recent.push_back(pos);
    if (loc.recent.size() > opts_.window) {
      const bool old = loc.recent.front();
      loc.recent.pop_front();
      (old ? loc.ev.positives : loc.ev.negatives) -= 1;
      (old ? slot.pooled.positives : slot.pooled.negatives) -= 1;
    }
  }
  slot.score_sum += brs_score(loc.ev) - before;
  ++events_;
}

const ReputationLedger::Slot* ReputationLedger::find(AgentId trustee, ContextId context) const {
  auto it = slots_.find(key(trustee, context));
  return it == slots_.end() ? nullptr : &it->second;
}

double ReputationLedger::reputation_of(AgentId trustee, ContextId context) const {
  return reputation_of(trustee, context, opts_.aggregation);
}

double ReputationLedger::reputation_of(AgentId trustee, ContextId context,
                                       Aggregation agg) const {
  const Slot* slot = find(trustee, context);
  if (slot == nullptr || slot->by_truster.empty()) return 0.5;
  if (agg == Aggregation::pooled) return brs_score(slot->pooled);
  return slot->score_sum / static_cast<double>(slot->by_truster.size());
}

double ReputationLedger::reputation_exact(AgentId trustee, ContextId context) const {
  const Slot* slot = find(trustee, context);
  if (slot == nullptr || slot->by_truster.empty()) return 0.5;
  if (opts_.aggregation == Aggregation::pooled) return brs_score(slot->pooled);
  std::vector<std::pair<AgentId, double>> scores;
  scores.reserve(slot->by_truster.size());
  for (const auto& [truster, loc] : slot->by_truster) scores.emplace_back(truster, brs_score(loc.ev));
  std::sort(scores.begin(), scores.end());
  double sum = 0.0;
  for (const auto& s : scores) sum += s.second;
  return sum / static_cast<double>(scores.size());
}

BetaEvidence ReputationLedger::local(AgentId trustee, ContextId context, AgentId truster) const {
  const Slot* slot = find(trustee, context);
  if (slot == nullptr) return {};
  auto it = slot->by_truster.find(truster);
  return it == slot->by_truster.end() ? BetaEvidence{} : it->second.ev;
}

BetaEvidence ReputationLedger::pooled(AgentId trustee, ContextId context) const {
  const Slot* slot = find(trustee, context);
  return slot == nullptr ? BetaEvidence{} : slot->pooled;
}

std::size_t ReputationLedger::rater_count(AgentId trustee, ContextId context) const {
  const Slot* slot = find(trustee, context);
  return slot == nullptr ? 0 : slot->by_truster.size();
}

void ReputationLedger::write_snapshot(std::ostream& out) const {
  std::map<std::tuple<AgentId, ContextId, AgentId>, BetaEvidence> rows;
  for (const auto& [k, slot] : slots_) {
    const auto trustee = static_cast<AgentId>(k >> 32);
    const auto context = static_cast<ContextId>(k & 0xFFFFFFFFULL);
    for (const auto& [truster, loc] : slot.by_truster) rows[{trustee, context, truster}] = loc.ev;
  }
  CsvWriter csv(out, {"trustee_id", "context_id", "truster_id", "positives", "negatives", "score"});
  for (const auto& [k, ev] : rows) {
    csv << std::get<0>(k) << std::get<1>(k) << std::get<2>(k) << ev.positives << ev.negatives
        << brs_score(ev);
    csv.end_row();
  }
}

bool ReputationLedger::operator==(const ReputationLedger& other) const {
  if (slots_.size() != other.slots_.size()) return false;
  for (const auto& [k, slot] : slots_) {
    auto it = other.slots_.find(k);
    if (it == other.slots_.end()) return false;
    const Slot& o = it->second;
    if (slot.pooled != o.pooled || slot.by_truster.size() != o.by_truster.size()) return false;
    for (const auto& [truster, loc] : slot.by_truster) {
      auto jt = o.by_truster.find(truster);
      if (jt == o.by_truster.end() || jt->second.ev != loc.ev) return false;
    }
  }
  return true;
}

}  // namespace trustsim
