#pragma once

#include <span>
#include <vector>

#include "trustsim/draft.hpp"
#include "trustsim/reputation.hpp"

namespace trustsim {

/// Drops every queued task whose deadline is before `now` from all queues.
/// `queues[i]` belongs to trustee `ids[i]`; the returned events are the
/// requester notifications, each to be recorded as a negative outcome.
std::vector<RatingEvent> clean_sweep(std::span<TrusteeQueue> queues, std::span<const AgentId> ids,
                                     Step now);

}  // namespace trustsim
