#pragma once

#include <cstdint>

namespace trustsim {

using AgentId = std::uint32_t;
using ContextId = std::uint32_t;
using Step = std::int64_t;
using EventId = std::uint64_t;

}  // namespace trustsim
