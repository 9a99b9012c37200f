#include "trustsim/testbed/task_queue.hpp"

#include <stdexcept>

namespace trustsim {

std::vector<RatingEvent> clean_sweep(std::span<TrusteeQueue> queues, std::span<const AgentId> ids,
                                     Step now) {
  if (queues.size() != ids.size()) throw std::invalid_argument("queues and ids differ in size");
  std::vector<RatingEvent> dropped;
  for (std::size_t i = 0; i < queues.size(); ++i) {
    auto d = queues[i].sweep(now, ids[i]);
    dropped.insert(dropped.end(), d.begin(), d.end());
  }
  return dropped;
}

}  // namespace trustsim
