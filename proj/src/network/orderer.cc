#include "edh/network/orderer.h"

namespace edh {

std::vector<std::vector<LedgerTransaction>> SoloOrderer::Enqueue(
    LedgerTransaction tx, std::uint64_t tick) {
  if (queue_.empty()) oldest_tick_ = tick;
  queue_.push_back(std::move(tx));
  if (queue_.size() >= config_.max_batch_size) return Flush();
  return {};
}

std::vector<std::vector<LedgerTransaction>> SoloOrderer::Tick(
    std::uint64_t tick) {
  if (!queue_.empty() && tick >= oldest_tick_ + config_.batch_timeout) {
    return Flush();
  }
  return {};
}

std::vector<std::vector<LedgerTransaction>> SoloOrderer::Flush() {
  std::vector<std::vector<LedgerTransaction>> out;
  if (!queue_.empty()) {
    out.push_back(std::move(queue_));
    queue_.clear();
  }
  return out;
}

}  // namespace edh
