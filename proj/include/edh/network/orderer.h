#ifndef EDH_NETWORK_ORDERER_H_
#define EDH_NETWORK_ORDERER_H_

#include <cstdint>
#include <vector>

#include "edh/ledger/block.h"

namespace edh {

struct OrdererConfig {
  std::size_t max_batch_size = 10;
  std::uint64_t batch_timeout = 2;  // ticks
};

// Single ordering node. Transactions are batched FIFO by arrival; a batch is
// cut as soon as it reaches max_batch_size, or once its oldest transaction
// has waited batch_timeout ticks.
class SoloOrderer {
 public:
  explicit SoloOrderer(OrdererConfig config = {}) : config_(config) {}

  // Returns the full batches this arrival completes (zero or one).
  std::vector<std::vector<LedgerTransaction>> Enqueue(LedgerTransaction tx,
                                                      std::uint64_t tick);

  // Cuts the pending batch if its timeout expired by tick.
  std::vector<std::vector<LedgerTransaction>> Tick(std::uint64_t tick);

  // Cuts whatever is pending regardless of the timeout.
  std::vector<std::vector<LedgerTransaction>> Flush();

  std::size_t pending() const { return queue_.size(); }
  const OrdererConfig& config() const { return config_; }

 private:
  OrdererConfig config_;
  std::vector<LedgerTransaction> queue_;
  std::uint64_t oldest_tick_ = 0;
};

}  // namespace edh

#endif  // EDH_NETWORK_ORDERER_H_
