#ifndef EDH_LEDGER_LEDGER_IO_H_
#define EDH_LEDGER_LEDGER_IO_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "edh/ledger/block.h"

namespace edh {

inline constexpr std::string_view kLedgerFormat = "edh-ledger-jsonl/1";

// JSON-lines ledger export. Line 1 is a header
//   {"kind":"header","format":...,"channel_id":...,"genesis_hash":...,
//    "epsilon_t":...,"height":...,"tip_hash":...}
// followed by one {"kind":"tx","height":h,"index":i,...} object per committed
// transaction in chain order. Doubles are written in shortest round-trip form,
// so an import rebuilds bit-identical blocks; the rebuilt tip must match
// tip_hash.
absl::Status ExportLedgerJsonl(std::string_view channel_id, double epsilon_t,
                               std::span<const Block> chain, std::ostream& out);

struct ImportedLedger {
  std::string channel_id;
  double epsilon_t = 0.0;
  std::vector<Block> chain;  // includes genesis
};

absl::StatusOr<ImportedLedger> ImportLedgerJsonl(std::istream& in);

// One {"height","prev_hash","block_hash","tx_count"} object per block.
absl::Status ExportBlockDumpJsonl(std::span<const Block> chain,
                                  std::ostream& out);

}  // namespace edh

#endif  // EDH_LEDGER_LEDGER_IO_H_
