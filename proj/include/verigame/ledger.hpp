#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "verigame/types.hpp"

namespace verigame::ledger {

enum class Purpose { SolverBond, ChallengerBond, VerifierExposure, TaskFee };

const char* purpose_name(Purpose p);

// One live escrow per key. `round` is the dispute-round index within the
// process (-1 for solver bond and task fee); keying by round rather than
// depth keeps re-opened windows from colliding.
struct EscrowKey {
  ProcessId process;
  AgentId agent;
  Purpose purpose = Purpose::SolverBond;
  int round = -1;

  auto operator<=>(const EscrowKey&) const = default;
};

std::string escrow_key_label(const EscrowKey& key);

enum class EntryKind { Deposit, Lock, Release, Transfer, Slash, Burn };

const char* entry_kind_name(EntryKind k);

struct Entry {
  std::uint64_t seq = 0;
  EntryKind kind = EntryKind::Deposit;
  Tick tick = 0;
  AgentId agent;                 // owner / source account
  AgentId to;                    // recipient for Transfer and Slash
  Amount amount = 0;             // principal moved to `to` (or owner on release)
  Amount burned = 0;             // burned portion for Slash and Burn
  std::optional<EscrowKey> key;  // escrow the entry acts on, if any
};

// What a finalized process owes every stakeholder. Items reference escrows;
// applying the plan consumes each referenced escrow exactly.
struct SettlementPlan {
  struct TransferItem {
    EscrowKey from;
    AgentId to;
    Amount amount = 0;
    std::string reason;
  };
  struct BurnItem {
    EscrowKey from;
    Amount amount = 0;
    std::string reason;
  };
  struct RefundItem {
    EscrowKey from;
    Amount amount = 0;
  };

  std::vector<TransferItem> transfers;
  std::vector<BurnItem> burns;
  std::vector<RefundItem> refunds;

  bool empty() const {
    return transfers.empty() && burns.empty() && refunds.empty();
  }
};

// Double-entry token accounting: free balances, escrows, and a burn counter.
// Every mutation appends an Entry; Sum(free) + Sum(escrow) + burned ==
// deposited at all times.
class Ledger {
 public:
  const Entry& deposit(const AgentId& agent, Amount amount, Tick tick);
  const Entry& lock(const EscrowKey& key, Amount amount, Tick tick);
  const Entry& release(const EscrowKey& key, Tick tick);
  // Splits the escrow: round(burn_share * amount) burned (half away from
  // zero), exact remainder to `to`.
  const Entry& slash(const EscrowKey& key, const AgentId& to, double burn_share,
                     Tick tick);
  const Entry& transfer(const AgentId& from, const AgentId& to, Amount amount,
                        Tick tick);

  // All plan items in order, atomically: on any failure the ledger is
  // unchanged and the error names the failing item.
  std::vector<Entry> apply_settlement(const SettlementPlan& plan, Tick tick);

  // Replays a recorded entry against this ledger (same validation rules).
  void apply_entry(const Entry& entry);

  Amount free_balance(const AgentId& agent) const;
  Amount escrow_at(const EscrowKey& key) const;  // 0 when absent
  bool has_escrow(const EscrowKey& key) const;
  Amount escrowed_total(const AgentId& agent) const;

  Amount total_free() const { return total_free_; }
  Amount total_escrow() const { return total_escrow_; }
  Amount total_burned() const { return burned_; }
  Amount total_deposited() const { return deposited_; }
  bool conservation_holds() const {
    return total_free_ + total_escrow_ + burned_ == deposited_;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::map<AgentId, Amount>& balances() const { return free_; }
  const std::map<EscrowKey, Amount>& escrows() const { return escrow_; }

 private:
  const Entry& record(Entry entry);
  void do_release_partial(const EscrowKey& key, Amount amount);

  std::map<AgentId, Amount> free_;
  std::map<EscrowKey, Amount> escrow_;
  Amount burned_ = 0;
  Amount deposited_ = 0;
  Amount total_free_ = 0;
  Amount total_escrow_ = 0;
  std::uint64_t next_seq_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace verigame::ledger
