#include "verigame/ledger.hpp"

#include <cmath>

namespace verigame::ledger {

const char* purpose_name(Purpose p) {
  switch (p) {
    case Purpose::SolverBond: return "solver_bond";
    case Purpose::ChallengerBond: return "challenger_bond";
    case Purpose::VerifierExposure: return "verifier_exposure";
    case Purpose::TaskFee: return "task_fee";
  }
  return "unknown";
}

const char* entry_kind_name(EntryKind k) {
  switch (k) {
    case EntryKind::Deposit: return "deposit";
    case EntryKind::Lock: return "lock";
    case EntryKind::Release: return "release";
    case EntryKind::Transfer: return "transfer";
    case EntryKind::Slash: return "slash";
    case EntryKind::Burn: return "burn";
  }
  return "unknown";
}

std::string escrow_key_label(const EscrowKey& key) {
  std::string label = key.process + "/" + key.agent + "/" + purpose_name(key.purpose);
  if (key.round >= 0) label += "#" + std::to_string(key.round);
  return label;
}

const Entry& Ledger::record(Entry entry) {
  entry.seq = next_seq_++;
  entries_.push_back(std::move(entry));
  return entries_.back();
}

const Entry& Ledger::deposit(const AgentId& agent, Amount amount, Tick tick) {
  if (amount <= 0) fail(ErrorCode::InvalidArgument, "deposit must be positive");
  free_[agent] += amount;
  total_free_ += amount;
  deposited_ += amount;
  return record({0, EntryKind::Deposit, tick, agent, {}, amount, 0, std::nullopt});
}

const Entry& Ledger::lock(const EscrowKey& key, Amount amount, Tick tick) {
  if (amount <= 0) fail(ErrorCode::InvalidArgument, "lock must be positive");
  if (escrow_.count(key))
    fail(ErrorCode::DuplicateEscrow, escrow_key_label(key));
  auto it = free_.find(key.agent);
  if (it == free_.end() || it->second < amount)
    fail(ErrorCode::InsufficientBalance,
         key.agent + " cannot cover " + std::to_string(amount));
  it->second -= amount;
  total_free_ -= amount;
  escrow_[key] = amount;
  total_escrow_ += amount;
  return record({0, EntryKind::Lock, tick, key.agent, {}, amount, 0, key});
}

void Ledger::do_release_partial(const EscrowKey& key, Amount amount) {
  auto it = escrow_.find(key);
  it->second -= amount;
  if (it->second == 0) escrow_.erase(it);
  total_escrow_ -= amount;
}

const Entry& Ledger::release(const EscrowKey& key, Tick tick) {
  auto it = escrow_.find(key);
  if (it == escrow_.end())
    fail(ErrorCode::MissingEscrow, escrow_key_label(key));
  Amount amount = it->second;
  do_release_partial(key, amount);
  free_[key.agent] += amount;
  total_free_ += amount;
  return record({0, EntryKind::Release, tick, key.agent, {}, amount, 0, key});
}

const Entry& Ledger::slash(const EscrowKey& key, const AgentId& to,
                           double burn_share, Tick tick) {
  if (!(burn_share >= 0.0 && burn_share <= 1.0))
    fail(ErrorCode::InvalidArgument, "burn share outside [0, 1]");
  auto it = escrow_.find(key);
  if (it == escrow_.end())
    fail(ErrorCode::MissingEscrow, escrow_key_label(key));
  Amount amount = it->second;
  Amount burned = std::llround(burn_share * double(amount));
  if (burned < 0) burned = 0;
  if (burned > amount) burned = amount;
  Amount rewarded = amount - burned;
  if (rewarded > 0 && to.empty())
    fail(ErrorCode::InvalidArgument, "slash with reward but no recipient");
  do_release_partial(key, amount);
  burned_ += burned;
  if (rewarded > 0) {
    free_[to] += rewarded;
    total_free_ += rewarded;
  }
  return record({0, EntryKind::Slash, tick, key.agent,
                 rewarded > 0 ? to : AgentId{}, rewarded, burned, key});
}

const Entry& Ledger::transfer(const AgentId& from, const AgentId& to,
                              Amount amount, Tick tick) {
  if (amount <= 0) fail(ErrorCode::InvalidArgument, "transfer must be positive");
  auto it = free_.find(from);
  if (it == free_.end() || it->second < amount)
    fail(ErrorCode::InsufficientBalance,
         from + " cannot cover " + std::to_string(amount));
  it->second -= amount;
  free_[to] += amount;
  return record({0, EntryKind::Transfer, tick, from, to, amount, 0, std::nullopt});
}

std::vector<Entry> Ledger::apply_settlement(const SettlementPlan& plan,
                                            Tick tick) {
  // Dry-run every item against a copy of the escrow table first, so a
  // failing plan leaves the ledger untouched; free-balance credits cannot
  // fail, so the escrow table is the only state worth simulating.
  std::map<EscrowKey, Amount> shadow = escrow_;
  auto draw = [&](const EscrowKey& key, Amount amount, const char* what,
                  std::size_t index) {
    if (amount <= 0)
      fail(ErrorCode::InvalidArgument,
           std::string(what) + " item " + std::to_string(index) +
               " not positive");
    auto it = shadow.find(key);
    if (it == shadow.end() || it->second < amount)
      fail(ErrorCode::InsufficientEscrow,
           std::string(what) + " item " + std::to_string(index) + ": " +
               escrow_key_label(key));
    it->second -= amount;
    if (it->second == 0) shadow.erase(it);
  };
  for (std::size_t i = 0; i < plan.refunds.size(); ++i) {
    const auto& item = plan.refunds[i];
    if (escrow_at(item.from) != item.amount)
      fail(ErrorCode::InsufficientEscrow,
           "refund item " + std::to_string(i) + ": " +
               escrow_key_label(item.from));
    draw(item.from, item.amount, "refund", i);
  }
  for (std::size_t i = 0; i < plan.transfers.size(); ++i) {
    const auto& item = plan.transfers[i];
    if (item.to.empty())
      fail(ErrorCode::InvalidArgument,
           "transfer item " + std::to_string(i) + " has no recipient");
    draw(item.from, item.amount, "transfer", i);
  }
  for (std::size_t i = 0; i < plan.burns.size(); ++i)
    draw(plan.burns[i].from, plan.burns[i].amount, "burn", i);

  std::vector<Entry> applied;
  applied.reserve(plan.refunds.size() + plan.transfers.size() +
                  plan.burns.size());
  for (const auto& item : plan.refunds) applied.push_back(release(item.from, tick));
  for (const auto& item : plan.transfers) {
    do_release_partial(item.from, item.amount);
    free_[item.to] += item.amount;
    total_free_ += item.amount;
    applied.push_back(record({0, EntryKind::Transfer, tick, item.from.agent,
                              item.to, item.amount, 0, item.from}));
  }
  for (const auto& item : plan.burns) {
    do_release_partial(item.from, item.amount);
    burned_ += item.amount;
    applied.push_back(record({0, EntryKind::Burn, tick, item.from.agent, {}, 0,
                              item.amount, item.from}));
  }
  return applied;
}

void Ledger::apply_entry(const Entry& entry) {
  switch (entry.kind) {
    case EntryKind::Deposit:
      deposit(entry.agent, entry.amount, entry.tick);
      break;
    case EntryKind::Lock:
      if (!entry.key) fail(ErrorCode::InvalidArgument, "lock entry without key");
      lock(*entry.key, entry.amount, entry.tick);
      break;
    case EntryKind::Release:
      if (!entry.key) fail(ErrorCode::InvalidArgument, "release entry without key");
      release(*entry.key, entry.tick);
      break;
    case EntryKind::Slash: {
      // Reproduce the recorded split exactly rather than re-deriving it from
      // a floating-point share.
      if (!entry.key) fail(ErrorCode::InvalidArgument, "slash entry without key");
      Amount total = entry.amount + entry.burned;
      auto it = escrow_.find(*entry.key);
      if (it == escrow_.end() || it->second != total)
        fail(ErrorCode::InsufficientEscrow, escrow_key_label(*entry.key));
      do_release_partial(*entry.key, total);
      burned_ += entry.burned;
      if (entry.amount > 0) {
        if (entry.to.empty())
          fail(ErrorCode::InvalidArgument, "slash entry reward without recipient");
        free_[entry.to] += entry.amount;
        total_free_ += entry.amount;
      }
      record({0, EntryKind::Slash, entry.tick, entry.agent, entry.to,
              entry.amount, entry.burned, entry.key});
      break;
    }
    case EntryKind::Transfer:
      if (entry.key) {
        // Escrow-sourced payment from a settlement plan.
        SettlementPlan plan;
        plan.transfers.push_back({*entry.key, entry.to, entry.amount, ""});
        apply_settlement(plan, entry.tick);
      } else {
        transfer(entry.agent, entry.to, entry.amount, entry.tick);
      }
      break;
    case EntryKind::Burn: {
      if (!entry.key) fail(ErrorCode::InvalidArgument, "burn entry without key");
      SettlementPlan plan;
      plan.burns.push_back({*entry.key, entry.burned, ""});
      apply_settlement(plan, entry.tick);
      break;
    }
  }
}

Amount Ledger::free_balance(const AgentId& agent) const {
  auto it = free_.find(agent);
  return it == free_.end() ? 0 : it->second;
}

Amount Ledger::escrow_at(const EscrowKey& key) const {
  auto it = escrow_.find(key);
  return it == escrow_.end() ? 0 : it->second;
}

bool Ledger::has_escrow(const EscrowKey& key) const {
  return escrow_.count(key) > 0;
}

Amount Ledger::escrowed_total(const AgentId& agent) const {
  Amount total = 0;
  for (const auto& [key, amount] : escrow_)
    if (key.agent == agent) total += amount;
  return total;
}

}  // namespace verigame::ledger
