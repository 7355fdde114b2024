#include "verigame/eventlog.hpp"

#include "verigame/hash.hpp"

namespace verigame::log {

namespace {

nlohmann::json record_body(const Record& r) {
  nlohmann::json j;
  j["seq"] = r.seq;
  j["tick"] = r.tick;
  j["proc"] = r.process;
  j["op"] = r.op;
  j["digest"] = r.digest;
  j["phase"] = r.phase;
  j["detail"] = r.detail;
  j["prev"] = r.prev;
  return j;
}

}  // namespace

std::string Record::to_line() const {
  nlohmann::json j = record_body(*this);
  j["hash"] = hash;
  return j.dump();
}

Record Record::from_line(const std::string& line, std::size_t index) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(ErrorCode::BrokenChain,
         "record " + std::to_string(index) + ": unparseable line");
  Record r;
  try {
    r.seq = j.at("seq").get<std::uint64_t>();
    r.tick = j.at("tick").get<Tick>();
    r.process = j.at("proc").get<std::string>();
    r.op = j.at("op").get<std::string>();
    r.digest = j.at("digest").get<std::string>();
    r.phase = j.at("phase").get<std::string>();
    r.detail = j.at("detail");
    r.prev = j.at("prev").get<std::string>();
    r.hash = j.at("hash").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::BrokenChain,
         "record " + std::to_string(index) + ": missing field");
  }
  return r;
}

const Record& EventLog::append(Tick tick, std::string process, std::string op,
                               std::string digest, std::string phase,
                               nlohmann::json detail) {
  Record r;
  r.seq = records_.size();
  r.tick = tick;
  r.process = std::move(process);
  r.op = std::move(op);
  r.digest = std::move(digest);
  r.phase = std::move(phase);
  r.detail = std::move(detail);
  r.prev = records_.empty() ? kGenesisHash : records_.back().hash;
  r.hash = hash::sha256_hex(record_body(r).dump());
  records_.push_back(std::move(r));
  return records_.back();
}

std::vector<std::string> EventLog::lines() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.to_line());
  return out;
}

std::string EventLog::dump() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

const std::string& EventLog::head_hash() const {
  return records_.empty() ? kGenesisHash : records_.back().hash;
}

std::vector<Record> parse_and_verify(const std::vector<std::string>& lines) {
  std::vector<Record> out;
  std::string expected_prev = kGenesisHash;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Record r = Record::from_line(lines[i], i);
    if (r.seq != i)
      fail(ErrorCode::BrokenChain,
           "record " + std::to_string(i) + ": sequence mismatch");
    if (r.prev != expected_prev)
      fail(ErrorCode::BrokenChain,
           "record " + std::to_string(i) + ": predecessor hash mismatch");
    std::string recomputed = hash::sha256_hex(record_body(r).dump());
    if (recomputed != r.hash)
      fail(ErrorCode::BrokenChain,
           "record " + std::to_string(i) + ": content hash mismatch");
    expected_prev = r.hash;
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json entry_to_json(const ledger::Entry& entry) {
  nlohmann::json j;
  j["kind"] = ledger::entry_kind_name(entry.kind);
  j["agent"] = entry.agent;
  j["amount"] = entry.amount;
  if (!entry.to.empty()) j["to"] = entry.to;
  if (entry.burned != 0) j["burned"] = entry.burned;
  if (entry.key) {
    j["escrow"] = {{"proc", entry.key->process},
                   {"agent", entry.key->agent},
                   {"purpose", ledger::purpose_name(entry.key->purpose)},
                   {"round", entry.key->round}};
  }
  return j;
}

ledger::Entry entry_from_json(const nlohmann::json& j) {
  ledger::Entry entry;
  std::string kind = j.at("kind").get<std::string>();
  bool known = false;
  for (auto k : {ledger::EntryKind::Deposit, ledger::EntryKind::Lock,
                 ledger::EntryKind::Release, ledger::EntryKind::Transfer,
                 ledger::EntryKind::Slash, ledger::EntryKind::Burn}) {
    if (kind == ledger::entry_kind_name(k)) {
      entry.kind = k;
      known = true;
      break;
    }
  }
  if (!known) fail(ErrorCode::BrokenChain, "unknown ledger entry kind: " + kind);
  entry.agent = j.at("agent").get<AgentId>();
  entry.amount = j.at("amount").get<Amount>();
  if (j.contains("to")) entry.to = j.at("to").get<AgentId>();
  if (j.contains("burned")) entry.burned = j.at("burned").get<Amount>();
  if (j.contains("escrow")) {
    const auto& e = j.at("escrow");
    ledger::EscrowKey key;
    key.process = e.at("proc").get<ProcessId>();
    key.agent = e.at("agent").get<AgentId>();
    key.round = e.at("round").get<int>();
    std::string purpose = e.at("purpose").get<std::string>();
    bool found = false;
    for (auto p : {ledger::Purpose::SolverBond, ledger::Purpose::ChallengerBond,
                   ledger::Purpose::VerifierExposure, ledger::Purpose::TaskFee}) {
      if (purpose == ledger::purpose_name(p)) {
        key.purpose = p;
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorCode::BrokenChain, "unknown escrow purpose: " + purpose);
    entry.key = key;
  }
  return entry;
}

}  // namespace verigame::log
