#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "verigame/ledger.hpp"
#include "verigame/types.hpp"

namespace verigame::log {

// Genesis predecessor for the first record.
inline const std::string kGenesisHash(64, '0');

// One accepted operation. Serialized as a single JSON line with sorted keys;
// `prev` is the previous record's hash and `hash` covers everything else, so
// any single-byte edit breaks verification.
struct Record {
  std::uint64_t seq = 0;
  Tick tick = 0;
  std::string process;  // empty for global records (deposits)
  std::string op;
  std::string digest;   // payload digest
  std::string phase;    // resulting phase, "-" for ledger records
  nlohmann::json detail;  // structured payload (ledger entries carry amounts)
  std::string prev;
  std::string hash;

  std::string to_line() const;
  static Record from_line(const std::string& line, std::size_t index);
};

class EventLog {
 public:
  const Record& append(Tick tick, std::string process, std::string op,
                       std::string digest, std::string phase,
                       nlohmann::json detail);

  const std::vector<Record>& records() const { return records_; }
  std::vector<std::string> lines() const;
  std::string dump() const;  // newline-terminated lines
  const std::string& head_hash() const;

 private:
  std::vector<Record> records_;
};

// Parses and verifies a chained log. Throws Error(BrokenChain) naming the
// first bad record.
std::vector<Record> parse_and_verify(const std::vector<std::string>& lines);

nlohmann::json entry_to_json(const ledger::Entry& entry);
ledger::Entry entry_from_json(const nlohmann::json& j);

}  // namespace verigame::log
