#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "verigame/economics.hpp"
#include "verigame/eventlog.hpp"
#include "verigame/ledger.hpp"
#include "verigame/types.hpp"

namespace verigame::protocol {

enum class Phase {
  IntentPublished,
  SolverSelected,
  ChallengeWindowOpen,
  UnderVerification,
  RulingWindowOpen,
  Finalized,
  Escalated,
};

enum class Outcome { ResultStands, ResultOverturned };
enum class Verdict { UpholdTarget, OverturnTarget };
enum class SelectionPolicy { FirstQualified, UniformRandom };

const char* phase_name(Phase p);
const char* outcome_name(Outcome o);
const char* verdict_name(Verdict v);

struct ConstraintSet {
  Tick challenge_window = 0;
  Tick ruling_challenge_window = 0;
  Tick commit_window = 1;
  Tick reveal_window = 1;
  int quorum_size = 1;              // odd, so every ruling is decisive
  int max_recursion_depth = 1;      // disputes allowed at depths 0..max-1
  SelectionPolicy solver_selection_policy = SelectionPolicy::FirstQualified;
  std::optional<std::string> escalation_target;
};

struct TaskSpec {
  ProcessId task_id;
  ConstraintSet constraints;
  std::string intent;
  std::string data_payload;
  std::string content_hash;  // sha256(data_payload), recomputable
  AgentId originator;
  Amount task_fee = 0;
  Amount required_solver_bond = 0;

  void validate() const;
};

struct ResultRecord {
  ProcessId task_id;
  AgentId solver;
  std::string output;
  std::string evidence;
  std::string commitment;  // sha256(output || evidence)
  Tick submitted_at = 0;
};

struct DisputeRecord {
  std::string dispute_id;
  int depth = 0;   // 0 targets the result, t >= 1 targets the ruling below
  int round = 0;   // index within the process, unique across re-opened windows
  std::string target;  // "result" or the targeted ruling's dispute id
  AgentId challenger;
  std::string adversarial_evidence;
  Amount challenger_bond = 0;
  Tick opened_at = 0;
};

struct RulingRecord {
  std::string dispute_id;
  std::vector<AgentId> quorum;
  std::map<AgentId, std::string> commitments;
  std::map<AgentId, std::pair<Verdict, std::string>> reveals;
  Verdict verdict = Verdict::UpholdTarget;
  std::map<AgentId, Amount> verifier_exposure;
  Tick issued_at = 0;
};

struct ProcessState {
  Phase phase = Phase::IntentPublished;
  int current_depth = 0;  // depth the next challenge would open at
  std::optional<Tick> window_deadline;  // ChallengeWindowOpen / RulingWindowOpen
  std::optional<Tick> commit_deadline;  // UnderVerification only
  std::optional<Tick> reveal_deadline;  // UnderVerification only
  std::optional<Outcome> outcome;       // Finalized only
};

struct Candidate {
  AgentId agent;
  Amount bond = 0;
  Tick registered_at = 0;
};

// One dispute and its adjudication. A round with zero valid reveals (or a
// tie among them) voids: the window it interrupted re-opens and the round is
// settled against the challenger.
struct DisputeRound {
  DisputeRecord dispute;
  bool quorum_selected = false;
  std::vector<AgentId> quorum;  // draw order
  std::map<AgentId, Amount> exposures;
  std::map<AgentId, std::string> commitments;
  std::map<AgentId, std::pair<Verdict, std::string>> reveals;
  std::optional<RulingRecord> ruling;
  bool voided = false;

  bool resolved() const { return ruling.has_value() || voided; }
};

struct Process {
  TaskSpec spec;
  ProcessState state;
  std::vector<Candidate> candidates;
  std::optional<AgentId> solver;
  Amount locked_solver_bond = 0;
  std::optional<ResultRecord> result;
  std::vector<DisputeRound> rounds;
  bool settled = false;
  std::optional<std::string> escalated_to;
};

struct EscalationRecord {
  ProcessId process;
  std::string target;
  std::string cause;  // "depth_exhausted" or "verifier_scarcity"
  Tick tick = 0;
};

std::string result_commitment(const std::string& output,
                              const std::string& evidence);
std::string verdict_commitment(Verdict verdict, const std::string& salt);
std::string content_hash(const std::string& data_payload);

struct EngineOptions {
  econ::BondSizingPolicy sizing;
  double beta = 0.5;  // prevailing-party share of a slash; remainder burns
};

// Drives task lifecycles against a shared ledger and append-only event log.
// Single logical writer; operations are atomic against process + ledger, and
// every accepted mutation is logged.
class Engine {
 public:
  explicit Engine(EngineOptions options);

  // -- accounts ------------------------------------------------------------
  void deposit(const AgentId& agent, Amount amount, Tick now);
  // Declares an agent willing to adjudicate, with the stake feeding the
  // fractional exposure model.
  void register_verifier(const AgentId& agent, Amount stake);

  // -- lifecycle -----------------------------------------------------------
  ProcessId publish_intent(const TaskSpec& spec, Tick now);
  void register_commitment(const ProcessId& pid, const AgentId& agent,
                           Amount bond, Tick now);
  AgentId select_solver(const ProcessId& pid, std::uint64_t seed, Tick now);
  const ResultRecord& submit_result(const ProcessId& pid, const AgentId& solver,
                                    std::string output, std::string evidence,
                                    Tick now);
  // Applies any expired deadline: finalizes lapsed windows and closes lapsed
  // reveal phases. Idempotent; returns true if a transition happened.
  bool advance_time(const ProcessId& pid, Tick now);
  const DisputeRecord& open_challenge(const ProcessId& pid,
                                      const AgentId& challenger,
                                      std::string evidence, Amount bond,
                                      Tick now);
  std::vector<AgentId> select_verifiers(const ProcessId& pid,
                                        std::uint64_t seed, Tick now);
  void commit_verdict(const ProcessId& pid, const AgentId& verifier,
                      const std::string& commitment, Tick now);
  void reveal_verdict(const ProcessId& pid, const AgentId& verifier,
                      Verdict verdict, const std::string& salt, Tick now);
  // nullopt when the round voids (no decisive reveals).
  std::optional<RulingRecord> issue_ruling(const ProcessId& pid, Tick now);
  const EscalationRecord& escalate(const ProcessId& pid, Tick now);
  Outcome evaluate_chain(const ProcessId& pid) const;
  ledger::SettlementPlan plan_settlement(const ProcessId& pid,
                                         Outcome truth) const;
  // plan + apply, once per process.
  std::vector<ledger::Entry> settle(const ProcessId& pid, Tick now);

  // -- inspection ----------------------------------------------------------
  const Process& process(const ProcessId& pid) const;
  bool exists(const ProcessId& pid) const { return processes_.count(pid) > 0; }
  Amount required_challenger_bond(const ProcessId& pid) const;
  Amount verifier_stake(const AgentId& agent) const;
  std::vector<AgentId> eligible_verifiers(const ProcessId& pid) const;
  const std::vector<EscalationRecord>& escalations() const {
    return escalations_;
  }

  ledger::Ledger& ledger() { return ledger_; }
  const ledger::Ledger& ledger() const { return ledger_; }
  log::EventLog& event_log() { return log_; }
  const log::EventLog& event_log() const { return log_; }
  const EngineOptions& options() const { return options_; }

 private:
  Process& mutable_process(const ProcessId& pid);
  void require_phase(const Process& p, Phase expected, const char* op) const;
  void log_op(Tick now, const Process& p, const char* op,
              const nlohmann::json& payload);
  void log_entries(const std::vector<ledger::Entry>& entries);
  void log_entry(const ledger::Entry& entry);
  // Ruling/void resolution shared by issue_ruling and advance_time.
  std::optional<RulingRecord> resolve_round(Process& p, Tick now,
                                            bool deadline_expired);
  void finalize(Process& p, Tick now, const char* cause);
  Outcome chain_outcome(const Process& p) const;
  int next_challenge_depth(const Process& p) const;
  Tick reopened_window_length(const Process& p) const;

  EngineOptions options_;
  ledger::Ledger ledger_;
  log::EventLog log_;
  std::map<ProcessId, Process> processes_;
  std::map<AgentId, Amount> verifier_stakes_;
  std::vector<EscalationRecord> escalations_;
};

}  // namespace verigame::protocol
