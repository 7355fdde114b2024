#include "verigame/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "verigame/hash.hpp"
#include "verigame/rng.hpp"

namespace verigame::protocol {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::IntentPublished: return "IntentPublished";
    case Phase::SolverSelected: return "SolverSelected";
    case Phase::ChallengeWindowOpen: return "ChallengeWindowOpen";
    case Phase::UnderVerification: return "UnderVerification";
    case Phase::RulingWindowOpen: return "RulingWindowOpen";
    case Phase::Finalized: return "Finalized";
    case Phase::Escalated: return "Escalated";
  }
  return "Unknown";
}

const char* outcome_name(Outcome o) {
  return o == Outcome::ResultStands ? "ResultStands" : "ResultOverturned";
}

const char* verdict_name(Verdict v) {
  return v == Verdict::UpholdTarget ? "UpholdTarget" : "OverturnTarget";
}

namespace {

std::string phase_string(const ProcessState& s) {
  if (s.phase == Phase::Finalized && s.outcome)
    return std::string("Finalized(") + outcome_name(*s.outcome) + ")";
  return phase_name(s.phase);
}

}  // namespace

std::string result_commitment(const std::string& output,
                              const std::string& evidence) {
  return hash::sha256_hex(output + evidence);
}

std::string verdict_commitment(Verdict verdict, const std::string& salt) {
  char tag = verdict == Verdict::UpholdTarget ? 'U' : 'O';
  return hash::sha256_hex(std::string(1, tag) + salt);
}

std::string content_hash(const std::string& data_payload) {
  return hash::sha256_hex(data_payload);
}

void TaskSpec::validate() const {
  if (task_id.empty()) fail(ErrorCode::InvalidArgument, "empty task id");
  if (originator.empty()) fail(ErrorCode::InvalidArgument, "empty originator");
  if (task_fee < 0) fail(ErrorCode::InvalidArgument, "negative task fee");
  if (required_solver_bond <= 0)
    fail(ErrorCode::InvalidArgument, "solver bond requirement must be positive");
  const ConstraintSet& c = constraints;
  if (c.challenge_window <= 0)
    fail(ErrorCode::InvalidArgument, "challenge window must be positive");
  if (c.ruling_challenge_window <= 0)
    fail(ErrorCode::InvalidArgument, "ruling window must be positive");
  if (c.commit_window <= 0)
    fail(ErrorCode::InvalidArgument, "commit window must be positive");
  if (c.reveal_window <= 0)
    fail(ErrorCode::InvalidArgument, "reveal window must be positive");
  if (c.quorum_size < 1 || c.quorum_size % 2 == 0)
    fail(ErrorCode::InvalidArgument, "quorum size must be odd and positive");
  if (c.max_recursion_depth < 1)
    fail(ErrorCode::InvalidArgument, "max recursion depth must be at least 1");
  if (!content_hash.empty() &&
      content_hash != protocol::content_hash(data_payload))
    fail(ErrorCode::InvalidArgument, "content hash does not match payload");
}

Engine::Engine(EngineOptions options) : options_(std::move(options)) {
  if (!(options_.beta >= 0.0 && options_.beta <= 1.0))
    fail(ErrorCode::InvalidArgument, "beta outside [0, 1]");
  if (!(options_.sizing.challenger_multiplier > 0.0))
    fail(ErrorCode::InvalidArgument, "challenger multiplier must be positive");
  if (options_.sizing.verifier_floor < 0)
    fail(ErrorCode::InvalidArgument, "verifier floor must be non-negative");
  if (!(options_.sizing.verifier_fraction > 0.0 &&
        options_.sizing.verifier_fraction <= 1.0))
    fail(ErrorCode::InvalidArgument, "verifier fraction outside (0, 1]");
  if (!(options_.sizing.depth_share_growth >= 1.0))
    fail(ErrorCode::InvalidArgument, "depth share growth must be >= 1");
}

Process& Engine::mutable_process(const ProcessId& pid) {
  auto it = processes_.find(pid);
  if (it == processes_.end()) fail(ErrorCode::UnknownProcess, pid);
  return it->second;
}

const Process& Engine::process(const ProcessId& pid) const {
  auto it = processes_.find(pid);
  if (it == processes_.end()) fail(ErrorCode::UnknownProcess, pid);
  return it->second;
}

void Engine::require_phase(const Process& p, Phase expected,
                           const char* op) const {
  if (p.state.phase != expected)
    fail(ErrorCode::WrongPhase, std::string(op) + " in phase " +
                                    phase_name(p.state.phase));
}

void Engine::log_op(Tick now, const Process& p, const char* op,
                    const nlohmann::json& payload) {
  log_.append(now, p.spec.task_id, op, hash::sha256_hex(payload.dump()),
              phase_string(p.state), payload);
}

void Engine::log_entry(const ledger::Entry& entry) {
  nlohmann::json detail = log::entry_to_json(entry);
  log_.append(entry.tick, entry.key ? entry.key->process : std::string{},
              "ledger", hash::sha256_hex(detail.dump()), "-", detail);
}

void Engine::log_entries(const std::vector<ledger::Entry>& entries) {
  for (const auto& e : entries) log_entry(e);
}

void Engine::deposit(const AgentId& agent, Amount amount, Tick now) {
  const auto& entry = ledger_.deposit(agent, amount, now);
  log_entry(entry);
}

void Engine::register_verifier(const AgentId& agent, Amount stake) {
  if (agent.empty()) fail(ErrorCode::InvalidArgument, "empty verifier id");
  if (stake < 0) fail(ErrorCode::InvalidArgument, "negative stake");
  verifier_stakes_[agent] = stake;
  nlohmann::json detail{{"agent", agent}, {"stake", stake}};
  log_.append(0, "", "register_verifier", hash::sha256_hex(detail.dump()), "-",
              detail);
}

Amount Engine::verifier_stake(const AgentId& agent) const {
  auto it = verifier_stakes_.find(agent);
  if (it == verifier_stakes_.end())
    fail(ErrorCode::InvalidArgument, "not a registered verifier: " + agent);
  return it->second;
}

ProcessId Engine::publish_intent(const TaskSpec& spec, Tick now) {
  spec.validate();
  if (processes_.count(spec.task_id))
    fail(ErrorCode::DuplicateTask, spec.task_id);

  Process p;
  p.spec = spec;
  if (p.spec.content_hash.empty())
    p.spec.content_hash = content_hash(p.spec.data_payload);
  p.state.phase = Phase::IntentPublished;
  p.state.current_depth = 0;

  std::vector<ledger::Entry> entries;
  if (spec.task_fee > 0) {
    // The originator funds the fee up front; it is paid out or refunded at
    // settlement.
    const auto& e = ledger_.lock(
        {spec.task_id, spec.originator, ledger::Purpose::TaskFee, -1},
        spec.task_fee, now);
    entries.push_back(e);
  }

  auto [it, inserted] = processes_.emplace(spec.task_id, std::move(p));
  log_entries(entries);
  nlohmann::json payload{{"task", spec.task_id},
                         {"originator", spec.originator},
                         {"fee", spec.task_fee},
                         {"solver_bond", spec.required_solver_bond},
                         {"content", it->second.spec.content_hash}};
  log_op(now, it->second, "publish_intent", payload);
  return spec.task_id;
}

void Engine::register_commitment(const ProcessId& pid, const AgentId& agent,
                                 Amount bond, Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::IntentPublished, "register_commitment");
  if (bond < p.spec.required_solver_bond)
    fail(ErrorCode::BondTooSmall,
         std::to_string(bond) + " < required " +
             std::to_string(p.spec.required_solver_bond));
  if (ledger_.free_balance(agent) < bond)
    fail(ErrorCode::InsufficientBalance, agent);
  for (const auto& c : p.candidates)
    if (c.agent == agent) fail(ErrorCode::DuplicateCandidate, agent);

  p.candidates.push_back({agent, bond, now});
  nlohmann::json payload{{"task", pid}, {"agent", agent}, {"bond", bond}};
  log_op(now, p, "register_commitment", payload);
}

AgentId Engine::select_solver(const ProcessId& pid, std::uint64_t seed,
                              Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::IntentPublished, "select_solver");
  if (p.candidates.empty()) fail(ErrorCode::EmptyCandidatePool, pid);

  std::size_t index = 0;
  if (p.spec.constraints.solver_selection_policy ==
      SelectionPolicy::UniformRandom) {
    rng::Generator gen(seed);
    index = std::size_t(rng::below(gen, p.candidates.size()));
  }
  const Candidate& chosen = p.candidates[index];

  const auto& entry = ledger_.lock(
      {pid, chosen.agent, ledger::Purpose::SolverBond, -1}, chosen.bond, now);
  p.solver = chosen.agent;
  p.locked_solver_bond = chosen.bond;
  p.state.phase = Phase::SolverSelected;

  log_entry(entry);
  nlohmann::json payload{{"task", pid},
                         {"solver", chosen.agent},
                         {"bond", chosen.bond},
                         {"pool", p.candidates.size()}};
  log_op(now, p, "select_solver", payload);
  return chosen.agent;
}

const ResultRecord& Engine::submit_result(const ProcessId& pid,
                                          const AgentId& solver,
                                          std::string output,
                                          std::string evidence, Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::SolverSelected, "submit_result");
  if (!p.solver || *p.solver != solver)
    fail(ErrorCode::NotTheSolver, solver);

  ResultRecord record;
  record.task_id = pid;
  record.solver = solver;
  record.commitment = result_commitment(output, evidence);
  record.output = std::move(output);
  record.evidence = std::move(evidence);
  record.submitted_at = now;
  p.result = std::move(record);

  p.state.phase = Phase::ChallengeWindowOpen;
  p.state.current_depth = 0;
  p.state.window_deadline = now + p.spec.constraints.challenge_window;

  nlohmann::json payload{{"task", pid},
                         {"solver", solver},
                         {"commitment", p.result->commitment},
                         {"deadline", *p.state.window_deadline}};
  log_op(now, p, "submit_result", payload);
  return *p.result;
}

int Engine::next_challenge_depth(const Process& p) const {
  return p.state.current_depth;
}

Tick Engine::reopened_window_length(const Process& p) const {
  return p.state.current_depth == 0 ? p.spec.constraints.challenge_window
                                    : p.spec.constraints.ruling_challenge_window;
}

const DisputeRecord& Engine::open_challenge(const ProcessId& pid,
                                            const AgentId& challenger,
                                            std::string evidence, Amount bond,
                                            Tick now) {
  Process& p = mutable_process(pid);
  if (p.state.phase != Phase::ChallengeWindowOpen &&
      p.state.phase != Phase::RulingWindowOpen)
    fail(ErrorCode::WrongPhase,
         std::string("open_challenge in phase ") + phase_name(p.state.phase));
  if (!(now < *p.state.window_deadline))
    fail(ErrorCode::WindowClosed, "window expired at tick " +
                                      std::to_string(*p.state.window_deadline));

  int depth = next_challenge_depth(p);
  if (depth + 1 > p.spec.constraints.max_recursion_depth)
    fail(ErrorCode::DepthExhausted,
         "challenge would open depth " + std::to_string(depth) +
             " beyond limit; escalation required");

  Amount required = required_challenger_bond(pid);
  if (bond < required)
    fail(ErrorCode::BondTooSmall, std::to_string(bond) + " < required " +
                                      std::to_string(required));

  std::string target = "result";
  if (depth > 0) {
    // The claim under attack is the most recent ruling; its quorum may not
    // dispute its own decision.
    const DisputeRound* ruled = nullptr;
    for (const auto& round : p.rounds)
      if (round.ruling) ruled = &round;
    if (!ruled)
      fail(ErrorCode::WrongPhase, "ruling window without a ruling");
    target = ruled->dispute.dispute_id;
    for (const auto& member : ruled->ruling->quorum)
      if (member == challenger) fail(ErrorCode::SelfChallenge, challenger);
  } else {
    if (p.solver && *p.solver == challenger)
      fail(ErrorCode::SelfChallenge, challenger);
  }

  int round_index = int(p.rounds.size());
  DisputeRound round;
  round.dispute.dispute_id = pid + "#r" + std::to_string(round_index);
  round.dispute.depth = depth;
  round.dispute.round = round_index;
  round.dispute.target = target;
  round.dispute.challenger = challenger;
  round.dispute.adversarial_evidence = std::move(evidence);
  round.dispute.challenger_bond = bond;
  round.dispute.opened_at = now;

  const auto& entry = ledger_.lock(
      {pid, challenger, ledger::Purpose::ChallengerBond, round_index}, bond,
      now);

  p.rounds.push_back(std::move(round));
  p.state.phase = Phase::UnderVerification;
  p.state.window_deadline.reset();

  log_entry(entry);
  const DisputeRound& stored = p.rounds.back();
  nlohmann::json payload{{"task", pid},
                         {"dispute", stored.dispute.dispute_id},
                         {"depth", depth},
                         {"challenger", challenger},
                         {"target", stored.dispute.target},
                         {"bond", bond},
                         {"evidence", hash::sha256_hex(
                                          stored.dispute.adversarial_evidence)}};
  log_op(now, p, "open_challenge", payload);
  return stored.dispute;
}

std::vector<AgentId> Engine::eligible_verifiers(const ProcessId& pid) const {
  const Process& p = process(pid);
  require_phase(p, Phase::UnderVerification, "eligible_verifiers");
  const DisputeRound& active = p.rounds.back();
  int depth = active.dispute.depth;

  std::vector<AgentId> eligible;
  for (const auto& [agent, stake] : verifier_stakes_) {
    if (p.solver && *p.solver == agent) continue;
    bool excluded = false;
    for (const auto& round : p.rounds) {
      if (round.dispute.challenger == agent) excluded = true;
      for (const auto& member : round.quorum)
        if (member == agent) excluded = true;
    }
    if (excluded) continue;
    Amount exposure = econ::verifier_exposure(stake, depth, options_.sizing);
    if (exposure <= 0 || ledger_.free_balance(agent) < exposure) continue;
    eligible.push_back(agent);
  }
  return eligible;
}

std::vector<AgentId> Engine::select_verifiers(const ProcessId& pid,
                                              std::uint64_t seed, Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::UnderVerification, "select_verifiers");
  DisputeRound& active = p.rounds.back();
  if (active.quorum_selected)
    fail(ErrorCode::QuorumAlreadySelected, active.dispute.dispute_id);

  std::vector<AgentId> pool = eligible_verifiers(pid);
  int quorum_size = p.spec.constraints.quorum_size;
  if (int(pool.size()) < quorum_size)
    fail(ErrorCode::InsufficientVerifiers,
         std::to_string(pool.size()) + " eligible of " +
             std::to_string(quorum_size) + " required; escalation required");

  rng::Generator gen(seed);
  std::vector<std::size_t> picks =
      rng::sample_indices(gen, pool.size(), std::size_t(quorum_size));

  int depth = active.dispute.depth;
  std::vector<AgentId> quorum;
  std::vector<ledger::Entry> entries;
  std::map<AgentId, Amount> exposures;
  for (std::size_t idx : picks) {
    const AgentId& agent = pool[idx];
    Amount exposure = econ::verifier_exposure(verifier_stakes_.at(agent), depth,
                                              options_.sizing);
    entries.push_back(ledger_.lock(
        {pid, agent, ledger::Purpose::VerifierExposure, active.dispute.round},
        exposure, now));
    quorum.push_back(agent);
    exposures[agent] = exposure;
  }

  active.quorum_selected = true;
  active.quorum = quorum;
  active.exposures = std::move(exposures);
  p.state.commit_deadline = now + p.spec.constraints.commit_window;
  p.state.reveal_deadline = now + p.spec.constraints.commit_window +
                            p.spec.constraints.reveal_window;

  log_entries(entries);
  nlohmann::json payload{{"task", pid},
                         {"dispute", active.dispute.dispute_id},
                         {"quorum", quorum},
                         {"commit_deadline", *p.state.commit_deadline},
                         {"reveal_deadline", *p.state.reveal_deadline}};
  log_op(now, p, "select_verifiers", payload);
  return quorum;
}

void Engine::commit_verdict(const ProcessId& pid, const AgentId& verifier,
                            const std::string& commitment, Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::UnderVerification, "commit_verdict");
  DisputeRound& active = p.rounds.back();
  if (!active.quorum_selected) fail(ErrorCode::NoQuorum, pid);
  if (std::find(active.quorum.begin(), active.quorum.end(), verifier) ==
      active.quorum.end())
    fail(ErrorCode::NotInQuorum, verifier);
  if (active.commitments.count(verifier))
    fail(ErrorCode::DuplicateCommit, verifier + " already committed");
  if (!(now < *p.state.commit_deadline))
    fail(ErrorCode::DeadlinePassed, "commit deadline passed");

  active.commitments[verifier] = commitment;
  nlohmann::json payload{{"task", pid},
                         {"dispute", active.dispute.dispute_id},
                         {"verifier", verifier},
                         {"commitment", commitment}};
  log_op(now, p, "commit_verdict", payload);
}

void Engine::reveal_verdict(const ProcessId& pid, const AgentId& verifier,
                            Verdict verdict, const std::string& salt,
                            Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::UnderVerification, "reveal_verdict");
  DisputeRound& active = p.rounds.back();
  if (!active.quorum_selected) fail(ErrorCode::NoQuorum, pid);
  auto commit_it = active.commitments.find(verifier);
  if (commit_it == active.commitments.end())
    fail(ErrorCode::NoCommitment, verifier);
  if (active.reveals.count(verifier))
    fail(ErrorCode::DuplicateCommit, verifier + " already revealed");
  if (!(now < *p.state.reveal_deadline))
    fail(ErrorCode::DeadlinePassed, "reveal deadline passed");
  // Reveals stay sealed until every quorum member has committed or can no
  // longer commit.
  if (active.commitments.size() < active.quorum.size() &&
      now < *p.state.commit_deadline)
    fail(ErrorCode::NotReady, "commit phase still open");
  if (verdict_commitment(verdict, salt) != commit_it->second)
    fail(ErrorCode::CommitMismatch, verifier);

  active.reveals[verifier] = {verdict, salt};
  nlohmann::json payload{{"task", pid},
                         {"dispute", active.dispute.dispute_id},
                         {"verifier", verifier},
                         {"verdict", verdict_name(verdict)}};
  log_op(now, p, "reveal_verdict", payload);
}

std::optional<RulingRecord> Engine::resolve_round(Process& p, Tick now,
                                                  bool deadline_expired) {
  DisputeRound& active = p.rounds.back();
  int uphold = 0, overturn = 0;
  for (const auto& [agent, reveal] : active.reveals)
    (reveal.first == Verdict::UpholdTarget ? uphold : overturn) += 1;

  if (uphold == overturn) {
    // No decisive majority: the round voids in favour of its target and the
    // interrupted window re-opens.
    active.voided = true;
    p.state.phase = p.state.current_depth == 0 ? Phase::ChallengeWindowOpen
                                               : Phase::RulingWindowOpen;
    p.state.window_deadline = now + reopened_window_length(p);
    p.state.commit_deadline.reset();
    p.state.reveal_deadline.reset();
    nlohmann::json payload{{"task", p.spec.task_id},
                           {"dispute", active.dispute.dispute_id},
                           {"reveals", int(active.reveals.size())},
                           {"expired", deadline_expired},
                           {"deadline", *p.state.window_deadline}};
    log_op(now, p, "void_ruling", payload);
    return std::nullopt;
  }

  RulingRecord ruling;
  ruling.dispute_id = active.dispute.dispute_id;
  ruling.quorum = active.quorum;
  ruling.commitments = active.commitments;
  ruling.reveals = active.reveals;
  ruling.verdict =
      overturn > uphold ? Verdict::OverturnTarget : Verdict::UpholdTarget;
  ruling.verifier_exposure = active.exposures;
  ruling.issued_at = now;
  active.ruling = ruling;

  p.state.phase = Phase::RulingWindowOpen;
  p.state.current_depth = active.dispute.depth + 1;
  p.state.window_deadline = now + p.spec.constraints.ruling_challenge_window;
  p.state.commit_deadline.reset();
  p.state.reveal_deadline.reset();

  nlohmann::json payload{{"task", p.spec.task_id},
                         {"dispute", active.dispute.dispute_id},
                         {"verdict", verdict_name(ruling.verdict)},
                         {"uphold", uphold},
                         {"overturn", overturn},
                         {"nonreveal", int(active.quorum.size()) - uphold -
                                           overturn},
                         {"deadline", *p.state.window_deadline}};
  log_op(now, p, "issue_ruling", payload);
  return active.ruling;
}

std::optional<RulingRecord> Engine::issue_ruling(const ProcessId& pid,
                                                 Tick now) {
  Process& p = mutable_process(pid);
  require_phase(p, Phase::UnderVerification, "issue_ruling");
  DisputeRound& active = p.rounds.back();
  if (!active.quorum_selected) fail(ErrorCode::NoQuorum, pid);
  bool all_revealed = active.reveals.size() == active.quorum.size();
  bool expired = now >= *p.state.reveal_deadline;
  if (!all_revealed && !expired)
    fail(ErrorCode::NotReady, "reveals outstanding and deadline not reached");
  return resolve_round(p, now, expired);
}

bool Engine::advance_time(const ProcessId& pid, Tick now) {
  Process& p = mutable_process(pid);
  bool transitioned = false;
  for (;;) {
    if (p.state.phase == Phase::ChallengeWindowOpen ||
        p.state.phase == Phase::RulingWindowOpen) {
      if (now >= *p.state.window_deadline) {
        finalize(p, now, "window_expired");
        transitioned = true;
        continue;
      }
    } else if (p.state.phase == Phase::UnderVerification) {
      DisputeRound& active = p.rounds.back();
      if (active.quorum_selected && now >= *p.state.reveal_deadline) {
        resolve_round(p, now, true);
        transitioned = true;
        continue;
      }
    }
    break;
  }
  return transitioned;
}

Outcome Engine::chain_outcome(const Process& p) const {
  // Standing propagation: the deepest ruling stands, each ruling fixes the
  // standing of its target, and the result's standing is the outcome.
  std::vector<const DisputeRound*> ruled;
  for (const auto& round : p.rounds)
    if (round.ruling) ruled.push_back(&round);

  bool claim_stands = true;  // standing of the deepest ruling
  for (std::size_t i = ruled.size(); i-- > 0;) {
    const RulingRecord& ruling = *ruled[i]->ruling;
    bool target_stands = (ruling.verdict == Verdict::UpholdTarget);
    if (!claim_stands) target_stands = !target_stands;
    claim_stands = target_stands;
  }
  return claim_stands ? Outcome::ResultStands : Outcome::ResultOverturned;
}

Outcome Engine::evaluate_chain(const ProcessId& pid) const {
  const Process& p = process(pid);
  if (p.state.phase == Phase::Finalized) return *p.state.outcome;
  if (!p.result)
    fail(ErrorCode::WrongPhase, "no result to evaluate in phase " +
                                    std::string(phase_name(p.state.phase)));
  return chain_outcome(p);
}

void Engine::finalize(Process& p, Tick now, const char* cause) {
  Outcome outcome = chain_outcome(p);
  p.state.phase = Phase::Finalized;
  p.state.outcome = outcome;
  p.state.window_deadline.reset();
  p.state.commit_deadline.reset();
  p.state.reveal_deadline.reset();
  nlohmann::json payload{{"task", p.spec.task_id},
                         {"outcome", outcome_name(outcome)},
                         {"cause", cause}};
  log_op(now, p, "finalize", payload);
}

const EscalationRecord& Engine::escalate(const ProcessId& pid, Tick now) {
  Process& p = mutable_process(pid);
  std::string cause;
  if ((p.state.phase == Phase::ChallengeWindowOpen ||
       p.state.phase == Phase::RulingWindowOpen) &&
      p.state.current_depth + 1 > p.spec.constraints.max_recursion_depth) {
    cause = "depth_exhausted";
  } else if (p.state.phase == Phase::UnderVerification &&
             !p.rounds.back().quorum_selected &&
             int(eligible_verifiers(pid).size()) <
                 p.spec.constraints.quorum_size) {
    cause = "verifier_scarcity";
  } else {
    fail(ErrorCode::NotEscalatable,
         "no exhausted depth or verifier scarcity in phase " +
             std::string(phase_name(p.state.phase)));
  }

  if (!p.spec.constraints.escalation_target) {
    // No higher layer configured: the deepest surviving claim finalizes.
    finalize(p, now, cause.c_str());
    escalations_.push_back({pid, "", cause, now});
    return escalations_.back();
  }

  p.state.phase = Phase::Escalated;
  p.state.window_deadline.reset();
  p.state.commit_deadline.reset();
  p.state.reveal_deadline.reset();
  p.escalated_to = *p.spec.constraints.escalation_target;
  escalations_.push_back({pid, *p.escalated_to, cause, now});

  nlohmann::json payload{{"task", pid},
                         {"target", *p.escalated_to},
                         {"cause", cause}};
  log_op(now, p, "escalate", payload);
  return escalations_.back();
}

Amount Engine::required_challenger_bond(const ProcessId& pid) const {
  const Process& p = process(pid);
  Amount basis =
      p.locked_solver_bond > 0 ? p.locked_solver_bond : p.spec.required_solver_bond;
  return econ::challenger_bond_from_solver(basis, options_.sizing);
}

ledger::SettlementPlan Engine::plan_settlement(const ProcessId& pid,
                                               Outcome truth) const {
  const Process& p = process(pid);
  if (p.state.phase != Phase::Finalized)
    fail(ErrorCode::NotFinalized, phase_name(p.state.phase));
  if (truth != *p.state.outcome)
    fail(ErrorCode::InvalidArgument,
         "supplied outcome disagrees with the finalized chain");

  const double burn_share = 1.0 - options_.beta;
  ledger::SettlementPlan plan;

  auto add_refund = [&](const ledger::EscrowKey& key, Amount amount) {
    plan.refunds.push_back({key, amount});
  };
  // A slash either splits between the prevailing party and the burn counter,
  // or burns whole when no single counterparty exists (quorum-owned claims).
  auto add_slash = [&](const ledger::EscrowKey& key, Amount amount,
                       const AgentId& to, const std::string& reason) {
    Amount burned = to.empty() ? amount
                               : std::llround(burn_share * double(amount));
    if (burned < 0) burned = 0;
    if (burned > amount) burned = amount;
    Amount rewarded = amount - burned;
    if (rewarded > 0) plan.transfers.push_back({key, to, rewarded, reason});
    if (burned > 0) plan.burns.push_back({key, burned, reason});
  };

  // Ruled rounds form the chain; standing cascades down from the deepest.
  std::vector<const DisputeRound*> ruled;
  for (const auto& round : p.rounds)
    if (round.ruling) ruled.push_back(&round);
  std::size_t k = ruled.size();
  std::vector<bool> authoritative(k, true);
  for (std::size_t i = k; i-- > 1;) {
    bool upheld = ruled[i]->ruling->verdict == Verdict::UpholdTarget;
    authoritative[i - 1] = (upheld == authoritative[i]);
  }
  auto dispute_won = [&](std::size_t t) {
    return t == 0 ? truth == Outcome::ResultOverturned : !authoritative[t - 1];
  };

  // Task fee.
  if (p.spec.task_fee > 0) {
    ledger::EscrowKey fee_key{pid, p.spec.originator, ledger::Purpose::TaskFee,
                              -1};
    if (truth == Outcome::ResultStands && p.solver)
      plan.transfers.push_back({fee_key, *p.solver, p.spec.task_fee,
                                "fee-award"});
    else
      add_refund(fee_key, p.spec.task_fee);
  }

  // Solver bond.
  if (p.solver) {
    ledger::EscrowKey bond_key{pid, *p.solver, ledger::Purpose::SolverBond, -1};
    if (truth == Outcome::ResultStands)
      add_refund(bond_key, p.locked_solver_bond);
    else
      add_slash(bond_key, p.locked_solver_bond,
                ruled.front()->dispute.challenger, "solver-bond-slash");
  }

  // Dispute rounds, in the order they were opened.
  std::size_t ruled_index = 0;
  for (const auto& round : p.rounds) {
    ledger::EscrowKey challenger_key{pid, round.dispute.challenger,
                                     ledger::Purpose::ChallengerBond,
                                     round.dispute.round};
    AgentId claim_owner =
        round.dispute.depth == 0 && p.solver ? *p.solver : AgentId{};

    if (round.voided) {
      // The round failed by default; its challenger and every silent
      // verifier pay, revealed verifiers are made whole.
      add_slash(challenger_key, round.dispute.challenger_bond, claim_owner,
                "challenger-bond-slash");
      for (const auto& member : round.quorum) {
        ledger::EscrowKey exposure_key{pid, member,
                                       ledger::Purpose::VerifierExposure,
                                       round.dispute.round};
        if (round.reveals.count(member))
          add_refund(exposure_key, round.exposures.at(member));
        else
          add_slash(exposure_key, round.exposures.at(member), claim_owner,
                    "verifier-slash");
      }
      continue;
    }

    if (!round.ruling) {
      // Abandoned by escalation fallback before adjudication: nobody is at
      // fault, stakes return.
      add_refund(challenger_key, round.dispute.challenger_bond);
      for (const auto& member : round.quorum)
        add_refund({pid, member, ledger::Purpose::VerifierExposure,
                    round.dispute.round},
                   round.exposures.at(member));
      continue;
    }

    std::size_t t = ruled_index++;
    bool won = dispute_won(t);
    if (won)
      add_refund(challenger_key, round.dispute.challenger_bond);
    else
      add_slash(challenger_key, round.dispute.challenger_bond, claim_owner,
                "challenger-bond-slash");

    Verdict correct_verdict =
        won ? Verdict::OverturnTarget : Verdict::UpholdTarget;
    // Wrong or silent verifiers pay the party their misjudgement wronged:
    // the next round's challenger when this ruling was itself overturned,
    // otherwise the prevailing side of this round.
    AgentId reward_target;
    if (!authoritative[t])
      reward_target = ruled[t + 1]->dispute.challenger;
    else if (won)
      reward_target = round.dispute.challenger;
    else
      reward_target = claim_owner;

    for (const auto& member : round.quorum) {
      ledger::EscrowKey exposure_key{pid, member,
                                     ledger::Purpose::VerifierExposure,
                                     round.dispute.round};
      auto reveal_it = round.reveals.find(member);
      bool correct =
          reveal_it != round.reveals.end() && reveal_it->second.first == correct_verdict;
      if (correct)
        add_refund(exposure_key, round.exposures.at(member));
      else
        add_slash(exposure_key, round.exposures.at(member), reward_target,
                  "verifier-slash");
    }
  }

  return plan;
}

std::vector<ledger::Entry> Engine::settle(const ProcessId& pid, Tick now) {
  Process& p = mutable_process(pid);
  if (p.state.phase != Phase::Finalized)
    fail(ErrorCode::NotFinalized, phase_name(p.state.phase));
  if (p.settled) fail(ErrorCode::AlreadySettled, pid);

  ledger::SettlementPlan plan = plan_settlement(pid, *p.state.outcome);
  std::vector<ledger::Entry> entries = ledger_.apply_settlement(plan, now);
  p.settled = true;

  log_entries(entries);
  nlohmann::json payload{{"task", pid},
                         {"outcome", outcome_name(*p.state.outcome)},
                         {"items", entries.size()}};
  log_op(now, p, "settle", payload);
  return entries;
}

}  // namespace verigame::protocol
