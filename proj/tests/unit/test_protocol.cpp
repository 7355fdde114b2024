#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracle/oracles.hpp"
#include "verigame/protocol.hpp"
#include "verigame/rng.hpp"

using namespace verigame;
using protocol::Engine;
using protocol::EngineOptions;
using protocol::Outcome;
using protocol::Phase;
using protocol::TaskSpec;
using protocol::Verdict;

namespace {

EngineOptions default_options(double beta = 0.5) {
  EngineOptions options;
  options.beta = beta;
  options.sizing.challenger_multiplier = 0.5;
  options.sizing.verifier_floor = 1;
  options.sizing.verifier_fraction = 0.1;
  options.sizing.depth_share_growth = 1.0;
  return options;
}

TaskSpec task_spec(const ProcessId& pid, Amount fee = 3, Amount bond = 10,
                   int quorum = 3, int max_depth = 3,
                   std::optional<std::string> escalation = std::nullopt) {
  TaskSpec spec;
  spec.task_id = pid;
  spec.originator = "org";
  spec.task_fee = fee;
  spec.required_solver_bond = bond;
  spec.intent = "do the thing";
  spec.data_payload = "input bytes";
  spec.constraints.challenge_window = 10;
  spec.constraints.ruling_challenge_window = 10;
  spec.constraints.commit_window = 5;
  spec.constraints.reveal_window = 5;
  spec.constraints.quorum_size = quorum;
  spec.constraints.max_recursion_depth = max_depth;
  spec.constraints.solver_selection_policy =
      protocol::SelectionPolicy::FirstQualified;
  spec.constraints.escalation_target = escalation;
  return spec;
}

// Scripted single-task episode against a real engine, mirrored into an
// oracle description for settlement comparison.
struct Rig {
  Engine engine;
  Tick now = 1;
  ProcessId pid = "t0";
  Amount bond = 10;
  Amount fee = 3;
  std::uint64_t next_seed = 1000;
  std::map<AgentId, Amount> initial;
  oracle::OracleEpisode episode;
  TaskSpec spec;

  explicit Rig(double beta = 0.5, int quorum = 3, int max_depth = 3,
               int verifier_count = 12,
               std::optional<std::string> escalation = std::nullopt)
      : engine(default_options(beta)) {
    episode.beta = beta;
    episode.solver = "sol";
    episode.originator = "org";
    episode.solver_bond = bond;
    episode.fee = fee;
    fund("org", 1000);
    fund("sol", 1000);
    fund("cha", 1000);
    fund("chb", 1000);
    for (int i = 0; i < verifier_count; ++i) {
      AgentId v = "v" + std::to_string(i);
      fund(v, 1000);
      engine.register_verifier(v, 100);
    }
    spec = task_spec(pid, fee, bond, quorum, max_depth, escalation);
  }

  void fund(const AgentId& agent, Amount amount) {
    engine.deposit(agent, amount, 0);
    initial[agent] = engine.ledger().free_balance(agent);
  }

  void start() {
    engine.publish_intent(spec, now);
    engine.register_commitment(pid, "sol", bond, now);
    engine.select_solver(pid, next_seed++, now);
    now += 1;
    engine.submit_result(pid, "sol", "output", "evidence", now);
  }

  void challenge(const AgentId& who) {
    Amount required = engine.required_challenger_bond(pid);
    engine.open_challenge(pid, who, "counterexample", required, now);
    oracle::OracleRound round;
    round.challenger = who;
    round.bond = required;
    round.depth = engine.process(pid).rounds.back().dispute.depth;
    episode.rounds.push_back(round);
  }

  // One commit-reveal pass for the active dispute. Script is positional over
  // the drawn quorum: 'U' uphold, 'O' overturn, '-' commit but never reveal.
  std::vector<AgentId> adjudicate(const std::string& script) {
    auto quorum = engine.select_verifiers(pid, next_seed++, now);
    REQUIRE(quorum.size() == script.size());
    const auto& round = engine.process(pid).rounds.back();

    oracle::OracleRound& mirror = episode.rounds.back();
    std::vector<std::pair<AgentId, std::pair<Verdict, std::string>>> reveals;
    int position = 0;
    for (const auto& member : quorum) {
      char behaviour = script[std::size_t(position++)];
      Verdict verdict =
          behaviour == 'O' ? Verdict::OverturnTarget : Verdict::UpholdTarget;
      std::string salt = "salt-" + std::to_string(next_seed++);
      engine.commit_verdict(pid, member,
                            protocol::verdict_commitment(verdict, salt), now);
      if (behaviour != '-') reveals.push_back({member, {verdict, salt}});
      mirror.quorum.push_back({member, round.exposures.at(member), behaviour});
    }
    now += 1;
    for (const auto& [member, reveal] : reveals)
      engine.reveal_verdict(pid, member, reveal.first, reveal.second, now);

    if (reveals.size() == quorum.size()) {
      auto ruling = engine.issue_ruling(pid, now);
      if (ruling) {
        mirror.ruled = true;
        mirror.verdict = ruling->verdict == Verdict::OverturnTarget ? 'O' : 'U';
      }
    } else {
      Tick deadline = *engine.process(pid).state.reveal_deadline;
      now = std::max(now, deadline);
      engine.advance_time(pid, now);
      const auto& resolved = engine.process(pid).rounds.back();
      if (resolved.ruling) {
        mirror.ruled = true;
        mirror.verdict =
            resolved.ruling->verdict == Verdict::OverturnTarget ? 'O' : 'U';
      }
    }
    return quorum;
  }

  void expire_window() {
    Tick deadline = *engine.process(pid).state.window_deadline;
    now = std::max(now, deadline);
    engine.advance_time(pid, now);
  }

  // Settles and checks every agent's balance change and the burn total
  // against the oracle, then checks no escrow is left dangling.
  void settle_and_compare() {
    REQUIRE(engine.process(pid).state.phase == Phase::Finalized);
    oracle::OracleSettlement expected = oracle::settle_episode(episode);
    CHECK((engine.evaluate_chain(pid) == Outcome::ResultStands) ==
          expected.stands);
    Amount burned_before = engine.ledger().total_burned();
    engine.settle(pid, now);
    for (const auto& [agent, start] : initial) {
      CAPTURE(agent);
      long long want = expected.delta.count(agent) ? expected.delta[agent] : 0;
      CHECK(engine.ledger().free_balance(agent) - start == want);
    }
    CHECK(engine.ledger().total_burned() - burned_before == expected.burned);
    for (const auto& [key, amount] : engine.ledger().escrows())
      CHECK(key.process != pid);
    CHECK(engine.ledger().conservation_holds());
  }
};

}  // namespace

TEST_CASE("publish escrows the fee and guards preconditions") {
  Engine engine(default_options());
  engine.deposit("org", 50, 0);
  engine.deposit("sol", 100, 0);

  auto spec = task_spec("t0", 30, 10);
  engine.publish_intent(spec, 1);
  CHECK(engine.ledger().free_balance("org") == 20);
  CHECK(engine.process("t0").state.phase == Phase::IntentPublished);

  CHECK_THROWS_AS(engine.publish_intent(spec, 1), Error);

  auto expensive = task_spec("t1", 100, 10);
  try {
    engine.publish_intent(expensive, 1);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientBalance);
  }
  CHECK_FALSE(engine.exists("t1"));
  CHECK(engine.ledger().free_balance("org") == 20);

  auto zero_fee = task_spec("t2", 0, 10);
  engine.publish_intent(zero_fee, 1);
  CHECK(engine.ledger().free_balance("org") == 20);
}

TEST_CASE("task spec invariants are enforced") {
  Engine engine(default_options());
  engine.deposit("org", 100, 0);

  auto bad_bond = task_spec("t0", 0, 0);
  CHECK_THROWS_AS(engine.publish_intent(bad_bond, 0), Error);

  auto even_quorum = task_spec("t1", 0, 10, 2);
  CHECK_THROWS_AS(engine.publish_intent(even_quorum, 0), Error);

  auto bad_hash = task_spec("t2");
  bad_hash.content_hash = std::string(64, '0');
  CHECK_THROWS_AS(engine.publish_intent(bad_hash, 0), Error);

  auto good_hash = task_spec("t3");
  good_hash.content_hash = protocol::content_hash(good_hash.data_payload);
  engine.publish_intent(good_hash, 0);
  CHECK(engine.exists("t3"));
}

TEST_CASE("registration guards") {
  Engine engine(default_options());
  engine.deposit("org", 10, 0);
  engine.deposit("a", 100, 0);
  engine.deposit("b", 9, 0);
  engine.publish_intent(task_spec("t0", 0, 10), 1);

  engine.register_commitment("t0", "a", 10, 1);  // boundary: exactly required

  try {
    engine.register_commitment("t0", "b", 9, 1);
    FAIL("expected BondTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BondTooSmall);
  }
  try {
    engine.register_commitment("t0", "b", 10, 1);
    FAIL("expected InsufficientBalance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientBalance);
  }
  try {
    engine.register_commitment("t0", "a", 10, 1);
    FAIL("expected DuplicateCandidate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateCandidate);
  }

  // Bonds are not locked at registration.
  CHECK(engine.ledger().free_balance("a") == 100);

  engine.select_solver("t0", 7, 1);
  try {
    engine.register_commitment("t0", "b", 10, 1);
    FAIL("expected WrongPhase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongPhase);
  }
}

TEST_CASE("solver selection policies") {
  SUBCASE("first qualified wins and locks exactly its bond") {
    Engine engine(default_options());
    engine.deposit("org", 10, 0);
    for (auto name : {"a", "b", "c"}) engine.deposit(name, 100, 0);
    engine.publish_intent(task_spec("t0", 0, 10), 1);
    engine.register_commitment("t0", "a", 12, 1);
    engine.register_commitment("t0", "b", 10, 2);
    engine.register_commitment("t0", "c", 10, 3);
    CHECK(engine.select_solver("t0", 99, 4) == "a");
    CHECK(engine.ledger().free_balance("a") == 88);
    CHECK(engine.ledger().free_balance("b") == 100);
  }

  SUBCASE("empty pool") {
    Engine engine(default_options());
    engine.deposit("org", 10, 0);
    engine.publish_intent(task_spec("t0", 0, 10), 1);
    try {
      engine.select_solver("t0", 1, 1);
      FAIL("expected EmptyCandidatePool");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyCandidatePool);
    }
  }

  SUBCASE("uniform selection is uniform") {
    rng::Generator master(2024);
    std::map<AgentId, int> counts;
    const int trials = 40000;
    for (int i = 0; i < trials; ++i) {
      Engine engine(default_options());
      engine.deposit("org", 1, 0);
      auto spec = task_spec("t0", 0, 10, 3, 3);
      spec.constraints.solver_selection_policy =
          protocol::SelectionPolicy::UniformRandom;
      engine.publish_intent(spec, 0);
      for (auto name : {"a", "b", "c", "d"}) {
        engine.deposit(name, 10, 0);
        engine.register_commitment("t0", name, 10, 0);
      }
      counts[engine.select_solver("t0", master(), 0)] += 1;
    }
    CHECK(counts.size() == 4);
    double expected = trials / 4.0;
    double sigma = std::sqrt(trials * 0.25 * 0.75);
    for (const auto& [agent, count] : counts) {
      CHECK(double(count) > expected - 3 * sigma);
      CHECK(double(count) < expected + 3 * sigma);
    }
  }
}

TEST_CASE("submission guards and window discipline") {
  Rig rig;
  rig.engine.publish_intent(rig.spec, rig.now);
  rig.engine.register_commitment("t0", "sol", 10, rig.now);
  rig.engine.select_solver("t0", 1, rig.now);

  try {
    rig.engine.submit_result("t0", "cha", "o", "e", rig.now);
    FAIL("expected NotTheSolver");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTheSolver);
  }

  rig.engine.submit_result("t0", "sol", "o", "e", 5);
  const auto& p = rig.engine.process("t0");
  CHECK(p.state.phase == Phase::ChallengeWindowOpen);
  CHECK(*p.state.window_deadline == 15);
  CHECK(p.result->commitment == protocol::result_commitment("o", "e"));

  try {
    rig.engine.submit_result("t0", "sol", "o", "e", 6);
    FAIL("expected WrongPhase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongPhase);
  }

  // Still open one tick before the deadline; advance_time does nothing.
  CHECK_FALSE(rig.engine.advance_time("t0", 14));
  CHECK(rig.engine.process("t0").state.phase == Phase::ChallengeWindowOpen);

  // At the deadline the challenge is refused and expiry fires.
  try {
    rig.engine.open_challenge("t0", "cha", "a", 5, 15);
    FAIL("expected WindowClosed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowClosed);
  }
  CHECK(rig.engine.advance_time("t0", 15));
  CHECK(rig.engine.process("t0").state.phase == Phase::Finalized);
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
}

TEST_CASE("a challenge one tick before the deadline is accepted") {
  Rig rig;
  rig.start();  // submit at tick 2, deadline 12
  rig.now = *rig.engine.process("t0").state.window_deadline - 1;
  rig.challenge("cha");
  CHECK(rig.engine.process("t0").state.phase == Phase::UnderVerification);
}

TEST_CASE("selection failure leaves the process registrable") {
  Engine engine(default_options());
  engine.deposit("org", 10, 0);
  engine.deposit("a", 10, 0);
  engine.publish_intent(task_spec("t0", 0, 10), 0);
  engine.register_commitment("t0", "a", 10, 0);
  // The candidate's balance evaporates between registration and selection.
  engine.ledger().transfer("a", "org", 10, 1);
  try {
    engine.select_solver("t0", 1, 1);
    FAIL("expected InsufficientBalance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientBalance);
  }
  CHECK(engine.process("t0").state.phase == Phase::IntentPublished);
  CHECK_FALSE(engine.process("t0").solver.has_value());
  // Re-funded, selection works.
  engine.deposit("a", 10, 2);
  CHECK(engine.select_solver("t0", 1, 2) == "a");
}

TEST_CASE("an exact-size pool is drawn exhaustively") {
  Rig rig(0.5, 3, 3, 3);
  rig.start();
  rig.challenge("cha");
  auto quorum = rig.engine.select_verifiers("t0", 9, rig.now);
  std::sort(quorum.begin(), quorum.end());
  CHECK(quorum == std::vector<AgentId>{"v0", "v1", "v2"});
}

TEST_CASE("commit deadline lapses into a partial quorum ruling") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  auto quorum = rig.engine.select_verifiers("t0", 3, rig.now);
  Tick commit_deadline = *rig.engine.process("t0").state.commit_deadline;

  rig.engine.commit_verdict(
      "t0", quorum[0], protocol::verdict_commitment(Verdict::OverturnTarget, "x"),
      rig.now);
  rig.engine.commit_verdict(
      "t0", quorum[1], protocol::verdict_commitment(Verdict::OverturnTarget, "y"),
      rig.now);

  // The third member misses the commit window entirely.
  try {
    rig.engine.commit_verdict(
        "t0", quorum[2],
        protocol::verdict_commitment(Verdict::UpholdTarget, "z"),
        commit_deadline);
    FAIL("expected DeadlinePassed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DeadlinePassed);
  }

  // Reveals open once nobody else can commit.
  rig.now = commit_deadline;
  rig.engine.reveal_verdict("t0", quorum[0], Verdict::OverturnTarget, "x",
                            rig.now);
  rig.engine.reveal_verdict("t0", quorum[1], Verdict::OverturnTarget, "y",
                            rig.now);
  rig.now = *rig.engine.process("t0").state.reveal_deadline;
  CHECK(rig.engine.advance_time("t0", rig.now));
  const auto& round = rig.engine.process("t0").rounds.back();
  REQUIRE(round.ruling.has_value());
  CHECK(round.ruling->verdict == Verdict::OverturnTarget);

  // Mirror for the settlement oracle: two overturns, one silent member.
  auto& mirror = rig.episode.rounds.back();
  mirror.ruled = true;
  mirror.verdict = 'O';
  for (const auto& member : round.quorum) {
    char behaviour = round.reveals.count(member) ? 'O' : '-';
    mirror.quorum.push_back({member, round.exposures.at(member), behaviour});
  }
  rig.expire_window();
  rig.settle_and_compare();
}

TEST_CASE("quorum members cannot dispute their own ruling") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  auto quorum = rig.adjudicate("OOO");
  rig.fund(quorum[0], 100);  // plenty for the bond either way
  try {
    rig.engine.open_challenge("t0", quorum[0], "a",
                              rig.engine.required_challenger_bond("t0"),
                              rig.now);
    FAIL("expected SelfChallenge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelfChallenge);
  }
}

TEST_CASE("challenges are phase-guarded before submission") {
  Rig rig;
  rig.engine.publish_intent(rig.spec, rig.now);
  try {
    rig.engine.open_challenge("t0", "cha", "a", 5, rig.now);
    FAIL("expected WrongPhase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongPhase);
  }
}

TEST_CASE("challenge guards") {
  Rig rig;
  rig.start();

  try {
    rig.engine.open_challenge("t0", "sol", "a",
                              rig.engine.required_challenger_bond("t0"),
                              rig.now);
    FAIL("expected SelfChallenge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelfChallenge);
  }
  try {
    rig.engine.open_challenge("t0", "cha", "a", 4, rig.now);
    FAIL("expected BondTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BondTooSmall);
  }

  rig.challenge("cha");
  CHECK(rig.engine.process("t0").state.phase == Phase::UnderVerification);
  CHECK(rig.engine.ledger().free_balance("cha") == 995);
}

TEST_CASE("commit reveal discipline") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  auto quorum = rig.engine.select_verifiers("t0", 55, rig.now);
  REQUIRE(quorum.size() == 3);

  std::string salt = "s1";
  auto commitment = protocol::verdict_commitment(Verdict::OverturnTarget, salt);
  rig.engine.commit_verdict("t0", quorum[0], commitment, rig.now);

  try {
    rig.engine.commit_verdict("t0", quorum[0], commitment, rig.now);
    FAIL("expected DuplicateCommit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateCommit);
  }
  try {
    rig.engine.commit_verdict("t0", "cha", commitment, rig.now);
    FAIL("expected NotInQuorum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInQuorum);
  }
  try {
    rig.engine.reveal_verdict("t0", quorum[1], Verdict::UpholdTarget, "x",
                              rig.now);
    FAIL("expected NoCommitment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoCommitment);
  }
  // Reveals stay sealed while others may still commit.
  try {
    rig.engine.reveal_verdict("t0", quorum[0], Verdict::OverturnTarget, salt,
                              rig.now);
    FAIL("expected NotReady");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReady);
  }

  rig.engine.commit_verdict(
      "t0", quorum[1],
      protocol::verdict_commitment(Verdict::OverturnTarget, "s2"), rig.now);
  rig.engine.commit_verdict(
      "t0", quorum[2],
      protocol::verdict_commitment(Verdict::UpholdTarget, "s3"), rig.now);

  // Binding: no mismatched (verdict, salt) pair is ever accepted.
  rng::Generator gen(5);
  for (int i = 0; i < 50; ++i) {
    std::string wrong_salt = rng::random_salt(gen);
    if (wrong_salt == salt) continue;
    try {
      rig.engine.reveal_verdict("t0", quorum[0], Verdict::OverturnTarget,
                                wrong_salt, rig.now);
      FAIL("expected CommitMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CommitMismatch);
    }
  }
  try {
    rig.engine.reveal_verdict("t0", quorum[0], Verdict::UpholdTarget, salt,
                              rig.now);
    FAIL("expected CommitMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CommitMismatch);
  }

  rig.engine.reveal_verdict("t0", quorum[0], Verdict::OverturnTarget, salt,
                            rig.now);
  rig.engine.reveal_verdict("t0", quorum[1], Verdict::OverturnTarget, "s2",
                            rig.now);

  // Not everyone revealed and the deadline has not passed.
  try {
    rig.engine.issue_ruling("t0", rig.now);
    FAIL("expected NotReady");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReady);
  }

  rig.engine.reveal_verdict("t0", quorum[2], Verdict::UpholdTarget, "s3",
                            rig.now);
  auto ruling = rig.engine.issue_ruling("t0", rig.now);
  REQUIRE(ruling.has_value());
  CHECK(ruling->verdict == Verdict::OverturnTarget);  // two against one
  CHECK(rig.engine.process("t0").state.phase == Phase::RulingWindowOpen);
  CHECK(rig.engine.process("t0").state.current_depth == 1);
}

TEST_CASE("reveal deadline turns silence into a partial ruling") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("UU-");
  const auto& round = rig.engine.process("t0").rounds.back();
  REQUIRE(round.ruling.has_value());
  CHECK(round.ruling->verdict == Verdict::UpholdTarget);
  CHECK(round.ruling->reveals.size() == 2);
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
  rig.settle_and_compare();
}

TEST_CASE("zero reveals void the round and re-open the window") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("---");
  const auto& p = rig.engine.process("t0");
  CHECK(p.rounds.back().voided);
  CHECK(p.state.phase == Phase::ChallengeWindowOpen);  // re-opened
  CHECK(p.state.current_depth == 0);
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
  rig.settle_and_compare();
}

TEST_CASE("a tied partial reveal also voids") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("UO-");
  CHECK(rig.engine.process("t0").rounds.back().voided);
  rig.expire_window();
  rig.settle_and_compare();
}

TEST_CASE("a voided round can be re-challenged at the same depth") {
  Rig rig;
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("---");
  rig.challenge("chb");  // same depth, fresh round
  CHECK(rig.engine.process("t0").rounds.back().dispute.depth == 0);
  rig.adjudicate("OOO");
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultOverturned);
  rig.settle_and_compare();
}

TEST_CASE("unchallenged honest result: refund plus fee, no burns") {
  Rig rig;
  rig.start();
  rig.expire_window();
  oracle::OracleSettlement expected = oracle::settle_episode(rig.episode);
  CHECK(expected.burned == 0);
  rig.settle_and_compare();
  CHECK(rig.engine.ledger().free_balance("sol") == 1003);  // +fee
  CHECK(rig.engine.ledger().free_balance("org") == 997);
}

TEST_CASE("upheld challenge slashes the solver and pays the challenger") {
  Rig rig(0.5);
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("OOO");
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultOverturned);
  rig.settle_and_compare();
  // beta * bond to the challenger, the rest burned, fee back to originator.
  CHECK(rig.engine.ledger().free_balance("cha") == 1005);
  CHECK(rig.engine.ledger().free_balance("sol") == 990);
  CHECK(rig.engine.ledger().free_balance("org") == 1000);
}

TEST_CASE("minority dissenters are slashed toward the prevailing side") {
  Rig rig(0.5);
  rig.start();
  rig.challenge("cha");
  auto quorum = rig.adjudicate("OOU");
  rig.expire_window();
  rig.settle_and_compare();
  // The dissenting third verifier lost its exposure (floor 1 + 10% of 100).
  CHECK(rig.engine.ledger().free_balance(quorum[2]) == 1000 - 11);
}

TEST_CASE("overturning a ruling restores the result and cascades slashes") {
  Rig rig(0.5);
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("OOO");  // wrong ruling against the result
  rig.challenge("chb");   // dispute the ruling
  rig.adjudicate("OO-");  // overturn it, one verifier stays silent
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
  rig.settle_and_compare();
  // Depth-0 challenger loses its bond of 5; the burn share rounds half away
  // from zero, so the solver nets fee 3 plus reward 2.
  CHECK(rig.engine.ledger().free_balance("cha") == 995);
  CHECK(rig.engine.ledger().free_balance("sol") == 1000 + 3 + 2);
}

TEST_CASE("double overturn chain matches the oracle") {
  Rig rig(0.5);
  rig.start();
  rig.challenge("cha");
  rig.adjudicate("OOO");
  rig.challenge("chb");
  rig.adjudicate("OOO");
  rig.expire_window();
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
  rig.settle_and_compare();
}

TEST_CASE("three-level chains evaluate like the parity oracle") {
  for (int mask = 0; mask < 8; ++mask) {
    Rig rig(0.5, 3, 4);
    rig.start();
    std::vector<char> verdicts;
    for (int level = 0; level < 3; ++level) {
      rig.challenge(level % 2 == 0 ? "cha" : "chb");
      bool overturn = mask & (1 << level);
      rig.adjudicate(overturn ? "OOO" : "UUU");
      verdicts.push_back(overturn ? 'O' : 'U');
      if (!overturn) break;  // upheld: leaving the chain here is enough
    }
    rig.expire_window();
    CAPTURE(mask);
    CHECK((rig.engine.evaluate_chain("t0") == Outcome::ResultStands) ==
          oracle::result_stands(verdicts));
    rig.settle_and_compare();
  }
}

TEST_CASE("verifier eligibility excludes participants and prior quorums") {
  Rig rig(0.5, 3, 3, 5);  // only five verifiers registered
  rig.start();
  rig.challenge("cha");
  auto pool = rig.engine.eligible_verifiers("t0");
  CHECK(pool.size() == 5);
  auto quorum = rig.adjudicate("OOO");

  rig.challenge("chb");
  auto next_pool = rig.engine.eligible_verifiers("t0");
  CHECK(next_pool.size() == 2);
  for (const auto& member : quorum)
    CHECK(std::find(next_pool.begin(), next_pool.end(), member) ==
          next_pool.end());

  // Two eligible verifiers cannot seat a quorum of three.
  try {
    rig.engine.select_verifiers("t0", 1, rig.now);
    FAIL("expected InsufficientVerifiers");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientVerifiers);
  }
}

TEST_CASE("quorum draws are uniform over subsets") {
  std::map<std::vector<AgentId>, int> counts;
  rng::Generator master(7);
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) {
    Engine engine(default_options());
    engine.deposit("sol", 10, 0);
    engine.deposit("cha", 5, 0);
    for (int v = 0; v < 5; ++v) {
      AgentId id = "v" + std::to_string(v);
      engine.deposit(id, 20, 0);
      engine.register_verifier(id, 100);
    }
    engine.publish_intent(task_spec("t0", 0, 10, 3, 3), 0);
    engine.register_commitment("t0", "sol", 10, 0);
    engine.select_solver("t0", 1, 0);
    engine.submit_result("t0", "sol", "o", "e", 1);
    engine.open_challenge("t0", "cha", "a", 5, 1);
    auto quorum = engine.select_verifiers("t0", master(), 1);
    std::sort(quorum.begin(), quorum.end());
    counts[quorum] += 1;
  }
  CHECK(counts.size() == 10);  // C(5,3)
  double expected = trials / 10.0;
  double sigma = std::sqrt(trials * 0.1 * 0.9);
  for (const auto& [subset, count] : counts) {
    CHECK(double(count) > expected - 3 * sigma);
    CHECK(double(count) < expected + 3 * sigma);
  }
}

TEST_CASE("depth exhaustion escalates or finalizes the standing claim") {
  SUBCASE("with a target: frozen") {
    Rig rig(0.5, 3, 1, 12, std::string("layer-2"));
    rig.start();
    rig.challenge("cha");
    rig.adjudicate("OOO");
    try {
      rig.engine.open_challenge("t0", "chb", "a",
                                rig.engine.required_challenger_bond("t0"),
                                rig.now);
      FAIL("expected DepthExhausted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DepthExhausted);
    }
    auto record = rig.engine.escalate("t0", rig.now);
    CHECK(record.target == "layer-2");
    CHECK(record.cause == "depth_exhausted");
    CHECK(rig.engine.process("t0").state.phase == Phase::Escalated);
    // Escrows frozen: settlement refused, balances untouched.
    CHECK_THROWS_AS(rig.engine.settle("t0", rig.now), Error);
    CHECK(rig.engine.ledger().escrowed_total("sol") == 10);
    CHECK(rig.engine.ledger().conservation_holds());
  }

  SUBCASE("without a target: deepest claim finalizes") {
    Rig rig(0.5, 3, 1, 12);
    rig.start();
    rig.challenge("cha");
    rig.adjudicate("OOO");
    rig.engine.escalate("t0", rig.now);
    CHECK(rig.engine.process("t0").state.phase == Phase::Finalized);
    CHECK(*rig.engine.process("t0").state.outcome ==
          Outcome::ResultOverturned);
    rig.settle_and_compare();
  }

  SUBCASE("not escalatable while depth remains") {
    Rig rig;
    rig.start();
    try {
      rig.engine.escalate("t0", rig.now);
      FAIL("expected NotEscalatable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotEscalatable);
    }
  }
}

TEST_CASE("verifier scarcity escalates; unresolved challengers are refunded") {
  Rig rig(0.5, 3, 3, 2);  // pool can never seat a quorum
  rig.start();
  rig.challenge("cha");
  try {
    rig.engine.select_verifiers("t0", 1, rig.now);
    FAIL("expected InsufficientVerifiers");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientVerifiers);
  }
  rig.engine.escalate("t0", rig.now);
  // No escalation target: the standing result finalizes and the abandoned
  // dispute's bond comes back.
  CHECK(rig.engine.process("t0").state.phase == Phase::Finalized);
  CHECK(*rig.engine.process("t0").state.outcome == Outcome::ResultStands);
  rig.episode.rounds.back().unresolved = true;
  rig.settle_and_compare();
  CHECK(rig.engine.ledger().free_balance("cha") == 1000);
}

TEST_CASE("terminal phases reject mutation and keep escrows still") {
  Rig rig;
  rig.start();
  rig.expire_window();
  REQUIRE(rig.engine.process("t0").state.phase == Phase::Finalized);
  auto entries_before = rig.engine.ledger().entries().size();

  for (int attempt : {0, 1, 2, 3, 4}) {
    try {
      switch (attempt) {
        case 0: rig.engine.register_commitment("t0", "cha", 10, rig.now); break;
        case 1: rig.engine.select_solver("t0", 1, rig.now); break;
        case 2: rig.engine.submit_result("t0", "sol", "o", "e", rig.now); break;
        case 3: rig.engine.open_challenge("t0", "cha", "a", 5, rig.now); break;
        case 4: rig.engine.commit_verdict("t0", "v0", "c", rig.now); break;
      }
      FAIL("expected WrongPhase");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WrongPhase);
    }
  }
  CHECK(rig.engine.ledger().entries().size() == entries_before);
  CHECK_FALSE(rig.engine.advance_time("t0", rig.now + 1000));

  rig.engine.settle("t0", rig.now);
  try {
    rig.engine.settle("t0", rig.now);
    FAIL("expected AlreadySettled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadySettled);
  }
}

TEST_CASE("identical inputs produce byte-identical logs") {
  auto drive = [] {
    Rig rig;
    rig.start();
    rig.challenge("cha");
    rig.adjudicate("OOU");
    rig.expire_window();
    rig.engine.settle("t0", rig.now);
    return rig.engine.event_log().dump();
  };
  CHECK(drive() == drive());
}
