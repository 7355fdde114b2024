#include "verigame/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "verigame/hash.hpp"
#include "verigame/rng.hpp"

namespace verigame::sim {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct AgentState {
  agents::AgentProfile profile;
  double honest_error_rate = 0.0;
  Amount budget_left = 0;
};

// Drives one scenario: tasks run sequentially on a single logical clock, and
// every accepted operation lands in the engine's event log.
class Driver {
 public:
  explicit Driver(const ScenarioConfig& config)
      : cfg_(config),
        engine_({config.sizing, config.beta}),
        rng_(config.seed) {}

  RunResult run() {
    setup();
    metrics_.tasks_requested = cfg_.task_count;
    for (int index = 0; index < cfg_.task_count; ++index) {
      if (now_ >= cfg_.horizon) break;
      run_task(index);
    }
    finish_metrics();

    RunResult result;
    result.metrics = metrics_;
    result.log_lines = engine_.event_log().lines();
    result.final_balances = engine_.ledger().balances();
    result.final_burned = engine_.ledger().total_burned();
    return result;
  }

 private:
  void setup() {
    for (const auto& spec : cfg_.agents) {
      for (int j = 0; j < spec.count; ++j) {
        AgentState state;
        state.profile = spec.profile;
        state.profile.id = spec.profile.id + "_" + std::to_string(j);
        state.honest_error_rate = spec.honest_error_rate;
        state.budget_left = spec.profile.subsidy_budget;
        const AgentId& id = state.profile.id;
        if (spec.initial_balance > 0)
          engine_.deposit(id, spec.initial_balance, 0);
        if (state.profile.can_verify)
          engine_.register_verifier(id, state.profile.stake);
        if (state.profile.can_solve) solver_ids_.push_back(id);
        if (state.profile.can_challenge) challenger_ids_.push_back(id);
        index_[id] = agents_.size();
        agents_.push_back(std::move(state));
      }
    }
    Amount fee_pool = cfg_.task_fee * Amount(cfg_.task_count);
    if (fee_pool > 0) engine_.deposit(originator_, fee_pool, 0);
    check_conservation();
  }

  AgentState& agent(const AgentId& id) { return agents_[index_.at(id)]; }

  void check_conservation() {
    if (!engine_.ledger().conservation_holds())
      throw std::logic_error("ledger conservation violated");
  }

  void run_task(int index) {
    Amount bond = cfg_.effective_solver_bond();

    std::vector<AgentId> candidates;
    for (const auto& id : solver_ids_)
      if (engine_.ledger().free_balance(id) >= bond) candidates.push_back(id);
    if (candidates.empty()) {
      now_ += 1;
      return;
    }

    ProcessId pid = "t" + std::to_string(index);
    protocol::TaskSpec spec;
    spec.task_id = pid;
    spec.constraints.challenge_window = cfg_.challenge_window;
    spec.constraints.ruling_challenge_window = cfg_.ruling_window;
    spec.constraints.commit_window = cfg_.commit_window;
    spec.constraints.reveal_window = cfg_.reveal_window;
    spec.constraints.quorum_size = cfg_.quorum_size;
    spec.constraints.max_recursion_depth = cfg_.max_depth;
    spec.constraints.solver_selection_policy = cfg_.selection;
    spec.constraints.escalation_target = cfg_.escalation_target;
    spec.intent = "task " + std::to_string(index);
    spec.data_payload = "payload:" + pid;
    spec.originator = originator_;
    spec.task_fee = cfg_.task_fee;
    spec.required_solver_bond = bond;

    engine_.publish_intent(spec, now_);
    metrics_.tasks_started += 1;

    std::map<AgentId, Amount> locked;
    std::map<AgentId, double> detection_paid;  // own-pocket detection costs
    std::map<AgentId, char> role;
    if (cfg_.task_fee > 0) {
      locked[originator_] += cfg_.task_fee;
      role[originator_] = 'O';
    }

    rng::shuffle(rng_, candidates);
    for (const auto& id : candidates)
      engine_.register_commitment(pid, id, bond, now_);
    AgentId solver = engine_.select_solver(pid, rng_(), now_);
    locked[solver] += bond;
    role[solver] = 'S';

    AgentState& solver_state = agent(solver);
    agents::SolverAction action =
        agents::solver_decide(solver_state.profile, bond, cfg_.task_fee);
    bool cheat = action == agents::SolverAction::SubmitIncorrect;
    bool incorrect = cheat;
    if (!incorrect &&
        solver_state.profile.solver == agents::SolverStrategy::AlwaysHonest &&
        solver_state.honest_error_rate > 0.0 &&
        rng::unit(rng_) < solver_state.honest_error_rate)
      incorrect = true;

    now_ += 1;
    engine_.submit_result(pid, solver,
                          incorrect ? "output:bad" : "output:good",
                          "evidence:" + pid, now_);
    check_conservation();

    // Whether the claim challengeable at each depth deserves to fall: depth 0
    // is the result, depth t+1 the ruling issued at depth t.
    std::vector<bool> deserves_overturn{incorrect};
    std::set<AgentId> barred = {solver};  // driver keeps task roles disjoint
    int ruled_rounds = 0;
    int won_refund_rounds = 0;
    bool escalated = false;

    for (;;) {
      const protocol::Process& proc = engine_.process(pid);
      protocol::Phase phase = proc.state.phase;

      if (phase == protocol::Phase::ChallengeWindowOpen ||
          phase == protocol::Phase::RulingWindowOpen) {
        int depth = proc.state.current_depth;
        bool depth_available = depth + 1 <= cfg_.max_depth;
        bool target_wrong = deserves_overturn[std::size_t(depth)];

        Amount reward_basis = bond;
        if (depth > 0) {
          const protocol::DisputeRound* last_ruled = nullptr;
          for (const auto& round : proc.rounds)
            if (round.ruling) last_ruled = &round;
          reward_basis = 0;
          for (const auto& [member, reveal] : last_ruled->ruling->reveals)
            if (reveal.first == last_ruled->ruling->verdict)
              reward_basis += last_ruled->ruling->verifier_exposure.at(member);
        }
        Amount challenger_bond = engine_.required_challenger_bond(pid);

        bool challenged = false;
        bool want_escalate = false;
        std::vector<AgentId> order = challenger_ids_;
        rng::shuffle(rng_, order);
        for (const auto& id : order) {
          if (barred.count(id)) continue;
          AgentState& state = agent(id);
          if (depth == 0 && cfg_.challenger_visibility < 1.0 &&
              rng::unit(rng_) >= cfg_.challenger_visibility)
            continue;
          Amount cost = std::llround(double(state.profile.detection_cost) *
                                     std::pow(cfg_.cost_growth, double(depth)));
          agents::AgentProfile view = state.profile;
          view.subsidy_budget = state.budget_left;
          if (agents::challenger_decide(view, reward_basis, challenger_bond,
                                        cost, cfg_.beta) !=
              agents::ChallengerAction::Challenge)
            continue;

          // The decided challenger pays to verify; only a real error yields
          // something to present.
          metrics_.investigations += 1;
          if (state.profile.challenger ==
              agents::ChallengerStrategy::Subsidized) {
            state.budget_left -= cost;
            metrics_.subsidy_spent += double(cost);
          } else {
            detection_paid[id] += double(cost);
          }
          if (!target_wrong) continue;
          if (engine_.ledger().free_balance(id) < challenger_bond) continue;
          if (!depth_available) {
            want_escalate = true;
            break;
          }
          engine_.open_challenge(pid, id, "counterexample:" + pid,
                                 challenger_bond, now_);
          locked[id] += challenger_bond;
          role.emplace(id, 'C');
          metrics_.challenges_issued += 1;
          challenged = true;
          break;
        }
        check_conservation();

        if (want_escalate) {
          engine_.escalate(pid, now_);
          continue;
        }
        if (!challenged) {
          Tick deadline = *proc.state.window_deadline;
          now_ = std::max(now_, deadline);
          engine_.advance_time(pid, now_);
          continue;
        }
        continue;
      }

      if (phase == protocol::Phase::UnderVerification) {
        std::vector<AgentId> quorum;
        try {
          quorum = engine_.select_verifiers(pid, rng_(), now_);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InsufficientVerifiers) throw;
          engine_.escalate(pid, now_);
          check_conservation();
          continue;
        }
        check_conservation();

        const protocol::DisputeRound& round = engine_.process(pid).rounds.back();
        int depth = round.dispute.depth;
        bool target_wrong = deserves_overturn[std::size_t(depth)];
        protocol::Verdict truth = target_wrong
                                      ? protocol::Verdict::OverturnTarget
                                      : protocol::Verdict::UpholdTarget;
        Amount next_cost =
            std::llround(double(cfg_.falsification_cost) *
                         std::pow(cfg_.cost_growth, double(depth + 1)));

        struct Planned {
          protocol::Verdict committed;
          std::string salt;
          bool reveal;
        };
        std::map<AgentId, Planned> planned;
        for (const auto& member : quorum) {
          AgentState& state = agent(member);
          Amount exposure = round.exposures.at(member);
          auto decision = agents::verifier_decide(
              state.profile, truth, exposure, next_cost,
              state.profile.subjective_error_prior, rng::unit(rng_));
          Planned plan;
          plan.salt = rng::random_salt(rng_);
          plan.reveal = decision.has_value();
          plan.committed = decision.value_or(truth);
          engine_.commit_verdict(
              pid, member,
              protocol::verdict_commitment(plan.committed, plan.salt), now_);
          planned[member] = plan;
          locked[member] += exposure;
          role.emplace(member, 'V');
          barred.insert(member);
        }
        now_ += 1;
        std::size_t reveals = 0;
        for (const auto& member : quorum) {
          const Planned& plan = planned.at(member);
          if (!plan.reveal) continue;
          engine_.reveal_verdict(pid, member, plan.committed, plan.salt, now_);
          ++reveals;
        }
        if (reveals == quorum.size()) {
          engine_.issue_ruling(pid, now_);
        } else {
          Tick deadline = *engine_.process(pid).state.reveal_deadline;
          now_ = std::max(now_, deadline);
          engine_.advance_time(pid, now_);
        }
        check_conservation();

        const protocol::DisputeRound& resolved =
            engine_.process(pid).rounds.back();
        if (resolved.ruling) {
          ruled_rounds += 1;
          bool ruling_wrong = resolved.ruling->verdict != truth;
          deserves_overturn.push_back(ruling_wrong);
        }
        metrics_.max_recursion_reached =
            std::max(metrics_.max_recursion_reached, depth + 1);
        continue;
      }

      if (phase == protocol::Phase::Finalized) break;
      if (phase == protocol::Phase::Escalated) {
        escalated = true;
        break;
      }
    }

    std::map<AgentId, Amount> credits;
    if (!escalated) {
      std::vector<ledger::Entry> entries = engine_.settle(pid, now_);
      check_conservation();
      for (const auto& entry : entries) {
        if (entry.kind == ledger::EntryKind::Release)
          credits[entry.agent] += entry.amount;
        else if (entry.kind == ledger::EntryKind::Transfer)
          credits[entry.to] += entry.amount;
        if (entry.kind == ledger::EntryKind::Release &&
            entry.key->purpose == ledger::Purpose::ChallengerBond) {
          // Refunded bonds on adjudicated rounds mark won disputes.
          const auto& rounds = engine_.process(pid).rounds;
          if (rounds[std::size_t(entry.key->round)].ruling)
            won_refund_rounds += 1;
        }
      }
    } else {
      metrics_.escalations += 1;
    }

    const protocol::Process& done = engine_.process(pid);
    if (done.state.phase == protocol::Phase::Finalized) {
      metrics_.tasks_finalized += 1;
      bool stands = *done.state.outcome == protocol::Outcome::ResultStands;
      if (stands)
        (incorrect ? metrics_.stood_incorrect : metrics_.stood_correct) += 1;
      else
        (incorrect ? metrics_.overturned_incorrect
                   : metrics_.overturned_correct) += 1;

      if (cheat) {
        metrics_.cheat_episodes += 1;
        solver_loss_sum_ += stands ? 0.0 : double(bond);
      }
      metrics_.challenges_won += won_refund_rounds;
    } else if (cheat) {
      metrics_.cheat_episodes += 1;  // frozen by escalation: no loss realized
    }

    for (const auto& [id, r] : role) {
      double delta = double(credits[id]) - double(locked[id]);
      switch (r) {
        case 'O': metrics_.payoff_originator += delta; break;
        case 'S': metrics_.payoff_solvers += delta; break;
        case 'C':
          metrics_.payoff_challengers += delta - detection_paid[id];
          challenger_profit_sum_ += delta - detection_paid[id];
          break;
        case 'V': metrics_.payoff_verifiers += delta; break;
        default: break;
      }
    }
    // Fruitless investigations by agents who never opened a dispute.
    for (const auto& [id, spent] : detection_paid)
      if (!role.count(id) || role.at(id) != 'C')
        metrics_.payoff_challengers -= spent;
  }

  void finish_metrics() {
    if (metrics_.tasks_finalized > 0) {
      metrics_.incorrect_finalized_rate =
          double(metrics_.stood_incorrect) / double(metrics_.tasks_finalized);
      int correct_total = metrics_.stood_correct + metrics_.overturned_correct;
      metrics_.correct_overturned_rate =
          correct_total > 0
              ? double(metrics_.overturned_correct) / double(correct_total)
              : 0.0;
    }
    if (metrics_.cheat_episodes > 0)
      metrics_.mean_solver_loss_on_cheat =
          solver_loss_sum_ / double(metrics_.cheat_episodes);
    if (metrics_.challenges_issued > 0)
      metrics_.mean_challenger_profit =
          challenger_profit_sum_ / double(metrics_.challenges_issued);
    metrics_.total_burned = engine_.ledger().total_burned();
    metrics_.total_deposited = engine_.ledger().total_deposited();
    metrics_.log_records = engine_.event_log().records().size();
    metrics_.balance_digest = balances_digest(engine_.ledger().balances(),
                                              engine_.ledger().total_burned(),
                                              engine_.ledger().total_deposited());
  }

  const ScenarioConfig& cfg_;
  protocol::Engine engine_;
  rng::Generator rng_;
  std::vector<AgentState> agents_;
  std::map<AgentId, std::size_t> index_;
  std::vector<AgentId> solver_ids_;
  std::vector<AgentId> challenger_ids_;
  AgentId originator_ = "origin";
  RunMetrics metrics_;
  double solver_loss_sum_ = 0.0;
  double challenger_profit_sum_ = 0.0;
  Tick now_ = 1;
};

}  // namespace

RunResult run(const ScenarioConfig& config) {
  config.validate();
  Driver driver(config);
  return driver.run();
}

MonteCarloResult monte_carlo_ev(agents::Role role, const MonteCarloParams& p,
                                int trials, std::uint64_t seed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (!(p.error_probability >= 0.0 && p.error_probability <= 1.0))
    fail(ErrorCode::InvalidArgument, "error probability outside [0, 1]");
  if (role == agents::Role::Verifier)
    fail(ErrorCode::InvalidArgument, "verifier episodes are not modelled");

  rng::Generator gen(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    bool surfaced = rng::unit(gen) < p.error_probability;
    double payoff;
    if (role == agents::Role::Challenger) {
      // Stake first, verify at cost F: a wrong result pays the slash share,
      // a sound one forfeits the challenger bond.
      payoff = surfaced
                   ? p.beta * double(p.solver_bond) - double(p.falsification_cost)
                   : -double(p.falsification_cost) - double(p.challenger_bond);
    } else {
      payoff = surfaced ? -double(p.solver_bond) : 0.0;
    }
    sum += payoff;
    sum_sq += payoff * payoff;
  }
  double n = double(trials);
  double mean = sum / n;
  double variance =
      trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(variance / n), trials};
}

std::vector<SweepAxis> sweep_axes_from_config(const FlatConfig& flat) {
  std::vector<SweepAxis> axes;
  for (int index : flat.indexed_groups("sweep")) {
    std::string prefix = "sweep." + std::to_string(index) + ".";
    SweepAxis axis;
    axis.key = flat.get_string(prefix + "key", "");
    if (axis.key.empty())
      fail(ErrorCode::InvalidConfig, prefix + "key: missing");
    axis.values = flat.get_list(prefix + "values");
    if (axis.values.empty())
      fail(ErrorCode::InvalidConfig, prefix + "values: empty axis");
    axes.push_back(std::move(axis));
  }
  return axes;
}

namespace {

agents::DeviationParams deviation_inputs(const ScenarioConfig& cfg) {
  agents::DeviationParams params;
  params.solver_bond = cfg.effective_solver_bond();
  params.challenger_bond = 0;
  params.detection_cost = cfg.falsification_cost;
  params.error_prior = cfg.reference_prior;
  params.beta = cfg.beta;
  params.task_fee = cfg.reference_fee;
  params.cheat_gain = cfg.reference_gain;
  return params;
}

}  // namespace

std::vector<SweepRow> sweep(const FlatConfig& base,
                            const std::vector<SweepAxis>& axes) {
  std::uint64_t base_seed = base.get_uint("seed", 42);
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();

  std::vector<SweepRow> rows;
  rows.reserve(total);
  for (std::size_t cell = 0; cell < total; ++cell) {
    FlatConfig flat = base;
    SweepRow row;
    row.cell = cell;
    std::size_t remainder = cell;
    for (const auto& axis : axes) {
      const std::string& value = axis.values[remainder % axis.values.size()];
      remainder /= axis.values.size();
      flat.set(axis.key, value);
      row.params[axis.key] = value;
    }
    row.seed = hash::derive_seed(base_seed, "sweep-cell", cell);
    flat.set("seed", std::to_string(row.seed));

    ScenarioConfig config = ScenarioConfig::from_flat(flat);
    RunResult result = run(config);
    row.metrics = result.metrics;
    row.solver_deviation =
        agents::deviation_test(agents::Role::Solver, deviation_inputs(config));
    rows.push_back(std::move(row));
  }
  return rows;
}

ReplayState replay(const std::vector<std::string>& lines) {
  std::vector<log::Record> records = log::parse_and_verify(lines);
  ReplayState state;
  ledger::Ledger fresh;
  for (const auto& record : records) {
    if (record.op == "ledger") {
      ledger::Entry entry = log::entry_from_json(record.detail);
      entry.tick = record.tick;
      fresh.apply_entry(entry);
    }
    if (!record.process.empty() && record.phase != "-")
      state.final_phases[record.process] = record.phase;
  }
  state.balances = fresh.balances();
  state.burned = fresh.total_burned();
  state.deposited = fresh.total_deposited();
  state.records = records.size();
  state.head_hash = records.empty() ? log::kGenesisHash : records.back().hash;
  state.balance_digest =
      balances_digest(state.balances, state.burned, state.deposited);
  return state;
}

CheckEqParams check_eq_params_from_config(const FlatConfig& flat) {
  CheckEqParams params;
  params.priors = flat.get_double_list("checkeq.pe");
  if (params.priors.empty())
    for (int i = 1; i <= 9; ++i) params.priors.push_back(double(i) / 10.0);
  params.solver_bonds = flat.get_amount_list("checkeq.bs");
  if (params.solver_bonds.empty())
    for (Amount b = 1; b <= 40; ++b) params.solver_bonds.push_back(b);
  params.falsification_cost = flat.get_int("checkeq.f", 2);
  params.challenger_bond = flat.get_int("checkeq.bc", 0);
  params.beta = flat.get_double("checkeq.beta", 1.0);
  params.cheat_gain = flat.get_int("checkeq.gain", 3);
  params.task_fee = flat.get_int("checkeq.fee", 1);
  auto roles = flat.get_list("checkeq.roles");
  if (!roles.empty()) {
    params.roles.clear();
    for (const auto& role : roles) {
      if (role == "solver") params.roles.push_back(agents::Role::Solver);
      else if (role == "challenger")
        params.roles.push_back(agents::Role::Challenger);
      else if (role == "verifier") params.roles.push_back(agents::Role::Verifier);
      else fail(ErrorCode::InvalidConfig, "checkeq.roles: unknown role " + role);
    }
  }
  return params;
}

std::vector<CheckEqRow> check_equilibrium(const CheckEqParams& params) {
  std::vector<CheckEqRow> rows;
  for (double prior : params.priors) {
    for (Amount bond : params.solver_bonds) {
      for (agents::Role role : params.roles) {
        agents::DeviationParams inputs;
        inputs.solver_bond = bond;
        inputs.challenger_bond = params.challenger_bond;
        inputs.detection_cost = params.falsification_cost;
        inputs.error_prior = prior;
        inputs.beta = params.beta;
        inputs.cheat_gain = params.cheat_gain;
        inputs.task_fee = params.task_fee;
        inputs.verifier_exposure = bond;
        inputs.next_falsification_cost = params.falsification_cost;
        inputs.next_error_prior = prior;
        agents::DeviationReport report = agents::deviation_test(role, inputs);

        CheckEqRow row;
        row.error_prior = prior;
        row.solver_bond = bond;
        row.role = role;
        row.honest_payoff = report.honest_payoff;
        row.deviating_payoff = report.deviating_payoff;
        row.equilibrium = report.equilibrium;
        row.challenger_ev =
            econ::challenger_ev(prior, bond, params.falsification_cost,
                                params.challenger_bond, params.beta);
        row.falsification_holds =
            econ::falsification_holds(
                {bond, params.falsification_cost, prior})
                .holds;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string metrics_csv_header() {
  return "seed,tasks_requested,tasks_started,tasks_finalized,stood_correct,"
         "stood_incorrect,overturned_correct,overturned_incorrect,"
         "incorrect_finalized_rate,correct_overturned_rate,challenges_issued,"
         "challenges_won,cheat_episodes,mean_solver_loss_on_cheat,"
         "investigations,mean_challenger_profit,max_recursion_reached,"
         "escalations,total_burned,total_deposited,payoff_solvers,"
         "payoff_challengers,payoff_verifiers,payoff_originator,"
         "subsidy_spent,log_records,balance_digest";
}

std::string metrics_csv_row(std::uint64_t seed, const RunMetrics& m) {
  std::string out;
  out += std::to_string(seed);
  out += "," + std::to_string(m.tasks_requested);
  out += "," + std::to_string(m.tasks_started);
  out += "," + std::to_string(m.tasks_finalized);
  out += "," + std::to_string(m.stood_correct);
  out += "," + std::to_string(m.stood_incorrect);
  out += "," + std::to_string(m.overturned_correct);
  out += "," + std::to_string(m.overturned_incorrect);
  out += "," + format_double(m.incorrect_finalized_rate);
  out += "," + format_double(m.correct_overturned_rate);
  out += "," + std::to_string(m.challenges_issued);
  out += "," + std::to_string(m.challenges_won);
  out += "," + std::to_string(m.cheat_episodes);
  out += "," + format_double(m.mean_solver_loss_on_cheat);
  out += "," + std::to_string(m.investigations);
  out += "," + format_double(m.mean_challenger_profit);
  out += "," + std::to_string(m.max_recursion_reached);
  out += "," + std::to_string(m.escalations);
  out += "," + std::to_string(m.total_burned);
  out += "," + std::to_string(m.total_deposited);
  out += "," + format_double(m.payoff_solvers);
  out += "," + format_double(m.payoff_challengers);
  out += "," + format_double(m.payoff_verifiers);
  out += "," + format_double(m.payoff_originator);
  out += "," + format_double(m.subsidy_spent);
  out += "," + std::to_string(m.log_records);
  out += "," + m.balance_digest;
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "cell,";
  std::vector<std::string> param_keys;
  if (!rows.empty())
    for (const auto& [key, value] : rows.front().params)
      param_keys.push_back(key);
  for (const auto& key : param_keys) out += key + ",";
  out += metrics_csv_header();
  out += ",solver_honest_payoff,solver_deviating_payoff,solver_equilibrium\n";
  for (const auto& row : rows) {
    out += std::to_string(row.cell) + ",";
    for (const auto& key : param_keys) out += row.params.at(key) + ",";
    out += metrics_csv_row(row.seed, row.metrics);
    out += "," + format_double(row.solver_deviation.honest_payoff);
    out += "," + format_double(row.solver_deviation.deviating_payoff);
    out += row.solver_deviation.equilibrium ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::string check_eq_csv(const std::vector<CheckEqRow>& rows) {
  std::string out =
      "pe,solver_bond,role,honest_payoff,deviating_payoff,equilibrium,"
      "challenger_ev,falsification_holds\n";
  for (const auto& row : rows) {
    const char* role = row.role == agents::Role::Solver ? "solver"
                       : row.role == agents::Role::Challenger ? "challenger"
                                                              : "verifier";
    out += format_double(row.error_prior);
    out += "," + std::to_string(row.solver_bond);
    out += ",";
    out += role;
    out += "," + format_double(row.honest_payoff);
    out += "," + format_double(row.deviating_payoff);
    out += row.equilibrium ? ",1" : ",0";
    out += "," + format_double(row.challenger_ev);
    out += row.falsification_holds ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::string balances_digest(const std::map<AgentId, Amount>& balances,
                            Amount burned, Amount deposited) {
  nlohmann::json j;
  nlohmann::json accounts = nlohmann::json::object();
  for (const auto& [agent, amount] : balances) accounts[agent] = amount;
  j["accounts"] = accounts;
  j["burned"] = burned;
  j["deposited"] = deposited;
  return hash::sha256_hex(j.dump());
}

}  // namespace verigame::sim
