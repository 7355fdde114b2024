#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "verigame/agents.hpp"
#include "verigame/economics.hpp"
#include "verigame/protocol.hpp"
#include "verigame/sim.hpp"

namespace py = pybind11;
using namespace verigame;

namespace {

py::dict metrics_to_dict(const sim::RunMetrics& m) {
  py::dict d;
  d["tasks_requested"] = m.tasks_requested;
  d["tasks_started"] = m.tasks_started;
  d["tasks_finalized"] = m.tasks_finalized;
  d["stood_correct"] = m.stood_correct;
  d["stood_incorrect"] = m.stood_incorrect;
  d["overturned_correct"] = m.overturned_correct;
  d["overturned_incorrect"] = m.overturned_incorrect;
  d["incorrect_finalized_rate"] = m.incorrect_finalized_rate;
  d["correct_overturned_rate"] = m.correct_overturned_rate;
  d["challenges_issued"] = m.challenges_issued;
  d["challenges_won"] = m.challenges_won;
  d["cheat_episodes"] = m.cheat_episodes;
  d["mean_solver_loss_on_cheat"] = m.mean_solver_loss_on_cheat;
  d["investigations"] = m.investigations;
  d["mean_challenger_profit"] = m.mean_challenger_profit;
  d["max_recursion_reached"] = m.max_recursion_reached;
  d["escalations"] = m.escalations;
  d["total_burned"] = m.total_burned;
  d["total_deposited"] = m.total_deposited;
  d["payoff_solvers"] = m.payoff_solvers;
  d["payoff_challengers"] = m.payoff_challengers;
  d["payoff_verifiers"] = m.payoff_verifiers;
  d["payoff_originator"] = m.payoff_originator;
  d["subsidy_spent"] = m.subsidy_spent;
  d["balance_digest"] = m.balance_digest;
  d["log_records"] = m.log_records;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "collateralized verification game: protocol engine, economics, "
            "and deterministic simulator";

  py::register_exception<Error>(m, "ProtocolError");

  // --- economics ----------------------------------------------------------
  m.def(
      "falsification_holds",
      [](Amount bond, Amount cost, double pe) {
        auto check = econ::falsification_holds({bond, cost, pe});
        return py::make_tuple(check.holds, check.unfalsifiable);
      },
      py::arg("bond"), py::arg("falsification_cost"),
      py::arg("error_probability"),
      "Exact bond-vs-cost test; returns (holds, unfalsifiable).");
  m.def("expected_loss_incorrect", &econ::expected_loss_incorrect,
        py::arg("error_probability"), py::arg("solver_bond"));
  m.def("challenger_ev", &econ::challenger_ev, py::arg("error_probability"),
        py::arg("solver_bond"), py::arg("falsification_cost"),
        py::arg("challenger_bond") = 0, py::arg("beta") = 1.0);
  m.def("challenger_ev_positive", &econ::challenger_ev_positive,
        py::arg("error_probability"), py::arg("solver_bond"),
        py::arg("falsification_cost"), py::arg("challenger_bond") = 0,
        py::arg("beta") = 1.0);
  m.def(
      "verifier_condition_holds",
      [](Amount bond, Amount cost, double pe) {
        auto check = econ::verifier_condition_holds(bond, cost, pe);
        return py::make_tuple(check.holds, check.unfalsifiable);
      },
      py::arg("verifier_bond"), py::arg("falsification_cost"),
      py::arg("error_probability"));
  m.def(
      "recursive_viability",
      [](int horizon, double discount, double cost_growth, Amount base_cost,
         const std::vector<std::pair<double, Amount>>& per_depth) {
        econ::RecursionSchedule schedule;
        schedule.horizon = horizon;
        schedule.discount = discount;
        schedule.cost_growth = cost_growth;
        schedule.base_cost = base_cost;
        for (const auto& [pe, bond] : per_depth)
          schedule.per_depth.push_back({pe, bond});
        auto result = econ::recursive_viability(schedule);
        return py::make_tuple(result.value, result.viable);
      },
      py::arg("horizon"), py::arg("discount"), py::arg("cost_growth"),
      py::arg("base_cost"), py::arg("per_depth"),
      "Discounted sum of per-depth surfacing value; returns (value, viable).");
  m.def(
      "challenger_bond_from_solver",
      [](Amount solver_bond, double multiplier) {
        econ::BondSizingPolicy policy;
        policy.challenger_multiplier = multiplier;
        return econ::challenger_bond_from_solver(solver_bond, policy);
      },
      py::arg("solver_bond"), py::arg("multiplier"));
  m.def(
      "verifier_exposure",
      [](Amount stake, int depth, Amount floor, double fraction, double growth) {
        econ::BondSizingPolicy policy;
        policy.verifier_floor = floor;
        policy.verifier_fraction = fraction;
        policy.depth_share_growth = growth;
        return econ::verifier_exposure(stake, depth, policy);
      },
      py::arg("stake"), py::arg("depth"), py::arg("floor") = 1,
      py::arg("fraction") = 0.1, py::arg("growth") = 1.0);
  m.def(
      "min_solver_bond",
      [](Amount cost, double pe, double margin) -> py::object {
        auto bond = econ::min_solver_bond(cost, pe, margin);
        if (!bond) return py::none();
        return py::int_(*bond);
      },
      py::arg("falsification_cost"), py::arg("error_probability"),
      py::arg("margin") = 0.0,
      "Smallest bond satisfying the falsification condition; None when "
      "unfalsifiable.");

  // --- agents ---------------------------------------------------------------
  py::enum_<agents::Role>(m, "Role")
      .value("Solver", agents::Role::Solver)
      .value("Challenger", agents::Role::Challenger)
      .value("Verifier", agents::Role::Verifier);

  m.def(
      "deviation_test",
      [](agents::Role role, Amount solver_bond, Amount challenger_bond,
         Amount detection_cost, double error_prior, double beta,
         Amount cheat_gain, Amount task_fee, Amount verifier_exposure,
         Amount next_falsification_cost, double next_error_prior) {
        agents::DeviationParams params;
        params.solver_bond = solver_bond;
        params.challenger_bond = challenger_bond;
        params.detection_cost = detection_cost;
        params.error_prior = error_prior;
        params.beta = beta;
        params.cheat_gain = cheat_gain;
        params.task_fee = task_fee;
        params.verifier_exposure = verifier_exposure;
        params.next_falsification_cost = next_falsification_cost;
        params.next_error_prior = next_error_prior;
        auto report = agents::deviation_test(role, params);
        return py::make_tuple(report.honest_payoff, report.deviating_payoff,
                              report.equilibrium);
      },
      py::arg("role"), py::arg("solver_bond"), py::arg("challenger_bond") = 0,
      py::arg("detection_cost") = 0, py::arg("error_prior") = 0.0,
      py::arg("beta") = 1.0, py::arg("cheat_gain") = 0, py::arg("task_fee") = 0,
      py::arg("verifier_exposure") = 0, py::arg("next_falsification_cost") = 0,
      py::arg("next_error_prior") = 0.0,
      "Analytic honest-vs-deviation payoffs; returns (honest, deviating, "
      "equilibrium).");

  // --- protocol engine -------------------------------------------------------
  py::enum_<protocol::Phase>(m, "Phase")
      .value("IntentPublished", protocol::Phase::IntentPublished)
      .value("SolverSelected", protocol::Phase::SolverSelected)
      .value("ChallengeWindowOpen", protocol::Phase::ChallengeWindowOpen)
      .value("UnderVerification", protocol::Phase::UnderVerification)
      .value("RulingWindowOpen", protocol::Phase::RulingWindowOpen)
      .value("Finalized", protocol::Phase::Finalized)
      .value("Escalated", protocol::Phase::Escalated);

  py::enum_<protocol::Outcome>(m, "Outcome")
      .value("ResultStands", protocol::Outcome::ResultStands)
      .value("ResultOverturned", protocol::Outcome::ResultOverturned);

  py::enum_<protocol::Verdict>(m, "Verdict")
      .value("UpholdTarget", protocol::Verdict::UpholdTarget)
      .value("OverturnTarget", protocol::Verdict::OverturnTarget);

  m.def("result_commitment", &protocol::result_commitment, py::arg("output"),
        py::arg("evidence"));
  m.def("verdict_commitment", &protocol::verdict_commitment,
        py::arg("verdict"), py::arg("salt"));
  m.def("content_hash", &protocol::content_hash, py::arg("data"));

  py::class_<protocol::Engine>(m, "Engine")
      .def(py::init([](double beta, double challenger_multiplier,
                       Amount verifier_floor, double verifier_fraction,
                       double depth_share_growth) {
             protocol::EngineOptions options;
             options.beta = beta;
             options.sizing.challenger_multiplier = challenger_multiplier;
             options.sizing.verifier_floor = verifier_floor;
             options.sizing.verifier_fraction = verifier_fraction;
             options.sizing.depth_share_growth = depth_share_growth;
             return protocol::Engine(options);
           }),
           py::arg("beta") = 0.5, py::arg("challenger_multiplier") = 0.5,
           py::arg("verifier_floor") = 1, py::arg("verifier_fraction") = 0.1,
           py::arg("depth_share_growth") = 1.0)
      .def("deposit", &protocol::Engine::deposit, py::arg("agent"),
           py::arg("amount"), py::arg("now"))
      .def("register_verifier", &protocol::Engine::register_verifier,
           py::arg("agent"), py::arg("stake"))
      .def(
          "publish_intent",
          [](protocol::Engine& engine, const ProcessId& task_id,
             const AgentId& originator, Amount task_fee, Amount solver_bond,
             const std::string& intent, const std::string& data_payload,
             Tick challenge_window, Tick ruling_window, Tick commit_window,
             Tick reveal_window, int quorum_size, int max_depth,
             const std::string& selection, const std::string& escalation_target,
             Tick now) {
            protocol::TaskSpec spec;
            spec.task_id = task_id;
            spec.originator = originator;
            spec.task_fee = task_fee;
            spec.required_solver_bond = solver_bond;
            spec.intent = intent;
            spec.data_payload = data_payload;
            spec.constraints.challenge_window = challenge_window;
            spec.constraints.ruling_challenge_window = ruling_window;
            spec.constraints.commit_window = commit_window;
            spec.constraints.reveal_window = reveal_window;
            spec.constraints.quorum_size = quorum_size;
            spec.constraints.max_recursion_depth = max_depth;
            spec.constraints.solver_selection_policy =
                selection == "first" ? protocol::SelectionPolicy::FirstQualified
                                     : protocol::SelectionPolicy::UniformRandom;
            if (!escalation_target.empty())
              spec.constraints.escalation_target = escalation_target;
            return engine.publish_intent(spec, now);
          },
          py::arg("task_id"), py::arg("originator"), py::arg("task_fee"),
          py::arg("solver_bond"), py::arg("intent") = "",
          py::arg("data_payload") = "", py::arg("challenge_window") = 3,
          py::arg("ruling_window") = 3, py::arg("commit_window") = 2,
          py::arg("reveal_window") = 2, py::arg("quorum_size") = 3,
          py::arg("max_depth") = 3, py::arg("selection") = "uniform",
          py::arg("escalation_target") = "", py::arg("now") = 0)
      .def("register_commitment", &protocol::Engine::register_commitment,
           py::arg("task_id"), py::arg("agent"), py::arg("bond"), py::arg("now"))
      .def("select_solver", &protocol::Engine::select_solver, py::arg("task_id"),
           py::arg("seed"), py::arg("now"))
      .def(
          "submit_result",
          [](protocol::Engine& engine, const ProcessId& pid,
             const AgentId& solver, const std::string& output,
             const std::string& evidence, Tick now) {
            const auto& record =
                engine.submit_result(pid, solver, output, evidence, now);
            return py::make_tuple(record.commitment, record.submitted_at);
          },
          py::arg("task_id"), py::arg("solver"), py::arg("output"),
          py::arg("evidence"), py::arg("now"))
      .def("advance_time", &protocol::Engine::advance_time, py::arg("task_id"),
           py::arg("now"))
      .def(
          "open_challenge",
          [](protocol::Engine& engine, const ProcessId& pid,
             const AgentId& challenger, const std::string& evidence,
             Amount bond, Tick now) {
            const auto& dispute =
                engine.open_challenge(pid, challenger, evidence, bond, now);
            return py::make_tuple(dispute.dispute_id, dispute.depth);
          },
          py::arg("task_id"), py::arg("challenger"), py::arg("evidence"),
          py::arg("bond"), py::arg("now"))
      .def("select_verifiers", &protocol::Engine::select_verifiers,
           py::arg("task_id"), py::arg("seed"), py::arg("now"))
      .def("commit_verdict", &protocol::Engine::commit_verdict,
           py::arg("task_id"), py::arg("verifier"), py::arg("commitment"),
           py::arg("now"))
      .def("reveal_verdict", &protocol::Engine::reveal_verdict,
           py::arg("task_id"), py::arg("verifier"), py::arg("verdict"),
           py::arg("salt"), py::arg("now"))
      .def(
          "issue_ruling",
          [](protocol::Engine& engine, const ProcessId& pid, Tick now)
              -> py::object {
            auto ruling = engine.issue_ruling(pid, now);
            if (!ruling) return py::none();
            return py::make_tuple(ruling->verdict, ruling->quorum);
          },
          py::arg("task_id"), py::arg("now"))
      .def(
          "escalate",
          [](protocol::Engine& engine, const ProcessId& pid, Tick now) {
            const auto& record = engine.escalate(pid, now);
            return py::make_tuple(record.target, record.cause);
          },
          py::arg("task_id"), py::arg("now"))
      .def("evaluate_chain", &protocol::Engine::evaluate_chain,
           py::arg("task_id"))
      .def(
          "settle",
          [](protocol::Engine& engine, const ProcessId& pid, Tick now) {
            return engine.settle(pid, now).size();
          },
          py::arg("task_id"), py::arg("now"))
      .def(
          "phase",
          [](const protocol::Engine& engine, const ProcessId& pid) {
            return engine.process(pid).state.phase;
          },
          py::arg("task_id"))
      .def(
          "outcome",
          [](const protocol::Engine& engine, const ProcessId& pid)
              -> py::object {
            const auto& state = engine.process(pid).state;
            if (!state.outcome) return py::none();
            return py::cast(*state.outcome);
          },
          py::arg("task_id"))
      .def("required_challenger_bond",
           &protocol::Engine::required_challenger_bond, py::arg("task_id"))
      .def(
          "free_balance",
          [](const protocol::Engine& engine, const AgentId& agent) {
            return engine.ledger().free_balance(agent);
          },
          py::arg("agent"))
      .def("total_burned",
           [](const protocol::Engine& engine) {
             return engine.ledger().total_burned();
           })
      .def("conservation_holds",
           [](const protocol::Engine& engine) {
             return engine.ledger().conservation_holds();
           })
      .def("log_lines", [](const protocol::Engine& engine) {
        return engine.event_log().lines();
      });

  // --- simulator -------------------------------------------------------------
  m.def(
      "run_scenario",
      [](const std::string& config_text) {
        sim::ScenarioConfig config = sim::ScenarioConfig::parse(config_text);
        sim::RunResult result = sim::run(config);
        py::dict d;
        d["metrics"] = metrics_to_dict(result.metrics);
        d["log_lines"] = result.log_lines;
        d["final_balances"] = result.final_balances;
        d["final_burned"] = result.final_burned;
        return d;
      },
      py::arg("config_text"),
      "Parse a flat-key scenario config and run it deterministically.");
  m.def(
      "monte_carlo_ev",
      [](agents::Role role, double error_probability, Amount solver_bond,
         Amount falsification_cost, Amount challenger_bond, double beta,
         int trials, std::uint64_t seed) {
        sim::MonteCarloParams params{error_probability, solver_bond,
                                     falsification_cost, challenger_bond, beta};
        auto result = sim::monte_carlo_ev(role, params, trials, seed);
        return py::make_tuple(result.mean, result.std_error);
      },
      py::arg("role"), py::arg("error_probability"), py::arg("solver_bond"),
      py::arg("falsification_cost"), py::arg("challenger_bond") = 0,
      py::arg("beta") = 1.0, py::arg("trials") = 100000, py::arg("seed") = 1,
      "Sample mean and standard error of single-episode realized payoffs.");
  m.def(
      "replay",
      [](const std::vector<std::string>& lines) {
        sim::ReplayState state = sim::replay(lines);
        py::dict d;
        d["balances"] = state.balances;
        d["burned"] = state.burned;
        d["deposited"] = state.deposited;
        d["final_phases"] = state.final_phases;
        d["records"] = state.records;
        d["head_hash"] = state.head_hash;
        d["balance_digest"] = state.balance_digest;
        return d;
      },
      py::arg("lines"),
      "Verify the hash chain and rebuild balances and outcomes from a log.");

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
